"""Near-optimal LP space exploration toolkit.

A multi-objective simplex explorer (Funplex) plus the SPORES and Random
Directions baselines, an energy-hub benchmark model, geometric quality
metrics, and a seeded experiment runner.
"""

__version__ = "0.1.0"

from .lp import (  # noqa: F401
    CyclingError,
    InfeasibleError,
    LpError,
    SingularBasisError,
    StandardFormLP,
    UnboundedError,
    build_standard_form,
    parse_lp_text,
    read_lp,
    write_lp,
)
from .simplex import (  # noqa: F401
    Basis,
    SimplexTableau,
    SolveResult,
    build_tableau,
    constraint_duals,
    phase_one,
    solve,
)
from .algorithm import (  # noqa: F401
    BudgetedLP,
    Direction,
    DirectionSet,
    ExplorationResult,
    ExplorerOptions,
    MultiObjectiveTableau,
    VertexStore,
    angle_distance,
    build_budgeted_lp,
    characteristic_scales,
    explore,
    generate_direction_set,
    make_objective,
    run_funplex,
    sample_hypersphere,
    select_next_objective,
)
from .baselines import (  # noqa: F401
    MgaResult,
    RandomDirectionsConfig,
    SporesConfig,
    run_random_directions,
    run_spores,
)
from .hub import (  # noqa: F401
    HubConfig,
    HubModel,
    build_hub_lp,
    expand_pv_sites,
    generate_profiles,
    hub_presets,
)
from .metrics import (  # noqa: F401
    HullVolumeResult,
    PointCloud,
    ProjectionOutline,
    efficiency_gain,
    hull_volume,
    normalized_volumes,
    planar_reference,
    projection_outline,
    scaling_slope,
    volume_gain,
)
from .bench import (  # noqa: F401
    ExperimentConfig,
    RunRecord,
    emit_tables,
    run_experiment,
    run_sweep,
)
