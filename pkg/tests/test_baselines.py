import numpy as np
import pytest

from funplex import build_standard_form
from funplex.algorithm import build_budgeted_lp
from funplex.baselines import (
    MgaResult,
    RandomDirectionsConfig,
    SporesConfig,
    run_random_directions,
    run_spores,
    sample_random_objective,
    spores_objective,
    spores_weight_init,
    spores_weight_update,
)


@pytest.fixture
def two_tech_budgeted():
    """Two capacity variables with a demand floor; budget keeps a band feasible."""
    rows = [
        ([1.0, 0.0], "<=", 2.0),
        ([0.0, 1.0], "<=", 2.0),
        ([1.0, 1.0], ">=", 1.0),
    ]
    lp = build_standard_form(rows, [1.0, 2.0], interest_columns=[0, 1])
    return build_budgeted_lp(lp, 0.5)


def two_tech_config(**kwargs):
    defaults = dict(capacity_columns={"alpha": (0,), "beta": (1,)}, gamma=0.1, r0=0.5)
    defaults.update(kwargs)
    return SporesConfig(**defaults)


# -- weight recursion ----------------------------------------------------------


def test_weight_init_threshold():
    cfg = two_tech_config(gamma=0.1)
    w = spores_weight_init([0.15, 0.05], cfg)
    np.testing.assert_allclose(w.w, [0.5, 0.0])


def test_weight_init_paper_parameter_values():
    # capacities 150 and 50 kW against a 100 kW threshold, in MW units
    cfg = two_tech_config(gamma=0.1, r0=0.5)
    w = spores_weight_init([0.150, 0.050], cfg)
    np.testing.assert_allclose(w.w, [0.5, 0.0])


def test_weight_init_all_zero_capacities():
    w = spores_weight_init([0.0, 0.0], two_tech_config())
    np.testing.assert_allclose(w.w, [0.0, 0.0])


def test_weight_init_degenerate_gamma_zero():
    w = spores_weight_init([0.3, 0.0], two_tech_config(gamma=0.0))
    np.testing.assert_allclose(w.w, [0.5, 0.0])


def test_weight_update_arithmetic():
    cfg = two_tech_config(gamma=0.1, r0=0.5)
    w = spores_weight_init([0.15, 0.05], cfg)
    w2 = spores_weight_update(w, [0.15, 0.15], cfg)
    np.testing.assert_allclose(w2.w, [1.0, 0.5])
    assert w2.iteration == 1


def test_weight_update_below_threshold_is_identity():
    cfg = two_tech_config()
    w = spores_weight_init([0.5, 0.5], cfg)
    w2 = spores_weight_update(w, [0.05, 0.0], cfg)
    np.testing.assert_allclose(w2.w, w.w)


def test_weights_are_multiples_of_r0_and_nondecreasing(rng):
    cfg = two_tech_config(r0=0.5)
    w = spores_weight_init(rng.uniform(0, 1, 2), cfg)
    for _ in range(10):
        w2 = spores_weight_update(w, rng.uniform(0, 1, 2), cfg)
        assert (w2.w >= w.w - 1e-15).all()
        np.testing.assert_allclose(w2.w / cfg.r0, np.round(w2.w / cfg.r0), atol=1e-12)
        w = w2


# -- objective assembly ----------------------------------------------------------


def test_spores_objective_pure_minimization():
    cfg = two_tech_config()
    w = spores_weight_init([0.0, 0.0], cfg)
    c = spores_objective(w, "alpha", 1.0, 0.0, cfg, 4)
    np.testing.assert_allclose(c, [1.0, 0.0, 0.0, 0.0])


def test_spores_objective_pure_maximization_first_iteration():
    cfg = two_tech_config()
    w = spores_weight_init([0.0, 0.0], cfg)
    c = spores_objective(w, "alpha", -100.0, 1.0, cfg, 4)
    np.testing.assert_allclose(c, [-100.0, 0.0, 0.0, 0.0])


def test_spores_objective_two_term_sum():
    cfg = two_tech_config()
    w = spores_weight_init([0.0, 0.5], cfg)  # only beta weighted
    c = spores_objective(w, "alpha", 1.0, 1.0, cfg, 4)
    np.testing.assert_allclose(c, [1.0, 0.5, 0.0, 0.0])


# -- sequence running -------------------------------------------------------------


def test_run_spores_vertices_are_budget_feasible(two_tech_budgeted):
    cfg = two_tech_config(n_max=3)
    result = run_spores(two_tech_budgeted, cfg)
    assert isinstance(result, MgaResult)
    assert result.n_solves == len(result.per_run_pivots)
    limit = two_tech_budgeted.budget_limit
    for cost in result.store.costs:
        assert cost <= limit + 1e-7
    assert all(t == "optimal" for t in result.store.tags)


def test_run_spores_fixed_point_stops_sequence(two_tech_budgeted):
    # minimizing one tech pins the same vertex every iteration, so each
    # sequence should stop after detecting two identical consecutive solutions
    cfg = two_tech_config(n_max=50, ab_pairs=((1.0, 1.0),))
    result = run_spores(two_tech_budgeted, cfg)
    # 2 sequences (one per tech); each needs at most a few solves, never 50
    assert result.n_solves <= 10


def test_run_spores_total_budget_distribution(two_tech_budgeted):
    cfg = two_tech_config(n_max=50)
    result = run_spores(two_tech_budgeted, cfg, total_objectives=13)
    # 6 ab_pairs x 2 techs = 12 sequences; budget 13 gives one sequence 2 solves,
    # fixed points may stop sequences earlier but never extend them
    assert result.n_solves <= 13


def test_sample_random_objective_ranges_and_determinism():
    rng = np.random.default_rng(4)
    for _ in range(50):
        c, sense = sample_random_objective(rng, "symmetric", (0, 2), 4)
        assert sense in ("min", "max")
        assert np.all(c[[0, 2]] >= -1.0) and np.all(c[[0, 2]] <= 1.0)
        assert c[1] == 0.0 and c[3] == 0.0
    rng = np.random.default_rng(4)
    for _ in range(10):
        c, sense = sample_random_objective(rng, "positive", (0, 2), 4)
        assert np.all(c[[0, 2]] >= 0.0)
        assert sense == "min"  # the restricted variant never maximizes

    a = [sample_random_objective(np.random.default_rng(7), "symmetric", (0, 1), 2)
         for _ in range(1)]
    b = [sample_random_objective(np.random.default_rng(7), "symmetric", (0, 1), 2)
         for _ in range(1)]
    np.testing.assert_array_equal(a[0][0], b[0][0])
    assert a[0][1] == b[0][1]


def test_run_random_directions_single_objective(two_tech_budgeted):
    cfg = RandomDirectionsConfig(n_objectives=1, seed=3)
    result = run_random_directions(two_tech_budgeted, cfg)
    assert result.n_solves == 1
    assert len(result.store) == 1
    assert result.total_phase2_pivots == result.per_run_pivots[0]


def test_run_random_directions_reproducible(two_tech_budgeted):
    cfg = RandomDirectionsConfig(n_objectives=25, seed=11)
    a = run_random_directions(two_tech_budgeted, cfg)
    b = run_random_directions(two_tech_budgeted, cfg)
    assert a.total_phase2_pivots == b.total_phase2_pivots
    np.testing.assert_array_equal(a.store.points, b.store.points)


def test_run_random_directions_budget_feasible(two_tech_budgeted):
    cfg = RandomDirectionsConfig(n_objectives=40, seed=2)
    result = run_random_directions(two_tech_budgeted, cfg)
    limit = two_tech_budgeted.budget_limit
    for cost in result.store.costs:
        assert cost <= limit + 1e-7
