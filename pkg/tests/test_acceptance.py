"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines. Heavy artifacts (the base-preset benchmark triple) are computed once
per session and shared across criteria.
"""

import numpy as np
import pytest
import scipy.stats

from funplex import build_standard_form, solve
from funplex.algorithm import (
    Direction,
    DirectionSet,
    MODE_PRESETS,
    build_budgeted_lp,
    characteristic_scales,
    explore,
    generate_direction_set,
    make_objective,
)
from funplex.baselines import (
    RandomDirectionsConfig,
    SporesConfig,
    run_random_directions,
    run_spores,
)
from funplex.bench import ExperimentConfig, run_experiment, stream_rng
from funplex.hub import HubConfig, build_hub_lp, pv_noise_factors
from funplex.metrics import hull_volume, planar_reference, projection_outline, scaling_slope

from _oracles import brute_force_solve, random_feasible_lp

MASTER_SEED = 13
BASE_NK = 200
EPSILON = 0.05
SCALE_FALLBACK = 1000.0


def report(criterion: int, message: str) -> None:
    print(f"[criterion {criterion:02d}] PASS - {message}")


@pytest.fixture(scope="module")
def hub_setup():
    model = build_hub_lp(HubConfig())
    budgeted = build_budgeted_lp(model.lp, EPSILON)
    scales = characteristic_scales(model.lp, budgeted.cost_vertex[: model.lp.n],
                                   SCALE_FALLBACK)
    return model, budgeted, scales


def hub_directions(nk, scales, interest):
    return generate_direction_set(nk, scales, interest,
                                  rng=stream_rng(MASTER_SEED, "funplex"))


@pytest.fixture(scope="module")
def base_runs(hub_setup):
    """Funplex, SPORES, and Random Directions on the base preset, full vertices kept."""
    model, budgeted, scales = hub_setup
    lp = model.lp
    dedupe = 1e-6 * float(scales.max())
    dset = hub_directions(BASE_NK, scales, lp.interest_columns)
    funplex = explore(budgeted, dset, dedupe_tol=dedupe, keep_full_vertices=True)
    spores = run_spores(
        budgeted,
        SporesConfig(capacity_columns=model.spores_capacity_map()),
        total_objectives=BASE_NK,
        dedupe_tol=dedupe,
        keep_full_vertices=True,
    )
    rand = run_random_directions(
        budgeted,
        RandomDirectionsConfig(BASE_NK),
        rng=stream_rng(MASTER_SEED, "random_directions"),
        dedupe_tol=dedupe,
        keep_full_vertices=True,
    )
    return dict(model=model, budgeted=budgeted, scales=scales, dedupe=dedupe,
                funplex=funplex, spores=spores, random_directions=rand)


def scaled_volume(points, scales):
    return hull_volume(np.asarray(points) / scales).volume


# -- 1. solver oracle equivalence ------------------------------------------------


def test_criterion_01_solver_oracle_equivalence():
    rng = np.random.default_rng(20240815)
    failures = 0
    for _ in range(500):
        lp = random_feasible_lp(rng)
        want_status, want_obj, _ = brute_force_solve(lp)
        got = solve(lp)
        if got.status != want_status:
            failures += 1
        elif want_status == "optimal" and abs(got.objective_value - want_obj) > 1e-8 * (
            1 + abs(want_obj)
        ):
            failures += 1
    assert failures == 0
    report(1, "500/500 random LPs match brute-force basis enumeration within 1e-8")


# -- 2. funplex correctness -------------------------------------------------------


def test_criterion_02_first_flip_vertices_are_objective_optima(base_runs):
    budgeted = base_runs["budgeted"]
    result = base_runs["funplex"]
    dset = result.direction_set
    worst = 0.0
    for k in range(len(dset)):
        c = make_objective(dset.directions[k], dset, budgeted.lp.n)
        res = budgeted.solve_objective(c)
        assert res.status == "optimal"
        recorded = result.first_optimal_value[k]
        err = abs(recorded - res.objective_value) / max(1.0, abs(res.objective_value))
        worst = max(worst, err)
        assert err <= 1e-7
    report(2, f"all {len(dset)} recorded optima match re-solves, worst rel err {worst:.2e}")


# -- 3. toy exactness --------------------------------------------------------------


def test_criterion_03_toy_box_hull_matches_planar_reference():
    rows = [
        ([1.0, 0.0], "<=", 1.0),
        ([0.0, 1.0], "<=", 1.0),
        ([1.0, 1.0], ">=", 0.5),
    ]
    lp = build_standard_form(rows, [1.0, 1.0], interest_columns=[0, 1])
    budgeted = build_budgeted_lp(lp, EPSILON)
    # 8 evenly spaced objectives, offset so none ties along a polygon edge
    angles = [np.pi / 8 + 2 * np.pi * k / 8 for k in range(8)]
    dset = DirectionSet(
        [Direction(np.array([np.cos(a), np.sin(a)])) for a in angles],
        np.ones(2), (0, 1),
    )
    result = explore(budgeted, dset)
    area = projection_outline(result.store.points, (0, 1)).area
    reference = planar_reference(budgeted, (0, 1), n_directions=720).area
    exact = (0.525**2 - 0.5**2) / 2.0  # hand-computed band polygon area
    assert reference == pytest.approx(exact, rel=1e-9)
    assert area >= 0.99 * reference
    report(3, f"toy hull area {area:.8f} >= 0.99 x planar reference {reference:.8f}")


# -- 4. efficiency reproduction -----------------------------------------------------


def test_criterion_04_pivot_efficiency(base_runs):
    fx = base_runs["funplex"].total_phase2_pivots
    sp = base_runs["spores"].total_phase2_pivots
    rd = base_runs["random_directions"].total_phase2_pivots
    assert fx <= 0.5 * sp
    assert fx <= 0.5 * rd
    report(4, f"funplex {fx} pivots vs spores {sp} (gain {sp / fx:.2f}) "
              f"and random-directions {rd} (gain {rd / fx:.2f})")


# -- 5. quality reproduction --------------------------------------------------------


def test_criterion_05_volume_quality(base_runs):
    scales = base_runs["scales"]
    vols = {
        name: scaled_volume(base_runs[name].store.points, scales)
        for name in ("funplex", "spores", "random_directions")
    }
    assert vols["funplex"] >= 1.05 * vols["spores"]
    assert vols["funplex"] >= 1.05 * vols["random_directions"]
    report(5, "volume gains: spores {:.2f}, random-directions {:.2f}".format(
        vols["funplex"] / vols["spores"], vols["funplex"] / vols["random_directions"]))


# -- 6. ablation orderings ----------------------------------------------------------


def test_criterion_06_ablation_orderings(base_runs):
    budgeted = base_runs["budgeted"]
    scales = base_runs["scales"]
    dedupe = base_runs["dedupe"]
    full = base_runs["funplex"]
    dset = full.direction_set
    no_inter = explore(budgeted, dset, MODE_PRESETS["no-intermediaries"], dedupe_tol=dedupe)
    warm_only = explore(budgeted, dset, MODE_PRESETS["warm-start-only"], dedupe_tol=dedupe)

    v_full = scaled_volume(full.store.points, scales)
    v_bare = scaled_volume(no_inter.store.points, scales)
    assert v_full >= v_bare  # hard: recorded set is a superset on the same trajectory
    assert full.total_phase2_pivots <= warm_only.total_phase2_pivots
    report(6, f"intermediaries volume ratio {v_full / v_bare:.3f} (+14% reported upstream); "
              f"warm-start-only pivots {warm_only.total_phase2_pivots} >= full "
              f"{full.total_phase2_pivots}")


# -- 7. scaling law ------------------------------------------------------------------


def test_criterion_07_nk_scaling_slopes(base_runs):
    model = base_runs["model"]
    budgeted = base_runs["budgeted"]
    scales = base_runs["scales"]
    dedupe = base_runs["dedupe"]
    lp = model.lp
    grid = [25, 50, 100, 200]
    fx, sp, rd = [], [], []
    for nk in grid:
        if nk == BASE_NK:
            fx.append(base_runs["funplex"].total_phase2_pivots)
            sp.append(base_runs["spores"].total_phase2_pivots)
            rd.append(base_runs["random_directions"].total_phase2_pivots)
            continue
        dset = hub_directions(nk, scales, lp.interest_columns)
        fx.append(explore(budgeted, dset, dedupe_tol=dedupe).total_phase2_pivots)
        sp.append(run_spores(budgeted, SporesConfig(capacity_columns=model.spores_capacity_map()),
                             total_objectives=nk, dedupe_tol=dedupe).total_phase2_pivots)
        rd.append(run_random_directions(budgeted, RandomDirectionsConfig(nk),
                                        rng=stream_rng(MASTER_SEED, "random_directions"),
                                        dedupe_tol=dedupe).total_phase2_pivots)
    s_fx = scaling_slope(grid, fx)
    s_sp = scaling_slope(grid, sp)
    s_rd = scaling_slope(grid, rd)
    assert 0.3 <= s_fx <= 0.8
    assert 0.9 <= s_sp <= 1.1
    assert 0.9 <= s_rd <= 1.1
    report(7, f"pivot slopes: funplex {s_fx:.3f} in [0.3, 0.8]; "
              f"spores {s_sp:.3f}, random-directions {s_rd:.3f} in [0.9, 1.1]")


# -- 8. complexity accounting ---------------------------------------------------------


def test_criterion_08_per_pivot_complexity(hub_setup):
    model_big, budgeted_big, scales_big = hub_setup
    small_model = build_hub_lp(HubConfig(hours_per_day=12))
    budgeted_small = build_budgeted_lp(small_model.lp, EPSILON)
    scales_small = characteristic_scales(
        small_model.lp, budgeted_small.cost_vertex[: small_model.lp.n], SCALE_FALLBACK)

    settings = [
        (budgeted_small, small_model.lp, scales_small, 60),
        (budgeted_big, model_big.lp, scales_big, 200),
    ]
    measured, predicted = [], []
    for budgeted, lp, scales, nk in settings:
        dset = hub_directions(nk, scales, lp.interest_columns)
        run = explore(budgeted, dset)
        assert run.total_phase2_pivots > 0
        measured.append(run.flops / run.total_phase2_pivots)
        predicted.append((lp.n + 1) * (lp.m + 1 + nk))
    ratio = measured[1] / measured[0]
    wanted = predicted[1] / predicted[0]
    assert abs(ratio - wanted) / wanted < 0.25

    # the single-objective engine in the same harness tracks n*m
    single_measured, single_predicted = [], []
    for budgeted, lp, scales, _ in settings:
        res = budgeted.solve_objective(-budgeted.lp.c)
        assert res.phase2_pivots > 0
        single_measured.append(res.flops / res.phase2_pivots)
        single_predicted.append(budgeted.lp.n * budgeted.lp.m)
    sratio = single_measured[1] / single_measured[0]
    swanted = single_predicted[1] / single_predicted[0]
    assert abs(sratio - swanted) / swanted < 0.25
    report(8, f"multi-objective flops/pivot ratio {ratio:.3f} vs predicted {wanted:.3f}; "
              f"single-objective {sratio:.3f} vs {swanted:.3f} (both within 25%)")


# -- 9. geometry suite -----------------------------------------------------------------


def test_criterion_09_geometry_suite():
    square = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    assert hull_volume(square).volume == pytest.approx(1.0, abs=1e-12)
    simplex = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]], dtype=float)
    assert hull_volume(simplex).volume == pytest.approx(1 / 6, rel=1e-12)

    rng = np.random.default_rng(42)
    for trial in range(20):
        pts = rng.normal(size=(18, 4)) * rng.uniform(0.5, 2.0, size=4)
        v0 = hull_volume(pts).volume
        # translation invariance
        v_t = hull_volume(pts + rng.normal(size=4) * 5).volume
        assert v_t == pytest.approx(v0, rel=1e-9)
        # axis scaling
        scaled = pts.copy()
        scaled[:, trial % 4] *= -3.0
        assert hull_volume(scaled).volume == pytest.approx(3.0 * v0, rel=1e-9)
        # monotone under addition
        v_add = hull_volume(np.vstack([pts, rng.normal(size=(1, 4)) * 2])).volume
        assert v_add >= v0 - 1e-9 * (1 + v0)
        # exact vs Monte Carlo within 3 standard errors
        mc = hull_volume(pts, method="monte_carlo", samples=20_000, seed=trial)
        assert abs(mc.volume - v0) <= 3 * mc.standard_error
    report(9, "square, simplex, invariances, monotonicity, and exact-vs-MC (20 clouds, 3 SE)")


# -- 10. sampler statistics ---------------------------------------------------------------


def test_criterion_10_sampler_statistics():
    rng = np.random.default_rng(2024)
    z = rng.standard_normal((100_000, 2))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    angles = np.arctan2(z[:, 1], z[:, 0])
    counts, _ = np.histogram(angles, bins=36, range=(-np.pi, np.pi))
    expected = 100_000 / 36
    chi2 = float(((counts - expected) ** 2 / expected).sum())
    critical = scipy.stats.chi2.ppf(0.99, df=35)
    assert chi2 < critical

    factors = pv_noise_factors(100_000, 0.254, np.random.default_rng(99))
    mean_err = abs(factors.mean() - 1.0)
    std_err = abs(factors.std() - 0.254) / 0.254
    assert mean_err < 0.01
    assert std_err < 0.05
    report(10, f"chi-square {chi2:.1f} < {critical:.1f}; log-normal mean off by "
               f"{mean_err:.4f}, std off by {std_err:.2%}")


# -- 11. budget feasibility ----------------------------------------------------------------


def test_criterion_11_budget_feasibility_everywhere(base_runs):
    budgeted = base_runs["budgeted"]
    limit = budgeted.budget_limit
    checked_costs = 0
    checked_full = 0
    for name in ("funplex", "spores", "random_directions"):
        run = base_runs[name]
        for cost in run.store.costs:
            assert cost <= limit + 1e-7
            checked_costs += 1
        for x in run.full_vertices:
            assert budgeted.lp.is_feasible(x, tol=1e-7)
            assert budgeted.cost_of(x) <= limit + 1e-7
            checked_full += 1

    # a small preset exercised end to end as well
    rows = [([1.0, 0.0], "<=", 1.0), ([0.0, 1.0], "<=", 1.0), ([1.0, 1.0], ">=", 0.5)]
    toy = build_standard_form(rows, [1.0, 1.0], interest_columns=[0, 1])
    toy_budgeted = build_budgeted_lp(toy, EPSILON)
    toy_run = explore(toy_budgeted,
                      generate_direction_set(16, np.ones(2), (0, 1), seed=5),
                      keep_full_vertices=True)
    for x in toy_run.full_vertices:
        assert toy_budgeted.lp.is_feasible(x, tol=1e-7)
        assert toy_budgeted.cost_of(x) <= toy_budgeted.budget_limit + 1e-7
        checked_full += 1
    report(11, f"{checked_costs} recorded costs and {checked_full} full vertices "
               "within budget and constraints (1e-7)")


# -- 12. determinism -------------------------------------------------------------------------


def test_criterion_12_base_preset_determinism():
    config = ExperimentConfig(master_seed=MASTER_SEED)
    first = run_experiment(config)
    second = run_experiment(config)
    for name in config.methods:
        a, b = first.methods[name], second.methods[name]
        assert a.pivots == b.pivots
        assert a.points == b.points  # bit-equal float lists
        assert a.costs == b.costs
    report(12, "two base-preset executions agree bit-for-bit on pivots and projections")
