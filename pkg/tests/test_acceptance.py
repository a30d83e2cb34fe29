"""Acceptance gate: one test and one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v``; the criterion lines are
printed even when output capturing is on.
"""
import numpy as np
import pytest

from stokeslab.analysis import (
    CHAIN_RATIOS,
    chain_bounded,
    element_divergence,
    fit_rate,
    pointwise_divergence_max,
    pressure_error,
)
from stokeslab.companions import random_cr_fields
from stokeslab.experiments import (
    ALL_METHODS,
    EPS_SWEEP,
    MINI_FLOOR,
    ExperimentSpec,
    colliding_flow,
    mini_pressure_floor,
    rhombus_cr_pressure_stated,
    rhombus_eps,
    rhombus_px,
    run,
    solve_case,
)
from stokeslab.mesh import make_mesh
from stokeslab.pseudostress import compare_with_cr, ps_from_cr
from stokeslab.spaces import Method
from stokeslab.verify import (
    bubble_normalisation,
    companion_defects,
    interpolation_defect,
    random_polynomial_field,
)

LEVELS = tuple(range(6))


@pytest.fixture(scope="module")
def report(request):
    capman = request.config.pluginmanager.getplugin("capturemanager")

    def emit(n, ok, detail):
        with capman.global_and_fixture_disabled():
            print(f"\nCRITERION {n}: {'PASS' if ok else 'FAIL'} - {detail}", flush=True)
        return ok

    return emit


@pytest.fixture(scope="module")
def colliding():
    return run(ExperimentSpec("colliding-flow", ALL_METHODS, LEVELS))


@pytest.fixture(scope="module")
def lshape():
    return run(ExperimentSpec("lshape", ALL_METHODS, LEVELS))


def _slopes(result, column="err_combined"):
    return {k: tab.slope(column) for k, tab in result.tables().items()}


def test_criterion_01_colliding_flow_rates(colliding, report):
    assert not colliding.failures
    slopes = _slopes(colliding)
    ok = all(abs(s + 0.5) <= 0.1 for s in slopes.values())
    detail = ", ".join(f"{k} {v:+.3f}" for k, v in slopes.items())
    assert report(1, ok, f"combined-error slopes over levels 3..5 (target -0.5 +- 0.1): {detail}")


def test_criterion_02_mini_pressure_preasymptotics(colliding, report):
    tab = colliding.tables()["MINI"]
    n, ep, eu = tab.column("ndof"), tab.column("err_pressure"), tab.column("err_energy")
    p_slope = fit_rate(n[:4], ep[:4], rows=4)
    u_slope = fit_rate(n, eu)
    ok = p_slope <= -0.6 and abs(u_slope + 0.5) <= 0.1
    later = fit_rate(n[1:5], ep[1:5], rows=4)
    assert report(
        2,
        ok,
        f"MINI pressure slope levels 0..3 {p_slope:+.3f} (<= -0.6; levels 1..4 give {later:+.3f}), "
        f"MINI velocity slope {u_slope:+.3f} (-0.5 +- 0.1)",
    )


def test_criterion_03_lshape_rates(lshape, report):
    assert not lshape.failures
    slopes = _slopes(lshape)
    ok = all(abs(s + 0.25) <= 0.08 for s in slopes.values())
    detail = ", ".join(f"{k} {v:+.3f}" for k, v in slopes.items())
    assert report(3, ok, f"combined-error slopes (target -0.25 +- 0.08): {detail}")


def test_criterion_04_comparison_chain(colliding, lshape, report):
    parts, ok = [], True
    for res in (colliding, lshape):
        chain = res.chain
        assert [c.level for c in chain] == list(LEVELS)
        good, msgs = chain_bounded(chain, bound=10.0, drift=2.0, names=CHAIN_RATIOS)
        ok &= good
        worst = max(lv.ratios[n] for lv in chain for n in CHAIN_RATIOS)
        parts.append(f"{res.spec.name}: max ratio {worst:.3f}" + ("" if good else " [" + "; ".join(msgs) + "]"))
    assert report(4, ok, " | ".join(parts))


def test_criterion_05_strip_counterexample(report):
    t = make_mesh("rhombus", 0)
    right = t.geometry.centroids[:, 0] > 0
    u_max, p_dev, cr_err, mini_err, floors = 0.0, 0.0, [], [], []
    for eps in EPS_SWEEP:
        ex = rhombus_eps(eps)
        cr, _ = solve_case(ex, Method.CR, 0)
        u_max = max(u_max, float(np.abs(cr.u).max()))
        stated = np.where(right, 1.0, -1.0) * rhombus_cr_pressure_stated(eps)
        p_dev = max(p_dev, float(np.abs(cr.p - stated).max()))
        cr_err.append(pressure_error(cr, ex))
        mini, _ = solve_case(ex, Method.MINI, 0)
        mini_err.append(pressure_error(mini, ex))
        floors.append(mini_pressure_floor(eps))
    decreasing = bool(np.all(np.diff(cr_err) < 0))
    above = min(mini_err) > MINI_FLOOR and all(m >= f - 1e-12 for m, f in zip(mini_err, floors))
    ok = u_max <= 1e-10 and p_dev <= 1e-10 and decreasing and above
    assert report(
        5,
        ok,
        f"max|u_CR| {u_max:.1e}; max|p_CR - (1-eps/2-2eps^2/3)| {p_dev:.3e} (tol 1e-10); "
        f"||p_eps-p_CR|| strictly decreasing: {decreasing}; min ||p_eps-p_MINI|| {min(mini_err):.3f} "
        f"> {MINI_FLOOR} (derived floor): {above}",
    )


def test_criterion_06_linear_pressure_counterexample(report):
    ex = rhombus_px()
    mini, _ = solve_case(ex, Method.MINI, 0)
    mini_u = float(np.abs(mini.u).max())
    mini_p = pressure_error(mini, ex)
    # ||x - Pi0 x|| on the two-triangle rhombus: Pi0 x = +-1/3, ||x||^2 = 1/3, so 1/3 - 2/9 = 1/9
    oracle = 1.0 / 3.0
    errs = {m.label: pressure_error(solve_case(ex, m, 0)[0], ex) for m in (Method.CR, Method.P2P0, Method.BR)}
    dev = max(abs(e - oracle) for e in errs.values())
    ok = mini_u <= 1e-10 and mini_p <= 1e-10 and dev <= 1e-10
    detail = ", ".join(f"{k} {v:.6f}" for k, v in errs.items())
    assert report(
        6,
        ok,
        f"MINI |u| {mini_u:.1e}, ||x-p_MINI|| {mini_p:.1e}; P0 pressure errors {detail} vs ||x-Pi0 x|| = "
        f"{oracle:.6f} (max deviation {dev:.3e}, tol 1e-10)",
    )


def test_criterion_07_companion_properties(report):
    rng = np.random.default_rng(7)
    worst = 0.0
    for dom in ("square", "lshape", "rhombus"):
        for level in range(4):
            t = make_mesh(dom, level)
            worst = max(worst, *companion_defects(t, random_cr_fields(t, 100, rng)))
    norm = max(max(bubble_normalisation(make_mesh(d, 1))) for d in ("square", "lshape", "rhombus"))
    ok = worst <= 1e-10 and norm <= 1e-13
    assert report(7, ok, f"max scaled J2/J3 defect {worst:.2e} (tol 1e-10); bubble mean deviation {norm:.2e} (tol 1e-13)")


def test_criterion_08_interpolation_identity(report):
    ex = colliding_flow()
    rng = np.random.default_rng(8)
    cf = max(interpolation_defect(make_mesh("square", lvl), ex.u, ex.grad_u) for lvl in range(4))
    t = make_mesh("lshape", 2)
    poly = max(interpolation_defect(t, *random_polynomial_field(rng)) for _ in range(20))
    ok = cf <= 1e-10 and poly <= 1e-10
    assert report(8, ok, f"colliding flow {cf:.2e}, 20 random polynomials {poly:.2e} (tol 1e-10)")


def test_criterion_09_pseudostress(report):
    ex = colliding_flow()
    reps = [compare_with_cr(make_mesh("square", lvl), ex) for lvl in LEVELS]
    c1 = np.array([r.c1 for r in reps])
    c2 = np.array([r.c2 for r in reps])
    tr = max(abs(ps_from_cr(make_mesh("square", lvl), ex.f, ex.u).integral_of_trace()) for lvl in LEVELS)
    stable = all(np.all(c[1:] / c[:-1] < 2) and np.all(c[1:] / c[:-1] > 0.5) for c in (c1, c2))
    ok = c1.max() <= 10 and c2.max() <= 10 and stable and tr <= 1e-10
    assert report(9, ok, f"C1 in [{c1.min():.3f}, {c1.max():.3f}], C2 in [{c2.min():.3f}, {c2.max():.3f}]; "
                         f"max |int tr sigma| {tr:.2e} (tol 1e-10)")


def test_criterion_10_divergence_constraints(colliding, lshape, report):
    cr_point = 0.0
    for ex_name, dom in (("colliding-flow", "square"), ("lshape", "lshape")):
        exact = ExperimentSpec(ex_name).exact()
        for lvl in range(4):
            sol, _ = solve_case(exact, Method.CR, lvl)
            cr_point = max(cr_point, pointwise_divergence_max(sol))
    elem = max(
        lv.rows[m]["div_max"]
        for res in (colliding, lshape)
        for lv in res.levels
        for m in ("CR", "P2P0", "BR")
    )
    for eps in EPS_SWEEP:
        for m in (Method.P2P0, Method.BR):
            sol, _ = solve_case(rhombus_eps(eps), m, 0)
            elem = max(elem, float(np.abs(element_divergence(sol)).max()))
    ok = cr_point <= 1e-10 and elem <= 1e-10
    assert report(10, ok, f"max |div_NC u_CR| {cr_point:.2e}; max |int_T div u_h| (CR/P2P0/BR, all runs) {elem:.2e}")
