import numpy as np
import pytest

from stokeslab.analysis import (
    ConvergenceTable,
    ExactSolution,
    RateError,
    best_approx_terms,
    chain_bounded,
    combined_error,
    discrete_gradient_oscillation,
    energy_error,
    error_sum,
    fit_rate,
    hf_norm,
    mini_linear_part,
    oscillation,
    pressure_error,
)
from stokeslab.assembly import assemble
from stokeslab.experiments import colliding_flow, rhombus_eps, solve_case
from stokeslab.mesh import Triangulation, make_mesh
from stokeslab.solver import solve
from stokeslab.spaces import KIND_BUBBLE, Method

REF = Triangulation(np.array([[0.0, 0], [1, 0], [0, 1]]), np.array([[0, 1, 2]]), "custom")


def rotation():
    u = lambda xy: np.column_stack([-xy[:, 1], xy[:, 0]])
    G = lambda xy: np.broadcast_to(np.array([[0.0, -1.0], [1.0, 0.0]]), (len(xy), 2, 2)).copy()
    return ExactSolution("rotation", "square", u, G, lambda xy: np.zeros(len(xy)),
                         lambda xy: np.zeros((len(xy), 2)), degree=1)


@pytest.mark.parametrize("method", list(Method))
def test_exact_reproduction_has_zero_error(method):
    ex = rotation()
    sol, _ = solve_case(ex, method, 1)
    assert combined_error(sol, ex) <= 1e-9


def test_cr_velocity_vanishes_for_strip_source():
    ex = rhombus_eps(0.25)
    sol, _ = solve_case(ex, "cr", 0)
    assert energy_error(sol, ex) == 0.0


def test_cr_error_halves_under_refinement():
    ex = colliding_flow()
    e4 = energy_error(solve_case(ex, "cr", 4)[0], ex)
    e5 = energy_error(solve_case(ex, "cr", 5)[0], ex)
    assert e4 / e5 == pytest.approx(2.0, rel=0.1)


def test_oscillation_examples():
    t = make_mesh("square", 1)
    const = lambda xy: np.tile([1.0, -2.0], (len(xy), 1))
    assert oscillation(const, t) == pytest.approx(0.0, abs=1e-14)
    assert oscillation(lambda xy: np.zeros((len(xy), 2)), t) == 0.0
    # f = (x, 0) on the reference triangle: h_T ||x - 1/3|| with ||x - 1/3||^2 = 1/12 - 1/18
    osc = oscillation(lambda xy: np.column_stack([xy[:, 0], 0 * xy[:, 0]]), REF)
    assert osc == pytest.approx(np.sqrt(2) * np.sqrt(1 / 12 - 1 / 18), rel=1e-13)


def test_hf_norm_constant():
    t = make_mesh("square", 0)
    f = lambda xy: np.tile([3.0, 4.0], (len(xy), 1))
    assert hf_norm(f, t) == pytest.approx(5.0 * np.sqrt(np.sum(t.h**2 * t.geometry.areas)))


def test_best_approx_terms():
    t = make_mesh("lshape", 1)
    aff = ExactSolution("aff", "lshape", lambda xy: xy, lambda xy: np.broadcast_to(np.eye(2), (len(xy), 2, 2)),
                        lambda xy: np.zeros(len(xy)), lambda xy: np.zeros((len(xy), 2)), degree=1)
    assert best_approx_terms(aff, t) == pytest.approx((0.0, 0.0), abs=1e-13)
    ex = colliding_flow()
    t = make_mesh("square", 3)
    bu, _ = best_approx_terms(ex, t)
    # the CR interpolant attains the velocity term
    from stokeslab.companions import cr_components, cr_gradient, inc_interpolate
    from stokeslab.quadrature import element_points

    G = cr_gradient(t, cr_components(inc_interpolate(ex.u, t)))
    qp = element_points(t, 10)
    d = ex.grad_u(qp.xy) - G[qp.elem]
    assert np.sqrt(qp.integrate(np.sum(d**2, axis=(1, 2)))) == pytest.approx(bu, rel=1e-12)


def test_fit_rate_power_law():
    n = np.array([10.0, 40, 160, 640])
    assert fit_rate(n, n**-0.5) == pytest.approx(-0.5, abs=1e-14)
    with pytest.raises(RateError):
        fit_rate(n[:2], n[:2] ** -0.5)


def test_table_csv_and_validation(monkeypatch):
    tab = ConvergenceTable("demo", "CR")
    for i, n in enumerate([10, 40, 160]):
        tab.add(level=i, ndof=n, err_energy=n**-0.5, err_pressure=0.0, err_combined=n**-0.5, osc=0.0, hf=0.0)
    assert fit_rate(tab) == pytest.approx(-0.5)
    csv = tab.to_csv().splitlines()
    assert csv[0] == "level,ndof,err_energy,err_pressure,err_combined,osc,hf"
    assert csv[1].startswith("0,10,0.316227766017,")
    monkeypatch.setenv("STOKESLAB_PRECISION", "4")
    assert tab.to_csv().splitlines()[1].startswith("0,10,0.3162,")
    with pytest.raises(ValueError):
        tab.add(level=3, ndof=160, err_energy=0, err_pressure=0, err_combined=0, osc=0, hf=0)


def test_mini_linear_part_drops_bubbles():
    ex = colliding_flow()
    sol, _ = solve_case(ex, "mini", 2)
    lin = mini_linear_part(sol)
    assert np.all(lin.u[sol.dofmap.dof_kind == KIND_BUBBLE] == 0)
    assert discrete_gradient_oscillation(lin) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError):
        mini_linear_part(solve_case(ex, "cr", 0)[0])


def test_mini_bubble_coefficients_match_local_formula():
    from stokeslab.experiments import polynomial_flow
    from stokeslab.companions import pi0
    from stokeslab.quadrature import element_points
    from stokeslab.spaces import eval_pressure

    ex = polynomial_flow()
    t = make_mesh("square", 2)
    sol, _ = solve_case(ex, "mini", 2)
    dm = sol.dofmap
    bub = dm.dof_kind == KIND_BUBBLE
    alpha = np.zeros((t.n_triangles, 2))
    alpha[dm.dof_entity[bub], dm.dof_comp[bub]] = sol.u[bub]
    # alpha_T ||grad b_T||^2 = int_T (f - grad p_h) b_T,  b_T = l0 l1 l2
    qp = element_points(t, 10)
    b = np.prod(qp.bary, axis=1)
    gb = t.geometry.grad_bary[qp.elem]
    L = qp.bary
    grad_b = (L[:, 1] * L[:, 2])[:, None] * gb[:, 0] + (L[:, 0] * L[:, 2])[:, None] * gb[:, 1] \
        + (L[:, 0] * L[:, 1])[:, None] * gb[:, 2]
    stiff = qp.element_sum(np.sum(grad_b**2, axis=1))
    gp = np.einsum("tk,tkd->td", sol.p[t.triangles], t.geometry.grad_bary)
    rhs = qp.element_sum((ex.f(qp.xy) - gp[qp.elem]) * b[:, None])
    np.testing.assert_allclose(alpha * stiff[:, None], rhs, atol=1e-10 * np.abs(rhs).max())


def test_chain_bounded_detects_jumps():
    class L:
        def __init__(self, r):
            self.ratios = {"a": r}

    ok, _ = chain_bounded([L(1.0), L(1.5), L(1.2)], names=("a",))
    assert ok
    ok, msgs = chain_bounded([L(1.0), L(2.5)], names=("a",))
    assert not ok and "factor" in msgs[0]
    ok, msgs = chain_bounded([L(11.0), L(12.0)], names=("a",))
    assert not ok


def test_error_sum_vs_combined():
    ex = colliding_flow()
    sol, _ = solve_case(ex, "br", 1)
    e_u, e_p = energy_error(sol, ex), pressure_error(sol, ex)
    assert error_sum(sol, ex) == pytest.approx(e_u + e_p)
    assert combined_error(sol, ex) == pytest.approx(np.hypot(e_u, e_p))
