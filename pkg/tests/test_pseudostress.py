import numpy as np
import pytest

from stokeslab.analysis import ExactSolution
from stokeslab.assembly import assemble
from stokeslab.companions import cr_gradient
from stokeslab.experiments import colliding_flow, polynomial_flow, rhombus_px
from stokeslab.mesh import make_mesh, make_rhombus
from stokeslab.pseudostress import compare_with_cr, dev, ps_errors, ps_from_cr
from stokeslab.quadrature import element_points
from stokeslab.solver import solve


def test_zero_data_gives_zero_field():
    t = make_mesh("square", 1)
    s = ps_from_cr(t)
    qp = element_points(t, 2)
    np.testing.assert_array_equal(s.evaluate(qp.elem, qp.xy), 0.0)


def test_rhombus_terms_against_independent_assembly():
    t = make_rhombus()
    ex = rhombus_px()
    s = ps_from_cr(t, ex.f)
    sol, _ = solve(assemble(t, "cr", lambda xy: np.tile([1.0, 0.0], (len(xy), 1))))
    nE = t.n_edges
    G = cr_gradient(t, np.column_stack([sol.u[:nE], sol.u[nE:]]))
    qp = element_points(t, 3)
    r = qp.xy - t.geometry.centroids[qp.elem]
    expected_tr = np.trace(G, axis1=1, axis2=2)[qp.elem] - r[:, 0] / 2 - 2 * sol.p[qp.elem]
    np.testing.assert_allclose(s.trace(qp.elem, qp.xy), expected_tr, atol=1e-14)
    np.testing.assert_allclose(s.trace(qp.elem, qp.xy) / 2, -sol.p[qp.elem] - r[:, 0] / 4, atol=1e-14)


def test_deviatoric_part_formula():
    ex = polynomial_flow()
    t = make_mesh("square", 2)
    s = ps_from_cr(t, ex.f, ex.u, f_degree=ex.f_degree)
    qp = element_points(t, 3)
    r = qp.xy - t.geometry.centroids[qp.elem]
    outer = np.einsum("ni,nj->nij", s.load[qp.elem], r) / 2
    nE = t.n_edges
    G = cr_gradient(t, np.column_stack([s.solution.u[:nE], s.solution.u[nE:]]))
    np.testing.assert_allclose(s.deviatoric(qp.elem, qp.xy), G[qp.elem] - dev(outer), atol=1e-12)


@pytest.mark.parametrize("ex", [colliding_flow(), polynomial_flow()], ids=lambda e: e.name)
def test_trace_integrates_to_zero(ex):
    for level in range(3):
        t = make_mesh(ex.domain, level)
        s = ps_from_cr(t, ex.f, ex.u, f_degree=ex.f_degree)
        assert abs(s.integral_of_trace()) <= 1e-10


def test_affine_exact_solution_reproduced():
    A = np.array([[1.0, 2.0], [-3.0, -1.0]])
    ex = ExactSolution("aff", "square", lambda xy: xy @ A.T, lambda xy: np.broadcast_to(A, (len(xy), 2, 2)).copy(),
                       lambda xy: np.zeros(len(xy)), lambda xy: np.zeros((len(xy), 2)), degree=1)
    e_u, e_p = ps_errors(make_mesh("square", 2), ex)
    assert e_u <= 1e-10 and e_p <= 1e-10


def test_two_sided_comparison_constants_bounded():
    ex = polynomial_flow()
    reports = [compare_with_cr(make_mesh("square", L), ex) for L in range(1, 5)]
    c1 = [r.c1 for r in reports]
    c2 = [r.c2 for r in reports]
    assert max(c1) < 10 and max(c2) < 10
    for c in (c1, c2):
        q = np.array(c[1:]) / np.array(c[:-1])
        assert q.max() < 2 and q.min() > 0.5
    # ||grad_NC(u_CR - u~_CR)|| is controlled by the oscillation
    assert max(r.tilde_gap / r.osc for r in reports) < 1.0
    assert all(r.hf > 0 for r in reports)


def test_zero_source_makes_both_sides_equal():
    # f = 0: dev sigma = grad_NC u_CR and tr sigma / 2 = -p_CR
    ex = colliding_flow()
    r = compare_with_cr(make_mesh("square", 2), ex)
    assert r.L == pytest.approx(r.R, rel=1e-12)
    assert r.osc == 0.0 and r.tilde_gap == 0.0
