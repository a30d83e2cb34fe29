import numpy as np
import pytest
import scipy.sparse as sp

from stokeslab.assembly import assemble
from stokeslab.experiments import colliding_flow, rhombus_eps, rhombus_px
from stokeslab.mesh import make_mesh, make_rhombus
from stokeslab.solver import SingularSystemError, SolverConfig, kkt_matrix, solve, solve_kkt
from stokeslab.spaces import Method


def test_rhombus_cr_eps_half():
    ex = rhombus_eps(0.5)
    sol, rep = solve(assemble(make_rhombus(), "cr", ex.f, split_x=ex.split_x))
    right = make_rhombus().geometry.centroids[:, 0] > 0
    # int_T1 f.v = 2 (1 - 3 eps/2 + 2 eps^2/3) for the shared-edge function; see test_experiments
    np.testing.assert_allclose(sol.u, 0.0, atol=1e-14)
    assert sol.p[right][0] == pytest.approx(1 - 0.75 + 1 / 6, abs=1e-12)
    assert sol.p[~right][0] == pytest.approx(-(1 - 0.75 + 1 / 6), abs=1e-12)
    assert rep.relative_residual <= 1e-10


def test_rhombus_mini_reproduces_px():
    ex = rhombus_px()
    t = make_rhombus()
    sol, _ = solve(assemble(t, "mini", ex.f))
    np.testing.assert_allclose(sol.u, 0.0, atol=1e-12)
    np.testing.assert_allclose(sol.p, t.vertices[:, 0], atol=1e-12)


@pytest.mark.parametrize("method", list(Method))
def test_pressure_mean_zero_and_residual(method):
    ex = colliding_flow()
    t = make_mesh("square", 2)
    s = assemble(t, method, None, ex.u)
    sol, rep = solve(s)
    assert abs(s.c @ sol.p) <= 1e-10 * 4.0
    assert rep.relative_residual <= 1e-10
    assert rep.ndof == int(s.free.sum()) + s.dofmap.n_pres
    assert abs(sol.multiplier) < 1e-8


def test_homogeneous_returns_zero():
    sol, rep = solve(assemble(make_mesh("lshape", 1), "p2p0"))
    assert np.all(sol.u == 0) and rep.relative_residual == 0.0


def test_singular_matrix_raises():
    K = sp.csc_matrix(np.array([[1.0, 0.0], [0.0, 1e-20]]))
    with pytest.raises(SingularSystemError):
        solve_kkt(K, np.ones(2), SolverConfig())


def test_singular_without_mean_constraint():
    # dropping the mean-value border leaves constant pressures in the kernel
    s = assemble(make_mesh("square", 1), "cr", None, lambda xy: np.column_stack([-xy[:, 1], xy[:, 0]]))
    K, rhs = kkt_matrix(s)
    n = K.shape[0] - 1
    with pytest.raises(SingularSystemError):
        solve_kkt(K[:n, :n], rhs[:n] + 1.0)


def test_permutation_independence(rng):
    ex = colliding_flow()
    s = assemble(make_mesh("square", 2), "br", None, ex.u)
    K, rhs = kkt_matrix(s)
    x, _ = solve_kkt(K, rhs)
    perm = rng.permutation(K.shape[0])
    Kp = K.tocsr()[perm][:, perm]
    y, _ = solve_kkt(Kp, rhs[perm])
    np.testing.assert_allclose(y[np.argsort(perm)], x, atol=1e-9)
