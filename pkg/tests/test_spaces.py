import numpy as np
import pytest

from stokeslab.experiments import colliding_flow
from stokeslab.mesh import make_mesh, make_rhombus
from stokeslab.quadrature import triangle_rule
from stokeslab.spaces import (
    KIND_BUBBLE,
    FunctionCoeffs,
    Method,
    build_dofmap,
    eval_basis,
    eval_velocity,
    interpolate_boundary,
    shape_values,
)


@pytest.mark.parametrize(
    "method,n_vel,n_bd,n_pres",
    [("cr", 10, 8, 2), ("mini", 12, 8, 4), ("p2p0", 18, 16, 2), ("br", 9, 8, 2)],
)
def test_rhombus_dof_counts(method, n_vel, n_bd, n_pres):
    dm = build_dofmap(make_rhombus(), method)
    assert dm.n_vel == n_vel
    assert len(dm.boundary_dofs) == n_bd
    assert dm.n_pres == n_pres


@pytest.mark.parametrize("domain", ["square", "lshape"])
@pytest.mark.parametrize("level", [0, 2])
def test_dof_count_formulas(domain, level):
    t = make_mesh(domain, level)
    V, E, T, Ei = t.n_vertices, t.n_edges, t.n_triangles, len(t.interior_edges)
    assert build_dofmap(t, "cr").n_vel == 2 * E
    assert build_dofmap(t, "mini").n_vel == 2 * (V + T)
    assert build_dofmap(t, "p2p0").n_vel == 2 * (V + E)
    assert build_dofmap(t, "br").n_vel == 2 * V + Ei
    assert build_dofmap(t, "mini").n_pres == V
    assert build_dofmap(t, "cr").n_pres == T


def test_mini_bubbles_have_no_boundary_dofs():
    dm = build_dofmap(make_mesh("square", 1), Method.MINI)
    assert not np.any(dm.dof_kind[dm.boundary_dofs] == KIND_BUBBLE)


def test_method_parse():
    assert Method.parse("P2P0") is Method.P2P0
    with pytest.raises(ValueError):
        Method.parse("taylor-hood")


def test_cr_basis_is_one_at_own_midpoint():
    t = make_rhombus()
    for i in range(3):
        mids = np.full(3, 0.5)
        mids[i] = 0.0  # midpoint of edge opposite vertex i
        b = eval_basis(t, "cr", 0, mids)
        vals = b.vel_values[:3, 0]  # x-components of the three edge functions
        np.testing.assert_allclose(vals, np.eye(3)[i], atol=1e-15)


def test_bubble_at_centroid():
    vals, _ = shape_values(["b3"], np.full((1, 3), 1 / 3))
    assert vals[0, 0] == pytest.approx(1 / 27)


def test_p2_lagrange_property():
    nodes = np.vstack([np.eye(3), [[0, 0.5, 0.5], [0.5, 0, 0.5], [0.5, 0.5, 0]]])
    names = [f"p2v_{i}" for i in range(3)] + [f"p2e_{i}" for i in range(3)]
    vals, _ = shape_values(names, nodes)
    np.testing.assert_allclose(vals, np.eye(6), atol=1e-15)


@pytest.mark.parametrize("family", ["p1", "p2", "cr"])
def test_partition_of_unity(family):
    names = {
        "p1": [f"p1_{i}" for i in range(3)],
        "p2": [f"p2v_{i}" for i in range(3)] + [f"p2e_{i}" for i in range(3)],
        "cr": [f"cr_{i}" for i in range(3)],
    }[family]
    pts = triangle_rule(10).points
    vals, dvals = shape_values(names, pts)
    np.testing.assert_allclose(vals.sum(axis=1), 1.0, atol=1e-13)
    np.testing.assert_allclose(dvals.sum(axis=1) @ np.array([[1, 0], [0, 1], [-1, -1]]), 0.0, atol=1e-12)


def test_br_edge_bubble_direction_is_global_normal():
    t = make_mesh("square", 1)
    dm = build_dofmap(t, "br")
    for e in t.interior_edges[:5]:
        dof = np.flatnonzero((dm.dof_entity == e) & (dm.dof_kind == 3))[0]
        T0, T1 = t.edge_tris[e]
        for T in (T0, T1):
            m = list(dm.vel_dofs[T]).index(dof)
            np.testing.assert_allclose(dm.vel_dirs[T, m], t.geometry.normals[e])


def test_gradient_matches_finite_differences(rng):
    t = make_mesh("lshape", 1)
    for m in Method:
        dm = build_dofmap(t, m)
        u = rng.standard_normal(dm.n_vel)
        T = 3
        L = np.array([[0.2, 0.3, 0.5]])
        P = t.vertices[t.triangles[T]]
        x = L @ P
        _, G = eval_velocity(dm, u, np.array([T]), L)
        h = 1e-6
        for d in range(2):
            dx = np.zeros(2)
            dx[d] = h
            # barycentric coordinates of shifted points
            Lp = np.linalg.solve(np.vstack([P.T, np.ones(3)]), np.append(x[0] + dx, 1.0))[None]
            Lm = np.linalg.solve(np.vstack([P.T, np.ones(3)]), np.append(x[0] - dx, 1.0))[None]
            vp, _ = eval_velocity(dm, u, np.array([T]), Lp)
            vm, _ = eval_velocity(dm, u, np.array([T]), Lm)
            np.testing.assert_allclose((vp - vm)[0] / (2 * h), G[0, :, d], atol=1e-6)


def test_zero_boundary_data():
    t = make_mesh("square", 1)
    for m in Method:
        _, vals = interpolate_boundary(t, m, lambda xy: np.zeros((len(xy), 2)))
        assert np.all(vals == 0)


def test_cr_boundary_affine_is_midpoint_value():
    t = make_mesh("square", 1)
    g = lambda xy: np.column_stack([2 * xy[:, 0] - xy[:, 1] + 1, 3 * xy[:, 1]])
    dofs, vals = interpolate_boundary(t, "cr", g)
    dm = build_dofmap(t, "cr")
    mids = t.geometry.edge_midpoints[dm.dof_entity[dofs]]
    np.testing.assert_allclose(vals, g(mids)[np.arange(len(dofs)), dm.dof_comp[dofs]], atol=1e-14)


def test_p2_boundary_is_pointwise_colliding_flow():
    t = make_mesh("square", 1)
    ex = colliding_flow()
    dm = build_dofmap(t, "p2p0")
    dofs, vals = interpolate_boundary(t, dm, ex.u)
    ent, comp, kind = dm.dof_entity[dofs], dm.dof_comp[dofs], dm.dof_kind[dofs]
    pts = np.where(kind[:, None] == 0, t.vertices[np.minimum(ent, t.n_vertices - 1)],
                   t.geometry.edge_midpoints[np.minimum(ent, t.n_edges - 1)])
    np.testing.assert_allclose(vals, ex.u(pts)[np.arange(len(dofs)), comp], atol=1e-12)


def test_function_coeffs_length_validated():
    dm = build_dofmap(make_rhombus(), "cr")
    FunctionCoeffs(np.zeros(10), dm)
    with pytest.raises(ValueError):
        FunctionCoeffs(np.zeros(9), dm)
    with pytest.raises(ValueError):
        FunctionCoeffs(np.zeros(2), dm, role="stress")
