"""Velocity and pressure spaces of the CR, MINI, P2P0 and Bernardi-Raugel methods.

Every local velocity basis function is written as ``phi_k(lambda) * d`` with
a scalar shape ``phi_k`` in barycentric coordinates and a direction ``d``:
a unit vector for the componentwise spaces, or the global edge normal for
the Bernardi-Raugel edge bubbles. Gradients and divergences then follow from
``grad(phi d) = d (x) grad(phi)`` and ``div(phi d) = d . grad(phi)``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .quadrature import edge_points


class Method(str, enum.Enum):
    CR = "cr"
    MINI = "mini"
    P2P0 = "p2p0"
    BR = "br"

    @classmethod
    def parse(cls, name) -> "Method":
        if isinstance(name, Method):
            return name
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            raise ValueError(f"unknown method {name!r}; expected one of {[m.value for m in cls]}") from None

    @property
    def label(self) -> str:
        return {"cr": "CR", "mini": "MINI", "p2p0": "P2P0", "br": "BR"}[self.value]


# scalar shape functions: value(L) and d/dL(L) for barycentric L of shape (n, 3)
def _p1(i):
    def val(L):
        return L[:, i]

    def d(L):
        out = np.zeros_like(L)
        out[:, i] = 1.0
        return out

    return val, d


def _cr(i):
    def val(L):
        return 1.0 - 2.0 * L[:, i]

    def d(L):
        out = np.zeros_like(L)
        out[:, i] = -2.0
        return out

    return val, d


def _p2_vertex(i):
    def val(L):
        return L[:, i] * (2.0 * L[:, i] - 1.0)

    def d(L):
        out = np.zeros_like(L)
        out[:, i] = 4.0 * L[:, i] - 1.0
        return out

    return val, d


def _edge_product(i, scale):
    j, k = (i + 1) % 3, (i + 2) % 3

    def val(L):
        return scale * L[:, j] * L[:, k]

    def d(L):
        out = np.zeros_like(L)
        out[:, j] = scale * L[:, k]
        out[:, k] = scale * L[:, j]
        return out

    return val, d


def _cubic_bubble(L):
    return L[:, 0] * L[:, 1] * L[:, 2]


def _cubic_bubble_d(L):
    return np.stack([L[:, 1] * L[:, 2], L[:, 0] * L[:, 2], L[:, 0] * L[:, 1]], axis=1)


def _one(L):
    return np.ones(len(L))


SHAPES = {"one": (_one, np.zeros_like), "b3": (_cubic_bubble, _cubic_bubble_d)}
for _i in range(3):
    SHAPES[f"p1_{_i}"] = _p1(_i)
    SHAPES[f"cr_{_i}"] = _cr(_i)
    SHAPES[f"p2v_{_i}"] = _p2_vertex(_i)
    SHAPES[f"p2e_{_i}"] = _edge_product(_i, 4.0)  # edge opposite vertex i
    SHAPES[f"eb_{_i}"] = _edge_product(_i, 1.0)


def shape_values(names, bary):
    """Values (n, K) and barycentric derivatives (n, K, 3) of the named shapes."""
    L = np.atleast_2d(np.asarray(bary, float))
    vals = np.stack([SHAPES[n][0](L) for n in names], axis=1)
    dvals = np.stack([SHAPES[n][1](L) for n in names], axis=1)
    return vals, dvals


@dataclass(frozen=True, eq=False)
class DofMap:
    """Degree-of-freedom layout of one method on one mesh.

    ``vel_dofs[T, m]`` is the global index of local velocity function ``m``
    (``-1`` if absent), ``vel_shapes[m]`` its scalar shape and
    ``vel_dirs[T, m]`` its direction. ``dof_kind`` classifies every global
    velocity dof as vertex, edge, bubble or edge-bubble with ``dof_entity``
    the mesh entity and ``dof_comp`` the component (``-1`` for normal bubbles).
    """

    method: Method
    mesh: object
    n_vel: int
    n_pres: int
    vel_shapes: tuple
    vel_dofs: np.ndarray
    vel_dirs: np.ndarray
    pres_shapes: tuple
    pres_dofs: np.ndarray
    dof_kind: np.ndarray
    dof_entity: np.ndarray
    dof_comp: np.ndarray
    boundary_dofs: np.ndarray
    vel_degree: int
    pres_degree: int

    @property
    def free_mask(self) -> np.ndarray:
        mask = np.ones(self.n_vel, bool)
        mask[self.boundary_dofs] = False
        return mask


KIND_VERTEX, KIND_EDGE, KIND_BUBBLE, KIND_EDGE_BUBBLE = 0, 1, 2, 3
_EX = np.array([1.0, 0.0])
_EY = np.array([0.0, 1.0])


def _componentwise(t, shapes, scalar_dofs, n_scalar, kind, entity, boundary_scalar):
    """Vector layout [x-block, y-block] from one scalar layout."""
    m = len(shapes)
    dofs = np.hstack([scalar_dofs, scalar_dofs + n_scalar])
    dirs = np.zeros((t.n_triangles, 2 * m, 2))
    dirs[:, :m] = _EX
    dirs[:, m:] = _EY
    comp = np.repeat([0, 1], n_scalar)
    bdofs = np.concatenate([boundary_scalar, boundary_scalar + n_scalar])
    return (
        tuple(shapes) * 2,
        dofs,
        dirs,
        np.tile(kind, 2),
        np.tile(entity, 2),
        comp,
        bdofs,
        2 * n_scalar,
    )


def build_dofmap(t, method) -> DofMap:
    """Number velocity and pressure dofs: vertices, then edges, then bubbles; x before y."""
    method = Method.parse(method)
    nV, nE, nT = t.n_vertices, t.n_edges, t.n_triangles
    bverts = np.flatnonzero(t.boundary_vertices)
    bedges = np.flatnonzero(t.boundary)

    if method is Method.CR:
        shapes = [f"cr_{i}" for i in range(3)]
        layout = _componentwise(
            t, shapes, t.tri_edges, nE,
            np.full(nE, KIND_EDGE), np.arange(nE), bedges,
        )
        vdeg = 1
    elif method is Method.MINI:
        shapes = [f"p1_{i}" for i in range(3)] + ["b3"]
        sd = np.hstack([t.triangles, nV + np.arange(nT)[:, None]])
        kind = np.concatenate([np.full(nV, KIND_VERTEX), np.full(nT, KIND_BUBBLE)])
        ent = np.concatenate([np.arange(nV), np.arange(nT)])
        layout = _componentwise(t, shapes, sd, nV + nT, kind, ent, bverts)
        vdeg = 3
    elif method is Method.P2P0:
        shapes = [f"p2v_{i}" for i in range(3)] + [f"p2e_{i}" for i in range(3)]
        sd = np.hstack([t.triangles, nV + t.tri_edges])
        kind = np.concatenate([np.full(nV, KIND_VERTEX), np.full(nE, KIND_EDGE)])
        ent = np.concatenate([np.arange(nV), np.arange(nE)])
        layout = _componentwise(t, shapes, sd, nV + nE, kind, ent, np.concatenate([bverts, nV + bedges]))
        vdeg = 2
    else:  # Bernardi-Raugel
        p1 = [f"p1_{i}" for i in range(3)]
        shapes_lin, d_lin, dir_lin, k_lin, e_lin, c_lin, b_lin, n_lin = _componentwise(
            t, p1, t.triangles, nV,
            np.full(nV, KIND_VERTEX), np.arange(nV), bverts,
        )
        interior = t.interior_edges
        eidx = -np.ones(nE, np.int64)
        eidx[interior] = n_lin + np.arange(len(interior))
        bub_dofs = eidx[t.tri_edges]
        normals = t.geometry.normals[t.tri_edges]  # (nT, 3, 2)
        bub_dirs = np.where((bub_dofs >= 0)[..., None], normals, 0.0)
        layout = (
            shapes_lin + tuple(f"eb_{i}" for i in range(3)),
            np.hstack([d_lin, bub_dofs]),
            np.concatenate([dir_lin, bub_dirs], axis=1),
            np.concatenate([k_lin, np.full(len(interior), KIND_EDGE_BUBBLE)]),
            np.concatenate([e_lin, interior]),
            np.concatenate([c_lin, -np.ones(len(interior), np.int64)]),
            b_lin,
            n_lin + len(interior),
        )
        vdeg = 2

    shapes, vdofs, vdirs, kind, ent, comp, bdofs, n_vel = layout
    if method is Method.MINI:
        pres_shapes = tuple(f"p1_{i}" for i in range(3))
        pres_dofs = t.triangles.copy()
        n_pres, pdeg = nV, 1
    else:
        pres_shapes = ("one",)
        pres_dofs = np.arange(nT)[:, None]
        n_pres, pdeg = nT, 0
    return DofMap(
        method=method,
        mesh=t,
        n_vel=int(n_vel),
        n_pres=int(n_pres),
        vel_shapes=tuple(shapes),
        vel_dofs=np.asarray(vdofs, np.int64),
        vel_dirs=np.asarray(vdirs, float),
        pres_shapes=pres_shapes,
        pres_dofs=np.asarray(pres_dofs, np.int64),
        dof_kind=np.asarray(kind),
        dof_entity=np.asarray(ent, np.int64),
        dof_comp=np.asarray(comp, np.int64),
        boundary_dofs=np.sort(np.asarray(bdofs, np.int64)),
        vel_degree=vdeg,
        pres_degree=pdeg,
    )


@dataclass(frozen=True, eq=False)
class FunctionCoeffs:
    values: np.ndarray
    dofmap: DofMap
    role: str = "velocity"

    def __post_init__(self):
        if self.role not in ("velocity", "pressure"):
            raise ValueError(f"role must be 'velocity' or 'pressure', got {self.role!r}")
        n = self.dofmap.n_vel if self.role == "velocity" else self.dofmap.n_pres
        if np.shape(self.values)[0] != n:
            raise ValueError(f"{self.role} coefficient vector has length {np.shape(self.values)[0]}, expected {n}")


@dataclass(frozen=True)
class LocalBasis:
    vel_dofs: np.ndarray  # (m,)
    vel_values: np.ndarray  # (m, 2)
    vel_grads: np.ndarray  # (m, 2, 2), [i, j] = d_j v_i
    pres_dofs: np.ndarray
    pres_values: np.ndarray
    pres_grads: np.ndarray


def eval_basis(t, method, T: int, point) -> LocalBasis:
    """Local velocity and pressure basis of triangle ``T`` at barycentric ``point``."""
    dm = method if isinstance(method, DofMap) else build_dofmap(t, method)
    L = np.asarray(point, float).reshape(1, 3)
    gb = t.geometry.grad_bary[T]
    vals, dvals = shape_values(dm.vel_shapes, L)
    grads = dvals[0] @ gb  # (m, 2)
    d = dm.vel_dirs[T]
    pv, pd = shape_values(dm.pres_shapes, L)
    return LocalBasis(
        vel_dofs=dm.vel_dofs[T],
        vel_values=vals[0][:, None] * d,
        vel_grads=d[:, :, None] * grads[:, None, :],
        pres_dofs=dm.pres_dofs[T],
        pres_values=pv[0],
        pres_grads=pd[0] @ gb,
    )


def _gather(coeffs, dofs):
    safe = np.where(dofs >= 0, dofs, 0)
    return np.where(dofs >= 0, np.asarray(coeffs)[safe], 0.0)


def eval_velocity(dm: DofMap, u, elem, bary):
    """Velocity values (n, 2) and gradients (n, 2, 2) at points in parent triangles."""
    t = dm.mesh
    vals, dvals = shape_values(dm.vel_shapes, bary)
    grads = np.einsum("nki,nid->nkd", dvals, t.geometry.grad_bary[elem])
    c = _gather(u, dm.vel_dofs[elem])  # (n, m)
    d = dm.vel_dirs[elem]  # (n, m, 2)
    value = np.einsum("nm,nm,nmi->ni", c, vals, d)
    grad = np.einsum("nm,nmi,nmj->nij", c, d, grads)
    return value, grad


def eval_pressure(dm: DofMap, p, elem, bary):
    vals, _ = shape_values(dm.pres_shapes, bary)
    return np.einsum("nr,nr->n", np.asarray(p)[dm.pres_dofs[elem]], vals)


def interpolate_boundary(t, method, g, edge_degree: int = 10):
    """Boundary dof indices and values representing the Dirichlet trace ``g``.

    CR uses edge means, MINI and BR vertex values, P2P0 vertex and
    edge-midpoint values. ``g(xy)`` maps (n, 2) points to (n, 2) vectors.
    """
    dm = method if isinstance(method, DofMap) else build_dofmap(t, method)
    dofs = dm.boundary_dofs
    if len(dofs) == 0:
        return dofs, np.zeros(0)
    kind = dm.dof_kind[dofs]
    ent = dm.dof_entity[dofs]
    comp = dm.dof_comp[dofs]
    values = np.zeros(len(dofs))
    if dm.method is Method.CR:
        bedges = np.flatnonzero(t.boundary)
        ep = edge_points(t, edge_degree, bedges)
        means = ep.edge_sum(np.asarray(g(ep.xy), float))[bedges] / t.geometry.edge_lengths[bedges, None]
        lookup = np.zeros((t.n_edges, 2))
        lookup[bedges] = means
        values = lookup[ent, comp]
    else:
        pts = np.where(
            (kind == KIND_VERTEX)[:, None],
            t.vertices[np.where(kind == KIND_VERTEX, ent, 0)],
            t.geometry.edge_midpoints[np.where(kind == KIND_EDGE, ent, 0)],
        )
        gv = np.asarray(g(pts), float)
        values = gv[np.arange(len(dofs)), comp]
    return dofs, values
