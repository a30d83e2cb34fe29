"""Saddle-point systems  a(u, v) - b(p, v) = F(v),  b(q, u) = 0,  int p = 0."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .quadrature import MAX_TRIANGLE_DEGREE, element_points, triangle_rule
from .spaces import DofMap, Method, build_dofmap, interpolate_boundary, shape_values


class AssemblyError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SaddleSystem:
    """Full (unreduced) blocks plus the lifted Dirichlet data.

    ``A`` and ``B`` act on all velocity dofs; ``g`` holds the boundary values
    actually imposed (zero on free dofs). ``g_nodal`` is the raw output of
    :func:`~stokeslab.spaces.interpolate_boundary` and ``flux_defect`` its net
    outflow, which is removed before lifting so that the discrete data are
    compatible with ``div u = 0``.
    """

    dofmap: DofMap
    A: sp.csr_matrix
    B: sp.csr_matrix
    F: np.ndarray
    c: np.ndarray
    g: np.ndarray
    g_nodal: np.ndarray
    flux_defect: float

    @property
    def mesh(self):
        return self.dofmap.mesh

    @property
    def method(self) -> Method:
        return self.dofmap.method

    @property
    def free(self) -> np.ndarray:
        return self.dofmap.free_mask


def _stiffness_and_divergence(dm: DofMap, degree: int):
    t = dm.mesh
    rule = triangle_rule(degree)
    area = t.geometry.areas
    vals, dvals = shape_values(dm.vel_shapes, rule.points)
    grads = np.einsum("qki,tid->tqkd", dvals, t.geometry.grad_bary)  # (nT, nq, m, 2)
    wq = 2.0 * area[:, None] * rule.weights[None, :]
    d = dm.vel_dirs
    S = np.einsum("tq,tqkd,tqld->tkl", wq, grads, grads)
    A_loc = np.einsum("tkd,tld->tkl", d, d) * S
    pv, _ = shape_values(dm.pres_shapes, rule.points)
    div = np.einsum("tkd,tqkd->tqk", d, grads)
    B_loc = np.einsum("tq,qr,tqk->trk", wq, pv, div)
    return A_loc, B_loc


def _is_piecewise_constant(f, t) -> bool:
    if callable(f):
        return False
    f = np.asarray(f)
    if f.shape != (t.n_triangles, 2):
        raise AssemblyError(f"piecewise-constant source must have shape ({t.n_triangles}, 2), got {f.shape}")
    return True


def _load(dm: DofMap, f, degree: int, split_x=()):
    t = dm.mesh
    qp = element_points(t, degree, split_x)
    fv = np.asarray(f[qp.elem], float) if _is_piecewise_constant(f, t) else np.asarray(f(qp.xy), float)
    vals, _ = shape_values(dm.vel_shapes, qp.bary)
    contrib = qp.w[:, None] * vals * np.einsum("nd,nmd->nm", fv, dm.vel_dirs[qp.elem])
    dofs = dm.vel_dofs[qp.elem]
    keep = dofs >= 0
    return np.bincount(dofs[keep], weights=contrib[keep], minlength=dm.n_vel)


def local_matrices(t, method, T: int, f=None, degree=None, split_x=()):
    """Element stiffness (m, m), divergence coupling (r, m) and load (m,) of triangle ``T``.

    Coupling rows are ``int_T q_r div v_m``; columns follow ``dofmap.vel_shapes``.
    """
    dm = method if isinstance(method, DofMap) else build_dofmap(t, method)
    deg = degree or 2 * dm.vel_degree
    A_loc, B_loc = _stiffness_and_divergence(dm, deg)
    load = np.zeros(len(dm.vel_shapes))
    if f is not None:
        qp = element_points(t, min(deg + dm.vel_degree, MAX_TRIANGLE_DEGREE), split_x, elements=[T])
        vals, _ = shape_values(dm.vel_shapes, qp.bary)
        fv = np.asarray(f(qp.xy), float)
        load = np.einsum("n,nm,nm->m", qp.w, vals, fv @ dm.vel_dirs[T].T)
    return A_loc[T], B_loc[T], load


def _scatter(rows, cols, vals, shape):
    keep = (rows >= 0) & (cols >= 0)
    return sp.coo_matrix((vals[keep], (rows[keep], cols[keep])), shape=shape).tocsr()


def pressure_weights(dm: DofMap) -> np.ndarray:
    """Integrals of the pressure basis functions."""
    t = dm.mesh
    area = t.geometry.areas
    if dm.pres_degree == 0:
        return area.copy()
    return np.bincount(t.triangles.ravel(), weights=np.repeat(area / 3.0, 3), minlength=dm.n_pres)


def flux_functional(B: sp.csr_matrix, dofs: np.ndarray) -> np.ndarray:
    """Net outflow of each boundary basis function (column sums of ``B``)."""
    return np.asarray(B[:, dofs].sum(axis=0)).ravel()


def assemble(t, method, f=None, g=None, *, f_degree: int = 0, split_x=(), dofmap=None,
             compatible_flux: bool = True) -> SaddleSystem:
    """Assemble the saddle-point system of ``method`` on ``t``.

    Parameters
    ----------
    f : callable or array_like, optional
        Source ``f(xy) -> (n, 2)`` or element values of shape ``(nT, 2)``;
        zero if omitted.
    g : callable, optional
        Dirichlet trace ``g(xy) -> (n, 2)``; homogeneous if omitted.
    f_degree : int
        Polynomial degree of ``f`` used to pick the load quadrature.
    split_x : sequence of float
        Vertical lines across which ``f`` is discontinuous; triangles are cut
        there so the load is integrated piecewise exactly.
    compatible_flux : bool
        Remove the net outflow of the interpolated boundary data by a
        minimal-norm correction along the flux functional.
    """
    dm = dofmap if dofmap is not None else build_dofmap(t, method)
    if dofmap is not None and (dm.mesh is not t or dm.method is not Method.parse(method)):
        raise AssemblyError("dofmap was built for a different mesh or method")
    vdeg = dm.vel_degree
    A_loc, B_loc = _stiffness_and_divergence(dm, min(2 * vdeg, MAX_TRIANGLE_DEGREE))
    vd = dm.vel_dofs
    m = vd.shape[1]
    rows = np.repeat(vd, m, axis=1).ravel()
    cols = np.tile(vd, (1, m)).ravel()
    A = _scatter(rows, cols, A_loc.ravel(), (dm.n_vel, dm.n_vel))
    pd = dm.pres_dofs
    r = pd.shape[1]
    brow = np.repeat(pd, m, axis=1).ravel()
    bcol = np.tile(vd, (1, r)).ravel()
    B = _scatter(brow, bcol, B_loc.ravel(), (dm.n_pres, dm.n_vel))

    if f is None:
        F = np.zeros(dm.n_vel)
    else:
        deg = min(max(2 * vdeg, f_degree + vdeg), MAX_TRIANGLE_DEGREE)
        F = _load(dm, f, deg, split_x)

    g_full = np.zeros(dm.n_vel)
    if g is not None:
        dofs, vals = interpolate_boundary(t, dm, g)
        g_full[dofs] = vals
    g_nodal = g_full.copy()
    bdofs = dm.boundary_dofs
    defect = 0.0
    if len(bdofs):
        w = flux_functional(B, bdofs)
        defect = float(w @ g_full[bdofs])
        if compatible_flux and w @ w > 0:
            g_full[bdofs] -= w * (defect / (w @ w))
    return SaddleSystem(dm, A, B, F, pressure_weights(dm), g_full, g_nodal, defect)
