"""Piecewise-constant projection, non-conforming interpolation and conforming companions.

Crouzeix-Raviart fields are passed as edge (midpoint) coefficient arrays of
shape ``(nE,)`` or ``(nE, k)``; a trailing axis is carried through every
operator, so vector fields and batches of random samples are handled
componentwise in one call.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .quadrature import edge_points, edge_points_in_triangle, element_points
from .spaces import FunctionCoeffs, Method, build_dofmap, shape_values

EDGE_BUBBLE_SCALE = 6.0
ELEMENT_BUBBLE_SCALE = 60.0


def pi0(field, t, degree: int = 10, split_x=()) -> np.ndarray:
    """Element means of ``field(xy)``; shape ``(nT,) + field.shape[1:]``."""
    qp = element_points(t, degree, split_x)
    vals = np.asarray(field(qp.xy), float)
    area = t.geometry.areas.reshape((-1,) + (1,) * (vals.ndim - 1))
    return qp.element_sum(vals) / area


# -- Crouzeix-Raviart field evaluation ----------------------------------------
def cr_eval(t, v, elem, bary):
    """Values and gradients of a CR field at barycentric points of parent triangles."""
    v = np.asarray(v, float)
    c = v[t.tri_edges[elem]]  # (n, 3, ...)
    shape = 1.0 - 2.0 * np.asarray(bary)
    val = np.einsum("ni,ni...->n...", shape, c)
    grad = -2.0 * np.einsum("nid,ni...->n...d", t.geometry.grad_bary[elem], c)
    return val, grad


def cr_gradient(t, v) -> np.ndarray:
    """Piecewise gradient of a CR field, shape ``(nT, ..., 2)``."""
    c = np.asarray(v, float)[t.tri_edges]
    return -2.0 * np.einsum("tid,ti...->t...d", t.geometry.grad_bary, c)


def inc_interpolate(v, t, degree: int = 10) -> FunctionCoeffs:
    """CR interpolant with edge means ``(1/|E|) int_E v ds`` as dofs, on every edge."""
    ep = edge_points(t, degree)
    means = ep.edge_sum(np.asarray(v(ep.xy), float)) / t.geometry.edge_lengths[:, None]
    dm = build_dofmap(t, Method.CR)
    return FunctionCoeffs(np.concatenate([means[:, 0], means[:, 1]]), dm, "velocity")


def cr_components(coeffs: FunctionCoeffs) -> np.ndarray:
    """Edge coefficients (nE, 2) of a CR velocity."""
    if coeffs.dofmap.method is not Method.CR:
        raise ValueError("expected a Crouzeix-Raviart velocity")
    nE = coeffs.dofmap.mesh.n_edges
    return np.column_stack([coeffs.values[:nE], coeffs.values[nE:]])


# -- companions -------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class CompanionOutput:
    """Continuous field ``sum_z a_z phi_z + sum_E b_E (6 phi_a phi_b) + sum_T c_T (60 phi_a phi_b phi_c)``.

    Coefficient arrays may carry a trailing sample/component axis.
    """

    mesh: object
    degree: int
    vertex_values: np.ndarray
    edge_coeffs: np.ndarray
    elem_coeffs: np.ndarray

    def evaluate(self, elem, bary):
        t = self.mesh
        elem = np.asarray(elem)
        names = (
            [f"p1_{i}" for i in range(3)]
            + [f"p2e_{i}" for i in range(3)]
            + ["b3"]
        )
        vals, dvals = shape_values(names, bary)
        scale = np.array([1, 1, 1, 1.5, 1.5, 1.5, ELEMENT_BUBBLE_SCALE])  # 6 phi_a phi_b = 1.5 * (4 phi_a phi_b)
        vals = vals * scale
        grads = np.einsum("nki,nid->nkd", dvals * scale[:, None], t.geometry.grad_bary[elem])
        c = np.concatenate(
            [
                self.vertex_values[t.triangles[elem]],
                self.edge_coeffs[t.tri_edges[elem]],
                self.elem_coeffs[elem][:, None],
            ],
            axis=1,
        )
        return np.einsum("nk,nk...->n...", vals, c), np.einsum("nkd,nk...->n...d", grads, c)


def _vertex_average(t, v):
    c = np.asarray(v, float)[t.tri_edges]  # (nT, 3, ...)
    traces = c.sum(axis=1, keepdims=True) - 2.0 * c  # value at local vertex j
    acc = np.zeros((t.n_vertices,) + c.shape[2:])
    np.add.at(acc, t.triangles, traces)
    avg = acc / t.vertex_patch_sizes.reshape((-1,) + (1,) * (acc.ndim - 1))
    avg[t.boundary_vertices] = 0.0
    return avg


def j1(t, v) -> CompanionOutput:
    """Nodal averaging into P1 with zero boundary values."""
    v = np.asarray(v, float)
    zero_e = np.zeros((t.n_edges,) + v.shape[1:])
    zero_t = np.zeros((t.n_triangles,) + v.shape[1:])
    return CompanionOutput(t, 1, _vertex_average(t, v), zero_e, zero_t)


def j2(t, v, edge_degree: int = 5) -> CompanionOutput:
    """``J1 v`` plus interior edge bubbles restoring the edge means of ``v``."""
    v = np.asarray(v, float)
    base = j1(t, v)
    interior = t.interior_edges
    ep = edge_points(t, edge_degree, interior)
    tri, bary = edge_points_in_triangle(t, ep)
    diff = cr_eval(t, v, tri, bary)[0] - base.evaluate(tri, bary)[0]
    lengths = t.geometry.edge_lengths.reshape((-1,) + (1,) * (v.ndim - 1))
    mean = ep.edge_sum(diff) / lengths
    coeffs = np.zeros_like(mean)
    coeffs[interior] = mean[interior]
    return CompanionOutput(t, 2, base.vertex_values, coeffs, base.elem_coeffs)


def j3(t, v, elem_degree: int = 5) -> CompanionOutput:
    """``J2 v`` plus element bubbles restoring the element means of ``v``."""
    v = np.asarray(v, float)
    base = j2(t, v)
    qp = element_points(t, elem_degree)
    diff = cr_eval(t, v, qp.elem, qp.bary)[0] - base.evaluate(qp.elem, qp.bary)[0]
    area = t.geometry.areas.reshape((-1,) + (1,) * (v.ndim - 1))
    return CompanionOutput(t, 3, base.vertex_values, base.edge_coeffs, qp.element_sum(diff) / area)


def companion(t, v, k: int) -> CompanionOutput:
    try:
        op = {1: j1, 2: j2, 3: j3}[k]
    except KeyError:
        raise ValueError(f"companion degree must be 1, 2 or 3, got {k}") from None
    return op(t, v)


def random_cr_fields(t, n: int, rng=None) -> np.ndarray:
    """``n`` random members of CR^1_0 as an (nE, n) coefficient array."""
    rng = np.random.default_rng(rng)
    v = rng.standard_normal((t.n_edges, n))
    v[t.boundary] = 0.0
    return v


def companion_constants(t, v, degree: int = 6):
    """Empirical constants of the companion estimates for CR fields ``v`` (nE,) or (nE, n).

    Returns a dict with, per sample, ``stability = ||grad_NC(v - J3 v)|| / ||grad_NC v||``
    and ``approx_k = ||h_T^{-1}(v - J_k v)|| / ||grad_NC v||`` for k = 1, 2, 3.
    """
    v = np.asarray(v, float)
    qp = element_points(t, degree)
    a, ga = cr_eval(t, v, qp.elem, qp.bary)
    w = qp.w.reshape((-1,) + (1,) * (v.ndim - 1))
    hinv = (1.0 / t.h[qp.elem]).reshape(w.shape)
    norm = np.sqrt(np.sum(w * np.sum(ga**2, axis=-1), axis=0))
    norm = np.where(norm > 0, norm, np.inf)
    out = {}
    for k, op in ((1, j1), (2, j2), (3, j3)):
        b, gb = op(t, v).evaluate(qp.elem, qp.bary)
        out[f"approx_{k}"] = np.sqrt(np.sum(w * (hinv * (a - b)) ** 2, axis=0)) / norm
        if k == 3:
            out["stability"] = np.sqrt(np.sum(w * np.sum((ga - gb) ** 2, axis=-1), axis=0)) / norm
    return out
