"""Triangle and edge quadrature.

Triangle rules are literal symmetric tables (:mod:`stokeslab._trirules`);
edge rules are Gauss-Legendre on [0, 1]. :func:`element_points` maps a rule
onto every triangle of a mesh and returns a flat point set tagged with the
parent element, optionally cutting triangles along vertical lines so that
fields with kinks or jumps at ``x = const`` are integrated exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._trirules import TRIANGLE_RULES

MAX_TRIANGLE_DEGREE = max(TRIANGLE_RULES)
MAX_EDGE_DEGREE = 10


class QuadratureError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class QuadRule:
    """Reference rule: barycentric ``points`` (n, 3) for triangles, (n, 2) for edges."""

    points: np.ndarray
    weights: np.ndarray
    exactness: int

    def __len__(self):
        return len(self.weights)


@lru_cache(maxsize=None)
def triangle_rule(degree: int) -> QuadRule:
    """Symmetric rule on conv{(0,0),(1,0),(0,1)} exact up to total degree ``degree``."""
    if not 1 <= degree <= MAX_TRIANGLE_DEGREE:
        raise QuadratureError(f"triangle rule degree must be in 1..{MAX_TRIANGLE_DEGREE}, got {degree}")
    pts, wts = TRIANGLE_RULES[degree]
    p = np.array(pts, float)
    w = np.array(wts, float)
    p.flags.writeable = w.flags.writeable = False
    return QuadRule(p, w, degree)


@lru_cache(maxsize=None)
def edge_rule(degree: int) -> QuadRule:
    """Gauss rule on [0, 1]; points given as (1 - s, s)."""
    if not 1 <= degree <= MAX_EDGE_DEGREE:
        raise QuadratureError(f"edge rule degree must be in 1..{MAX_EDGE_DEGREE}, got {degree}")
    n = degree // 2 + 1
    x, w = np.polynomial.legendre.leggauss(n)
    s = 0.5 * (x + 1.0)
    p = np.column_stack([1.0 - s, s])
    w = 0.5 * w
    p.flags.writeable = w.flags.writeable = False
    return QuadRule(p, w, 2 * n - 1)


@dataclass(frozen=True, eq=False)
class QuadPoints:
    """Flat physical quadrature point set over a mesh.

    ``elem[k]`` is the parent triangle of point k, ``bary[k]`` its barycentric
    coordinates in that triangle, ``xy[k]`` the physical point and ``w[k]``
    the physical weight.
    """

    elem: np.ndarray
    bary: np.ndarray
    xy: np.ndarray
    w: np.ndarray
    n_elements: int

    def element_sum(self, values: np.ndarray) -> np.ndarray:
        """Integrate pointwise ``values`` (leading axis = points) per element."""
        v = np.asarray(values)
        wv = self.w.reshape((-1,) + (1,) * (v.ndim - 1)) * v
        out = np.zeros((self.n_elements,) + v.shape[1:])
        np.add.at(out, self.elem, wv)
        return out

    def integrate(self, values: np.ndarray) -> np.ndarray:
        v = np.asarray(values)
        return np.tensordot(self.w, v, axes=(0, 0))


def map_points(corners: np.ndarray, bary: np.ndarray) -> np.ndarray:
    """Physical points ``sum_i bary_i corners_i`` for corners (..., 3, 2)."""
    return np.einsum("qi,...id->...qd", bary, corners)


def element_points(t, degree: int, split_x=(), elements=None) -> QuadPoints:
    """Quadrature points of ``triangle_rule(degree)`` on the triangles of ``t``.

    Triangles crossing one of the vertical lines ``x = c`` in ``split_x`` are
    cut along them and each convex piece is fan-triangulated, so the rule's
    exactness holds piecewise.
    """
    rule = triangle_rule(min(max(degree, 1), MAX_TRIANGLE_DEGREE))
    elems = np.arange(t.n_triangles) if elements is None else np.asarray(elements)
    corners = t.vertices[t.triangles[elems]]
    area = t.geometry.areas[elems]
    cut = np.zeros(len(elems), bool)
    cuts = np.asarray(sorted(split_x), float)
    if len(cuts):
        xmin = corners[..., 0].min(axis=1)
        xmax = corners[..., 0].max(axis=1)
        span = xmax - xmin
        for c in cuts:
            cut |= (xmin < c - 1e-14 * span) & (xmax > c + 1e-14 * span)

    keep = ~cut
    nq = len(rule)
    e_list = [np.repeat(elems[keep], nq)]
    b_list = [np.tile(rule.points, (int(keep.sum()), 1))]
    w_list = [(2.0 * area[keep, None] * rule.weights[None, :]).ravel()]
    for k in np.flatnonzero(cut):
        P = corners[k]
        for sub in _split_polygon(P, cuts):
            sub_area = 0.5 * abs(
                (sub[1, 0] - sub[0, 0]) * (sub[2, 1] - sub[0, 1])
                - (sub[2, 0] - sub[0, 0]) * (sub[1, 1] - sub[0, 1])
            )
            if sub_area <= 1e-15 * area[k]:
                continue
            xy = rule.points @ sub
            e_list.append(np.full(nq, elems[k]))
            b_list.append(_barycentric(P, xy))
            w_list.append(2.0 * sub_area * rule.weights)
    elem = np.concatenate(e_list)
    bary = np.concatenate(b_list)
    xy = np.einsum("qi,qid->qd", bary, t.vertices[t.triangles[elem]])
    return QuadPoints(elem, bary, xy, np.concatenate(w_list), t.n_triangles)


def _barycentric(P: np.ndarray, xy: np.ndarray) -> np.ndarray:
    M = np.array([[P[0, 0], P[1, 0], P[2, 0]], [P[0, 1], P[1, 1], P[2, 1]], [1.0, 1.0, 1.0]])
    rhs = np.vstack([xy.T, np.ones(len(xy))])
    return np.linalg.solve(M, rhs).T


def _clip(poly, c, keep_left):
    out = []
    n = len(poly)
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        ina = a[0] <= c if keep_left else a[0] >= c
        inb = b[0] <= c if keep_left else b[0] >= c
        if ina:
            out.append(a)
        if ina != inb:
            s = (c - a[0]) / (b[0] - a[0])
            out.append(np.array([c, a[1] + s * (b[1] - a[1])]))
    return out


def _split_polygon(P, cuts):
    """Sub-triangles of triangle ``P`` cut by the vertical lines ``x = cuts``."""
    bounds = np.concatenate([[-np.inf], cuts, [np.inf]])
    pieces = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        poly = [p for p in P]
        if np.isfinite(lo):
            poly = _clip(poly, lo, keep_left=False)
        if len(poly) >= 3 and np.isfinite(hi):
            poly = _clip(poly, hi, keep_left=True)
        if len(poly) < 3:
            continue
        for i in range(1, len(poly) - 1):
            pieces.append(np.array([poly[0], poly[i], poly[i + 1]]))
    return pieces


@dataclass(frozen=True, eq=False)
class EdgePoints:
    """Flat edge quadrature set: ``s`` is the parameter from ``edges[e, 0]`` to ``edges[e, 1]``."""

    edge: np.ndarray
    s: np.ndarray
    xy: np.ndarray
    w: np.ndarray
    n_edges: int

    def edge_sum(self, values):
        v = np.asarray(values)
        wv = self.w.reshape((-1,) + (1,) * (v.ndim - 1)) * v
        out = np.zeros((self.n_edges,) + v.shape[1:])
        np.add.at(out, self.edge, wv)
        return out


def edge_points(t, degree: int, edges=None) -> EdgePoints:
    rule = edge_rule(degree)
    idx = np.arange(t.n_edges) if edges is None else np.asarray(edges)
    ev = t.vertices[t.edges[idx]]
    nq = len(rule)
    xy = np.einsum("qi,eid->eqd", rule.points, ev).reshape(-1, 2)
    w = (t.geometry.edge_lengths[idx, None] * rule.weights[None, :]).ravel()
    return EdgePoints(np.repeat(idx, nq), np.tile(rule.points[:, 1], len(idx)), xy, w, t.n_edges)


def edge_points_in_triangle(t, ep: EdgePoints, side: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Parent triangle and barycentric coordinates of edge points seen from one side.

    ``side`` selects ``edge_tris[:, side]``; for boundary edges side 1 falls
    back to the single neighbour.
    """
    tri = t.edge_tris[ep.edge, side]
    tri = np.where(tri < 0, t.edge_tris[ep.edge, 0], tri)
    a = t.edges[ep.edge, 0]
    b = t.edges[ep.edge, 1]
    verts = t.triangles[tri]
    bary = np.zeros((len(tri), 3))
    rows = np.arange(len(tri))
    bary[rows, np.argmax(verts == a[:, None], axis=1)] = 1.0 - ep.s
    bary[rows, np.argmax(verts == b[:, None], axis=1)] += ep.s
    return tri, bary
