"""Conforming triangulations of the square, rhombus and L-shaped domains.

A :class:`Triangulation` is built once from a vertex array and a triangle
array; edges, adjacency and boundary flags are derived on construction and
all arrays are frozen. Geometric quantities are computed lazily.

Examples
--------
>>> t = make_mesh("lshape", level=2)
>>> t.n_triangles
96
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

DOMAINS = {
    "square": np.array([[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]]),
    "rhombus": np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]]),
    "lshape": np.array(
        [[-1.0, -1.0], [0.0, -1.0], [0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [-1.0, 1.0]]
    ),
}
DOMAIN_AREA = {"square": 4.0, "rhombus": 2.0, "lshape": 3.0}
CUSTOM = "custom"  # arbitrary polygon: only orientation and Euler checks apply


class MeshError(ValueError):
    """Raised when a triangulation violates a structural invariant."""


def _frozen(a, dtype):
    a = np.ascontiguousarray(a, dtype=dtype)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Geometry:
    """Per-entity geometric data of a triangulation.

    ``normals[e]`` points out of ``edge_tris[e, 0]`` (the lower-index
    neighbour); for boundary edges this is the outer normal of the domain.
    ``tri_edge_sign[T, i]`` is +1 when ``normals`` of the edge opposite local
    vertex ``i`` is outward for ``T`` and -1 otherwise.
    """

    areas: np.ndarray
    centroids: np.ndarray
    diameters: np.ndarray
    grad_bary: np.ndarray  # (nT, 3, 2) constant gradients of the barycentric coordinates
    edge_midpoints: np.ndarray
    edge_lengths: np.ndarray
    normals: np.ndarray
    tri_edge_sign: np.ndarray


@dataclass(frozen=True, eq=False)
class Triangulation:
    vertices: np.ndarray
    triangles: np.ndarray
    domain: str
    level: int = 0
    edges: np.ndarray = field(init=False)
    edge_tris: np.ndarray = field(init=False)
    boundary: np.ndarray = field(init=False)
    tri_edges: np.ndarray = field(init=False)

    def __post_init__(self):
        if self.domain not in DOMAINS and self.domain != CUSTOM:
            raise MeshError(f"unknown domain tag {self.domain!r}")
        v = _frozen(self.vertices, float)
        t = _frozen(self.triangles, np.int64)
        if v.ndim != 2 or v.shape[1] != 2 or t.ndim != 2 or t.shape[1] != 3:
            raise MeshError("vertices must be (n, 2) and triangles (m, 3)")
        if not np.all(np.isfinite(v)):
            raise MeshError("non-finite vertex coordinates")
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "triangles", t)

        # edge opposite local vertex i joins the other two
        local = t[:, [[1, 2], [2, 0], [0, 1]]].reshape(-1, 2)
        keys = np.sort(local, axis=1)
        edges, inverse, counts = np.unique(
            keys, axis=0, return_inverse=True, return_counts=True
        )
        inverse = inverse.ravel()
        if np.any(counts > 2):
            raise MeshError("edge shared by more than two triangles")
        tri_of = np.repeat(np.arange(len(t)), 3)
        order = np.argsort(inverse, kind="stable")
        edge_tris = -np.ones((len(edges), 2), dtype=np.int64)
        starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
        edge_tris[:, 0] = tri_of[order[starts]]
        two = counts == 2
        edge_tris[two, 1] = tri_of[order[starts[two] + 1]]
        object.__setattr__(self, "edges", _frozen(edges, np.int64))
        object.__setattr__(self, "edge_tris", _frozen(edge_tris, np.int64))
        object.__setattr__(self, "boundary", _frozen(counts == 1, bool))
        object.__setattr__(self, "tri_edges", _frozen(inverse.reshape(-1, 3), np.int64))
        self.check()

    # -- sizes -------------------------------------------------------------
    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def interior_edges(self) -> np.ndarray:
        return np.flatnonzero(~self.boundary)

    @cached_property
    def boundary_vertices(self) -> np.ndarray:
        mask = np.zeros(self.n_vertices, bool)
        mask[self.edges[self.boundary].ravel()] = True
        return mask

    @cached_property
    def vertex_patch_sizes(self) -> np.ndarray:
        """Number of triangles containing each vertex."""
        return np.bincount(self.triangles.ravel(), minlength=self.n_vertices)

    # -- geometry ----------------------------------------------------------
    def signed_areas(self) -> np.ndarray:
        p = self.vertices[self.triangles]
        d1 = p[:, 1] - p[:, 0]
        d2 = p[:, 2] - p[:, 0]
        return 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])

    @cached_property
    def geometry(self) -> Geometry:
        p = self.vertices[self.triangles]
        areas = self.signed_areas()
        centroids = p.mean(axis=1)
        sides = p[:, [1, 2, 0]] - p[:, [2, 0, 1]]  # side opposite vertex i
        side_len = np.linalg.norm(sides, axis=2)
        diameters = side_len.max(axis=1)
        # grad lambda_i is the inward normal of the opposite side scaled by |E|/(2|T|)
        rot = np.stack([-sides[..., 1], sides[..., 0]], axis=-1)
        grad_bary = -rot / (2.0 * areas[:, None, None])

        ev = self.vertices[self.edges]
        mids = ev.mean(axis=1)
        tang = ev[:, 1] - ev[:, 0]
        lengths = np.linalg.norm(tang, axis=1)
        nrm = np.stack([tang[:, 1], -tang[:, 0]], axis=1) / lengths[:, None]
        owner = self.edge_tris[:, 0]
        flip = np.einsum("ij,ij->i", nrm, mids - centroids[owner]) < 0
        nrm[flip] *= -1.0
        sign = np.where(self.edge_tris[self.tri_edges, 0] == np.arange(self.n_triangles)[:, None], 1.0, -1.0)
        return Geometry(
            areas=_frozen(areas, float),
            centroids=_frozen(centroids, float),
            diameters=_frozen(diameters, float),
            grad_bary=_frozen(grad_bary, float),
            edge_midpoints=_frozen(mids, float),
            edge_lengths=_frozen(lengths, float),
            normals=_frozen(nrm, float),
            tri_edge_sign=_frozen(sign, float),
        )

    @property
    def h(self) -> np.ndarray:
        return self.geometry.diameters

    # -- validation --------------------------------------------------------
    def check(self, tol: float = 1e-12) -> None:
        """Assert orientation, Euler formula and boundary conformity."""
        t = self.triangles
        if np.any(t < 0) or np.any(t >= self.n_vertices):
            raise MeshError("triangle index out of range")
        if np.any((t[:, 0] == t[:, 1]) | (t[:, 1] == t[:, 2]) | (t[:, 0] == t[:, 2])):
            raise MeshError("degenerate triangle indices")
        if np.any(self.signed_areas() <= 0):
            raise MeshError("triangle not counterclockwise")
        if self.n_vertices - self.n_edges + self.n_triangles != 1:
            raise MeshError("Euler formula #V-#E+#T=1 violated")
        if self.domain == CUSTOM:
            return
        area = self.signed_areas().sum()
        if abs(area - DOMAIN_AREA[self.domain]) > tol * DOMAIN_AREA[self.domain]:
            raise MeshError(f"total area {area} does not match domain {self.domain}")
        poly = DOMAINS[self.domain]
        ev = self.vertices[self.edges[self.boundary]]
        on = np.zeros(len(ev), bool)
        for a, b in zip(poly, np.roll(poly, -1, axis=0)):
            on |= _on_segment(ev[:, 0], a, b, tol) & _on_segment(ev[:, 1], a, b, tol)
        if not on.all():
            raise MeshError("boundary edge off the domain boundary (hanging node?)")
        perim = np.linalg.norm(np.roll(poly, -1, axis=0) - poly, axis=1).sum()
        blen = np.linalg.norm(ev[:, 1] - ev[:, 0], axis=1).sum()
        if abs(blen - perim) > 1e-10 * perim:
            raise MeshError("boundary edges do not cover the domain boundary exactly once")


def _on_segment(p, a, b, tol):
    d = b - a
    rel = p - a
    cross = d[0] * rel[:, 1] - d[1] * rel[:, 0]
    s = rel @ d / (d @ d)
    return (np.abs(cross) <= tol * (d @ d)) & (s >= -tol) & (s <= 1 + tol)


def make_square() -> Triangulation:
    """Criss-cross split of (-1,1)^2 into four triangles around the origin."""
    v = [[-1, -1], [1, -1], [1, 1], [-1, 1], [0, 0]]
    t = [[0, 1, 4], [1, 2, 4], [2, 3, 4], [3, 0, 4]]
    return Triangulation(np.array(v, float), np.array(t), "square")


def make_rhombus() -> Triangulation:
    """The two-triangle rhombus T1=conv{(0,1),(0,-1),(1,0)}, T2=conv{(0,-1),(0,1),(-1,0)}."""
    v = [[0, 1], [0, -1], [1, 0], [-1, 0]]
    t = [[0, 1, 2], [1, 0, 3]]
    return Triangulation(np.array(v, float), np.array(t), "rhombus")


def make_lshape() -> Triangulation:
    """Six triangles, each containing the re-entrant corner (0,0)."""
    v = [[-1, -1], [0, -1], [-1, 0], [0, 0], [1, 0], [-1, 1], [0, 1], [1, 1]]
    t = [[3, 4, 7], [3, 7, 6], [3, 6, 5], [3, 5, 2], [3, 2, 0], [3, 0, 1]]
    return Triangulation(np.array(v, float), np.array(t), "lshape")


_MAKERS = {"square": make_square, "rhombus": make_rhombus, "lshape": make_lshape}


def red_refine(t: Triangulation) -> Triangulation:
    """Split every triangle into four congruent children via edge midpoints."""
    mids = t.vertices[t.edges].mean(axis=1)
    vertices = np.vstack([t.vertices, mids])
    m = t.n_vertices + t.tri_edges  # m[:, i] is the midpoint opposite vertex i
    a, b, c = t.triangles.T
    ma, mb, mc = m.T
    children = np.stack(
        [
            np.stack([a, mc, mb], axis=1),
            np.stack([mc, b, ma], axis=1),
            np.stack([mb, ma, c], axis=1),
            np.stack([ma, mb, mc], axis=1),
        ],
        axis=1,
    ).reshape(-1, 3)
    return Triangulation(vertices, children, t.domain, t.level + 1)


def make_mesh(domain: str, level: int = 0) -> Triangulation:
    """Initial mesh of ``domain`` red-refined ``level`` times."""
    try:
        t = _MAKERS[domain]()
    except KeyError:
        raise MeshError(f"unknown domain {domain!r}; expected one of {sorted(_MAKERS)}") from None
    for _ in range(level):
        t = red_refine(t)
    return t


def dump(t: Triangulation, path) -> None:
    """Write the plain-text ``V E T`` format (17 significant digits)."""
    with open(path, "w") as fh:
        fh.write(f"{t.n_vertices} {t.n_edges} {t.n_triangles}\n")
        for x, y in t.vertices:
            fh.write(f"{x:.17g} {y:.17g}\n")
        for (a, b), bd in zip(t.edges, t.boundary):
            fh.write(f"{a} {b} {int(bd)}\n")
        for i0, i1, i2 in t.triangles:
            fh.write(f"{i0} {i1} {i2}\n")


def load(path, domain: str, level: int = 0) -> Triangulation:
    """Read a mesh written by :func:`dump`; edges are re-derived and cross-checked."""
    with open(path) as fh:
        nv, ne, nt = (int(s) for s in fh.readline().split())
        rows = [fh.readline().split() for _ in range(nv + ne + nt)]
    v = np.array(rows[:nv], float)
    e = np.array(rows[nv : nv + ne], np.int64)
    tri = np.array(rows[nv + ne :], np.int64)
    t = Triangulation(v, tri, domain, level)
    if t.n_edges != ne or not np.array_equal(t.edges, e[:, :2]) or not np.array_equal(
        t.boundary, e[:, 2].astype(bool)
    ):
        raise MeshError("edge table in file inconsistent with triangles")
    return t
