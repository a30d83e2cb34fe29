"""Property suites behind ``stokeslab verify``.

Each check returns a :class:`Check`; a suite is a list of checks. Values
are compared with independently derived closed forms where one exists.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analysis import element_divergence, pressure_error
from .companions import (
    cr_components,
    cr_eval,
    cr_gradient,
    inc_interpolate,
    j2,
    j3,
    pi0,
    random_cr_fields,
)
from .experiments import (
    EPS_SWEEP,
    MINI_FLOOR,
    colliding_flow,
    mini_pressure_floor,
    polynomial_flow,
    rhombus_cr_pressure,
    rhombus_eps,
    rhombus_px,
    solve_case,
)
from .mesh import make_mesh
from .pseudostress import ps_from_cr
from .quadrature import edge_points, edge_points_in_triangle, element_points
from .spaces import Method

MESH_DOMAINS = ("square", "lshape", "rhombus")


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    ok: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} [{self.suite}] {self.name}: {self.detail}"


def _check(suite, name, value, tol):
    return Check(suite, name, bool(np.isfinite(value) and value <= tol), f"{value:.3e} (tol {tol:g})")


def companion_defects(t, v):
    """Scaled defects of the J2/J3 conservation and mean identities for fields ``v`` (nE, n)."""
    qp = element_points(t, 6)
    a, ga = cr_eval(t, v, qp.elem, qp.bary)
    J2, J3 = j2(t, v), j3(t, v)
    _, g2 = J2.evaluate(qp.elem, qp.bary)
    b3, g3 = J3.evaluate(qp.elem, qp.bary)
    area = t.geometry.areas
    # per-sample scale ||grad_NC v|| * |T|
    scale = np.sqrt(np.einsum("t,t...->...", area, np.sum(cr_gradient(t, v) ** 2, axis=-1)))
    scale = np.maximum(scale, 1e-300)
    cons2 = np.abs(qp.element_sum(ga - g2)).max(axis=(0, 2)) / (scale * area.max())
    cons3 = np.abs(qp.element_sum(ga - g3)).max(axis=(0, 2)) / (scale * area.max())
    mean3 = np.abs(qp.element_sum(a - b3)).max(axis=0) / (scale * area.max())
    return float(cons2.max()), float(cons3.max()), float(mean3.max())


def bubble_normalisation(t):
    """Largest deviation of the edge/element means of the scaled bubbles from 1."""
    from .companions import CompanionOutput

    ne, nt = t.n_edges, t.n_triangles
    eb = CompanionOutput(t, 2, np.zeros(t.n_vertices), np.ones(ne), np.zeros(nt))
    tb = CompanionOutput(t, 3, np.zeros(t.n_vertices), np.zeros(ne), np.ones(nt))
    ep = edge_points(t, 6)
    tri, bary = edge_points_in_triangle(t, ep)
    edge_mean = ep.edge_sum(eb.evaluate(tri, bary)[0]) / t.geometry.edge_lengths
    qp = element_points(t, 6)
    elem_mean = qp.element_sum(tb.evaluate(qp.elem, qp.bary)[0]) / t.geometry.areas
    return float(np.abs(edge_mean - 1).max()), float(np.abs(elem_mean - 1).max())


def random_polynomial_field(rng, degree: int = 4):
    """Random vector polynomial of total degree ``degree`` and its gradient."""
    powers = [(i, j) for i in range(degree + 1) for j in range(degree + 1 - i)]
    coef = rng.standard_normal((2, len(powers)))

    def u(xy):
        x, y = xy[:, 0], xy[:, 1]
        return np.stack([sum(c[k] * x**i * y**j for k, (i, j) in enumerate(powers)) for c in coef], axis=1)

    def grad(xy):
        x, y = xy[:, 0], xy[:, 1]
        G = np.zeros((len(xy), 2, 2))
        for r, c in enumerate(coef):
            for k, (i, j) in enumerate(powers):
                if i:
                    G[:, r, 0] += c[k] * i * x ** (i - 1) * y**j
                if j:
                    G[:, r, 1] += c[k] * j * x**i * y ** (j - 1)
        return G

    return u, grad


def interpolation_defect(t, u, grad) -> float:
    """``max_T |grad_NC I_NC u - Pi0 grad u|`` relative to ``max |Pi0 grad u|``."""
    G = cr_gradient(t, cr_components(inc_interpolate(u, t)))
    P = pi0(grad, t)
    return float(np.abs(G - P).max() / max(np.abs(P).max(), 1.0))


# -- suites -------------------------------------------------------------------
def suite_companions(levels=range(4), samples: int = 100, seed: int = 0):
    rng = np.random.default_rng(seed)
    out = []
    for dom in MESH_DOMAINS:
        for lvl in levels:
            t = make_mesh(dom, lvl)
            v = random_cr_fields(t, samples, rng)
            c2, c3, m3 = companion_defects(t, v)
            out.append(_check("companions", f"{dom} L{lvl} J2 conservation", c2, 1e-10))
            out.append(_check("companions", f"{dom} L{lvl} J3 conservation", c3, 1e-10))
            out.append(_check("companions", f"{dom} L{lvl} J3 element means", m3, 1e-10))
        e, b = bubble_normalisation(make_mesh(dom, 1))
        out.append(_check("companions", f"{dom} edge bubble mean", e, 1e-13))
        out.append(_check("companions", f"{dom} element bubble mean", b, 1e-13))
    return out


def suite_interpolation(levels=range(4), fields: int = 20, seed: int = 1):
    rng = np.random.default_rng(seed)
    ex = colliding_flow()
    out = []
    for lvl in levels:
        t = make_mesh("square", lvl)
        out.append(_check("interpolation", f"colliding flow L{lvl}", interpolation_defect(t, ex.u, ex.grad_u), 1e-10))
    t = make_mesh("lshape", 2)
    worst = max(interpolation_defect(t, *random_polynomial_field(rng)) for _ in range(fields))
    out.append(_check("interpolation", f"{fields} random polynomials", worst, 1e-10))
    return out


def suite_conservation(levels=range(4)):
    out = []
    for ex in (colliding_flow(), polynomial_flow()):
        for m in (Method.CR, Method.P2P0, Method.BR):
            worst = 0.0
            for lvl in levels:
                sol, _ = solve_case(ex, m, lvl)
                worst = max(worst, float(np.abs(element_divergence(sol)).max()))
            out.append(_check("conservation", f"{ex.name} {m.label} max |int_T div u_h|", worst, 1e-10))
    return out


def suite_counterexamples():
    out = []
    p_err_cr = []
    for eps in EPS_SWEEP:
        ex = rhombus_eps(eps)
        sol, _ = solve_case(ex, Method.CR, 0)
        right = make_mesh("rhombus").geometry.centroids[:, 0] > 0
        out.append(_check("counterexamples", f"eps={eps:g} u_CR = 0", float(np.abs(sol.u).max()), 1e-10))
        dp = float(np.abs(sol.p - np.where(right, 1, -1) * rhombus_cr_pressure(eps)).max())
        out.append(_check("counterexamples", f"eps={eps:g} p_CR closed form", dp, 1e-10))
        p_err_cr.append(pressure_error(sol, ex))
        mini, _ = solve_case(ex, Method.MINI, 0)
        em = pressure_error(mini, ex)
        floor = mini_pressure_floor(eps)
        out.append(Check("counterexamples", f"eps={eps:g} MINI pressure error", em >= floor - 1e-10 and em > MINI_FLOOR,
                         f"{em:.4f} >= derived floor {floor:.4f} > {MINI_FLOOR}"))
    dec = bool(np.all(np.diff(p_err_cr) < 0))
    out.append(Check("counterexamples", "||p_eps - p_CR|| strictly decreasing", dec,
                     " > ".join(f"{e:.4f}" for e in p_err_cr)))
    ex = rhombus_px()
    mini, _ = solve_case(ex, Method.MINI, 0)
    out.append(_check("counterexamples", "MINI reproduces u=0", float(np.abs(mini.u).max()), 1e-10))
    out.append(_check("counterexamples", "MINI reproduces p=x", pressure_error(mini, ex), 1e-10))
    # P0 pressures on the rhombus with f=(1,0): CR gives +-1/6, P2P0 and BR give +-1/4
    oracle = {Method.CR: np.sqrt(1 / 6), Method.P2P0: np.sqrt(1 / 8), Method.BR: np.sqrt(1 / 8)}
    for m, val in oracle.items():
        sol, _ = solve_case(ex, m, 0)
        e = pressure_error(sol, ex)
        out.append(_check("counterexamples", f"{m.label} pressure error vs closed form", abs(e - val), 1e-10))
        out.append(Check("counterexamples", f"{m.label} pressure error >= ||x - Pi0 x||", e >= 1 / 3 - 1e-12,
                         f"{e:.6f} >= {1 / 3:.6f}"))
    return out


def suite_pseudostress(levels=range(4)):
    out = []
    for ex in (colliding_flow(), polynomial_flow()):
        for lvl in levels:
            t = make_mesh(ex.domain, lvl)
            field = ps_from_cr(t, ex.f, ex.dirichlet, f_degree=ex.f_degree)
            out.append(_check("pseudostress", f"{ex.name} L{lvl} int tr sigma", abs(field.integral_of_trace()), 1e-10))
    return out


SUITES = {
    "companions": suite_companions,
    "interpolation": suite_interpolation,
    "conservation": suite_conservation,
    "counterexamples": suite_counterexamples,
    "pseudostress": suite_pseudostress,
}


def run_all(names=None):
    checks = []
    for name in names or SUITES:
        checks.extend(SUITES[name]())
    return checks
