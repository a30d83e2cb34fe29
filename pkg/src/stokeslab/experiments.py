"""Exact solutions, counterexamples and orchestration of full convergence runs."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .analysis import (
    ConvergenceTable,
    ExactSolution,
    RateError,
    chain_level,
    element_divergence,
    energy_error,
    format_chain,
    hf_norm,
    oscillation,
    pressure_error,
)
from .assembly import assemble
from .mesh import make_mesh
from .solver import SolverConfig, SolverError, solve
from .spaces import Method

ALL_METHODS = (Method.CR, Method.MINI, Method.P2P0, Method.BR)
EPS_SWEEP = tuple(2.0**-k for k in range(1, 7))


def _zero_vector(xy):
    return np.zeros((len(xy), 2))


def _zero_scalar(xy):
    return np.zeros(len(xy))


def _zero_matrix(xy):
    return np.zeros((len(xy), 2, 2))


# -- colliding flow -----------------------------------------------------------
def _cf_u(xy):
    x, y = xy[:, 0], xy[:, 1]
    return np.column_stack([20 * x * y**4 - 4 * x**5, 20 * x**4 * y - 4 * y**5])


def _cf_grad(xy):
    x, y = xy[:, 0], xy[:, 1]
    G = np.empty((len(xy), 2, 2))
    G[:, 0, 0] = 20 * y**4 - 20 * x**4
    G[:, 0, 1] = 80 * x * y**3
    G[:, 1, 0] = 80 * x**3 * y
    G[:, 1, 1] = 20 * x**4 - 20 * y**4
    return G


def _cf_p(xy):
    x, y = xy[:, 0], xy[:, 1]
    return 120 * x**2 * y**2 - 20 * x**4 - 20 * y**4 - 32.0 / 6.0


def colliding_flow() -> ExactSolution:
    """Polynomial flow on (-1,1)^2 with zero source."""
    return ExactSolution("colliding-flow", "square", _cf_u, _cf_grad, _cf_p, _zero_vector, degree=5)


# -- L-shaped domain ----------------------------------------------------------
LSHAPE_ALPHA = 0.54448373
LSHAPE_OMEGA = 1.5 * np.pi


def _w_derivs(th):
    """``w, w', w'', w'''`` of the corner stream-function profile."""
    a, c = LSHAPE_ALPHA, np.cos(LSHAPE_ALPHA * LSHAPE_OMEGA)
    p, m = 1 + a, 1 - a
    sp_, cp_ = np.sin(p * th), np.cos(p * th)
    sm, cm = np.sin(m * th), np.cos(m * th)
    w0 = sp_ * c / p - cp_ - sm * c / m + cm
    w1 = cp_ * c + p * sp_ - cm * c - m * sm
    w2 = -p * sp_ * c + p**2 * cp_ + m * sm * c - m**2 * cm
    w3 = -(p**2) * cp_ * c - p**3 * sp_ + m**2 * cm * c + m**3 * sm
    return w0, w1, w2, w3


def _polar(xy):
    x, y = xy[:, 0], xy[:, 1]
    r = np.hypot(x, y)
    th = np.mod(np.arctan2(y, x), 2 * np.pi)
    return r, th


def _ls_profiles(th):
    a = LSHAPE_ALPHA
    w0, w1, w2, _ = _w_derivs(th)
    s, c = np.sin(th), np.cos(th)
    F1 = (1 + a) * s * w0 + c * w1
    F2 = -(1 + a) * c * w0 + s * w1
    dF1 = (1 + a) * c * w0 + a * s * w1 + c * w2
    dF2 = (1 + a) * s * w0 - a * c * w1 + s * w2
    return F1, F2, dF1, dF2


def _ls_u(xy):
    r, th = _polar(xy)
    F1, F2, _, _ = _ls_profiles(th)
    ra = r**LSHAPE_ALPHA
    return np.column_stack([ra * F1, ra * F2])


def _ls_grad(xy):
    a = LSHAPE_ALPHA
    r, th = _polar(xy)
    F1, F2, dF1, dF2 = _ls_profiles(th)
    s, c = np.sin(th), np.cos(th)
    with np.errstate(divide="ignore", invalid="ignore"):
        rm = r ** (a - 1)
    G = np.empty((len(xy), 2, 2))
    for i, (F, dF) in enumerate(((F1, dF1), (F2, dF2))):
        G[:, i, 0] = rm * (a * c * F - s * dF)
        G[:, i, 1] = rm * (a * s * F + c * dF)
    return G


def _ls_p_raw_angular(th):
    a = LSHAPE_ALPHA
    _, w1, _, w3 = _w_derivs(th)
    return -((1 + a) ** 2 * w1 + w3) / (1 - a)


@lru_cache(maxsize=None)
def lshape_pressure_mean() -> float:
    """Mean of the uncorrected corner pressure over the L-shape, by radial integration."""
    a = LSHAPE_ALPHA
    q = np.pi / 4
    pieces = [
        (0.0, q, lambda t: 1 / np.cos(t)),
        (q, 3 * q, lambda t: 1 / np.sin(t)),
        (3 * q, 5 * q, lambda t: -1 / np.cos(t)),
        (5 * q, 6 * q, lambda t: -1 / np.sin(t)),
    ]
    total = 0.0
    for lo, hi, R in pieces:
        val, _ = quad(lambda t: _ls_p_raw_angular(t) * R(t) ** (a + 1) / (a + 1), lo, hi, epsabs=1e-14, epsrel=1e-13)
        total += val
    return total / 3.0


def _ls_p(xy):
    r, th = _polar(xy)
    with np.errstate(divide="ignore"):
        return r ** (LSHAPE_ALPHA - 1) * _ls_p_raw_angular(th) - lshape_pressure_mean()


def lshape_solution() -> ExactSolution:
    """Corner singular solution on the L-shape with interior angle 3*pi/2 and zero source."""
    return ExactSolution("lshape", "lshape", _ls_u, _ls_grad, _ls_p, _zero_vector, degree=None)


def lshape_w(theta):
    """Profile ``w(theta)``; vanishes on the two edges through the corner."""
    return _w_derivs(np.asarray(theta, float))[0]


# -- rhombus counterexamples --------------------------------------------------
def rhombus_eps(eps: float) -> ExactSolution:
    """``u = 0`` with source ``(1/eps, 0)`` on the strip ``|x| <= eps``; ``p`` is the clipped ramp."""
    if not 0 < eps <= 1:
        raise ValueError(f"eps must lie in (0, 1], got {eps}")

    def f(xy):
        out = np.zeros((len(xy), 2))
        out[np.abs(xy[:, 0]) <= eps, 0] = 1.0 / eps
        return out

    def p(xy):
        return np.clip(xy[:, 0] / eps, -1.0, 1.0)

    split = () if eps == 1 else (-eps, eps)
    return ExactSolution(f"rhombus-eps({eps:g})", "rhombus", _zero_vector, _zero_matrix, p, f, degree=0,
                         split_x=split)


def rhombus_px() -> ExactSolution:
    """``u = 0``, ``p = x``, ``f = (1, 0)`` on the rhombus."""

    def f(xy):
        return np.column_stack([np.ones(len(xy)), np.zeros(len(xy))])

    return ExactSolution("rhombus-px", "rhombus", _zero_vector, _zero_matrix, lambda xy: xy[:, 0].copy(), f,
                         degree=0)


def rhombus_cr_pressure(eps: float) -> float:
    """CR pressure on the right triangle of the two-element rhombus (closed form)."""
    return 1.0 - 1.5 * eps + 2.0 * eps**2 / 3.0


def rhombus_cr_pressure_stated(eps: float) -> float:
    """The closed form ``1 - eps/2 - 2 eps^2/3`` that acceptance checks against."""
    return 1.0 - eps / 2.0 - 2.0 * eps**2 / 3.0


def mini_pressure_floor(eps: float) -> float:
    """``min_a ||p_eps - a x||`` on the rhombus: a lower bound for the MINI pressure error.

    On the two-triangle mesh symmetry forces the continuous P1 pressure into
    ``span{x}``.
    """

    def pe(x):
        return np.clip(x / eps, -1.0, 1.0)

    def height(x):
        return 2.0 * (1.0 - abs(x))

    pts = sorted({-eps, 0.0, eps})
    pp = quad(lambda x: pe(x) ** 2 * height(x), -1, 1, points=pts, epsabs=1e-14)[0]
    px = quad(lambda x: pe(x) * x * height(x), -1, 1, points=pts, epsabs=1e-14)[0]
    return float(np.sqrt(max(pp - px**2 * 3.0, 0.0)))  # ||x||^2 = 1/3


# MINI pressure floor used for the eps sweep: just below min over EPS_SWEEP of
# mini_pressure_floor (0.1909 at eps = 1/2, rising towards sqrt(2/3)).
MINI_FLOOR = 0.15


# -- smooth flow with a polynomial source (not a reference experiment) --------
def polynomial_flow() -> ExactSolution:
    """Stream-function flow ``psi = (1-x^2)^2 (1-y^2)^2`` with ``p = xy`` and nonzero ``f``."""

    def parts(s):
        return (1 - s**2) ** 2, -4 * s + 4 * s**3, -4 + 12 * s**2, 24 * s

    def u(xy):
        a, a1, _, _ = parts(xy[:, 0])
        b, b1, _, _ = parts(xy[:, 1])
        return np.column_stack([a * b1, -a1 * b])

    def grad(xy):
        a, a1, a2, _ = parts(xy[:, 0])
        b, b1, b2, _ = parts(xy[:, 1])
        G = np.empty((len(xy), 2, 2))
        G[:, 0, 0] = a1 * b1
        G[:, 0, 1] = a * b2
        G[:, 1, 0] = -a2 * b
        G[:, 1, 1] = -a1 * b1
        return G

    def f(xy):
        x, y = xy[:, 0], xy[:, 1]
        a, a1, a2, a3 = parts(x)
        b, b1, b2, b3 = parts(y)
        return np.column_stack([-(a2 * b1 + a * b3) + y, (a3 * b + a1 * b2) + x])

    return ExactSolution("polynomial-flow", "square", u, grad, lambda xy: xy[:, 0] * xy[:, 1], f, degree=7,
                         f_degree=5)


# -- orchestration ------------------------------------------------------------
EXPERIMENTS = {
    "colliding-flow": ("square", colliding_flow),
    "lshape": ("lshape", lshape_solution),
    "rhombus-eps": ("rhombus", None),
    "rhombus-px": ("rhombus", rhombus_px),
}


class ExperimentError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    methods: tuple = ALL_METHODS
    levels: tuple = tuple(range(6))
    eps: tuple = EPS_SWEEP

    def __post_init__(self):
        if self.name not in EXPERIMENTS:
            raise ExperimentError(f"unknown experiment {self.name!r}; expected one of {sorted(EXPERIMENTS)}")
        object.__setattr__(self, "methods", tuple(Method.parse(m) for m in self.methods))
        if not self.methods:
            raise ExperimentError("at least one method is required")
        if not self.levels or min(self.levels) < 0:
            raise ExperimentError("levels must be a nonempty range of nonnegative integers")
        if any(not 0 < e <= 1 for e in self.eps):
            raise ExperimentError("eps values must lie in (0, 1]")

    @property
    def domain(self) -> str:
        return EXPERIMENTS[self.name][0]

    def exact(self, eps: float = None) -> ExactSolution:
        if self.name == "rhombus-eps":
            return rhombus_eps(eps)
        return EXPERIMENTS[self.name][1]()

    def jobs(self):
        if self.name == "rhombus-eps":
            return [(self.name, lvl, self.methods, e) for lvl in self.levels for e in self.eps]
        return [(self.name, lvl, self.methods, None) for lvl in self.levels]


@dataclass
class LevelResult:
    level: int
    eps: float
    rows: dict
    chain: object = None
    failures: dict = field(default_factory=dict)


def solve_case(exact: ExactSolution, method, level: int, config: SolverConfig = SolverConfig()):
    t = make_mesh(exact.domain, level)
    sys = assemble(t, method, exact.f, exact.dirichlet, f_degree=exact.f_degree, split_x=exact.split_x)
    return solve(sys, config)


def _row(sol, report, exact):
    t = sol.mesh
    e_u = energy_error(sol, exact)
    e_p = pressure_error(sol, exact)
    div = element_divergence(sol)
    right = t.geometry.centroids[:, 0] > 0
    return {
        "level": t.level,
        "ndof": report.ndof,
        "err_energy": e_u,
        "err_pressure": e_p,
        "err_combined": float(np.hypot(e_u, e_p)),
        "err_sum": e_u + e_p,
        "osc": oscillation(exact.f, t, split_x=exact.split_x),
        "hf": hf_norm(exact.f, t, split_x=exact.split_x),
        "div_max": float(np.abs(div).max()),
        "residual": report.relative_residual,
        "p_right": float(sol.p[right].mean()) if sol.dofmap.pres_degree == 0 else float("nan"),
    }


def run_level(name: str, level: int, methods, eps=None, config: SolverConfig = SolverConfig()) -> LevelResult:
    """All methods of one experiment on one mesh level (picklable job)."""
    spec = ExperimentSpec(name, tuple(methods), (level,), (eps,) if eps is not None else EPS_SWEEP)
    exact = spec.exact(eps)
    rows, sols, failures = {}, {}, {}
    for m in spec.methods:
        try:
            sol, rep = solve_case(exact, m, level, config)
        except SolverError as exc:
            failures[m.label] = f"{type(exc).__name__}: {exc}"
            continue
        sols[m] = sol
        rows[m.label] = _row(sol, rep, exact)
    chain = None
    if set(ALL_METHODS) <= set(sols):
        chain = chain_level(level, sols, exact)
    return LevelResult(level, eps, rows, chain, failures)


def _run_job(job):
    name, level, methods, eps = job
    return run_level(name, level, tuple(m.value for m in methods), eps)


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    levels: list

    @property
    def failures(self) -> list:
        return [(lv.level, lv.eps, m, msg) for lv in self.levels for m, msg in lv.failures.items()]

    @property
    def chain(self) -> list:
        return [lv.chain for lv in self.levels if lv.chain is not None]

    def tables(self) -> dict:
        """Convergence tables per method (one per eps for the strip sweep)."""
        out = {}
        extra = ("err_sum", "div_max")
        for lv in self.levels:
            for label, row in lv.rows.items():
                key = label if lv.eps is None else f"{label}@eps={lv.eps:g}"
                if key not in out:
                    out[key] = ConvergenceTable(self.spec.name, key, extra_columns=extra)
                    if self.spec.name == "lshape":
                        out[key].notes.append(
                            "singular integrands: fixed-degree quadrature, absolute errors carry quadrature error"
                        )
                out[key].add(**row)
        return out

    def eps_rows(self) -> list:
        rows = []
        for lv in self.levels:
            if lv.eps is None:
                continue
            for label, row in lv.rows.items():
                rows.append({"method": label, "eps": lv.eps, **row})
        return rows

    def eps_csv(self) -> str:
        cols = ("method", "level", "eps", "ndof", "err_energy", "err_pressure", "p_right", "p_closed_form")
        prec = int(os.environ.get("STOKESLAB_PRECISION", "12"))
        lines = [",".join(cols)]
        for r in self.eps_rows():
            r = dict(r, p_closed_form=rhombus_cr_pressure(r["eps"]))
            cells = [r["method"], str(r["level"]), f"{r['eps']:.{prec}g}", str(r["ndof"])]
            cells += [f"{r[c]:.{prec}g}" for c in cols[4:]]
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"

    def summary_lines(self) -> list:
        lines = []
        for key, table in self.tables().items():
            try:
                slope = table.slope()
            except RateError:
                slope = float("nan")
            final = table.rows[-1]["err_combined"]
            lines.append(f"{self.spec.name},{key},{slope:.6g},{final:.6g}")
        return lines

    def summary(self) -> str:
        out = ["\n".join(self.summary_lines())]
        if self.chain:
            out.append("chain ratios\n" + format_chain(self.chain))
        for level, eps, m, msg in self.failures:
            out.append(f"FAILED level={level} eps={eps} method={m}: {msg}")
        return "\n".join(out) + "\n"

    def write(self, out_dir) -> list:
        os.makedirs(out_dir, exist_ok=True)
        written = []
        if self.spec.name == "rhombus-eps":
            path = os.path.join(out_dir, f"{self.spec.name}.csv")
            with open(path, "w", newline="") as fh:
                fh.write(self.eps_csv())
            written.append(path)
        else:
            for key, table in self.tables().items():
                path = os.path.join(out_dir, f"{self.spec.name}_{key}.csv")
                table.to_csv(path)
                written.append(path)
        if self.chain:
            path = os.path.join(out_dir, f"{self.spec.name}_chain.csv")
            with open(path, "w", newline="") as fh:
                fh.write(format_chain(self.chain))
            written.append(path)
        path = os.path.join(out_dir, f"{self.spec.name}_summary.txt")
        with open(path, "w", newline="") as fh:
            fh.write(self.summary())
        written.append(path)
        return written


def run(spec: ExperimentSpec, workers: int = 1) -> ExperimentResult:
    """Run every (level[, eps]) job of ``spec``; results are ordered by job index."""
    jobs = spec.jobs()
    if workers > 1 and len(jobs) > 1:
        # largest levels first so the pool stays busy; order restored afterwards
        order = sorted(range(len(jobs)), key=lambda i: -jobs[i][1])
        with ProcessPoolExecutor(max_workers=workers) as pool:
            done = dict(zip(order, pool.map(_run_job, [jobs[i] for i in order])))
        results = [done[i] for i in range(len(jobs))]
    else:
        results = [_run_job(j) for j in jobs]
    return ExperimentResult(spec, results)
