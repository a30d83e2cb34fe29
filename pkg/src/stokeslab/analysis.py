"""Error norms, data oscillations, convergence tables and the comparison chain."""
from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .companions import pi0
from .quadrature import element_points
from .spaces import KIND_BUBBLE, Method, eval_pressure, eval_velocity

ERROR_DEGREE = 10


@dataclass(frozen=True, eq=False)
class ExactSolution:
    """Velocity/pressure pair with its source; all callables map (n, 2) points.

    ``degree`` is the polynomial degree of ``u`` or ``None`` for singular
    solutions; ``split_x`` lists vertical lines where ``f`` or ``p`` jump or
    kink (quadrature cuts triangles there). ``g`` defaults to ``u``.
    """

    name: str
    domain: str
    u: Callable
    grad_u: Callable  # (n, 2, 2) with [i, j] = d_j u_i
    p: Callable
    f: Callable
    degree: Optional[int] = None
    f_degree: int = 0
    split_x: tuple = ()
    g: Optional[Callable] = None

    @property
    def singular(self) -> bool:
        return self.degree is None

    @property
    def dirichlet(self) -> Callable:
        return self.g if self.g is not None else self.u


def _points(sol, exact, degree):
    return element_points(sol.mesh, degree, exact.split_x if exact is not None else ())


def energy_error(sol, exact: ExactSolution, degree: int = ERROR_DEGREE) -> float:
    """Broken H1 seminorm ``||grad_NC(u - u_h)||``."""
    qp = _points(sol, exact, degree)
    _, gh = eval_velocity(sol.dofmap, sol.u, qp.elem, qp.bary)
    d = np.asarray(exact.grad_u(qp.xy)) - gh
    return float(np.sqrt(qp.integrate(np.sum(d * d, axis=(1, 2)))))


def pressure_error(sol, exact: ExactSolution, degree: int = ERROR_DEGREE) -> float:
    qp = _points(sol, exact, degree)
    d = np.asarray(exact.p(qp.xy)) - eval_pressure(sol.dofmap, sol.p, qp.elem, qp.bary)
    return float(np.sqrt(qp.integrate(d * d)))


def combined_error(sol, exact: ExactSolution, degree: int = ERROR_DEGREE) -> float:
    """``sqrt(||grad_NC(u-u_h)||^2 + ||p-p_h||^2)``, the plotted convergence quantity."""
    return float(np.hypot(energy_error(sol, exact, degree), pressure_error(sol, exact, degree)))


def error_sum(sol, exact: ExactSolution, degree: int = ERROR_DEGREE) -> float:
    """``||grad_NC(u-u_h)|| + ||p-p_h||``, the quantity compared across methods."""
    return energy_error(sol, exact, degree) + pressure_error(sol, exact, degree)


def oscillation(f, t, degree: int = ERROR_DEGREE, split_x=()) -> float:
    """``osc(f) = ||h_T (f - Pi0 f)||``."""
    qp = element_points(t, degree, split_x)
    fv = np.asarray(f(qp.xy), float)
    mean = pi0(f, t, degree, split_x)
    d = (fv - mean[qp.elem]) * t.h[qp.elem].reshape((-1,) + (1,) * (fv.ndim - 1))
    return float(np.sqrt(qp.integrate(np.sum(d.reshape(len(d), -1) ** 2, axis=1))))


def hf_norm(f, t, degree: int = ERROR_DEGREE, split_x=()) -> float:
    """``||h_T f||``."""
    qp = element_points(t, degree, split_x)
    fv = np.asarray(f(qp.xy), float).reshape(len(qp.w), -1) * t.h[qp.elem][:, None]
    return float(np.sqrt(qp.integrate(np.sum(fv**2, axis=1))))


def best_approx_terms(exact: ExactSolution, t, degree: int = ERROR_DEGREE):
    """``(||grad u - Pi0 grad u||, ||p - Pi0 p||)``; the first is the CR best approximation."""
    qp = element_points(t, degree, exact.split_x)
    G = np.asarray(exact.grad_u(qp.xy))
    Gm = qp.element_sum(G) / t.geometry.areas[:, None, None]
    P = np.asarray(exact.p(qp.xy))
    Pm = qp.element_sum(P) / t.geometry.areas
    e_u = np.sqrt(qp.integrate(np.sum((G - Gm[qp.elem]) ** 2, axis=(1, 2))))
    e_p = np.sqrt(qp.integrate((P - Pm[qp.elem]) ** 2))
    return float(e_u), float(e_p)


def discrete_gradient_oscillation(sol, degree: int = 6) -> float:
    """``||grad u_h - Pi0 grad u_h||``."""
    t = sol.mesh
    qp = element_points(t, degree)
    _, G = eval_velocity(sol.dofmap, sol.u, qp.elem, qp.bary)
    Gm = qp.element_sum(G) / t.geometry.areas[:, None, None]
    return float(np.sqrt(qp.integrate(np.sum((G - Gm[qp.elem]) ** 2, axis=(1, 2)))))


def element_divergence(sol, degree: int = 6) -> np.ndarray:
    """``int_T div u_h dx`` for every triangle."""
    qp = element_points(sol.mesh, degree)
    _, G = eval_velocity(sol.dofmap, sol.u, qp.elem, qp.bary)
    return qp.element_sum(G[:, 0, 0] + G[:, 1, 1])


def pointwise_divergence_max(sol, degree: int = 4) -> float:
    """Largest ``|div u_h|`` over quadrature points (piecewise divergence)."""
    qp = element_points(sol.mesh, degree)
    _, G = eval_velocity(sol.dofmap, sol.u, qp.elem, qp.bary)
    return float(np.abs(G[:, 0, 0] + G[:, 1, 1]).max())


def mini_linear_part(sol):
    """MINI velocity with the element-bubble coefficients removed."""
    if sol.method is not Method.MINI:
        raise ValueError("linear part is defined for MINI solutions only")
    u = sol.u.copy()
    u[sol.dofmap.dof_kind == KIND_BUBBLE] = 0.0
    return type(sol)(sol.dofmap, u, sol.p, sol.multiplier)


# -- convergence tables -------------------------------------------------------
class RateError(ValueError):
    pass


def fit_rate(ndof, errors=None, rows: int = 3) -> float:
    """Least-squares slope of log(error) against log(ndof) over the trailing ``rows``.

    Accepts either a :class:`ConvergenceTable` or two sequences.
    """
    if errors is None:
        table = ndof
        ndof, errors = table.column("ndof"), table.column("err_combined")
    ndof = np.asarray(ndof, float)
    errors = np.asarray(errors, float)
    if len(ndof) < 3 or len(ndof) < rows:
        raise RateError(f"need at least {max(rows, 3)} rows to fit a rate, got {len(ndof)}")
    x = np.log(ndof[-rows:])
    y = np.log(errors[-rows:])
    return float(np.polyfit(x, y, 1)[0])


CSV_COLUMNS = ("level", "ndof", "err_energy", "err_pressure", "err_combined", "osc", "hf")


def _precision():
    return int(os.environ.get("STOKESLAB_PRECISION", "12"))


@dataclass
class ConvergenceTable:
    experiment: str
    method: str
    rows: list = field(default_factory=list)
    extra_columns: tuple = ()
    notes: list = field(default_factory=list)

    def add(self, **row):
        if self.rows and row["ndof"] <= self.rows[-1]["ndof"]:
            raise ValueError("ndof must increase strictly along the table")
        self.rows.append(row)

    def column(self, name) -> np.ndarray:
        return np.array([r[name] for r in self.rows], float)

    def slope(self, column: str = "err_combined", rows: int = 3) -> float:
        return fit_rate(self.column("ndof"), self.column(column), rows)

    def to_csv(self, path=None) -> str:
        cols = CSV_COLUMNS + tuple(self.extra_columns)
        prec = _precision()
        buf = io.StringIO()
        for note in self.notes:
            buf.write(f"# {note}\n")
        buf.write(",".join(cols) + "\n")
        for r in self.rows:
            cells = []
            for c in cols:
                v = r.get(c, float("nan"))
                cells.append(str(int(v)) if c in ("level", "ndof") else f"{v:.{prec}g}")
            buf.write(",".join(cells) + "\n")
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        return text


# -- comparison chain ---------------------------------------------------------
CHAIN_RATIOS = ("P2/BR", "BR/CR", "CR/(MINI+hf)")
REVERSE_RATIOS = ("CR/(P2+osc+dP2)", "CR/(BR+osc+dBR)")


@dataclass
class ChainLevel:
    level: int
    errors: dict
    hf: float
    osc: float
    grad_osc: dict
    ratios: dict
    best_approx_ratio: float
    mini_linear_ratio: float


def chain_level(level, solutions: dict, exact: ExactSolution) -> ChainLevel:
    """Chain quantities on one mesh from solutions keyed by :class:`Method`."""
    t = solutions[Method.CR].mesh
    E = {m: error_sum(s, exact) for m, s in solutions.items()}
    hf = hf_norm(exact.f, t, split_x=exact.split_x)
    osc = oscillation(exact.f, t, split_x=exact.split_x)
    dP2 = discrete_gradient_oscillation(solutions[Method.P2P0])
    dBR = discrete_gradient_oscillation(solutions[Method.BR])
    ratios = {
        "P2/BR": E[Method.P2P0] / E[Method.BR],
        "BR/CR": E[Method.BR] / E[Method.CR],
        "CR/(MINI+hf)": E[Method.CR] / (E[Method.MINI] + hf),
        "CR/(P2+osc+dP2)": E[Method.CR] / (E[Method.P2P0] + osc + dP2),
        "CR/(BR+osc+dBR)": E[Method.CR] / (E[Method.BR] + osc + dBR),
    }
    bu, bp = best_approx_terms(exact, t)
    lin = mini_linear_part(solutions[Method.MINI])
    return ChainLevel(
        level=level,
        errors={m.label: e for m, e in E.items()},
        hf=hf,
        osc=osc,
        grad_osc={"P2P0": dP2, "BR": dBR},
        ratios=ratios,
        best_approx_ratio=E[Method.CR] / (bu + bp + osc),
        mini_linear_ratio=energy_error(lin, exact) / (E[Method.MINI] + osc),
    )


def comparison_chain(levels, exact: ExactSolution):
    """Chain report for a sequence ``[(level, {Method: solution}), ...]``."""
    return [chain_level(lvl, sols, exact) for lvl, sols in levels]


def chain_bounded(report, bound: float = 10.0, drift: float = 2.0, names=CHAIN_RATIOS):
    """Check every ratio is <= ``bound`` and consecutive levels differ by < ``drift``.

    Returns ``(ok, messages)``.
    """
    ok = True
    msgs = []
    for name in names:
        vals = np.array([lv.ratios[name] for lv in report])
        if not np.all(np.isfinite(vals)) or vals.max() > bound:
            ok = False
            msgs.append(f"{name}: max ratio {vals.max():.3g} exceeds {bound}")
        q = vals[1:] / vals[:-1]
        if len(q) and (q.max() >= drift or q.min() <= 1.0 / drift):
            ok = False
            msgs.append(f"{name}: level-to-level change {q.min():.3g}..{q.max():.3g} outside factor {drift}")
    return ok, msgs


def format_chain(report, names=CHAIN_RATIOS + REVERSE_RATIOS) -> str:
    head = "level," + ",".join(names) + ",CR/best,MINI_lin"
    lines = [head]
    prec = _precision()
    for lv in report:
        cells = [str(lv.level)] + [f"{lv.ratios[n]:.{prec}g}" for n in names]
        cells += [f"{lv.best_approx_ratio:.{prec}g}", f"{lv.mini_linear_ratio:.{prec}g}"]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
