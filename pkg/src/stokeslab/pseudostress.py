"""Pseudostress recovered from a Crouzeix-Raviart solve with piecewise-constant load.

For the CR solution ``(u~, p~)`` with load ``Pi0 f`` the lowest-order
pseudostress is the piecewise affine matrix field

    sigma = grad_NC u~ - (Pi0 f / 2) (x) (x - mid(T)) - p~ I,

so no Raviart-Thomas system has to be assembled.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analysis import ERROR_DEGREE, ExactSolution, energy_error, hf_norm, oscillation, pressure_error
from .assembly import assemble
from .companions import cr_gradient, pi0
from .quadrature import element_points
from .solver import SolverConfig, solve
from .spaces import Method

_I2 = np.eye(2)


def dev(A: np.ndarray) -> np.ndarray:
    """Deviatoric part of a stack of 2x2 matrices."""
    tr = np.trace(A, axis1=-2, axis2=-1)
    return A - 0.5 * tr[..., None, None] * _I2


@dataclass(frozen=True, eq=False)
class PseudostressField:
    """``sigma(x) = C_T - (f_T / 2) (x) (x - mid(T))`` on every triangle ``T``.

    ``C_T = grad_NC u~ - p~ I`` is the constant part, ``f_T = Pi0 f``.
    """

    mesh: object
    constant: np.ndarray  # (nT, 2, 2)
    load: np.ndarray  # (nT, 2)
    solution: object = None  # the CR solve behind the field

    def evaluate(self, elem, xy) -> np.ndarray:
        elem = np.asarray(elem)
        r = np.asarray(xy) - self.mesh.geometry.centroids[elem]
        return self.constant[elem] - 0.5 * np.einsum("ni,nj->nij", self.load[elem], r)

    def trace(self, elem, xy) -> np.ndarray:
        return np.trace(self.evaluate(elem, xy), axis1=1, axis2=2)

    def deviatoric(self, elem, xy) -> np.ndarray:
        return dev(self.evaluate(elem, xy))

    def integral_of_trace(self, degree: int = 3) -> float:
        qp = element_points(self.mesh, degree)
        return float(qp.integrate(self.trace(qp.elem, qp.xy)))


def ps_from_cr(t, f=None, g=None, *, f_degree: int = 0, split_x=(), config: SolverConfig = SolverConfig()):
    """Pseudostress from the CR solve with load ``Pi0 f`` and Dirichlet data ``g``."""
    if f is None:
        f0 = np.zeros((t.n_triangles, 2))
    else:
        f0 = pi0(f, t, min(max(f_degree, 1), ERROR_DEGREE), split_x)
    sol, _ = solve(assemble(t, Method.CR, f0, g), config)
    nE = t.n_edges
    v = np.column_stack([sol.u[:nE], sol.u[nE:]])
    C = cr_gradient(t, v) - sol.p[:, None, None] * _I2
    return PseudostressField(t, C, f0, sol)


def ps_errors(t, exact: ExactSolution, field: PseudostressField = None, degree: int = ERROR_DEGREE + 1):
    """``(||grad u - dev sigma||, ||p + tr sigma / 2||)`` by quadrature.

    The affine ``(x - mid(T))`` term raises the integrand degree by one.
    """
    if field is None:
        field = ps_from_cr(t, exact.f, exact.dirichlet, f_degree=exact.f_degree, split_x=exact.split_x)
    qp = element_points(t, min(degree, 12), exact.split_x)
    S = field.evaluate(qp.elem, qp.xy)
    du = np.asarray(exact.grad_u(qp.xy)) - dev(S)
    dp = np.asarray(exact.p(qp.xy)) + 0.5 * np.trace(S, axis1=1, axis2=2)
    e_u = np.sqrt(qp.integrate(np.sum(du * du, axis=(1, 2))))
    e_p = np.sqrt(qp.integrate(dp * dp))
    return float(e_u), float(e_p)


@dataclass(frozen=True)
class PseudostressComparison:
    """Both sides of the two-sided pseudostress/CR comparison on one mesh.

    ``c1 = L / (R + osc)`` and ``c2 = R / (L + ||h f||)`` are the empirical
    constants; ``tilde_gap`` is ``||grad_NC(u_CR - u~_CR)||``.
    """

    level: int
    ps_velocity: float
    ps_pressure: float
    cr_velocity: float
    cr_pressure: float
    osc: float
    hf: float
    tilde_gap: float

    @property
    def L(self) -> float:
        return self.ps_velocity + self.ps_pressure

    @property
    def R(self) -> float:
        return self.cr_velocity + self.cr_pressure

    @property
    def c1(self) -> float:
        return self.L / (self.R + self.osc)

    @property
    def c2(self) -> float:
        return self.R / (self.L + self.hf)


def compare_with_cr(t, exact: ExactSolution, config: SolverConfig = SolverConfig()) -> PseudostressComparison:
    field = ps_from_cr(t, exact.f, exact.dirichlet, f_degree=exact.f_degree, split_x=exact.split_x, config=config)
    ps_u, ps_p = ps_errors(t, exact, field)
    sys = assemble(t, Method.CR, exact.f, exact.dirichlet, f_degree=exact.f_degree, split_x=exact.split_x)
    sol, _ = solve(sys, config)
    nE = t.n_edges
    d = sol.u - field.solution.u
    gap = cr_gradient(t, np.column_stack([d[:nE], d[nE:]]))
    gap = float(np.sqrt(np.sum(t.geometry.areas * np.sum(gap * gap, axis=(1, 2)))))
    return PseudostressComparison(
        level=t.level,
        ps_velocity=ps_u,
        ps_pressure=ps_p,
        cr_velocity=energy_error(sol, exact),
        cr_pressure=pressure_error(sol, exact),
        osc=oscillation(exact.f, t, split_x=exact.split_x),
        hf=hf_norm(exact.f, t, split_x=exact.split_x),
        tilde_gap=gap,
    )
