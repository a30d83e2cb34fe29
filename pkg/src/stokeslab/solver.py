"""Direct solution of the reduced symmetric indefinite saddle-point system.

After eliminating the Dirichlet dofs the unknowns are ``(u_free, p, lam)``::

    [ A_ff  -B_f^T  0 ] [u]   [F_f - A_fd g_d]
    [ -B_f   0      c ] [p] = [B_d g_d      ]
    [ 0      c^T    0 ] [l]   [0            ]

where the multiplier ``lam`` enforces the zero pressure mean.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .assembly import SaddleSystem
from .spaces import DofMap, Method


class SolverError(RuntimeError):
    pass


class SingularSystemError(SolverError):
    pass


class ConvergenceError(SolverError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    rtol: float = 1e-10
    pivot_tol: float = 1e-12
    max_refine: int = 3


@dataclass(frozen=True, eq=False)
class DiscreteSolution:
    dofmap: DofMap
    u: np.ndarray
    p: np.ndarray
    multiplier: float

    @property
    def mesh(self):
        return self.dofmap.mesh

    @property
    def method(self) -> Method:
        return self.dofmap.method


@dataclass(frozen=True)
class SolveReport:
    relative_residual: float
    n_velocity: int
    n_pressure: int
    wall_time: float

    @property
    def ndof(self) -> int:
        return self.n_velocity + self.n_pressure


def kkt_matrix(sys: SaddleSystem):
    free = sys.free
    fd = np.flatnonzero(free)
    dd = np.flatnonzero(~free)
    A_ff = sys.A[fd][:, fd]
    B_f = sys.B[:, fd]
    c = sp.csr_matrix(sys.c.reshape(-1, 1))
    K = sp.bmat(
        [[A_ff, -B_f.T, None], [-B_f, None, c], [None, c.T, None]],
        format="csc",
    )
    gd = sys.g[dd]
    rhs = np.concatenate([
        sys.F[fd] - sys.A[fd][:, dd] @ gd,
        sys.B[:, dd] @ gd,
        [0.0],
    ])
    return K, rhs


def solve_kkt(K, rhs, config: SolverConfig = SolverConfig()):
    """Factorize ``K`` and solve with iterative refinement; returns ``(x, relres)``."""
    K = sp.csc_matrix(K)
    nb = np.linalg.norm(rhs)
    if nb == 0.0:
        return np.zeros(K.shape[0]), 0.0
    try:
        lu = spla.splu(K)
    except RuntimeError as exc:
        raise SingularSystemError(f"factorization failed: {exc}") from exc
    piv = np.abs(lu.U.diagonal())
    if piv.min() <= config.pivot_tol * piv.max():
        raise SingularSystemError(
            f"pivot ratio {piv.min() / piv.max():.3e} below {config.pivot_tol:g}"
        )
    x = lu.solve(rhs)
    res = np.linalg.norm(rhs - K @ x) / nb
    for _ in range(config.max_refine):
        if res <= config.rtol:
            break
        x += lu.solve(rhs - K @ x)
        res = np.linalg.norm(rhs - K @ x) / nb
    if not np.isfinite(res) or res > config.rtol:
        raise ConvergenceError(f"relative residual {res:.3e} exceeds {config.rtol:g}")
    return x, res


def solve(sys: SaddleSystem, config: SolverConfig = SolverConfig()):
    """Solve ``sys``; returns ``(DiscreteSolution, SolveReport)``."""
    t0 = time.perf_counter()
    K, rhs = kkt_matrix(sys)
    x, res = solve_kkt(K, rhs, config)
    free = sys.free
    nf = int(free.sum())
    u = sys.g.copy()
    u[free] = x[:nf]
    p = x[nf : nf + sys.dofmap.n_pres]
    sol = DiscreteSolution(sys.dofmap, u, p, float(x[-1]))
    report = SolveReport(res, nf, sys.dofmap.n_pres, time.perf_counter() - t0)
    return sol, report
