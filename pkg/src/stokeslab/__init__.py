"""Lowest-order finite elements for the 2D Stokes equations.

Crouzeix-Raviart, MINI, P2P0 and Bernardi-Raugel discretisations on red-refined
triangulations, with conforming companions, pseudostress recovery and
convergence studies.
"""
from .mesh import Triangulation, make_mesh, red_refine
from .spaces import Method, build_dofmap
from .assembly import assemble
from .solver import SolverConfig, solve

__all__ = [
    "Triangulation",
    "make_mesh",
    "red_refine",
    "Method",
    "build_dofmap",
    "assemble",
    "SolverConfig",
    "solve",
]
__version__ = "0.1.0"
