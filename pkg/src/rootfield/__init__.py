"""rootfield: root subfields of transcendental and polynomial equations.

The engine decomposes sigma(z) = sum m_i p_i(z) + t into per-term root
subfields, computes each subfield by Lagrange series inversion over all
inverse-function branches, refines with Newton, and verifies against
independent oracles (Aberth, grid Newton scan, argument principle).
"""

from .engine import (
    BranchSpec,
    Equation,
    Jet,
    RootField,
    RootRecord,
    TermFunction,
    convergence_check,
    enumerate_branches,
    inverse_branch,
    lagrange_root,
    newton_refine,
    solve_all,
)
from .errors import (
    BasinEscapeError,
    ConvergenceError,
    DomainError,
    PoleError,
    SeriesDivergenceError,
)
from .oracle import Rectangle, aberth_roots, argument_principle_count, compare_root_sets, grid_newton_scan

__all__ = [
    "BranchSpec",
    "Equation",
    "Jet",
    "RootField",
    "RootRecord",
    "TermFunction",
    "convergence_check",
    "enumerate_branches",
    "inverse_branch",
    "lagrange_root",
    "newton_refine",
    "solve_all",
    "Rectangle",
    "aberth_roots",
    "argument_principle_count",
    "compare_root_sets",
    "grid_newton_scan",
    "DomainError",
    "PoleError",
    "ConvergenceError",
    "SeriesDivergenceError",
    "BasinEscapeError",
]

__version__ = "0.1.0"
