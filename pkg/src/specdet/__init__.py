"""Functional determinants of one-dimensional Schrodinger operators.

det(-d^2/dt^2 + V) on [0, 1] with Dirichlet ends, computed without any
eigenvalues by propagating a single initial-value problem (``propagate``);
extremal potentials maximizing the determinant under an L^q mass
constraint (``optimal_pulse``, ``solve_extremal``, ``solve_l2``); and the
spectral channel (``dirichlet_eigenvalues``, ``regularized_det_product``,
``heat_trace_partial``) as an independent cross-check.  ``BACKEND`` names
the active kernel implementation, compiled or pure.
"""

from ._backend import BACKEND
from .elliptic import (EllipticInvariants, discriminant, h_star, invariants,
                       rf, solve_l2)
from .errors import (BracketError, DomainError, GeometryError, InputError,
                     PotentialParseError, PotentialValidationError,
                     RangeError, SolverError, SpecdetError, TruncationError)
from .extremal_l1 import (GridSearchResult, L1Optimum, grid_oracle,
                          optimal_pulse, pulse_objective,
                          small_mass_expansion, support_fraction)
from .extremal_lq import (ExtremalSolution, ShootingProblem, c_of,
                          endpoint_exponent, h_of, psi_shoot, solve_extremal)
from .gy import (DetResult, lipschitz_bound, lipschitz_gap, propagate,
                 pulse_det_closed_form, upper_bound_series)
from .potential import (Constant, ExtremalLq, NormReport, PiecewiseConstant,
                        Pulse, Sampled, Zero, eval_potential, integral,
                        l1_distance, lq_norm, parse_potential,
                        serialize_potential)
from .spectrum import (ProductResult, SpectrumResult, dirichlet_eigenvalues,
                       heat_trace_partial, regularized_det_product)
from .verify import CheckResult, check_names, run_checks

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BracketError",
    "CheckResult",
    "Constant",
    "DetResult",
    "DomainError",
    "EllipticInvariants",
    "ExtremalLq",
    "ExtremalSolution",
    "GeometryError",
    "GridSearchResult",
    "InputError",
    "L1Optimum",
    "NormReport",
    "PiecewiseConstant",
    "PotentialParseError",
    "PotentialValidationError",
    "ProductResult",
    "Pulse",
    "RangeError",
    "Sampled",
    "ShootingProblem",
    "SolverError",
    "SpecdetError",
    "SpectrumResult",
    "TruncationError",
    "Zero",
    "c_of",
    "check_names",
    "dirichlet_eigenvalues",
    "discriminant",
    "endpoint_exponent",
    "eval_potential",
    "grid_oracle",
    "h_of",
    "h_star",
    "heat_trace_partial",
    "integral",
    "invariants",
    "l1_distance",
    "lipschitz_bound",
    "lipschitz_gap",
    "lq_norm",
    "optimal_pulse",
    "parse_potential",
    "propagate",
    "psi_shoot",
    "pulse_det_closed_form",
    "pulse_objective",
    "regularized_det_product",
    "rf",
    "run_checks",
    "serialize_potential",
    "small_mass_expansion",
    "solve_extremal",
    "solve_l2",
    "support_fraction",
    "upper_bound_series",
    "__version__",
]
