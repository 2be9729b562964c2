"""Determinant maximization over potentials with a fixed L^1 budget.

Within the class of nonnegative potentials of mass A, the determinant is
maximized by a centered rectangular pulse.  Its support fraction solves a
scalar fixed-point relation with the closed solution

    ell(A) = A / (1 + sqrt(1 + A))^2,

with the maximizing pulse centered at s = 1/2 and of height A/ell.  This
module exposes the closed forms, the two-parameter objective restricted to
pulse shapes, and an independent lattice + simplex search used to validate
the formulas numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import DomainError, RangeError
from .potential import Pulse

__all__ = ["L1Optimum", "GridSearchResult", "support_fraction",
           "optimal_pulse", "pulse_objective", "small_mass_expansion",
           "grid_oracle"]

_LOG_DBL_MAX = math.log(np.finfo(float).max)


@dataclass(frozen=True)
class L1Optimum:
    """Closed-form maximizer data for mass A.

    ``det_max`` is the maximal determinant 2 y(1); ``D_max`` the normalized
    value y(1).  ``height`` is A / ell.
    """

    A: float
    s: float
    ell: float
    height: float
    det_max: float
    D_max: float

    def potential(self) -> Pulse:
        """The maximizing pulse as a potential spec."""
        return Pulse(self.s - self.ell / 2.0, self.s + self.ell / 2.0,
                     self.height)


@dataclass(frozen=True)
class GridSearchResult:
    """Outcome of the lattice scan and the simplex polish that follows it."""

    s_grid: float
    ell_grid: float
    value_grid: float
    s: float
    ell: float
    value: float
    grid_n: int


def _check_mass(A: float) -> float:
    A = float(A)
    if not math.isfinite(A) or A <= 0.0:
        raise DomainError("mass A must be positive and finite")
    return A


def support_fraction(A: float) -> float:
    """Optimal support length ell(A) = A / (1 + sqrt(1 + A))^2."""
    A = _check_mass(A)
    return A / (1.0 + math.sqrt(1.0 + A)) ** 2


def optimal_pulse(A: float) -> L1Optimum:
    """Closed-form optimum for mass A.

    det_max = 4 / (1 + sqrt(1 + A)) * exp(A / (1 + sqrt(1 + A))).
    """
    A = _check_mass(A)
    root = 1.0 + math.sqrt(1.0 + A)
    expo = A / root
    if expo > _LOG_DBL_MAX:
        raise RangeError(
            "det_max factor exp(%.6g) exceeds binary64" % expo, bound=expo)
    ell = A / root ** 2
    det_max = 4.0 / root * math.exp(expo)
    return L1Optimum(A=A, s=0.5, ell=ell, height=A / ell,
                     det_max=det_max, D_max=det_max / 2.0)


def pulse_objective(s, ell, A: float):
    """Determinant value D = y(1) for the pulse of mass A at (s, ell).

    The pulse has support [s - ell/2, s + ell/2] and height A/ell; the
    value is the normalized determinant, half of det.  Vectorized over
    (s, ell); every evaluation point must describe a pulse contained in
    the open unit interval.
    """
    A = _check_mass(A)
    s = np.asarray(s, dtype=float)
    ell = np.asarray(ell, dtype=float)
    s, ell = np.broadcast_arrays(s, ell)
    if np.any(ell <= 0.0) or np.any(ell - 2.0 * np.minimum(s, 1.0 - s)
                                    > 1e-14):
        raise DomainError("pulse must satisfy 0 < ell <= 2 min(s, 1 - s)")
    z = np.sqrt(A * ell)
    if np.any(z > _LOG_DBL_MAX):
        raise RangeError("cosh argument exceeds binary64 range",
                         bound=float(np.max(z)))
    shc = np.where(z > 1e-8, np.sinh(z) / np.where(z > 0, z, 1.0),
                   1.0 + z * z / 6.0)
    quad = (s - s * s) + (1.0 / A - 0.5) * ell + ell * ell / 4.0
    out = (1.0 - ell) * np.cosh(z) + A * quad * shc
    return out if out.ndim else float(out)


def small_mass_expansion(A: float) -> float:
    """Four-term expansion of D_max(A) about A = 0.

    D_max = 1 + A/4 + A^3/192 - A^4/384 + O(A^5); the quadratic term
    vanishes.
    """
    A = _check_mass(A)
    return 1.0 + A / 4.0 + A ** 3 / 192.0 - A ** 4 / 384.0


def grid_oracle(A: float, grid_n: int = 256, polish: bool = True,
                ) -> GridSearchResult:
    """Maximize the pulse objective by lattice scan plus simplex polish.

    Scans an interior lattice of (s, ell) pairs, keeps the best feasible
    node, then runs Nelder-Mead from it with infeasible proposals pushed
    back by a large penalty.  Independent of the closed forms; exists to
    check them.
    """
    A = _check_mass(A)
    if grid_n < 32:
        raise DomainError("grid_n must be at least 32")
    s_axis = (np.arange(grid_n) + 0.5) / grid_n
    ell_axis = (np.arange(grid_n) + 1.0) / grid_n
    S, L = np.meshgrid(s_axis, ell_axis, indexing="ij")
    feas = L <= 2.0 * np.minimum(S, 1.0 - S)
    vals = np.full(S.shape, -np.inf)
    vals[feas] = pulse_objective(S[feas], L[feas], A)
    flat = int(np.argmax(vals))
    i, j = divmod(flat, grid_n)
    s0, l0, v0 = float(S[i, j]), float(L[i, j]), float(vals[i, j])
    if not polish:
        return GridSearchResult(s0, l0, v0, s0, l0, v0, grid_n)

    def neg(x):
        s, ell = x
        if ell <= 0.0 or ell > 2.0 * min(s, 1.0 - s):
            return 1e6
        return -float(pulse_objective(s, ell, A))

    res = minimize(neg, x0=[s0, l0], method="Nelder-Mead",
                   options={"maxiter": 200, "xatol": 1e-9, "fatol": 1e-12})
    s1, l1 = float(res.x[0]), float(res.x[1])
    v1 = -float(res.fun)
    if v1 < v0:
        s1, l1, v1 = s0, l0, v0
    return GridSearchResult(s0, l0, v0, s1, l1, v1, grid_n)
