"""Maximal potentials under an L^q budget (q > 1) by Hamiltonian shooting.

The optimizer is characterized through an auxiliary concave profile Psi
solving

    Psi'' = |Psi|^alpha - 2H,   Psi(0) = 0,   Psi'(0) = H - c(A, q),

with alpha = q/(q-1) the conjugate exponent and H a constant tuned so that
Psi returns to zero at t = 1.  The admissible window for H is the open
interval (c, h): below c the initial slope is not positive, above h the
trajectory escapes along the unbounded branch of the phase curve.  The
terminal value Psi(1, H) is strictly increasing in H on that window, so
plain bisection is a complete root-finder here.  The potential is then
recovered pointwise as V = (q/(4q-2)) Psi^(1/(q-1)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import DomainError, RangeError, SolverError
from .potential import ExtremalLq

__all__ = ["ShootingProblem", "ExtremalSolution", "c_of", "h_of",
           "phase_polynomial", "psi_shoot", "solve_extremal",
           "endpoint_exponent"]

_LOG_DBL_MAX = math.log(np.finfo(float).max)


def _check_aq(A: float, q: float):
    A = float(A)
    q = float(q)
    if not (math.isfinite(A) and A > 0.0):
        raise DomainError("mass A must be positive and finite")
    if not (math.isfinite(q) and q > 1.0):
        raise DomainError("exponent q must exceed 1")
    return A, q


def c_of(A: float, q: float) -> float:
    """Lower endpoint of the admissible H window: (1/2)(A(4q-2)/q)^q."""
    A, q = _check_aq(A, q)
    base = A * (4.0 * q - 2.0) / q
    expo = q * math.log(base)
    if expo > _LOG_DBL_MAX:
        raise RangeError("c(A, q) overflows binary64: q log(A(4q-2)/q) = "
                         "%.6g" % expo, bound=expo)
    return 0.5 * math.exp(expo)


def h_of(A: float, q: float) -> float:
    """Upper endpoint of the admissible H window.

    The unique root in (c, infinity) of

        g(H) = (H - c)^2 - (2 alpha/(alpha+1)) (2H)^(1 + 1/alpha),

    located by doubling until the sign flips, then bisection to relative
    width 1e-13.
    """
    A, q = _check_aq(A, q)
    alpha = q / (q - 1.0)
    c = c_of(A, q)

    def g(H: float) -> float:
        return ((H - c) ** 2
                - (2.0 * alpha / (alpha + 1.0))
                * (2.0 * H) ** (1.0 + 1.0 / alpha))

    lo = c
    hi = max(2.0 * c, 1.0)
    while g(hi) <= 0.0:
        lo = hi
        hi *= 2.0
        if hi > 1e300:
            raise RangeError("no sign change located below 1e300",
                             bound=1e300)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= 1e-13 * mid or mid in (lo, hi):
            break
        if g(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class ShootingProblem:
    """Frozen shooting configuration for one (A, q) pair."""

    q: float
    A: float
    alpha: float
    c: float
    h: float
    grid_n: int = 4097

    @staticmethod
    def build(A: float, q: float, grid_n: int = 4097) -> "ShootingProblem":
        A, q = _check_aq(A, q)
        if grid_n < 33:
            raise DomainError("grid_n must be at least 33")
        return ShootingProblem(q=q, A=A, alpha=q / (q - 1.0),
                               c=c_of(A, q), h=h_of(A, q), grid_n=grid_n)


@dataclass(frozen=True, eq=False)
class ExtremalSolution:
    """Converged shooting output plus residual diagnostics.

    ``psi``/``dpsi``/``v`` are samples on the uniform grid ``t``; ``miss``
    is the terminal defect Psi(1, H).  ``first_integral_drift`` is the
    largest absolute wander of the conserved energy along the trajectory;
    ``norm_residual`` is |  ||V||_q - A |.
    """

    q: float
    A: float
    H: float
    t: np.ndarray
    psi: np.ndarray
    dpsi: np.ndarray
    v: np.ndarray
    miss: float
    first_integral_drift: float
    norm_residual: float
    symmetry_defect: float
    det: float

    def potential(self) -> ExtremalLq:
        """Potential spec carrying the profile samples."""
        return ExtremalLq(q=self.q, A=self.A, H=self.H,
                          psi=tuple(np.maximum(self.psi, 0.0)))


def phase_polynomial(prob: ShootingProblem, H: float):
    """f with Psi'^2 = f(Psi) along trajectories at constant H.

    f(x) = (2/(alpha+1)) x |x|^alpha - 4 H x + (H - c)^2.  Returns a
    vectorized callable.
    """
    alpha, c = prob.alpha, prob.c

    def f(x):
        x = np.asarray(x, dtype=float)
        out = (2.0 / (alpha + 1.0)) * x * np.abs(x) ** alpha \
            - 4.0 * H * x + (H - c) ** 2
        return out if out.ndim else float(out)

    return f


def _up_bracket_root(f, seed: float) -> float:
    """Smallest root of a sign flip located by doubling from seed, then
    bisection.  ``f(seed)`` and the eventual ``f(hi)`` must differ in sign."""
    hi = max(2.0 * seed, 1.0)
    while f(hi) * f(seed) > 0.0:
        hi *= 2.0
        if hi > 1e300:
            return 1e300
    lo = hi / 2.0 if hi / 2.0 >= seed else seed
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if f(mid) * f(hi) > 0.0:
            hi = mid
        else:
            lo = mid
    return hi


def _escape_threshold(prob: ShootingProblem, H: float) -> float:
    """1.25 times the orbit's largest possible |Psi| at this H.

    The bounded phase component runs from the negative turning point up to
    the first positive root of f; past the largest positive root the orbit
    is unbounded.  Either side can dominate in magnitude, so the guard
    covers both.
    """
    f = phase_polynomial(prob, H)
    x_min = max((2.0 * H) ** (1.0 / prob.alpha), 1e-30)  # f minimum, x > 0
    e_pos = _up_bracket_root(f, x_min)
    e_neg = _up_bracket_root(lambda x: f(-x), 1e-30)
    return 1.25 * max(e_pos, e_neg)


def psi_shoot(H: float, prob: ShootingProblem, tol: float = 1e-12,
              dense: bool = True):
    """Integrate the profile ODE at constant H; return (psi, dpsi, miss).

    ``psi`` and ``dpsi`` sample the trajectory on the problem's uniform
    grid when ``dense`` is set, else both are None and only the terminal
    defect ``miss`` = Psi(1, H) is produced.
    """
    if not prob.c < H < prob.h:
        raise DomainError(
            "H = %.17g outside the admissible window (%.17g, %.17g)"
            % (H, prob.c, prob.h))
    limit = _escape_threshold(prob, H)
    out_t = (np.linspace(0.0, 1.0, prob.grid_n) if dense
             else np.empty(0))
    status, t_stop, y, v, _, _, _, _, dy, dv = _backend.dopri5(
        _backend.RHS_PSI, prob.alpha, 2.0 * H, np.empty(0),
        0.0, H - prob.c, tol, tol, 1e-3, limit, np.empty(0), out_t)
    if status == _backend.BLOWUP:
        raise SolverError(
            "trajectory escaped the bounded phase component at "
            "t = %.6g; H = %.17g behaves like H >= h" % (t_stop, H),
            payload={"H": H, "t": t_stop, "threshold": limit})
    if status == _backend.UNDERFLOW:
        raise SolverError("step size underflow at t = %.6g" % t_stop,
                          payload={"H": H, "t": t_stop})
    if dense:
        return dy, dv, y
    return None, None, y


def _ladder_dump(prob: ShootingProblem, tol: float, n: int = 64):
    hs = prob.c + (prob.h - prob.c) * (np.arange(1, n + 1) / (n + 1.0))
    rows = []
    for H in hs:
        try:
            _, _, miss = psi_shoot(float(H), prob, tol, dense=False)
        except SolverError:
            miss = math.inf
        rows.append((float(H), float(miss)))
    return rows


def solve_extremal(A: float, q: float, shoot_tol: float = 1e-10,
                   grid_n: int = 4097, rk_tol: float = 1e-12,
                   ) -> ExtremalSolution:
    """Shoot for the unique H with Psi(1, H) = 0 and assemble the potential.

    Bisection on the admissible window; the terminal defect is strictly
    increasing in H so a single sign change brackets the root.  When the
    bracket collapses to machine resolution the defect jitters at the
    integrator's noise floor across single ulps of H, so the float
    neighborhood of the final midpoint is scanned and the smallest defect
    kept; the honest residual is returned rather than raising.
    """
    if not 1e-12 <= shoot_tol <= 1e-6:
        raise DomainError("shoot_tol must lie in [1e-12, 1e-6]")
    prob = ShootingProblem.build(A, q, grid_n)
    span = prob.h - prob.c
    lo = prob.c + 1e-12 * span
    hi = prob.h - 1e-12 * span

    def miss_at(H: float) -> float:
        try:
            _, _, m = psi_shoot(H, prob, rk_tol, dense=False)
        except SolverError:
            return math.inf  # escape means H is effectively too large
        return m

    m_lo, m_hi = miss_at(lo), miss_at(hi)
    if not (m_lo < 0.0 <= m_hi):
        raise SolverError(
            "terminal defect has no sign change over the admissible "
            "window; ladder attached",
            payload={"A": A, "q": q, "window": (prob.c, prob.h),
                     "ladder": _ladder_dump(prob, rk_tol)})
    best_h, best_m = (lo, m_lo) if abs(m_lo) <= abs(m_hi) else (hi, m_hi)
    while hi - lo > 1e-16 * max(abs(lo), abs(hi)):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        m = miss_at(mid)
        if abs(m) < abs(best_m):
            best_h, best_m = mid, m
        if abs(m) <= shoot_tol:
            break
        if m < 0.0:
            lo = mid
        else:
            hi = mid

    if abs(best_m) > shoot_tol:
        for direction in (math.inf, -math.inf):
            H_n = best_h
            for _ in range(2):
                H_n = math.nextafter(H_n, direction)
                if not prob.c < H_n < prob.h:
                    break
                m = miss_at(H_n)
                if abs(m) < abs(best_m):
                    best_h, best_m = H_n, m

    t = np.linspace(0.0, 1.0, prob.grid_n)
    psi, dpsi, miss = psi_shoot(best_h, prob, rk_tol, dense=True)
    psi_pos = np.maximum(psi, 0.0)
    coef = q / (4.0 * q - 2.0)
    v = coef * psi_pos ** (1.0 / (q - 1.0))

    energy = (0.5 * dpsi * dpsi
              - psi_pos ** (1.0 + prob.alpha) / (prob.alpha + 1.0)
              + 2.0 * best_h * psi)
    drift = float(np.max(np.abs(energy - 0.5 * (best_h - prob.c) ** 2)))
    sym = float(np.max(np.abs(psi - psi[::-1])))
    # Simpson weights; grid_n is odd so the composite rule applies whole
    w = np.ones(prob.grid_n)
    w[1:-1:2], w[2:-1:2] = 4.0, 2.0
    hstep = 1.0 / (prob.grid_n - 1)
    norm_q = (np.sum(w * v ** q) * hstep / 3.0) ** (1.0 / q)
    from .gy import propagate
    det = propagate(ExtremalLq(q=q, A=A, H=best_h, psi=tuple(psi_pos)),
                    tol=1e-11).det
    return ExtremalSolution(
        q=q, A=A, H=best_h, t=t, psi=psi, dpsi=dpsi, v=v, miss=float(miss),
        first_integral_drift=drift, norm_residual=float(abs(norm_q - A)),
        symmetry_defect=sym, det=float(det))


def endpoint_exponent(sol: ExtremalSolution, window=(1e-3, 1e-2)) -> float:
    """Growth exponent of V near t = 0 from a log-log least-squares fit.

    The profile rises linearly off the boundary, so V scales like
    t^(1/(q-1)) there: slope above 1 means V'(0) = 0, slope 1 a finite
    nonzero derivative, slope below 1 a vertical tangent.
    """
    t_lo, t_hi = window
    if not 0.0 < t_lo < t_hi < 1.0:
        raise DomainError("fit window must satisfy 0 < lo < hi < 1")
    mask = (sol.t >= t_lo) & (sol.t <= t_hi) & (sol.v > 0.0)
    if int(np.sum(mask)) < 8:
        raise DomainError(
            "fewer than 8 grid points in the fit window; increase grid_n")
    slope = np.polyfit(np.log(sol.t[mask]), np.log(sol.v[mask]), 1)[0]
    return float(slope)
