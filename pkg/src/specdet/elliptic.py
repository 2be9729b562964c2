"""Closed-form q = 2 extremal through Weierstrass elliptic functions.

For the quadratic budget the profile equation integrates in closed form:
Psi(t) = wp(z(t)) with invariants

    g2 = 24 H,   g3 = -6 (H - 9A^2/2)^2,

evaluated along the line Im z = |omega'| of a rectangular lattice, where
the function is real and sweeps the bounded component [e3, e2] of the real
curve.  The time change is linear, dz/dt = 1/sqrt(6).  The height H is
pinned by the Dirichlet condition that the profile vanish at both ends,
which happens exactly when wp vanishes at real offset omega - xi0 from the
imaginary half-period, xi0 = 1/(2 sqrt 6).

wp itself is evaluated by seeding the Laurent expansion inside a trust
radius and doubling the argument back out; values on the shifted line then
follow from the half-period addition identity.  Half-periods come from
Carlson's symmetric integral R_F.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GeometryError, SolverError
from .extremal_lq import ExtremalSolution, c_of, h_of
from .potential import ExtremalLq

__all__ = ["EllipticInvariants", "XI0", "h_star", "invariants",
           "discriminant", "rf", "wp_on_imag_shift", "wp_line_slope",
           "time_map", "solve_l2"]

XI0 = 1.0 / (2.0 * math.sqrt(6.0))


@dataclass(frozen=True)
class EllipticInvariants:
    """Lattice data for one (A, H) pair: invariants, roots, half-periods.

    The lattice is rectangular (disc > 0): ``omega`` is the real
    half-period and ``omega_p_im`` the imaginary part of the purely
    imaginary one.
    """

    A: float
    H: float
    g2: float
    g3: float
    disc: float
    e1: float
    e2: float
    e3: float
    omega: float
    omega_p_im: float


def discriminant(A: float, H: float) -> float:
    """g2^3 - 27 g3^2 for the cubic invariants at (A, H)."""
    g2 = 24.0 * H
    g3 = -6.0 * (H - 4.5 * A * A) ** 2
    return g2 ** 3 - 27.0 * g3 * g3


def h_star(A: float) -> float:
    """Degeneration height: the root of 128 H^3 = 9 (H - 9A^2/2)^4.

    Unique in (9A^2/2, infinity); located by doubling then bisection to
    relative width 1e-13.  The curve has two real components below it and
    degenerates there.
    """
    A = float(A)
    if not (math.isfinite(A) and A > 0.0):
        raise DomainError("mass A must be positive and finite")
    c = 4.5 * A * A

    def poly(H: float) -> float:
        return 128.0 * H ** 3 - 9.0 * (H - c) ** 4

    lo = c
    hi = max(2.0 * c, 1.0)
    while poly(hi) >= 0.0:
        lo = hi
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= 1e-13 * mid or mid in (lo, hi):
            break
        if poly(mid) < 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def rf(x: float, y: float, z: float) -> float:
    """Carlson symmetric integral R_F by the duplication iteration.

    Arguments nonnegative, at most one zero.  Converges to about 1e-14
    relative via the fifth-order tail expansion.
    """
    if min(x, y, z) < 0.0 or sorted((x, y, z))[1] == 0.0:
        raise DomainError("rf requires nonnegative arguments, at most "
                          "one zero")
    for _ in range(200):
        lam = (math.sqrt(x) * math.sqrt(y) + math.sqrt(y) * math.sqrt(z)
               + math.sqrt(z) * math.sqrt(x))
        x, y, z = 0.25 * (x + lam), 0.25 * (y + lam), 0.25 * (z + lam)
        mu = (x + y + z) / 3.0
        if max(abs(x - mu), abs(y - mu), abs(z - mu)) <= 1e-8 * mu:
            break
    mu = (x + y + z) / 3.0
    dx, dy, dz = 1.0 - x / mu, 1.0 - y / mu, 1.0 - z / mu
    e2 = dx * dy + dy * dz + dz * dx
    e3 = dx * dy * dz
    return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0
            - 3.0 * e2 * e3 / 44.0) / math.sqrt(mu)


def invariants(A: float, H: float) -> EllipticInvariants:
    """Roots and half-periods of the lattice with g2 = 24H, g3 = -6(H-c)^2.

    Needs a positive discriminant (rectangular lattice, three real roots);
    that holds exactly on H < h_star(A).
    """
    A = float(A)
    H = float(H)
    if not (math.isfinite(A) and A > 0.0):
        raise DomainError("mass A must be positive and finite")
    g2 = 24.0 * H
    g3 = -6.0 * (H - 4.5 * A * A) ** 2
    disc = g2 ** 3 - 27.0 * g3 * g3
    if disc <= 0.0 or g2 <= 0.0:
        raise DomainError(
            "degenerate curve: disc = %.6g at H = %.6g (valid window is "
            "H < h*(A) = %.6g)" % (disc, H, h_star(A)))
    # trigonometric Cardano branch for 4u^3 - g2 u - g3 with 3 real roots
    p = -g2 / 4.0
    qq = -g3 / 4.0
    m = 2.0 * math.sqrt(-p / 3.0)
    arg = 3.0 * qq / (2.0 * p) * math.sqrt(-3.0 / p)
    arg = min(1.0, max(-1.0, arg))
    theta = math.acos(arg) / 3.0
    e1 = m * math.cos(theta)
    e2 = m * math.cos(theta - 2.0 * math.pi / 3.0)
    e3 = m * math.cos(theta - 4.0 * math.pi / 3.0)
    omega = rf(0.0, e1 - e3, e1 - e2)
    omega_p_im = rf(0.0, e1 - e3, e2 - e3)
    return EllipticInvariants(A=A, H=H, g2=g2, g3=g3, disc=disc,
                              e1=e1, e2=e2, e3=e3, omega=omega,
                              omega_p_im=omega_p_im)


def _wp_series_coeffs(g2: float, g3: float, n: int = 16):
    c = [0.0] * (n + 1)
    c[2] = g2 / 20.0
    c[3] = g3 / 28.0
    for j in range(4, n + 1):
        s = sum(c[m] * c[j - m] for m in range(2, j - 1))
        c[j] = 3.0 * s / ((2 * j + 1) * (j - 3))
    return c


def _wp_real(x: float, g2: float, g3: float, r0: float, coeffs) -> float:
    """wp on the real axis for 0 < x, by Laurent seed plus duplication."""
    k = 0
    z = x
    while z > r0:
        z *= 0.5
        k += 1
    z2 = z * z
    acc = 0.0
    for j in range(len(coeffs) - 1, 1, -1):
        acc = (acc + coeffs[j]) * z2
    p = 1.0 / z2 + acc
    for _ in range(k):
        num = (p * p + g2 / 4.0) ** 2 + 2.0 * g3 * p
        den = 4.0 * p ** 3 - g2 * p - g3
        p = num / den
    return p


def wp_on_imag_shift(x: float, inv: EllipticInvariants) -> float:
    """wp(x + omega'), real for real x, valued in [e3, e2].

    Uses wp(x + omega') = e3 + (e1-e3)(e2-e3)/(wp(x) - e3); even in x.
    ``x`` must lie within one real half-period of the origin.
    """
    ax = abs(float(x))
    if ax > inv.omega * (1.0 + 1e-12):
        raise DomainError("offset %.6g exceeds the real half-period %.6g"
                          % (x, inv.omega))
    ax = min(ax, inv.omega)
    if ax == 0.0:
        return inv.e3
    r0 = 0.5 * min(inv.omega, inv.omega_p_im)
    coeffs = _wp_series_coeffs(inv.g2, inv.g3)
    p = _wp_real(ax, inv.g2, inv.g3, r0, coeffs)
    return inv.e3 + (inv.e1 - inv.e3) * (inv.e2 - inv.e3) / (p - inv.e3)


def wp_line_slope(x: float, inv: EllipticInvariants) -> float:
    """d/dx of wp(x + omega'); odd in x, zero at x = 0 and |x| = omega."""
    ax = abs(float(x))
    if ax > inv.omega * (1.0 + 1e-12):
        raise DomainError("offset %.6g exceeds the real half-period %.6g"
                          % (x, inv.omega))
    ax = min(ax, inv.omega)
    if ax == 0.0 or ax == inv.omega:
        return 0.0
    r0 = 0.5 * min(inv.omega, inv.omega_p_im)
    coeffs = _wp_series_coeffs(inv.g2, inv.g3)
    p = _wp_real(ax, inv.g2, inv.g3, r0, coeffs)
    # on (0, omega) the real-axis wp decreases, so wp' is the negative root
    dp2 = 4.0 * p ** 3 - inv.g2 * p - inv.g3
    dp = -math.sqrt(max(dp2, 0.0))
    slope = -(inv.e1 - inv.e3) * (inv.e2 - inv.e3) * dp / (p - inv.e3) ** 2
    return math.copysign(slope, x) if x != 0.0 else slope


def time_map(t) -> float:
    """Real offset (2t - 1)/(2 sqrt 6) of the lattice argument at time t."""
    t_arr = np.asarray(t, dtype=float)
    if np.any((t_arr < 0.0) | (t_arr > 1.0)):
        raise DomainError("time must lie in [0, 1]")
    out = (2.0 * t_arr - 1.0) / (2.0 * math.sqrt(6.0))
    return out if out.ndim else float(out)


def _boundary_value(A: float, H: float) -> float:
    """Profile value at t = 0, namely wp at offset omega - xi0."""
    inv = invariants(A, H)
    if XI0 >= inv.omega:
        raise GeometryError(
            "xi0 = %.6g is not inside the real half-period %.6g; the "
            "lattice geometry contradicts the construction" %
            (XI0, inv.omega))
    return wp_on_imag_shift(inv.omega - XI0, inv)


def solve_l2(A: float, tol: float = 1e-10, grid_n: int = 4097,
             ) -> ExtremalSolution:
    """Closed-form q = 2 extremal for mass A as an ExtremalSolution.

    Bisects H between 9A^2/2 and the degeneration height for the root of
    the boundary value Psi(0, H); the profile and potential then come
    from wp along the shifted line, Psi = 3V.
    """
    A = float(A)
    if not (math.isfinite(A) and A > 0.0):
        raise DomainError("mass A must be positive and finite")
    if not 1e-12 <= tol <= 1e-6:
        raise DomainError("tol must lie in [1e-12, 1e-6]")
    if grid_n < 33:
        raise DomainError("grid_n must be at least 33")
    c = 4.5 * A * A
    top = h_star(A)
    span = top - c
    lo = c + 1e-9 * span
    hi = top - 1e-9 * span
    f_lo, f_hi = _boundary_value(A, lo), _boundary_value(A, hi)
    if not (f_lo < 0.0 <= f_hi):
        ladder = [(float(H), float(_boundary_value(A, H)))
                  for H in np.linspace(lo, hi, 64)]
        raise SolverError(
            "boundary value has no sign change between the window ends; "
            "ladder attached",
            payload={"A": A, "window": (c, top), "ladder": ladder})
    best_h, best_f = (lo, f_lo) if abs(f_lo) <= abs(f_hi) else (hi, f_hi)
    while hi - lo > 1e-16 * max(abs(lo), abs(hi)):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = _boundary_value(A, mid)
        if abs(fm) < abs(best_f):
            best_h, best_f = mid, fm
        if abs(fm) <= tol:
            break
        if fm < 0.0:
            lo = mid
        else:
            hi = mid

    H = best_h
    inv = invariants(A, H)
    t = np.linspace(0.0, 1.0, grid_n)
    offs = inv.omega - np.abs(time_map(t))
    sq6 = math.sqrt(6.0)
    psi = np.empty(grid_n)
    dpsi = np.empty(grid_n)
    for i in range(grid_n):
        psi[i] = wp_on_imag_shift(float(offs[i]), inv)
        slope = wp_line_slope(float(offs[i]), inv)
        # left half rises: offset grows with t, so the chain factor is
        # +1/sqrt(6) before the midpoint and -1/sqrt(6) after
        dpsi[i] = slope / sq6 if t[i] < 0.5 else -slope / sq6
    psi[0] = psi[-1] = max(psi[0], 0.0)
    miss = float(best_f)
    v = psi / 3.0
    psi_pos = np.maximum(psi, 0.0)
    energy = 0.5 * dpsi ** 2 - psi_pos ** 3 / 3.0 + 2.0 * H * psi
    drift = float(np.max(np.abs(energy - 0.5 * (H - c) ** 2)))
    sym = float(np.max(np.abs(psi - psi[::-1])))
    w = np.ones(grid_n)
    w[1:-1:2], w[2:-1:2] = 4.0, 2.0
    hstep = 1.0 / (grid_n - 1)
    norm2 = math.sqrt(float(np.sum(w * v * v)) * hstep / 3.0)
    from .gy import propagate
    det = propagate(ExtremalLq(q=2.0, A=A, H=H, psi=tuple(psi_pos)),
                    tol=1e-11).det
    return ExtremalSolution(
        q=2.0, A=A, H=H, t=t, psi=psi, dpsi=dpsi, v=np.maximum(v, 0.0),
        miss=miss, first_integral_drift=drift,
        norm_residual=float(abs(norm2 - A)), symmetry_defect=sym,
        det=float(det))
