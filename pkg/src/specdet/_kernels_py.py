"""Pure-Python reference implementation of the numerical kernels.

Two hot loops live behind the backend boundary:

``dopri5``
    Dormand-Prince 5(4) propagation of a two-component state with embedded
    error control, PI step-size controller, FSAL reuse and the classical
    quartic dense-output interpolant.  The right-hand side is selected by an
    integer kind so the compiled twin can dispatch without callbacks.

``sl_sweep``
    Exact transfer of the Dirichlet shooting state through a run of
    piecewise-constant cells for a whole batch of spectral parameters at
    once, returning the interior zero count (oscillation count) and a
    smoothly renormalized terminal value whose sign changes exactly at the
    Dirichlet eigenvalues.

The compiled extension ``_kernels_cy`` implements the same module-level API
with identical constants and stepping logic; either module can serve as the
active backend.
"""

from __future__ import annotations

import math

import numpy as np

# Right-hand-side kinds understood by dopri5.
RHS_PSI = 0     # u'' = |u|**alpha - twoH           (p1=alpha, p2=twoH)
RHS_VLIN = 1    # u'' = V(t) u, V piecewise linear  (arr=values on uniform grid)
RHS_VPOW = 2    # u'' = c*max(L(t),0)**e * u        (arr=psi grid, p1=c, p2=e)
RHS_VCONST = 3  # u'' = a u                         (p1=a)

# Integration outcomes.
OK = 0
BLOWUP = 1
UNDERFLOW = 2

# Dormand-Prince 5(4) tableau.
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = (19372.0 / 6561.0, -25360.0 / 2187.0,
                          64448.0 / 6561.0, -212.0 / 729.0)
_A61, _A62, _A63, _A64, _A65 = (9017.0 / 3168.0, -355.0 / 33.0,
                                46732.0 / 5247.0, 49.0 / 176.0,
                                -5103.0 / 18656.0)
_B1, _B3, _B4, _B5, _B6 = (35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0,
                           -2187.0 / 6784.0, 11.0 / 84.0)
_E1, _E3, _E4, _E5, _E6, _E7 = (71.0 / 57600.0, -71.0 / 16695.0,
                                71.0 / 1920.0, -17253.0 / 339200.0,
                                22.0 / 525.0, -1.0 / 40.0)
# Dense-output weights for the fifth-order continuous extension.
_D1 = -12715105075.0 / 11282082432.0
_D3 = 87487479700.0 / 32700410799.0
_D4 = -10690763975.0 / 1880347072.0
_D5 = 701980252875.0 / 199316789632.0
_D6 = -1453857185.0 / 822651844.0
_D7 = 69997945.0 / 29380423.0

_SAFETY = 0.9
_BETA = 0.04
_EXPO = 0.2 - 0.75 * _BETA
_FAC_MIN = 0.2
_FAC_MAX = 10.0


def _accel(kind: int, p1: float, p2: float, arr, t: float, u: float) -> float:
    """Second derivative of the first state component at (t, u)."""
    if kind == RHS_PSI:
        return abs(u) ** p1 - p2
    if kind == RHS_VCONST:
        return p1 * u
    # Piecewise-linear lookup on a uniform grid over [0, 1].
    n = arr.shape[0]
    s = t * (n - 1)
    i = int(s)
    if i >= n - 1:
        i = n - 2
    w = s - i
    val = arr[i] * (1.0 - w) + arr[i + 1] * w
    if kind == RHS_VLIN:
        return val * u
    if val < 0.0:
        val = 0.0
    return p1 * val ** p2 * u


def dopri5(kind, p1, p2, arr, y0, v0, rtol, atol, h_init, limit, stops, out_t):
    """Integrate u'' = f(t, u) over [0, 1] from (y0, v0).

    ``stops`` is an ascending array of interior breakpoints where the
    right-hand side loses smoothness; the integrator lands on each exactly
    and restarts its FSAL stage there.  ``out_t`` is an ascending sample grid
    in [0, 1] (may be empty) filled via the dense interpolant.

    Returns ``(status, t_stop, y, v, n_accept, n_reject, err_accum, min_y,
    dense_y, dense_v)``.
    """
    if arr is None:
        arr = np.empty(0)
    n_out = out_t.shape[0]
    dense_y = np.full(n_out, np.nan)
    dense_v = np.full(n_out, np.nan)
    iout = 0
    while iout < n_out and out_t[iout] <= 0.0:
        dense_y[iout] = y0
        dense_v[iout] = v0
        iout += 1

    t = 0.0
    y, v = float(y0), float(v0)
    min_y = y
    n_acc = n_rej = 0
    err_accum = 0.0
    facold = 1e-4
    h = min(h_init, 1.0)
    iseg = 0
    n_seg = stops.shape[0]
    seg_end = stops[0] if n_seg > 0 else 1.0

    k1y = v
    k1v = _accel(kind, p1, p2, arr, t, y)
    while t < 1.0:
        if h < 1e-14:
            return (UNDERFLOW, t, y, v, n_acc, n_rej, err_accum, min_y,
                    dense_y, dense_v)
        if t + h > seg_end:
            h = seg_end - t

        # Six stages plus the FSAL evaluation at the step end.
        ay = y + h * _A21 * k1y
        av = v + h * _A21 * k1v
        k2y = av
        k2v = _accel(kind, p1, p2, arr, t + _C2 * h, ay)

        ay = y + h * (_A31 * k1y + _A32 * k2y)
        av = v + h * (_A31 * k1v + _A32 * k2v)
        k3y = av
        k3v = _accel(kind, p1, p2, arr, t + _C3 * h, ay)

        ay = y + h * (_A41 * k1y + _A42 * k2y + _A43 * k3y)
        av = v + h * (_A41 * k1v + _A42 * k2v + _A43 * k3v)
        k4y = av
        k4v = _accel(kind, p1, p2, arr, t + _C4 * h, ay)

        ay = y + h * (_A51 * k1y + _A52 * k2y + _A53 * k3y + _A54 * k4y)
        av = v + h * (_A51 * k1v + _A52 * k2v + _A53 * k3v + _A54 * k4v)
        k5y = av
        k5v = _accel(kind, p1, p2, arr, t + _C5 * h, ay)

        ay = y + h * (_A61 * k1y + _A62 * k2y + _A63 * k3y + _A64 * k4y
                      + _A65 * k5y)
        av = v + h * (_A61 * k1v + _A62 * k2v + _A63 * k3v + _A64 * k4v
                      + _A65 * k5v)
        k6y = av
        k6v = _accel(kind, p1, p2, arr, t + h, ay)

        ynew = y + h * (_B1 * k1y + _B3 * k3y + _B4 * k4y + _B5 * k5y
                        + _B6 * k6y)
        vnew = v + h * (_B1 * k1v + _B3 * k3v + _B4 * k4v + _B5 * k5v
                        + _B6 * k6v)
        k7y = vnew
        k7v = _accel(kind, p1, p2, arr, t + h, ynew)

        ey = h * (_E1 * k1y + _E3 * k3y + _E4 * k4y + _E5 * k5y + _E6 * k6y
                  + _E7 * k7y)
        ev = h * (_E1 * k1v + _E3 * k3v + _E4 * k4v + _E5 * k5v + _E6 * k6v
                  + _E7 * k7v)
        sy = atol + rtol * max(abs(y), abs(ynew))
        sv = atol + rtol * max(abs(v), abs(vnew))
        err = math.sqrt(0.5 * ((ey / sy) ** 2 + (ev / sv) ** 2))

        if err <= 1.0:
            # Accepted: fill dense samples covered by this step.
            t_new = t + h
            if iout < n_out and out_t[iout] <= t_new:
                ydiff = ynew - y
                bspl = h * k1y - ydiff
                c3y = bspl
                c4y = ydiff - h * k7y - bspl
                c5y = h * (_D1 * k1y + _D3 * k3y + _D4 * k4y + _D5 * k5y
                           + _D6 * k6y + _D7 * k7y)
                vdiff = vnew - v
                bspl = h * k1v - vdiff
                c3v = bspl
                c4v = vdiff - h * k7v - bspl
                c5v = h * (_D1 * k1v + _D3 * k3v + _D4 * k4v + _D5 * k5v
                           + _D6 * k6v + _D7 * k7v)
                while iout < n_out and out_t[iout] <= t_new:
                    th = (out_t[iout] - t) / h
                    th1 = 1.0 - th
                    dense_y[iout] = y + th * (ydiff + th1 * (c3y + th * (
                        c4y + th1 * c5y)))
                    dense_v[iout] = v + th * (vdiff + th1 * (c3v + th * (
                        c4v + th1 * c5v)))
                    iout += 1
            t, y, v = t_new, ynew, vnew
            if y < min_y:
                min_y = y
            n_acc += 1
            err_accum += abs(ey)
            if limit > 0.0 and abs(y) > limit:
                return (BLOWUP, t, y, v, n_acc, n_rej, err_accum, min_y,
                        dense_y, dense_v)
            if t >= seg_end - 1e-15 and t < 1.0:
                if t < seg_end:
                    t = seg_end
                iseg += 1
                seg_end = stops[iseg] if iseg < n_seg else 1.0
                k1y = v
                k1v = _accel(kind, p1, p2, arr, t, y)
            else:
                k1y, k1v = k7y, k7v
            facold = max(err, 1e-4)
            fac = _SAFETY * err ** (-_EXPO) * facold ** _BETA if err > 0.0 \
                else _FAC_MAX
            h *= min(_FAC_MAX, max(_FAC_MIN, fac))
        else:
            n_rej += 1
            h *= min(1.0, max(_FAC_MIN, _SAFETY * err ** -0.2))
        if t + h > 1.0:
            h = 1.0 - t
        if h <= 0.0 and t < 1.0:
            h = 1e-15

    while iout < n_out:
        dense_y[iout] = y
        dense_v[iout] = v
        iout += 1
    return OK, t, y, v, n_acc, n_rej, err_accum, min_y, dense_y, dense_v


def sl_sweep(lams, edges, vals):
    """Batched Dirichlet shooting through piecewise-constant cells.

    For each spectral parameter in ``lams`` the state (y, y') with
    y(0) = 0, y'(0) = 1 of -y'' + V y = lam y is advanced exactly across
    every cell, renormalizing by the state norm after each cell so that
    nothing overflows and the terminal value stays a smooth function of the
    parameter.  Returns ``(counts, miss)``: the number of interior zeros of
    y (equal to the number of eigenvalues below lam) and the renormalized
    y(1).

    When a zero of y falls within rounding of an interior cell boundary
    the floor-based winding count can double-count or drop it at that one
    spectral value; callers that bisect on the count must verify the jump
    with flanking evaluations (generic perturbed arguments are exact).
    """
    lams = np.asarray(lams, dtype=float)
    y = np.zeros_like(lams)
    p = np.ones_like(lams)
    counts = np.zeros(lams.shape, dtype=np.int64)
    for k in range(vals.shape[0]):
        h = edges[k + 1] - edges[k]
        if h <= 0.0:
            continue
        w = lams - vals[k]
        osc = w > 0.0
        hyp = w < 0.0

        om = np.sqrt(np.where(osc, w, 1.0))
        th0 = np.arctan2(om * y, p)
        omh = om * h
        c = np.cos(omh)
        s_ = np.sin(omh)
        y_osc = y * c + p * (s_ / om)
        p_osc = -y * om * s_ + p * c
        n_osc = np.floor((th0 + omh) / math.pi) - np.floor(th0 / math.pi)

        kk = np.sqrt(np.where(hyp, -w, 1.0))
        kkh = kk * h
        ch = np.cosh(kkh)
        sh = np.sinh(kkh)
        y_hyp = y * ch + p * (sh / kk)
        p_hyp = y * kk * sh + p * ch

        y_aff = y + p * h

        ynew = np.where(osc, y_osc, np.where(hyp, y_hyp, y_aff))
        pnew = np.where(osc, p_osc, np.where(hyp, p_hyp, p))
        crossed = (y * ynew < 0.0) | ((ynew == 0.0) & (y != 0.0))
        counts += np.where(osc, n_osc.astype(np.int64),
                           crossed.astype(np.int64))

        scale = 1.0 / np.hypot(ynew, pnew)
        y = ynew * scale
        p = pnew * scale
    return counts, y
