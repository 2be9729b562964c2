# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of the numerical kernels.

Same module-level API, constants and stepping logic as the pure-Python
reference; see that module for the full contract.  The only differences
are mechanical: typed scalars, memoryviews instead of ndarray temporaries,
and libc transcendentals.
"""

import numpy as np

from libc.math cimport (atan2, cos, cosh, fabs, floor, hypot, pow, sin,
                        sinh, sqrt)

RHS_PSI = 0
RHS_VLIN = 1
RHS_VPOW = 2
RHS_VCONST = 3

OK = 0
BLOWUP = 1
UNDERFLOW = 2

cdef double _C2 = 1.0 / 5.0
cdef double _C3 = 3.0 / 10.0
cdef double _C4 = 4.0 / 5.0
cdef double _C5 = 8.0 / 9.0
cdef double _A21 = 1.0 / 5.0
cdef double _A31 = 3.0 / 40.0
cdef double _A32 = 9.0 / 40.0
cdef double _A41 = 44.0 / 45.0
cdef double _A42 = -56.0 / 15.0
cdef double _A43 = 32.0 / 9.0
cdef double _A51 = 19372.0 / 6561.0
cdef double _A52 = -25360.0 / 2187.0
cdef double _A53 = 64448.0 / 6561.0
cdef double _A54 = -212.0 / 729.0
cdef double _A61 = 9017.0 / 3168.0
cdef double _A62 = -355.0 / 33.0
cdef double _A63 = 46732.0 / 5247.0
cdef double _A64 = 49.0 / 176.0
cdef double _A65 = -5103.0 / 18656.0
cdef double _B1 = 35.0 / 384.0
cdef double _B3 = 500.0 / 1113.0
cdef double _B4 = 125.0 / 192.0
cdef double _B5 = -2187.0 / 6784.0
cdef double _B6 = 11.0 / 84.0
cdef double _E1 = 71.0 / 57600.0
cdef double _E3 = -71.0 / 16695.0
cdef double _E4 = 71.0 / 1920.0
cdef double _E5 = -17253.0 / 339200.0
cdef double _E6 = 22.0 / 525.0
cdef double _E7 = -1.0 / 40.0
cdef double _D1 = -12715105075.0 / 11282082432.0
cdef double _D3 = 87487479700.0 / 32700410799.0
cdef double _D4 = -10690763975.0 / 1880347072.0
cdef double _D5 = 701980252875.0 / 199316789632.0
cdef double _D6 = -1453857185.0 / 822651844.0
cdef double _D7 = 69997945.0 / 29380423.0

cdef double _SAFETY = 0.9
cdef double _BETA = 0.04
cdef double _EXPO = 0.2 - 0.75 * _BETA
cdef double _FAC_MIN = 0.2
cdef double _FAC_MAX = 10.0
cdef double _PI = 3.141592653589793

cdef int _RHS_PSI = 0
cdef int _RHS_VLIN = 1
cdef int _RHS_VPOW = 2
cdef int _RHS_VCONST = 3


cdef inline double _accel(int kind, double p1, double p2,
                          const double[::1] arr, double t, double u):
    cdef Py_ssize_t n, i
    cdef double s, w, val
    if kind == _RHS_PSI:
        return pow(fabs(u), p1) - p2
    if kind == _RHS_VCONST:
        return p1 * u
    n = arr.shape[0]
    s = t * (n - 1)
    i = <Py_ssize_t>s
    if i >= n - 1:
        i = n - 2
    w = s - i
    val = arr[i] * (1.0 - w) + arr[i + 1] * w
    if kind == _RHS_VLIN:
        return val * u
    if val < 0.0:
        val = 0.0
    return p1 * pow(val, p2) * u


def dopri5(int kind, double p1, double p2, arr, double y0, double v0,
           double rtol, double atol, double h_init, double limit,
           stops, out_t):
    """Integrate u'' = f(t, u) over [0, 1]; see the pure twin's docstring."""
    if arr is None:
        arr = np.empty(0)
    cdef const double[::1] arr_v = np.ascontiguousarray(arr, dtype=np.float64)
    cdef const double[::1] stops_v = np.ascontiguousarray(stops,
                                                          dtype=np.float64)
    cdef const double[::1] out_v = np.ascontiguousarray(out_t,
                                                        dtype=np.float64)
    cdef Py_ssize_t n_out = out_v.shape[0]
    dense_y_arr = np.full(n_out, np.nan)
    dense_v_arr = np.full(n_out, np.nan)
    cdef double[::1] dense_y = dense_y_arr
    cdef double[::1] dense_v = dense_v_arr
    cdef Py_ssize_t iout = 0
    while iout < n_out and out_v[iout] <= 0.0:
        dense_y[iout] = y0
        dense_v[iout] = v0
        iout += 1

    cdef double t = 0.0
    cdef double y = y0
    cdef double v = v0
    cdef double min_y = y
    cdef long n_acc = 0
    cdef long n_rej = 0
    cdef double err_accum = 0.0
    cdef double facold = 1e-4
    cdef double h = h_init if h_init < 1.0 else 1.0
    cdef Py_ssize_t iseg = 0
    cdef Py_ssize_t n_seg = stops_v.shape[0]
    cdef double seg_end = stops_v[0] if n_seg > 0 else 1.0

    cdef double k1y = v
    cdef double k1v = _accel(kind, p1, p2, arr_v, t, y)
    cdef double ay, av, k2y, k2v, k3y, k3v, k4y, k4v, k5y, k5v, k6y, k6v
    cdef double k7y, k7v, ynew, vnew, ey, ev, sy, sv, err, eys, evs
    cdef double t_new, ydiff, vdiff, bspl, c3y, c4y, c5y, c3v, c4v, c5v
    cdef double th, th1, fac

    while t < 1.0:
        if h < 1e-14:
            return (UNDERFLOW, t, y, v, n_acc, n_rej, err_accum, min_y,
                    dense_y_arr, dense_v_arr)
        if t + h > seg_end:
            h = seg_end - t

        ay = y + h * _A21 * k1y
        av = v + h * _A21 * k1v
        k2y = av
        k2v = _accel(kind, p1, p2, arr_v, t + _C2 * h, ay)

        ay = y + h * (_A31 * k1y + _A32 * k2y)
        av = v + h * (_A31 * k1v + _A32 * k2v)
        k3y = av
        k3v = _accel(kind, p1, p2, arr_v, t + _C3 * h, ay)

        ay = y + h * (_A41 * k1y + _A42 * k2y + _A43 * k3y)
        av = v + h * (_A41 * k1v + _A42 * k2v + _A43 * k3v)
        k4y = av
        k4v = _accel(kind, p1, p2, arr_v, t + _C4 * h, ay)

        ay = y + h * (_A51 * k1y + _A52 * k2y + _A53 * k3y + _A54 * k4y)
        av = v + h * (_A51 * k1v + _A52 * k2v + _A53 * k3v + _A54 * k4v)
        k5y = av
        k5v = _accel(kind, p1, p2, arr_v, t + _C5 * h, ay)

        ay = y + h * (_A61 * k1y + _A62 * k2y + _A63 * k3y + _A64 * k4y
                      + _A65 * k5y)
        av = v + h * (_A61 * k1v + _A62 * k2v + _A63 * k3v + _A64 * k4v
                      + _A65 * k5v)
        k6y = av
        k6v = _accel(kind, p1, p2, arr_v, t + h, ay)

        ynew = y + h * (_B1 * k1y + _B3 * k3y + _B4 * k4y + _B5 * k5y
                        + _B6 * k6y)
        vnew = v + h * (_B1 * k1v + _B3 * k3v + _B4 * k4v + _B5 * k5v
                        + _B6 * k6v)
        k7y = vnew
        k7v = _accel(kind, p1, p2, arr_v, t + h, ynew)

        ey = h * (_E1 * k1y + _E3 * k3y + _E4 * k4y + _E5 * k5y + _E6 * k6y
                  + _E7 * k7y)
        ev = h * (_E1 * k1v + _E3 * k3v + _E4 * k4v + _E5 * k5v + _E6 * k6v
                  + _E7 * k7v)
        sy = atol + rtol * (fabs(y) if fabs(y) > fabs(ynew) else fabs(ynew))
        sv = atol + rtol * (fabs(v) if fabs(v) > fabs(vnew) else fabs(vnew))
        eys = ey / sy
        evs = ev / sv
        err = sqrt(0.5 * (eys * eys + evs * evs))

        if err <= 1.0:
            t_new = t + h
            if iout < n_out and out_v[iout] <= t_new:
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
                while iout < n_out and out_v[iout] <= t_new:
                    th = (out_v[iout] - t) / h
                    th1 = 1.0 - th
                    dense_y[iout] = y + th * (ydiff + th1 * (c3y + th * (
                        c4y + th1 * c5y)))
                    dense_v[iout] = v + th * (vdiff + th1 * (c3v + th * (
                        c4v + th1 * c5v)))
                    iout += 1
            t = t_new
            y = ynew
            v = vnew
            if y < min_y:
                min_y = y
            n_acc += 1
            err_accum += fabs(ey)
            if limit > 0.0 and fabs(y) > limit:
                return (BLOWUP, t, y, v, n_acc, n_rej, err_accum, min_y,
                        dense_y_arr, dense_v_arr)
            if t >= seg_end - 1e-15 and t < 1.0:
                if t < seg_end:
                    t = seg_end
                iseg += 1
                seg_end = stops_v[iseg] if iseg < n_seg else 1.0
                k1y = v
                k1v = _accel(kind, p1, p2, arr_v, t, y)
            else:
                k1y = k7y
                k1v = k7v
            facold = err if err > 1e-4 else 1e-4
            fac = (_SAFETY * pow(err, -_EXPO) * pow(facold, _BETA)
                   if err > 0.0 else _FAC_MAX)
            if fac < _FAC_MIN:
                fac = _FAC_MIN
            if fac > _FAC_MAX:
                fac = _FAC_MAX
            h *= fac
        else:
            n_rej += 1
            fac = _SAFETY * pow(err, -0.2)
            if fac < _FAC_MIN:
                fac = _FAC_MIN
            if fac > 1.0:
                fac = 1.0
            h *= fac
        if t + h > 1.0:
            h = 1.0 - t
        if h <= 0.0 and t < 1.0:
            h = 1e-15

    while iout < n_out:
        dense_y[iout] = y
        dense_v[iout] = v
        iout += 1
    return OK, t, y, v, n_acc, n_rej, err_accum, min_y, dense_y_arr, \
        dense_v_arr


def sl_sweep(lams, edges, vals):
    """Batched Dirichlet shooting; see the pure twin for the contract,
    including the cell-boundary caveat on the winding count."""
    lams_arr = np.ascontiguousarray(lams, dtype=np.float64)
    cdef const double[::1] lam_v = lams_arr
    cdef const double[::1] edge_v = np.ascontiguousarray(edges,
                                                         dtype=np.float64)
    cdef const double[::1] val_v = np.ascontiguousarray(vals,
                                                        dtype=np.float64)
    cdef Py_ssize_t n = lam_v.shape[0]
    cdef Py_ssize_t m = val_v.shape[0]
    y_arr = np.zeros(n)
    counts_arr = np.zeros(n, dtype=np.int64)
    p_arr = np.ones(n)
    cdef double[::1] y = y_arr
    cdef double[::1] p = p_arr
    cdef long[::1] counts = counts_arr
    cdef Py_ssize_t k, j
    cdef double h, w, om, th0, omh, c, s_, kk, kkh, ch, sh
    cdef double yj, pj, ynew, pnew, scale

    for k in range(m):
        h = edge_v[k + 1] - edge_v[k]
        if h <= 0.0:
            continue
        for j in range(n):
            yj = y[j]
            pj = p[j]
            w = lam_v[j] - val_v[k]
            if w > 0.0:
                om = sqrt(w)
                th0 = atan2(om * yj, pj)
                omh = om * h
                c = cos(omh)
                s_ = sin(omh)
                ynew = yj * c + pj * (s_ / om)
                pnew = -yj * om * s_ + pj * c
                counts[j] += (<long>floor((th0 + omh) / _PI)
                              - <long>floor(th0 / _PI))
            elif w < 0.0:
                kk = sqrt(-w)
                kkh = kk * h
                ch = cosh(kkh)
                sh = sinh(kkh)
                ynew = yj * ch + pj * (sh / kk)
                pnew = yj * kk * sh + pj * ch
                if yj * ynew < 0.0 or (ynew == 0.0 and yj != 0.0):
                    counts[j] += 1
            else:
                ynew = yj + pj * h
                pnew = pj
                if yj * ynew < 0.0 or (ynew == 0.0 and yj != 0.0):
                    counts[j] += 1
            scale = 1.0 / hypot(ynew, pnew)
            y[j] = ynew * scale
            p[j] = pnew * scale
    return counts_arr, y_arr
