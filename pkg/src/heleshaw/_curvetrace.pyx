# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled predictor-corrector kernel for implicit real-curve tracing.

Drop-in replacement for heleshaw._tracer_py.trace_loop; see that module for
the algorithm description.
"""
import numpy as np

STATUS_CLOSED = 0
STATUS_OPEN = 1
STATUS_STALLED = 2

cdef int _CLOSED = 0
cdef int _OPEN = 1
cdef int _STALLED = 2

DEF MAXDEG = 8


cdef inline void _f_grad(double complex[:, :] A, int d, double x, double y,
                         double* F, double* gx, double* gy) noexcept nogil:
    cdef double complex z = x + 1j * y
    cdef double complex zb = x - 1j * y
    cdef double complex t[MAXDEG]
    cdef double complex acc, Fc, W
    cdef int n, m
    for n in range(d):
        acc = 0
        for m in range(d - 1, -1, -1):
            acc = acc * z + A[n, m]
        t[n] = acc
    Fc = 0
    for n in range(d - 1, -1, -1):
        Fc = Fc * zb + t[n]
    W = 0
    for n in range(d - 1, 0, -1):
        W = W * zb + n * t[n]
    F[0] = Fc.real
    gx[0] = 2.0 * W.real
    gy[0] = 2.0 * W.imag


def trace_loop(A, double x0, double y0, double step, double newton_tol,
               int max_steps, double closure_factor=0.75):
    """Trace one closed component of F = 0 starting near (x0, y0)."""
    A = np.ascontiguousarray(A, dtype=complex)
    cdef double complex[:, :] Av = A
    cdef int d = Av.shape[0]
    if d > MAXDEG:
        raise ValueError(f"curve degree too large for the compiled kernel (max {MAXDEG - 1})")

    out = np.empty((max_steps, 2), dtype=np.float64)
    cdef double[:, :] pts = out
    cdef double x = x0, y = y0
    cdef double F = 0, gx = 0, gy = 0, g2, gn, tx, ty, xp, yp
    cdef double tx_prev = 0, ty_prev = 0, xs, ys, close2
    cdef int i, k, count = 0, status = _OPEN
    cdef bint ok

    for i in range(100):
        _f_grad(Av, d, x, y, &F, &gx, &gy)
        g2 = gx * gx + gy * gy
        if g2 < 1e-280:
            return np.empty((0, 2)), STATUS_STALLED
        x -= F * gx / g2
        y -= F * gy / g2
        if -newton_tol < F < newton_tol:
            break
    else:
        return np.empty((0, 2)), STATUS_STALLED

    xs = x
    ys = y
    close2 = (closure_factor * step) * (closure_factor * step)
    with nogil:
        for k in range(max_steps):
            _f_grad(Av, d, x, y, &F, &gx, &gy)
            gn = (gx * gx + gy * gy) ** 0.5
            if gn < 1e-140:
                status = _STALLED
                break
            tx = -gy / gn
            ty = gx / gn
            if k > 0 and tx * tx_prev + ty * ty_prev < 0.0:
                tx = -tx
                ty = -ty
            xp = x + step * tx
            yp = y + step * ty
            ok = False
            for i in range(30):
                _f_grad(Av, d, xp, yp, &F, &gx, &gy)
                g2 = gx * gx + gy * gy
                if g2 < 1e-280:
                    break
                xp -= F * gx / g2
                yp -= F * gy / g2
                if -newton_tol < F < newton_tol:
                    ok = True
                    break
            if not ok:
                status = _STALLED
                break
            x = xp
            y = yp
            pts[count, 0] = x
            pts[count, 1] = y
            count += 1
            tx_prev = tx
            ty_prev = ty
            if k > 3 and (x - xs) * (x - xs) + (y - ys) * (y - ys) < close2:
                status = _CLOSED
                break
    return out[:count].copy(), status
