"""Pure-Python predictor-corrector kernel for implicit real-curve tracing.

Reference implementation of the hot loop; `heleshaw._curvetrace` is the
compiled drop-in replacement selected at import when available.  Both trace
the zero set of F(x, y) = Re sum_{n,m} A[n,m] (x-iy)^n (x+iy)^m for a
Hermitian coefficient matrix A (F is then real automatically).
"""
import numpy as np

STATUS_CLOSED = 0
STATUS_OPEN = 1
STATUS_STALLED = 2


def _f_grad(A, x, y):
    """F and its gradient; dF/dx = 2 Re(dF/dzbar), dF/dy = 2 Im(dF/dzbar)."""
    z = complex(x, y)
    zb = z.conjugate()
    d = A.shape[0]
    t = [0j] * d
    for n in range(d):
        acc = 0j
        row = A[n]
        for m in range(d - 1, -1, -1):
            acc = acc * z + row[m]
        t[n] = acc
    F = 0j
    for n in range(d - 1, -1, -1):
        F = F * zb + t[n]
    W = 0j
    for n in range(d - 1, 0, -1):
        W = W * zb + n * t[n]
    return F.real, 2.0 * W.real, 2.0 * W.imag


def trace_loop(A, x0, y0, step, newton_tol, max_steps, closure_factor=0.75):
    """Trace one closed component of F = 0 starting near (x0, y0).

    Returns (points (m,2) float array, status).  The seed is first
    Newton-projected onto the curve; afterwards each predictor step of
    length ``step`` along the tangent is corrected back to |F| < newton_tol.
    """
    A = np.ascontiguousarray(A, dtype=complex)
    x, y = float(x0), float(y0)
    for _ in range(100):
        F, gx, gy = _f_grad(A, x, y)
        g2 = gx * gx + gy * gy
        if g2 < 1e-280:
            return np.empty((0, 2)), STATUS_STALLED
        x -= F * gx / g2
        y -= F * gy / g2
        if abs(F) < newton_tol:
            break
    else:
        return np.empty((0, 2)), STATUS_STALLED

    xs, ys = x, y
    pts = np.empty((max_steps, 2))
    tx_prev = ty_prev = 0.0
    status = STATUS_OPEN
    count = 0
    for k in range(max_steps):
        F, gx, gy = _f_grad(A, x, y)
        gn = (gx * gx + gy * gy) ** 0.5
        if gn < 1e-140:
            status = STATUS_STALLED
            break
        tx, ty = -gy / gn, gx / gn
        if k > 0 and tx * tx_prev + ty * ty_prev < 0.0:
            tx, ty = -tx, -ty  # keep marching the same way around
        xp, yp = x + step * tx, y + step * ty
        ok = False
        for _ in range(30):
            F, gx, gy = _f_grad(A, xp, yp)
            g2 = gx * gx + gy * gy
            if g2 < 1e-280:
                break
            xp -= F * gx / g2
            yp -= F * gy / g2
            if abs(F) < newton_tol:
                ok = True
                break
        if not ok:
            status = STATUS_STALLED
            break
        x, y = xp, yp
        pts[count, 0] = x
        pts[count, 1] = y
        count += 1
        tx_prev, ty_prev = tx, ty
        if k > 3 and (x - xs) * (x - xs) + (y - ys) * (y - ys) < (closure_factor * step) ** 2:
            status = STATUS_CLOSED
            break
    return pts[:count].copy(), status
