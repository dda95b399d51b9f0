"""The quadratic Hermitian curve family with one simple interior-domain pole.

The boundary of an algebraic droplet in this family is the real section of

    R(S, z) = S^2 z^2 + b S^2 z + conj(b) S z^2 + c S z
              + d S^2 + conj(d) z^2 + e S + conj(e) z + h = 0,

with the coefficients b, c, d, e fixed by the pole data (p, q, mu, nu) and
the free term h pinned by requiring the quartic branch polynomial to
degenerate (acquire a double root), which makes the curve rational.  The
two-sheeted square-root representation of S, the branch points E1 < E2 and
the double root E3 are all computed here; tracing of the real section runs
on a compiled kernel when available.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial as npoly

from ._kernels import KERNEL_BACKEND, STATUS_CLOSED, STATUS_STALLED, trace_loop
from .errors import (
    AmbiguousSelectionError,
    BranchCutError,
    DegenerateCurveError,
    InfeasibleParametersError,
    InvalidInputError,
    TracingError,
)
from .geometry import Contour

__all__ = [
    "HermitianCurve",
    "CurveN1",
    "TracedComponent",
    "build_curve",
    "quartic_from_curve",
    "solve_double_point",
    "sqrt_p2",
    "sqrt_branch",
    "schwarz_two_sheeted",
    "trace_real_section",
    "find_section_seed",
    "curve_to_json",
    "curve_from_json",
]

_REAL_TOL = 1e-12


@dataclass(frozen=True)
class HermitianCurve:
    """Polynomial R(S, z) = sum A[n, m] S^n z^m with A Hermitian.

    Hermiticity makes R(conj(z), z) real, so the boundary locus
    F(x, y) = R(x - iy, x + iy) = 0 is a real plane curve.
    """

    A: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.A, dtype=complex)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise InvalidInputError("coefficient matrix must be square")
        if not np.all(np.isfinite(A)):
            raise InvalidInputError("coefficient matrix must be finite")
        if np.max(np.abs(A - A.conj().T)) > 1e-12 * max(1.0, np.max(np.abs(A))):
            raise InvalidInputError("coefficient matrix must be Hermitian")
        # store the exactly Hermitian average so the real section is exactly real
        object.__setattr__(self, "A", (A + A.conj().T) / 2)

    @property
    def degree(self) -> int:
        return self.A.shape[0] - 1

    @classmethod
    def disk(cls, radius: float) -> "HermitianCurve":
        return cls(np.array([[-(radius**2), 0.0], [0.0, 1.0]], dtype=complex))

    def eval(self, s, z):
        """R(s, z) for independent arguments (both may be arrays)."""
        s = np.asarray(s, dtype=complex)
        z = np.asarray(z, dtype=complex)
        d = self.A.shape[0]
        acc = np.zeros(np.broadcast(s, z).shape, dtype=complex)
        for n in range(d - 1, -1, -1):
            row = np.zeros_like(acc)
            for m in range(d - 1, -1, -1):
                row = row * z + self.A[n, m]
            acc = acc * s + row
        return acc

    def section_value(self, x, y):
        """F(x, y) = R(x - iy, x + iy); real by hermiticity."""
        z = np.asarray(x, dtype=float) + 1j * np.asarray(y, dtype=float)
        return np.real(self.eval(np.conj(z), z))

    def section_grad(self, x, y):
        """(dF/dx, dF/dy) via W = dR/dS at (conj z, z): grad = 2(Re W, Im W)."""
        z = np.asarray(x, dtype=float) + 1j * np.asarray(y, dtype=float)
        zb = np.conj(z)
        d = self.A.shape[0]
        t = [None] * d
        for n in range(d):
            row = np.zeros_like(z, dtype=complex)
            for m in range(d - 1, -1, -1):
                row = row * z + self.A[n, m]
            t[n] = row
        W = np.zeros_like(z, dtype=complex)
        for n in range(d - 1, 0, -1):
            W = W * zb + n * t[n]
        return 2 * np.real(W), 2 * np.imag(W)

    def real_axis_polynomial(self) -> np.ndarray:
        """Coefficients (ascending) of F(x, 0) = R(x, x); real."""
        d = self.A.shape[0]
        out = np.zeros(2 * d - 1)
        for n in range(d):
            for m in range(d):
                out[n + m] += np.real(self.A[n, m])
        return out


@dataclass(frozen=True)
class CurveN1:
    """The one-pole family: parameters, derived coefficients, branch data.

    ``p`` carries the physical-sheet pole of S with residue -mu; ``q`` the
    second pole with residue -nu.  mu + nu must be real (vanishing total
    residue).  ``h`` and the roots E1, E2 (simple) and E3 (double) of the
    branch quartic are filled in by ``solve_double_point``.
    """

    p: complex
    q: complex
    mu: complex
    nu: complex
    h: Optional[float] = None
    E1: Optional[float] = None
    E2: Optional[float] = None
    E3: Optional[float] = None

    def __post_init__(self):
        for name in ("p", "q", "mu", "nu"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        if abs(self.mu) == 0 or abs(self.nu) == 0:
            raise InvalidInputError("mu and nu must be nonzero")
        if abs((self.mu + self.nu).imag) > _REAL_TOL * max(1.0, abs(self.mu + self.nu)):
            raise InvalidInputError(
                f"mu + nu must be real (total residue zero); got {self.mu + self.nu}"
            )
        if self.p == self.q:
            raise DegenerateCurveError("poles p and q must be distinct")

    # coefficient formulas of the quadratic Hermitian curve
    @property
    def b(self) -> complex:
        return -(self.p + self.q)

    @property
    def c(self) -> complex:
        return abs(self.p + self.q) ** 2 + (self.mu + self.nu).real

    @property
    def d(self) -> complex:
        return self.p * self.q

    @property
    def e(self) -> complex:
        return (-self.p * self.q * (np.conj(self.p) + np.conj(self.q))
                - self.p * self.nu - self.q * self.mu)

    @property
    def T(self) -> float:
        """Droplet area over pi: mu - conj(nu) (real for admissible data)."""
        return float((self.mu - np.conj(self.nu)).real)

    @property
    def is_real_family(self) -> bool:
        return all(abs(v.imag) <= _REAL_TOL * max(1.0, abs(v))
                   for v in (self.p, self.q, self.mu, self.nu))

    @property
    def is_solved(self) -> bool:
        return self.h is not None

    @property
    def branch_points(self):
        self._require_solved()
        return self.E1, self.E2

    def _require_solved(self):
        if not self.is_solved:
            raise InvalidInputError("curve not solved; call solve_double_point first")

    @property
    def sqrtP2_at_p(self) -> complex:
        """sqrt(P2)(p) on the branch carrying the S-pole at p: mu/(p - E3)."""
        self._require_solved()
        return complex(self.mu / (self.p - self.E3))

    @property
    def sqrtP2_at_q(self) -> complex:
        """sqrt(P2)(q) on the branch carrying the S-pole at q: -nu/(q - E3)."""
        self._require_solved()
        return complex(-self.nu / (self.q - self.E3))

    def quartic(self, h: float | None = None) -> np.ndarray:
        return quartic_from_curve(self, self.h if h is None else h)

    def hermitian(self, h: float | None = None) -> HermitianCurve:
        hh = self.h if h is None else h
        if hh is None:
            raise InvalidInputError("free term h not set")
        A = np.zeros((3, 3), dtype=complex)
        A[2, 2] = 1.0
        A[2, 1] = self.b
        A[1, 2] = np.conj(self.b)
        A[1, 1] = self.c
        A[2, 0] = self.d
        A[0, 2] = np.conj(self.d)
        A[1, 0] = self.e
        A[0, 1] = np.conj(self.e)
        A[0, 0] = float(hh)
        return HermitianCurve(A)


def build_curve(p, q, mu, nu) -> CurveN1:
    """Curve from pole data; h left undetermined until the degeneracy solve."""
    return CurveN1(p, q, mu, nu)


def quartic_from_curve(c: CurveN1, h) -> np.ndarray:
    """Monic branch quartic P4, ascending coefficients.

    P4 = [(conj(b) z^2 + c z + e)^2 - 4 (z-p)(z-q)(conj(d) z^2 + conj(e) z + h)]
         / (conj(q) - conj(p))^2.
    The leading coefficient equals 1 identically (conj(b)^2 - 4 conj(d)
    = (conj(p) - conj(q))^2); it is asserted, then normalized away.
    """
    if h is None:
        raise InvalidInputError("free term h required")
    bb, cc, ee = np.conj(c.b), complex(c.c), c.e
    den = (np.conj(c.q) - np.conj(c.p)) ** 2
    quad = np.array([ee, cc, bb])
    t1 = npoly.polymul(quad, quad)
    zpzq = npoly.polymul([-c.p, 1.0], [-c.q, 1.0])
    t2 = npoly.polymul(zpzq, [complex(h), np.conj(c.e), np.conj(c.d)])
    pad = lambda a: np.pad(a, (0, 5 - len(a)))
    P4 = (pad(t1) - 4 * pad(t2)) / den
    lead = P4[4]
    if abs(lead - 1.0) > 1e-9:
        raise InvalidInputError(f"branch quartic not monic: leading term {lead}")
    return P4 / lead


def _quartic_affine_in_h(c: CurveN1):
    """P4 coefficients as (base, slope) with P4(h) = base + h * slope."""
    bb, cc, ee = np.conj(c.b), complex(c.c), c.e
    den = (np.conj(c.q) - np.conj(c.p)) ** 2
    quad = np.array([ee, cc, bb])
    t1 = npoly.polymul(quad, quad)
    zpzq = npoly.polymul([-c.p, 1.0], [-c.q, 1.0])
    t2b = npoly.polymul(zpzq, [0.0, np.conj(c.e), np.conj(c.d)])
    t2h = npoly.polymul(zpzq, [1.0, 0.0, 0.0])
    pad = lambda a: np.pad(a, (0, 5 - len(a)))
    base = (pad(t1) - 4 * pad(t2b)) / den
    slope = (-4 * pad(t2h)) / den
    return base, slope


def _quartic_disc_in_h(base: np.ndarray, slope: np.ndarray) -> np.ndarray:
    """Discriminant of the monic quartic as a polynomial in h (ascending).

    The quartic coefficients are affine in h, so the closed-form quartic
    discriminant expands to a low-degree polynomial in h by plain
    polynomial arithmetic.
    """
    pm, pa = npoly.polymul, npoly.polyadd
    a = np.array([base[3], slope[3]])
    b = np.array([base[2], slope[2]])
    cc = np.array([base[1], slope[1]])
    d = np.array([base[0], slope[0]])
    terms = [
        256 * pm(pm(d, d), d),
        -192 * pm(pm(a, cc), pm(d, d)),
        -128 * pm(pm(b, b), pm(d, d)),
        144 * pm(pm(b, pm(cc, cc)), d),
        -27 * pm(pm(cc, cc), pm(cc, cc)),
        144 * pm(pm(pm(a, a), b), pm(d, d)),
        -6 * pm(pm(a, a), pm(pm(cc, cc), d)),
        -80 * pm(pm(a, pm(b, b)), pm(cc, d)),
        18 * pm(pm(a, b), pm(cc, pm(cc, cc))),
        16 * pm(pm(pm(b, b), pm(b, b)), d),
        -4 * pm(pm(b, pm(b, b)), pm(cc, cc)),
        -27 * pm(pm(pm(a, a), pm(a, a)), pm(d, d)),
        18 * pm(pm(pm(a, a), a), pm(b, pm(cc, d))),
        -4 * pm(pm(pm(a, a), a), pm(cc, pm(cc, cc))),
        -4 * pm(pm(a, a), pm(pm(b, b), pm(b, d))),
        pm(pm(a, a), pm(pm(b, b), pm(cc, cc))),
    ]
    out = np.zeros(1, dtype=complex)
    for t in terms:
        out = pa(out, t)
    return out


def _double_root_candidates(c: CurveN1):
    """All (h, E1, E2, E3) with P4 degenerate, real h, real ordered roots."""
    base, slope = _quartic_affine_in_h(c)
    disc = _quartic_disc_in_h(base, slope)
    if np.max(np.abs(disc.imag)) > 1e-9 * max(1.0, np.max(np.abs(disc))):
        raise InvalidInputError("degeneracy solve supports the real family only")
    disc = disc.real
    # trim roundoff-level leading coefficients before rooting
    scale = np.max(np.abs(disc))
    keep = len(disc)
    while keep > 1 and abs(disc[keep - 1]) < 1e-13 * scale:
        keep -= 1
    hroots = np.roots(disc[:keep][::-1]) if keep > 1 else np.array([])

    out = []
    seen = []
    for hr in hroots:
        if abs(hr.imag) > 1e-7 * max(1.0, abs(hr)):
            continue
        h = float(hr.real)
        if any(abs(h - s) < 1e-8 * max(1.0, abs(h)) for s in seen):
            continue
        seen.append(h)
        P4 = base + h * slope
        dP4 = npoly.polyder(P4)
        crit = np.roots(dP4[::-1])
        E3 = crit[int(np.argmin([abs(npoly.polyval(zc, P4)) for zc in crit]))]
        if abs(E3.imag) > 1e-7 * max(1.0, abs(E3)):
            continue
        E3 = float(E3.real)
        for _ in range(60):  # polish the double root on P4'
            d1 = npoly.polyval(E3, dP4)
            d2 = npoly.polyval(E3, npoly.polyder(dP4))
            if d2 == 0:
                break
            stepv = (d1 / d2).real
            E3 -= stepv
            if abs(stepv) < 1e-15 * max(1.0, abs(E3)):
                break
        quad = npoly.polydiv(npoly.polydiv(P4, [-E3, 1.0])[0], [-E3, 1.0])[0]
        B = (quad[1] / quad[2]).real
        C = (quad[0] / quad[2]).real
        disc2 = B * B - 4 * C
        if disc2 <= 0:
            continue
        E1 = (-B - np.sqrt(disc2)) / 2
        E2 = (-B + np.sqrt(disc2)) / 2
        recon = npoly.polymul(npoly.polymul([-E3, 1], [-E3, 1]),
                              npoly.polymul([-E1, 1], [-E2, 1]))
        err = np.max(np.abs(recon - P4))
        if err > 1e-9 * max(1.0, np.max(np.abs(P4))):
            continue
        out.append((h, E1, E2, E3))
    return out


def solve_double_point(
    c: CurveN1,
    hint=None,
    physical_filter: bool = True,
    trace_step_scale: float = 1e-3,
) -> CurveN1:
    """Pin the free term h so the branch quartic has a double root.

    Enumerates every real root of the quartic discriminant as a polynomial
    in h, keeps candidates whose simple roots are real with
    q < E1 < E2 < p, then selects deterministically:

    * with ``hint=(E1, E2, E3)``: the candidate nearest the hint
      (continuation along a family);
    * otherwise, with ``physical_filter``: candidates are screened by the
      boundary condition S = conj(z) on the first sheet at a section seed,
      and survivors must trace to exactly one closed physical component.

    Raises ``InfeasibleParametersError`` when nothing survives and
    ``AmbiguousSelectionError`` when more than one candidate does.
    """
    if not c.is_real_family:
        raise InvalidInputError("double-point solve supports the real family only")
    p, q = c.p.real, c.q.real
    # require a genuinely open cut: E2 - E1 at rounding scale means both root
    # pairs merged (a rational, cut-free configuration outside this family)
    min_gap = 1e-6 * (p - q)
    cands = [
        cand for cand in _double_root_candidates(c)
        if q < cand[1] < cand[2] < p and cand[2] - cand[1] > min_gap
    ]
    if not cands:
        raise InfeasibleParametersError(
            f"no admissible degeneracy at (p, q, mu, T) = "
            f"({p}, {q}, {c.mu.real}, {c.T})"
        )
    if hint is not None:
        key = lambda s: abs(s[1] - hint[0]) + abs(s[2] - hint[1]) + abs(s[3] - hint[2])
        h, E1, E2, E3 = min(cands, key=key)
        return replace(c, h=h, E1=E1, E2=E2, E3=E3)
    if not physical_filter:
        if len(cands) > 1:
            raise AmbiguousSelectionError(cands)
        h, E1, E2, E3 = cands[0]
        return replace(c, h=h, E1=E1, E2=E2, E3=E3)

    survivors = []
    for h, E1, E2, E3 in cands:
        solved = replace(c, h=h, E1=E1, E2=E2, E3=E3)
        if _passes_physical_test(solved, trace_step_scale):
            survivors.append(solved)
    if not survivors:
        raise InfeasibleParametersError(
            "degenerate candidates exist but none bounds a physical droplet"
        )
    if len(survivors) > 1:
        raise AmbiguousSelectionError([(s.h, s.E1, s.E2, s.E3) for s in survivors])
    return survivors[0]


def _passes_physical_test(solved: CurveN1, step_scale: float) -> bool:
    """Seed-sheet screen followed by a bounded trace with classification."""
    try:
        seed = find_section_seed(solved)
    except TracingError:
        return False
    tol = 1e-6 * max(1.0, abs(solved.p - solved.q))
    if abs(schwarz_two_sheeted(solved, seed, 1) - np.conj(seed)) > tol:
        return False
    try:
        comps = trace_real_section(solved, seed=seed, step_scale=step_scale,
                                   find_all=False)
    except (TracingError, InvalidInputError):
        return False
    return bool(comps) and comps[0].closed and bool(comps[0].physical)


def sqrt_p2(E1, E2, z, sheet: int = 1):
    """sqrt((z-E1)(z-E2)) with the cut on the straight segment [E1, E2].

    Sheet 1 is the branch with sqrt(P2)(z) -> +z as z -> infinity; sheet 2
    its negative.  Raises ``BranchCutError`` for points on the cut.
    """
    z = np.asarray(z, dtype=complex)
    mid = (E1 + E2) / 2
    half = (E2 - E1) / 2
    zeta = (z - mid) / half
    on_cut = (np.abs(zeta.imag) < 1e-14) & (np.abs(zeta.real) <= 1.0)
    if np.any(on_cut):
        raise BranchCutError(
            "evaluation on the branch cut between E1 and E2; perturb off the segment"
        )
    val = half * np.sqrt(zeta - 1.0) * np.sqrt(zeta + 1.0)
    if sheet == 2:
        val = -val
    elif sheet != 1:
        raise InvalidInputError("sheet must be 1 or 2")
    return val if z.ndim else complex(val)


def sqrt_branch(c: CurveN1, z, sheet: int = 1):
    """sqrt(P2) of a solved curve; see ``sqrt_p2``."""
    c._require_solved()
    return sqrt_p2(c.E1, c.E2, z, sheet)


def schwarz_two_sheeted(c: CurveN1, z, sheet: int = 1):
    """Explicit two-sheeted Schwarz function of the solved curve.

    Sheet 1 (physical: S = conj(z) on the droplet boundary, S -> conj(q) at
    infinity) takes the sqrt(P2) branch that behaves like +z at infinity.
    """
    c._require_solved()
    z = np.asarray(z, dtype=complex)
    bad = (np.abs(z - c.p) < 1e-13) | (np.abs(z - c.q) < 1e-13)
    if np.any(bad):
        raise InvalidInputError("evaluation at a pole of the Schwarz function")
    sp4 = (z - c.E3) * sqrt_branch(c, z, sheet)
    pb, qb = np.conj(c.p), np.conj(c.q)
    val = (pb + qb) / 2 + (
        c.p * c.nu + c.q * c.mu - (c.mu + c.nu) * z + (qb - pb) * sp4
    ) / (2 * (z - c.p) * (z - c.q))
    return val if z.ndim else complex(val)


@dataclass(frozen=True)
class TracedComponent:
    """One closed component of the real section."""

    contour: Contour
    closed: bool
    physical: Optional[bool]  # None when no sheet test applies (general curve)
    area: float               # Richardson-refined unsigned area
    sheet_residual: float     # sup |S_1(z) - conj(z)| over samples, or nan


def find_section_seed(c: CurveN1, direction: float = 1.0) -> complex:
    """A point of the real section on the vertical through the cut midpoint.

    Scans upward (``direction=+1``) from just above the real axis and
    bisects the first sign change of the section polynomial.
    """
    c._require_solved()
    H = c.hermitian()
    x0 = (c.E1 + c.E2) / 2
    span = 4.0 * max(1.0, np.sqrt(abs(c.T)), abs(c.p - c.q) / 4)
    ys = direction * np.linspace(1e-9, span, 4096)
    F = H.section_value(np.full_like(ys, x0), ys)
    sign_change = np.nonzero(np.diff(np.sign(F)) != 0)[0]
    if len(sign_change) == 0:
        raise TracingError("no real-section crossing above the cut midpoint")
    lo, hi = ys[sign_change[0]], ys[sign_change[0] + 1]
    flo = H.section_value(np.array(x0), np.array(lo))
    for _ in range(80):
        mid = (lo + hi) / 2
        fm = H.section_value(np.array(x0), np.array(mid))
        if flo * fm <= 0:
            hi = mid
        else:
            lo, flo = mid, fm
    return complex(x0, (lo + hi) / 2)


def _refined_area(H: HermitianCurve, pts: np.ndarray) -> float:
    """Unsigned enclosed area, Richardson-extrapolated with curve midpoints.

    Edge midpoints are Newton-projected onto the curve, doubling the polygon
    resolution; (4 A_fine - A_coarse)/3 removes the leading O(step^2) error.
    """
    x, y = pts[:, 0], pts[:, 1]
    a1 = 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
    mx = 0.5 * (x + np.roll(x, -1))
    my = 0.5 * (y + np.roll(y, -1))
    for _ in range(8):
        F = H.section_value(mx, my)
        gx, gy = H.section_grad(mx, my)
        g2 = gx * gx + gy * gy
        g2 = np.where(g2 == 0, 1.0, g2)
        mx = mx - F * gx / g2
        my = my - F * gy / g2
    X = np.empty(2 * len(x))
    Y = np.empty(2 * len(y))
    X[0::2], X[1::2] = x, mx
    Y[0::2], Y[1::2] = y, my
    a2 = 0.5 * np.sum(X * np.roll(Y, -1) - np.roll(X, -1) * Y)
    return float(abs((4 * a2 - a1) / 3))


def trace_real_section(
    curve,
    seed: complex | None = None,
    step_scale: float = 1e-3,
    newton_tol: float = 1e-12,
    max_steps: int | None = None,
    find_all: bool = True,
    physical_tol: float = 1e-8,
):
    """Trace closed components of the real section by predictor-corrector.

    ``curve`` is a solved ``CurveN1`` (components are then classified as
    physical via the first-sheet boundary relation S = conj(z)) or a bare
    ``HermitianCurve`` (no classification; a seed is then required).  With
    ``find_all`` the real-axis crossings of the section are used to hunt
    for further components beyond the seeded one.

    Returns a list of ``TracedComponent``; the seeded (or physical) one
    comes first.  Stalls at singular points of the section and non-closing
    branches raise or are skipped during component hunting.
    """
    if isinstance(curve, CurveN1):
        curve._require_solved()
        H = curve.hermitian()
        solved = curve
        if seed is None:
            seed = find_section_seed(curve)
        scale = max(1.0, 2.0 * np.sqrt(abs(solved.T)))
    else:
        H = curve
        solved = None
        if seed is None:
            raise InvalidInputError("a seed point is required for a bare curve")
        scale = max(1.0, 2.0 * abs(seed))
    step = step_scale * scale
    if max_steps is None:
        max_steps = int(50 * scale / step)

    comps = []
    claimed = []

    def run(z0, strict):
        pts, status = trace_loop(H.A, z0.real, z0.imag, step, newton_tol, max_steps)
        if status == STATUS_STALLED:
            if strict:
                raise TracingError(
                    "tracing stalled: gradient vanished (singular section point)"
                )
            return None
        if status != STATUS_CLOSED:
            if strict:
                raise TracingError(f"component did not close within {max_steps} steps")
            return None
        if len(pts) < 8:
            return None
        # drop a too-short closing step so sample spacing stays near uniform
        while len(pts) > 8 and np.hypot(*(pts[-1] - pts[0])) < 0.5 * step:
            pts = pts[:-1]
        z = pts[:, 0] + 1j * pts[:, 1]
        signed = 0.5 * np.sum(np.real(z) * np.roll(np.imag(z), -1)
                              - np.roll(np.real(z), -1) * np.imag(z))
        if signed < 0:
            z = z[::-1].copy()
            pts = pts[::-1].copy()
        try:
            contour = Contour(z, require_positive=False)
        except InvalidInputError as exc:
            if strict:
                raise TracingError(f"traced component is not a simple curve: {exc}")
            return None
        area_val = _refined_area(H, pts)
        physical = None
        resid = float("nan")
        if solved is not None:
            sub = z[:: max(1, len(z) // 256)]
            resid = float(np.max(np.abs(
                schwarz_two_sheeted(solved, sub, 1) - np.conj(sub))))
            physical = resid < physical_tol * scale
        return TracedComponent(contour, True, physical, area_val, resid)

    first = run(seed, strict=True)
    comps.append(first)
    claimed.append(first.contour.samples)

    if find_all:
        axis_poly = H.real_axis_polynomial()
        kept = len(axis_poly)
        biggest = np.max(np.abs(axis_poly))
        while kept > 1 and abs(axis_poly[kept - 1]) < 1e-12 * biggest:
            kept -= 1
        roots = np.roots(axis_poly[:kept][::-1]) if kept > 1 else []
        for rt in roots:
            if abs(rt.imag) > 1e-8 * max(1.0, abs(rt)):
                continue
            z0 = complex(rt.real, 0.0)
            if any(np.min(np.abs(z0 - s)) < 3 * step for s in claimed):
                continue
            comp = run(z0, strict=False)
            if comp is not None:
                comps.append(comp)
                claimed.append(comp.contour.samples)
    return comps


def curve_to_json(c: CurveN1) -> str:
    c._require_solved()
    payload = {
        "p": [c.p.real, c.p.imag],
        "q": [c.q.real, c.q.imag],
        "mu": [c.mu.real, c.mu.imag],
        "nu": [c.nu.real, c.nu.imag],
        "h": c.h,
        "E": [[c.E1, 0.0], [c.E2, 0.0], [c.E3, 0.0]],
    }
    return json.dumps(payload, sort_keys=True)


def curve_from_json(text: str) -> CurveN1:
    data = json.loads(text)
    E = data["E"]
    return CurveN1(
        complex(*data["p"]), complex(*data["q"]),
        complex(*data["mu"]), complex(*data["nu"]),
        h=float(data["h"]), E1=E[0][0], E2=E[1][0], E3=E[2][0],
    )
