"""Branch-point dynamics: explicit differentials and the hodograph solver.

The branch points E1 < E2 of the two-sheeted Schwarz function are Riemann
invariants of the growth flows.  For the real one-pole family they satisfy
two algebraic (hodograph) relations, solved here by damped Newton with the
disk limit as the seeding anchor.  The meromorphic differentials of the
degenerate (rational) curve are all explicit in sqrt(P2), which gives
closed-form characteristic speeds at the branch points.

Sign conventions.  With A = sqrt((p-E2)/(p-E1)), B = sqrt((E2-q)/(E1-q)),
s = (E2-E1)/2 and nu = mu - T, the residuals implemented here are

    r1 = mu*A + nu*B + T + s*(p-q)      (= 2 f2(E1))
    r2 = mu/A + nu/B + T - s*(p-q)      (= 2 f2(E2))

i.e. exactly the conditions that the odd part f2 of the Schwarz function
vanish at the branch points.  The +/- arrangement was pinned against the
independent double-root solve of the branch quartic: the solutions of this
system reproduce the degeneracy locus to machine precision, and the
finite-difference flow checks (string equation, generating-differential
flow) all close on it.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple, Optional

import numpy as np
from numpy.polynomial import polynomial as npoly

from .curve import (
    CurveN1,
    _quartic_affine_in_h,
    build_curve,
    schwarz_two_sheeted,
    sqrt_branch,
    sqrt_p2,
    trace_real_section,
)
from .errors import (
    BifurcationError,
    InfeasibleParametersError,
    InvalidInputError,
    NonConvergenceError,
)

__all__ = [
    "HodographParams",
    "BranchPoints",
    "DipoleEnd",
    "GenusZeroDifferential",
    "hodograph_residual",
    "hodograph_jacobian",
    "solve_hodograph",
    "solved_curve",
    "differential_plus",
    "differential_minus",
    "dipole",
    "pump_differential",
    "eval_differential",
    "differential_residue",
    "f1_f2_split",
    "f2_derivative",
    "string_rhs",
    "whitham_velocity",
    "sdz_decomposition_check",
    "bifurcation_scan",
    "GridPointResult",
]

NEWTON_TOL = 1e-12
MAX_NEWTON = 50


@dataclass(frozen=True)
class HodographParams:
    """Real-family coordinates: pole locations p > q and amounts (mu, T).

    T is the droplet area over pi; mu the amount sucked from the pump at p.
    nu = mu - T is the residue datum at q.  The pump-at-p flow advances mu
    and T together (total area grows too); the sink-at-infinity flow
    advances T alone.
    """

    p: float
    q: float
    mu: float
    T: float

    def __post_init__(self):
        for name in ("p", "q", "mu", "T"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not all(np.isfinite(v) for v in (self.p, self.q, self.mu, self.T)):
            raise InvalidInputError("parameters must be finite")
        if self.mu == 0:
            raise InvalidInputError("mu must be nonzero")
        if self.q >= self.p:
            raise InvalidInputError("require q < p")

    @property
    def nu(self) -> float:
        return self.mu - self.T

    def curve(self) -> CurveN1:
        return build_curve(self.p, self.q, self.mu, self.nu)


@dataclass(frozen=True)
class BranchPoints:
    """Riemann invariants E1 < E2 with the branch expansion coefficients.

    alpha_k is the coefficient of sqrt(z - E_k) in the expansion of the
    Schwarz function at E_k; it vanishes exactly at bifurcations.
    """

    E1: float
    E2: float
    alpha1: complex = 0j
    alpha2: complex = 0j

    def __post_init__(self):
        if not (np.isfinite(self.E1) and np.isfinite(self.E2) and self.E1 < self.E2):
            raise InvalidInputError("need finite E1 < E2")

    @property
    def as_array(self) -> np.ndarray:
        return np.array([self.E1, self.E2])


def _check_ordering(params: HodographParams, E1: float, E2: float):
    if not (params.q < E1 < E2 < params.p):
        raise InvalidInputError(
            f"ordering q < E1 < E2 < p violated: "
            f"({params.q}, {E1}, {E2}, {params.p})"
        )


def hodograph_residual(params: HodographParams, bp: BranchPoints) -> np.ndarray:
    """The two residuals whose joint zero is the physical branch-point pair."""
    p, q, mu, T = params.p, params.q, params.mu, params.T
    E1, E2 = bp.E1, bp.E2
    _check_ordering(params, E1, E2)
    nu = params.nu
    A = np.sqrt((p - E2) / (p - E1))
    B = np.sqrt((E2 - q) / (E1 - q))
    s = (E2 - E1) / 2
    Pq = p - q
    return np.array([
        mu * A + nu * B + T + s * Pq,
        mu / A + nu / B + T - s * Pq,
    ])


def hodograph_jacobian(params: HodographParams, bp: BranchPoints) -> np.ndarray:
    """Analytic Jacobian d(r1, r2)/d(E1, E2)."""
    p, q, mu = params.p, params.q, params.mu
    nu = params.nu
    E1, E2 = bp.E1, bp.E2
    A = np.sqrt((p - E2) / (p - E1))
    B = np.sqrt((E2 - q) / (E1 - q))
    Pq = p - q
    dA1 = A / (2 * (p - E1))
    dA2 = -A / (2 * (p - E2))
    dB1 = -B / (2 * (E1 - q))
    dB2 = B / (2 * (E2 - q))
    return np.array([
        [mu * dA1 + nu * dB1 - Pq / 2, mu * dA2 + nu * dB2 + Pq / 2],
        [-mu * dA1 / A**2 - nu * dB1 / B**2 + Pq / 2,
         -mu * dA2 / A**2 - nu * dB2 / B**2 - Pq / 2],
    ])


def _disk_limit_seed(params: HodographParams) -> np.ndarray:
    """Branch-point seed from the near-disk asymptotics.

    At small mu the droplet is a near-disk of area pi T centered at q; the
    critical points of the Schwarz derivative sit at
    (lambda - q)^2 = (T/mu)(lambda - p)^2 and the branch points are their
    boundary reflections.
    """
    p, q, mu, T = params.p, params.q, params.mu, params.T
    t = np.sqrt(T / abs(mu))
    lams = [(q - t * p) / (1 - t), (q + t * p) / (1 + t)]
    Es = sorted(q + T / (lam - q) - mu / (lam - p) for lam in lams)
    return np.asarray(Es)


def _newton(params: HodographParams, E: np.ndarray):
    trace = []
    p, q = params.p, params.q
    for it in range(MAX_NEWTON):
        bp = BranchPoints(E[0], E[1])
        r = hodograph_residual(params, bp)
        rn = np.max(np.abs(r))
        trace.append((E.copy(), rn))
        if rn < NEWTON_TOL:
            return E, it
        J = hodograph_jacobian(params, bp)
        sv = np.linalg.svd(J, compute_uv=False)
        if sv[-1] < 1e-12 * max(1.0, sv[0]):
            raise BifurcationError(
                f"hodograph Jacobian singular at E = {E} "
                f"(sigma_min = {sv[-1]:.2e}): at or past a cusp"
            )
        dE = np.linalg.solve(J, -r)
        lam = 1.0
        for _ in range(40):  # damping: stay in the ordering domain, decrease |r|
            En = E + lam * dE
            if q < En[0] < En[1] < p:
                rn_new = np.max(np.abs(
                    hodograph_residual(params, BranchPoints(En[0], En[1]))))
                if rn_new < rn or lam < 1e-4:
                    break
            lam /= 2
        E = E + lam * dE
    raise NonConvergenceError(
        f"hodograph Newton did not converge in {MAX_NEWTON} iterations", trace=trace
    )


def solve_hodograph(params: HodographParams, seed: BranchPoints | None = None) -> BranchPoints:
    """Solve the hodograph relations for the branch points.

    Seeding: the supplied seed, else the disk-limit asymptotics, else
    continuation in mu from deep inside the solvable region.  Converged to
    max |r| < 1e-12; the returned invariants carry the branch expansion
    coefficients alpha_k.
    """
    tried = []
    if seed is not None:
        tried.append(np.array([seed.E1, seed.E2]))
    tried.append(_disk_limit_seed(params))
    E = None
    last_exc = None
    for E0 in tried:
        try:
            E, _ = _newton(params, E0)
            break
        except (NonConvergenceError, InvalidInputError) as exc:
            last_exc = exc
    if E is None:
        # continuation in mu from the near-disk regime
        try:
            mus = np.geomspace(min(0.02 * params.T, abs(params.mu)),
                               abs(params.mu), 12) * np.sign(params.mu)
            Ecur = _disk_limit_seed(replace(params, mu=mus[0]))
            for mu_i in mus:
                Ecur, _ = _newton(replace(params, mu=mu_i), Ecur)
            E = Ecur
        except (NonConvergenceError, InvalidInputError) as exc:
            raise NonConvergenceError(
                f"hodograph solve failed at {params}: {exc}",
                trace=getattr(last_exc, "trace", []),
            ) from exc
    bp = BranchPoints(E[0], E[1])
    curve = _solved_from(params, bp)
    a1, a2 = _alphas(curve)
    return BranchPoints(E[0], E[1], a1, a2)


def _solved_from(params: HodographParams, bp: BranchPoints) -> CurveN1:
    """Attach the double root and free term implied by solved branch points.

    E3 follows from the quartic's root sum (h does not enter the z^3
    coefficient); h from requiring P4(E1) = 0, whose h-slope
    -4 (E1-p)(E1-q)/(q-p)^2 never vanishes under the ordering.
    """
    c = params.curve()
    base, slope = _quartic_affine_in_h(c)
    E3 = float((-base[3].real - bp.E1 - bp.E2) / 2)
    h = float((-npoly.polyval(bp.E1, base) / npoly.polyval(bp.E1, slope)).real)
    return replace(c, h=h, E1=float(bp.E1), E2=float(bp.E2), E3=E3)


def solved_curve(params: HodographParams, bp: BranchPoints | None = None) -> CurveN1:
    """Solved curve for these parameters (solving the hodograph if needed)."""
    if bp is None:
        bp = solve_hodograph(params)
    return _solved_from(params, bp)


def f2_derivative(c: CurveN1, z):
    """d f2/dz where S = f1 + f2/sqrt(P2); the branch-point slope data."""
    c._require_solved()
    z = np.asarray(z, dtype=complex)
    vp, vq = c.sqrtP2_at_p, c.sqrtP2_at_q
    val = (np.conj(c.q) - np.conj(c.p)
           + c.mu * vp / (z - c.p) ** 2 + c.nu * vq / (z - c.q) ** 2) / 2
    return val if z.ndim else complex(val)


def f1_f2_split(c: CurveN1, z):
    """Split S = f1 + f2 / sqrt(P2) into its even and odd parts.

    The sqrt values at the poles enter f2 with the branch opposite to the
    pole-carrying one; reconstruction against the two-sheeted formula and
    the zeros f2(E1) = f2(E2) = 0 pin this convention.
    """
    c._require_solved()
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z - c.p) < 1e-13) or np.any(np.abs(z - c.q) < 1e-13):
        raise InvalidInputError("evaluation at a pole")
    pb, qb = np.conj(c.p), np.conj(c.q)
    f1 = (pb + qb + c.mu / (c.p - z) + c.nu / (c.q - z)) / 2
    vp, vq = c.sqrtP2_at_p, c.sqrtP2_at_q
    f2 = ((qb - pb) * (2 * z - c.E1 - c.E2) / 2 + np.conj(c.mu) - np.conj(c.nu)
          - c.mu * vp / (z - c.p) - c.nu * vq / (z - c.q)) / 2
    if z.ndim:
        return f1, f2
    return complex(f1), complex(f2)


# ---------------------------------------------------------------------------
# genus-zero differentials (densities with respect to dz)

@dataclass(frozen=True)
class DipoleEnd:
    """Endpoint of a dipole differential: a point with its branch data.

    ``point=None`` is infinity; ``sheet`` then selects which infinity
    (1: the sqrt(P2) -> +z branch).  For finite points ``sp2_value`` is
    sqrt(P2) at the point on the endpoint's own sheet.
    """

    point: Optional[complex]
    sheet: int
    sp2_value: Optional[complex] = None

    def __post_init__(self):
        if self.sheet not in (1, 2):
            raise InvalidInputError("sheet must be 1 or 2")
        if self.point is not None:
            object.__setattr__(self, "point", complex(self.point))
            if self.sp2_value is None:
                raise InvalidInputError("finite endpoints need their sqrt(P2) value")
            object.__setattr__(self, "sp2_value", complex(self.sp2_value))


@dataclass(frozen=True)
class GenusZeroDifferential:
    """Meromorphic differential on the rational two-sheeted curve.

    kind "plus"/"minus": second-order pole at infinity on sheet 1 / 2 with
    principal part (1 + O(z^-2)) dz and no residue.  kind "dipole": simple
    poles at the two endpoints with residues +1 (first) and -1 (second).
    """

    kind: str
    E1: float
    E2: float
    ends: Optional[tuple] = None

    def __post_init__(self):
        if self.kind not in ("plus", "minus", "dipole"):
            raise InvalidInputError("kind must be plus, minus or dipole")
        if self.kind == "dipole" and (self.ends is None or len(self.ends) != 2):
            raise InvalidInputError("dipole needs exactly two endpoints")

    def density(self, z, sheet: int = 1):
        """Density with respect to dz on the requested sqrt(P2) sheet."""
        z = np.asarray(z, dtype=complex)
        sp = sqrt_p2(self.E1, self.E2, z, sheet)
        mid = (self.E1 + self.E2) / 2
        if self.kind == "plus":
            val = (sp + (z - mid)) / (2 * sp)
        elif self.kind == "minus":
            val = (sp - (z - mid)) / (2 * sp)
        else:
            terms = []
            for end in self.ends:
                if end.point is None:
                    terms.append(np.full_like(sp, -1.0 if end.sheet == 1 else 1.0))
                else:
                    terms.append((sp + end.sp2_value) / (z - end.point))
            val = (terms[0] - terms[1]) / (2 * sp)
        return val if z.ndim else complex(val)


def differential_plus(c: CurveN1) -> GenusZeroDifferential:
    c._require_solved()
    return GenusZeroDifferential("plus", c.E1, c.E2)


def differential_minus(c: CurveN1) -> GenusZeroDifferential:
    c._require_solved()
    return GenusZeroDifferential("minus", c.E1, c.E2)


def dipole(c: CurveN1, end_a: DipoleEnd, end_b: DipoleEnd) -> GenusZeroDifferential:
    c._require_solved()
    return GenusZeroDifferential("dipole", c.E1, c.E2, ends=(end_a, end_b))


def _end_at(c: CurveN1, point: complex, sheet: int) -> DipoleEnd:
    return DipoleEnd(point, sheet, sqrt_branch(c, point, sheet))


def _pole_sheet(c: CurveN1, point: complex, value: complex) -> int:
    """Which sqrt(P2) sheet carries the given endpoint value at the point."""
    s1 = sqrt_branch(c, point, 1)
    return 1 if abs(s1 - value) <= abs(s1 + value) else 2


def pump_differential(c: CurveN1, pump: str) -> GenusZeroDifferential:
    """The growth differential of a pump, normalized to residue +1 there.

    pump "inf": simple pole (+1) at infinity on the physical sheet, mirror
    pole (-1) over q on the branch that carries the S-pole at q.
    pump "p": simple pole (+1) at p on its S-pole branch, mirror pole (-1)
    at infinity on the second sheet.  The endpoint branch data come from
    the solved curve, so the construction stays valid in every regime of
    the family.
    """
    c._require_solved()
    vq = c.sqrtP2_at_q
    vp = c.sqrtP2_at_p
    if pump == "inf":
        ends = (DipoleEnd(None, 1),
                DipoleEnd(c.q, _pole_sheet(c, c.q, vq), vq))
    elif pump == "p":
        ends = (DipoleEnd(c.p, _pole_sheet(c, c.p, vp), vp),
                DipoleEnd(None, 2))
    else:
        raise InvalidInputError("pump must be 'p' or 'inf'")
    return GenusZeroDifferential("dipole", c.E1, c.E2, ends=ends)


def eval_differential(d: GenusZeroDifferential, z, sheet: int = 1):
    """Density of the differential at z on the given sheet.

    Raises on branch points and dipole endpoints (singular points).
    """
    zq = np.atleast_1d(np.asarray(z, dtype=complex))
    for Ek in (d.E1, d.E2):
        if np.any(np.abs(zq - Ek) < 1e-12):
            raise InvalidInputError("evaluation at a branch point")
    if d.kind == "dipole":
        for end in d.ends:
            if end.point is not None and np.any(np.abs(zq - end.point) < 1e-12):
                raise InvalidInputError("evaluation at a dipole endpoint")
    return d.density(z, sheet)


def differential_residue(d: GenusZeroDifferential, point: complex, sheet: int,
                         radius: float = 1e-3, n: int = 512) -> complex:
    """Residue at a finite point by small-circle trapezoid quadrature."""
    th = 2 * np.pi * np.arange(n) / n
    zc = point + radius * np.exp(1j * th)
    vals = d.density(zc, sheet)
    return complex(np.mean(vals * radius * np.exp(1j * th)))


def _numerator_at_branch(d: GenusZeroDifferential, Ek: float) -> complex:
    """N with density ~ N / (2 sqrt(P2)) near the branch point."""
    if d.kind == "plus":
        return complex(Ek - (d.E1 + d.E2) / 2)
    if d.kind == "minus":
        return complex(-(Ek - (d.E1 + d.E2) / 2))
    total = []
    for end in d.ends:
        if end.point is None:
            total.append(-1.0 if end.sheet == 1 else 1.0)
        else:
            total.append(end.sp2_value / (Ek - end.point))
    return complex(total[0] - total[1])


def _alphas(c: CurveN1):
    """Branch expansion coefficients alpha_k of S at E1, E2."""
    d1 = f2_derivative(c, c.E1)
    d2 = f2_derivative(c, c.E2)
    a1 = d1 / np.sqrt(complex(c.E1 - c.E2))
    a2 = d2 / np.sqrt(complex(c.E2 - c.E1))
    return complex(a1), complex(a2)


def string_rhs(params: HodographParams, bp: BranchPoints, pump: str) -> np.ndarray:
    """Branch-point rates under one pump: dE_k/dT^(pump) = (dW^(pump)/dS)(E_k).

    Both the pump differential and dS behave like const / sqrt(P2) at a
    branch point, so the rate is the finite numerator ratio
    N_pump(E_k) / f2'(E_k).  Note the pump-at-p flow advances mu and T
    together (T tracks total area), while the infinity flow advances T at
    fixed mu; finite-difference checks must re-solve along those
    directions.
    """
    c = _solved_from(params, bp)
    dW = pump_differential(c, pump)
    out = []
    for Ek in (bp.E1, bp.E2):
        fp = f2_derivative(c, Ek)
        if abs(fp) < 1e-10:
            raise BifurcationError(
                f"branch coefficient ~ 0 at E = {Ek}: near a bifurcation"
            )
        out.append(_numerator_at_branch(dW, Ek) / fp)
    rates = np.array(out)
    if np.max(np.abs(rates.imag)) > 1e-8 * max(1.0, np.max(np.abs(rates))):
        raise InvalidInputError("branch-point rates unexpectedly non-real")
    return rates.real


def whitham_velocity(params: HodographParams, bp: BranchPoints,
                     pump_a: str, pump_b: str) -> np.ndarray:
    """Characteristic speeds V_k^(ab) = (dW^(a)/dW^(b)) (E_k)."""
    c = _solved_from(params, bp)
    da = pump_differential(c, pump_a)
    db = pump_differential(c, pump_b)
    out = []
    for Ek in (bp.E1, bp.E2):
        nb = _numerator_at_branch(db, Ek)
        if abs(nb) < 1e-14:
            raise BifurcationError("denominator differential vanishes at a branch point")
        out.append(_numerator_at_branch(da, Ek) / nb)
    vals = np.array(out)
    return vals.real if np.max(np.abs(vals.imag)) < 1e-9 * max(
        1.0, np.max(np.abs(vals))) else vals


class SdzReport(NamedTuple):
    sup_residual: float
    per_sheet: dict


def sdz_decomposition_check(c: CurveN1, z_samples) -> SdzReport:
    """Residual of the canonical pole decomposition of the boundary differential.

    S dz decomposes over the explicit basis: the two second-order-pole
    differentials weighted by conj(q), conj(p), plus three dipoles carrying
    the residues at p, q and the two infinities.  Exact identity; the
    sup-norm over samples on both sheets measures implementation error
    only.
    """
    c._require_solved()
    z = np.asarray(z_samples, dtype=complex)
    mu, nu = c.mu, c.nu
    mub, nub = np.conj(mu), np.conj(nu)
    pb, qb = np.conj(c.p), np.conj(c.q)
    vp, vq = c.sqrtP2_at_p, c.sqrtP2_at_q
    dWp = differential_plus(c)
    dWm = differential_minus(c)
    d_p_inf1 = dipole(c, DipoleEnd(c.p, _pole_sheet(c, c.p, vp), vp), DipoleEnd(None, 1))
    d_inf2_q = dipole(c, DipoleEnd(None, 2), DipoleEnd(c.q, _pole_sheet(c, c.q, vq), vq))
    d_inf1_q = dipole(c, DipoleEnd(None, 1), DipoleEnd(c.q, _pole_sheet(c, c.q, vq), vq))
    per_sheet = {}
    worst = 0.0
    for sheet in (1, 2):
        lhs = schwarz_two_sheeted(c, z, sheet)
        rhs = (qb * dWp.density(z, sheet) + pb * dWm.density(z, sheet)
               - mu * d_p_inf1.density(z, sheet)
               + mub * d_inf2_q.density(z, sheet)
               - (mub - nu) * d_inf1_q.density(z, sheet))
        res = float(np.max(np.abs(lhs - rhs)))
        per_sheet[sheet] = res
        worst = max(worst, res)
    return SdzReport(worst, per_sheet)


# ---------------------------------------------------------------------------
# parameter-plane scanning

@dataclass(frozen=True)
class GridPointResult:
    mu: float
    T: float
    status: str                  # solved | bifurcation | infeasible | failed
    E1: Optional[float] = None
    E2: Optional[float] = None
    h: Optional[float] = None
    residual: Optional[float] = None
    sigma_min: Optional[float] = None
    jac_det: Optional[float] = None
    area_over_pi: Optional[float] = None


def bifurcation_scan(p: float, q: float, mu_values, T_values,
                     trace_areas: bool = False):
    """Solve the hodograph system over a rectangular (mu, T) grid.

    Returns one ``GridPointResult`` per grid point (row-major in mu, then
    T), carrying the smallest Jacobian singular value and its determinant;
    sign changes of the determinant along grid lines bracket the cusp
    locus.  Seeds continue along each mu-row for speed and stability.
    """
    results = []
    for mu in mu_values:
        seed = None
        for T in T_values:
            try:
                params = HodographParams(p, q, mu, T)
            except InvalidInputError:
                results.append(GridPointResult(float(mu), float(T), "infeasible"))
                continue
            try:
                bp = solve_hodograph(params, seed=seed)
            except BifurcationError:
                results.append(GridPointResult(float(mu), float(T), "bifurcation"))
                seed = None
                continue
            except (NonConvergenceError, InfeasibleParametersError, InvalidInputError):
                results.append(GridPointResult(float(mu), float(T), "failed"))
                seed = None
                continue
            seed = bp
            r = hodograph_residual(params, bp)
            J = hodograph_jacobian(params, bp)
            sv = np.linalg.svd(J, compute_uv=False)
            area = None
            if trace_areas:
                try:
                    comps = trace_real_section(_solved_from(params, bp), find_all=False)
                    area = comps[0].area / np.pi
                except Exception:
                    area = None
            results.append(GridPointResult(
                float(mu), float(T), "solved",
                E1=bp.E1, E2=bp.E2, h=_solved_from(params, bp).h,
                residual=float(np.max(np.abs(r))),
                sigma_min=float(sv[-1]), jac_det=float(np.linalg.det(J)),
                area_over_pi=area,
            ))
    return results
