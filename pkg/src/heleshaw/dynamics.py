"""Zero-surface-tension growth driven by oil pumps.

The boundary-value problem (harmonic pressure, normal velocity -1/4 times
its normal derivative) is solved spectrally on the preimage circle.  Writing
the map velocity as  d_T f = w f'(w) V(w)  with V analytic in |w| > 1 and
Im V(inf) = 0, the boundary data are

    Re V = 1 / (2 |f'|^2)                 sink at infinity,
    Re V = -Re[w Phi'(w)] / (2 |f'|^2)    sink at a finite point a,

where Phi(w) = log[(w - w_a)/(w conj(w_a) - 1)] is the complex Green
potential of the circle exterior and w_a the preimage of a.  Both
normalizations make the droplet area grow at rate pi, so every pump's time
coordinate is measured in area/pi units.  V is reconstructed from its
boundary real part by discrete Fourier completion.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from .conformal import LaurentMap, boundary_contour, harmonic_moments
from .errors import CuspError, InvalidInputError, TruncationError
from .geometry import Contour, hausdorff_distance

__all__ = [
    "PumpSpec",
    "EvolutionState",
    "CoefficientRates",
    "pg_velocity",
    "green_function",
    "pump_velocity_field",
    "step",
    "commutativity_test",
    "CommutativityReport",
]

CUSP_THRESHOLD = 1e-6   # min |f'| on the circle below this ends the run
MIN_PUMP_SPACINGS = 3.0


@dataclass(frozen=True)
class PumpSpec:
    """An oil sink: a finite point in the viscous domain, or infinity.

    ``location=None`` is the sink at infinity.  Time coordinates (amount
    sucked, in area/pi units) are tracked per-pump on the evolution state.
    """

    label: str
    location: complex | None = None

    def __post_init__(self):
        if self.location is not None:
            loc = complex(self.location)
            if not np.isfinite(loc):
                raise InvalidInputError("use location=None for the sink at infinity")
            object.__setattr__(self, "location", loc)

    @classmethod
    def at_infinity(cls, label: str = "inf") -> "PumpSpec":
        return cls(label=label, location=None)

    @property
    def is_infinite(self) -> bool:
        return self.location is None

    def validate_against(self, m: LaurentMap, n: int = 512) -> None:
        """Finite pump locations must sit outside the droplet, clear of it."""
        if self.is_infinite:
            return
        c = boundary_contour(m, n)
        dist = float(np.abs(c.samples - self.location).min())
        spacing = 2 * np.pi * m.r / n
        if dist < MIN_PUMP_SPACINGS * spacing:
            raise InvalidInputError(
                f"pump {self.label!r} at {self.location} is within "
                f"{dist:.3e} of the interface (limit {MIN_PUMP_SPACINGS * spacing:.3e})"
            )
        wa = m.invert(self.location)
        if abs(wa) <= 1.0 + MIN_PUMP_SPACINGS * 2 * np.pi / n:
            raise InvalidInputError(
                f"pump {self.label!r} does not lie in the oil domain (|w|={abs(wa):.4f})"
            )


class CoefficientRates(NamedTuple):
    """Tangent to a LaurentMap: rates of (r, a0, u_1..u_K) plus diagnostics."""

    rdot: float
    a0dot: complex
    udot: np.ndarray
    tail: float          # largest dropped |mode rate| beyond K
    min_deriv: float     # min |f'| seen on the circle (univalence margin)

    def as_vector(self) -> np.ndarray:
        return np.concatenate([[self.rdot + 0j, self.a0dot], self.udot])


@dataclass(frozen=True)
class EvolutionState:
    """Immutable snapshot of a growth run: the map plus per-pump times."""

    map: LaurentMap
    times: tuple = ()
    step_log: tuple = field(default=(), repr=False)

    def time_of(self, label: str) -> float:
        return dict(self.times).get(label, 0.0)

    @property
    def total_time(self) -> float:
        return float(sum(t for _, t in self.times))

    def _bump(self, label: str, dT: float, log_entry) -> "EvolutionState":
        times = dict(self.times)
        times[label] = times.get(label, 0.0) + dT
        return replace(
            self, times=tuple(sorted(times.items())),
            step_log=self.step_log + (log_entry,),
        )


def _velocity_data(m: LaurentMap, n: int, pump: PumpSpec):
    """Boundary data Re V on the n-point circle, plus diagnostics."""
    w = np.exp(2j * np.pi * np.arange(n) / n)
    fp = m.deriv(w)
    min_deriv = float(np.min(np.abs(fp)))
    if min_deriv < CUSP_THRESHOLD:
        raise CuspError(
            f"min |f'| = {min_deriv:.3e} on the circle: interface cusp",
            min_deriv=min_deriv,
        )
    if pump.is_infinite:
        data = 1.0 / (2 * np.abs(fp) ** 2)
    else:
        wa = m.invert(pump.location)
        Phi_p = 1.0 / (w - wa) - np.conj(wa) / (w * np.conj(wa) - 1.0)
        data = -np.real(w * Phi_p) / (2 * np.abs(fp) ** 2)
    return w, fp, data, min_deriv


def _complete_exterior(data: np.ndarray) -> np.ndarray:
    """Samples of V, analytic in |w|>1 with Im V(inf)=0 and Re V = data."""
    n = len(data)
    X = np.fft.fft(data) / n
    Y = np.zeros(n, dtype=complex)
    Y[0] = X[0].real
    kmax = n // 2 - 1
    Y[n - kmax:] = 2 * X[n - kmax:]
    return np.fft.ifft(Y) * n


def _rates(m: LaurentMap, n: int, pump: PumpSpec) -> CoefficientRates:
    w, fp, data, min_deriv = _velocity_data(m, n, pump)
    V = _complete_exterior(data)
    c = np.fft.fft(w * fp * V) / n
    K = m.K
    rdot = float(c[1].real)
    udot = c[(-np.arange(1, K + 1)) % n]
    hi = np.abs(c[K + 1: n - n // 4]) if K + 1 < n - n // 4 else np.array([0.0])
    return CoefficientRates(rdot, complex(c[0]), udot, float(hi.max()), min_deriv)


def pg_velocity(m: LaurentMap, n: int = 512, pump: PumpSpec | None = None) -> CoefficientRates:
    """Coefficient rates d_T(r, a0, u_k) for the sink at infinity.

    Satisfies the defining boundary relation
    2 Im(d_phi f conj(d_T f)) = 1 to spectral accuracy, and contracts with
    the coefficient area formula to give d(area)/dT = pi exactly.
    """
    if pump is None:
        pump = PumpSpec.at_infinity()
    return _rates(m, n, pump)


def green_function(m: LaurentMap, a, z) -> float:
    """Dirichlet Green function of the exterior domain.

    G(a, z) = log | (w_z - w_a) / (w_z conj(w_a) - 1) |, evaluated through
    the map preimages.  Harmonic in both arguments off the diagonal,
    vanishes on the boundary, grows like log|z - a| near the diagonal.
    """
    wa = m.invert(a)
    wz = m.invert(z)
    return float(np.log(np.abs((wz - wa) / (wz * np.conj(wa) - 1.0))))


def pump_velocity_field(m: LaurentMap, pump: PumpSpec, n: int = 512) -> np.ndarray:
    """Normal interface velocity samples V_n(phi_j) for the given pump.

    Positive values grow the droplet; the flux oint V_n ds is pi for every
    pump, matching the area/pi time normalization.
    """
    w, fp, data, _ = _velocity_data(m, n, pump)
    return data * np.abs(fp)


def _rk4_map(m: LaurentMap, dT: float, n: int, pump: PumpSpec):
    """One RK4 step on Laurent coefficients; returns (map, diagnostics).

    For a finite pump this is algebraically identical to advecting the n
    boundary samples with the full (normal + tangential) velocity and
    re-fitting: the Fourier projection commutes with the RK4 update.
    """
    def vec(mm):
        return np.concatenate([[mm.r + 0j, mm.a0], mm.u])

    def unvec(v):
        return LaurentMap(v[0].real, v[1], v[2:], check=False)

    y0 = vec(m)
    k1 = _rates(m, n, pump)
    k2 = _rates(unvec(y0 + dT / 2 * k1.as_vector()), n, pump)
    k3 = _rates(unvec(y0 + dT / 2 * k2.as_vector()), n, pump)
    k4 = _rates(unvec(y0 + dT * k3.as_vector()), n, pump)
    y1 = y0 + dT / 6 * (k1.as_vector() + 2 * k2.as_vector()
                        + 2 * k3.as_vector() + k4.as_vector())
    tail = max(k.tail for k in (k1, k2, k3, k4))
    margin = min(k.min_deriv for k in (k1, k2, k3, k4))
    return unvec(y1), tail, margin


def step(
    state: EvolutionState,
    pump: PumpSpec,
    dT: float,
    n: int = 512,
    tail_tol: float = 1e-6,
    max_halvings: int = 8,
) -> EvolutionState:
    """Advance the state by dT of the given pump's time (area/pi units).

    Classical RK4 on the map coefficients.  A cusp (min |f'| below the
    threshold) is terminal and raises ``CuspError``; a tail-norm blow-up is
    retried with internally halved steps before raising ``TruncationError``.
    dT = 0 returns the state unchanged.
    """
    if dT < 0:
        raise InvalidInputError("pump times only increase: dT >= 0")
    if dT == 0:
        return state
    pump.validate_against(state.map, n=min(n, 512))

    def advance(m, h, depth):
        m1, tail, margin = _rk4_map(m, h, n, pump)
        if tail > tail_tol * m.r:
            if depth >= max_halvings:
                raise TruncationError(
                    f"Laurent tail rate {tail:.2e} exceeds tolerance at minimum step"
                )
            m1 = advance(m, h / 2, depth + 1)
            return advance(m1, h / 2, depth + 1)
        return m1

    new_map = advance(state.map, dT, 0)
    # univalence margin after the step, for the log
    w = np.exp(2j * np.pi * np.arange(n) / n)
    margin = float(np.min(np.abs(new_map.deriv(w))))
    if margin < CUSP_THRESHOLD:
        raise CuspError(f"cusp after step: min |f'| = {margin:.3e}", min_deriv=margin)
    tail_norm = float(abs(new_map.u[-1])) if new_map.K else 0.0
    entry = (pump.label, dT, margin, tail_norm)
    return replace(state, map=new_map)._bump(pump.label, dT, entry)


class CommutativityReport(NamedTuple):
    hausdorff: float
    moment_diff: float
    state_ab: EvolutionState
    state_ba: EvolutionState


def commutativity_test(
    state: EvolutionState,
    pump_a: PumpSpec,
    pump_b: PumpSpec,
    dT_a: float,
    dT_b: float,
    step_size: float = 1e-3,
    n: int = 512,
    n_eval: int = 1024,
    moment_count: int = 5,
) -> CommutativityReport:
    """Run A-then-B and B-then-A from the same state and compare shapes.

    Growth results depend only on the amounts sucked per pump, so the
    Hausdorff distance between the two final contours measures integrator
    and fit error, not physics.
    """
    def run(order):
        s = state
        for pump, total in order:
            remaining = total
            while remaining > 1e-15:
                h = min(step_size, remaining)
                s = step(s, pump, h, n=n)
                remaining -= h
        return s

    s_ab = run([(pump_a, dT_a), (pump_b, dT_b)])
    s_ba = run([(pump_b, dT_b), (pump_a, dT_a)])
    c_ab = boundary_contour(s_ab.map, n_eval)
    c_ba = boundary_contour(s_ba.map, n_eval)
    dist = hausdorff_distance(c_ab, c_ba)
    try:
        m_ab = harmonic_moments(s_ab.map, moment_count)
        m_ba = harmonic_moments(s_ba.map, moment_count)
        mdiff = m_ab.diff_norm(m_ba)
    except Exception:
        mdiff = float("nan")
    return CommutativityReport(dist, mdiff, s_ab, s_ba)
