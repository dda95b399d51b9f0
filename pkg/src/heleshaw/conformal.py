"""Exterior conformal maps from {|w| > 1} onto the viscous-fluid domain.

The droplet boundary is the image of the unit circle under a truncated
Laurent map f(w) = r w + a0 + sum_k u_k w^{-k} with r > 0 real (rotation
gauge).  Fitting, evaluation and exterior harmonic moments are all spectral.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import (
    FitError,
    InvalidInputError,
    InversionError,
    MomentUndefinedError,
    UnivalenceError,
)
from .geometry import Contour, _fourier_derivative, area

__all__ = [
    "LaurentMap",
    "MomentVector",
    "FitResult",
    "boundary_contour",
    "fit_map",
    "harmonic_moments",
    "map_to_json",
    "map_from_json",
    "random_univalent_map",
]

TAIL_CONVERGED = 1e-10  # |u_K| below this (relative to r) counts as converged


@dataclass(frozen=True)
class LaurentMap:
    """Truncated exterior Laurent map f(w) = r w + a0 + sum u_k w^{-k}.

    ``check=True`` verifies univalence numerically: |w f'(w)| bounded away
    from zero and a non-self-intersecting boundary image on 64*K circle
    samples.  Interior integrator stages construct maps with ``check=False``.
    """

    r: float
    a0: complex
    u: np.ndarray
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        u = np.atleast_1d(np.asarray(self.u, dtype=complex))
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "a0", complex(self.a0))
        if not (np.isfinite(self.r) and self.r > 0):
            raise InvalidInputError("conformal radius r must be positive and finite")
        if not (np.isfinite(self.a0) and np.all(np.isfinite(u))):
            raise InvalidInputError("map coefficients must be finite")
        if self.check:
            n = max(64 * max(self.K, 1), 256)
            w = np.exp(2j * np.pi * np.arange(n) / n)
            if np.min(np.abs(w * self.deriv(w))) <= 0:
                raise UnivalenceError("|w f'(w)| vanishes on the unit circle")
            try:
                Contour(self(w))
            except InvalidInputError as exc:
                raise UnivalenceError(f"boundary image invalid: {exc}") from exc

    @property
    def K(self) -> int:
        return len(self.u)

    @property
    def tail_converged(self) -> bool:
        return self.K == 0 or abs(self.u[-1]) < TAIL_CONVERGED * self.r

    def __call__(self, w):
        w = np.asarray(w, dtype=complex)
        if np.any(np.abs(w) < 1 - 1e-12):
            raise InvalidInputError("map defined on |w| >= 1")
        ks = np.arange(1, self.K + 1)
        return self.r * w + self.a0 + (w[..., None] ** (-ks)) @ self.u

    def deriv(self, w):
        """f'(w)."""
        w = np.asarray(w, dtype=complex)
        ks = np.arange(1, self.K + 1)
        return self.r - (w[..., None] ** (-ks - 1)) @ (ks * self.u)

    def coeff_area(self) -> float:
        """Droplet area in coefficients: pi (r^2 - sum k |u_k|^2)."""
        ks = np.arange(1, self.K + 1)
        return float(np.pi * (self.r**2 - np.sum(ks * np.abs(self.u) ** 2)))

    def with_modes(self, K: int) -> "LaurentMap":
        """Same map padded (or truncated) to K tail coefficients."""
        u = np.zeros(K, dtype=complex)
        m = min(K, self.K)
        u[:m] = self.u[:m]
        return LaurentMap(self.r, self.a0, u, check=False)

    def invert(self, z, w0=None, tol=1e-14, max_iter=80):
        """w(z) for z in the map's exterior image, by Newton iteration.

        Starts from the far-field guess (z - a0)/r pushed outside the unit
        circle; near-boundary points converge in a handful of iterations.
        """
        z = np.asarray(z, dtype=complex)
        scalar = z.ndim == 0
        z = np.atleast_1d(z)
        if w0 is None:
            w = (z - self.a0) / self.r
            small = np.abs(w) < 1.05
            w[small] = 1.05 * np.where(w[small] == 0, 1.0, w[small] / np.abs(w[small]))
        else:
            w = np.atleast_1d(np.asarray(w0, dtype=complex)).copy()
        for _ in range(max_iter):
            dw = (self._eval_any(w) - z) / self.deriv(w)
            w = w - dw
            if np.all(np.abs(dw) <= tol * np.maximum(1.0, np.abs(w))):
                break
        else:
            i = int(np.argmax(np.abs(dw)))
            raise InversionError(
                f"map inversion stalled at |dw|={abs(dw[i]):.2e}", last_iterate=w[i]
            )
        return complex(w[0]) if scalar else w

    def _eval_any(self, w):
        # evaluation without the |w| >= 1 guard (Newton iterates may dip inside)
        ks = np.arange(1, self.K + 1)
        return self.r * w + self.a0 + (np.asarray(w, dtype=complex)[..., None] ** (-ks)) @ self.u


@dataclass(frozen=True)
class MomentVector:
    """t0 = area/pi plus the exterior harmonic moments t_1..t_m."""

    t0: float
    tk: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "tk", np.asarray(self.tk, dtype=complex))
        if not (np.isfinite(self.t0) and self.t0 > 0 and np.all(np.isfinite(self.tk))):
            raise InvalidInputError("moments must be finite with t0 > 0")

    def diff_norm(self, other: "MomentVector") -> float:
        return float(
            max(abs(self.t0 - other.t0), np.abs(self.tk - other.tk).max(initial=0.0))
        )


class FitResult(NamedTuple):
    map: LaurentMap
    residual: float


def boundary_contour(m: LaurentMap, n: int) -> Contour:
    """Samples f(e^{2 pi i j / n}), j = 0..n-1, as a positively oriented contour."""
    if n < 4 or n & (n - 1):
        raise InvalidInputError("sample count must be a power of two >= 4")
    w = np.exp(2j * np.pi * np.arange(n) / n)
    return Contour(m(w))


def fit_map(c: Contour, K: int, tol: float | None = None) -> FitResult:
    """Recover a Laurent map from boundary samples by Fourier projection.

    The samples must be (approximately) uniform in the circle parameter, as
    produced by ``boundary_contour`` or by one full evolution step.  The
    rotation gauge is fixed by making the w-coefficient real positive.
    Returns the map and the sup-norm fit residual on the input samples;
    raises ``FitError`` if ``tol`` is given and exceeded.
    """
    z = c.samples
    n = len(z)
    if K >= n // 2:
        raise InvalidInputError("need n > 2K samples to fit K tail modes")
    coeff = np.fft.fft(z) / n
    c1 = coeff[1]
    if abs(c1) == 0:
        raise FitError(np.inf, tol or 0.0)
    alpha = -np.angle(c1)  # w -> w e^{i alpha} makes the leading coefficient real
    r = abs(c1)
    a0 = coeff[0]
    ks = np.arange(1, K + 1)
    u = coeff[(-ks) % n] * np.exp(-1j * ks * alpha)
    m = LaurentMap(r, a0, u, check=False)
    # the input parameter angles correspond to w e^{-i alpha} after re-gauging
    w = np.exp(1j * (2 * np.pi * np.arange(n) / n - alpha))
    residual = float(np.max(np.abs(m(w) - z)))
    if tol is not None and residual > tol:
        raise FitError(residual, tol)
    return FitResult(m, residual)


def harmonic_moments(m: LaurentMap, count: int, n: int | None = None) -> MomentVector:
    """Exterior harmonic moments t_k = (1/(2 pi i k)) oint z^{-k} conj(z) dz.

    t0 is area/pi.  Conserved (k >= 1) under growth driven by the sink at
    infinity, which is the conservation diagnostic used by the evolution
    tests.  The contour must not pass near the origin; translate first if
    it does.
    """
    if n is None:
        n = max(256, 8 * m.K)
        n = 1 << int(np.ceil(np.log2(n)))
    w = np.exp(2j * np.pi * np.arange(n) / n)
    z = m(w)
    spacing = 2 * np.pi * m.r / n
    if np.min(np.abs(z)) < 3 * spacing:
        raise MomentUndefinedError(
            "contour passes through (or too close to) the origin; translate the map"
        )
    dz = _fourier_derivative(z) * (2 * np.pi / n)
    t0 = float(np.sum(np.imag(np.conj(z) * dz)) / (2 * np.pi))
    ks = np.arange(1, count + 1)
    tk = np.array([np.sum(z ** (-k) * np.conj(z) * dz) / (2j * np.pi * k) for k in ks])
    return MomentVector(t0, tk)


def map_to_json(m: LaurentMap) -> str:
    payload = {
        "r": m.r,
        "a0": [m.a0.real, m.a0.imag],
        "u": [[uk.real, uk.imag] for uk in m.u],
    }
    return json.dumps(payload, sort_keys=True)


def map_from_json(text: str, check: bool = True) -> LaurentMap:
    data = json.loads(text)
    r = float(data["r"])
    if r <= 0:
        raise InvalidInputError("map JSON has r <= 0")
    a0 = complex(*data["a0"])
    u = np.array([complex(re, im) for re, im in data["u"]], dtype=complex)
    return LaurentMap(r, a0, u, check=check)


def random_univalent_map(K: int, rng: np.random.Generator,
                         amplitude: float = 0.3, K_pad: int = 0) -> LaurentMap:
    """Random map with sum k |u_k| = amplitude * r, which guarantees univalence.

    ``K_pad`` appends zero tail modes as working room for evolution.
    """
    if not 0 < amplitude < 1:
        raise InvalidInputError("amplitude must lie in (0, 1)")
    u = rng.normal(size=K) + 1j * rng.normal(size=K)
    u *= amplitude / np.sum(np.arange(1, K + 1) * np.abs(u))
    if K_pad > K:
        u = np.concatenate([u, np.zeros(K_pad - K, dtype=complex)])
    a0 = complex(rng.normal(scale=0.2), rng.normal(scale=0.2))
    return LaurentMap(1.0, a0, u)
