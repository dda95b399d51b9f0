"""Schwarz function of a map-defined droplet: continuation, poles, unitarity.

For a boundary that is the image of the unit circle under f, the analytic
continuation of conj(z) off the contour is S(z) = fbar(1/w(z)), where fbar
conjugates the map's coefficients and w(z) inverts the map.  S is evaluated
on a tube around the contour (and, for rational maps, through the whole
viscous domain minus the poles); its poles and residues are the data that
growth flows preserve.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .conformal import LaurentMap
from .errors import (
    ContinuationError,
    GeneralPositionError,
    InvalidInputError,
    PoleSearchError,
    UnivalenceError,
)
from .geometry import Contour

__all__ = [
    "RationalMap",
    "SchwarzEvaluator",
    "PoleInfo",
    "PoleData",
    "extract_poles",
    "residue_flow_check",
    "ResidueFlowReport",
    "poles_to_json",
    "poles_from_json",
]


@dataclass(frozen=True)
class RationalMap:
    """Exterior map f(w) = r w + a0 + sum_j u_j / (w - w_j) with |w_j| < 1.

    The simple poles inside the preimage disk give the droplet a Schwarz
    function with genuine point singularities in the viscous domain, which
    is what the pole-extraction machinery is exercised on.
    """

    r: float
    a0: complex
    u: tuple
    w0: tuple

    def __post_init__(self):
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "a0", complex(self.a0))
        object.__setattr__(self, "u", tuple(complex(v) for v in self.u))
        object.__setattr__(self, "w0", tuple(complex(v) for v in self.w0))
        if len(self.u) != len(self.w0):
            raise InvalidInputError("need one strength per pole")
        if self.r <= 0:
            raise InvalidInputError("r must be positive")
        if any(abs(w) >= 1 for w in self.w0):
            raise InvalidInputError("map poles must lie inside the unit disk")
        n = 512
        w = np.exp(2j * np.pi * np.arange(n) / n)
        if np.min(np.abs(self.deriv(w))) <= 0:
            raise UnivalenceError("|f'| vanishes on the unit circle")

    def __call__(self, w):
        w = np.asarray(w, dtype=complex)
        out = self.r * w + self.a0
        for u, w0 in zip(self.u, self.w0):
            out = out + u / (w - w0)
        return out

    def deriv(self, w):
        w = np.asarray(w, dtype=complex)
        out = np.full_like(w, self.r, dtype=complex)
        for u, w0 in zip(self.u, self.w0):
            out = out - u / (w - w0) ** 2
        return out

    def conjugated(self, xi):
        """fbar(xi): the map with conjugated coefficients."""
        xi = np.asarray(xi, dtype=complex)
        out = self.r * xi + np.conj(self.a0)
        for u, w0 in zip(self.u, self.w0):
            out = out + np.conj(u) / (xi - np.conj(w0))
        return out

    def boundary(self, n: int) -> Contour:
        w = np.exp(2j * np.pi * np.arange(n) / n)
        return Contour(self(w))

    def invert(self, z, w0=None, tol=1e-14, max_iter=100):
        z = np.asarray(z, dtype=complex)
        scalar = z.ndim == 0
        z = np.atleast_1d(z)
        w = ((z - self.a0) / self.r if w0 is None
             else np.atleast_1d(np.asarray(w0, dtype=complex)).copy())
        if w0 is None:
            small = np.abs(w) < 1.05
            w[small] = 1.05 * np.where(w[small] == 0, 1.0, w[small] / np.abs(w[small]))
        for _ in range(max_iter):
            dw = (self(w) - z) / self.deriv(w)
            w = w - dw
            if np.all(np.abs(dw) <= tol * np.maximum(1.0, np.abs(w))):
                break
        else:
            raise ContinuationError("map inversion did not converge")
        return complex(w[0]) if scalar else w

    def schwarz_poles_exact(self):
        """Closed-form pole locations/residues of S in the viscous domain.

        S picks up a simple pole at z* = f(1/conj(w_j)) with residue
        -conj(u_j) f'(1/conj(w_j)) / conj(w_j)^2.
        """
        out = []
        for u, w0 in zip(self.u, self.w0):
            ws = 1.0 / np.conj(w0)
            z_star = complex(self(np.asarray(ws)))
            res = complex(-np.conj(u) * self.deriv(np.asarray(ws)) / np.conj(w0) ** 2)
            out.append((z_star, res))
        return out


def _conjugated_laurent(m: LaurentMap):
    uc = np.conj(m.u)

    def fbar(xi):
        xi = np.asarray(xi, dtype=complex)
        ks = np.arange(1, m.K + 1)
        return m.r * xi + np.conj(m.a0) + (xi[..., None] ** (-ks)) @ uc

    return fbar


@dataclass(frozen=True)
class SchwarzEvaluator:
    """Analytic continuation of conj(z) away from a map's boundary.

    Works for ``LaurentMap`` and ``RationalMap`` sources.  Evaluation
    inverts the map by Newton continuation seeded from the far field (or a
    caller-provided seed for points deep inside the droplet).
    """

    source: object
    _fbar: Callable = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if isinstance(self.source, LaurentMap):
            # fbar(1/w) stays a finite sum: r/w + conj(a0) + sum conj(u_k) w^k
            fbar = _conjugated_laurent(self.source)
        elif isinstance(self.source, RationalMap):
            fbar = self.source.conjugated
        else:
            raise InvalidInputError("source must be a LaurentMap or RationalMap")
        object.__setattr__(self, "_fbar", fbar)

    def _invert(self, z, w0=None):
        try:
            return self.source.invert(z, w0=w0)
        except Exception as exc:
            raise ContinuationError(f"w(z) inversion failed: {exc}") from exc

    def __call__(self, z, w0=None):
        """S(z) = fbar(1/w(z))."""
        w = self._invert(z, w0=w0)
        return self._fbar(1.0 / np.asarray(w, dtype=complex))

    def deriv(self, z, w0=None, h_rel: float = 1e-6):
        """S'(z) by a small complex-stencil derivative of the continuation."""
        z = np.asarray(z, dtype=complex)
        h = h_rel * max(1.0, float(np.max(np.abs(z))))
        return (self(z + h, w0=w0) - self(z - h, w0=w0)) / (2 * h)

    def boundary_residual(self, n: int = 512) -> float:
        """sup |S(z) - conj(z)| over boundary samples (defining identity)."""
        w = np.exp(2j * np.pi * np.arange(n) / n)
        z = self.source(w)
        vals = self._fbar(1.0 / w)
        return float(np.max(np.abs(vals - np.conj(z))))

    def unitarity_residual(self, z) -> float:
        """sup |S(conj(S(z))) - conj(z)|: the involution property."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        s1 = self(z)
        s2 = self(np.conj(s1))
        return float(np.max(np.abs(s2 - np.conj(z))))

    def derivative_identity_residual(self, z) -> float:
        """sup |S'(conj(S(z))) conj(S'(z)) - 1| on the given points."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        sp = self.deriv(z)
        mirror = np.conj(self(z))
        sp_m = self.deriv(mirror)
        return float(np.max(np.abs(sp_m * np.conj(sp) - 1.0)))


@dataclass(frozen=True)
class PoleInfo:
    location: complex
    order: int
    residue: complex


@dataclass(frozen=True)
class PoleData:
    poles: tuple

    def __post_init__(self):
        object.__setattr__(self, "poles", tuple(self.poles))
        locs = [p.location for p in self.poles]
        for i in range(len(locs)):
            for j in range(i + 1, len(locs)):
                if abs(locs[i] - locs[j]) < 1e-8 * max(1.0, abs(locs[i])):
                    raise GeneralPositionError(
                        f"poles {locs[i]} and {locs[j]} collide: general-position "
                        "assumption violated"
                    )
        if any(p.order < 1 for p in self.poles):
            raise InvalidInputError("pole orders must be >= 1")


def _circle_residue(func, z0: complex, radius: float, n: int = 256) -> complex:
    th = 2 * np.pi * np.arange(n) / n
    ring = z0 + radius * np.exp(1j * th)
    vals = np.asarray(func(ring), dtype=complex)
    return complex(np.mean(vals * radius * np.exp(1j * th)))


def _polish_pole(func, z0: complex, radius: float, n: int = 256):
    """Quadrature refinement of a simple-pole location and residue.

    With res = (1/2 pi i) oint S dz and m1 = (1/2 pi i) oint (z - z0) S dz
    around a circle enclosing only the pole, the true location is
    z0 + m1/res to quadrature (machine) precision.
    """
    th = 2 * np.pi * np.arange(n) / n
    rot = radius * np.exp(1j * th)
    vals = np.asarray(func(z0 + rot), dtype=complex)
    res = complex(np.mean(vals * rot))
    m1 = complex(np.mean(vals * rot * rot))
    if res == 0:
        return z0, res
    z_ref = z0 + m1 / res
    vals = np.asarray(func(z_ref + rot), dtype=complex)
    return z_ref, complex(np.mean(vals * rot))


def extract_poles(
    ev,
    hints: Sequence[complex],
    contour: Contour | None = None,
    radius_frac: float = 1e-2,
    tol: float = 1e-11,
) -> PoleData:
    """Locate poles of a Schwarz evaluator near the given hints.

    Newton runs on 1/S, which has a simple zero at each pole; residues come
    from small-circle quadrature at two radii (ratio 10), whose agreement
    guards against contamination from nearby singularities.  ``contour``
    (when given) sets the admissible circle radius from the distance to the
    boundary and rejects circles that would cross it.
    """
    found = []
    for hint in hints:
        z = _newton_on_inverse(ev, complex(hint))
        dist_bound = abs(z - hint) + 1.0
        if contour is not None:
            dist_bound = float(np.min(np.abs(contour.samples - z)))
        rad = radius_frac * dist_bound
        if contour is not None and rad >= dist_bound:
            raise InvalidInputError("residue circle would cross the boundary")
        z, _ = _polish_pole(ev, z, rad)
        res1 = _circle_residue(ev, z, rad)
        res2 = _circle_residue(ev, z, rad / 10)
        if abs(res1 - res2) > 1e3 * tol * max(1.0, abs(res1)):
            raise PoleSearchError(
                f"residues at radii {rad:.1e} and {rad / 10:.1e} disagree "
                f"({abs(res1 - res2):.2e}); nearby singularity?",
                best=z,
            )
        # order from the growth rate of |S| between the two radii
        m1 = np.max(np.abs(np.asarray(ev(z + rad * np.exp(2j * np.pi * np.arange(64) / 64)))))
        m2 = np.max(np.abs(np.asarray(ev(z + rad / 10 * np.exp(2j * np.pi * np.arange(64) / 64)))))
        order = max(1, int(round(np.log10(m2 / m1))))
        found.append(PoleInfo(z, order, res2))
    return PoleData(tuple(found))


def _newton_on_inverse(ev, z: complex) -> complex:
    """Newton on 1/S, which has a simple zero at each pole of S.

    Landing exactly on the pole (S overflowing or non-finite) counts as
    convergence; the caller polishes the location by quadrature moments.
    """
    for _ in range(80):
        s = complex(np.asarray(ev(z)))
        if not np.isfinite(s) or abs(s) > 1e13:
            return z
        h = 1e-7 * max(1.0, abs(z))
        sp = (complex(np.asarray(ev(z + h))) - complex(np.asarray(ev(z - h)))) / (2 * h)
        if sp == 0 or not np.isfinite(sp):
            return z
        step = (1.0 / s) / (-sp / s**2)
        z = z - step
        if abs(step) < 1e-12 * max(1.0, abs(z)):
            return z
    raise PoleSearchError("pole search did not converge", best=z)


@dataclass(frozen=True)
class ResidueFlowReport:
    location: complex
    residue: complex
    dlocation_dt: complex
    dresidue_dt: complex


def residue_flow_check(
    evaluator_at: Callable[[float], Callable],
    t0: float,
    pole_hint: complex,
    delta: float = 1e-4,
    radius: float = 1e-2,
) -> ResidueFlowReport:
    """Finite-difference drift of one pole along a one-parameter family.

    ``evaluator_at(t)`` returns a Schwarz evaluator (any callable z -> S(z))
    for family parameter t.  Location and residue are extracted at
    t0 - delta, t0, t0 + delta; central differences give the drifts, which
    the growth flows predict to vanish away from the pumped point.
    """
    def locate(t):
        ev = evaluator_at(t)
        z = _newton_on_inverse(ev, complex(pole_hint))
        return _polish_pole(ev, z, radius)

    zm, rm = locate(t0 - delta)
    z0, r0 = locate(t0)
    zp, rp = locate(t0 + delta)
    return ResidueFlowReport(
        location=z0,
        residue=r0,
        dlocation_dt=(zp - zm) / (2 * delta),
        dresidue_dt=(rp - rm) / (2 * delta),
    )


def poles_to_json(data: PoleData) -> str:
    payload = {
        "poles": [
            {
                "z": [p.location.real, p.location.imag],
                "order": p.order,
                "residue": [p.residue.real, p.residue.imag],
            }
            for p in data.poles
        ]
    }
    return json.dumps(payload, sort_keys=True)


def poles_from_json(text: str) -> PoleData:
    data = json.loads(text)
    return PoleData(tuple(
        PoleInfo(complex(*e["z"]), int(e["order"]), complex(*e["residue"]))
        for e in data["poles"]
    ))
