"""Exception hierarchy for the heleshaw package."""


class HeleShawError(Exception):
    """Base class for all package errors."""


class InvalidInputError(HeleShawError, ValueError):
    """Malformed input data (non-finite samples, bad shapes, bad parameters)."""


class ProximityError(HeleShawError):
    """Evaluation point too close to a contour for accurate quadrature."""

    def __init__(self, distance, limit):
        self.distance = float(distance)
        self.limit = float(limit)
        super().__init__(
            f"evaluation point at distance {distance:.3e} from contour; "
            f"minimum allowed is {limit:.3e} (up-sample the contour to get closer)"
        )


class UnivalenceError(HeleShawError):
    """A conformal map failed its univalence check."""


class CuspError(HeleShawError):
    """The boundary derivative collapsed: the interface formed a cusp.

    Terminal for a growth run; the zero-surface-tension model is no longer
    valid past this point.
    """

    def __init__(self, message, min_deriv=None):
        self.min_deriv = min_deriv
        super().__init__(message)


class FitError(HeleShawError):
    """Map fitting left a residual above the requested threshold."""

    def __init__(self, residual, tol):
        self.residual = float(residual)
        self.tol = float(tol)
        super().__init__(f"fit residual {residual:.3e} exceeds tolerance {tol:.3e}")


class InversionError(HeleShawError):
    """Newton inversion of a conformal map failed to converge."""

    def __init__(self, message, last_iterate=None):
        self.last_iterate = last_iterate
        super().__init__(message)


class MomentUndefinedError(HeleShawError):
    """Harmonic moments undefined: contour passes through the origin."""


class TruncationError(HeleShawError):
    """Laurent tail blew past its tolerance even after step halving."""


class ContinuationError(HeleShawError):
    """Analytic continuation (Schwarz evaluation) failed."""


class PoleSearchError(HeleShawError):
    """Pole search did not converge; carries the best iterate found."""

    def __init__(self, message, best=None):
        self.best = best
        super().__init__(message)


class GeneralPositionError(HeleShawError):
    """Singularity data violated the general-position assumption."""


class DegenerateCurveError(HeleShawError):
    """Curve parameters degenerate (e.g. coincident poles p = q)."""


class InfeasibleParametersError(HeleShawError):
    """No admissible degeneracy: parameters lie outside the physical family."""


class AmbiguousSelectionError(HeleShawError):
    """More than one curve candidate survived every physical filter."""

    def __init__(self, candidates):
        self.candidates = candidates
        super().__init__(
            f"{len(candidates)} degenerate-curve candidates passed the physical "
            "filters; cannot select one deterministically"
        )


class TracingError(HeleShawError):
    """Real-section tracing failed (stall at a singular point or non-closure)."""


class BranchCutError(HeleShawError):
    """Evaluation requested on a branch cut or at a branch point."""


class BifurcationError(HeleShawError):
    """Hodograph Jacobian (numerically) singular: at or past a cusp."""


class NonConvergenceError(HeleShawError):
    """Newton iteration exhausted its budget; carries the iteration trace."""

    def __init__(self, message, trace=None):
        self.trace = trace or []
        super().__init__(message)
