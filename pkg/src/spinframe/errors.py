"""Exception hierarchy shared across the package."""


class CurveError(ValueError):
    """Invalid curve document, degenerate geometry, or bad sampling grid."""


class SingularityError(ValueError):
    """Frenet frame undefined because curvature vanishes at a sample."""

    def __init__(self, index, kappa=None):
        self.index = int(index)
        self.kappa = kappa
        msg = f"Frenet frame singular at sample {self.index}"
        if kappa is not None:
            msg += f" (kappa={kappa:.3e})"
        super().__init__(msg)


class FrameError(ValueError):
    """Frame or frame path breaks orthonormality / handedness, or kinds mismatch."""


class SpinorError(ValueError):
    """Zero spinor, non-unit spinor where a unit one is required, or bad triad."""
