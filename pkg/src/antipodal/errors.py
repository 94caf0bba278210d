"""Exception and warning types shared across the package."""


class NearZeroVector(ValueError):
    """Vector too close to the origin to normalize onto the sphere."""


class LevelTooLarge(ValueError):
    """Requested mesh subdivision level exceeds the memory guard."""


class MeshTooCoarse(ValueError):
    """Zero localization needs at least subdivision level 3."""


class DegreeTooLarge(ValueError):
    """Polynomial total degree exceeds the coefficient table guard."""


class SuspectMiss(RuntimeError):
    """No candidate cells found although an odd field must vanish somewhere."""


class NoConvergence(RuntimeError):
    """Newton refinement exhausted its iteration budget."""


class SingularJacobian(RuntimeError):
    """Tangent Jacobian numerically singular at the current iterate."""


class AsymmetricZeroSet(RuntimeError):
    """A refined zero failed antipodal re-verification."""


class ZeroOnCircle(RuntimeError):
    """Field vanishes at a winding-number sample point."""


class StepTooLarge(RuntimeError):
    """Winding-number angular steps stayed too large after sample doubling."""


class NotRegular(RuntimeError):
    """Target value is not regular for the field at the solver tolerance."""


class NoSignChange(RuntimeError):
    """Degeneracy bracket does not change state inside an event interval."""


class DegeneratePresentWarning(UserWarning):
    """A coincidence set contains degenerate pairs; certificates degrade."""
