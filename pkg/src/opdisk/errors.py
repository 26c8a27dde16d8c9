"""Exception hierarchy shared by all opdisk modules."""


class OpDiskError(Exception):
    """Base class for every error raised by opdisk."""


class AlgebraMismatch(OpDiskError):
    pass


class NotHermitian(OpDiskError):
    pass


class NotPositive(OpDiskError):
    pass


class SingularSpectrum(OpDiskError):
    pass


class NotInGroup(OpDiskError):
    pass


class InvalidPoint(OpDiskError):
    """A matrix failed the Q_rho, K or tangent-space membership checks."""


class DegenerateProjection(OpDiskError):
    pass


class DifferentFibers(OpDiskError):
    pass


class BasePointMismatch(OpDiskError):
    pass


class NotHorizontal(OpDiskError):
    pass


class NotInRange(OpDiskError):
    pass


class NotInDisk(OpDiskError):
    pass


class NotInHalfSpace(OpDiskError):
    pass


class NotOnSphere(OpDiskError):
    pass


class NotRepresentable(OpDiskError):
    pass


class StepOutOfHalfSpace(OpDiskError):
    pass


class ConfigError(OpDiskError):
    pass
