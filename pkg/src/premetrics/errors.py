"""Exception hierarchy shared by every module."""


class PremetricError(ValueError):
    """Base class for all input and construction errors."""


class NotAPartialOrder(PremetricError):
    pass


class NotALattice(PremetricError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class ElementNotInLattice(PremetricError):
    pass


class NotValueDistributive(PremetricError):
    pass


class IdNotInGround(PremetricError):
    pass


class GroundMismatch(PremetricError):
    pass


class GroundTooLarge(PremetricError):
    pass


class SizeGuardError(PremetricError):
    """A construction would exceed a configured size cap."""


class EpsNotPositive(PremetricError):
    pass


class NTooLarge(PremetricError):
    pass


class PointNotInImage(PremetricError):
    pass


class ProbeTooLarge(PremetricError):
    pass


class InvalidSpace(PremetricError):
    pass


class InvalidTopology(PremetricError):
    pass


class InvalidMap(PremetricError):
    pass
