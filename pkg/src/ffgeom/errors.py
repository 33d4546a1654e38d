"""Exception hierarchy shared by all ffgeom modules."""


class FFGeomError(Exception):
    """Base class for every error raised by ffgeom."""


class NotPrime(FFGeomError, ValueError):
    pass


class EvenCharacteristic(FFGeomError, ValueError):
    pass


class TooLarge(FFGeomError, ValueError):
    pass


class EqualPoints(FFGeomError, ValueError):
    pass


class ParseError(FFGeomError, ValueError):
    pass


class NotATree(FFGeomError, ValueError):
    pass


class BadPin(FFGeomError, ValueError):
    pass


class IncompleteEmbedding(FFGeomError, ValueError):
    pass


class EmptyPool(FFGeomError, ValueError):
    pass


class BadBlockSize(FFGeomError, ValueError):
    pass


class EmptyInput(FFGeomError, ValueError):
    pass


class RegimeMismatch(FFGeomError, ValueError):
    pass


class RestrictionViolated(FFGeomError, ValueError):
    pass


class NoIsotropicLines(FFGeomError, ValueError):
    pass


class SizeExceedsPlane(FFGeomError, ValueError):
    pass


class ConfigError(FFGeomError, ValueError):
    pass


class IoError(FFGeomError, OSError):
    pass
