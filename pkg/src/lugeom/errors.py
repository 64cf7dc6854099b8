"""Exception hierarchy. Every error raised by the library derives from LUGeomError."""


class LUGeomError(ValueError):
    pass


class ZeroVector(LUGeomError):
    pass


class DimensionMismatch(LUGeomError):
    pass


class NotBipartite(LUGeomError):
    pass


class BadArity(LUGeomError):
    pass


class IndexOutOfRange(LUGeomError, IndexError):
    pass


class BaseMismatch(LUGeomError):
    pass


class InvalidProfile(LUGeomError):
    pass


class BadProfile(LUGeomError):
    pass


class DegenerateSpectrum(LUGeomError):
    pass


class AllSpectraDegenerate(LUGeomError):
    pass


class NonvanishingCoefficient(LUGeomError):
    pass


class StepOutOfRange(LUGeomError):
    pass


class BadWord(LUGeomError):
    pass


class ParseError(LUGeomError):
    pass
