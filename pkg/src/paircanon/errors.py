"""Exception types shared across the toolkit."""


class PairCanonError(Exception):
    """Base class for all toolkit errors."""


class NotHermitian(PairCanonError):
    pass


class BadInput(PairCanonError):
    pass


class BadParam(PairCanonError):
    pass


class BadStructure(PairCanonError):
    pass


class Singular(PairCanonError):
    pass


class EigenFailure(PairCanonError):
    pass


class StructureInconsistent(PairCanonError):
    pass


class BothSingular(PairCanonError):
    pass


class Unsupported(PairCanonError):
    pass


class UnsupportedFlavor(Unsupported):
    pass


class UnsupportedPair(Unsupported):
    pass


class NotOrthogonal(PairCanonError):
    pass


class ToleranceFailure(PairCanonError):
    pass


class ShapeMismatch(PairCanonError):
    pass


class DeskScaleExceeded(PairCanonError):
    pass
