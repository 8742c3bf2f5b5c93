"""Exception hierarchy shared across the package."""


class TimError(Exception):
    """Base class for every error raised by this package."""


class ParseError(TimError, ValueError):
    pass


class MalformedDocument(ParseError):
    pass


class IndexOutOfRange(ParseError):
    pass


class SelfInterference(ParseError):
    pass


class DuplicateReceiverEntry(ParseError):
    pass


class KTooLarge(TimError, ValueError):
    pass


class ClassError(TimError):
    """The topology is not in the class a synthesizer requires."""


class NotBestTopology(ClassError):
    pass


class WrongClass(ClassError):
    pass


class NotPathOrCycle(TimError):
    pass


class PlanInfeasible(TimError):
    pass


class LinkAbsent(TimError, KeyError):
    pass


class DimensionMismatch(TimError, ValueError):
    pass


class DifferentSets(TimError, ValueError):
    pass
