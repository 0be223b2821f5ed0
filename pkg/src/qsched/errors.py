"""Exception hierarchy shared across the package."""


class QschedError(Exception):
    """Base class for all domain errors raised by this package."""


class InputFormatError(QschedError):
    """Malformed instance file or unparseable command-line value."""


class CapacityExceeded(QschedError):
    """The schedule space is larger than the requested backend or cap allows."""


class InconsistentTimeField(QschedError):
    """A job subregister's time bits disagree with the instance's time matrix."""


class NonZeroTarget(QschedError):
    """A reversible arithmetic step found its target register already populated."""


class NonScheduleState(QschedError):
    """A basis state outside the preparation's reachable subspace was encountered."""


class ZeroCount(QschedError):
    """An iteration count was requested for a predicate with no solutions."""


class NoSolution(QschedError):
    """Exact counting proved that no schedule satisfies the predicate."""


class AdaptiveCutoffExceeded(QschedError):
    """The unknown-count search exceeded its total iteration budget."""


class NoScheduleInRange(QschedError):
    """A minimization scan exhausted its range without a verified schedule."""
