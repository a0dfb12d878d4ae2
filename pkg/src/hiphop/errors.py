"""Exception hierarchy shared by every part of the engine."""


class HipHopError(Exception):
    """Base class for all engine errors."""


class AstError(HipHopError):
    """Malformed statement or expression tree."""


class DuplicateEventError(HipHopError):
    """Two events with the same name in one scope."""


class LoadError(HipHopError):
    """The program cannot be loaded against the given interface."""


class InputKindError(HipHopError):
    """input() called with an event that is not a machine input."""


class ListenerKindError(HipHopError):
    """add_listener() called with an event that is not a machine output."""


class NoValueError(HipHopError):
    """val/preval of an event that never carried a value."""


class ReactionError(HipHopError):
    """Errors raised while a reaction runs; they poison the machine."""


class CausalityError(ReactionError):
    """No constructive resolution exists for some event status."""


class InstantaneousLoopError(ReactionError):
    """A loop body terminated in the reaction it was (re)started."""


class MultipleEmitError(ReactionError):
    """Several valued emissions of an event that has no combiner."""


class EmitAfterReadError(ReactionError):
    """A valued emission happened after the value was read in the same reaction."""


class HostError(ReactionError):
    """Exception raised by host code (atoms, listeners, pure functions)."""


class HostTypeError(ReactionError):
    """A test value could not be coerced to a boolean."""
