"""Synchronous reactive programming embedded in Python.

Programs are trees of statements built with the constructors below, loaded
into a :class:`Machine` and driven one reaction at a time.
"""

from .ast import (Statement, TrapLabel, and_, apply, atom, const, emit, eq, exit_,
                  if_, local, loop, not_, nothing, now, or_, par, pause, pre, preval,
                  seq, sexpr, suspend, trap, val)
from .bridge import Completion, ScriptedClient, ServiceCall, ServiceClient, with_hop
from .derived import abort, await_, every, halt, loop_each, sustain, until
from .errors import (AstError, CausalityError, DuplicateEventError, EmitAfterReadError,
                     HipHopError, HostError, HostTypeError, InputKindError,
                     InstantaneousLoopError, ListenerKindError, LoadError,
                     MultipleEmitError, NoValueError, ReactionError)
from .events import (NO_VALUE, Event, EventKind, input_event, local_event, make_event,
                     output_event)
from .runtime import Machine, MachineStatus, ReactionReport, can_set, load

__all__ = [
    "Statement", "TrapLabel", "and_", "apply", "atom", "const", "emit", "eq", "exit_",
    "if_", "local", "loop", "not_", "nothing", "now", "or_", "par", "pause", "pre",
    "preval", "seq", "sexpr", "suspend", "trap", "val",
    "Completion", "ScriptedClient", "ServiceCall", "ServiceClient", "with_hop",
    "abort", "await_", "every", "halt", "loop_each", "sustain", "until",
    "AstError", "CausalityError", "DuplicateEventError", "EmitAfterReadError",
    "HipHopError", "HostError", "HostTypeError", "InputKindError",
    "InstantaneousLoopError", "ListenerKindError", "LoadError", "MultipleEmitError",
    "NoValueError", "ReactionError",
    "NO_VALUE", "Event", "EventKind", "input_event", "local_event", "make_event",
    "output_event",
    "Machine", "MachineStatus", "ReactionReport", "can_set", "load",
]
