"""Logical events: per-reaction status, memorized value and multi-emission combination."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any, Callable, Optional

from .errors import EmitAfterReadError, MultipleEmitError, NoValueError

Combiner = Callable[[Any, Any], Any]


class _Marker:
    __slots__ = ("_name",)

    def __init__(self, name: str):
        self._name = name

    def __repr__(self) -> str:
        return self._name

    def __bool__(self) -> bool:
        raise TypeError(f"{self._name} has no truth value")


#: Returned by constructive reads of an event whose status is not yet decided.
BLOCKED = _Marker("BLOCKED")
#: Memorized value of an event that was never emitted with a value.
NO_VALUE = _Marker("NO_VALUE")


class EventKind(str, enum.Enum):
    INPUT = "input"
    OUTPUT = "output"
    LOCAL = "local"


@dataclass(frozen=True, eq=False)
class Event:
    """A named logical event. Carries no state; states live in a machine or a local scope."""

    name: str
    kind: EventKind = EventKind.LOCAL
    combiner: Optional[Combiner] = None

    def __repr__(self) -> str:
        return f"Event({self.name!r}, {self.kind.value})"


def make_event(name: str, kind: EventKind | str = EventKind.LOCAL,
               combiner: Optional[Combiner] = None) -> Event:
    if not isinstance(name, str) or not name:
        raise ValueError("event name must be a non-empty string")
    return Event(name, EventKind(kind), combiner)


def input_event(name: str, combiner: Optional[Combiner] = None) -> Event:
    return make_event(name, EventKind.INPUT, combiner)


def output_event(name: str, combiner: Optional[Combiner] = None) -> Event:
    return make_event(name, EventKind.OUTPUT, combiner)


def local_event(name: str, combiner: Optional[Combiner] = None) -> Event:
    return make_event(name, EventKind.LOCAL, combiner)


@dataclass(eq=False)
class EventState:
    """Runtime state of one event (one incarnation, for locals).

    ``status`` is ``None`` while unknown. ``final`` is set once no further
    emission can happen in the current reaction, which is when constructive
    ``val`` reads are released.
    """

    name: str
    combiner: Optional[Combiner] = None
    status: Optional[bool] = None
    value: Any = NO_VALUE
    pre_status: bool = False
    pre_value: Any = NO_VALUE
    emit_count: int = 0
    valued_emits: int = 0
    value_read: bool = False
    final: bool = False

    def __repr__(self) -> str:
        return f"EventState({self.name!r}, status={self.status}, value={self.value!r})"


def new_state(event: Event) -> EventState:
    return EventState(event.name, event.combiner)


def begin_reaction(state: EventState) -> None:
    state.status = None
    state.emit_count = 0
    state.valued_emits = 0
    state.value_read = False
    state.final = False


def end_reaction(state: EventState) -> None:
    """Decide leftovers absent and take the snapshot seen by pre/preval next time."""
    if state.status is None:
        state.status = False
    state.final = True
    state.pre_status = state.status
    state.pre_value = state.value


def read_status(state: EventState, phase: str = "now"):
    if phase == "pre":
        return state.pre_status
    if phase != "now":
        raise ValueError(f"unknown status phase {phase!r}")
    return BLOCKED if state.status is None else state.status


def read_value(state: EventState, phase: str = "val"):
    if phase == "preval":
        if state.pre_value is NO_VALUE:
            raise NoValueError(f"event {state.name!r} has no previous value")
        return state.pre_value
    if phase != "val":
        raise ValueError(f"unknown value phase {phase!r}")
    if state.status is None:
        return BLOCKED
    if state.value is NO_VALUE:
        raise NoValueError(f"event {state.name!r} has no value")
    state.value_read = True
    return state.value


def combine_emission(state: EventState, value: Any = NO_VALUE,
                     combiner: Optional[Combiner] = None) -> EventState:
    """Record one emission (or one input) of ``state`` in the current reaction."""
    if combiner is None:
        combiner = state.combiner
    if value is not NO_VALUE:
        if state.value_read:
            raise EmitAfterReadError(
                f"event {state.name!r} emitted with a value after its value was read")
        if state.valued_emits == 0:
            state.value = value
        elif combiner is None:
            raise MultipleEmitError(
                f"event {state.name!r} has several valued emissions and no combiner")
        else:
            state.value = combiner(state.value, value)
        state.valued_emits += 1
    state.status = True
    state.emit_count += 1
    return state
