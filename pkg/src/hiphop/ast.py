"""Kernel statements and signal expressions.

Trees built here are inert values: nothing runs until a tree is loaded into a
:class:`~hiphop.runtime.Machine`. Sub-trees may be shared freely.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Tuple, Union

from .errors import AstError, DuplicateEventError
from .events import Event

# --------------------------------------------------------------------------
# signal expressions


class SignalExpr:
    """Side-effect free expression over event queries."""

    __slots__ = ()


@dataclass(frozen=True)
class Const(SignalExpr):
    value: Any


@dataclass(frozen=True, eq=False)
class _EventQuery(SignalExpr):
    event: Event

    def __eq__(self, other):
        return type(self) is type(other) and self.event is other.event

    def __hash__(self):
        return hash((type(self).__name__, id(self.event)))


class Now(_EventQuery):
    """Current status; blocks while undecided."""


class Pre(_EventQuery):
    """Status at the previous reaction."""


class Val(_EventQuery):
    """Current memorized value; blocks until the event can no longer be emitted."""


class Preval(_EventQuery):
    """Value at the end of the previous reaction."""


@dataclass(frozen=True)
class Apply(SignalExpr):
    """Strict application of a pure host function to evaluated arguments."""

    fn: Callable[..., Any]
    args: Tuple[SignalExpr, ...]


def const(value: Any) -> Const:
    return Const(value)


def now(event: Event) -> Now:
    return Now(_check_event(event))


def pre(event: Event) -> Pre:
    return Pre(_check_event(event))


def val(event: Event) -> Val:
    return Val(_check_event(event))


def preval(event: Event) -> Preval:
    return Preval(_check_event(event))


def apply(fn: Callable[..., Any], *args) -> Apply:
    if not callable(fn):
        raise AstError(f"apply expects a callable, got {fn!r}")
    return Apply(fn, tuple(as_expr(a) for a in args))


def _not(x):
    return not x


def _and(*xs):
    return all(xs)


def _or(*xs):
    return any(xs)


def not_(x) -> Apply:
    return apply(_not, as_cond(x))


def and_(*xs) -> Apply:
    return apply(_and, *(as_cond(x) for x in xs))


def or_(*xs) -> Apply:
    return apply(_or, *(as_cond(x) for x in xs))


def eq(a, b) -> Apply:
    return apply(operator.eq, a, b)


def as_expr(x) -> SignalExpr:
    """Wrap a plain host value as a constant; expressions pass through."""
    if isinstance(x, SignalExpr):
        return x
    if isinstance(x, Statement):
        raise AstError("a statement cannot be used as an expression")
    return Const(x)


def as_cond(x) -> SignalExpr:
    """Like :func:`as_expr`, but a bare event means its current status."""
    if isinstance(x, Event):
        return Now(x)
    return as_expr(x)


def _check_event(event) -> Event:
    if not isinstance(event, Event):
        raise AstError(f"expected an Event, got {event!r}")
    return event


def expr_events(expr: SignalExpr) -> Iterable[Event]:
    if isinstance(expr, _EventQuery):
        yield expr.event
    elif isinstance(expr, Apply):
        for a in expr.args:
            yield from expr_events(a)


# --------------------------------------------------------------------------
# statements


class TrapLabel:
    """A trap name. Exits using the same object bind to it by identity."""

    __slots__ = ("name",)

    def __init__(self, name: str):
        if not name:
            raise AstError("trap label must be non-empty")
        self.name = name

    def __repr__(self):
        return f"TrapLabel({self.name!r})"


Label = Union[str, TrapLabel]


def label_name(label: Label) -> str:
    return label.name if isinstance(label, TrapLabel) else label


class Statement:
    __slots__ = ()
    kind = "?"


@dataclass(frozen=True)
class Nothing(Statement):
    kind = "nothing"


@dataclass(frozen=True)
class Emit(Statement):
    event: Event
    value: Any = None  # SignalExpr or None
    kind = "emit"


@dataclass(frozen=True, eq=False)
class Atom(Statement):
    thunk: Callable[[Any], Any]
    kind = "atom"


@dataclass(frozen=True)
class Pause(Statement):
    kind = "pause"


@dataclass(frozen=True)
class If(Statement):
    test: SignalExpr
    then: Statement
    else_: Statement
    kind = "if"


@dataclass(frozen=True)
class Seq(Statement):
    children: Tuple[Statement, ...]
    kind = "seq"


@dataclass(frozen=True)
class Loop(Statement):
    children: Tuple[Statement, ...]
    kind = "loop"


@dataclass(frozen=True)
class Par(Statement):
    children: Tuple[Statement, ...]
    kind = "par"


@dataclass(frozen=True)
class Suspend(Statement):
    cond: SignalExpr
    children: Tuple[Statement, ...]
    kind = "suspend"


@dataclass(frozen=True)
class Trap(Statement):
    label: Label
    children: Tuple[Statement, ...]
    kind = "trap"


@dataclass(frozen=True)
class Exit(Statement):
    label: Label
    kind = "exit"


@dataclass(frozen=True)
class Local(Statement):
    events: Tuple[Event, ...]
    children: Tuple[Statement, ...]
    kind = "local"


def _stmts(children, where: str, allow_empty: bool = False) -> Tuple[Statement, ...]:
    out = []
    for c in children:
        if not isinstance(c, Statement):
            raise AstError(f"{where}: {c!r} is not a statement")
        out.append(c)
    if not out and not allow_empty:
        raise AstError(f"{where}: body must contain at least one statement")
    return tuple(out)


def _label(label) -> Label:
    if isinstance(label, TrapLabel):
        return label
    if isinstance(label, str) and label:
        return label
    raise AstError(f"invalid trap label {label!r}")


def nothing() -> Nothing:
    return Nothing()


def emit(event: Event, value=None) -> Emit:
    """Emit ``event``; ``value`` may be a SignalExpr or a plain host value."""
    return Emit(_check_event(event), None if value is None else as_expr(value))


def atom(thunk: Callable[[Any], Any]) -> Atom:
    """Run ``thunk(view)`` once when control reaches the statement."""
    if not callable(thunk):
        raise AstError("atom expects a callable")
    return Atom(thunk)


def pause() -> Pause:
    return Pause()


def if_(test, then: Statement, else_: Statement | None = None) -> If:
    if else_ is None:
        else_ = Nothing()
    _stmts((then, else_), "if_")
    return If(as_cond(test), then, else_)


def seq(*children: Statement) -> Seq:
    return Seq(_stmts(children, "seq"))


def loop(*children: Statement) -> Loop:
    return Loop(_stmts(children, "loop"))


def par(*children: Statement) -> Par:
    return Par(_stmts(children, "par"))


def suspend(cond, *children: Statement) -> Suspend:
    return Suspend(as_cond(cond), _stmts(children, "suspend"))


def trap(label: Label, *children: Statement) -> Trap:
    return Trap(_label(label), _stmts(children, "trap"))


def exit_(label: Label) -> Exit:
    return Exit(_label(label))


def local(events: Iterable[Event], *children: Statement) -> Local:
    evs = tuple(events)
    for e in evs:
        _check_event(e)
    names = [e.name for e in evs]
    if len(set(names)) != len(names):
        raise DuplicateEventError(f"duplicate local event names {names}")
    return Local(evs, _stmts(children, "local"))


def children_of(stmt: Statement) -> Tuple[Statement, ...]:
    if isinstance(stmt, If):
        return (stmt.then, stmt.else_)
    return getattr(stmt, "children", ())


def walk(stmt: Statement):
    """Pre-order traversal of a statement tree."""
    yield stmt
    for c in children_of(stmt):
        yield from walk(c)


def count_nodes(stmt: Statement) -> int:
    return sum(1 for _ in walk(stmt))


def sexpr(node) -> Any:
    """Structural snapshot as nested tuples; labels and events appear by name."""
    if isinstance(node, Const):
        return ("const", node.value)
    if isinstance(node, _EventQuery):
        return (type(node).__name__.lower(), node.event.name)
    if isinstance(node, Apply):
        return ("apply", getattr(node.fn, "__name__", repr(node.fn)),
                *(sexpr(a) for a in node.args))
    if isinstance(node, Emit):
        return ("emit", node.event.name) + (() if node.value is None else (sexpr(node.value),))
    if isinstance(node, If):
        return ("if", sexpr(node.test), sexpr(node.then), sexpr(node.else_))
    if isinstance(node, (Trap, Exit)):
        head = (node.kind, label_name(node.label))
        return head + tuple(sexpr(c) for c in children_of(node))
    if isinstance(node, Suspend):
        return ("suspend", sexpr(node.cond)) + tuple(sexpr(c) for c in node.children)
    if isinstance(node, Local):
        return ("local", tuple(e.name for e in node.events)) + tuple(sexpr(c) for c in node.children)
    if isinstance(node, Statement):
        extra = getattr(node, "sexpr_extra", None)
        head = (node.kind,) + (extra() if extra else ())
        return head + tuple(sexpr(c) for c in children_of(node))
    raise AstError(f"not a tree node: {node!r}")
