"""Reactive machines and the constructive reaction engine.

A loaded program is instantiated into a tree of runtime nodes that mirrors the
statement tree. Each node keeps two kinds of state:

* selection state, remembered between reactions (``selected`` plus the
  position inside sequences, the branch taken by an ``if``...);
* per-activation state, reset each time the parent starts or resumes it.

A reaction repeatedly walks the tree from the root. Finished nodes return
their memoized completion code, blocked nodes retry their pending read. When
a full walk makes no progress, the Can set of the residual program is
computed: undecided events that cannot be emitted any more become absent, and
present events that cannot be emitted any more get their value released to
``val`` readers. If nothing can be decided the program is not constructive.

Completion codes: 0 terminated, 1 paused, ``2 + k`` exit to the trap ``k``
levels out.
"""

from __future__ import annotations

import enum
import itertools
import random
import threading
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Tuple

from . import ast as A
from .bridge import Completion, ServiceCall, WithHop
from .errors import (AstError, CausalityError, DuplicateEventError, HipHopError,
                     HostError, HostTypeError, InputKindError,
                     InstantaneousLoopError, ListenerKindError, LoadError)
from .events import (BLOCKED, NO_VALUE, Event, EventKind, EventState,
                     begin_reaction, combine_emission, end_reaction, new_state,
                     read_value)

START, RESUME, CURRENT = "start", "resume", "current"


def par_code(codes: Iterable[int]) -> int:
    """Completion code of a parallel statement: the maximum of its branches."""
    return max(codes, default=0)


def trap_code(code: int) -> int:
    """Completion code seen outside a trap whose body returned ``code``."""
    if code <= 1:
        return code
    if code == 2:
        return 0
    return code - 1


def _max_fold(a: set, b: set) -> set:
    return {max(x, y) for x in a for y in b}


def _truth(v) -> bool:
    try:
        return bool(v)
    except Exception as exc:  # noqa: BLE001 - host values are opaque
        raise HostTypeError(f"test value {v!r} is not a boolean") from exc


# --------------------------------------------------------------------------
# scopes and compiled expressions


class _Scope:
    """Owner of a set of event states (the machine interface)."""

    def __init__(self, events: Iterable[Event]):
        self.decls = {e.name: e for e in events}
        self.env: Optional[Dict[str, EventState]] = {
            name: new_state(e) for name, e in self.decls.items()}


class _CConst:
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value

    def eval(self, m):
        return self.value

    def peek(self, m, fresh):
        return self.value


class _CRef:
    __slots__ = ("phase", "owner", "name")

    def __init__(self, phase, owner, name):
        self.phase = phase
        self.owner = owner
        self.name = name

    def eval(self, m):
        st = self.owner.env[self.name]
        phase = self.phase
        if phase == "pre":
            return st.pre_status
        if phase == "preval":
            return read_value(st, "preval")
        if st.status is None:
            return BLOCKED
        if phase == "now":
            return st.status
        if st.status and not st.final:
            return BLOCKED
        return read_value(st, "val")

    def peek(self, m, fresh):
        owner = self.owner
        if owner in fresh or owner.env is None:
            return False if self.phase == "pre" else BLOCKED
        st = owner.env[self.name]
        phase = self.phase
        if phase == "pre":
            return st.pre_status
        if phase == "preval":
            return BLOCKED if st.pre_value is NO_VALUE else st.pre_value
        if st.status is None:
            return BLOCKED
        if phase == "now":
            return st.status
        if (st.status and not st.final) or st.value is NO_VALUE:
            return BLOCKED
        return st.value


class _CApply:
    __slots__ = ("fn", "args")

    def __init__(self, fn, args):
        self.fn = fn
        self.args = args

    def eval(self, m):
        vals = []
        blocked = False
        for a in self.args:
            v = a.eval(m)
            if v is BLOCKED:
                blocked = True
            vals.append(v)
        if blocked:
            return BLOCKED
        try:
            return self.fn(*vals)
        except HipHopError:
            raise
        except Exception as exc:  # noqa: BLE001
            raise HostError(f"{getattr(self.fn, '__name__', self.fn)!s} raised {exc!r}") from exc

    def peek(self, m, fresh):
        vals = []
        for a in self.args:
            v = a.peek(m, fresh)
            if v is BLOCKED:
                return BLOCKED
            vals.append(v)
        try:
            return self.fn(*vals)
        except Exception:  # noqa: BLE001
            return BLOCKED


def _peek_truth(v):
    if v is BLOCKED:
        return BLOCKED
    try:
        return bool(v)
    except Exception:  # noqa: BLE001
        return BLOCKED


# --------------------------------------------------------------------------
# runtime nodes


class _Node:
    __slots__ = ("stmt", "pos", "selected", "code", "resuming")

    def __init__(self, stmt, pos):
        self.stmt = stmt
        self.pos = pos
        self.selected = False
        self.code = None
        self.resuming = False

    def activate(self, m, resume: bool) -> None:
        self.code = None
        self.resuming = resume
        self._reset(m, resume)

    def _reset(self, m, resume):
        pass

    def step(self, m) -> Optional[int]:
        if self.code is None:
            c = self._step(m)
            if c is None:
                return None
            self.code = c
            self.selected = c == 1
        return self.code

    def can(self, m, mode, fresh) -> Tuple[set, set]:
        if mode is CURRENT and self.code is not None:
            return set(), {self.code}
        return self._can(m, mode, fresh)

    def live(self) -> Tuple["_Node", ...]:
        return ()


class _NothingI(_Node):
    __slots__ = ()

    def _step(self, m):
        return 0

    def _can(self, m, mode, fresh):
        return set(), {0}


class _PauseI(_Node):
    __slots__ = ()

    def _step(self, m):
        return 0 if self.resuming else 1

    def _can(self, m, mode, fresh):
        if mode is START or (mode is CURRENT and not self.resuming):
            return set(), {1}
        return set(), {0}


class _ExitI(_Node):
    __slots__ = ("depth",)

    def __init__(self, stmt, pos, depth):
        super().__init__(stmt, pos)
        self.depth = depth

    def _step(self, m):
        return 2 + self.depth

    def _can(self, m, mode, fresh):
        return set(), {2 + self.depth}


class _EmitI(_Node):
    __slots__ = ("owner", "name", "expr")

    def __init__(self, stmt, pos, owner, name, expr):
        super().__init__(stmt, pos)
        self.owner = owner
        self.name = name
        self.expr = expr

    def _step(self, m):
        v = NO_VALUE
        if self.expr is not None:
            v = self.expr.eval(m)
            if v is BLOCKED:
                return None
        m._emit(self.owner.env[self.name], v)
        return 0

    def _can(self, m, mode, fresh):
        if self.owner in fresh or self.owner.env is None:
            return set(), {0}
        return {self.owner.env[self.name]}, {0}


class _AtomView:
    """Read-only view of events handed to atom thunks."""

    __slots__ = ("_scope",)

    def __init__(self, scope):
        self._scope = scope

    def _state(self, event) -> EventState:
        name = event.name if isinstance(event, Event) else event
        try:
            owner = self._scope[name]
        except KeyError:
            raise HostError(f"atom reads unknown event {name!r}") from None
        return owner.env[name]

    def now(self, event) -> bool:
        st = self._state(event)
        if st.status is None:
            raise CausalityError(f"atom reads status of undecided event {st.name!r}")
        return st.status

    def pre(self, event) -> bool:
        return self._state(event).pre_status

    def val(self, event):
        st = self._state(event)
        if st.status is None:
            raise CausalityError(f"atom reads value of undecided event {st.name!r}")
        return read_value(st, "val")

    def preval(self, event):
        return read_value(self._state(event), "preval")


class _AtomI(_Node):
    __slots__ = ("view",)

    def __init__(self, stmt, pos, scope):
        super().__init__(stmt, pos)
        self.view = _AtomView(scope)

    def _step(self, m):
        try:
            self.stmt.thunk(self.view)
        except HipHopError:
            raise
        except Exception as exc:  # noqa: BLE001
            raise HostError(f"atom raised {exc!r}") from exc
        return 0

    def _can(self, m, mode, fresh):
        return set(), {0}


class _IfI(_Node):
    __slots__ = ("test", "branches", "taken", "chosen")

    def __init__(self, stmt, pos, test, then, else_):
        super().__init__(stmt, pos)
        self.test = test
        self.branches = (then, else_)
        self.taken = 0
        self.chosen = None

    def _reset(self, m, resume):
        if resume:
            self.chosen = self.taken
            self.branches[self.chosen].activate(m, True)
        else:
            self.chosen = None

    def _step(self, m):
        if self.chosen is None:
            t = self.test.eval(m)
            if t is BLOCKED:
                return None
            self.chosen = self.taken = 0 if _truth(t) else 1
            self.branches[self.chosen].activate(m, False)
        return self.branches[self.chosen].step(m)

    def _can(self, m, mode, fresh):
        if mode is RESUME:
            return self.branches[self.taken].can(m, RESUME, fresh)
        if mode is CURRENT and self.chosen is not None:
            return self.branches[self.chosen].can(m, CURRENT, fresh)
        t = _peek_truth(self.test.peek(m, fresh))
        if t is BLOCKED:
            s1, k1 = self.branches[0].can(m, START, fresh)
            s2, k2 = self.branches[1].can(m, START, fresh)
            return s1 | s2, k1 | k2
        return self.branches[0 if t else 1].can(m, START, fresh)

    def live(self):
        return (self.branches[self.taken],)


class _SeqI(_Node):
    __slots__ = ("children", "at", "idx")

    def __init__(self, stmt, pos, children):
        super().__init__(stmt, pos)
        self.children = children
        self.at = 0
        self.idx = 0

    def _reset(self, m, resume):
        self.idx = self.at if resume else 0
        self.children[self.idx].activate(m, resume)

    def _step(self, m):
        children = self.children
        while True:
            c = children[self.idx].step(m)
            if c is None:
                return None
            if c != 0:
                self.at = self.idx
                return c
            self.idx += 1
            if self.idx == len(children):
                return 0
            children[self.idx].activate(m, False)

    def _can(self, m, mode, fresh):
        if mode is START:
            first, i = START, 0
        elif mode is RESUME:
            first, i = RESUME, self.at
        else:
            first, i = CURRENT, self.idx
        s, k = self.children[i].can(m, first, fresh)
        if 0 not in k:
            return s, k
        k.discard(0)
        for child in self.children[i + 1:]:
            s2, k2 = child.can(m, START, fresh)
            s |= s2
            if 0 not in k2:
                return s, k | k2
            k |= k2 - {0}
        k.add(0)
        return s, k

    def live(self):
        return (self.children[self.at],)


class _LoopI(_Node):
    __slots__ = ("body", "fresh_start")

    def __init__(self, stmt, pos, body):
        super().__init__(stmt, pos)
        self.body = body
        self.fresh_start = True

    def _reset(self, m, resume):
        self.fresh_start = not resume
        self.body.activate(m, resume)

    def _step(self, m):
        while True:
            c = self.body.step(m)
            if c is None:
                return None
            if c != 0:
                return c
            if self.fresh_start:
                raise InstantaneousLoopError("loop body terminated in the reaction it started")
            self.body.activate(m, False)
            self.fresh_start = True

    def _can(self, m, mode, fresh):
        s, k = self.body.can(m, mode, fresh)
        if 0 in k:
            k.discard(0)
            if mode is not START:
                s2, k2 = self.body.can(m, START, fresh)
                s |= s2
                k |= k2 - {0}
        return s, k

    def live(self):
        return (self.body,)


class _ParI(_Node):
    __slots__ = ("children", "running")

    def __init__(self, stmt, pos, children):
        super().__init__(stmt, pos)
        self.children = children
        self.running = children

    def _reset(self, m, resume):
        if resume:
            self.running = tuple(c for c in self.children if c.selected)
        else:
            self.running = self.children
        for c in self.running:
            c.activate(m, resume)

    def _step(self, m):
        codes = []
        blocked = False
        for c in m._order(self.running):
            code = c.step(m)
            if code is None:
                blocked = True
            else:
                codes.append(code)
        if blocked:
            return None
        return par_code(codes)

    def _can(self, m, mode, fresh):
        if mode is START:
            pairs = ((c, START) for c in self.children)
        elif mode is RESUME:
            pairs = ((c, RESUME) for c in self.children if c.selected)
        else:
            pairs = ((c, CURRENT) for c in self.running)
        s, k = set(), {0}
        for c, md in pairs:
            s2, k2 = c.can(m, md, fresh)
            s |= s2
            k = _max_fold(k, k2)
        return s, k

    def live(self):
        return tuple(c for c in self.children if c.selected)


class _SuspendI(_Node):
    __slots__ = ("cond", "body", "decision")

    def __init__(self, stmt, pos, cond, body):
        super().__init__(stmt, pos)
        self.cond = cond
        self.body = body
        self.decision = None

    def _reset(self, m, resume):
        if resume:
            self.decision = None
        else:
            self.decision = "run"
            self.body.activate(m, False)

    def _step(self, m):
        if self.decision is None:
            t = self.cond.eval(m)
            if t is BLOCKED:
                return None
            if _truth(t):
                self.decision = "frozen"
                return 1
            self.decision = "run"
            self.body.activate(m, True)
        return self.body.step(m)

    def _can(self, m, mode, fresh):
        if mode is START:
            return self.body.can(m, START, fresh)
        if mode is CURRENT and self.decision == "run":
            return self.body.can(m, CURRENT, fresh)
        t = _peek_truth(self.cond.peek(m, fresh))
        if t is BLOCKED:
            s, k = self.body.can(m, RESUME, fresh)
            return s, k | {1}
        if t:
            return set(), {1}
        return self.body.can(m, RESUME, fresh)

    def live(self):
        return (self.body,)


class _TrapI(_Node):
    __slots__ = ("body",)

    def __init__(self, stmt, pos, body):
        super().__init__(stmt, pos)
        self.body = body

    def _reset(self, m, resume):
        self.body.activate(m, resume)

    def _step(self, m):
        c = self.body.step(m)
        return None if c is None else trap_code(c)

    def _can(self, m, mode, fresh):
        s, k = self.body.can(m, mode, fresh)
        return s, {trap_code(c) for c in k}

    def live(self):
        return (self.body,)


class _LocalI(_Node):
    __slots__ = ("decls", "body", "env")

    def __init__(self, stmt, pos, decls):
        super().__init__(stmt, pos)
        self.decls = decls
        self.body = None
        self.env = None

    def _reset(self, m, resume):
        if not resume or self.env is None:
            self.env = {e.name: new_state(e) for e in self.decls}
        m._locals[self] = self.env
        self.body.activate(m, resume)

    def _step(self, m):
        return self.body.step(m)

    def _can(self, m, mode, fresh):
        if mode is START:
            fresh = fresh | {self}
        return self.body.can(m, mode, fresh)

    def live(self):
        return (self.body,)


class _WithHopI(_Node):
    __slots__ = ("owner", "name", "service", "args", "call_args", "token")

    def __init__(self, stmt, pos, owner, name, args):
        super().__init__(stmt, pos)
        self.owner = owner
        self.name = name
        self.service = stmt.service
        self.args = args
        self.call_args = ()
        self.token = None

    def _step(self, m):
        if not self.resuming:
            vals = [a.eval(m) for a in self.args]
            if any(v is BLOCKED for v in vals):
                return None
            self.call_args = tuple(vals)
            self.token = None
            m._to_issue.append(self)
            return 1
        comp = m._take_completion(self.token)
        if comp is None:
            return 1
        if comp.ok:
            m._emit(self.owner.env[self.name], comp.value)
        return 0

    def _can(self, m, mode, fresh):
        if mode is START or (mode is CURRENT and not self.resuming):
            return set(), {1}
        comp = m._arrived.get(self.token)
        if comp is None:
            return set(), {1}
        if comp.ok and self.owner not in fresh:
            return {self.owner.env[self.name]}, {0}
        return set(), {0}


# --------------------------------------------------------------------------
# instantiation


def _labels_match(exit_label, trap_label) -> bool:
    if isinstance(exit_label, A.TrapLabel) or isinstance(trap_label, A.TrapLabel):
        return exit_label is trap_label
    return exit_label == trap_label


class _Builder:
    def __init__(self, iface: _Scope):
        self.iface = iface
        self.pos = itertools.count()
        self.hops = 0

    def expr(self, e, scope):
        if isinstance(e, A.Const):
            return _CConst(e.value)
        if isinstance(e, A.Apply):
            return _CApply(e.fn, tuple(self.expr(a, scope) for a in e.args))
        if isinstance(e, (A.Now, A.Pre, A.Val, A.Preval)):
            owner = self.lookup(e.event, scope)
            return _CRef(type(e).__name__.lower(), owner, e.event.name)
        raise AstError(f"not a signal expression: {e!r}")

    def lookup(self, event: Event, scope):
        owner = scope.get(event.name)
        if owner is None:
            raise LoadError(f"event {event.name!r} is not in the interface or any local scope")
        return owner

    def target(self, event: Event, scope):
        owner = self.lookup(event, scope)
        if owner is self.iface and owner.decls[event.name].kind is EventKind.INPUT:
            raise LoadError(f"input event {event.name!r} cannot be emitted by the program")
        return owner

    def body(self, stmt, children, scope, traps):
        nodes = tuple(self.build(c, scope, traps) for c in children)
        if len(nodes) == 1:
            return nodes[0]
        return _SeqI(None, next(self.pos), nodes)

    def build(self, s, scope, traps) -> _Node:
        pos = next(self.pos)
        if isinstance(s, A.Nothing):
            return _NothingI(s, pos)
        if isinstance(s, A.Pause):
            return _PauseI(s, pos)
        if isinstance(s, A.Emit):
            owner = self.target(s.event, scope)
            expr = None if s.value is None else self.expr(s.value, scope)
            return _EmitI(s, pos, owner, s.event.name, expr)
        if isinstance(s, A.Atom):
            return _AtomI(s, pos, scope)
        if isinstance(s, A.If):
            return _IfI(s, pos, self.expr(s.test, scope),
                        self.build(s.then, scope, traps), self.build(s.else_, scope, traps))
        if isinstance(s, A.Seq):
            return _SeqI(s, pos, tuple(self.build(c, scope, traps) for c in s.children))
        if isinstance(s, A.Par):
            return _ParI(s, pos, tuple(self.build(c, scope, traps) for c in s.children))
        if isinstance(s, A.Loop):
            return _LoopI(s, pos, self.body(s, s.children, scope, traps))
        if isinstance(s, A.Suspend):
            return _SuspendI(s, pos, self.expr(s.cond, scope),
                             self.body(s, s.children, scope, traps))
        if isinstance(s, A.Trap):
            return _TrapI(s, pos, self.body(s, s.children, scope, traps + [s.label]))
        if isinstance(s, A.Exit):
            for depth, label in enumerate(reversed(traps)):
                if _labels_match(s.label, label):
                    return _ExitI(s, pos, depth)
            raise AstError(f"exit {A.label_name(s.label)!r} has no enclosing trap")
        if isinstance(s, A.Local):
            node = _LocalI(s, pos, s.events)
            inner = dict(scope)
            for e in s.events:
                if e.name in scope:
                    raise DuplicateEventError(f"local event {e.name!r} shadows an outer event")
                inner[e.name] = node
            node.body = self.body(s, s.children, inner, traps)
            return node
        if isinstance(s, WithHop):
            owner = self.target(s.event, scope)
            self.hops += 1
            return _WithHopI(s, pos, owner, s.event.name,
                             tuple(self.expr(a, scope) for a in s.args))
        raise AstError(f"unknown statement {s!r}")


# --------------------------------------------------------------------------
# machine


class MachineStatus(str, enum.Enum):
    IDLE = "idle"
    TERMINATED = "terminated"
    ERRORED = "errored"


@dataclass
class ReactionReport:
    """Outcome of one reaction.

    ``outputs`` maps each present output event to its value (``None`` when
    the event never carried one). ``error`` is the error class name;
    ``exception`` keeps the exception itself and is excluded from equality.
    """

    reaction_index: int
    outputs: Dict[str, Any] = field(default_factory=dict)
    terminated: bool = False
    error: Optional[str] = None
    issued: Tuple[ServiceCall, ...] = ()
    cancelled: Tuple[int, ...] = ()
    completed: Tuple[int, ...] = ()
    exception: Optional[BaseException] = field(default=None, compare=False, repr=False)

    @property
    def present(self) -> frozenset:
        return frozenset(self.outputs)


class Machine:
    """A program bound to its input/output interface.

    Use :func:`load` to build one. ``scheduler_seed`` randomizes the order in
    which parallel branches are visited; results never depend on it.
    """

    def __init__(self, program: A.Statement, interface: Iterable[Event],
                 client=None, scheduler_seed: Optional[int] = None):
        if not isinstance(program, A.Statement):
            raise LoadError(f"program must be a Statement, got {program!r}")
        self.program = program
        self.interface = tuple(interface)
        names = set()
        for e in self.interface:
            if not isinstance(e, Event):
                raise LoadError(f"interface entry {e!r} is not an Event")
            if e.name in names:
                raise DuplicateEventError(f"duplicate interface event {e.name!r}")
            if e.kind not in (EventKind.INPUT, EventKind.OUTPUT):
                raise LoadError(f"interface event {e.name!r} must be an input or an output")
            names.add(e.name)
        self.client = client
        self._scheduler_seed = scheduler_seed
        self._lock = threading.Lock()
        self._listeners: List[Tuple[str, Callable[[Any], Any]]] = []
        self._tokens = itertools.count(1)
        self._instantiate()
        if self._has_hops and client is None:
            raise LoadError("program uses with_hop but no service client was given")

    # -- setup ------------------------------------------------------------

    def _instantiate(self) -> None:
        self._iface = _Scope(self.interface)
        builder = _Builder(self._iface)
        scope = {name: self._iface for name in self._iface.decls}
        self._root = builder.build(self.program, scope, [])
        self._has_hops = builder.hops > 0
        self._inputs = [self._iface.env[e.name] for e in self.interface if e.kind is EventKind.INPUT]
        self._decidable_iface = [self._iface.env[e.name] for e in self.interface
                                 if e.kind is EventKind.OUTPUT]
        self._outputs = [e.name for e in self.interface if e.kind is EventKind.OUTPUT]
        self._rng = None if self._scheduler_seed is None else random.Random(self._scheduler_seed)
        self.status = MachineStatus.IDLE
        self.reaction_index = 0
        self.dropped_completions = 0
        self._error: Optional[HipHopError] = None
        self._listener_error: Optional[HostError] = None
        self._pending_inputs: List[Tuple[str, Any]] = []
        self._completions: List[Completion] = []
        self._locals: Dict[_LocalI, Dict[str, EventState]] = {}
        self._outstanding: Dict[int, _WithHopI] = {}
        self._issued_tokens: set = set()
        self._cancelled: set = set()
        self._arrived: Dict[int, Completion] = {}
        self._consumed: set = set()
        self._to_issue: List[_WithHopI] = []
        self._progress = 0

    def _iface_event(self, event) -> Event:
        name = event.name if isinstance(event, Event) else event
        decl = self._iface.decls.get(name)
        if decl is None or (isinstance(event, Event) and event.kind is not decl.kind
                            and event.kind is not EventKind.LOCAL):
            return None
        return decl

    # -- host API -----------------------------------------------------------

    def input(self, event, value: Any = NO_VALUE) -> "Machine":
        """Queue ``event`` (with an optional value) for the next reaction."""
        decl = self._iface_event(event)
        if decl is None or decl.kind is not EventKind.INPUT:
            raise InputKindError(f"{event!r} is not an input of this machine")
        with self._lock:
            self._pending_inputs.append((decl.name, value))
        return self

    def input_and_react(self, event, value: Any = NO_VALUE) -> ReactionReport:
        if self.status is MachineStatus.ERRORED:
            return self.react()
        self.input(event, value)
        return self.react()

    def add_listener(self, event, callback: Callable[[Any], Any]) -> "Machine":
        """Call ``callback(value)`` after every reaction where ``event`` is present."""
        decl = self._iface_event(event)
        if decl is None or decl.kind is not EventKind.OUTPUT:
            raise ListenerKindError(f"{event!r} is not an output of this machine")
        self._listeners.append((decl.name, callback))
        return self

    def enqueue_response(self, completion: Completion) -> None:
        """Deliver a service completion; it is applied at the next reaction."""
        with self._lock:
            if completion.token in self._cancelled or completion.token not in self._issued_tokens:
                self.dropped_completions += 1
                return
            self._completions.append(completion)

    def pending_tokens(self) -> frozenset:
        with self._lock:
            return frozenset(self._outstanding)

    def reset(self) -> "Machine":
        """Return to the freshly loaded state. Outstanding requests are cancelled."""
        for token in sorted(self.pending_tokens()):
            self.client.cancel(token)
        self._instantiate()
        return self

    # -- reaction -----------------------------------------------------------

    def react(self) -> ReactionReport:
        if self.status is MachineStatus.ERRORED:
            return ReactionReport(self.reaction_index, error=type(self._error).__name__,
                                  exception=self._error)
        if self.status is MachineStatus.TERMINATED:
            return ReactionReport(self.reaction_index, terminated=True)
        with self._lock:
            inputs, self._pending_inputs = self._pending_inputs, []
            completions, self._completions = self._completions, []
        self.reaction_index += 1
        if self._listener_error is not None:
            return self._fail(self._listener_error)
        try:
            self._begin(inputs, completions)
            code = self._run()
            report = self._finish(code)
        except HipHopError as exc:
            return self._fail(exc)
        self._fire_listeners(report)
        return report

    def _fail(self, exc: HipHopError) -> ReactionReport:
        self.status = MachineStatus.ERRORED
        self._error = exc
        return ReactionReport(self.reaction_index, error=type(exc).__name__, exception=exc)

    def _order(self, nodes):
        if self._rng is None:
            return nodes
        nodes = list(nodes)
        self._rng.shuffle(nodes)
        return nodes

    def _states(self):
        yield from self._decidable_iface
        for env in self._locals.values():
            yield from env.values()

    def _begin(self, inputs, completions) -> None:
        for st in self._inputs:
            begin_reaction(st)
        for st in self._states():
            begin_reaction(st)
        self._consumed = set()
        self._to_issue = []
        for c in completions:
            if c.token in self._outstanding and c.token not in self._arrived:
                self._arrived[c.token] = c
            else:
                self.dropped_completions += 1
        for name, value in inputs:
            combine_emission(self._iface.env[name], value)
        for st in self._inputs:
            if st.status is None:
                st.status = False
            st.final = True
        self._root.activate(self, self._root.selected)

    def _run(self) -> int:
        root = self._root
        while True:
            before = self._progress
            code = root.step(self)
            if code is not None:
                return code
            if self._progress != before:
                continue
            if not self._resolve_stall():
                undecided = sorted({st.name for st in self._states() if st.status is None})
                raise CausalityError(
                    "no constructive resolution for " + (", ".join(undecided) or "event values"))

    def _resolve_stall(self) -> bool:
        can, _ = self._root.can(self, CURRENT, frozenset())
        changed = False
        for st in self._states():
            if st in can:
                continue
            if st.status is None:
                st.status = False
                st.final = True
                changed = True
            elif st.status and not st.final:
                st.final = True
                changed = True
        if changed:
            self._progress += 1
        return changed

    def _emit(self, state: EventState, value) -> None:
        if state.status is False or state.final:
            raise CausalityError(f"event {state.name!r} emitted after its status was fixed")
        try:
            combine_emission(state, value)
        except HipHopError:
            raise
        except Exception as exc:  # noqa: BLE001 - combiner is host code
            raise HostError(f"combiner of {state.name!r} raised {exc!r}") from exc
        self._progress += 1

    def _take_completion(self, token) -> Optional[Completion]:
        comp = self._arrived.pop(token, None)
        if comp is not None:
            self._consumed.add(token)
        return comp

    def _collect_live(self, node, hops, locals_) -> None:
        stack = [node]
        while stack:
            n = stack.pop()
            if isinstance(n, _WithHopI):
                hops.add(n)
            elif isinstance(n, _LocalI):
                locals_.add(n)
            stack.extend(n.live())

    def _finish(self, code: int) -> ReactionReport:
        hops, locals_ = set(), set()
        if code == 1:
            self._collect_live(self._root, hops, locals_)
        for st in self._inputs:
            end_reaction(st)
        for st in self._states():
            end_reaction(st)
        self._locals = {n: env for n, env in self._locals.items() if n in locals_}

        completed, cancelled = [], []
        with self._lock:
            for token, inst in list(self._outstanding.items()):
                if token in self._consumed:
                    completed.append(token)
                elif inst in hops and inst.token == token:
                    continue
                else:
                    cancelled.append(token)
                    self._cancelled.add(token)
                del self._outstanding[token]
            for token in list(self._arrived):
                if token not in self._outstanding:
                    del self._arrived[token]
                    self.dropped_completions += 1
        for token in sorted(cancelled):
            self.client.cancel(token)

        issued = []
        for inst in sorted(self._to_issue, key=lambda n: n.pos):
            if inst not in hops or inst.token is not None:
                continue
            token = next(self._tokens)
            inst.token = token
            call = ServiceCall(inst.service, inst.call_args, token)
            with self._lock:
                self._outstanding[token] = inst
                self._issued_tokens.add(token)
            issued.append(call)
            try:
                self.client.issue(call, self.enqueue_response)
            except Exception as exc:  # noqa: BLE001
                self.enqueue_response(Completion.failure(token, f"issue failed: {exc!r}"))

        outputs = {}
        for name in self._outputs:
            st = self._iface.env[name]
            if st.status:
                outputs[name] = None if st.value is NO_VALUE else st.value
        terminated = code != 1
        if terminated:
            self.status = MachineStatus.TERMINATED
        return ReactionReport(self.reaction_index, outputs, terminated,
                              issued=tuple(issued), cancelled=tuple(sorted(cancelled)),
                              completed=tuple(sorted(completed)))

    def _fire_listeners(self, report: ReactionReport) -> None:
        for name, callback in self._listeners:
            if name not in report.outputs:
                continue
            try:
                callback(report.outputs[name])
            except Exception as exc:  # noqa: BLE001
                if self._listener_error is None:
                    err = HostError(f"listener on {name!r} raised {exc!r}")
                    err.__cause__ = exc
                    self._listener_error = err


def load(program: A.Statement, interface: Iterable[Event], client=None,
         scheduler_seed: Optional[int] = None) -> Machine:
    return Machine(program, interface, client=client, scheduler_seed=scheduler_seed)


def react(machine: Machine) -> ReactionReport:
    return machine.react()


def free_events(stmt: A.Statement) -> List[Event]:
    """Events referenced by ``stmt`` that no enclosing ``local`` declares."""
    found: Dict[str, Event] = {}

    def visit(s, bound):
        if isinstance(s, A.Local):
            bound = bound | {e.name for e in s.events}
        evs = []
        if isinstance(s, A.Emit):
            evs.append(s.event)
            if s.value is not None:
                evs.extend(A.expr_events(s.value))
        elif isinstance(s, A.If):
            evs.extend(A.expr_events(s.test))
        elif isinstance(s, A.Suspend):
            evs.extend(A.expr_events(s.cond))
        elif isinstance(s, WithHop):
            evs.append(s.event)
            for a in s.args:
                evs.extend(A.expr_events(a))
        for e in evs:
            if e.name not in bound:
                found.setdefault(e.name, e)
        for c in A.children_of(s):
            visit(c, bound)

    visit(stmt, frozenset())
    return list(found.values())


def can_set(stmt: A.Statement, statuses: Optional[Mapping[str, Optional[bool]]] = None) -> frozenset:
    """Names of free events that ``stmt`` may emit if started now.

    ``statuses`` gives the known status of events (``True``/``False``); the
    rest are undecided. Undecided tests make both branches possible.
    """
    statuses = dict(statuses or {})
    iface = [Event(e.name, EventKind.OUTPUT, e.combiner) for e in free_events(stmt)]
    m = Machine.__new__(Machine)
    m.program = stmt
    m._scheduler_seed = None
    m.client = None
    m.interface = tuple(iface)
    m._instantiate()
    for name, st in m._iface.env.items():
        st.status = statuses.get(name)
        st.final = st.status is not None
    can, _ = m._root.can(m, START, frozenset())
    return frozenset(st.name for st in can if st in m._iface.env.values())
