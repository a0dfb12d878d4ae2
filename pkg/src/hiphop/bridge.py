"""Asynchronous service requests driven from reactive programs.

A :func:`with_hop` statement issues a request through a host-supplied
:class:`ServiceClient` and pauses. The client reports back with a
:class:`Completion` through the machine's :meth:`enqueue_response`; the
completion is applied at the next reaction. Killing a pending ``with_hop``
cancels its request.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Optional, Protocol, Tuple

from .ast import SignalExpr, Statement, as_expr
from .errors import AstError
from .events import Event


@dataclass(frozen=True)
class ServiceCall:
    service_name: str
    args: Tuple[Any, ...]
    token: int


@dataclass(frozen=True)
class Completion:
    token: int
    ok: bool
    value: Any = None
    reason: Optional[str] = None

    @classmethod
    def success(cls, token: int, value: Any) -> "Completion":
        return cls(token, True, value)

    @classmethod
    def failure(cls, token: int, reason: str = "failed") -> "Completion":
        return cls(token, False, None, reason)


Sink = Callable[[Completion], None]


class ServiceClient(Protocol):
    """Host seam. ``issue`` must return immediately; completions go to ``sink``."""

    def issue(self, call: ServiceCall, sink: Sink) -> None: ...

    def cancel(self, token: int) -> None: ...


@dataclass(frozen=True)
class WithHop(Statement):
    service: str
    args: Tuple[SignalExpr, ...]
    event: Event
    kind = "with_hop"

    def sexpr_extra(self):
        return (self.service, self.event.name)


def with_hop(service: str, args, event: Event) -> WithHop:
    """Request ``service(*args)``; emit ``event`` with the response on success.

    ``args`` are signal expressions (or plain values) evaluated when the
    request is issued. On failure the statement terminates silently.
    """
    if not isinstance(service, str) or not service:
        raise AstError("with_hop needs a service name")
    if not isinstance(event, Event):
        raise AstError(f"with_hop target must be an Event, got {event!r}")
    return WithHop(service, tuple(as_expr(a) for a in args), event)


def enqueue_response(machine, completion: Completion) -> None:
    machine.enqueue_response(completion)


def pending_tokens(machine) -> frozenset:
    return machine.pending_tokens()


class ScriptedClient:
    """Client that only records calls; completions are delivered by the caller.

    Each call gets an alias ``"<service>#<n>"`` where ``n`` counts the calls
    to that service, so scripted tests can address requests stably.
    """

    def __init__(self):
        self.calls: dict[int, ServiceCall] = {}
        self.aliases: dict[int, str] = {}
        self.by_alias: dict[str, int] = {}
        self.cancelled: list[int] = []
        self._counts: dict[str, int] = {}
        self.sink: Optional[Sink] = None

    def issue(self, call: ServiceCall, sink: Sink) -> None:
        n = self._counts.get(call.service_name, 0) + 1
        self._counts[call.service_name] = n
        alias = f"{call.service_name}#{n}"
        self.calls[call.token] = call
        self.aliases[call.token] = alias
        self.by_alias[alias] = call.token
        self.sink = sink

    def cancel(self, token: int) -> None:
        self.cancelled.append(token)

    def complete(self, alias: str, ok: bool = True, value: Any = None) -> None:
        token = self.by_alias[alias]
        completion = Completion.success(token, value) if ok else Completion.failure(token)
        self.sink(completion)
