"""Derived statements, written purely in terms of the kernel constructors."""

from __future__ import annotations

from .ast import (Statement, TrapLabel, as_cond, emit, exit_, if_, loop, nothing,
                  par, pause, seq, suspend, trap)
from .events import Event


def halt() -> Statement:
    """Pause forever."""
    return loop(pause())


def sustain(event: Event, value=None) -> Statement:
    """Emit ``event`` at every reaction."""
    return loop(emit(event, value), pause())


def await_(cond, *body: Statement) -> Statement:
    """Wait for ``cond`` to hold at a later reaction, then run ``body``.

    The starting reaction is never tested. ``cond`` may be an Event (its
    ``now`` status) or any signal expression.
    """
    done = TrapLabel("done")
    waiting = trap(done, loop(pause(), if_(as_cond(cond), exit_(done), nothing())))
    if not body:
        return waiting
    return seq(waiting, *body)


def abort(cond, *body: Statement) -> Statement:
    """Strong abortion: the body gets no control at the killing reaction."""
    cond = as_cond(cond)
    done = TrapLabel("done")
    return trap(done, par(suspend(cond, *body), await_(cond, exit_(done))))


def until(cond, *body: Statement) -> Statement:
    """Weak abortion: the body runs one last time at the killing reaction.

    Unlike :func:`abort`, the statement also terminates when its body does.
    """
    cond = as_cond(cond)
    done = TrapLabel("done")
    return trap(done, par(seq(*body, exit_(done)), await_(cond, exit_(done))))


def loop_each(cond, *body: Statement) -> Statement:
    """Start ``body``; strongly kill and restart it whenever ``cond`` holds."""
    return loop(abort(cond, *body, halt()))


def every(cond, *body: Statement) -> Statement:
    """Like :func:`loop_each`, but first wait for ``cond``."""
    cond = as_cond(cond)
    return seq(await_(cond), loop_each(cond, *body))
