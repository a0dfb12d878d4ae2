"""Built-in programs addressable by id from scenarios and the command line."""

from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Callable, Dict, Tuple

from .ast import (Statement, TrapLabel, apply, emit, exit_, if_, local, loop, nothing,
                  now, par, pause, seq, suspend, trap, val)
from .bridge import with_hop
from .derived import abort, await_, every, halt, loop_each, sustain, until
from .events import Event, input_event, local_event, output_event

Built = Tuple[Statement, Tuple[Event, ...]]


@dataclass(frozen=True)
class Entry:
    program_id: str
    description: str
    build: Callable[[int], Built]


_REGISTRY: Dict[str, Entry] = {}


def register(program_id: str, description: str):
    def deco(fn: Callable[[int], Built]):
        if program_id in _REGISTRY:
            raise ValueError(f"program id {program_id!r} registered twice")
        _REGISTRY[program_id] = Entry(program_id, description, fn)
        return fn
    return deco


def get(program_id: str) -> Entry:
    return _REGISTRY[program_id]


def program_ids():
    return sorted(_REGISTRY)


def entries():
    return [_REGISTRY[k] for k in program_ids()]


def _ins(*names):
    return tuple(input_event(n) for n in names)


def _outs(*names, **combiners):
    return tuple(output_event(n, combiners.get(n)) for n in names)


def _times10(x):
    return x * 10


@register("nothing", "nothing(): terminates in the first reaction")
def _nothing(seed):
    return nothing(), ()


@register("seq-await", "seq(await A, await B, emit O): O in the reaction triggered by B")
def _seq_await(seed):
    A, B = _ins("A", "B")
    (O,) = _outs("O")
    return seq(await_(A), await_(B), emit(O)), (A, B, O)


@register("par-await", "seq(par(await A, await B), emit O): O when the last of A, B occurs")
def _par_await(seed):
    A, B = _ins("A", "B")
    (O,) = _outs("O")
    return seq(par(await_(A), await_(B)), emit(O)), (A, B, O)


@register("seq-emit", "seq(emit A, emit B): both in the same reaction")
def _seq_emit(seed):
    A, B = _outs("A", "B")
    return seq(emit(A), emit(B)), (A, B)


@register("seq-pause", "seq(emit A, pause, emit B): A then B in successive reactions")
def _seq_pause(seed):
    A, B = _outs("A", "B")
    return seq(emit(A), pause(), emit(B)), (A, B)


@register("loop-pause-emit", "loop(pause, emit A): A at every reaction from the second on")
def _loop_pause_emit(seed):
    (A,) = _outs("A")
    return loop(pause(), emit(A)), (A,)


@register("suspend-freeze", "suspend(now A, loop(emit B, pause)): B except where A is present")
def _suspend_freeze(seed):
    (A,) = _ins("A")
    (B,) = _outs("B")
    return suspend(now(A), loop(emit(B), pause())), (A, B)


@register("trap-par-exit",
          "exit from one branch; the sibling still runs in the exiting reaction")
def _trap_par_exit(seed):
    (A,) = _ins("A")
    O, X = _outs("O", "X")
    t = TrapLabel("T")
    body = par(seq(await_(A), exit_(t)), loop(emit(O), pause()))
    return seq(trap(t, body), emit(X)), (A, O, X)


@register("nested-traps", "simultaneous exits: the outermost trap wins")
def _nested_traps(seed):
    I, O = _outs("I", "O")
    outer, inner = TrapLabel("outer"), TrapLabel("inner")
    prog = seq(trap(outer, trap(inner, par(exit_(inner), exit_(outer))), emit(I)), emit(O))
    return prog, (I, O)


@register("halt", "seq(emit O, halt): O once, never terminates")
def _halt(seed):
    (O,) = _outs("O")
    return seq(emit(O), halt()), (O,)


@register("sustain", "sustain(O): O at every reaction")
def _sustain(seed):
    (O,) = _outs("O")
    return sustain(O), (O,)


@register("await", "await(A, emit O): the starting reaction is not tested")
def _await(seed):
    (A,) = _ins("A")
    (O,) = _outs("O")
    return await_(A, emit(O)), (A, O)


@register("abort-sustain", "abort(A, sustain B) then emit D")
def _abort_sustain(seed):
    (A,) = _ins("A")
    B, D = _outs("B", "D")
    return seq(abort(A, sustain(B)), emit(D)), (A, B, D)


@register("until-sustain", "until(A, sustain B) then emit D")
def _until_sustain(seed):
    (A,) = _ins("A")
    B, D = _outs("B", "D")
    return seq(until(A, sustain(B)), emit(D)), (A, B, D)


@register("abort-vs-until", "abort and until on the same condition side by side")
def _abort_vs_until(seed):
    (A,) = _ins("A")
    SA, SU, DA, DU = _outs("SA", "SU", "DA", "DU")
    return par(seq(abort(A, sustain(SA)), emit(DA)),
               seq(until(A, sustain(SU)), emit(DU))), (A, SA, SU, DA, DU)


@register("loop-each", "loop_each(A, emit O, pause, emit P): restarted by A")
def _loop_each(seed):
    (A,) = _ins("A")
    O, P = _outs("O", "P")
    return loop_each(A, emit(O), pause(), emit(P)), (A, O, P)


@register("every", "every(A, emit O, pause, emit P): waits for A first")
def _every(seed):
    (A,) = _ins("A")
    O, P = _outs("O", "P")
    return every(A, emit(O), pause(), emit(P)), (A, O, P)


@register("score-combine", "three valued emissions folded by +, read once final")
def _score_combine(seed):
    S, T = _outs("S", "T", S=operator.add)
    prog = par(emit(S, 1), emit(T, apply(_times10, val(S))), emit(S, 2), emit(S, 3))
    return prog, (S, T)


@register("causality-paradox", "local L: if(now L, nothing, emit L) has no coherent status")
def _causality_paradox(seed):
    (O,) = _outs("O")
    L = local_event("L")
    return local([L], if_(now(L), nothing(), emit(L)), emit(O)), (O,)


@register("instantaneous-loop", "loop(emit O): body terminates instantly")
def _instantaneous_loop(seed):
    (O,) = _outs("O")
    return loop(emit(O)), (O,)


@register("local-memo", "local values persist when the event is absent")
def _local_memo(seed):
    (O,) = _outs("O")
    L = local_event("L")
    return local([L], emit(L, 5), pause(), emit(O, val(L))), (O,)


@register("with-hop-basic", "with_hop(echo, R) then report success or failure")
def _with_hop_basic(seed):
    R, OK, FAIL = _outs("R", "OK", "FAIL")
    prog = seq(with_hop("echo", ["ping"], R), if_(now(R), emit(OK), emit(FAIL)))
    return prog, (R, OK, FAIL)


def _demo():
    from .demo import hopfm, services
    return hopfm, services


@register("image-race", "two image requests; the first success cancels the other")
def _image_race(seed):
    hopfm, _ = _demo()
    (artist,) = _ins("artist")
    (IMG,) = _outs("IMG")
    race = hopfm.artist_image_race(artist, image=IMG)
    return await_(artist, race), (artist, IMG)


@register("random-playlist", "random artists until one has tracks")
def _random_playlist(seed):
    hopfm, services = _demo()
    (playlist,) = _outs("playlist")
    return hopfm.random_playlist(services.load_catalog(), "jazz", playlist), (playlist,)


@register("artist-info", "every artist change restarts similar/bio/discog/image lookups")
def _artist_info(seed):
    hopfm, _ = _demo()
    (artist,) = _ins("artist")
    bio, discog, similar, playlist = _outs("bio", "discog", "similar", "playlist")
    prog = hopfm.artist_info(artist, bio, discog, similar, playlist)
    return prog, (artist, bio, discog, similar, playlist)


@register("hopfm", "the whole player program, stopped by musicstate")
def _hopfm(seed):
    hopfm, services = _demo()
    return hopfm.build_hopfm(services.load_catalog(), "jazz"), hopfm.EVENTS.interface()
