"""Random kernel programs and input traces for differential testing."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Tuple

from hiphop import (TrapLabel, and_, emit, exit_, if_, input_event, local, local_event,
                    loop, not_, nothing, now, or_, output_event, par, pause, pre, seq,
                    suspend, trap)
from hiphop.ast import count_nodes

MAX_NODES = 12


@dataclass
class RandomProgram:
    program: object
    interface: tuple
    inputs: List[str]
    outputs: List[str]
    locals: List[str]


class _Gen:
    def __init__(self, rng: random.Random, safe: bool):
        self.rng = rng
        self.safe = safe
        self.ins = [input_event("A")]
        self.outs = [output_event("O"), output_event("P")]
        self.locs = []
        if rng.random() < 0.5:
            self.locs.append(local_event("L"))
        else:
            self.ins.append(input_event("B"))
        self.labels = 0

    def test(self, depth=0):
        rng = self.rng
        readable = self.ins if self.safe else self.ins + self.outs + self.locs
        r = rng.random()
        if depth < 2 and r < 0.25:
            op = rng.choice((and_, or_))
            return op(self.test(depth + 1), self.test(depth + 1))
        if depth < 2 and r < 0.35:
            return not_(self.test(depth + 1))
        if r < 0.55:
            return pre(rng.choice(self.ins + self.outs + self.locs))
        return now(rng.choice(readable))

    def stmt(self, budget: int, traps: Tuple[TrapLabel, ...]):
        rng = self.rng
        simple = ["nothing", "emit", "emit", "pause"] + (["exit"] if traps else [])
        compound = ["if", "seq", "loop", "par", "suspend", "trap"]
        kind = rng.choice(simple if budget <= 2 else simple + compound * 2)
        if kind == "nothing":
            return nothing()
        if kind == "emit":
            return emit(rng.choice(self.outs + self.locs))
        if kind == "pause":
            return pause()
        if kind == "exit":
            return exit_(rng.choice(traps))
        half = (budget - 1) // 2
        if kind == "if":
            return if_(self.test(), self.stmt(half, traps), self.stmt(half, traps))
        if kind == "seq":
            return seq(self.stmt(half, traps), self.stmt(half, traps))
        if kind == "par":
            return par(self.stmt(half, traps), self.stmt(half, traps))
        if kind == "loop":
            # A pause closing every iteration rules out instantaneous loops.
            return loop(seq(self.stmt(budget - 3, traps), pause()))
        if kind == "suspend":
            return suspend(self.test(), self.stmt(budget - 1, traps))
        self.labels += 1
        label = TrapLabel(f"T{self.labels}")
        return trap(label, self.stmt(budget - 1, traps + (label,)))


def random_program(rng: random.Random, safe: bool = False) -> RandomProgram:
    """A kernel program with at most ``MAX_NODES`` statements and at most 4 events.

    With ``safe`` set, ``now`` tests only read inputs, which makes every
    program constructive.
    """
    while True:
        g = _Gen(rng, safe)
        body = g.stmt(rng.randint(3, MAX_NODES), ())
        prog = local(g.locs, body) if g.locs else body
        if count_nodes(prog) <= MAX_NODES:
            break
    return RandomProgram(prog, tuple(g.ins + g.outs), [e.name for e in g.ins],
                         [e.name for e in g.outs], [e.name for e in g.locs])


def random_trace(rng: random.Random, inputs: List[str], length: int = 6) -> List[List[str]]:
    return [[n for n in inputs if rng.random() < 0.4] for _ in range(length)]
