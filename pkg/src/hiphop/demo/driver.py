"""Tick-clock host driver: a fake music player wrapped around the program."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from ..runtime import Machine, ReactionReport, load
from .hopfm import EVENTS, build_hopfm
from .services import Catalog, MockServices, load_catalog


class Player:
    """Plays one playlist at a time; a playlist arriving mid-play is queued."""

    def __init__(self):
        self.tracks: List[Dict[str, Any]] = []
        self.index = 0
        self.remaining = 0
        self.queued: Optional[List[Dict[str, Any]]] = None
        self.idle_ticks = 0

    @property
    def playing(self) -> bool:
        return bool(self.tracks)

    def offer(self, tracks) -> None:
        self.queued = list(tracks)

    def step(self) -> Optional[Dict[str, Any]]:
        """Advance one tick; return the track that starts now, if any."""
        if self.playing:
            self.remaining -= 1
            if self.remaining > 0:
                return None
            self.index += 1
            if self.index < len(self.tracks):
                return self._start()
            self.tracks = []
        if self.queued:
            self.tracks, self.queued, self.index = self.queued, None, 0
            return self._start()
        self.idle_ticks += 1
        return None

    def _start(self):
        self.idle_ticks = 0
        t = self.tracks[self.index]
        self.remaining = t["duration"]
        return t


@dataclass
class DemoRun:
    machine: Machine
    services: MockServices
    lines: List[str] = field(default_factory=list)
    reports: List[ReactionReport] = field(default_factory=list)
    terminated_at: Optional[int] = None

    @property
    def trace(self) -> str:
        return "".join(line + "\n" for line in self.lines)


def run_demo(seed: int = 0, ticks: int = 200, stop_at: Optional[int] = None,
             genre: str = "jazz", catalog: Optional[Catalog] = None,
             idle_limit: int = 40, idle_retry: int = 10, scheduler_seed: Optional[int] = None) -> DemoRun:
    """Run the player for ``ticks`` ticks (or until the program terminates).

    ``musicstate`` is ``play`` at tick 1 and ``stop`` at ``stop_at``. An idle
    player sends ``idle`` every ``idle_retry`` ticks, which starts a new
    artist search, and gives up with ``ended`` after ``idle_limit`` ticks.
    """
    catalog = catalog or load_catalog()
    gui_lines: List[str] = []
    program = build_hopfm(catalog, genre, EVENTS, gui_lines.append)
    services = MockServices(catalog, seed)
    machine = load(program, EVENTS.interface(), client=services,
                   scheduler_seed=scheduler_seed)
    player = Player()
    machine.add_listener(EVENTS.playlist, player.offer)
    run = DemoRun(machine, services)
    ended_sent = False

    for tick in range(1, ticks + 1):
        services.advance(tick)
        inputs: Dict[str, Any] = {}
        if tick == 1:
            inputs["musicstate"] = "play"
        elif tick == stop_at:
            inputs["musicstate"] = "stop"
        started = player.step() if tick > 1 else None
        if started is not None:
            inputs["track"] = started
        if "musicstate" not in inputs and not ended_sent:
            if player.idle_ticks >= idle_limit:
                inputs["musicstate"] = "ended"
                ended_sent = True
            elif player.idle_ticks % idle_retry == 1:
                inputs["musicstate"] = "idle"
        for name, value in inputs.items():
            machine.input(name, value)

        gui_lines.clear()
        report = machine.react()
        run.reports.append(report)
        calls = services.calls
        run.lines.append(json.dumps({
            "tick": tick,
            "inputs": inputs,
            "outputs": dict(sorted(report.outputs.items())),
            "gui": sorted(gui_lines),
            "issued": [[c.token, c.service_name] for c in report.issued],
            "completed": [[t, calls[t].service_name] for t in report.completed],
            "cancelled": [[t, calls[t].service_name] for t in report.cancelled],
            "terminated": report.terminated,
            "error": report.error,
        }))
        if report.error is not None:
            break
        if report.terminated:
            run.terminated_at = tick
            break

    run.lines.append(json.dumps({
        "summary": {
            "ticks": len(run.reports),
            "status": machine.status.value,
            "terminated_at": run.terminated_at,
            "pending_tokens": sorted(machine.pending_tokens()),
            "issued": len(services.calls),
            "cancelled": len(services.cancelled),
            "dropped": machine.dropped_completions,
        }
    }))
    return run
