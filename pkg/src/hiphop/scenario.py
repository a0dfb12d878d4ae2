"""Tick-scripted scenarios: replay inputs and completions, check expectations, trace.

A scenario file is JSON Lines. The first line is a header
``{"program": "<id>"}`` (optionally ``"seed": n``); every following line is
one tick::

    {"inputs": [{"event": "A"}, {"event": "V", "value": 3}],
     "completions": [{"token_alias": "echo#1", "outcome": "success", "value": "pong"}],
     "expect_present": ["O"], "expect_absent": ["P"], "expect_values": {"O": 3},
     "expect_error": "CausalityError", "expect_terminated": true}

Every key of a tick is optional. Completions are addressed by the alias
``<service>#<n>`` of the n-th request to that service.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from . import registry
from .bridge import ScriptedClient
from .errors import HipHopError
from .runtime import ReactionReport, load

TICK_KEYS = ("inputs", "completions", "expect_present", "expect_absent",
             "expect_values", "expect_error", "expect_terminated")


class ScenarioError(Exception):
    """The scenario file is malformed or names an unknown program."""


@dataclass
class Tick:
    inputs: List[Dict[str, Any]] = field(default_factory=list)
    completions: List[Dict[str, Any]] = field(default_factory=list)
    expect_present: List[str] = field(default_factory=list)
    expect_absent: List[str] = field(default_factory=list)
    expect_values: Dict[str, Any] = field(default_factory=dict)
    expect_error: Optional[str] = None
    expect_terminated: Optional[bool] = None


@dataclass
class Scenario:
    program_id: str
    ticks: List[Tick]
    seed: int = 0


@dataclass
class Outcome:
    trace: List[str]
    failures: List[str]

    @property
    def ok(self) -> bool:
        return not self.failures


def _tick(obj, where: str) -> Tick:
    if not isinstance(obj, dict):
        raise ScenarioError(f"{where}: a tick must be an object")
    unknown = set(obj) - set(TICK_KEYS)
    if unknown:
        raise ScenarioError(f"{where}: unknown keys {sorted(unknown)}")
    t = Tick(**obj)
    for name in ("inputs", "completions", "expect_present", "expect_absent"):
        if not isinstance(getattr(t, name), list):
            raise ScenarioError(f"{where}: {name} must be a list")
    for i in t.inputs:
        if not isinstance(i, dict) or not isinstance(i.get("event"), str):
            raise ScenarioError(f"{where}: input entries need an 'event' string")
    for c in t.completions:
        if (not isinstance(c, dict) or not isinstance(c.get("token_alias"), str)
                or c.get("outcome") not in ("success", "failure")):
            raise ScenarioError(f"{where}: completions need token_alias and outcome")
    if not isinstance(t.expect_values, dict):
        raise ScenarioError(f"{where}: expect_values must be an object")
    if set(t.expect_present) & set(t.expect_absent):
        raise ScenarioError(f"{where}: an event is expected both present and absent")
    return t


def parse_ticks(lines: List[str], where: str = "<scenario>") -> List[Tick]:
    ticks = []
    for n, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except ValueError as exc:
            raise ScenarioError(f"{where}:{n}: {exc}") from None
        ticks.append(_tick(obj, f"{where}:{n}"))
    return ticks


def _split_header(text: str, where: str):
    lines = text.splitlines()
    first = next((i for i, l in enumerate(lines) if l.strip()), None)
    if first is None:
        return None, []
    try:
        head = json.loads(lines[first])
    except ValueError as exc:
        raise ScenarioError(f"{where}:{first + 1}: {exc}") from None
    if isinstance(head, dict) and "program" in head:
        return head, lines[first + 1:]
    return None, lines


def parse_scenario(text: str, where: str = "<scenario>") -> Scenario:
    head, rest = _split_header(text, where)
    if head is None:
        raise ScenarioError(f"{where}: missing header line with 'program'")
    pid = head["program"]
    if not isinstance(pid, str):
        raise ScenarioError(f"{where}: program id must be a string")
    ticks = parse_ticks(rest, where)
    if not ticks:
        raise ScenarioError(f"{where}: scenario has no ticks")
    seed = head.get("seed", 0)
    if not isinstance(seed, int):
        raise ScenarioError(f"{where}: seed must be an integer")
    return Scenario(pid, ticks, seed)


def load_scenario(path: str) -> Scenario:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc}") from None
    return parse_scenario(text, path)


def _plain(value):
    """JSON-compatible copy of a host value (tuples become lists)."""
    return json.loads(json.dumps(value, default=repr))


def trace_line(report: ReactionReport, client: ScriptedClient) -> str:
    return json.dumps({
        "reaction": report.reaction_index,
        "outputs": _plain(dict(sorted(report.outputs.items()))),
        "terminated": report.terminated,
        "error": report.error,
        "issued": [client.aliases[c.token] for c in report.issued],
        "cancelled": [client.aliases[t] for t in report.cancelled],
    })


def _check(tick: Tick, report: ReactionReport, idx: int) -> List[str]:
    out = []
    present = set(report.outputs)

    def fail(what, expected, actual):
        out.append(f"reaction {idx}: {what}: expected {expected!r}, got {actual!r}")

    for name in tick.expect_present:
        if name not in present:
            fail(f"{name} present", True, False)
    for name in tick.expect_absent:
        if name in present:
            fail(f"{name} absent", True, False)
    for name, want in tick.expect_values.items():
        got = _plain(report.outputs[name]) if name in present else None
        if name not in present or got != want:
            fail(f"value of {name}", want, got)
    if report.error != tick.expect_error:
        fail("error", tick.expect_error, report.error)
    if tick.expect_terminated is not None and report.terminated != tick.expect_terminated:
        fail("terminated", tick.expect_terminated, report.terminated)
    return out


def execute(program_id: str, ticks: List[Tick], seed: int = 0) -> Outcome:
    """Run ``ticks`` against a registered program; never raises on mismatches."""
    try:
        entry = registry.get(program_id)
    except KeyError:
        raise ScenarioError(f"unknown program {program_id!r}") from None
    program, interface = entry.build(seed)
    client = ScriptedClient()
    machine = load(program, interface, client=client, scheduler_seed=seed)
    trace, failures = [], []
    for n, tick in enumerate(ticks, 1):
        try:
            for c in tick.completions:
                client.complete(c["token_alias"], c["outcome"] == "success", c.get("value"))
            for i in tick.inputs:
                if "value" in i:
                    machine.input(i["event"], i["value"])
                else:
                    machine.input(i["event"])
        except KeyError as exc:
            failures.append(f"reaction {n}: unknown token alias {exc.args[0]!r}")
            break
        except HipHopError as exc:
            failures.append(f"reaction {n}: {type(exc).__name__}: {exc}")
            break
        report = machine.react()
        trace.append(trace_line(report, client))
        failures.extend(_check(tick, report, n))
    return Outcome(trace, failures)


def run_scenario(scenario: Scenario) -> Outcome:
    return execute(scenario.program_id, scenario.ticks, scenario.seed)
