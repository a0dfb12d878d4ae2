"""Engine-versus-oracle comparison over one input trace."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List

from hiphop import load

import oracle


@dataclass
class Comparison:
    divergences: List[str] = field(default_factory=list)
    causality_errors: int = 0
    engine_only: int = 0  # engine decided where the ternary fixpoint stalls
    reactions: int = 0


def compare(rp, trace, scheduler_seed=None, result=None) -> Comparison:
    result = result or Comparison()
    machine = load(rp.program, rp.interface, scheduler_seed=scheduler_seed)
    _, term = oracle.split_root(rp.program)
    non_inputs = rp.outputs + rp.locals
    pre = {}
    for n, present in enumerate(trace, 1):
        for name in present:
            machine.input(name)
        report = machine.react()
        result.reactions += 1
        ins = {name: name in present for name in rp.inputs}
        sols = oracle.solutions(term, ins, non_inputs, pre)
        cons = oracle.constructive(term, ins, non_inputs, pre)
        if cons is not None and cons not in sols:
            cons = None
        where = f"reaction {n} of {trace}"

        if report.error == "CausalityError":
            result.causality_errors += 1
            if len(sols) == 1 and cons is not None:
                result.divergences.append(f"{where}: CausalityError but unique constructive solution {cons}")
            return result
        if report.error is not None:
            result.divergences.append(f"{where}: unexpected {report.error}")
            return result

        proj = {o: o in report.outputs for o in rp.outputs}
        matching = [s for s in sols if all(s[o] == proj[o] for o in rp.outputs)]
        if not matching:
            result.divergences.append(f"{where}: outputs {sorted(report.outputs)} not among {sols}")
            return result
        if cons is not None:
            if any(cons[o] != proj[o] for o in rp.outputs):
                result.divergences.append(f"{where}: constructive {cons} but engine {proj}")
                return result
            chosen = cons
        else:
            result.engine_only += 1
            if len(matching) != 1:
                return result
            chosen = matching[0]

        env = dict(ins)
        env.update(chosen)
        _, code, term = oracle.react2(term, env, pre)
        if report.terminated != (code != 1):
            result.divergences.append(f"{where}: terminated={report.terminated}, oracle code {code}")
            return result
        pre = env
        if code != 1:
            return result
    return result
