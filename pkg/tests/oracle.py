"""Reference semantics for pure kernel programs, independent of the runtime.

Programs are converted to residual terms (plain tuples). One reaction of a
term under a *complete* status assignment is computed by a straightforward
two-valued interpreter returning ``(emitted, code, residual)``.

``solutions`` enumerates every assignment of the non-input events and keeps
the coherent ones: exactly the assigned-present events get emitted.
``constructive`` runs the ternary Must/Can fixpoint; it returns the decided
assignment, or ``None`` when some event stays undecided.

Supported: nothing, emit (no value), pause, if, seq, loop, par, suspend,
trap/exit and a ``local`` at the root. Tests use now/pre/not/and/or.
"""

from __future__ import annotations

import itertools

from hiphop import ast as A


class OracleLoopError(Exception):
    pass


# --------------------------------------------------------------------------
# conversion


def _test(e):
    if isinstance(e, A.Const):
        return ("const", bool(e.value))
    if isinstance(e, A.Now):
        return ("now", e.event.name)
    if isinstance(e, A.Pre):
        return ("pre", e.event.name)
    if isinstance(e, A.Apply):
        args = [_test(a) for a in e.args]
        if e.fn is A._not:
            return ("not", args[0])
        if e.fn is A._and:
            return ("and", args)
        if e.fn is A._or:
            return ("or", args)
    raise ValueError(f"unsupported test {e!r}")


def _body(children, traps):
    terms = [convert(c, traps) for c in children]
    return terms[0] if len(terms) == 1 else ("seq", terms)


def convert(s, traps=()):
    if isinstance(s, A.Nothing):
        return ("nothing",)
    if isinstance(s, A.Emit):
        return ("emit", s.event.name)
    if isinstance(s, A.Pause):
        return ("pause",)
    if isinstance(s, A.If):
        return ("if", _test(s.test), convert(s.then, traps), convert(s.else_, traps))
    if isinstance(s, A.Seq):
        return ("seq", [convert(c, traps) for c in s.children])
    if isinstance(s, A.Loop):
        return ("loop", _body(s.children, traps))
    if isinstance(s, A.Par):
        return ("par", [convert(c, traps) for c in s.children])
    if isinstance(s, A.Suspend):
        return ("susp", _test(s.cond), _body(s.children, traps), False)
    if isinstance(s, A.Trap):
        return ("trap", _body(s.children, traps + (s.label,)))
    if isinstance(s, A.Exit):
        for depth, label in enumerate(reversed(traps)):
            if label is s.label or (isinstance(label, str) and label == s.label):
                return ("exit", depth)
        raise ValueError("unbound exit")
    raise ValueError(f"unsupported statement {s!r}")


def split_root(program):
    """(local names, term) for a program optionally wrapped in one local."""
    if isinstance(program, A.Local):
        return [e.name for e in program.events], _body(program.children, ())
    return [], convert(program)


# --------------------------------------------------------------------------
# two-valued reaction


def eval2(t, env, pre):
    tag = t[0]
    if tag == "const":
        return t[1]
    if tag == "now":
        return env[t[1]]
    if tag == "pre":
        return pre.get(t[1], False)
    if tag == "not":
        return not eval2(t[1], env, pre)
    if tag == "and":
        return all(eval2(a, env, pre) for a in t[1])
    return any(eval2(a, env, pre) for a in t[1])


def _trap_code(k):
    return k if k <= 1 else (0 if k == 2 else k - 1)


def react2(p, env, pre):
    tag = p[0]
    if tag == "nothing":
        return set(), 0, None
    if tag == "emit":
        return {p[1]}, 0, None
    if tag == "pause":
        return set(), 1, ("nothing",)
    if tag == "exit":
        return set(), 2 + p[1], None
    if tag == "if":
        return react2(p[2] if eval2(p[1], env, pre) else p[3], env, pre)
    if tag == "seq":
        first, rest = p[1][0], p[1][1:]
        e, k, r = react2(first, env, pre)
        if k == 0:
            if not rest:
                return e, 0, None
            e2, k2, r2 = react2(("seq", rest), env, pre)
            return e | e2, k2, r2
        if k == 1:
            return e, 1, ("seq", [r] + list(rest))
        return e, k, None
    if tag == "loop":
        e, k, r = react2(p[1], env, pre)
        if k == 0:
            raise OracleLoopError()
        if k == 1:
            return e, 1, ("seq", [r, p])
        return e, k, None
    if tag == "par":
        emitted, codes, residual = set(), [], []
        for c in p[1]:
            e, k, r = react2(c, env, pre)
            emitted |= e
            codes.append(k)
            if k == 1:
                residual.append(r)
        k = max(codes)
        return emitted, k, (("par", residual) if k == 1 else None)
    if tag == "susp":
        _, cond, body, started = p
        if started and eval2(cond, env, pre):
            return set(), 1, p
        e, k, r = react2(body, env, pre)
        return e, k, (("susp", cond, r, True) if k == 1 else None)
    if tag == "trap":
        e, k, r = react2(p[1], env, pre)
        return e, _trap_code(k), (("trap", r) if k == 1 else None)
    raise ValueError(tag)


def solutions(p, inputs_present, non_inputs, pre):
    """All coherent assignments ``{name: bool}`` of the non-input events."""
    out = []
    for bits in itertools.product((False, True), repeat=len(non_inputs)):
        env = dict(inputs_present)
        env.update(zip(non_inputs, bits))
        try:
            emitted, _, _ = react2(p, env, pre)
        except OracleLoopError:
            continue
        if all(env[n] == (n in emitted) for n in non_inputs):
            out.append({n: env[n] for n in non_inputs})
    return out


# --------------------------------------------------------------------------
# ternary Must / Can


def eval3(t, env, pre):
    tag = t[0]
    if tag == "const":
        return t[1]
    if tag == "now":
        return env[t[1]]
    if tag == "pre":
        return pre.get(t[1], False)
    vals = [eval3(a, env, pre) for a in (t[1] if tag != "not" else [t[1]])]
    if any(v is None for v in vals):
        return None
    if tag == "not":
        return not vals[0]
    return all(vals) if tag == "and" else any(vals)


def must(p, env, pre):
    """(events surely emitted, code if surely known else None)."""
    tag = p[0]
    if tag == "nothing":
        return set(), 0
    if tag == "emit":
        return {p[1]}, 0
    if tag == "pause":
        return set(), 1
    if tag == "exit":
        return set(), 2 + p[1]
    if tag == "if":
        v = eval3(p[1], env, pre)
        if v is None:
            return set(), None
        return must(p[2] if v else p[3], env, pre)
    if tag == "seq":
        m, k = must(p[1][0], env, pre)
        if k == 0 and len(p[1]) > 1:
            m2, k2 = must(("seq", p[1][1:]), env, pre)
            return m | m2, k2
        return m, k
    if tag == "loop":
        return must(p[1], env, pre)
    if tag == "par":
        m, ks = set(), []
        for c in p[1]:
            mc, kc = must(c, env, pre)
            m |= mc
            ks.append(kc)
        return m, (None if None in ks else max(ks))
    if tag == "susp":
        _, cond, body, started = p
        if started:
            v = eval3(cond, env, pre)
            if v is None:
                return set(), None
            if v:
                return set(), 1
        return must(body, env, pre)
    if tag == "trap":
        m, k = must(p[1], env, pre)
        return m, (None if k is None else _trap_code(k))
    raise ValueError(tag)


def can(p, env, pre):
    """(events possibly emitted, possible codes), pruned by known codes."""
    emitted, codes = _can(p, env, pre)
    k = must(p, env, pre)[1]
    if k is not None:
        codes = {k}
    return emitted, codes


def _can(p, env, pre):
    tag = p[0]
    if tag == "nothing":
        return set(), {0}
    if tag == "emit":
        return {p[1]}, {0}
    if tag == "pause":
        return set(), {1}
    if tag == "exit":
        return set(), {2 + p[1]}
    if tag == "if":
        v = eval3(p[1], env, pre)
        if v is None:
            c1, k1 = can(p[2], env, pre)
            c2, k2 = can(p[3], env, pre)
            return c1 | c2, k1 | k2
        return can(p[2] if v else p[3], env, pre)
    if tag == "seq":
        c, k = can(p[1][0], env, pre)
        if 0 in k and len(p[1]) > 1:
            c2, k2 = can(("seq", p[1][1:]), env, pre)
            return c | c2, (k - {0}) | k2
        return c, k
    if tag == "loop":
        c, k = can(p[1], env, pre)
        return c, k - {0}
    if tag == "par":
        c, ks = set(), {0}
        for ch in p[1]:
            cc, kc = can(ch, env, pre)
            c |= cc
            ks = {max(a, b) for a in ks for b in kc}
        return c, ks
    if tag == "susp":
        _, cond, body, started = p
        if started:
            v = eval3(cond, env, pre)
            if v:
                return set(), {1}
            if v is None:
                c, k = can(body, env, pre)
                return c, k | {1}
        return can(body, env, pre)
    if tag == "trap":
        c, k = can(p[1], env, pre)
        return c, {_trap_code(x) for x in k}
    raise ValueError(tag)


def constructive(p, inputs_present, non_inputs, pre):
    """Ternary fixpoint; the full assignment if every event gets decided."""
    env = dict(inputs_present)
    env.update({n: None for n in non_inputs})
    while True:
        changed = False
        m, _ = must(p, env, pre)
        for n in non_inputs:
            if env[n] is None and n in m:
                env[n] = True
                changed = True
        c, _ = can(p, env, pre)
        for n in non_inputs:
            if env[n] is None and n not in c:
                env[n] = False
                changed = True
        if not changed:
            break
    if any(env[n] is None for n in non_inputs):
        return None
    return {n: env[n] for n in non_inputs}
