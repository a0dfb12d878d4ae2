from hiphop import load


def outputs_over(program, interface, trace, **kw):
    """Sorted present outputs per reaction; inputs given as lists of names."""
    m = load(program, interface, **kw)
    out = []
    for present in trace:
        for name in present:
            m.input(name)
        r = m.react()
        out.append(r.error or sorted(r.outputs))
    return out


def terminated_at(program, interface, trace, **kw):
    m = load(program, interface, **kw)
    for n, present in enumerate(trace, 1):
        for name in present:
            m.input(name)
        if m.react().terminated:
            return n
    return None
