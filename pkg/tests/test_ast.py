import pytest

from hiphop import (Event, TrapLabel, emit, exit_, if_, input_event, load, local,
                    local_event, loop, nothing, output_event, par, pause, seq,
                    sexpr, suspend, trap, val)
from hiphop.ast import Now, count_nodes, walk
from hiphop.errors import AstError, DuplicateEventError

A = input_event("A")
O = output_event("O")


def test_if_defaults_else_to_nothing():
    assert sexpr(if_(A, emit(O))) == ("if", ("now", "A"), ("emit", "O"), ("nothing",))


def test_bare_event_as_condition_means_now():
    assert suspend(A, pause()).cond == Now(A)


def test_bodies_must_not_be_empty():
    for make in (seq, loop, par):
        with pytest.raises(AstError):
            make()
    with pytest.raises(AstError):
        trap("T")


def test_children_must_be_statements():
    with pytest.raises(AstError):
        seq(emit(O), "emit O")
    with pytest.raises(AstError):
        emit("O")


def test_local_rejects_duplicate_names():
    with pytest.raises(DuplicateEventError):
        local([local_event("L"), local_event("L")], nothing())


def test_bad_labels():
    with pytest.raises(AstError):
        TrapLabel("")
    with pytest.raises(AstError):
        exit_(3)


def test_unbound_exit_detected_at_load():
    with pytest.raises(AstError):
        load(seq(emit(O), exit_("T")), [O])
    with pytest.raises(AstError):
        load(trap(TrapLabel("T"), exit_(TrapLabel("T"))), [O])


def test_string_labels_bind_by_name():
    m = load(seq(trap("T", par(exit_("T"), pause())), emit(O)), [O])
    assert m.react().outputs == {"O": None}


def test_walk_is_preorder():
    prog = seq(emit(O), par(pause(), nothing()))
    assert [s.kind for s in walk(prog)] == ["seq", "emit", "par", "pause", "nothing"]
    assert count_nodes(prog) == 5


def test_emit_value_appears_in_snapshot():
    S = output_event("S")
    assert sexpr(emit(S, 3)) == ("emit", "S", ("const", 3))
    assert sexpr(emit(S, val(A))) == ("emit", "S", ("val", "A"))


def test_trees_are_values():
    assert seq(emit(O), pause()) == seq(emit(O), pause())
    assert isinstance(O, Event)
