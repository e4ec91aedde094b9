import pytest

from _machines import random_pda, short_words
from cowpv import cowp
from cowpv.groups import cyclic_group
from cowpv.pda import (
    EMPTY_STACK,
    TERMINAL_STATE,
    Pda,
    PdaError,
    accepts,
    accepts_bounded,
    elementarize,
    export,
    load_structured,
    to_dot,
    validate,
)
from cowpv.thompson import make_context


def machine(transitions, mode=EMPTY_STACK, terminals=(), states=("q",), inputs=("x",), stack=("#", "0", "g")):
    return Pda.make(inputs, stack, states, states[0], transitions, terminals, mode)


@pytest.fixture(scope="module")
def z2_machine():
    return cowp.build(make_context(cyclic_group(2)))


def test_single_state_accepts_nothing():
    p = machine([])
    assert validate(p).ok
    assert not accepts(p, ())
    assert not accepts(p, ("x",))


def test_unknown_state_is_invalid():
    p = machine([("q", "r", None, (), ())])
    report = validate(p)
    assert not report.ok and "unknown state 'r'" in report.errors[0]


def test_cowp_machine_valid(z2_machine):
    assert validate(z2_machine.pda).ok
    assert validate(elementarize(z2_machine.pda)).ok


def test_elementary_machine_unchanged():
    p = machine([("q", "q", "x", ("#",), ()), ("q", "q", None, (), ("0",))])
    assert elementarize(p) is p


def test_pop_push_chain_shape():
    p = machine([("q", "r", None, ("0", "g", "0"), ("0", "0", "g"))], mode=TERMINAL_STATE,
                terminals=("r",), states=("q", "r"))
    e = elementarize(p)
    assert len(e.states) - len(p.states) == 5
    assert len(e.transitions) == 6
    assert sum(len(t.pop) for t in e.transitions) == 3
    assert sum(len(t.push) for t in e.transitions) == 3
    assert all(t.is_elementary for t in e.transitions)


def test_empty_mode_guard_blocks_half_popped_accept():
    # popping "# 0" must not succeed on a stack that is just "#"
    p = machine([("q", "q", None, ("#", "0"), ())])
    assert not accepts(p, ())
    assert not accepts_bounded(p, (), 4)


def test_pop_bottom_accepts_empty_word_only():
    p = machine([("q", "q", None, ("#",), ())])
    assert accepts(p, ())
    assert not accepts(p, ("x",))
    assert accepts_bounded(p, (), 1)


def test_push_loop_terminates_and_rejects():
    p = machine([("q", "q", None, (), ("0",))])
    assert not accepts(p, ())
    assert not accepts(p, ("x",))


def test_tape_read_right_to_left():
    p = Pda.make(("a", "b"), ("#",), ("q0", "q1", "q2"), "q0",
                 [("q0", "q1", "a", (), ()), ("q1", "q2", "b", ("#",), ())])
    assert accepts(p, ("b", "a"))
    assert not accepts(p, ("a", "b"))


def test_bound_excludes_deep_path():
    p = machine([("q", "r", None, (), ("0",)), ("r", "r", None, ("0", "#"), ())], states=("q", "r"))
    assert accepts(p, ())
    assert accepts_bounded(p, (), 2)
    assert not accepts_bounded(p, (), 1)


def test_unknown_input_symbol():
    with pytest.raises(PdaError):
        accepts(machine([]), ("z",))


def test_terminal_mode():
    p = machine([("q", "t", "x", (), ("0",))], mode=TERMINAL_STATE, terminals=("t",), states=("q", "t"))
    assert accepts(p, ("x",))
    assert not accepts(p, ())


@pytest.mark.parametrize("seed", range(0, 200, 7))
def test_engine_matches_bounded_search(seed):
    p = random_pda(seed)
    e = elementarize(p)
    for w in short_words(3):
        expected = accepts_bounded(p, w, 12)
        assert accepts(p, w) == expected, w
        # the guard floor adds one cell
        assert accepts_bounded(e, w, 13) == expected, w
        assert accepts(e, w) == expected, w


def test_cowp_accepts_A(z2_machine):
    assert accepts(z2_machine.pda, ("A",))
    assert not accepts(z2_machine.pda, ())


def test_dot_export(z2_machine):
    dot = to_dot(z2_machine.pda)
    assert dot.count(" -> ") == len(z2_machine.pda.transitions)
    empty = to_dot(machine([]))
    assert empty.count("->") == 0 and '"q"' in empty


def test_structured_round_trip(z2_machine):
    for p in (z2_machine.pda, random_pda(3), machine([("q", "q", "x", ("#",), ())])):
        assert load_structured(export(p, "structured")) == p


def test_export_rejects_unknown_format():
    with pytest.raises(PdaError):
        export(machine([]), "svg")


def test_load_structured_errors():
    with pytest.raises(PdaError, match="line"):
        load_structured("{")
    with pytest.raises(PdaError):
        load_structured("{}")
