import pytest

from cowpv import cowp
from cowpv.cantor import test_partition as partition
from cowpv.groups import cyclic_group, power_endomorphism, trivial_endomorphism
from cowpv.pda import EMPTY_STACK, Transition, accepts
from cowpv.thompson import (
    evaluate_word,
    is_identity,
    make_context,
    phi_projection,
    rotations,
)

Z2 = cyclic_group(2)
Z3 = cyclic_group(3)
CONFIGS = {
    "Z2-id": make_context(Z2),
    "Z2-trivial": make_context(Z2, trivial_endomorphism(Z2)),
    "Z3-square": make_context(Z3, power_endomorphism(Z3, 2)),
}


@pytest.fixture(scope="module", params=list(CONFIGS))
def machine(request):
    return cowp.build(CONFIGS[request.param])


@pytest.fixture(scope="module")
def z2():
    return cowp.build(CONFIGS["Z2-id"])


def test_structure(machine):
    p = machine.pda
    assert p.mode == EMPTY_STACK
    assert set(machine.ball_branch) == set(partition())
    pushed = {x for t in p.transitions for x in t.push}
    assert pushed <= p.stack_alphabet
    assert "#" not in pushed
    done = {br["done"] for br in machine.ball_branch.values()}
    bottom_pops = [t for t in p.transitions if "#" in t.pop]
    assert bottom_pops and all(t.dst in done and t.pop[-1] == "#" for t in bottom_pops)
    assert not any(t.src in done for t in p.transitions)


def test_loading_phase(z2):
    ts = set(z2.pda.transitions)
    assert Transition("load", "load", None, (), ("0",)) in ts
    assert Transition("load", "load", None, (), ("1",)) in ts
    for ball, br in z2.ball_branch.items():
        assert Transition("load", br["read"], None, (), tuple(ball)) in ts


def test_reading_transition_for_A(z2):
    rd = z2.ball_branch["000"]["read"]
    assert Transition(rd, rd, "A", ("0",), ("0", "0")) in z2.pda.transitions


def test_reading_transition_g2b_in_z4():
    m = cowp.build(make_context(cyclic_group(4)))
    rd = m.ball_branch["100"]["read"]
    # the second generator of Z/4 is the element a^2
    assert Transition(rd, rd, "g2b", ("1", "0"), ("1", "0", "<a^2>")) in m.pda.transitions


@pytest.mark.parametrize("config", list(CONFIGS))
def test_cleanup_transition(config):
    m = cowp.build(CONFIGS[config])
    ctx = m.ctx
    rd = m.ball_branch["010"]["read"]
    for g in ctx.group.nonidentity():
        th = ctx.theta(g)
        push = ("0", "1") + ((cowp.label_symbol(ctx, th),) if th != ctx.group.identity else ())
        assert Transition(rd, rd, None, ("0", cowp.label_symbol(ctx, g), "1"), push) in m.pda.transitions


def test_group_accept_rules(z2):
    ga = z2.ball_branch["000"]["group"]
    ts = set(z2.pda.transitions)
    assert Transition(ga, ga, None, ("<a>", "0"), ("<a>",)) in ts
    assert Transition(ga, z2.ball_branch["000"]["done"], None, ("<a>", "#"), ()) in ts


@pytest.mark.parametrize("word,member", [
    ("", None),
    ("A", 0),
    ("g1a", 0),
    ("A Abar", None),
    ("pi0 pi0", None),
    ("C C C", None),
])
def test_cowp_member(z2, word, member):
    assert cowp.cowp_member(z2, word) == member


def test_in_L_Bi_examples():
    assert cowp.in_L_Bi("A", partition().index("100"))
    for i in range(8):
        assert not cowp.in_L_Bi("", i)
        assert not cowp.in_L_Bi("pi0 pi0", i)


def test_exhaustive_agreement_len2(machine):
    reports = cowp.cross_validate(machine, 2)
    assert len(reports) == sum(len(machine.alphabet) ** n for n in range(3))
    assert cowp.disagreements(reports) == []


def test_sampled_agreement(z2):
    reports = cowp.cross_validate(z2, 0, sample=(40, 5), seed=11)
    assert cowp.disagreements(reports) == []


def test_sample_words_deterministic():
    a = cowp.sample_words(("x", "y"), 10, 4, seed=3)
    assert a == cowp.sample_words(("x", "y"), 10, 4, seed=3)
    assert all(len(w) <= 4 for w in a)


def test_branch_level_agreement(z2):
    branches = {b: z2.restrict([b]) for b in partition()}
    for w in cowp.all_words(z2.alphabet, 2):
        for i, ball in enumerate(partition()):
            if cowp.in_L_Bi(w, i, z2.ctx):
                assert accepts(branches[ball], w), (w, ball)


def test_phi_kernel_accepted_by_group_states_only(z2):
    tests_only = z2.restrict(group_accept=False)
    groups_only = z2.restrict(test_accept=False)
    seen = 0
    for w in cowp.all_words(z2.alphabet, 2):
        x = evaluate_word(w, z2.ctx)
        if is_identity(x) or not phi_projection(x).is_identity():
            continue
        seen += 1
        assert not any(accepts(tests_only, r) for r in rotations(w)), w
        assert any(accepts(groups_only, r) for r in rotations(w)), w
    assert seen > 0


def test_cross_validate_rejects_negative_length(z2):
    with pytest.raises(ValueError):
        cowp.cross_validate(z2, -1)


def expected_transition_count(ctx):
    """Count by hand from the layout: load loops, exits, then per-branch phases."""
    labels = ctx.group.order - 1
    reading = sum(len(ctx.alphabet.pair(s).leaves) for s in ctx.alphabet)
    prefixes = sum(2 ** k for k in range(cowp.WINDOW))
    cleanup = prefixes * labels * (2 + labels)
    test = 7 + (2 + labels) + 1
    group = 1 + 2 + labels * (2 + labels) + labels
    return 2 + 8 + 8 * (reading + cleanup + test + group)


@pytest.mark.parametrize("config", list(CONFIGS))
def test_transition_count(config):
    m = cowp.build(CONFIGS[config])
    assert len(m.pda.transitions) == expected_transition_count(m.ctx)
    assert len(m.pda.states) == 1 + 8 * 4


def test_z2_machine_size_frozen(z2):
    assert len(z2.pda.transitions) == 874


@pytest.mark.parametrize("config,trivial", [("Z2-id", 11), ("Z2-trivial", 11), ("Z3-square", 16)])
def test_trivial_word_counts(config, trivial):
    # empty word plus the length-2 cancelling pairs, counted by hand
    reports = cowp.cross_validate(cowp.build(CONFIGS[config]), 2)
    assert sum(not r.oracle_nontrivial for r in reports) == trivial
