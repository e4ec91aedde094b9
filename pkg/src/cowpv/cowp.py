"""The co-word-problem automaton for V_(G, theta) and its cross-validation.

Layout of the compiled machine (accepting by empty stack):

``load``
    pushes an arbitrary bit string, then leaves through one of eight exits,
    each pushing a depth-3 test ball ``B``.
``read[B]``
    reading transitions compiled from the generator tree pairs (pop a
    domain leaf, push the range leaf followed by its label) and clean-up
    loops that move a group label one cell deeper or merge two labels.
``test[B]``
    entered by popping a test ball other than ``B``; unloads the stack.
``group[B]``
    strips leading bits, drives the topmost label to the bottom and accepts
    when a non-trivial label is left on top of ``#``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Optional, Sequence

from . import pda as pda_mod
from .cantor import comparable, test_partition
from .pda import EMPTY_STACK, Pda, Transition, accepts
from .thompson import (
    Context,
    evaluate_v_word,
    evaluate_word,
    image_of_ball,
    is_identity,
    parse_word,
    rotations,
)

BITS = ("0", "1")
BOTTOM = "#"
LOAD = "load"
WINDOW = 4  # deepest domain leaf of any generator (1110, 1111)


def label_symbol(ctx: Context, g: int) -> str:
    return f"<{ctx.group.names[g]}>"


@dataclass(frozen=True)
class CowpMachine:
    pda: Pda
    ctx: Context
    alphabet: tuple
    ball_branch: dict = field(hash=False)

    def restrict(self, balls: Optional[Sequence[str]] = None, test_accept: bool = True,
                 group_accept: bool = True) -> Pda:
        """Sub-machine keeping only some branches and accept phases."""
        balls = list(self.ball_branch) if balls is None else list(balls)
        keep = {LOAD}
        for b in balls:
            br = self.ball_branch[b]
            keep |= {br["read"], br["done"]}
            if test_accept:
                keep.add(br["test"])
            if group_accept:
                keep.add(br["group"])
        ts = tuple(t for t in self.pda.transitions if t.src in keep and t.dst in keep)
        states = tuple(s for s in self.pda.states if s in keep)
        return Pda(self.pda.input_alphabet, self.pda.stack_alphabet, states, self.pda.initial,
                   ts, frozenset(), EMPTY_STACK, BOTTOM)


def _label_push(ctx: Context, g: int) -> tuple:
    return () if g == ctx.group.identity else (label_symbol(ctx, g),)


def build(ctx: Context) -> CowpMachine:
    """Compile the automaton for ``ctx`` (group, theta, generating subset)."""
    G, theta = ctx.group, ctx.theta
    e = G.identity
    labels = G.nonidentity()
    sym = {g: label_symbol(ctx, g) for g in labels}
    gamma = frozenset(BITS + (BOTTOM,) + tuple(sym.values()))
    sigma = tuple(ctx.alphabet)
    balls = test_partition()

    reading = []
    for s in sigma:
        x = ctx.alphabet.pair(s)
        for d, r, g in x.leaves:
            reading.append((s, tuple(d), tuple(r) + _label_push(ctx, g)))

    cleanup = []
    for depth in range(WINDOW):
        for u in product(BITS, repeat=depth):
            for g in labels:
                for b in BITS:
                    moved = g if b == "0" else theta(g)
                    cleanup.append((u + (sym[g], b), u + (b,) + _label_push(ctx, moved)))
                for h in labels:
                    cleanup.append((u + (sym[g], sym[h]), u + _label_push(ctx, G.mul[g][h])))

    group_rules = []
    for g in labels:
        group_rules.append(((sym[g], "0"), _label_push(ctx, g)))
        group_rules.append(((sym[g], "1"), _label_push(ctx, theta(g))))
        for h in labels:
            group_rules.append(((sym[g], sym[h]), _label_push(ctx, G.mul[g][h])))

    ts = [Transition(LOAD, LOAD, None, (), (b,)) for b in BITS]
    states = [LOAD]
    branches = {}
    for ball in balls:
        br = {k: f"{k}[{ball}]" for k in ("read", "test", "group", "done")}
        branches[ball] = br
        states += list(br.values())
        rd, ta, ga, done = br["read"], br["test"], br["group"], br["done"]
        ts.append(Transition(LOAD, rd, None, (), tuple(ball)))
        ts += [Transition(rd, rd, s, pop, push) for s, pop, push in reading]
        ts += [Transition(rd, rd, None, pop, push) for pop, push in cleanup]
        # test-partition accept
        ts += [Transition(rd, ta, None, tuple(other), ()) for other in balls if other != ball]
        ts += [Transition(ta, ta, None, (x,), ()) for x in BITS + tuple(sym.values())]
        ts.append(Transition(ta, done, None, (BOTTOM,), ()))
        # group-element accept
        ts.append(Transition(rd, ga, None, (), ()))
        ts += [Transition(ga, ga, None, (b,), ()) for b in BITS]
        ts += [Transition(ga, ga, None, pop, push) for pop, push in group_rules]
        ts += [Transition(ga, done, None, (sym[g], BOTTOM), ()) for g in labels]

    machine = Pda(frozenset(sigma), gamma, tuple(states), LOAD, tuple(ts), frozenset(), EMPTY_STACK, BOTTOM)
    return CowpMachine(machine, ctx, sigma, branches)


def in_L_Bi(word, i: int, ctx: Optional[Context] = None) -> bool:
    """Oracle: the word maps some of test ball ``i`` outside that ball."""
    ball = test_partition()[i]
    p = evaluate_v_word(parse_word(word, ctx))
    return any(not v.startswith(ball) for v in image_of_ball(p, ball))


def cowp_member(m: CowpMachine, word) -> Optional[int]:
    """First rotation index accepted by the machine, or None."""
    word = parse_word(word, m.ctx)
    for j, rot in enumerate(rotations(word)):
        if accepts(m.pda, rot):
            return j
    return None


@dataclass(frozen=True)
class CowpReport:
    word: tuple
    oracle_nontrivial: bool
    rotation_accepted: Optional[int]

    @property
    def agree(self) -> bool:
        return self.oracle_nontrivial == (self.rotation_accepted is not None)


def check_word(m: CowpMachine, word) -> CowpReport:
    word = parse_word(word, m.ctx)
    oracle = not is_identity(evaluate_word(word, m.ctx))
    return CowpReport(word, oracle, cowp_member(m, word))


def all_words(alphabet: Sequence[str], max_len: int):
    for n in range(max_len + 1):
        yield from product(alphabet, repeat=n)


def sample_words(alphabet: Sequence[str], count: int, max_len: int, seed: int) -> list:
    """``count`` words with lengths uniform in ``0..max_len``."""
    rng = random.Random(seed)
    return [tuple(rng.choice(alphabet) for _ in range(rng.randint(0, max_len))) for _ in range(count)]


def cross_validate(m: CowpMachine, max_len: int, sample: Optional[tuple] = None,
                   seed: int = 0) -> list:
    """Reports for every word up to ``max_len`` plus ``sample = (count, len)`` random ones.

    Sorted by word; an empty list of disagreements means the run passed.
    """
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    words = set(all_words(m.alphabet, max_len))
    if sample:
        count, length = sample
        words.update(sample_words(m.alphabet, count, length, seed))
    return [check_word(m, w) for w in sorted(words)]


def disagreements(reports: Sequence[CowpReport]) -> list:
    return [r for r in reports if not r.agree]
