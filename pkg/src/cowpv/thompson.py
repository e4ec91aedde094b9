"""Exact arithmetic in Thompson's group V and in V_(G, theta).

Elements of V are :class:`PrefixMap` values (``d* -> r*`` leaf tables).
Elements of V_(G, theta) are :class:`LabeledTreePair` values: the same kind
of table with one group label per leaf, always stored with the labels on the
range side.

Conventions used throughout:

* ``x * y`` applies ``y`` first (the second factor supplies the domain).
* Splitting a leaf labelled ``g`` gives ``g`` on the left child and
  ``theta(g)`` on the right child.
* A leaf with domain label ``h`` and range label ``g`` is normalised to
  domain label ``1`` and range label ``g h^-1``.  So the label of a product
  on a matched leaf is ``label(x) * label(y)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .cantor import (
    AddressError,
    address,
    antichain,
    common_refinement,
    comparable,
    is_complete_antichain,
    leaf_prefix,
    test_partition,
)
from .groups import (
    Endomorphism,
    GroupError,
    GroupTable,
    default_generators,
    generates,
    identity_endomorphism,
    validate_endomorphism,
)


class ThompsonError(ValueError):
    pass


class WordError(ThompsonError):
    """Unknown symbol in a word; ``position`` is the 0-based token index."""

    def __init__(self, msg, position=None):
        super().__init__(msg)
        self.position = position


# -- V -------------------------------------------------------------------------

V_TABLES = {
    "A": (("0", "00"), ("10", "01"), ("11", "1")),
    "B": (("0", "0"), ("10", "100"), ("110", "101"), ("111", "11")),
    # cyclically permutes the three leaves, so C^3 = 1
    "C": (("0", "11"), ("10", "0"), ("11", "10")),
    "pi0": (("0", "10"), ("10", "0"), ("11", "11")),
}
V_SYMBOLS = ("A", "B", "C", "Abar", "Bbar", "pi0")
COMB_LEAVES = dict(zip("abcde", ("0", "10", "110", "1110", "1111")))

_ALIASES = {"π₀": "pi0", "π0": "pi0", "Ā": "Abar", "B̄": "Bbar", "A^-1": "Abar", "B^-1": "Bbar"}


def _theta_depth_table(theta: Endomorphism, g: int, bits: str) -> int:
    return theta.power(g, bits.count("1"))


@dataclass(frozen=True, eq=False)
class PrefixMap:
    """An element of V: ``d w -> r w`` for each ``(d, r)`` in ``leaves``."""

    leaves: tuple

    def __post_init__(self):
        object.__setattr__(self, "leaves", tuple(sorted(self.leaves)))

    @classmethod
    def from_pairs(cls, pairs: Iterable) -> "PrefixMap":
        pairs = [(address(d), address(r)) for d, r in pairs]
        p = cls(tuple(pairs))
        if not (is_complete_antichain(p.domain) and is_complete_antichain(p.range)):
            raise ThompsonError(f"not a bijection of complete antichains: {pairs}")
        return p

    @property
    def domain(self) -> tuple:
        return tuple(d for d, _ in self.leaves)

    @property
    def range(self) -> tuple:
        return tuple(sorted(r for _, r in self.leaves))

    @cached_property
    def _dmap(self) -> dict:
        return dict(self.leaves)

    def __call__(self, u: str) -> str:
        """Image of a point given by a long enough finite prefix."""
        d = leaf_prefix(self._dmap, u)
        if d is None:
            raise ThompsonError(f"address {u!r} too short to apply the map")
        return self._dmap[d] + u[len(d):]

    def __mul__(self, other: "PrefixMap") -> "PrefixMap":
        return v_multiply(self, other)

    def __invert__(self) -> "PrefixMap":
        return v_inverse(self)

    def __eq__(self, other):
        if not isinstance(other, PrefixMap):
            return NotImplemented
        return v_equals(self, other)

    def __hash__(self):
        return hash(v_reduce(self).leaves)

    def __repr__(self):
        return "PrefixMap({" + ", ".join(f"{d or 'ε'}→{r or 'ε'}" for d, r in self.leaves) + "})"

    def is_identity(self) -> bool:
        return all(d == r for d, r in v_reduce(self).leaves)


def v_identity() -> PrefixMap:
    return PrefixMap((("", ""),))


def v_with_domain(p: PrefixMap, target: Sequence[str]) -> PrefixMap:
    out = []
    dmap = p._dmap
    for t in target:
        d = leaf_prefix(dmap, t)
        if d is None:
            raise ThompsonError(f"target leaf {t!r} does not refine the domain")
        out.append((t, dmap[d] + t[len(d):]))
    return PrefixMap(tuple(out))


def v_inverse(p: PrefixMap) -> PrefixMap:
    return PrefixMap(tuple((r, d) for d, r in p.leaves))


def v_multiply(p: PrefixMap, q: PrefixMap) -> PrefixMap:
    """``p * q``: apply ``q`` first."""
    mid = common_refinement(p.domain, q.range)
    q_inv = v_with_domain(v_inverse(q), mid)  # mid -> q's domain
    p_ref = v_with_domain(p, mid)._dmap
    return PrefixMap(tuple((e, p_ref[m]) for m, e in q_inv.leaves))


def v_equals(p: PrefixMap, q: PrefixMap) -> bool:
    mid = common_refinement(p.domain, q.domain)
    return v_with_domain(p, mid).leaves == v_with_domain(q, mid).leaves


def v_reduce(p: PrefixMap) -> PrefixMap:
    """Minimal tree pair (unique for V)."""
    leaves = dict(p.leaves)
    changed = True
    while changed:
        changed = False
        for d in sorted(leaves, key=len, reverse=True):
            if not d or d[-1] != "0" or d not in leaves:
                continue
            sib = d[:-1] + "1"
            if sib not in leaves:
                continue
            r0, r1 = leaves[d], leaves[sib]
            if r0 and r1 and r0[-1] == "0" and r1 == r0[:-1] + "1":
                del leaves[d], leaves[sib]
                leaves[d[:-1]] = r0[:-1]
                changed = True
    return PrefixMap(tuple(leaves.items()))


def v_generator(name: str) -> PrefixMap:
    name = _ALIASES.get(name, name)
    if name in V_TABLES:
        return PrefixMap(V_TABLES[name])
    if name in ("Abar", "Bbar"):
        return v_inverse(PrefixMap(V_TABLES[name[0]]))
    raise WordError(f"unknown generator of V: {name!r}")


def image_of_ball(p: PrefixMap, u: str) -> set:
    """Image of the ball ``u*`` as a set of ball addresses."""
    u = address(u)
    d = leaf_prefix(p._dmap, u)
    if d is not None:
        return {p._dmap[d] + u[len(d):]}
    return {r for d, r in p.leaves if d.startswith(u)}


# -- V_(G, theta) ----------------------------------------------------------------

@dataclass(frozen=True)
class Context:
    """A group, an endomorphism and the generating subset used for g_ij."""

    group: GroupTable
    theta: Endomorphism
    gens: tuple = ()

    def __post_init__(self):
        if self.theta.source != self.group:
            raise ThompsonError("theta must be an endomorphism of the context group")
        if not self.gens:
            object.__setattr__(self, "gens", default_generators(self.group))
        if not generates(self.group, self.gens):
            raise GroupError("generating subset does not generate the group")

    @cached_property
    def alphabet(self) -> "GeneratorAlphabet":
        return GeneratorAlphabet(self)


def make_context(group: GroupTable, theta: Optional[Endomorphism] = None, gens=()) -> Context:
    theta = theta if theta is not None else identity_endomorphism(group)
    report = validate_endomorphism(theta)
    if not report:
        raise GroupError(str(report))
    return Context(group, theta, tuple(gens))


@dataclass(frozen=True, eq=False)
class LabeledTreePair:
    """Leaf maps ``(domain, range, label)`` with labels on the range side."""

    ctx: Context
    leaves: tuple

    def __post_init__(self):
        object.__setattr__(self, "leaves", tuple(sorted(self.leaves)))

    @classmethod
    def from_triples(cls, ctx: Context, triples: Iterable) -> "LabeledTreePair":
        triples = [(address(d), address(r), int(g)) for d, r, g in triples]
        x = cls(ctx, tuple(triples))
        if not (is_complete_antichain(x.domain) and is_complete_antichain(x.range)):
            raise ThompsonError("domain and range must be complete antichains")
        if any(not 0 <= g < ctx.group.order for _, _, g in triples):
            raise ThompsonError("label out of range")
        return x

    @property
    def domain(self) -> tuple:
        return tuple(d for d, _, _ in self.leaves)

    @property
    def range(self) -> tuple:
        return tuple(sorted(r for _, r, _ in self.leaves))

    @cached_property
    def _dmap(self) -> dict:
        return {d: (r, g) for d, r, g in self.leaves}

    def __mul__(self, other):
        return multiply(self, other)

    def __invert__(self):
        return inverse(self)

    def __eq__(self, other):
        if not isinstance(other, LabeledTreePair):
            return NotImplemented
        return equals(self, other)

    def __hash__(self):
        return hash(reduce(self).leaves)

    def __repr__(self):
        return "LabeledTreePair(" + format_pair(self) + ")"


def format_pair(x: LabeledTreePair) -> str:
    names = x.ctx.group.names
    return " ".join(f"{d or 'ε'}:{r or 'ε'}:{names[g]}" for d, r, g in x.leaves)


def identity(ctx: Context) -> LabeledTreePair:
    return LabeledTreePair(ctx, (("", "", ctx.group.identity),))


def expand_leaf(x: LabeledTreePair, which: str) -> LabeledTreePair:
    if which not in x._dmap:
        raise ThompsonError(f"{which!r} is not a domain leaf")
    r, g = x._dmap[which]
    th = x.ctx.theta
    rest = [t for t in x.leaves if t[0] != which]
    rest += [(which + "0", r + "0", g), (which + "1", r + "1", th(g))]
    return LabeledTreePair(x.ctx, tuple(rest))


def with_domain(x: LabeledTreePair, target: Sequence[str]) -> LabeledTreePair:
    """Representative of ``x`` whose domain antichain is ``target``.

    Equivalent to splitting leaves one caret at a time; the label reached
    after descending through bits ``s`` is ``theta^(#1s in s)(g)``.
    """
    dmap = x._dmap
    th = x.ctx.theta
    out = []
    for t in target:
        d = leaf_prefix(dmap, t)
        if d is None:
            raise ThompsonError(f"target leaf {t!r} does not refine the domain")
        r, g = dmap[d]
        s = t[len(d):]
        out.append((t, r + s, _theta_depth_table(th, g, s)))
    return LabeledTreePair(x.ctx, tuple(out))


def _with_range(y: LabeledTreePair, target: Sequence[str]) -> dict:
    """Map ``range leaf -> (domain leaf, label)`` after refining y's range."""
    rmap = {r: (d, g) for d, r, g in y.leaves}
    th = y.ctx.theta
    out = {}
    for t in target:
        r = leaf_prefix(rmap, t)
        if r is None:
            raise ThompsonError(f"target leaf {t!r} does not refine the range")
        d, g = rmap[r]
        s = t[len(r):]
        out[t] = (d + s, _theta_depth_table(th, g, s))
    return out


def _check_ctx(x, y):
    if x.ctx is not y.ctx and x.ctx != y.ctx:
        raise ThompsonError("context mismatch")


def multiply(x: LabeledTreePair, y: LabeledTreePair) -> LabeledTreePair:
    """``x * y`` in V_(G, theta); ``y`` is applied first."""
    _check_ctx(x, y)
    mid = common_refinement(x.domain, y.range)
    yr = _with_range(y, mid)
    xd = with_domain(x, mid)._dmap
    mul = x.ctx.group.mul
    out = []
    for m, (e, h) in yr.items():
        r, g = xd[m]
        out.append((e, r, mul[g][h]))
    return LabeledTreePair(x.ctx, tuple(out))


def inverse(x: LabeledTreePair) -> LabeledTreePair:
    inv = x.ctx.group.inv
    return LabeledTreePair(x.ctx, tuple((r, d, inv[g]) for d, r, g in x.leaves))


def equals(x: LabeledTreePair, y: LabeledTreePair) -> bool:
    _check_ctx(x, y)
    mid = common_refinement(x.domain, y.domain)
    return with_domain(x, mid).leaves == with_domain(y, mid).leaves


def is_identity(x: LabeledTreePair) -> bool:
    # equals(x, identity) refines the identity onto x's own domain
    e = x.ctx.group.identity
    return all(d == r and g == e for d, r, g in x.leaves)


def reduce(x: LabeledTreePair) -> LabeledTreePair:
    """Greedily remove canceling carets (display form)."""
    th = x.ctx.theta
    leaves = dict(x._dmap)
    changed = True
    while changed:
        changed = False
        for d in sorted(leaves, key=len, reverse=True):
            if not d or d[-1] != "0" or d not in leaves:
                continue
            sib = d[:-1] + "1"
            if sib not in leaves:
                continue
            (r0, g0), (r1, g1) = leaves[d], leaves[sib]
            if r0 and r0[-1] == "0" and r1 == r0[:-1] + "1" and g1 == th(g0):
                del leaves[d], leaves[sib]
                leaves[d[:-1]] = (r0[:-1], g0)
                changed = True
    return LabeledTreePair(x.ctx, tuple((d, r, g) for d, (r, g) in leaves.items()))


def in_LG(x: LabeledTreePair) -> bool:
    e = x.ctx.group.identity
    return any(g != e for _, _, g in x.leaves)


def phi_projection(x: LabeledTreePair) -> PrefixMap:
    """Forget the labels; reduced element of V."""
    return v_reduce(PrefixMap(tuple((d, r) for d, r, _ in x.leaves)))


# -- generators and words --------------------------------------------------------

class GeneratorAlphabet:
    """Input symbols ``A B C Abar Bbar pi0`` followed by ``g<i><j>``."""

    def __init__(self, ctx: Context):
        self.ctx = ctx
        self.symbols = V_SYMBOLS + tuple(
            f"g{i}{j}" for i in range(1, len(ctx.gens) + 1) for j in "abcde"
        )
        self._pairs = {}

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __getitem__(self, k):
        return self.symbols[k]

    def __contains__(self, s):
        return s in self.symbols

    def pair(self, name: str) -> LabeledTreePair:
        if name not in self._pairs:
            self._pairs[name] = _build_generator(name, self.ctx)
        return self._pairs[name]


_GEN_RE = re.compile(r"g(\d+)([a-e])$")


def _build_generator(name: str, ctx: Context) -> LabeledTreePair:
    e = ctx.group.identity
    if name in V_SYMBOLS:
        p = v_generator(name)
        return LabeledTreePair(ctx, tuple((d, r, e) for d, r in p.leaves))
    m = _GEN_RE.match(name)
    if m:
        i, j = int(m.group(1)), m.group(2)
        if 1 <= i <= len(ctx.gens):
            g = ctx.gens[i - 1]
            return LabeledTreePair(
                ctx, tuple((u, u, g if k == j else e) for k, u in COMB_LEAVES.items())
            )
    raise WordError(f"unknown symbol {name!r}")


def generator(name: str, ctx: Context) -> LabeledTreePair:
    name = _ALIASES.get(name, name)
    if name not in ctx.alphabet:
        raise WordError(f"unknown symbol {name!r}")
    return ctx.alphabet.pair(name)


def parse_word(text, ctx: Optional[Context] = None) -> tuple:
    """Whitespace-separated symbols; also accepts an already split sequence."""
    tokens = text.split() if isinstance(text, str) else list(text)
    out = []
    for pos, tok in enumerate(tokens):
        tok = _ALIASES.get(tok, tok)
        if tok.startswith("g_"):
            tok = "g" + tok[2:]
        if ctx is not None:
            ok = tok in ctx.alphabet
        else:
            ok = tok in V_SYMBOLS or bool(_GEN_RE.match(tok))
        if not ok:
            raise WordError(f"unknown symbol {tok!r} at position {pos}", pos)
        out.append(tok)
    return tuple(out)


def evaluate_word(word, ctx: Context) -> LabeledTreePair:
    """Product of the generators, leftmost factor first (acts last)."""
    word = parse_word(word, ctx)
    x = identity(ctx)
    for s in word:
        x = multiply(x, ctx.alphabet.pair(s))
    return x


def evaluate_v_word(word) -> PrefixMap:
    """The V element of a word with every g_ij deleted."""
    p = v_identity()
    for s in parse_word(word):
        if s in V_SYMBOLS:
            p = v_multiply(p, v_generator(s))
    return v_reduce(p)


_LETTER_INVERSE = {"A": ("Abar",), "Abar": ("A",), "B": ("Bbar",), "Bbar": ("B",),
                   "C": ("C", "C"), "pi0": ("pi0",)}


def formal_inverse(word, ctx: Context) -> tuple:
    """A word for the inverse built letter by letter (``C`` becomes ``C C``)."""
    out = []
    for s in reversed(parse_word(word, ctx)):
        if s in _LETTER_INVERSE:
            out += _LETTER_INVERSE[s]
        else:
            i = int(_GEN_RE.match(s).group(1))
            out += [s] * (ctx.group.element_order(ctx.gens[i - 1]) - 1)
    return tuple(out)


def rotations(word) -> list:
    word = tuple(word)
    if not word:
        return [()]
    return [word[j:] + word[:j] for j in range(len(word))]


def displaced_rotation(word, ctx: Optional[Context] = None) -> Optional[tuple]:
    """First ``(rotation index, ball index)`` whose test ball is moved off itself.

    The image of the ball must avoid the ball entirely.
    """
    word = parse_word(word, ctx)
    balls = test_partition()
    for j, rot in enumerate(rotations(word)):
        p = evaluate_v_word(rot)
        for i, b in enumerate(balls):
            if not any(comparable(v, b) for v in image_of_ball(p, b)):
                return j, i
    return None


# -- theta = id embedding into V -------------------------------------------------

def element_order_identity_first(g: GroupTable) -> list:
    return [g.identity] + g.nonidentity()


def embed_theta_id(x: LabeledTreePair, W: Sequence[str]) -> PrefixMap:
    """Encode an element of V_(G, id) as an element of V.

    ``W[k]`` is the prefix of the k-th element in identity-first order.  A
    leaf ``b -> a`` labelled ``g`` sends ``w_i b*`` to ``w_k a*`` where
    ``g_k = g * g_i``; left multiplication keeps this a homomorphism for
    nonabelian G under the label convention above.
    """
    ctx = x.ctx
    G = ctx.group
    if not ctx.theta.is_identity:
        raise ThompsonError("embedding requires theta = identity")
    W = list(W)
    if len(W) != G.order:
        raise ThompsonError(f"partition must have {G.order} leaves")
    try:
        antichain(W)
    except AddressError as exc:
        raise ThompsonError(str(exc)) from None
    order = element_order_identity_first(G)
    slot = {g: W[k] for k, g in enumerate(order)}
    out = []
    for b, a, g in x.leaves:
        for gi in order:
            out.append((slot[gi] + b, slot[G.mul[g][gi]] + a))
    return v_reduce(PrefixMap(tuple(out)))
