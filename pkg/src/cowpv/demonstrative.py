"""Demonstrative actions on the Cantor set and induced embeddings into V.

A finite-index overgroup G of H acts on ``G x_H Ends`` and, after
choosing a partition ``w_1*, ..., w_m*`` indexed by a left transversal
(``t_1 = 1``), on the Cantor set itself: ``g . (w_i x) = w_j h(x)`` where
``g t_i = t_j h``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import yaml

from .cantor import AddressError, address, comparable, is_complete_antichain, right_comb
from .groups import GroupTable
from .thompson import (
    PrefixMap,
    ThompsonError,
    evaluate_v_word,
    image_of_ball,
    v_generator,
    v_identity,
    v_inverse,
    v_multiply,
    v_reduce,
)

INV = "^-1"


class EmbeddingError(ValueError):
    pass


def inverse_name(s: str) -> str:
    return s[: -len(INV)] if s.endswith(INV) else s + INV


def right_comb_partition(m: int) -> tuple:
    try:
        return right_comb(m)
    except AddressError as exc:
        raise EmbeddingError(str(exc)) from None


@dataclass(frozen=True)
class EmbeddingSpec:
    m: int
    g_generators: tuple
    h_generators: tuple
    # (G-generator or its inverse, coset i) -> (coset j, word over H-generators); 1-based cosets
    coset_action: dict = field(hash=False)
    h_embedding: dict = field(hash=False)
    partition: tuple = ()
    relators: tuple = ()


def _h_map(spec: EmbeddingSpec, hword: Sequence[str]) -> PrefixMap:
    p = v_identity()
    for s in hword:
        base = s[: -len(INV)] if s.endswith(INV) else s
        if base not in spec.h_embedding:
            raise EmbeddingError(f"coset_action: unknown H-generator {s!r}")
        q = spec.h_embedding[base]
        p = v_multiply(p, v_inverse(q) if s.endswith(INV) else q)
    return p


def validate_spec(spec: EmbeddingSpec) -> list:
    errors = []
    if spec.m < 1:
        errors.append("m: must be >= 1")
    if len(spec.partition) != spec.m:
        errors.append(f"partition: needs exactly {spec.m} leaves")
    else:
        if not is_complete_antichain(spec.partition):
            errors.append("partition: not a complete antichain")
    for s in spec.g_generators:
        for name in (s, inverse_name(s)):
            targets = []
            for i in range(1, spec.m + 1):
                row = spec.coset_action.get((name, i))
                if row is None:
                    errors.append(f"coset_action: missing row {name}, {i}")
                    continue
                targets.append(row[0])
            if len(targets) == spec.m and sorted(targets) != list(range(1, spec.m + 1)):
                errors.append(f"coset_action: {name} does not permute the cosets")
    for h in spec.h_generators:
        if h not in spec.h_embedding:
            errors.append(f"h_embedding: no image for {h}")
    return errors


def _image(spec: EmbeddingSpec, name: str) -> PrefixMap:
    W = spec.partition
    pairs = []
    for i in range(1, spec.m + 1):
        j, hword = spec.coset_action[(name, i)]
        h = _h_map(spec, hword)
        pairs += [(W[i - 1] + d, W[j - 1] + r) for d, r in h.leaves]
    try:
        return PrefixMap.from_pairs(pairs)
    except ThompsonError as exc:
        raise EmbeddingError(f"induced map for {name} is not an element of V: {exc}") from None


def induced_embedding(spec: EmbeddingSpec) -> dict:
    """V-images of the G-generators under the induced action."""
    errors = validate_spec(spec)
    if errors:
        raise EmbeddingError("; ".join(errors))
    out = {}
    for s in spec.g_generators:
        img = _image(spec, s)
        if _image(spec, inverse_name(s)) != v_inverse(img):
            raise EmbeddingError(f"coset_action: rows for {inverse_name(s)} do not invert {s}")
        out[s] = img
    return out


def evaluate_gen_word(gens: dict, word: Sequence[str]) -> PrefixMap:
    p = v_identity()
    for s in word:
        base = s[: -len(INV)] if s.endswith(INV) else s
        q = gens[base]
        p = v_multiply(p, v_inverse(q) if s.endswith(INV) else q)
    return p


def relators_hold(spec: EmbeddingSpec, gens: Optional[dict] = None) -> list:
    """Relators whose image is not the identity (empty list = all hold)."""
    gens = gens if gens is not None else induced_embedding(spec)
    return [r for r in spec.relators if not evaluate_gen_word(gens, r).is_identity()]


# -- demonstration sets -------------------------------------------------------

def z_in_V() -> tuple:
    """A generator of a copy of Z in V together with a demonstration node."""
    return v_generator("A"), "10"


@dataclass(frozen=True)
class DemoReport:
    passed: bool
    node: str
    word_len: int
    classes: int
    words: int
    witness: Optional[tuple] = None

    def __str__(self):
        head = "PASS" if self.passed else "FAIL"
        text = (f"{head}: node {self.node or 'ε'}*, words up to length {self.word_len}, "
                f"{self.words} words, {self.classes} distinct elements")
        if self.witness:
            a, b = self.witness
            text += f"\nwitness: ({a}, {b}) have overlapping images of the node"
        return text


def _fmt(word) -> str:
    return " ".join(word) if word else "1"


def check_demonstrative(gens: dict, node: str, word_len: int) -> DemoReport:
    """Brute-force check that distinct elements move ``node*`` to disjoint sets.

    Words over the generators and their inverses are enumerated up to
    ``word_len`` (freely cancelling pairs skipped: they only re-reach shorter
    words) and grouped into elements by equality in V.
    """
    if word_len < 0:
        raise EmbeddingError("word_len must be >= 0")
    node = address(node)
    letters = []
    for s in gens:
        letters += [(s, gens[s]), (inverse_name(s), v_inverse(gens[s]))]
    start = v_identity()
    classes = {v_reduce(start).leaves: ((), start)}
    layer = [((), start)]
    words = 1
    for _ in range(word_len):
        nxt = []
        for w, p in layer:
            for s, q in letters:
                if w and w[-1] == inverse_name(s):
                    continue
                words += 1
                pq = v_multiply(p, q)
                key = v_reduce(pq).leaves
                if key not in classes:
                    classes[key] = (w + (s,), pq)
                nxt.append((w + (s,), pq))
        layer = nxt
    reps = sorted(classes.values(), key=lambda t: (len(t[0]), t[0]))
    images = [(w, image_of_ball(p, node)) for w, p in reps]
    for a in range(len(images)):
        wa, ia = images[a]
        for b in range(a + 1, len(images)):
            wb, ib = images[b]
            if any(comparable(x, y) for x in ia for y in ib):
                return DemoReport(False, node, word_len, len(reps), words, (_fmt(wa), _fmt(wb)))
    return DemoReport(True, node, word_len, len(reps), words)


# -- fixtures -----------------------------------------------------------------

def z_spec() -> EmbeddingSpec:
    """Z = <z> with z -> A, index 1."""
    A, _ = z_in_V()
    return EmbeddingSpec(
        m=1, g_generators=("z",), h_generators=("z",),
        coset_action={("z", 1): (1, ("z",)), ("z^-1", 1): (1, ("z^-1",))},
        h_embedding={"z": A}, partition=("",),
    )


def infinite_dihedral_spec() -> EmbeddingSpec:
    """D_inf = <z, r> over H = <z>, transversal {1, r}, W = {0, 1}."""
    A, _ = z_in_V()
    act = {
        ("z", 1): (1, ("z",)), ("z", 2): (2, ("z^-1",)),
        ("z^-1", 1): (1, ("z^-1",)), ("z^-1", 2): (2, ("z",)),
        ("r", 1): (2, ()), ("r", 2): (1, ()),
        ("r^-1", 1): (2, ()), ("r^-1", 2): (1, ()),
    }
    return EmbeddingSpec(
        m=2, g_generators=("z", "r"), h_generators=("z",), coset_action=act,
        h_embedding={"z": A}, partition=right_comb_partition(2),
        relators=(("r", "r"), ("r", "z", "r", "z")),
    )


def finite_group_spec(G: GroupTable, gens: Sequence[int]) -> EmbeddingSpec:
    """H = 1 inside a finite group: cosets are elements (identity first)."""
    order = [G.identity] + G.nonidentity()
    pos = {g: k + 1 for k, g in enumerate(order)}
    names = [f"s{k + 1}" for k in range(len(gens))]
    act = {}
    for name, s in zip(names, gens):
        for g in order:
            act[(name, pos[g])] = (pos[G.mul[s][g]], ())
            act[(inverse_name(name), pos[g])] = (pos[G.mul[G.inv[s]][g]], ())
    rel = []
    for name, s in zip(names, gens):
        rel.append((name,) * G.element_order(s))
    return EmbeddingSpec(
        m=G.order, g_generators=tuple(names), h_generators=(), coset_action=act,
        h_embedding={}, partition=right_comb_partition(G.order), relators=tuple(rel),
    )


# -- file format --------------------------------------------------------------

_ROW = re.compile(r"^\s*([^,\s]+)\s*,\s*(\d+)\s*->\s*(\d+)\s*(?:,(.*))?$")


def _parse_word(text) -> tuple:
    if text is None:
        return ()
    toks = str(text).split()
    return () if toks in ([], ["1"]) else tuple(toks)


def _parse_leaf_table(entries, where: str) -> PrefixMap:
    if isinstance(entries, str):
        # a word over A B C Abar Bbar pi0
        try:
            return evaluate_v_word(entries)
        except ThompsonError as exc:
            raise EmbeddingError(f"{where}: {exc}") from None
    pairs = []
    for e in entries:
        if not isinstance(e, str):
            # YAML 1.1 reads an unquoted 10:01 as a base-60 integer
            raise EmbeddingError(f"{where}: leaf entry {e!r} must be a quoted 'domain:range' string")
        parts = str(e).split(":")
        if len(parts) != 2:
            raise EmbeddingError(f"{where}: leaf entry {e!r} is not 'domain:range'")
        pairs.append(tuple(p.strip() for p in parts))
    try:
        return PrefixMap.from_pairs(pairs)
    except (ThompsonError, AddressError) as exc:
        raise EmbeddingError(f"{where}: {exc}") from None


def parse_spec(text: str, doc: str = "<spec>") -> EmbeddingSpec:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise EmbeddingError(f"{doc}: {exc}") from None
    if not isinstance(data, dict):
        raise EmbeddingError(f"{doc}: expected a mapping document")
    for key in ("m", "g_generators", "coset_action"):
        if key not in data:
            raise EmbeddingError(f"{doc}: missing field '{key}'")
    m = data["m"]
    if not isinstance(m, int):
        raise EmbeddingError(f"{doc}: field 'm' must be an integer")
    act = {}
    for n, row in enumerate(data["coset_action"] or []):
        match = _ROW.match(str(row))
        if not match:
            raise EmbeddingError(f"{doc}: coset_action[{n}]: expected 'gen, i -> j, hword', got {row!r}")
        g, i, j, hw = match.groups()
        act[(g, int(i))] = (int(j), _parse_word(hw))
    h_emb = {}
    for h, entries in (data.get("h_embedding") or {}).items():
        h_emb[str(h)] = _parse_leaf_table(entries, f"{doc}: h_embedding.{h}")
    part = data.get("partition")
    try:
        partition = tuple(address("" if u is None else str(u)) for u in part) if part is not None \
            else right_comb_partition(m)
    except AddressError as exc:
        raise EmbeddingError(f"{doc}: partition: {exc}") from None
    spec = EmbeddingSpec(
        m=m,
        g_generators=tuple(str(s) for s in data["g_generators"]),
        h_generators=tuple(str(s) for s in data.get("h_generators") or h_emb),
        coset_action=act,
        h_embedding=h_emb,
        partition=partition,
        relators=tuple(_parse_word(r) for r in data.get("relators") or ()),
    )
    errors = validate_spec(spec)
    if errors:
        raise EmbeddingError(f"{doc}: " + "; ".join(errors))
    return spec


def load_spec(path) -> EmbeddingSpec:
    path = Path(path)
    return parse_spec(path.read_text(), str(path))


def dump_spec(spec: EmbeddingSpec) -> str:
    rows = [f"{g}, {i} -> {j}, {' '.join(w) if w else '1'}"
            for (g, i), (j, w) in sorted(spec.coset_action.items())]
    doc = {
        "m": spec.m,
        "g_generators": list(spec.g_generators),
        "h_generators": list(spec.h_generators),
        "coset_action": rows,
        "h_embedding": {h: [f"{d}:{r}" for d, r in p.leaves] for h, p in spec.h_embedding.items()},
        "partition": list(spec.partition),
        "relators": [" ".join(r) for r in spec.relators],
    }
    return yaml.safe_dump(doc, sort_keys=False)


def dump_maps(gens: dict) -> str:
    return yaml.safe_dump({s: [f"{d}:{r}" for d, r in p.leaves] for s, p in gens.items()}, sort_keys=False)
