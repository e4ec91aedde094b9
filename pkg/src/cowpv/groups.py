"""Finite groups as explicit Cayley tables, and endomorphisms between them.

Elements are dense indices ``0..k-1``; display names are kept on the side.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from pathlib import Path
from typing import Optional, Sequence

import yaml


class GroupError(ValueError):
    """Raised when a table, endomorphism or group file is not acceptable."""


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.errors

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "valid"
        return "invalid:\n" + "\n".join("  " + e for e in self.errors)


@dataclass(frozen=True)
class GroupTable:
    names: tuple
    mul: tuple
    identity: int
    inv: tuple = field(default=())

    @property
    def order(self) -> int:
        return len(self.names)

    @classmethod
    def from_table(cls, names: Sequence[str], table, identity: int = 0) -> "GroupTable":
        """Build an (unvalidated) table, filling ``inv`` by search.

        Elements without a two-sided inverse get ``-1``.
        """
        mul = tuple(tuple(int(v) for v in row) for row in table)
        k = len(mul)
        inv = []
        for x in range(k):
            found = -1
            for y in range(k):
                if (0 <= identity < k and len(mul[x]) == k and len(mul[y]) == k
                        and mul[x][y] == identity and mul[y][x] == identity):
                    found = y
                    break
            inv.append(found)
        return cls(tuple(str(n) for n in names), mul, identity, tuple(inv))

    def __call__(self, x: int, y: int) -> int:
        return self.mul[x][y]

    def elements(self) -> range:
        return range(self.order)

    def nonidentity(self) -> list:
        return [x for x in range(self.order) if x != self.identity]

    def name(self, x: int) -> str:
        return self.names[x]

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise GroupError(f"unknown group element {name!r}") from None

    def element_order(self, x: int) -> int:
        n, y = 1, x
        while y != self.identity:
            y = self.mul[y][x]
            n += 1
        return n

    def power(self, x: int, n: int) -> int:
        y = self.identity
        for _ in range(n):
            y = self.mul[y][x]
        return y


def validate_group(g: GroupTable) -> ValidationReport:
    k = len(g.names)
    errors = []
    if k < 1:
        return ValidationReport(("order must be positive",))
    if len(set(g.names)) != k:
        errors.append("element names are not distinct")
    if len(g.mul) != k or any(len(row) != k for row in g.mul):
        errors.append(f"dimension mismatch: table must be {k}x{k}")
        return ValidationReport(tuple(errors))
    if len(g.inv) != k:
        errors.append(f"dimension mismatch: inverse table must have length {k}")
        return ValidationReport(tuple(errors))
    bad = [(x, y) for x in range(k) for y in range(k) if not 0 <= g.mul[x][y] < k]
    if bad:
        errors.extend(f"entry out of range at mul[{x}][{y}]" for x, y in bad)
        return ValidationReport(tuple(errors))
    e = g.identity
    if not 0 <= e < k:
        return ValidationReport(tuple(errors) + (f"identity index {e} out of range",))
    for x in range(k):
        if g.mul[e][x] != x or g.mul[x][e] != x:
            errors.append(f"identity axiom fails at x={x}")
    for x in range(k):
        y = g.inv[x]
        if not 0 <= y < k or g.mul[x][y] != e or g.mul[y][x] != e:
            errors.append(f"inverse axiom fails at x={x}")
    m = g.mul
    for x in range(k):
        for y in range(k):
            xy = m[x][y]
            for z in range(k):
                if m[xy][z] != m[x][m[y][z]]:
                    errors.append(f"associativity fails at (x, y, z)=({x}, {y}, {z})")
                    return ValidationReport(tuple(errors))
    return ValidationReport(tuple(errors))


def make_group(names, table, identity: int = 0) -> GroupTable:
    g = GroupTable.from_table(names, table, identity)
    report = validate_group(g)
    if not report:
        raise GroupError(str(report))
    return g


@dataclass(frozen=True)
class Endomorphism:
    source: GroupTable
    image: tuple

    def __call__(self, x: int) -> int:
        return self.image[x]

    def power(self, x: int, n: int) -> int:
        for _ in range(n):
            x = self.image[x]
        return x

    @property
    def is_identity(self) -> bool:
        return all(self.image[x] == x for x in range(self.source.order))


def validate_endomorphism(theta: Endomorphism) -> ValidationReport:
    g = theta.source
    k = g.order
    if len(theta.image) != k:
        return ValidationReport((f"dimension mismatch: image must have length {k}",))
    out = [x for x in range(k) if not 0 <= theta.image[x] < k]
    if out:
        return ValidationReport(tuple(f"image index out of range at x={x}" for x in out))
    errors = []
    if theta.image[g.identity] != g.identity:
        errors.append("identity is not mapped to identity")
    im = theta.image
    for x in range(k):
        for y in range(k):
            if im[g.mul[x][y]] != g.mul[im[x]][im[y]]:
                errors.append(f"not multiplicative at (x, y)=({x}, {y})")
    return ValidationReport(tuple(errors))


def make_endomorphism(g: GroupTable, image) -> Endomorphism:
    theta = Endomorphism(g, tuple(int(v) for v in image))
    report = validate_endomorphism(theta)
    if not report:
        raise GroupError(str(report))
    return theta


def identity_endomorphism(g: GroupTable) -> Endomorphism:
    return Endomorphism(g, tuple(range(g.order)))


def trivial_endomorphism(g: GroupTable) -> Endomorphism:
    return Endomorphism(g, (g.identity,) * g.order)


def power_endomorphism(g: GroupTable, n: int) -> Endomorphism:
    """x -> x^n; only a homomorphism when G is abelian (validated)."""
    return make_endomorphism(g, [g.power(x, n) for x in range(g.order)])


# -- standard fixtures ------------------------------------------------------

def cyclic_group(n: int) -> GroupTable:
    if n < 1:
        raise GroupError("cyclic group needs n >= 1")
    names = ["e"] + ["a" if i == 1 else f"a^{i}" for i in range(1, n)]
    return make_group(names, [[(i + j) % n for j in range(n)] for i in range(n)])


def _cycle_name(p) -> str:
    seen, cycles = set(), []
    for start in range(len(p)):
        if start in seen or p[start] == start:
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(str(x + 1))
            x = p[x]
        cycles.append("(" + "".join(cyc) + ")")
    return "".join(cycles) or "e"


def symmetric_group(n: int = 3) -> GroupTable:
    perms = sorted(permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    # (p*q)(x) = p(q(x)): apply q first
    table = [[index[tuple(p[q[x]] for x in range(n))] for q in perms] for p in perms]
    return make_group([_cycle_name(p) for p in perms], table, index[tuple(range(n))])


def klein_group() -> GroupTable:
    return make_group(["e", "a", "b", "ab"], [[i ^ j for j in range(4)] for i in range(4)])


def standard_group(name: str, n: Optional[int] = None) -> GroupTable:
    """Named fixtures: ``cyclic`` (needs n), ``symmetric`` (n=3), ``klein``.

    Short spellings ``Z4``, ``C4``, ``S3`` and ``cyclic:4`` are accepted.
    """
    key = name.strip().lower()
    if n is None:
        for prefix, full in (("cyclic:", "cyclic"), ("symmetric:", "symmetric"),
                             ("z", "cyclic"), ("c", "cyclic"), ("s", "symmetric")):
            rest = key[len(prefix):]
            if key.startswith(prefix) and rest.isdigit():
                key, n = full, int(rest)
                break
    if key == "cyclic":
        if n is None:
            raise GroupError("cyclic group needs an order")
        return cyclic_group(n)
    if key == "symmetric":
        if n not in (None, 3):
            raise GroupError("only the symmetric group on 3 letters is provided")
        return symmetric_group(3)
    if key in ("klein", "v4"):
        return klein_group()
    raise GroupError(f"unknown group {name!r}")


def generates(g: GroupTable, gens: Sequence[int]) -> bool:
    """Monoid closure of ``gens`` reaches every element."""
    seen = {g.identity}
    frontier = [g.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = g.mul[x][s]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return len(seen) == g.order


def default_generators(g: GroupTable) -> tuple:
    return tuple(g.nonidentity())


# -- group files ------------------------------------------------------------

def _field(mapping, key, doc, required=True):
    for k_node, v_node in mapping.value:
        if k_node.value == key:
            return v_node
    if required:
        raise GroupError(f"{doc}: missing field '{key}'")
    return None


def _where(node, doc) -> str:
    return f"{doc}:{node.start_mark.line + 1}"


def _load_nodes(text: str, doc: str):
    try:
        root = yaml.compose(text)
    except yaml.YAMLError as exc:
        raise GroupError(f"{doc}: {exc}") from None
    if root is None or not isinstance(root, yaml.MappingNode):
        raise GroupError(f"{doc}: expected a mapping document")
    return root, yaml.safe_load(text)


def parse_group_text(text: str, doc: str = "<group>") -> tuple:
    """Parse a group document; returns ``(GroupTable, theta image or None)``."""
    root, data = _load_nodes(text, doc)
    order_node = _field(root, "order", doc)
    names_node = _field(root, "names", doc)
    table_node = _field(root, "table", doc)
    ident_node = _field(root, "identity", doc, required=False)
    theta_node = _field(root, "theta", doc, required=False)

    order = data["order"]
    if not isinstance(order, int) or order < 1:
        raise GroupError(f"{_where(order_node, doc)}: field 'order' must be a positive integer")
    names = data["names"]
    if not isinstance(names, list) or len(names) != order:
        raise GroupError(f"{_where(names_node, doc)}: field 'names' must list {order} names")
    table = data["table"]
    if isinstance(table, list) and table and not isinstance(table[0], list):
        if len(table) != order * order:
            raise GroupError(f"{_where(table_node, doc)}: field 'table' must hold {order * order} entries")
        table = [table[i * order:(i + 1) * order] for i in range(order)]
    if (not isinstance(table, list) or len(table) != order
            or any(not isinstance(r, list) or len(r) != order for r in table)):
        raise GroupError(f"{_where(table_node, doc)}: field 'table' must be {order}x{order}")
    if any(not isinstance(v, int) for row in table for v in row):
        raise GroupError(f"{_where(table_node, doc)}: field 'table' must hold integer indices")
    identity = data.get("identity", 0)
    if not isinstance(identity, int):
        raise GroupError(f"{_where(ident_node, doc)}: field 'identity' must be an index")
    g = GroupTable.from_table(names, table, identity)
    report = validate_group(g)
    if not report:
        raise GroupError(f"{_where(table_node, doc)}: {report}")
    theta = data.get("theta")
    if theta is not None:
        if not isinstance(theta, list) or len(theta) != order or any(not isinstance(v, int) for v in theta):
            raise GroupError(f"{_where(theta_node, doc)}: field 'theta' must list {order} indices")
        rep = validate_endomorphism(Endomorphism(g, tuple(theta)))
        if not rep:
            raise GroupError(f"{_where(theta_node, doc)}: {rep}")
    return g, (tuple(theta) if theta is not None else None)


def load_group(path) -> tuple:
    path = Path(path)
    return parse_group_text(path.read_text(), str(path))


def dump_group(g: GroupTable, theta: Optional[Endomorphism] = None) -> str:
    doc = {
        "order": g.order,
        "names": list(g.names),
        "table": [list(r) for r in g.mul],
        "identity": g.identity,
    }
    if theta is not None:
        doc["theta"] = list(theta.image)
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=None)
