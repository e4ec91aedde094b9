"""Binary addresses, metric balls ``u*`` and complete prefix codes.

Addresses are plain ``str`` over ``"01"`` (``""`` is the root).  Python's
string order already puts a prefix before its extensions, which gives the
canonical leaf numbering used everywhere else.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable


class AddressError(ValueError):
    pass


def address(bits) -> str:
    s = "".join(str(b) for b in bits) if not isinstance(bits, str) else bits
    if s.strip("01"):
        raise AddressError(f"not a binary address: {bits!r}")
    return s


def is_prefix(u: str, v: str) -> bool:
    return v.startswith(u)


def comparable(u: str, v: str) -> bool:
    """True iff the balls u* and v* intersect."""
    return u.startswith(v) or v.startswith(u)


def balls_disjoint(xs: Iterable[str], ys: Iterable[str]) -> bool:
    ys = list(ys)
    return not any(comparable(x, y) for x in xs for y in ys)


def is_prefix_free(leaves: Iterable[str]) -> bool:
    srt = sorted(set(leaves))
    # after sorting, a prefix sits directly before some extension of it
    return all(not srt[i + 1].startswith(srt[i]) for i in range(len(srt) - 1))


def kraft_sum(leaves: Iterable[str]) -> Fraction:
    return sum((Fraction(1, 2 ** len(u)) for u in leaves), Fraction(0))


def is_complete_antichain(leaves: Iterable[str]) -> bool:
    leaves = list(leaves)
    if len(set(leaves)) != len(leaves):
        return False
    try:
        for u in leaves:
            address(u)
    except AddressError:
        return False
    return is_prefix_free(leaves) and kraft_sum(leaves) == 1


def antichain(leaves: Iterable[str]) -> tuple:
    """Validated, sorted tuple of leaves."""
    out = tuple(sorted(address(u) for u in leaves))
    if not is_complete_antichain(out):
        raise AddressError(f"not a complete antichain: {list(out)}")
    return out


def common_refinement(a: Iterable[str], b: Iterable[str]) -> tuple:
    """Coarsest complete antichain refining both inputs."""
    b = list(b)
    out = set()
    for x in a:
        for y in b:
            if y.startswith(x):
                out.add(y)
            elif x.startswith(y):
                out.add(x)
    return tuple(sorted(out))


def refines(fine: Iterable[str], coarse: Iterable[str]) -> bool:
    coarse = set(coarse)
    return all(any(u[:k] in coarse for k in range(len(u) + 1)) for u in fine)


def leaf_prefix(leaves, u: str):
    """The member of ``leaves`` (a set) that is a prefix of ``u``, or None."""
    for k in range(len(u) + 1):
        if u[:k] in leaves:
            return u[:k]
    return None


def test_partition() -> list:
    return [format(i, "03b") for i in range(8)]


test_partition.__test__ = False  # not a pytest test


def right_comb(m: int) -> tuple:
    """``{0, 10, ..., 1^(m-2)0, 1^(m-1)}``; the root alone for m = 1."""
    if m < 1:
        raise AddressError("a partition needs at least one leaf")
    if m == 1:
        return ("",)
    return tuple(["1" * i + "0" for i in range(m - 1)] + ["1" * (m - 1)])


def common_prefix_length(x: str, y: str) -> int:
    n = 0
    for a, b in zip(x, y):
        if a != b:
            break
        n += 1
    return n


def metric(x: str, y: str) -> float:
    """``exp(-l)`` for the longest common prefix length ``l`` of two ends.

    ``x`` and ``y`` are finite approximations that must already differ.
    """
    x, y = address(x), address(y)
    l = common_prefix_length(x, y)
    if l == min(len(x), len(y)):
        raise AddressError("approximations do not determine the common prefix")
    return math.exp(-l)
