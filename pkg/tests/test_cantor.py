import math

import pytest

from cowpv.cantor import (
    AddressError,
    antichain,
    balls_disjoint,
    common_refinement,
    is_complete_antichain,
    is_prefix_free,
    kraft_sum,
    metric,
    refines,
    right_comb,
    test_partition,
)


@pytest.mark.parametrize("leaves,expected", [
    ([""], True),
    (["0", "10", "11"], True),
    (["0", "1", "11"], False),
    (["0", "10"], False),
    (["00", "01", "10", "11"], True),
])
def test_complete_antichain(leaves, expected):
    assert is_complete_antichain(leaves) is expected


def test_prefix_free_and_kraft():
    assert is_prefix_free(["0", "10", "110"])
    assert not is_prefix_free(["1", "11"])
    assert kraft_sum(["0", "10", "11"]) == 1


def test_antichain_rejects_bad_addresses():
    with pytest.raises(AddressError):
        antichain(["0", "2"])
    with pytest.raises(AddressError):
        antichain(["0", "01", "1"])


@pytest.mark.parametrize("a,b,expected", [
    ([""], ["0", "1"], ("0", "1")),
    (["0", "1"], ["0", "10", "11"], ("0", "10", "11")),
    (["00", "01", "1"], ["0", "10", "11"], ("00", "01", "10", "11")),
])
def test_common_refinement(a, b, expected):
    r = common_refinement(a, b)
    assert tuple(r) == expected
    assert refines(r, a) and refines(r, b)


def test_test_partition():
    balls = test_partition()
    assert list(balls) == ["000", "001", "010", "011", "100", "101", "110", "111"]
    assert is_complete_antichain(balls)


def test_right_comb():
    assert tuple(right_comb(1)) == ("",)
    assert tuple(right_comb(4)) == ("0", "10", "110", "111")


def test_metric():
    assert metric("01", "00") == pytest.approx(math.exp(-1))
    assert metric("10", "00") == 1.0
    assert metric("110", "111") == pytest.approx(math.exp(-2))


def test_balls_disjoint():
    assert balls_disjoint(["0"], ["10", "11"])
    assert not balls_disjoint(["0"], ["01"])
    assert not balls_disjoint([""], ["1"])
    assert balls_disjoint(["00", "11"], ["01", "10"])
