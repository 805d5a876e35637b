"""Periodic configurations: anchoring, shifts, sums and block grouping."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from groupca.configs import (
    Cylinder,
    PeriodicConfig,
    config_add,
    config_shift,
    group_blocks,
    group_word,
    ungroup_blocks,
    ungroup_word,
)
from groupca.groups import GroupSpec

Z2 = GroupSpec((2,))
Z3 = GroupSpec((3,))


def cfg(group, *letters):
    return PeriodicConfig(group, tuple((a,) for a in letters))


def test_minimal_period_reduction():
    assert cfg(Z2, 0, 1, 0, 1).word == ((0,), (1,))
    assert cfg(Z2, 1, 1, 1).word == ((1,),)
    assert cfg(Z2, 0, 1, 1).period == 3


def test_anchored_equality_distinguishes_rotations():
    a = cfg(Z2, 0, 1)
    b = cfg(Z2, 1, 0)
    assert a != b
    assert a.same_orbit(b)
    assert a.canonical_rotation() == b.canonical_rotation()


def test_shift_examples():
    x = cfg(Z2, 0, 1)
    assert config_shift(x, 1) == cfg(Z2, 1, 0)
    assert config_shift(x, 1).same_orbit(x)
    const = cfg(Z2, 1)
    assert config_shift(const, 5) == const
    y = cfg(Z2, 0, 0, 1)
    assert config_shift(y, 3) == y


def test_shift_composed_period_times_is_identity():
    x = cfg(Z3, 0, 1, 2, 2)
    y = x
    for _ in range(x.period):
        y = y.shift(1)
    assert y == x


def test_add_examples():
    x = cfg(Z2, 0, 1)
    zero = PeriodicConfig.zero(Z2)
    assert config_add(x, zero) == x
    ones = cfg(Z2, 1)
    assert config_add(x, ones) == cfg(Z2, 1, 0)
    w = cfg(Z2, 0, 0, 1, 1)
    assert config_add(x, w) == cfg(Z2, 0, 1, 1, 0)


@given(st.data())
def test_add_is_commutative_group_small(data):
    words = st.lists(st.integers(0, 1), min_size=1, max_size=4)
    x = cfg(Z2, *data.draw(words))
    y = cfg(Z2, *data.draw(words))
    z = cfg(Z2, *data.draw(words))
    assert x + y == y + x
    assert (x + y) + z == x + (y + z)
    assert x + (-x) == PeriodicConfig.zero(Z2)
    assert x + PeriodicConfig.zero(Z2) == x


def test_at_indexing_is_anchored():
    x = cfg(Z2, 0, 1, 1)
    assert [x.at(i) for i in range(-3, 4)] == [
        (0,), (1,), (1,), (0,), (1,), (1,), (0,)
    ]
    assert x.window(-1, 3) == ((1,), (0,), (1,))


def test_group_blocks_examples():
    x = cfg(Z2, 0, 1, 1, 0)
    g = group_blocks(x, 2)
    assert g.alphabet == GroupSpec((2, 2))
    assert g.word == ((0, 1), (1, 0))
    assert group_blocks(x, 1) == x
    assert ungroup_blocks(g, Z2, 2) == x


def test_group_word_round_trip():
    w = ((0,), (1,), (1,), (0,))
    gw = group_word(w, 2)
    assert gw == ((0, 1), (1, 0))
    assert ungroup_word(gw, Z2, 2) == w
    with pytest.raises(ValueError):
        group_word(w, 3)


@given(st.lists(st.integers(0, 1), min_size=1, max_size=6), st.integers(1, 3))
def test_grouping_conjugates_shift_power(letters, r):
    x = cfg(Z2, *letters)
    lhs = group_blocks(x.shift(r), r)
    rhs = group_blocks(x, r).shift(1)
    assert lhs == rhs


def test_cylinder_membership():
    x = cfg(Z2, 0, 1)
    c = Cylinder(0, ((0,), (1,), (0,)))
    assert c.contains_config(x)
    assert not c.contains_config(x.shift(1))
    assert c.shifted(2) == Cylinder(2, c.word)
    assert Cylinder(0, ((0,),)).length == 1
    with pytest.raises(ValueError):
        Cylinder(0, ())
