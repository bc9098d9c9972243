"""Leading-term sorts, residue rings, angular components, partial addition."""

import random

import pytest

from sigmadic.errors import InsufficientPrecision
from sigmadic.leading_terms import (
    LeadingTerm,
    ResidueRingElem,
    angular_component,
    level_for_index,
    partial_add,
)
from sigmadic.witt import INFINITY, make_ring


def z7():
    return make_ring(7, 1, 4)


def lt(R, value, level):
    return LeadingTerm.from_witt(R.element(value), level)


def test_lt_map_fixtures():
    R = z7()
    a = lt(R, 10, 1)
    assert (a.gamma, a.unit) == (0, (10,))
    assert str(a) == "lt[1](0; 10)"
    b = lt(R, 490, 1)  # 490 = 7^2 * 10
    assert (b.gamma, b.unit) == (2, (10,))
    assert str(b) == "lt[1](2; 10)"
    z = lt(R, 0, 1)
    assert z.is_zero() and z.gamma is INFINITY
    assert str(z) == "0[1]"


def test_lt_map_requires_enough_digits():
    R = z7()
    with pytest.raises(InsufficientPrecision):
        lt(R, 343, 1)  # val 3, level 1 would need 5 digits but N = 4


def test_sort_index_normalizes_to_its_p_valuation():
    R = z7()
    assert level_for_index(49, 7) == 2
    assert level_for_index(14, 7) == 1  # 14 = 2 * 7, only val(n) matters
    assert LeadingTerm.from_witt(R.element(10), 0, index=14) == lt(R, 10, 1)


def test_lt_multiplication():
    R = z7()
    prod = lt(R, 10, 1) * lt(R, 5, 1)
    assert (prod.gamma, prod.unit) == (0, (1,))  # 50 = 1 mod 49
    assert str(prod) == "lt[1](0; 1)"
    assert lt(R, 10, 1) * lt(R, 1, 1) == lt(R, 10, 1)
    assert (lt(R, 10, 1) * LeadingTerm.zero(R, 1)).is_zero()


def test_lt_valuation_divisibility_predicate():
    R = z7()
    assert lt(R, 7, 1).divides(lt(R, 49, 1))
    assert not lt(R, 49, 1).divides(lt(R, 7, 1))
    assert lt(R, 7, 1).divides(lt(R, 7, 1))


def test_lt_projection():
    R = z7()
    a = lt(R, 10, 1)
    assert a.project(1) == a
    down = a.project(0)
    assert (down.level, down.gamma, down.unit) == (0, 0, (3,))  # 10 mod 7
    assert LeadingTerm.zero(R, 1).project(0) == LeadingTerm.zero(R, 0)
    with pytest.raises(ValueError):
        a.project(2)


def test_projection_commutes_with_direct_map():
    R = make_ring(3, 2, 5)
    rng = random.Random(0)
    for _ in range(100):
        x = R.random_element(rng)
        if x.val() is INFINITY or x.val() > R.N - 3:
            continue
        assert LeadingTerm.from_witt(x, 2).project(0) == LeadingTerm.from_witt(x, 0)
        assert LeadingTerm.from_witt(x, 2).gamma == x.val()


def test_partial_add_fixtures():
    R = z7()
    a = partial_add(lt(R, 1, 1), lt(R, 6, 1), 0)
    assert (a.level, a.gamma, a.unit) == (0, 1, (1,))  # 1 + 6 = 7
    assert str(a) == "lt[0](1; 1)"
    b = partial_add(lt(R, 1, 1), lt(R, 48, 1), 0)
    assert b.is_zero() and b.level == 0  # val(49) = 2 exceeds the slack 1
    assert str(b) == "0[0]"
    c = partial_add(lt(R, 1, 1), lt(R, 1, 1), 0)
    assert (c.gamma, c.unit) == (0, (2,))
    assert str(c) == "lt[0](0; 2)"


def test_partial_add_zero_and_level_rules():
    R = z7()
    z = LeadingTerm.zero(R, 1)
    assert partial_add(z, z, 0) == LeadingTerm.zero(R, 0)
    assert partial_add(z, lt(R, 10, 1), 0) == lt(R, 10, 0)
    assert partial_add(lt(R, 10, 1), z, 1) == lt(R, 10, 1)
    with pytest.raises(ValueError):
        partial_add(lt(R, 1, 0), lt(R, 1, 0), 1)  # cannot refine the level


def test_partial_add_matches_true_sum_when_defined():
    """Well-definedness: on representatives, the result is lt(x + y) whenever
    the cancellation bound holds, and 0 at the destination otherwise."""
    for (p, k) in ((7, 1), (2, 2)):
        R = make_ring(p, k, 8)
        rng = random.Random(1)
        src, dst = 2, 0
        slack = src - dst
        for _ in range(150):
            x, y = R.random_element(rng), R.random_element(rng)
            vx, vy = x.val(), y.val()
            if min(vx, vy) > R.N - src - 2:
                continue
            got = partial_add(
                LeadingTerm.from_witt(x, src), LeadingTerm.from_witt(y, src), dst
            )
            vs = (x + y).val()
            if vs is INFINITY or vs > min(vx, vy) + slack:
                assert got.is_zero()
            else:
                assert got == LeadingTerm.from_witt(x + y, dst)


def test_angular_component_fixtures():
    R = z7()
    assert angular_component(R.element(98), 0) == ResidueRingElem(R, 0, (2,))
    assert str(angular_component(R.element(98), 0)) == "res[0](2)"
    for g in range(3):
        assert angular_component(R.element(7**g), 1) == ResidueRingElem(R, 1, (1,))
    assert angular_component(R.zero(), 1).is_zero()
    with pytest.raises(InsufficientPrecision):
        angular_component(R.element(343), 1)


def test_angular_component_is_multiplicative():
    R = make_ring(7, 1, 8)
    rng = random.Random(2)
    count = 0
    while count < 100:
        x, y = R.random_element(rng), R.random_element(rng)
        if x.val() + y.val() > R.N - 3:
            continue
        count += 1
        assert angular_component(x * y, 1) == angular_component(x, 1) * angular_component(y, 1)


def test_angular_component_commutes_with_frobenius():
    R = make_ring(3, 2, 6)
    rng = random.Random(3)
    count = 0
    while count < 100:
        x = R.random_element(rng)
        if x.val() > R.N - 3:
            continue
        count += 1
        assert angular_component(x.frobenius(), 1) == angular_component(x, 1).frobenius()


def test_leading_term_is_valuation_plus_angular_component():
    R = make_ring(7, 1, 6)
    rng = random.Random(4)
    for _ in range(100):
        x = R.random_element(rng)
        if x.val() is INFINITY or x.val() > R.N - 3:
            continue
        a = LeadingTerm.from_witt(x, 1)
        assert a.gamma == x.val()
        assert ResidueRingElem(R, 1, a.unit) == angular_component(x, 1)


def test_residue_ring_arithmetic():
    R = z7()
    two = ResidueRingElem.from_witt(R.element(2), 1)
    ten = ResidueRingElem.from_witt(R.element(10), 1)
    assert two + ten == ResidueRingElem(R, 1, (12,))
    assert two * ten == ResidueRingElem(R, 1, (20,))
    assert -two == ResidueRingElem(R, 1, (47,))
    assert (two + (-two)).is_zero()
    with pytest.raises(InsufficientPrecision):
        ResidueRingElem.from_witt(R.element(1), 5)  # needs 6 digits, N = 4
