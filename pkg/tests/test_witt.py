"""Witt-ring layer: arithmetic, valuation, Frobenius lift, Teichmueller."""

import random

import pytest

from sigmadic.errors import MixedField, NonUnitInverse, PrecisionLoss
from sigmadic.witt import INFINITY, extend_ring, make_ring, parse_witt


def z7():
    return make_ring(7, 1, 4)


def w4():
    return make_ring(2, 2, 4)


def test_valuation_fixtures():
    R = z7()
    assert R.element(98).val() == 2  # 98 = 2 * 7^2
    assert R.element(1).val() == 0
    assert R.element(0).val() == INFINITY
    assert R.element(7**3).val() == 3
    assert R.element(7**4).val() == INFINITY  # vanishes mod p^N


def test_valuation_is_a_valuation():
    R = make_ring(3, 2, 5)
    rng = random.Random(0)
    for _ in range(200):
        x, y = R.random_element(rng), R.random_element(rng)
        vx, vy = x.val(), y.val()
        prod_val = (x * y).val()
        if vx + vy >= R.N or vx == INFINITY or vy == INFINITY:
            assert prod_val == INFINITY or prod_val >= min(R.N, vx + vy)
        else:
            assert prod_val == vx + vy
        assert (x + y).val() >= min(vx, vy)


def test_units_have_valuation_zero_products():
    R = z7()
    rng = random.Random(1)
    for _ in range(50):
        u, v = R.random_unit(rng), R.random_unit(rng)
        assert (u * v * R.element(7**3)).val() == 3


def test_inverse_of_units():
    R = z7()
    assert R.element(36).inverse() == R.element(1534)
    with pytest.raises(NonUnitInverse):
        R.element(7).inverse()
    rng = random.Random(2)
    R2 = make_ring(2, 3, 5)
    for _ in range(30):
        u = R2.random_unit(rng)
        assert u * u.inverse() == R2.one()


def test_quotient_conventions():
    R = z7()
    x = R.element(10)
    assert x.quot(R.zero()) == R.zero()  # Q(x, 0) = 0
    assert R.zero().quot(x) == R.zero()
    assert R.element(98).quot(R.element(49)) == R.element(2)
    assert R.element(14).quot(R.element(7)) == R.element(2)
    with pytest.raises(PrecisionLoss):
        R.element(7).quot(R.element(49))


def test_teichmuller_fixtures():
    R = z7()
    t6 = R.teichmuller(R.field.element((6,)))
    assert t6 == R.element(2400)
    assert t6**7 == t6
    W = make_ring(2, 2, 3)
    w = W.teichmuller(W.field.gen())
    assert w**3 == W.one()  # teich(alpha)^3 = teich(alpha^3) = 1


def test_teichmuller_multiplicative():
    R = make_ring(3, 2, 4)
    F = R.field
    for a in F.elements():
        for b in F.elements():
            assert R.teichmuller(a) * R.teichmuller(b) == R.teichmuller(a * b)


def test_frobenius_ring_homomorphism_and_residue_law():
    for (p, k, N) in ((2, 2, 4), (3, 2, 5), (7, 3, 4)):
        R = make_ring(p, k, N)
        rng = random.Random(3)
        for _ in range(40):
            x, y = R.random_element(rng), R.random_element(rng)
            assert (x + y).frobenius() == x.frobenius() + y.frobenius()
            assert (x * y).frobenius() == x.frobenius() * y.frobenius()
            assert (x.frobenius() - x**p).val() >= 1
            assert x.frobenius(k) == x
            assert x.frobenius().val() == x.val()


def test_frobenius_acts_digitwise_on_teichmuller_digits():
    R = make_ring(3, 2, 5)
    rng = random.Random(4)
    for _ in range(20):
        x = R.random_element(rng)
        got = x.frobenius().teich_digits()
        want = [d.frobenius() for d in x.teich_digits()]
        assert list(got) == want


def test_teich_digit_expansion_reconstructs_element():
    R = make_ring(2, 2, 4)
    rng = random.Random(5)
    for _ in range(25):
        x = R.random_element(rng)
        assert R.from_teich_digits(x.teich_digits()) == x


def test_parse_witt_roundtrip():
    R = z7()
    x = R.element(2166)
    assert parse_witt(R, str(x)) == x
    assert parse_witt(R, x.digits_text()) == x
    W = w4()
    rng = random.Random(6)
    for _ in range(10):
        y = W.random_element(rng)
        assert parse_witt(W, y.digits_text()) == y


def test_mixed_ring_operations_rejected():
    with pytest.raises(MixedField):
        z7().element(1) + make_ring(7, 1, 5).element(1)


def test_extend_ring_is_a_sigma_compatible_embedding():
    small = w4()
    big, emb = extend_ring(small, 2)
    assert big.k == 4 and big.N == small.N
    rng = random.Random(7)
    for _ in range(25):
        x, y = small.random_element(rng), small.random_element(rng)
        assert emb(x + y) == emb(x) + emb(y)
        assert emb(x * y) == emb(x) * emb(y)
        assert emb(x.frobenius()) == emb(x).frobenius()
        assert emb(x).val() == x.val()
    w = small.teichmuller(small.field.gen())
    img = emb(w)
    assert img ** (2**4) == img  # Teichmuller goes to Teichmuller
