"""Finite-field layer: arithmetic tables, moduli, linearized equations."""

import random

import pytest

from sigmadic.errors import AllCoefficientsZero, DivisionByZero, MixedField
from sigmadic.finite_field import (
    FieldDesc,
    FieldEmbedding,
    default_modulus,
    extend_field,
    format_elem,
    is_irreducible,
    parse_elem,
    solve_linearized,
)


def f4():
    return FieldDesc(2, 2)


def test_default_moduli_are_lex_least():
    assert default_modulus(2, 1) == (0, 1)
    assert default_modulus(7, 1) == (0, 1)
    assert default_modulus(337, 1) == (0, 1)
    assert default_modulus(2, 2) == (1, 1, 1)
    assert default_modulus(3, 2) == (1, 0, 1)
    assert default_modulus(2, 4) == (1, 0, 0, 1, 1)


def test_irreducibility_rejects_products():
    # (x^2+x+1)^2 = x^4+x^2+1 over F_2
    assert not is_irreducible((1, 0, 1, 0, 1), 2)
    assert is_irreducible((1, 1, 0, 0, 1), 2)
    assert is_irreducible((0, 1), 5)
    assert not is_irreducible((0, 0, 1), 5)  # x^2


def test_f4_multiplication_table():
    F = f4()
    a = F.gen()
    one = F.one()
    assert a * a == a + one          # alpha^2 = alpha + 1
    assert a * (a + one) == one      # alpha * (alpha + 1) = 1
    assert a.frobenius() == a + one  # frobenius is squaring
    assert a.inverse() == a + one


def test_field_inverse_property():
    for p, k in ((2, 3), (3, 2), (5, 1), (7, 2)):
        F = FieldDesc(p, k)
        for x in F.elements():
            if x.is_zero():
                with pytest.raises(DivisionByZero):
                    x.inverse()
                continue
            assert (x * x.inverse()).is_one()


def test_frobenius_is_field_automorphism_of_order_k():
    F = FieldDesc(3, 3)
    rng = random.Random(0)
    elems = list(F.elements())
    for _ in range(60):
        x, y = rng.choice(elems), rng.choice(elems)
        assert (x + y).frobenius() == x.frobenius() + y.frobenius()
        assert (x * y).frobenius() == x.frobenius() * y.frobenius()
        assert x.frobenius(F.k) == x
        assert x.frobenius() == x**F.p


def test_format_parse_roundtrip():
    F = FieldDesc(3, 2)
    for x in F.elements():
        assert parse_elem(F, format_elem(x)) == x


def test_linearized_fixtures_over_f4():
    F = f4()
    a, one, zero = F.gen(), F.one(), F.zero()
    # x^2 + x = 0 -> {0, 1}
    got = solve_linearized([one, one], zero)
    assert got.solutions == (zero, one)
    assert not got.extension_required
    # x^2 + x = 1 -> {alpha, alpha+1}
    got = solve_linearized([one, one], one)
    assert got.solutions == (a, a + one)
    # x^2 = alpha -> {alpha+1} (sqrt is bijective in char 2)
    got = solve_linearized([zero, one], a)
    assert got.solutions == (a + one,)


def test_linearized_no_solution_sets_extension_flag():
    F = f4()
    a, one = F.gen(), F.one()
    # x^2 + x = alpha has no roots in F_4 (absolute trace of alpha is 1)
    got = solve_linearized([one, one], a)
    assert got.solutions == ()
    assert got.extension_required


def test_linearized_rejects_degenerate_inputs():
    F = f4()
    with pytest.raises(AllCoefficientsZero):
        solve_linearized([F.zero(), F.zero()], F.one())
    G = FieldDesc(3, 1)
    with pytest.raises(MixedField):
        solve_linearized([F.one(), G.one()], F.one())


def test_embedding_preserves_structure():
    small = f4()
    big = extend_field(small, 2)
    assert big.k == 4
    emb = FieldEmbedding(small, big)
    elems = list(small.elements())
    for x in elems:
        for y in elems:
            assert emb(x + y) == emb(x) + emb(y)
            assert emb(x * y) == emb(x) * emb(y)
            assert emb(x.frobenius()) == emb(x).frobenius()
    images = {emb(x) for x in elems}
    assert len(images) == 4  # injective


def test_embedding_image_satisfies_small_modulus():
    small = FieldDesc(3, 2)
    big = extend_field(small, 3)
    emb = FieldEmbedding(small, big)
    g = emb.gen_image
    acc = big.zero()
    for c in reversed(small.modulus):
        acc = acc * g + big.element(c)
    assert acc.is_zero()
