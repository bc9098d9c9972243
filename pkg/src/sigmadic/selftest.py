"""Fast self-contained invariant checks, one PASS/FAIL line per suite.

These are smoke-level versions of the package's property tests, sized
to run in a couple of seconds from the command line.  Each suite is a
function that raises AssertionError with a readable message on the
first violation.
"""

from __future__ import annotations

import random
from typing import Callable, Iterable

from .errors import PrecisionLoss
from .finite_field import FieldDesc, solve_linearized
from .hensel import (
    Add,
    Apply,
    Const,
    Mul,
    Quot,
    Sigma,
    Sub,
    Var,
    prolong_eval,
    sigma_hensel_solve,
)
from .leading_terms import LeadingTerm, angular_component, partial_add
from .series import SeparatedSeries, weierstrass_divide
from .term_parser import format_term, parse_term
from .witt import INFINITY, RingDesc, make_ring


def random_term(rng: random.Random, ring: RingDesc, env=None, depth: int = 4):
    """A random term of the CLI grammar, for round-trip testing."""
    env = env or {}
    names = sorted(env)

    def gen(d: int):
        if d <= 0 or rng.random() < 0.25:
            if rng.randrange(3) == 0:
                return Const(ring.element(rng.randrange(0, ring.pN)))
            return Var()
        pick = rng.randrange(6 if names else 5)
        if pick == 0:
            return Add(gen(d - 1), gen(d - 1))
        if pick == 1:
            return Sub(gen(d - 1), gen(d - 1))
        if pick == 2:
            return Mul(gen(d - 1), gen(d - 1))
        if pick == 3:
            return Sigma(rng.randrange(1, 4), gen(d - 1))
        if pick == 4:
            return Quot(gen(d - 1), gen(d - 1))
        name = rng.choice(names)
        series = env[name]
        args = tuple(gen(d - 1) for _ in range(series.m_x + series.n_y))
        return Apply(name, series, args)

    return gen(depth)


def _check_frobenius_laws():
    ring = make_ring(3, 2, 5)
    rng = random.Random(10)
    for _ in range(50):
        x = ring.random_element(rng)
        y = ring.random_element(rng)
        sx, sy = x.frobenius(), y.frobenius()
        assert (x + y).frobenius() == sx + sy, "sigma must be additive"
        assert (x * y).frobenius() == sx * sy, "sigma must be multiplicative"
        assert (sx - x**ring.p).val() >= 1, "sigma must lift the p-power map"
        assert sx.val() == x.val(), "sigma must be an isometry"
        assert x.frobenius(ring.k) == x, "sigma^k must be the identity"


def _check_teichmuller():
    ring = make_ring(2, 2, 4)
    f = ring.field
    for a in f.elements():
        for b in f.elements():
            assert ring.teichmuller(a) * ring.teichmuller(b) == ring.teichmuller(a * b)
    w = ring.teichmuller(f.gen())
    assert w ** (ring.p**ring.k) == w, "Teichmuller lifts are p^k-th roots of themselves"


def _check_quotient_conventions():
    ring = make_ring(7, 1, 4)
    x = ring.element(10)
    assert x.quot(ring.zero()) == ring.zero(), "Q(x, 0) must be 0"
    assert ring.zero().quot(x) == ring.zero()
    try:
        ring.element(7).quot(ring.element(49))
        raise AssertionError("quot must refuse negative-valuation output")
    except PrecisionLoss:
        pass


def _check_leading_terms():
    ring = make_ring(7, 1, 4)
    lt = lambda v, m=1: LeadingTerm.from_witt(ring.element(v), m)
    got = partial_add(lt(1), lt(6), 0)
    assert str(got) == "lt[0](1; 1)", f"1+6 at level 0: {got}"
    assert partial_add(lt(1), lt(48), 0).is_zero(), "1+48 must vanish at level 0"
    got = partial_add(lt(1), lt(1), 0)
    assert str(got) == "lt[0](0; 2)", f"1+1 at level 0: {got}"
    rng = random.Random(11)
    for _ in range(20):
        x = ring.random_element(rng)
        y = ring.random_element(rng)
        if x.is_zero() or y.is_zero() or (x + y).is_zero():
            continue
        if x.val() > 1 or y.val() > 1:
            continue  # level-2 terms need val <= N - 3
        a = partial_add(LeadingTerm.from_witt(x, 2), LeadingTerm.from_witt(y, 2), 1)
        direct = x + y
        if a.is_zero():
            assert direct.val() > min(x.val(), y.val()) + 1, "zero result needs high cancellation"
        else:
            assert a == LeadingTerm.from_witt(direct, 1), "partial add must match true sum"


def _check_angular_components():
    ring = make_ring(3, 2, 5)
    rng = random.Random(12)
    for _ in range(30):
        x = ring.random_element(rng)
        y = ring.random_element(rng)
        if x.is_zero() or y.is_zero():
            continue
        axy = angular_component(x * y, 1)
        ax, ay = angular_component(x, 1), angular_component(y, 1)
        assert axy == ax * ay, "ac must be multiplicative"
        assert angular_component(x.frobenius(), 1) == angular_component(x, 1).frobenius()


def _check_weierstrass():
    ring = make_ring(3, 1, 4)
    rng = random.Random(13)
    for _ in range(5):
        d = rng.randrange(1, 4)
        coeffs = {((d,), (0,)): 1}
        for mu in range(d):
            coeffs[((mu,), (0,))] = 3 * rng.randrange(27)
        coeffs[((d + 1,), (0,))] = 3 * rng.randrange(27)
        coeffs[((0,), (1,))] = rng.randrange(81)
        f = SeparatedSeries(ring, 1, 1, coeffs)
        g = SeparatedSeries(
            ring,
            1,
            1,
            {
                ((rng.randrange(5),), (rng.randrange(3),)): rng.randrange(81)
                for _ in range(4)
            },
        )
        assert f.regular_degree(0) == d
        q, r = weierstrass_divide(g, f, 0)
        assert q * f + r == g, "division must re-expand exactly"
        assert r.var_degree(0) < d, "remainder degree must drop"


def _check_taylor_bound():
    ring = make_ring(7, 1, 5)
    rng = random.Random(14)
    for _ in range(20):
        coeffs = {
            ((rng.randrange(4),), ()): rng.randrange(ring.pN) for _ in range(4)
        }
        f = SeparatedSeries(ring, 1, 0, coeffs)
        a = ring.random_element(rng)
        eps = ring.element(7) * ring.random_element(rng)
        lhs = (
            f.evaluate([a + eps], [])
            - f.evaluate([a], [])
            - f.derivative(0).evaluate([a], []) * eps
        )
        bound = 2 * eps.val()
        assert lhs.val() >= bound, f"Taylor bound failed: {lhs.val()} < {bound}"


def _check_solver():
    ring = make_ring(7, 1, 4)
    t = Sub(Mul(Var(), Var()), Const(ring.element(2)))
    rep = sigma_hensel_solve(t, ring.element(3), xi=0)
    assert str(rep.root) == "2166", f"root {rep.root}"
    assert prolong_eval(t, rep.root).is_zero()
    vals = [s.residual_val for s in rep.steps]
    assert vals == sorted(set(vals)), "residual valuations must strictly increase"


def _check_linearized():
    for p, k in ((2, 2), (3, 1), (2, 3)):
        field = FieldDesc(p, k)
        rng = random.Random(15)
        elems = list(field.elements())
        for _ in range(20):
            coeffs = [rng.choice(elems) for _ in range(k + 1)]
            if all(c.is_zero() for c in coeffs):
                continue
            rhs = rng.choice(elems)
            got = solve_linearized(coeffs, rhs)
            brute = tuple(
                x
                for x in elems
                if sum(
                    (c * x ** (p**i) for i, c in enumerate(coeffs)),
                    field.zero(),
                )
                == rhs
            )
            assert got.solutions == brute, "linearized solutions must match brute force"


def _check_parser_roundtrip():
    ring = make_ring(5, 1, 4)
    rng = random.Random(16)
    for _ in range(50):
        t = random_term(rng, ring, depth=4)
        text = format_term(t)
        again = parse_term(text, ring)
        assert again == t, f"round-trip failed for {text!r}"
        assert format_term(again) == text


SUITES: tuple[tuple[str, Callable[[], None]], ...] = (
    ("frobenius-laws", _check_frobenius_laws),
    ("teichmuller-lifts", _check_teichmuller),
    ("quotient-conventions", _check_quotient_conventions),
    ("leading-terms", _check_leading_terms),
    ("angular-components", _check_angular_components),
    ("weierstrass-division", _check_weierstrass),
    ("taylor-bound", _check_taylor_bound),
    ("sigma-hensel-solver", _check_solver),
    ("linearized-equations", _check_linearized),
    ("parser-roundtrip", _check_parser_roundtrip),
)


def run_selftest(write: Callable[[str], None] = print) -> int:
    """Run every suite; returns the number of failures."""
    failures = 0
    for name, fn in SUITES:
        try:
            fn()
        except AssertionError as exc:
            failures += 1
            write(f"FAIL {name}: {exc}")
        else:
            write(f"PASS {name}")
    return failures
