"""Difference terms, prolongation calculus, and the successive-approximation solver."""

import random

import pytest

from sigmadic.errors import (
    ConfigRejected,
    QuotientSingularity,
    ResidueUnsolvable,
    StalledProgress,
    ZeroGradient,
)
from sigmadic.hensel import (
    Add,
    Apply,
    Const,
    Mul,
    Quot,
    Sigma,
    Sub,
    Var,
    check_config,
    embed_term,
    hensel_step,
    prolong_eval,
    prolongation,
    sigma_free,
    sigma_hensel_solve,
    term_gradient,
)
from sigmadic.leading_terms import LeadingTerm
from sigmadic.series import SeparatedSeries
from sigmadic.witt import INFINITY, extend_ring, make_ring


def z7():
    return make_ring(7, 1, 4)


def x_squared_minus_2(R):
    return Sub(Mul(Var(), Var()), Const(R.element(2)))


def test_prolongation_tuple():
    R = make_ring(3, 2, 5)
    a = R.teichmuller(R.field.gen())
    pro = prolongation(a, 2)
    assert pro == (a, a.frobenius(), a.frobenius(2))


def test_sigma_free_pushes_sigma_to_variables():
    R = z7()
    t = Sigma(1, Sub(Var(), Const(R.element(5))))
    u, n = sigma_free(t)
    assert n == 1
    # sigma acts on the constant; the variable becomes slot 1
    assert prolong_eval(t, R.element(9)) == R.element(4)
    assert prolong_eval(u if n else t, R.element(9)) == R.element(4)


def test_prolong_eval_fixtures():
    R = z7()
    drift = Sub(Sigma(1, Var()), Var())
    for v in (0, 3, 50):
        assert prolong_eval(drift, R.element(v)).is_zero()  # sigma = id on Z_p

    W = make_ring(2, 2, 4)
    r = W.field.gen()
    t = Mul(Var(), Sigma(1, Var()))
    # teich(r) * teich(r^2) = teich(r^3) = 1
    assert prolong_eval(t, W.teichmuller(r)) == W.teichmuller(r ** 3)
    assert prolong_eval(t, W.teichmuller(r)) == W.one()

    d = Sub(Sigma(1, Var()), Var())
    out = prolong_eval(d, W.teichmuller(r))
    assert out.val() == 0  # residues differ, so the difference is a unit


def test_prolong_eval_series_node():
    R = z7()
    geo = SeparatedSeries(R, 0, 1, {((), (j,)): R.one() for j in range(5)}, 5)
    t = Apply("geo", geo, (Var(),))
    assert prolong_eval(t, R.element(7)) == R.element(400)


def test_gradient_fixtures():
    R = make_ring(2, 2, 4)
    a = R.teichmuller(R.field.gen())
    t = Add(Mul(Sigma(1, Var()), Sigma(1, Var())), Mul(Const(R.element(3)), Var()))
    d = term_gradient(t, a)
    assert d == (R.element(3), R.element(2) * a.frobenius())

    c0, c1, c2 = R.element(5), R.element(9), R.element(2)
    lin = Add(
        Add(Mul(Const(c0), Var()), Mul(Const(c1), Sigma(1, Var()))),
        Mul(Const(c2), Sigma(2, Var())),
    )
    rng = random.Random(0)
    for _ in range(5):
        assert term_gradient(lin, R.random_element(rng)) == (c0, c1, c2)


def test_gradient_of_series_application_matches_finite_differences():
    R = make_ring(7, 1, 8)
    f = SeparatedSeries(R, 0, 1, {((), (j,)): R.element(7**j) for j in range(8)}, 8)
    t = Apply("f", f, (Var(),))
    a = R.element(7)
    (d,) = term_gradient(t, a)
    assert d == f.derivative(0).evaluate([], [a])
    rng = random.Random(1)
    for _ in range(20):
        eps = R.element(49) * R.random_unit(rng)
        lhs = prolong_eval(t, a + eps) - prolong_eval(t, a) - d * eps
        assert lhs.val() >= 2 * eps.val()


def test_gradient_quotient_rule_and_singularity():
    R = z7()
    t = Quot(Mul(Var(), Var()), Const(R.element(3)))
    a = R.element(5)
    (d,) = term_gradient(t, a)
    assert d == R.element(10) * R.element(3).inverse()
    sing = Quot(Var(), Sub(Var(), Const(R.element(3))))
    with pytest.raises(QuotientSingularity):
        term_gradient(sing, R.element(3))


def test_check_config_accepts_and_rejects():
    R = z7()
    t = x_squared_minus_2(R)
    cfg = check_config(t, R.element(3), xi=0)
    assert cfg.certified
    assert cfg.d == (R.element(6),)
    with pytest.raises(ConfigRejected) as err:
        check_config(t, R.element(1), xi=0)
    a, vt, bound = err.value.witness
    assert vt == 0 and bound == 0 and a == R.element(1)
    with pytest.raises(ZeroGradient):
        check_config(Const(R.element(7)), R.element(1))


def test_hensel_step_fixtures():
    R = z7()
    t = x_squared_minus_2(R)
    cfg = check_config(t, R.element(3), xi=0)
    nxt = hensel_step(cfg)
    assert nxt == R.element(10)  # 10^2 = 2 mod 49
    cfg2 = check_config(t, nxt, xi=0)
    assert hensel_step(cfg2) == R.element(108)  # 108^2 = 2 mod 343
    root = R.element(2166)
    done = check_config(t, root, xi=0)
    assert hensel_step(done) == root  # residual already 0 mod p^N


def test_solver_trace_fixture():
    R = z7()
    report = sigma_hensel_solve(x_squared_minus_2(R), R.element(3))
    assert report.root == R.element(2166)
    assert report.root * report.root == R.element(2)
    trace = [(str(s.point), s.residual_val, s.step_size) for s in report.steps]
    assert trace == [("3", 1, 1), ("10", 2, 2), ("108", 3, 3)]
    assert report.residual_val is INFINITY
    assert report.first_step_size == 1
    vals = [s.residual_val for s in report.steps]
    assert vals == sorted(set(vals))  # strictly increasing


def test_solver_sigma_free_start_is_already_root():
    R = z7()
    drift = Sub(Sigma(1, Var()), Var())
    report = sigma_hensel_solve(drift, R.element(12), xi=0)
    assert report.root == R.element(12) and len(report.steps) == 0


def test_solver_contract_root_stays_in_ball():
    R = make_ring(7, 1, 6)
    t = x_squared_minus_2(R)
    report = sigma_hensel_solve(t, R.element(3))
    e0 = report.first_step_size
    assert e0 > report.config.xi
    assert (report.root - R.element(3)).val() >= e0


def test_newton_mode_agrees_on_polynomial():
    R = make_ring(7, 1, 8)
    t = x_squared_minus_2(R)
    fixed = sigma_hensel_solve(t, R.element(3), mode="fixed")
    newton = sigma_hensel_solve(t, R.element(3), mode="newton")
    assert fixed.root == newton.root
    assert prolong_eval(t, newton.root).is_zero()


def test_bad_gradient_data_fails_loudly():
    R = z7()
    t = x_squared_minus_2(R)
    with pytest.raises(ConfigRejected):
        # sampling catches the lie: d = 1 does not approximate t near 3
        check_config(t, R.element(3), xi=0, d=[R.one()], samples=64)
    cfg = check_config(t, R.element(3), xi=0, d=[R.one()], samples=0)
    with pytest.raises(StalledProgress):
        hensel_step(cfg)


def test_drift_equation_needs_extension_tower():
    """sigma(x) - x - 1 has no root over W(F_4) mod 2^4; each rejection
    names the obstruction and doubling k three times reaches a root."""
    R = make_ring(2, 2, 4)
    one = R.one()
    t = Sub(Sub(Sigma(1, Var()), Var()), Const(one))
    a = R.teichmuller(R.field.gen())
    hops = 0
    while True:
        try:
            report = sigma_hensel_solve(t, a, xi=0)
            break
        except ResidueUnsolvable as err:
            assert err.extension_required
            hops += 1
            assert hops <= 5
            big, emb = extend_ring(a.desc, 2)
            t = embed_term(t, emb)
            a = emb(a)
    assert hops == 3 and report.root.desc.k == 16
    c = report.root
    assert (c.frobenius() - c - c.desc.one()).is_zero()
    r = c.residue()
    F = c.desc.field
    assert r * r + r + F.one() == F.zero()  # residue solves x^2 + x + 1


def test_linear_approximation_leading_term_identity():
    """For a prepared polynomial term on a small ball, the leading term of
    t(a) - t(e) factors as lt(dt(a)) * lt(a - e)."""
    R = make_ring(7, 1, 6)
    t = x_squared_minus_2(R)
    m = 1
    base = R.element(3)
    rng = random.Random(2)
    checked = 0
    while checked < 100:
        a = base + R.element(49) * R.random_element(rng)
        e = base + R.element(49) * R.random_element(rng)
        diff = a - e
        if diff.val() > R.N - m - 2:
            continue
        checked += 1
        (grad,) = term_gradient(t, a)
        lhs = LeadingTerm.from_witt(prolong_eval(t, a) - prolong_eval(t, e), m)
        rhs = LeadingTerm.from_witt(grad, m) * LeadingTerm.from_witt(diff, m)
        assert lhs == rhs
