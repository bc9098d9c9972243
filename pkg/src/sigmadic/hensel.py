"""Difference-analytic terms and the sigma-Hensel root solver.

A term is an AST over constants, one variable x, ring operations, the
total quotient Q, powers of the Frobenius lift sigma, and applications
of named separated series.  Because sigma commutes with every symbol
(acting on constants directly and on a series by twisting its
coefficients), each term t has a sigma-free normal form u with

    t(x) = u(x, sigma x, ..., sigma^n x),

and everything downstream — evaluation, differentiation, the solver —
works with u on the prolongation tuple.

The solver follows the successive-approximation scheme: given an
approximation a whose residual t(sigma-bar a) has valuation v strictly
above min val(d_i) + xi, the next approximation is a + p^e * z where
e = v - min val(d_i) and the Teichmueller-free lift z of a residue-field
root of the additive equation

    1 + sum_{i in S} res(d_i p^e / t(sigma-bar a)) * x^{p^i} = 0

(S the set of indices of minimal val(d_i)) strictly increases the
residual valuation.  Each step's progress is asserted, never assumed;
a missed linear-approximation violation therefore surfaces as
StalledProgress rather than a wrong root.  Residue equations with no
root in F_{p^k} raise ResidueUnsolvable with the extension flag set:
the equation always becomes solvable after an explicit base change
(see witt.extend_ring), which the caller performs deliberately.

The value-group endomorphism applied to the ball radius is pluggable
but defaults to the identity, the only case realized by the Frobenius
lift on Witt vectors (sigma is an isometry).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

from .errors import (
    ConfigRejected,
    QuotientSingularity,
    ResidueUnsolvable,
    StalledProgress,
    ZeroGradient,
)
from .finite_field import FieldElem, solve_linearized
from .series import SeparatedSeries
from .witt import INFINITY, RingDesc, RingEmbedding, WittNum


# ---------------------------------------------------------------------------
# Term AST.  Nodes are frozen; ``span`` records source positions when the
# node came from the parser and never participates in equality.


class Term:
    """Base class for term AST nodes."""

    __slots__ = ()


@dataclass(frozen=True, eq=True)
class Const(Term):
    value: WittNum
    span: Optional[tuple[int, int]] = field(default=None, compare=False)


@dataclass(frozen=True, eq=True)
class Var(Term):
    span: Optional[tuple[int, int]] = field(default=None, compare=False)


@dataclass(frozen=True, eq=True)
class Slot(Term):
    """Variable number i of a sigma-free form, standing for sigma^i(x)."""

    index: int
    span: Optional[tuple[int, int]] = field(default=None, compare=False)


@dataclass(frozen=True, eq=True)
class Add(Term):
    left: Term
    right: Term
    span: Optional[tuple[int, int]] = field(default=None, compare=False)


@dataclass(frozen=True, eq=True)
class Sub(Term):
    left: Term
    right: Term
    span: Optional[tuple[int, int]] = field(default=None, compare=False)


@dataclass(frozen=True, eq=True)
class Mul(Term):
    left: Term
    right: Term
    span: Optional[tuple[int, int]] = field(default=None, compare=False)


@dataclass(frozen=True, eq=True)
class Quot(Term):
    """The total quotient Q(num, den): num/den when den is nonzero, else 0."""

    num: Term
    den: Term
    span: Optional[tuple[int, int]] = field(default=None, compare=False)


@dataclass(frozen=True, eq=True)
class Sigma(Term):
    power: int
    arg: Term
    span: Optional[tuple[int, int]] = field(default=None, compare=False)

    def __post_init__(self):
        if self.power < 0:
            raise ValueError("sigma power must be >= 0")


@dataclass(frozen=True, eq=True)
class Apply(Term):
    """Application of a named separated series to argument terms.

    The first m_x arguments feed the X variables, the rest the Y
    variables.  Apply nodes compare structurally but are not hashable
    (series coefficients live in dicts).
    """

    name: str
    series: SeparatedSeries
    args: tuple[Term, ...]
    span: Optional[tuple[int, int]] = field(default=None, compare=False)

    def __post_init__(self):
        want = self.series.m_x + self.series.n_y
        if len(self.args) != want:
            raise ValueError(
                f"series {self.name!r} takes {want} arguments, got {len(self.args)}"
            )


# ---------------------------------------------------------------------------
# Sigma-free normal form.


def sigma_free(term: Term) -> tuple[Term, int]:
    """Rewrite t so no Sigma node remains, returning (u, n) with
    t(x) = u(x, sigma x, ..., sigma^n x); Var becomes Slot."""
    depth = 0

    def rec(node: Term, shift: int) -> Term:
        nonlocal depth
        if isinstance(node, Const):
            value = node.value.frobenius(shift) if shift else node.value
            return Const(value, node.span)
        if isinstance(node, Var):
            depth = max(depth, shift)
            return Slot(shift, node.span)
        if isinstance(node, Slot):
            depth = max(depth, shift + node.index)
            return Slot(shift + node.index, node.span)
        if isinstance(node, Sigma):
            return rec(node.arg, shift + node.power)
        if isinstance(node, Add):
            return Add(rec(node.left, shift), rec(node.right, shift), node.span)
        if isinstance(node, Sub):
            return Sub(rec(node.left, shift), rec(node.right, shift), node.span)
        if isinstance(node, Mul):
            return Mul(rec(node.left, shift), rec(node.right, shift), node.span)
        if isinstance(node, Quot):
            return Quot(rec(node.num, shift), rec(node.den, shift), node.span)
        if isinstance(node, Apply):
            series = node.series
            if shift:
                series = series.map_coefficients(lambda c: c.frobenius(shift))
            return Apply(
                node.name, series, tuple(rec(a, shift) for a in node.args), node.span
            )
        raise TypeError(f"unknown term node {node!r}")

    return rec(term, 0), depth


def term_ring(term: Term) -> Optional[RingDesc]:
    """The ring of the first constant or series coefficient found."""
    if isinstance(term, Const):
        return term.value.desc
    if isinstance(term, Apply):
        return term.series.ring
    for name in ("left", "right", "num", "den", "arg"):
        child = getattr(term, name, None)
        if child is not None:
            got = term_ring(child)
            if got is not None:
                return got
    return None


def has_quot(term: Term) -> bool:
    if isinstance(term, Quot):
        return True
    for name in ("left", "right", "arg"):
        child = getattr(term, name, None)
        if child is not None and has_quot(child):
            return True
    if isinstance(term, Apply):
        return any(has_quot(a) for a in term.args)
    return False


def embed_term(term: Term, emb: RingEmbedding) -> Term:
    """Transport a term along an explicit base change of the ring."""
    if isinstance(term, Const):
        return Const(emb(term.value), term.span)
    if isinstance(term, (Var, Slot)):
        return term
    if isinstance(term, Sigma):
        return Sigma(term.power, embed_term(term.arg, emb), term.span)
    if isinstance(term, Add):
        return Add(embed_term(term.left, emb), embed_term(term.right, emb), term.span)
    if isinstance(term, Sub):
        return Sub(embed_term(term.left, emb), embed_term(term.right, emb), term.span)
    if isinstance(term, Mul):
        return Mul(embed_term(term.left, emb), embed_term(term.right, emb), term.span)
    if isinstance(term, Quot):
        return Quot(embed_term(term.num, emb), embed_term(term.den, emb), term.span)
    if isinstance(term, Apply):
        series = term.series.map_coefficients(emb, ring=emb.big)
        return Apply(term.name, series, tuple(embed_term(a, emb) for a in term.args), term.span)
    raise TypeError(f"unknown term node {term!r}")


# ---------------------------------------------------------------------------
# Evaluation on prolongations.


def prolongation(a: WittNum, n: int) -> tuple[WittNum, ...]:
    """The tuple (a, sigma a, ..., sigma^n a)."""
    out = [a]
    for _ in range(n):
        out.append(out[-1].frobenius())
    return tuple(out)


def _eval_free(u: Term, xs: Sequence[WittNum], ring: RingDesc) -> WittNum:
    if isinstance(u, Const):
        return u.value
    if isinstance(u, Slot):
        return xs[u.index]
    if isinstance(u, Add):
        return _eval_free(u.left, xs, ring) + _eval_free(u.right, xs, ring)
    if isinstance(u, Sub):
        return _eval_free(u.left, xs, ring) - _eval_free(u.right, xs, ring)
    if isinstance(u, Mul):
        return _eval_free(u.left, xs, ring) * _eval_free(u.right, xs, ring)
    if isinstance(u, Quot):
        return _eval_free(u.num, xs, ring).quot(_eval_free(u.den, xs, ring))
    if isinstance(u, Apply):
        m = u.series.m_x
        vals = [_eval_free(a, xs, ring) for a in u.args]
        return u.series.evaluate(vals[:m], vals[m:])
    raise TypeError(f"sigma-free form contains {u!r}")


def prolong_eval(term: Term, a: WittNum) -> WittNum:
    """Evaluate t at x = a through the sigma-free form."""
    u, n = sigma_free(term)
    return _eval_free(u, prolongation(a, n), a.desc)


def _eval_with_gradient(
    u: Term, xs: Sequence[WittNum], ring: RingDesc
) -> tuple[WittNum, tuple[WittNum, ...]]:
    """Forward-mode value and gradient of the sigma-free form."""
    width = len(xs)
    zero = ring.zero()
    zeros = (zero,) * width

    def rec(node: Term) -> tuple[WittNum, tuple[WittNum, ...]]:
        if isinstance(node, Const):
            return node.value, zeros
        if isinstance(node, Slot):
            grad = tuple(
                ring.one() if i == node.index else zero for i in range(width)
            )
            return xs[node.index], grad
        if isinstance(node, Add):
            v, dv = rec(node.left)
            w, dw = rec(node.right)
            return v + w, tuple(a + b for a, b in zip(dv, dw))
        if isinstance(node, Sub):
            v, dv = rec(node.left)
            w, dw = rec(node.right)
            return v - w, tuple(a - b for a, b in zip(dv, dw))
        if isinstance(node, Mul):
            v, dv = rec(node.left)
            w, dw = rec(node.right)
            return v * w, tuple(a * w + v * b for a, b in zip(dv, dw))
        if isinstance(node, Quot):
            v, dv = rec(node.num)
            w, dw = rec(node.den)
            if w.is_zero():
                raise QuotientSingularity(
                    "denominator of Q vanishes at the prolongation point"
                )
            value = v.quot(w)
            grad = tuple(
                a.quot(w) - (value * b).quot(w) for a, b in zip(dv, dw)
            )
            return value, grad
        if isinstance(node, Apply):
            m = node.series.m_x
            parts = [rec(a) for a in node.args]
            vals = [v for v, _ in parts]
            value = node.series.evaluate(vals[:m], vals[m:])
            grad = list(zeros)
            for j, (_, dj) in enumerate(parts):
                if all(g.is_zero() for g in dj):
                    continue
                partial = node.series.derivative(j).evaluate(vals[:m], vals[m:])
                for i in range(width):
                    grad[i] = grad[i] + partial * dj[i]
            return value, tuple(grad)
        raise TypeError(f"sigma-free form contains {node!r}")

    return rec(u)


def term_gradient(term: Term, a: WittNum) -> tuple[WittNum, ...]:
    """The linear-approximation data d_i = (d u / d x_i)(sigma-bar a)."""
    u, n = sigma_free(term)
    _, grad = _eval_with_gradient(u, prolongation(a, n), a.desc)
    return grad


# ---------------------------------------------------------------------------
# Configurations.


@dataclass(frozen=True, eq=False)
class HenselConfig:
    """An accepted (t, a, d, xi) configuration.

    ``u``/``depth`` cache the sigma-free form, ``certified`` records
    that the linear-approximation property holds by the exact
    gradient-radius argument rather than only by sampling.
    """

    term: Term
    u: Term
    depth: int
    a: WittNum
    d: tuple[WittNum, ...]
    xi: int
    certified: bool

    @property
    def ring(self) -> RingDesc:
        return self.a.desc

    def min_gradient_val(self):
        return min(di.val() for di in self.d)


def check_config(
    term: Term,
    a: WittNum,
    xi: Optional[int] = None,
    d: Optional[Sequence[WittNum]] = None,
    samples: int = 64,
    seed: int = 0,
    radius_map: Optional[Callable[[int, int], int]] = None,
) -> HenselConfig:
    """Validate a sigma-Hensel configuration.

    Checks val(t(sigma-bar a)) > min_i(val(d_i) + radius_map(i, xi))
    exactly (radius_map defaults to the identity in i, the isometric
    case) and the linear-approximation property either by the exact
    gradient-radius criterion (quotient-free term, xi at least the
    minimal gradient valuation) or statistically on sampled pairs from
    the open ball of radius xi.  Rejections carry a witness.
    """
    ring = a.desc
    u, n = sigma_free(term)
    xs = prolongation(a, n)
    if d is None:
        _, grads = _eval_with_gradient(u, xs, ring)
        d = grads
        d_is_gradient = True
    else:
        d = tuple(ring.element(v) for v in d)
        if len(d) != n + 1:
            raise ValueError(f"d must have length {n + 1}, got {len(d)}")
        d_is_gradient = False
    dvals = [di.val() for di in d]
    if all(v == INFINITY for v in dvals):
        raise ZeroGradient("all linear-approximation coefficients vanish mod p^N")
    dmin = min(dvals)
    if xi is None:
        xi = int(dmin)
    if radius_map is None:
        bound = dmin + xi
    else:
        bound = min(v + radius_map(i, xi) for i, v in enumerate(dvals))
    value = _eval_free(u, xs, ring)
    vt = value.val()
    if not vt > bound:
        raise ConfigRejected(
            f"val(t(a)) = {vt} is not > min(val(d_i) + xi) = {bound}",
            witness=(a, vt, bound),
        )
    certified = d_is_gradient and not has_quot(u) and xi >= dmin
    if not certified and samples > 0 and xi + 1 < ring.N:
        rng = random.Random(seed)
        step = ring.element(ring.p ** (xi + 1))
        for _ in range(samples):
            c = a + step * ring.random_element(rng)
            cp = a + step * ring.random_element(rng)
            xc = prolongation(c, n)
            xcp = prolongation(cp, n)
            lhs = _eval_free(u, xc, ring) - _eval_free(u, xcp, ring)
            rhs_bound = INFINITY
            for i in range(n + 1):
                diff = xc[i] - xcp[i]
                lhs = lhs - d[i] * diff
                cand = dvals[i] + diff.val()
                if cand < rhs_bound:
                    rhs_bound = cand
            if not lhs.val() > rhs_bound:
                raise ConfigRejected(
                    "sampled pair violates the linear approximation",
                    witness=(c, cp),
                )
    return HenselConfig(term, u, n, a, tuple(d), xi, certified)


# ---------------------------------------------------------------------------
# The solver.


def hensel_step(cfg: HenselConfig) -> WittNum:
    """One successive-approximation step; returns the next point.

    Progress (residual valuation strictly up, step size exactly e) is
    asserted on the result; a violation raises StalledProgress.
    """
    ring = cfg.ring
    a = cfg.a
    xs = prolongation(a, cfg.depth)
    value = _eval_free(cfg.u, xs, ring)
    vt = value.val()
    if vt == INFINITY:
        return a
    dvals = [di.val() for di in cfg.d]
    dmin = min(dvals)
    e = int(vt - dmin)
    pe = ring.element(ring.p**e)
    coeffs: list[FieldElem] = []
    for di, v in zip(cfg.d, dvals):
        if v == dmin:
            coeffs.append((di * pe).quot(value).residue())
        else:
            coeffs.append(ring.field.zero())
    sol = solve_linearized(coeffs, -ring.field.one())
    if sol.extension_required:
        raise ResidueUnsolvable(
            "residue equation has no root in the current residue field",
            extension_required=True,
        )
    root = sol.solutions[0]
    c = a + pe * ring.lift_residue(root)
    new_val = _eval_free(cfg.u, prolongation(c, cfg.depth), ring).val()
    if not new_val > vt:
        raise StalledProgress(
            f"residual valuation did not increase ({vt} -> {new_val}); "
            "the linear approximation fails on this ball"
        )
    if (c - a).val() != e:
        raise StalledProgress("step size disagrees with the predicted valuation")
    return c


@dataclass(frozen=True)
class StepRecord:
    point: WittNum
    residual_val: int
    step_size: int


@dataclass(frozen=True, eq=False)
class SolveReport:
    root: WittNum
    steps: tuple[StepRecord, ...]
    residual_val: float
    config: HenselConfig

    @property
    def first_step_size(self) -> Optional[int]:
        return self.steps[0].step_size if self.steps else None


def sigma_hensel_solve(
    term: Term,
    a0: WittNum,
    xi: Optional[int] = None,
    d: Optional[Sequence[WittNum]] = None,
    samples: int = 64,
    seed: int = 0,
    mode: str = "fixed",
) -> SolveReport:
    """Drive hensel_step to a root with residual 0 mod p^N.

    ``mode="fixed"`` keeps the linear-approximation data of the
    accepted configuration for every step; ``mode="newton"`` recomputes
    the gradient at each new point (an extension of the base scheme,
    useful when the gradient valuation drops along the way).
    """
    if mode not in ("fixed", "newton"):
        raise ValueError(f"unknown mode {mode!r}")
    cfg = check_config(term, a0, xi=xi, d=d, samples=samples, seed=seed)
    ring = cfg.ring
    steps: list[StepRecord] = []
    cur = cfg
    last_val = None
    for _ in range(ring.N + 1):
        value = _eval_free(cur.u, prolongation(cur.a, cur.depth), ring)
        vt = value.val()
        if last_val is not None and not vt > last_val:
            raise StalledProgress("residual valuation failed to increase")
        last_val = vt
        if vt == INFINITY:
            break
        e = int(vt - cur.min_gradient_val())
        steps.append(StepRecord(cur.a, int(vt), e))
        nxt = hensel_step(cur)
        if mode == "newton":
            grads = term_gradient(cur.term, nxt)
            cur = replace(cur, a=nxt, d=grads)
        else:
            cur = replace(cur, a=nxt)
    else:
        raise StalledProgress("iteration cap exceeded without reaching a root")
    root = cur.a
    if steps:
        e0 = steps[0].step_size
        assert e0 > cfg.xi, "first step left the configuration ball"
        assert (root - a0).val() >= e0, "root strayed outside the predicted ball"
    return SolveReport(root=root, steps=tuple(steps), residual_val=INFINITY, config=cfg)
