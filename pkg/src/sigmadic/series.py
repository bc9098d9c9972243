"""Separated power series over a truncated W(F_{p^k}) and their
Weierstrass theory.

A series in the ring A<X>[[Y]] (A the Witt ring, X ranging over the
valuation ring O, Y over its maximal ideal M) is stored sparsely as a
map from exponent pairs (mu, nu) to nonzero coefficients.  Two
truncations apply: coefficients live at absolute precision N, and
monomials of total Y-degree >= y_degree_bound are dropped.  Evaluation
on O^m x M^n is exact mod p^N whenever y_degree_bound >= N, because a
dropped monomial then contributes valuation >= N; evaluating a shorter
truncation at a point with val(y) = 1 is refused as unsound.  Points
outside the intended domain evaluate to 0, making every series a total
function.

Regularity follows the classical Weierstrass setting, read modulo the
"small" ideal: f is regular in an X variable of degree d when f is
congruent to a monic degree-d polynomial in it modulo (p) + (Y), and
regular in a Y variable of degree d when congruent to Y^d modulo
(p) + (other Y) + (Y^{d+1}).  Division splits the divisor as
f = P + B with P monic in the chosen variable and every monomial of B
small; ordinary long division by P plus geometric iteration on B then
terminates in the truncated ring because each pass multiplies the
outstanding remainder by B once more.  Preparation divides var^d by f
and inverts the quotient.

Preregularity is the staging condition that makes a series regular
after the triangular change of variables T_d; the witness search
returns the smallest degree d and then the lexicographically least
index pair, testing all four clauses on residues (mod p).
"""

from __future__ import annotations

import math
from typing import Callable, Iterable, Sequence

from .errors import (
    MixedField,
    NonUnitInverse,
    NotRegular,
    TruncationUnsound,
)
from .witt import INFINITY, RingDesc, WittNum, parse_witt


class SeparatedSeries:
    """A truncated element of A<X_0..X_{mX-1}>[[Y_0..Y_{nY-1}]]."""

    __slots__ = ("ring", "m_x", "n_y", "y_degree_bound", "coeffs")

    def __init__(self, ring: RingDesc, m_x: int, n_y: int, coeffs, y_degree_bound: int | None = None):
        if m_x < 0 or n_y < 0:
            raise ValueError("variable counts must be >= 0")
        if y_degree_bound is None:
            y_degree_bound = ring.N
        if y_degree_bound < 1:
            raise ValueError("y_degree_bound must be >= 1")
        self.ring = ring
        self.m_x = m_x
        self.n_y = n_y
        self.y_degree_bound = y_degree_bound
        clean: dict[tuple[tuple[int, ...], tuple[int, ...]], WittNum] = {}
        for (mu, nu), c in coeffs.items():
            mu = tuple(int(e) for e in mu)
            nu = tuple(int(e) for e in nu)
            if len(mu) != m_x or len(nu) != n_y:
                raise ValueError(f"exponent pair {(mu, nu)} has wrong arity")
            if any(e < 0 for e in mu + nu):
                raise ValueError("exponents must be >= 0")
            if sum(nu) >= y_degree_bound:
                continue
            w = ring.element(c)
            if w.is_zero():
                continue
            key = (mu, nu)
            if key in clean:
                w = clean[key] + w
                if w.is_zero():
                    del clean[key]
                    continue
            clean[key] = w
        self.coeffs = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, ring: RingDesc, m_x: int, n_y: int, y_degree_bound: int | None = None):
        return cls(ring, m_x, n_y, {}, y_degree_bound)

    @classmethod
    def constant(cls, ring: RingDesc, value, m_x: int, n_y: int, y_degree_bound: int | None = None):
        key = ((0,) * m_x, (0,) * n_y)
        return cls(ring, m_x, n_y, {key: value}, y_degree_bound)

    @classmethod
    def variable(cls, ring: RingDesc, m_x: int, n_y: int, index: int, y_degree_bound: int | None = None):
        """The series X_index (indices mX..mX+nY-1 denote Y variables)."""
        if not 0 <= index < m_x + n_y:
            raise ValueError(f"variable index {index} out of range")
        mu = [0] * m_x
        nu = [0] * n_y
        if index < m_x:
            mu[index] = 1
        else:
            nu[index - m_x] = 1
        return cls(ring, m_x, n_y, {(tuple(mu), tuple(nu)): 1}, y_degree_bound)

    # -- bookkeeping ----------------------------------------------------------

    def _axis(self, index: int) -> tuple[str, int]:
        if not 0 <= index < self.m_x + self.n_y:
            raise ValueError(f"variable index {index} out of range")
        if index < self.m_x:
            return "x", index
        return "y", index - self.m_x

    def _compat(self, other: "SeparatedSeries") -> int:
        if not isinstance(other, SeparatedSeries):
            raise TypeError("expected a series")
        if other.ring != self.ring:
            raise MixedField("series over different rings")
        if (other.m_x, other.n_y) != (self.m_x, self.n_y):
            raise ValueError("series with different variable layouts")
        return min(self.y_degree_bound, other.y_degree_bound)

    def is_zero(self) -> bool:
        return not self.coeffs

    def support(self):
        return self.coeffs.keys()

    def coefficient(self, mu: Sequence[int], nu: Sequence[int]) -> WittNum:
        return self.coeffs.get((tuple(mu), tuple(nu)), self.ring.zero())

    def var_degree(self, index: int) -> int:
        """Largest exponent of the variable over the support, -1 if none."""
        axis, i = self._axis(index)
        best = -1
        for mu, nu in self.coeffs:
            e = mu[i] if axis == "x" else nu[i]
            if e > best:
                best = e
        return best

    # -- ring operations ----------------------------------------------------

    def __add__(self, other: "SeparatedSeries") -> "SeparatedSeries":
        bound = self._compat(other)
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            if key in out:
                out[key] = out[key] + c
            else:
                out[key] = c
        return SeparatedSeries(self.ring, self.m_x, self.n_y, out, bound)

    def __neg__(self) -> "SeparatedSeries":
        out = {key: -c for key, c in self.coeffs.items()}
        return SeparatedSeries(self.ring, self.m_x, self.n_y, out, self.y_degree_bound)

    def __sub__(self, other: "SeparatedSeries") -> "SeparatedSeries":
        return self + (-other)

    def __mul__(self, other: "SeparatedSeries") -> "SeparatedSeries":
        bound = self._compat(other)
        out: dict = {}
        for (mu1, nu1), c1 in self.coeffs.items():
            for (mu2, nu2), c2 in other.coeffs.items():
                nu = tuple(a + b for a, b in zip(nu1, nu2))
                if sum(nu) >= bound:
                    continue
                mu = tuple(a + b for a, b in zip(mu1, mu2))
                key = (mu, nu)
                prod = c1 * c2
                if key in out:
                    out[key] = out[key] + prod
                else:
                    out[key] = prod
        return SeparatedSeries(self.ring, self.m_x, self.n_y, out, bound)

    def scale(self, value) -> "SeparatedSeries":
        c = self.ring.element(value)
        out = {key: w * c for key, w in self.coeffs.items()}
        return SeparatedSeries(self.ring, self.m_x, self.n_y, out, self.y_degree_bound)

    def map_coefficients(self, fn: Callable[[WittNum], WittNum], ring: RingDesc | None = None) -> "SeparatedSeries":
        ring = ring or self.ring
        out = {key: fn(c) for key, c in self.coeffs.items()}
        return SeparatedSeries(ring, self.m_x, self.n_y, out, self.y_degree_bound)

    # -- evaluation and differentiation ----------------------------------------

    def evaluate(self, xs: Sequence, ys: Sequence) -> WittNum:
        """Exact evaluation mod p^N on O^m x M^n.

        Points outside the domain (some val(y) = 0) evaluate to 0 by
        the total-function convention.  A truncation with
        y_degree_bound < N cannot be soundly evaluated at val(y) = 1.
        """
        ring = self.ring
        xs = [ring.element(x) for x in xs]
        ys = [ring.element(y) for y in ys]
        if len(xs) != self.m_x or len(ys) != self.n_y:
            raise ValueError("wrong number of evaluation arguments")
        yvals = [y.val() for y in ys]
        if any(v < 1 for v in yvals):
            return ring.zero()
        if self.n_y and self.y_degree_bound < ring.N and any(v == 1 for v in yvals):
            raise TruncationUnsound(
                f"y_degree_bound={self.y_degree_bound} < N={ring.N} cannot be "
                "evaluated at a point of valuation 1"
            )
        pows: list[dict[int, WittNum]] = [dict() for _ in range(self.m_x + self.n_y)]

        def power(slot: int, base: WittNum, e: int) -> WittNum:
            cache = pows[slot]
            got = cache.get(e)
            if got is None:
                got = base**e
                cache[e] = got
            return got

        total = ring.zero()
        for (mu, nu), c in self.coeffs.items():
            term = c
            for i, e in enumerate(mu):
                if e:
                    term = term * power(i, xs[i], e)
            for j, e in enumerate(nu):
                if e:
                    term = term * power(self.m_x + j, ys[j], e)
            total = total + term
        return total

    def derivative(self, index: int) -> "SeparatedSeries":
        """Formal partial derivative with respect to one variable."""
        axis, i = self._axis(index)
        out: dict = {}
        for (mu, nu), c in self.coeffs.items():
            exps = mu if axis == "x" else nu
            e = exps[i]
            if e == 0:
                continue
            lowered = list(exps)
            lowered[i] = e - 1
            key = (tuple(lowered), nu) if axis == "x" else (mu, tuple(lowered))
            term = c * self.ring.element(e)
            if key in out:
                out[key] = out[key] + term
            else:
                out[key] = term
        return SeparatedSeries(self.ring, self.m_x, self.n_y, out, self.y_degree_bound)

    def gradient_at(self, xs: Sequence, ys: Sequence) -> tuple[WittNum, ...]:
        return tuple(
            self.derivative(i).evaluate(xs, ys) for i in range(self.m_x + self.n_y)
        )

    # -- units ---------------------------------------------------------------

    def is_unit(self) -> bool:
        """A series is a unit iff its reduction mod (p) + (Y) is a
        nonzero constant."""
        const = self.coeffs.get(((0,) * self.m_x, (0,) * self.n_y))
        if const is None or const.val() != 0:
            return False
        for (mu, nu), c in self.coeffs.items():
            if any(nu):
                continue
            if any(mu) and c.val() == 0:
                return False
        return True

    def inverse(self) -> "SeparatedSeries":
        """Inverse of a unit, by the geometric series on the small part."""
        if not self.is_unit():
            raise NonUnitInverse("series is not a unit")
        ring = self.ring
        const = self.coeffs[((0,) * self.m_x, (0,) * self.n_y)]
        cinv = const.inverse()
        one = SeparatedSeries.constant(ring, 1, self.m_x, self.n_y, self.y_degree_bound)
        w = one - self.scale(cinv)
        acc = one
        for _ in range(ring.N + self.y_degree_bound + 2):
            nxt = one + w * acc
            if nxt == acc:
                break
            acc = nxt
        out = acc.scale(cinv)
        assert (self * out) == one
        return out

    # -- comparisons and text -----------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SeparatedSeries)
            and self.ring == other.ring
            and (self.m_x, self.n_y) == (other.m_x, other.n_y)
            and self.y_degree_bound == other.y_degree_bound
            and self.coeffs == other.coeffs
        )

    def __ne__(self, other) -> bool:
        return not self.__eq__(other)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for (mu, nu) in sorted(self.coeffs):
            c = self.coeffs[(mu, nu)]
            factors = []
            ctext = str(c)
            if " " in ctext or "," in ctext:
                ctext = f"({ctext})"
            for i, e in enumerate(mu):
                if e:
                    factors.append(f"X{i}" + (f"^{e}" if e > 1 else ""))
            for j, e in enumerate(nu):
                if e:
                    factors.append(f"Y{j}" + (f"^{e}" if e > 1 else ""))
            if not factors or ctext != "1":
                factors.insert(0, ctext)
            parts.append("*".join(factors))
        return " + ".join(parts)

    __repr__ = __str__

    # -- file format -------------------------------------------------------------

    def to_lines(self) -> list[str]:
        lines = [f"series {self.m_x} {self.n_y} {self.y_degree_bound}"]
        for (mu, nu) in sorted(self.coeffs):
            c = self.coeffs[(mu, nu)]
            left = " ".join(str(e) for e in mu)
            right = " ".join(str(e) for e in nu)
            lines.append(f"{left} | {right} : {c}")
        return lines

    @classmethod
    def from_lines(cls, ring: RingDesc, lines: Iterable[str]) -> "SeparatedSeries":
        it = iter(l.strip() for l in lines)
        header = None
        for line in it:
            if line and not line.startswith("#"):
                header = line
                break
        if header is None:
            raise ValueError("empty series text")
        parts = header.split()
        if len(parts) != 4 or parts[0] != "series":
            raise ValueError(f"bad series header: {header!r}")
        m_x, n_y, bound = int(parts[1]), int(parts[2]), int(parts[3])
        coeffs: dict = {}
        for line in it:
            if not line or line.startswith("#"):
                continue
            exps, _, ctext = line.partition(":")
            left, _, right = exps.partition("|")
            mu = tuple(int(t) for t in left.split())
            nu = tuple(int(t) for t in right.split())
            coeffs[(mu, nu)] = parse_witt(ring, ctext.strip())
        return cls(ring, m_x, n_y, coeffs, bound)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(self.to_lines()) + "\n")

    @classmethod
    def load(cls, ring: RingDesc, path) -> "SeparatedSeries":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_lines(ring, fh)

    # -- regularity ----------------------------------------------------------------

    def regular_degree(self, index: int) -> int | None:
        """Degree of regularity in the given variable, or None.

        X case: the reduction mod (p) + (Y) must be a monic polynomial
        of degree d in the variable.  Y case: the reduction mod
        (p) + (other Y) + (var^{d+1}) must be exactly var^d.
        """
        axis, i = self._axis(index)
        p = self.ring.p
        if axis == "x":
            survivors = [
                (mu, c)
                for (mu, nu), c in self.coeffs.items()
                if not any(nu) and c.val() == 0
            ]
            if not survivors:
                return None
            d = max(mu[i] for mu, _ in survivors)
            target = tuple(d if j == i else 0 for j in range(self.m_x))
            for mu, c in survivors:
                if mu[i] == d:
                    if mu != target or not c.residue().is_one():
                        return None
            return d
        survivors = [
            (mu, nu[i], c)
            for (mu, nu), c in self.coeffs.items()
            if c.val() == 0 and all(e == 0 for j, e in enumerate(nu) if j != i)
        ]
        if not survivors:
            return None
        d = min(e for _, e, _ in survivors)
        zero_mu = (0,) * self.m_x
        for mu, e, c in survivors:
            if e == d:
                if mu != zero_mu or not c.residue().is_one():
                    return None
        return d

    # -- preregularity and the triangular change --------------------------------------

    def preregular(
        self, inner_x: Sequence[int], inner_y: Sequence[int]
    ) -> tuple[tuple[int, ...], tuple[int, ...], int] | None:
        """Witness (mu0, nu0, d) of preregularity in the inner block.

        The coefficient of an inner monomial is a series in the outer
        variables; "small" means lying in (p) + (outer Y).  The witness
        coefficient must be 1 and every inner monomial of total degree
        >= d, of smaller nu, or of larger mu at nu0, must be small.
        Returns the smallest admissible d with the lexicographically
        least (mu0, nu0), or None.
        """
        inner_x = tuple(sorted(set(inner_x)))
        inner_y = tuple(sorted(set(inner_y)))
        if any(not 0 <= i < self.m_x for i in inner_x):
            raise ValueError("inner X index out of range")
        if any(not 0 <= j < self.n_y for j in inner_y):
            raise ValueError("inner Y index out of range")
        outer_x = [i for i in range(self.m_x) if i not in inner_x]
        outer_y = [j for j in range(self.n_y) if j not in inner_y]

        groups: dict = {}
        for (mu, nu), c in self.coeffs.items():
            key = (
                tuple(mu[i] for i in inner_x),
                tuple(nu[j] for j in inner_y),
            )
            outer_key = (
                tuple(mu[i] for i in outer_x),
                tuple(nu[j] for j in outer_y),
            )
            groups.setdefault(key, {})[outer_key] = c

        def small(group: dict) -> bool:
            # membership in (p) + (outer Y)
            return all(
                c.val() >= 1 for (_, nu2), c in group.items() if not any(nu2)
            )

        def is_one(group: dict) -> bool:
            const_key = ((0,) * len(outer_x), (0,) * len(outer_y))
            rest = dict(group)
            const = rest.pop(const_key, None)
            if const is None or not const.residue().is_one():
                return False
            return small(rest)

        heavy = [key for key, grp in groups.items() if not small(grp)]
        if not heavy:
            return None
        d = max(sum(mu1) + sum(nu1) for mu1, nu1 in heavy) + 1
        candidates = sorted(key for key, grp in groups.items() if is_one(grp))
        for mu0, nu0 in candidates:
            ok = True
            for mu1, nu1 in heavy:
                if nu1 < nu0 or (nu1 == nu0 and mu1 > mu0):
                    ok = False
                    break
            if ok:
                return (mu0, nu0, d)
        return None

    def weierstrass_change(
        self,
        d: int,
        axis: str,
        indices: Sequence[int] | None = None,
        inverse: bool = False,
    ) -> "SeparatedSeries":
        """The triangular substitution T_d on a block of like variables.

        Position i of an m-variable block maps to itself plus the last
        block variable raised to d^{m-1-i}; the last variable is fixed.
        The map is bijective on series, with inverse the same
        substitution with a minus sign.
        """
        if d < 1:
            raise ValueError("d must be >= 1")
        if axis not in ("x", "y"):
            raise ValueError("axis must be 'x' or 'y'")
        count = self.m_x if axis == "x" else self.n_y
        block = list(range(count)) if indices is None else list(indices)
        if any(not 0 <= i < count for i in block):
            raise ValueError("block index out of range")
        if len(set(block)) != len(block):
            raise ValueError("duplicate block index")
        m = len(block)
        if m <= 1:
            return SeparatedSeries(
                self.ring, self.m_x, self.n_y, dict(self.coeffs), self.y_degree_bound
            )
        pivot = block[-1]
        sign = -1 if inverse else 1
        out: dict = {}
        for (mu, nu), c in self.coeffs.items():
            exps0 = list(mu if axis == "x" else nu)
            terms = [(exps0, 1)]
            for pos, vi in enumerate(block[:-1]):
                e = exps0[vi]
                if e == 0:
                    continue
                step = d ** (m - 1 - pos)
                expanded = []
                for cur, mult in terms:
                    for t in range(e + 1):
                        nxt = list(cur)
                        nxt[vi] = e - t
                        nxt[pivot] += step * t
                        expanded.append((nxt, mult * math.comb(e, t) * sign**t))
                terms = expanded
            for cur, mult in terms:
                if axis == "y" and sum(cur) >= self.y_degree_bound:
                    continue
                key = (tuple(cur), nu) if axis == "x" else (mu, tuple(cur))
                w = c * self.ring.element(mult)
                if key in out:
                    out[key] = out[key] + w
                else:
                    out[key] = w
        return SeparatedSeries(self.ring, self.m_x, self.n_y, out, self.y_degree_bound)


# ---------------------------------------------------------------------------
# Weierstrass division and preparation.


def _monic_small_split(f: SeparatedSeries, index: int, d: int):
    """Split f = P + B with P monic of degree d in the variable and all
    monomials of B small for the variable's axis."""
    axis, i = f._axis(index)
    ring = f.ring
    p_coeffs: dict = {}
    if axis == "x":
        top = (tuple(d if j == i else 0 for j in range(f.m_x)), (0,) * f.n_y)
        for (mu, nu), c in f.coeffs.items():
            if not any(nu) and mu[i] < d:
                p_coeffs[(mu, nu)] = c
    else:
        top = ((0,) * f.m_x, tuple(d if j == i else 0 for j in range(f.n_y)))
        for (mu, nu), c in f.coeffs.items():
            if nu[i] < d and all(e == 0 for j, e in enumerate(nu) if j != i):
                p_coeffs[(mu, nu)] = c
    p_coeffs[top] = ring.one()
    P = SeparatedSeries(ring, f.m_x, f.n_y, p_coeffs, f.y_degree_bound)
    return P, f - P


def _long_divide(h: SeparatedSeries, P: SeparatedSeries, index: int, d: int):
    """Exact long division by a polynomial P monic of degree d in the
    variable: h = q * P + r with deg_var(r) < d."""
    axis, i = h._axis(index)
    ring = h.ring
    q_total = SeparatedSeries.zero(ring, h.m_x, h.n_y, h.y_degree_bound)
    r = h
    while True:
        deg = r.var_degree(index)
        if deg < d:
            break
        q_top: dict = {}
        for (mu, nu), c in r.coeffs.items():
            e = mu[i] if axis == "x" else nu[i]
            if e == deg:
                lowered = list(mu if axis == "x" else nu)
                lowered[i] = e - d
                key = (tuple(lowered), nu) if axis == "x" else (mu, tuple(lowered))
                q_top[key] = c
        q_step = SeparatedSeries(ring, h.m_x, h.n_y, q_top, h.y_degree_bound)
        if q_step.is_zero():
            # All top-degree monomials were above the Y-degree bound or
            # vanished; drop them directly.
            trimmed = {
                key: c
                for key, c in r.coeffs.items()
                if (key[0][i] if axis == "x" else key[1][i]) < deg
            }
            r = SeparatedSeries(ring, h.m_x, h.n_y, trimmed, h.y_degree_bound)
            continue
        q_total = q_total + q_step
        r = r - q_step * P
        assert r.var_degree(index) < deg
    return q_total, r


def weierstrass_divide(
    g: SeparatedSeries, f: SeparatedSeries, index: int
) -> tuple[SeparatedSeries, SeparatedSeries]:
    """Unique division g = q*f + r with deg_var(r) < d, for f regular of
    degree d in the variable.

    Splitting f = P + B (P monic, B small), each pass long-divides the
    outstanding remainder by P and feeds -q*B back in; every monomial
    of B raises coefficient valuation or Y-degree, so the loop reaches
    exactly zero in the truncated ring.  The iteration count is checked,
    never assumed.
    """
    g._compat(f)
    d = f.regular_degree(index)
    if d is None:
        raise NotRegular(f"divisor is not regular in variable {index}")
    P, B = _monic_small_split(f, index, d)
    ring = f.ring
    bound = min(g.y_degree_bound, f.y_degree_bound)
    q_acc = SeparatedSeries.zero(ring, f.m_x, f.n_y, bound)
    r_acc = SeparatedSeries.zero(ring, f.m_x, f.n_y, bound)
    h = g
    cap = (ring.N + bound + 4) * (d + 2) + 4
    for _ in range(cap):
        if h.is_zero():
            break
        qh, rh = _long_divide(h, P, index, d)
        q_acc = q_acc + qh
        r_acc = r_acc + rh
        h = -(qh * B)
    else:
        raise AssertionError("Weierstrass division failed to terminate")
    return q_acc, r_acc


def weierstrass_prepare(
    f: SeparatedSeries, index: int
) -> tuple[SeparatedSeries, SeparatedSeries]:
    """Factor f = u * P with u a unit and P monic of degree d in the
    variable, for f regular of degree d.

    Divides var^d by f; the quotient is a unit and P = var^d - r.
    """
    d = f.regular_degree(index)
    if d is None:
        raise NotRegular(f"series is not regular in variable {index}")
    ring = f.ring
    axis, i = f._axis(index)
    if axis == "x":
        key = (tuple(d if j == i else 0 for j in range(f.m_x)), (0,) * f.n_y)
    else:
        key = ((0,) * f.m_x, tuple(d if j == i else 0 for j in range(f.n_y)))
    var_d = SeparatedSeries(ring, f.m_x, f.n_y, {key: 1}, f.y_degree_bound)
    q, r = weierstrass_divide(var_d, f, index)
    P = var_d - r
    u = q.inverse()
    return u, P
