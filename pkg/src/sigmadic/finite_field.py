"""Arithmetic in the finite fields F_{p^k} used as residue fields.

Elements are represented by coefficient vectors of length k over Z/p in
the polynomial basis 1, a, ..., a^{k-1}, where ``a`` is the class of x
modulo a monic irreducible modulus of degree k.  The default modulus for
a given (p, k) is the lexicographically least irreducible one, with
coefficient tuples (c_0, ..., c_{k-1}) compared low degree first, so a
descriptor is reproducible from (p, k) alone.

Beyond the field operations the module provides:

* ``frobenius``: a |-> a^{p^i} with negative i meaning the inverse
  automorphism;
* ``solve_linearized``: the full solution set in F_{p^k} of an additive
  equation sum_i c_i x^{p^i} = b, found by solving the k x k linear
  system it induces over Z/p.  When the set is empty the result carries
  ``extension_required``: an additive polynomial with some c_i != 0
  always has roots after a finite base change, but the base change is
  never performed implicitly;
* ``FieldEmbedding``: an explicit embedding F_{p^k} -> F_{p^(k*j)}
  obtained by locating the lexicographically least root of the small
  modulus in the big field.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import AllCoefficientsZero, DivisionByZero, MixedField

# ---------------------------------------------------------------------------
# Dense polynomials over Z/p: coefficient lists, low degree first.


def _trim(cs: list[int]) -> list[int]:
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _poly_divmod(
    a: Sequence[int], m: Sequence[int], p: int
) -> tuple[list[int], list[int]]:
    # m need not be monic; its leading coefficient is inverted mod p.
    r = _trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    q = [0] * max(1, len(r) - dm)
    while r and len(r) - 1 >= dm:
        d = len(r) - 1
        c = (r[-1] * inv_lead) % p
        q[d - dm] = c
        for i in range(dm + 1):
            r[d - dm + i] = (r[d - dm + i] - c * m[i]) % p
        _trim(r)
    return _trim(q), r


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    return _poly_divmod(a, m, p)[1]


def _poly_gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [(c * inv) % p for c in a]
    return a


def _poly_pow_mod(base: Sequence[int], exp: int, m: Sequence[int], p: int) -> list[int]:
    result = [1]
    acc = _poly_mod(base, m, p)
    while exp:
        if exp & 1:
            result = _poly_mod(_poly_mul(result, acc, p), m, p)
        acc = _poly_mod(_poly_mul(acc, acc, p), m, p)
        exp >>= 1
    return result


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


def is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    """Rabin test for a monic polynomial over Z/p.

    f of degree k is irreducible iff x^{p^k} = x (mod f) and, for every
    prime divisor q of k, gcd(x^{p^{k/q}} - x, f) = 1.
    """
    f = [c % p for c in coeffs]
    k = len(f) - 1
    if k < 1 or f[-1] != 1:
        return False
    x = [0, 1]
    top = _poly_pow_mod(x, p**k, f, p)
    diff = [(a - b) % p for a, b in itertools.zip_longest(top, x, fillvalue=0)]
    if _poly_mod(diff, f, p):
        return False
    for q in _prime_factors(k):
        xq = _poly_pow_mod(x, p ** (k // q), f, p)
        diff = [(a - b) % p for a, b in itertools.zip_longest(xq, x, fillvalue=0)]
        if len(_poly_gcd(_poly_mod(diff, f, p), f, p)) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def default_modulus(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree k over Z/p."""
    for lower in itertools.product(range(p), repeat=k):
        if k > 1 and lower[0] == 0:
            continue  # divisible by x, never irreducible
        cand = list(lower) + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError("no irreducible polynomial found")  # unreachable


# ---------------------------------------------------------------------------
# Field descriptor and elements.


class FieldDesc:
    """Descriptor of F_{p^k} with a fixed monic irreducible modulus."""

    __slots__ = ("p", "k", "modulus")

    def __init__(self, p: int, k: int, modulus: Sequence[int] | None = None):
        if not _is_prime(p):
            raise ValueError(f"p must be prime, got {p}")
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        if modulus is None:
            modulus = default_modulus(p, k)
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree k")
        if not is_irreducible(modulus, p):
            raise ValueError(f"modulus {modulus} is reducible over Z/{p}")
        self.p = p
        self.k = k
        self.modulus = modulus

    # -- constructors -------------------------------------------------

    def element(self, value) -> "FieldElem":
        """Build an element from an int (constant) or coefficient vector."""
        if isinstance(value, FieldElem):
            if value.desc != self:
                raise MixedField("element belongs to a different field")
            return value
        if isinstance(value, int):
            coeffs = [value % self.p] + [0] * (self.k - 1)
        else:
            coeffs = [int(c) % self.p for c in value]
            if len(coeffs) > self.k:
                raise ValueError("coefficient vector longer than degree")
            coeffs += [0] * (self.k - len(coeffs))
        return FieldElem(self, tuple(coeffs))

    def zero(self) -> "FieldElem":
        return self.element(0)

    def one(self) -> "FieldElem":
        return self.element(1)

    def gen(self) -> "FieldElem":
        """The class of x modulo the modulus (equals 0 when k = 1)."""
        if self.k == 1:
            return self.element((-self.modulus[0]) % self.p)
        return self.element([0, 1])

    def elements(self) -> Iterator["FieldElem"]:
        """All p^k elements, lexicographic in the coefficient tuple."""
        for coeffs in itertools.product(range(self.p), repeat=self.k):
            yield FieldElem(self, coeffs)

    @property
    def order(self) -> int:
        return self.p**self.k

    # -- structure ----------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldDesc)
            and self.p == other.p
            and self.k == other.k
            and self.modulus == other.modulus
        )

    def __ne__(self, other) -> bool:
        return not self.__eq__(other)

    def __hash__(self) -> int:
        return hash((self.p, self.k, self.modulus))

    def __str__(self) -> str:
        body = ",".join(str(c) for c in self.modulus)
        return f"GF({self.p}^{self.k}; {body})"

    __repr__ = __str__

    @classmethod
    def parse(cls, text: str) -> "FieldDesc":
        """Inverse of ``str``: ``GF(p^k; c_0,...,c_k)``."""
        s = text.strip()
        if not (s.startswith("GF(") and s.endswith(")")):
            raise ValueError(f"not a field descriptor: {text!r}")
        inner = s[3:-1]
        head, _, tail = inner.partition(";")
        p_str, _, k_str = head.partition("^")
        coeffs = [int(c) for c in tail.split(",")]
        return cls(int(p_str), int(k_str), coeffs)


class FieldElem:
    """An element of F_{p^k}, a length-k coefficient tuple over Z/p."""

    __slots__ = ("desc", "coeffs")

    def __init__(self, desc: FieldDesc, coeffs: tuple[int, ...]):
        self.desc = desc
        self.coeffs = coeffs

    def _same(self, other: "FieldElem") -> None:
        if not isinstance(other, FieldElem) or other.desc != self.desc:
            raise MixedField("operands live in different fields")

    # -- ring operations ----------------------------------------------

    def __add__(self, other: "FieldElem") -> "FieldElem":
        self._same(other)
        p = self.desc.p
        return FieldElem(
            self.desc, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other: "FieldElem") -> "FieldElem":
        self._same(other)
        p = self.desc.p
        return FieldElem(
            self.desc, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs))
        )

    def __neg__(self) -> "FieldElem":
        p = self.desc.p
        return FieldElem(self.desc, tuple((-a) % p for a in self.coeffs))

    def __mul__(self, other: "FieldElem") -> "FieldElem":
        self._same(other)
        d = self.desc
        prod = _poly_mul(self.coeffs, other.coeffs, d.p)
        red = _poly_mod(prod, d.modulus, d.p)
        return FieldElem(d, tuple(red + [0] * (d.k - len(red))))

    def inverse(self) -> "FieldElem":
        """Multiplicative inverse by the extended Euclidean algorithm."""
        d = self.desc
        if self.is_zero():
            raise DivisionByZero("inverse of zero field element")
        # Invariant: r_i = s_i * modulus + t_i * self for some s_i.
        r0, r1 = list(d.modulus), _trim(list(self.coeffs))
        t0: list[int] = []
        t1: list[int] = [1]
        while r1:
            q, r = _poly_divmod(r0, r1, d.p)
            r0, r1 = r1, r
            qt = _poly_mul(q, t1, d.p)
            t_next = [
                (a - b) % d.p for a, b in itertools.zip_longest(t0, qt, fillvalue=0)
            ]
            t0, t1 = t1, _trim(t_next)
        # r0 is a nonzero constant: the modulus is irreducible.
        inv_lead = pow(r0[-1], -1, d.p)
        res = _poly_mod([(c * inv_lead) % d.p for c in t0], d.modulus, d.p)
        out = FieldElem(d, tuple(res + [0] * (d.k - len(res))))
        assert (out * self).is_one()
        return out

    def __truediv__(self, other: "FieldElem") -> "FieldElem":
        return self * other.inverse()

    def __pow__(self, exp: int) -> "FieldElem":
        if exp < 0:
            return self.inverse() ** (-exp)
        result = self.desc.one()
        acc = self
        while exp:
            if exp & 1:
                result = result * acc
            acc = acc * acc
            exp >>= 1
        return result

    def frobenius(self, iterate: int = 1) -> "FieldElem":
        """a |-> a^{p^iterate}; negative iterate is the inverse map."""
        d = self.desc
        e = iterate % d.k
        out = self
        for _ in range(e):
            out = out ** d.p
        return out

    # -- predicates and ordering ---------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and all(c == 0 for c in self.coeffs[1:])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldElem)
            and self.desc == other.desc
            and self.coeffs == other.coeffs
        )

    def __ne__(self, other) -> bool:
        return not self.__eq__(other)

    def __hash__(self) -> int:
        return hash((self.desc, self.coeffs))

    def __lt__(self, other: "FieldElem") -> bool:
        self._same(other)
        return self.coeffs < other.coeffs

    # -- text -----------------------------------------------------------

    def __str__(self) -> str:
        return format_elem(self)

    def __repr__(self) -> str:
        return f"<{format_elem(self)} in {self.desc}>"


def format_elem(e: FieldElem) -> str:
    """Render as a polynomial in ``a``, highest degree first."""
    parts = []
    for i in range(e.desc.k - 1, -1, -1):
        c = e.coeffs[i]
        if c == 0:
            continue
        if i == 0:
            parts.append(str(c))
        elif i == 1:
            parts.append("a" if c == 1 else f"{c}*a")
        else:
            parts.append(f"a^{i}" if c == 1 else f"{c}*a^{i}")
    return "+".join(parts) if parts else "0"


def parse_elem(desc: FieldDesc, text: str) -> FieldElem:
    """Inverse of ``format_elem`` (also accepts plain integers)."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty field element")
    coeffs = [0] * desc.k
    for part in s.split("+"):
        if not part:
            raise ValueError(f"bad field element syntax: {text!r}")
        if "a" not in part:
            coeffs[0] = (coeffs[0] + int(part)) % desc.p
            continue
        c_str, _, rest = part.partition("a")
        c = int(c_str.rstrip("*")) if c_str else 1
        deg = int(rest[1:]) if rest.startswith("^") else 1
        if deg >= desc.k:
            raise ValueError(f"degree {deg} too large for {desc}")
        coeffs[deg] = (coeffs[deg] + c) % desc.p
    return desc.element(coeffs)


# ---------------------------------------------------------------------------
# Linearized (additive) equations: sum_i c_i x^{p^i} = b.


class LinearizedSolution:
    """Solution set of an additive equation over F_{p^k}.

    ``solutions`` is the complete, sorted tuple of roots in the field.
    ``extension_required`` is set when the set is empty: the equation is
    then solvable only after an explicit base change.
    """

    __slots__ = ("solutions", "extension_required")

    def __init__(self, solutions: tuple[FieldElem, ...]):
        self.solutions = solutions
        self.extension_required = not solutions

    def __repr__(self) -> str:
        tag = " extension-required" if self.extension_required else ""
        return f"<{len(self.solutions)} solution(s){tag}>"


def _solve_mod_p(matrix: list[list[int]], rhs: list[int], p: int):
    """Gaussian elimination over Z/p.

    Returns (particular, kernel_basis) or None when inconsistent.
    """
    k = len(rhs)
    aug = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    pivots: list[int] = []
    row = 0
    for col in range(k):
        sel = next((r for r in range(row, k) if aug[r][col] % p), None)
        if sel is None:
            continue
        aug[row], aug[sel] = aug[sel], aug[row]
        inv = pow(aug[row][col], -1, p)
        aug[row] = [(v * inv) % p for v in aug[row]]
        for r in range(k):
            if r != row and aug[r][col] % p:
                c = aug[r][col]
                aug[r] = [(v - c * w) % p for v, w in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
    for r in range(row, k):
        if aug[r][k] % p:
            return None
    particular = [0] * k
    for r, col in enumerate(pivots):
        particular[col] = aug[r][k]
    free_cols = [c for c in range(k) if c not in pivots]
    kernel = []
    for fc in free_cols:
        vec = [0] * k
        vec[fc] = 1
        for r, col in enumerate(pivots):
            vec[col] = (-aug[r][fc]) % p
        kernel.append(vec)
    return particular, kernel


def solve_linearized(
    coeffs: Sequence[FieldElem], rhs: FieldElem
) -> LinearizedSolution:
    """All x in F_{p^k} with sum_i coeffs[i] * x^{p^i} = rhs.

    The left side is additive, hence Z/p-linear on the coefficient
    vectors; the equation reduces to a k x k linear system over Z/p and
    the full solution set is the particular solution plus the kernel.
    """
    if not coeffs:
        raise AllCoefficientsZero("no coefficients supplied")
    desc = coeffs[0].desc
    for c in coeffs:
        if c.desc != desc:
            raise MixedField("linearized coefficients from different fields")
    if rhs.desc != desc:
        raise MixedField("right-hand side from a different field")
    if all(c.is_zero() for c in coeffs):
        raise AllCoefficientsZero("all linearized coefficients are zero")
    p, k = desc.p, desc.k
    columns = []
    for j in range(k):
        basis = desc.element([0] * j + [1])
        image = desc.zero()
        for i, c in enumerate(coeffs):
            if not c.is_zero():
                image = image + c * basis.frobenius(i)
        columns.append(image.coeffs)
    matrix = [[columns[j][i] for j in range(k)] for i in range(k)]
    solved = _solve_mod_p(matrix, list(rhs.coeffs), p)
    if solved is None:
        return LinearizedSolution(())
    particular, kernel = solved
    roots = set()
    for combo in itertools.product(range(p), repeat=len(kernel)):
        vec = list(particular)
        for t, basis_vec in zip(combo, kernel):
            for i in range(k):
                vec[i] = (vec[i] + t * basis_vec[i]) % p
        roots.add(desc.element(vec))
    return LinearizedSolution(tuple(sorted(roots, key=lambda e: e.coeffs)))


# ---------------------------------------------------------------------------
# Explicit base change.


def extend_field(desc: FieldDesc, factor: int) -> FieldDesc:
    """The default descriptor of F_{p^(k*factor)}."""
    if factor < 1:
        raise ValueError("extension factor must be >= 1")
    return FieldDesc(desc.p, desc.k * factor)


class FieldEmbedding:
    """Explicit embedding of F_{p^k} into F_{p^(k*j)}.

    Determined by the image of the generator: the lexicographically
    least root of the small modulus in the big field.  Any root gives a
    field embedding, and Frobenius commutes with every field embedding.

    All roots lie in the unique copy of F_{p^k} inside the big field,
    which is the solution set of the additive equation z^{p^k} = z;
    searching those p^k candidates instead of the whole big field keeps
    tower constructions cheap.
    """

    __slots__ = ("small", "big", "gen_image")

    def __init__(self, small: FieldDesc, big: FieldDesc):
        if big.p != small.p or big.k % small.k != 0:
            raise ValueError(f"{big} does not contain {small}")
        self.small = small
        self.big = big
        m = small.k
        subfield_eq = [-big.one() if i == 0 else big.zero() for i in range(m + 1)]
        subfield_eq[m] = subfield_eq[m] + big.one()
        if m % big.k == 0:
            candidates = None  # degenerate: the whole field, skip the solve
        else:
            candidates = solve_linearized(subfield_eq, big.zero()).solutions
        root = None
        for cand in candidates if candidates is not None else big.elements():
            acc = big.zero()
            for c in reversed(small.modulus):
                acc = acc * cand + big.element(c)
            if acc.is_zero() and (root is None or cand < root):
                root = cand
        if root is None:
            raise AssertionError("small modulus has no root in big field")
        self.gen_image = root

    def __call__(self, elem: FieldElem) -> FieldElem:
        if elem.desc != self.small:
            raise MixedField("element not from the embedding's source field")
        acc = self.big.zero()
        for c in reversed(elem.coeffs):
            acc = acc * self.gen_image + self.big.element(c)
        return acc
