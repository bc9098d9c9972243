"""Truncated unramified extensions W(F_{p^k}) / p^N with a Frobenius lift.

A ring descriptor fixes the residue field F_{p^k} and one absolute
precision N.  Elements live in Z/p^N[x]/(phi), where phi is the monic
integer lift of the residue modulus, and are stored as length-k
coefficient vectors in the polynomial basis.  Any monic lift of an
irreducible residue modulus presents the same truncated unramified
extension, so the plain lift (coefficients 0..p-1) is used.

The Frobenius lift sigma is the unique ring automorphism reducing to
a |-> a^p on residues.  It is precomputed once per descriptor: the
image of the basis generator is the root of phi congruent to
(generator)^p mod p, obtained by Newton iteration, and sigma acts on a
coefficient vector by substituting that root.  sigma^{-1} = sigma^{k-1}.

Valuations are reported relative to the precision: val(x) is the
largest v <= N with x = 0 mod p^v, and INFINITY exactly when x
vanishes mod p^N.  Quotients follow the total-function convention
Q(x, 0) = 0, and raise PrecisionLoss rather than leave the valuation
ring.

Textual digit vectors use Teichmueller digits, x = sum teich(d_i) p^i,
because sigma acts on them coordinatewise by the residue Frobenius;
that makes the digit form an independent witness for sigma debugging.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import MixedField, NonUnitInverse, PrecisionLoss
from .finite_field import FieldDesc, FieldElem, FieldEmbedding, extend_field, format_elem, parse_elem

INFINITY = float("inf")


def int_val(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vec_val(vec: Sequence[int], p: int):
    """Minimal p-adic valuation over the entries; INFINITY if all zero."""
    best = None
    for c in vec:
        if c:
            v = int_val(c, p)
            if best is None or v < best:
                best = v
                if best == 0:
                    break
    return INFINITY if best is None else best


class RingDesc:
    """Descriptor of W(F_{p^k}) truncated at absolute precision p^N."""

    __slots__ = ("field", "N", "p", "k", "pN", "phi", "_highpow", "sigma_image", "_sigma_pows")

    def __init__(self, field: FieldDesc, precision: int):
        if precision < 1:
            raise ValueError("precision must be >= 1")
        self.field = field
        self.N = precision
        self.p = field.p
        self.k = field.k
        self.pN = field.p**precision
        self.phi = tuple(int(c) for c in field.modulus)
        self._highpow = self._build_highpow()
        gen_vec = self._lift_field(field.gen())
        start = self._pow_vec(gen_vec, self.p, self.pN)
        self.sigma_image = self._hensel_root(self.phi, start)
        pows = [self._one_vec()]
        for _ in range(1, self.k):
            pows.append(self.mul_vec(pows[-1], self.sigma_image, self.pN))
        self._sigma_pows = tuple(pows)
        # Construction invariants: the sigma image reduces to the residue
        # Frobenius of the generator and satisfies the lifted modulus.
        assert tuple(c % self.p for c in self.sigma_image) == field.gen().frobenius().coeffs
        assert all(c == 0 for c in self._eval_int_poly(self.phi, self.sigma_image, self.pN))

    # -- raw coefficient-vector arithmetic (ints mod a power of p) ------

    def _one_vec(self) -> tuple[int, ...]:
        return tuple([1] + [0] * (self.k - 1))

    def _lift_field(self, e: FieldElem) -> tuple[int, ...]:
        return tuple(int(c) for c in e.coeffs)

    def _build_highpow(self):
        # Reductions of x^{k+j} mod phi for j = 0..k-2, entries mod p^N.
        if self.k == 1:
            return ()
        table = []
        cur = [(-self.phi[i]) % self.pN for i in range(self.k)]
        table.append(tuple(cur))
        for _ in range(1, self.k - 1):
            top = cur[-1]
            nxt = [0] + cur[:-1]
            if top:
                base = table[0]
                for i in range(self.k):
                    nxt[i] = (nxt[i] + top * base[i]) % self.pN
            cur = nxt
            table.append(tuple(cur))
        return tuple(table)

    def add_vec(self, a, b, modulus: int) -> tuple[int, ...]:
        return tuple((x + y) % modulus for x, y in zip(a, b))

    def sub_vec(self, a, b, modulus: int) -> tuple[int, ...]:
        return tuple((x - y) % modulus for x, y in zip(a, b))

    def scale_vec(self, c: int, a, modulus: int) -> tuple[int, ...]:
        return tuple((c * x) % modulus for x in a)

    def mul_vec(self, a, b, modulus: int) -> tuple[int, ...]:
        k = self.k
        if k == 1:
            return ((a[0] * b[0]) % modulus,)
        conv = [0] * (2 * k - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    conv[i + j] += ai * bj
        out = [c % modulus for c in conv[:k]]
        for j in range(k - 1):
            c = conv[k + j] % modulus
            if c:
                red = self._highpow[j]
                for i in range(k):
                    out[i] = (out[i] + c * red[i]) % modulus
        return tuple(out)

    def _pow_vec(self, a, exp: int, modulus: int) -> tuple[int, ...]:
        result = self._one_vec()
        acc = tuple(c % modulus for c in a)
        while exp:
            if exp & 1:
                result = self.mul_vec(result, acc, modulus)
            acc = self.mul_vec(acc, acc, modulus)
            exp >>= 1
        return result

    def _eval_int_poly(self, coeffs: Sequence[int], at, modulus: int):
        """Horner evaluation of an integer-coefficient polynomial."""
        acc = tuple([0] * self.k)
        const = tuple([1] + [0] * (self.k - 1))
        for c in reversed(coeffs):
            acc = self.mul_vec(acc, at, modulus)
            if c:
                acc = self.add_vec(acc, self.scale_vec(c % modulus, const, modulus), modulus)
        return acc

    def inv_vec(self, u, modulus: int | None = None) -> tuple[int, ...]:
        """Inverse of a unit vector by residue inversion plus lifting."""
        modulus = self.pN if modulus is None else modulus
        res = self.field.element([c % self.p for c in u])
        z = tuple(int(c) % modulus for c in res.inverse().coeffs)
        two = tuple([2] + [0] * (self.k - 1))
        rounds = max(1, (self.N - 1).bit_length()) + 1
        for _ in range(rounds):
            t = self.sub_vec(two, self.mul_vec(u, z, modulus), modulus)
            z = self.mul_vec(z, t, modulus)
        assert self.mul_vec(u, z, modulus) == tuple(
            c % modulus for c in self._one_vec()
        )
        return z

    def sigma_vec(self, vec, modulus: int, iterate: int = 1) -> tuple[int, ...]:
        """Frobenius lift on a coefficient vector mod the given modulus."""
        e = iterate % self.k
        out = tuple(c % modulus for c in vec)
        for _ in range(e):
            acc = tuple([0] * self.k)
            for j, c in enumerate(out):
                if c:
                    acc = self.add_vec(
                        acc, self.scale_vec(c, self._sigma_pows[j], modulus), modulus
                    )
            out = acc
        return out

    def _hensel_root(self, int_coeffs: Sequence[int], start) -> tuple[int, ...]:
        """Newton-lift a simple residue root of an integer polynomial."""
        deriv = [(i * int_coeffs[i]) % self.pN for i in range(1, len(int_coeffs))]
        z = tuple(c % self.pN for c in start)
        rounds = max(1, (self.N - 1).bit_length()) + 1
        for _ in range(rounds):
            fz = self._eval_int_poly(int_coeffs, z, self.pN)
            dz = self._eval_int_poly(deriv, z, self.pN)
            z = self.sub_vec(z, self.mul_vec(fz, self.inv_vec(dz), self.pN), self.pN)
        assert all(c == 0 for c in self._eval_int_poly(int_coeffs, z, self.pN))
        return z

    # -- element constructors -------------------------------------------

    def element(self, value) -> "WittNum":
        if isinstance(value, WittNum):
            if value.desc != self:
                raise MixedField("element belongs to a different ring")
            return value
        if isinstance(value, int):
            coeffs = [value % self.pN] + [0] * (self.k - 1)
        else:
            coeffs = [int(c) % self.pN for c in value]
            if len(coeffs) > self.k:
                raise ValueError("coefficient vector longer than degree")
            coeffs += [0] * (self.k - len(coeffs))
        return WittNum(self, tuple(coeffs))

    def zero(self) -> "WittNum":
        return self.element(0)

    def one(self) -> "WittNum":
        return self.element(1)

    def prime(self) -> "WittNum":
        return self.element(self.p)

    def lift_residue(self, e: FieldElem) -> "WittNum":
        """Coefficient-wise integer lift of a residue element."""
        if e.desc != self.field:
            raise MixedField("residue element from a different field")
        return self.element(list(e.coeffs))

    def teichmuller(self, r: FieldElem) -> "WittNum":
        """The multiplicative lift: the fixpoint of x |-> x^{p^k} over r.

        The iteration converges quadratically from any lift of r.
        """
        if r.desc != self.field:
            raise MixedField("residue element from a different field")
        if r.is_zero():
            return self.zero()
        q = self.p**self.k
        vec = self._lift_field(r)
        for _ in range(self.N + 2):
            nxt = self._pow_vec(vec, q, self.pN)
            if nxt == vec:
                break
            vec = nxt
        else:
            raise AssertionError("Teichmueller iteration did not stabilize")
        return WittNum(self, vec)

    def from_teich_digits(self, digits: Iterable[FieldElem]) -> "WittNum":
        acc = self.zero()
        for i, d in enumerate(digits):
            if i >= self.N:
                break
            acc = acc + self.teichmuller(d) * self.element(self.p**i)
        return acc

    def random_element(self, rng) -> "WittNum":
        return self.element([rng.randrange(self.pN) for _ in range(self.k)])

    def random_unit(self, rng) -> "WittNum":
        while True:
            x = self.random_element(rng)
            if x.val() == 0:
                return x

    # -- structure -------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RingDesc)
            and self.field == other.field
            and self.N == other.N
        )

    def __ne__(self, other) -> bool:
        return not self.__eq__(other)

    def __hash__(self) -> int:
        return hash((self.field, self.N))

    def __str__(self) -> str:
        return f"W({self.field})/p^{self.N}"

    __repr__ = __str__


class WittNum:
    """An element of a truncated W(F_{p^k}), a coefficient vector mod p^N."""

    __slots__ = ("desc", "coeffs")

    def __init__(self, desc: RingDesc, coeffs: tuple[int, ...]):
        self.desc = desc
        self.coeffs = coeffs

    def _same(self, other: "WittNum") -> None:
        if not isinstance(other, WittNum) or other.desc != self.desc:
            raise MixedField("operands live in different rings")

    # -- ring operations --------------------------------------------------

    def __add__(self, other: "WittNum") -> "WittNum":
        self._same(other)
        d = self.desc
        return WittNum(d, d.add_vec(self.coeffs, other.coeffs, d.pN))

    def __sub__(self, other: "WittNum") -> "WittNum":
        self._same(other)
        d = self.desc
        return WittNum(d, d.sub_vec(self.coeffs, other.coeffs, d.pN))

    def __neg__(self) -> "WittNum":
        d = self.desc
        return WittNum(d, tuple((-c) % d.pN for c in self.coeffs))

    def __mul__(self, other: "WittNum") -> "WittNum":
        self._same(other)
        d = self.desc
        return WittNum(d, d.mul_vec(self.coeffs, other.coeffs, d.pN))

    def __pow__(self, exp: int) -> "WittNum":
        if exp < 0:
            return self.inverse() ** (-exp)
        d = self.desc
        return WittNum(d, d._pow_vec(self.coeffs, exp, d.pN))

    def inverse(self) -> "WittNum":
        d = self.desc
        if self.val() != 0:
            raise NonUnitInverse(
                f"cannot invert element of valuation {self.val()}"
            )
        return WittNum(d, d.inv_vec(self.coeffs))

    # -- valuation ---------------------------------------------------------

    def val(self):
        """Largest v <= N with self = 0 mod p^v; INFINITY when 0 mod p^N."""
        return vec_val(self.coeffs, self.desc.p)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def shift_down(self, v: int) -> "WittNum":
        """Exact division by p^v; requires val(self) >= v."""
        if v == 0:
            return self
        d = self.desc
        pv = d.p**v
        if any(c % pv for c in self.coeffs):
            raise PrecisionLoss(f"element is not divisible by p^{v}")
        return WittNum(d, tuple(c // pv for c in self.coeffs))

    def quot(self, other: "WittNum") -> "WittNum":
        """Total quotient: Q(x, 0) = 0; otherwise x/y when it stays
        in the valuation ring, else PrecisionLoss.

        The result is the exact quotient of the stored representatives;
        its absolute precision degrades to N - val(y).
        """
        self._same(other)
        vy = other.val()
        if vy is INFINITY:
            return self.desc.zero()
        vx = self.val()
        if vx is INFINITY:
            return self.desc.zero()
        if vy > vx:
            raise PrecisionLoss(
                f"quotient with val(numerator)={vx} < val(denominator)={vy} "
                "leaves the valuation ring"
            )
        unit = other.shift_down(vy)
        return self.shift_down(vy) * unit.inverse()

    # -- Frobenius and residue ----------------------------------------------

    def frobenius(self, iterate: int = 1) -> "WittNum":
        """The Frobenius lift sigma^iterate (negative = inverse)."""
        d = self.desc
        return WittNum(d, d.sigma_vec(self.coeffs, d.pN, iterate))

    def residue(self) -> FieldElem:
        d = self.desc
        return d.field.element([c % d.p for c in self.coeffs])

    def teich_digits(self) -> tuple[FieldElem, ...]:
        """Digits d_i with self = sum teich(d_i) p^i (exact mod p^N)."""
        d = self.desc
        digits = []
        x = self
        for _ in range(d.N):
            r = x.residue()
            digits.append(r)
            # Digit i is read off an element exact mod p^(N-i), so all
            # N digits are determined.
            x = (x - d.teichmuller(r)).shift_down(1)
        return tuple(digits)

    # -- comparisons and text -------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, WittNum)
            and self.desc == other.desc
            and self.coeffs == other.coeffs
        )

    def __ne__(self, other) -> bool:
        return not self.__eq__(other)

    def __hash__(self) -> int:
        return hash((self.desc, self.coeffs))

    def __str__(self) -> str:
        if self.desc.k == 1:
            return str(self.coeffs[0])
        return self.digits_text()

    def __repr__(self) -> str:
        return f"<{self} in {self.desc}>"

    def digits_text(self) -> str:
        body = ", ".join(format_elem(d) for d in self.teich_digits())
        return f"[{body}] base {self.desc.p}"


def make_ring(p: int, k: int, N: int, modulus: Sequence[int] | None = None) -> RingDesc:
    """Convenience builder for W(F_{p^k}) mod p^N."""
    return RingDesc(FieldDesc(p, k, modulus), N)


def parse_witt(ring: RingDesc, text: str) -> WittNum:
    """Parse the integer shorthand or the Teichmueller digit form."""
    s = text.strip()
    if s.startswith("["):
        close = s.index("]")
        inner = s[1:close]
        suffix = s[close + 1 :].strip()
        if suffix:
            parts = suffix.split()
            if len(parts) != 2 or parts[0] != "base" or int(parts[1]) != ring.p:
                raise ValueError(f"bad digit-vector suffix: {suffix!r}")
        digits = [
            parse_elem(ring.field, chunk) for chunk in inner.split(",") if chunk.strip()
        ]
        return ring.from_teich_digits(digits)
    return ring.element(int(s))


# ---------------------------------------------------------------------------
# Explicit base change of a whole ring.


class RingEmbedding:
    """Ring map W(F_{p^k})/p^N -> W(F_{p^(k*j)})/p^N over a field embedding.

    The basis generator goes to the Newton-lifted root of the small
    modulus sitting over the embedded residue generator, which makes the
    map a ring homomorphism commuting with the Frobenius lifts.
    """

    __slots__ = ("small", "big", "field_embedding", "gen_image")

    def __init__(self, small: RingDesc, big: RingDesc, field_embedding: FieldEmbedding | None = None):
        if small.N != big.N:
            raise ValueError("ring embedding requires equal precisions")
        if field_embedding is None:
            field_embedding = FieldEmbedding(small.field, big.field)
        self.small = small
        self.big = big
        self.field_embedding = field_embedding
        start = big._lift_field(field_embedding(small.field.gen()))
        root = big._hensel_root([c for c in small.phi], start)
        self.gen_image = WittNum(big, root)

    def __call__(self, x: WittNum) -> WittNum:
        if x.desc != self.small:
            raise MixedField("element not from the embedding's source ring")
        acc = self.big.zero()
        for c in reversed(x.coeffs):
            acc = acc * self.gen_image + self.big.element(int(c))
        return acc


def extend_ring(ring: RingDesc, factor: int) -> tuple[RingDesc, RingEmbedding]:
    """Explicit base change to W(F_{p^(k*factor)}) at the same precision."""
    big = RingDesc(extend_field(ring.field, factor), ring.N)
    return big, RingEmbedding(ring, big)
