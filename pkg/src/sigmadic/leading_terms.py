"""Leading-term calculus for truncated W(F_{p^k}).

For an index n with m = val(n), the leading-term sort is
K*/(1 + p^{m+1} O) together with 0.  Only levels m are materialized:
for p' = p^val(n) the canonical map between the sorts for n and p' is
an isomorphism, so a constructor argument n is normalized to its level
and nothing else about n is retained.

A nonzero leading term at level m is stored as (gamma, unit): gamma is
the valuation and unit is the coefficient vector of x * p^{-gamma}
modulo p^{m+1}.  Reading the unit digits of x requires
m + 1 + val(x) <= N, otherwise InsufficientPrecision is raised.

Partial addition from level m_src to a coarser level m_dst <= m_src is
the graph of addition that leading terms remember: with canonical
representatives a, b the sum projects to level m_dst exactly when
val(a + b) <= min(val a, val b) + (m_src - m_dst); otherwise the result
is the zero term.  The outcome depends only on the classes, which a
randomized representative-independence test exercises.

The residue sort res_m = O / p^{m+1} O carries the angular component
ac_m(x) = res_m(x * p^{-val x}), a multiplicative total map with
ac_m(0) = 0, compatible with the Frobenius lift: ac_m(sigma x) =
sigma_m(ac_m(x)).
"""

from __future__ import annotations

from .errors import InsufficientPrecision, MixedField
from .witt import INFINITY, RingDesc, WittNum, int_val, vec_val


def level_for_index(n: int, p: int) -> int:
    """Normalize a sort index n >= 1 to its level m = val_p(n)."""
    if n < 1:
        raise ValueError("sort index must be >= 1")
    return int_val(n, p)


def _format_vec(vec) -> str:
    """Coefficient vector as a polynomial in ``a`` (plain int for k=1)."""
    if len(vec) == 1:
        return str(vec[0])
    parts = []
    for i in range(len(vec) - 1, -1, -1):
        c = vec[i]
        if c == 0:
            continue
        if i == 0:
            parts.append(str(c))
        elif i == 1:
            parts.append("a" if c == 1 else f"{c}*a")
        else:
            parts.append(f"a^{i}" if c == 1 else f"{c}*a^{i}")
    return "+".join(parts) if parts else "0"


class LeadingTerm:
    """An element of the level-m leading-term sort."""

    __slots__ = ("ring", "level", "gamma", "unit")

    def __init__(self, ring: RingDesc, level: int, gamma, unit):
        if level < 0:
            raise ValueError("level must be >= 0")
        self.ring = ring
        self.level = level
        if gamma is INFINITY or unit is None:
            self.gamma = INFINITY
            self.unit = None
        else:
            mod = ring.p ** (level + 1)
            unit = tuple(int(c) % mod for c in unit)
            if vec_val(unit, ring.p) != 0:
                raise ValueError("unit part must have valuation zero")
            self.gamma = int(gamma)
            self.unit = unit

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, ring: RingDesc, level: int) -> "LeadingTerm":
        return cls(ring, level, INFINITY, None)

    @classmethod
    def from_witt(cls, x: WittNum, level: int, index: int | None = None) -> "LeadingTerm":
        """lt at the given level (or at level val_p(index) if an index
        is supplied instead)."""
        ring = x.desc
        if index is not None:
            level = level_for_index(index, ring.p)
        v = x.val()
        if v is INFINITY:
            return cls.zero(ring, level)
        if level + 1 + v > ring.N:
            raise InsufficientPrecision(
                f"level {level} needs {level + 1} unit digits above val {v}, "
                f"but precision is {ring.N}"
            )
        return cls(ring, level, v, x.shift_down(v).coeffs)

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return self.unit is None

    def _same(self, other: "LeadingTerm") -> None:
        if not isinstance(other, LeadingTerm) or other.ring != self.ring:
            raise MixedField("leading terms from different rings")
        if other.level != self.level:
            raise ValueError("leading terms at different levels")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LeadingTerm)
            and self.ring == other.ring
            and self.level == other.level
            and self.gamma == other.gamma
            and self.unit == other.unit
        )

    def __ne__(self, other) -> bool:
        return not self.__eq__(other)

    def __hash__(self) -> int:
        return hash((self.ring, self.level, self.gamma, self.unit))

    # -- operations -----------------------------------------------------------

    def __mul__(self, other: "LeadingTerm") -> "LeadingTerm":
        self._same(other)
        if self.is_zero() or other.is_zero():
            return LeadingTerm.zero(self.ring, self.level)
        mod = self.ring.p ** (self.level + 1)
        unit = self.ring.mul_vec(self.unit, other.unit, mod)
        return LeadingTerm(self.ring, self.level, self.gamma + other.gamma, unit)

    def divides(self, other: "LeadingTerm") -> bool:
        """The divisibility predicate: val(self) <= val(other)."""
        self._same(other)
        return self.gamma <= other.gamma

    def project(self, level: int) -> "LeadingTerm":
        """Canonical projection to a coarser level."""
        if level > self.level:
            raise ValueError("can only project to a coarser (smaller) level")
        if self.is_zero():
            return LeadingTerm.zero(self.ring, level)
        return LeadingTerm(self.ring, level, self.gamma, self.unit)

    def frobenius(self, iterate: int = 1) -> "LeadingTerm":
        if self.is_zero():
            return self
        mod = self.ring.p ** (self.level + 1)
        return LeadingTerm(
            self.ring, self.level, self.gamma,
            self.ring.sigma_vec(self.unit, mod, iterate),
        )

    def __str__(self) -> str:
        if self.is_zero():
            return f"0[{self.level}]"
        return f"lt[{self.level}]({self.gamma}; {_format_vec(self.unit)})"

    __repr__ = __str__


def partial_add(x: LeadingTerm, y: LeadingTerm, dst_level: int) -> LeadingTerm:
    """The partial addition from the common source level to dst_level.

    Works on canonical representatives u * p^gamma; the source level
    provides exactly enough unit digits to decide the definedness
    condition and to read the destination unit when it holds.
    """
    x._same(y)
    m = x.level
    if dst_level > m or dst_level < 0:
        raise ValueError("destination level must satisfy 0 <= dst <= src")
    ring = x.ring
    if x.is_zero() and y.is_zero():
        return LeadingTerm.zero(ring, dst_level)
    if x.is_zero():
        return y.project(dst_level)
    if y.is_zero():
        return x.project(dst_level)
    mod = ring.p ** (m + 1)
    gamma = min(x.gamma, y.gamma)
    ax = ring.scale_vec(ring.p ** (x.gamma - gamma) % mod, x.unit, mod)
    ay = ring.scale_vec(ring.p ** (y.gamma - gamma) % mod, y.unit, mod)
    s = ring.add_vec(ax, ay, mod)
    v = vec_val(s, ring.p)
    slack = m - dst_level
    if v is INFINITY or v > slack:
        # val(x + y) exceeds min(val x, val y) + (m_src - m_dst):
        # the sum is not determined at the destination level.
        return LeadingTerm.zero(ring, dst_level)
    pv = ring.p**v
    unit = tuple((c // pv) % ring.p ** (dst_level + 1) for c in s)
    return LeadingTerm(ring, dst_level, gamma + v, unit)


class ResidueRingElem:
    """An element of res_m = O / p^{m+1} O."""

    __slots__ = ("ring", "level", "value")

    def __init__(self, ring: RingDesc, level: int, value):
        if level < 0:
            raise ValueError("level must be >= 0")
        mod = ring.p ** (level + 1)
        self.ring = ring
        self.level = level
        self.value = tuple(int(c) % mod for c in value)

    @classmethod
    def from_witt(cls, x: WittNum, level: int) -> "ResidueRingElem":
        ring = x.desc
        if level + 1 > ring.N:
            raise InsufficientPrecision(
                f"res at level {level} needs {level + 1} digits, precision is {ring.N}"
            )
        return cls(ring, level, x.coeffs)

    def _same(self, other: "ResidueRingElem") -> None:
        if not isinstance(other, ResidueRingElem) or other.ring != self.ring:
            raise MixedField("residue elements from different rings")
        if other.level != self.level:
            raise ValueError("residue elements at different levels")

    def __add__(self, other: "ResidueRingElem") -> "ResidueRingElem":
        self._same(other)
        mod = self.ring.p ** (self.level + 1)
        return ResidueRingElem(
            self.ring, self.level, self.ring.add_vec(self.value, other.value, mod)
        )

    def __mul__(self, other: "ResidueRingElem") -> "ResidueRingElem":
        self._same(other)
        mod = self.ring.p ** (self.level + 1)
        return ResidueRingElem(
            self.ring, self.level, self.ring.mul_vec(self.value, other.value, mod)
        )

    def __neg__(self) -> "ResidueRingElem":
        mod = self.ring.p ** (self.level + 1)
        return ResidueRingElem(self.ring, self.level, tuple((-c) % mod for c in self.value))

    def frobenius(self, iterate: int = 1) -> "ResidueRingElem":
        mod = self.ring.p ** (self.level + 1)
        return ResidueRingElem(
            self.ring, self.level, self.ring.sigma_vec(self.value, mod, iterate)
        )

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.value)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ResidueRingElem)
            and self.ring == other.ring
            and self.level == other.level
            and self.value == other.value
        )

    def __ne__(self, other) -> bool:
        return not self.__eq__(other)

    def __hash__(self) -> int:
        return hash((self.ring, self.level, self.value))

    def __str__(self) -> str:
        return f"res[{self.level}]({_format_vec(self.value)})"

    __repr__ = __str__


def angular_component(x: WittNum, level: int) -> ResidueRingElem:
    """ac_m(x) = res_m(x * p^{-val x}), with ac_m(0) = 0.

    Multiplicative as a total map, and the section gamma |-> p^gamma
    makes it compatible with leading terms: a nonzero lt at level m is
    exactly the pair (val, ac_m).
    """
    ring = x.desc
    v = x.val()
    if v is INFINITY:
        return ResidueRingElem(ring, level, [0] * ring.k)
    if level + 1 + v > ring.N:
        raise InsufficientPrecision(
            f"ac at level {level} needs {level + 1} unit digits above val {v}, "
            f"but precision is {ring.N}"
        )
    return ResidueRingElem(ring, level, x.shift_down(v).coeffs)
