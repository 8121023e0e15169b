"""Eventually periodic subsets of the naturals and finite bitsets.

An :class:`EPSet` over the naturals is described by a finite prefix
(membership of ``0..N-1``) followed by a periodic rule: ``k >= N`` belongs
to the set iff ``k mod period`` is in ``pattern``.  Residues are absolute,
not relative to ``N``.  Over a finite universe of ``n`` points the set is
just an ``n``-bit mask.

Every instance is canonical on construction (minimal period, then
minimal prefix) so ``==`` decides set equality.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .errors import (ChargeLabError, InvariantViolation, ParseError,
                     PeriodLimitExceeded, UniverseMismatch)

NATURALS = None
DEFAULT_PERIOD_LIMIT = 10**6


def period_limit():
    """Largest period an operation may produce (``CHARGE_LAB_PERIOD_LIMIT``)."""
    raw = os.environ.get("CHARGE_LAB_PERIOD_LIMIT")
    if raw is None:
        return DEFAULT_PERIOD_LIMIT
    try:
        value = int(raw)
    except ValueError:
        raise ChargeLabError(f"CHARGE_LAB_PERIOD_LIMIT is not an integer: {raw!r}")
    if value < 1:
        raise ChargeLabError("CHARGE_LAB_PERIOD_LIMIT must be positive")
    return value


def check_period(p):
    limit = period_limit()
    if p > limit:
        raise PeriodLimitExceeded(f"period {p} exceeds the limit {limit}")
    return p


def lcm(*values):
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


def bitmask(n):
    return (1 << n) - 1 if n > 0 else 0


def tile(pattern, p, n):
    """Bits ``0..n-1`` where bit ``k`` is bit ``k mod p`` of ``pattern``."""
    if n <= 0 or pattern == 0:
        return 0
    reps = -(-n // p)
    return (pattern * (bitmask(p * reps) // bitmask(p))) & bitmask(n)


def residue_pattern(segment, offset, p):
    """Pattern mod ``p`` read from ``p`` consecutive bits starting at ``offset``."""
    s = offset % p
    segment &= bitmask(p)
    return ((segment << s) | (segment >> (p - s))) & bitmask(p)


def _divisors(n):
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def _rotates_to_self(pattern, d, p):
    return ((pattern << d) | (pattern >> (p - d))) & bitmask(p) == pattern


def _bitstring(bits, n):
    return "".join("1" if bits >> k & 1 else "0" for k in range(n))


@dataclass(frozen=True)
class EPSet:
    universe: int | None = NATURALS
    prefix_len: int = 0
    prefix: int = 0
    period: int = 1
    pattern: int = 0

    def __post_init__(self):
        u = self.universe
        if u is not None:
            if u < 0:
                raise InvariantViolation("finite universe size must be >= 0")
            if self.prefix >> u or self.prefix < 0:
                raise InvariantViolation("bits outside the finite universe")
            object.__setattr__(self, "prefix_len", u)
            object.__setattr__(self, "period", 1)
            object.__setattr__(self, "pattern", 0)
            return
        p, n = self.period, self.prefix_len
        if p < 1 or n < 0:
            raise InvariantViolation("period must be >= 1 and prefix length >= 0")
        if self.pattern < 0 or self.pattern >> p:
            raise InvariantViolation("pattern residue out of range")
        if self.prefix < 0 or self.prefix >> n:
            raise InvariantViolation("prefix bit beyond prefix length")
        check_period(p)
        pattern = self.pattern
        if pattern in (0, bitmask(p)):
            pattern, p = (0, 1) if pattern == 0 else (1, 1)
        else:
            for d in _divisors(p)[:-1]:
                if _rotates_to_self(pattern, d, p):
                    pattern &= bitmask(d)
                    p = d
                    break
        diff = (self.prefix ^ tile(pattern, p, n)) & bitmask(n)
        n = diff.bit_length()
        object.__setattr__(self, "period", p)
        object.__setattr__(self, "pattern", pattern)
        object.__setattr__(self, "prefix_len", n)
        object.__setattr__(self, "prefix", self.prefix & bitmask(n))

    # -- constructors -----------------------------------------------------

    @classmethod
    def naturals(cls):
        return cls(NATURALS, 0, 0, 1, 1)

    @classmethod
    def empty(cls, universe=NATURALS):
        return cls(universe)

    @classmethod
    def full(cls, universe=NATURALS):
        if universe is None:
            return cls.naturals()
        return cls(universe, universe, bitmask(universe))

    @classmethod
    def residues(cls, residues, modulus):
        """``{k : k mod modulus in residues}``."""
        pattern = 0
        for r in residues:
            pattern |= 1 << (r % modulus)
        return cls(NATURALS, 0, 0, modulus, pattern)

    @classmethod
    def finite(cls, elements, universe=NATURALS):
        bits = 0
        for k in elements:
            if k < 0:
                raise InvariantViolation(f"negative element {k}")
            bits |= 1 << k
        if universe is None:
            return cls(NATURALS, bits.bit_length(), bits)
        return cls(universe, universe, bits)

    @classmethod
    def interval(cls, lo, hi, universe=NATURALS):
        """``[lo, hi)`` intersected with the universe."""
        lo = max(lo, 0)
        if universe is not None:
            hi = min(hi, universe)
        bits = bitmask(hi) & ~bitmask(lo) if hi > lo else 0
        if universe is None:
            return cls(NATURALS, max(hi, 0), bits)
        return cls(universe, universe, bits)

    @classmethod
    def tail(cls, n, universe=NATURALS):
        """``{n, n+1, ...}``."""
        n = max(n, 0)
        if universe is None:
            return cls(NATURALS, n, 0, 1, 1)
        return cls.interval(n, universe, universe)

    @classmethod
    def from_bits(cls, bitstring):
        """Finite-universe set from a ``0``/``1`` string (char ``k`` = point ``k``)."""
        bits = 0
        for k, ch in enumerate(bitstring):
            if ch == "1":
                bits |= 1 << k
            elif ch != "0":
                raise ParseError(f"bad bit {ch!r}", column=k + 1)
        return cls(len(bitstring), len(bitstring), bits)

    # -- membership -------------------------------------------------------

    @property
    def is_naturals(self):
        return self.universe is None

    def __contains__(self, k):
        if k < 0:
            return False
        if self.universe is not None and k >= self.universe:
            return False
        if k < self.prefix_len:
            return bool(self.prefix >> k & 1)
        return bool(self.pattern >> (k % self.period) & 1)

    def mask(self, m):
        """Membership bits of ``0..m-1``."""
        if m <= 0:
            return 0
        n = self.prefix_len
        low = self.prefix & bitmask(m)
        if self.universe is not None or m <= n:
            return low
        return low | (tile(self.pattern, self.period, m) & ~bitmask(n))

    def is_empty(self):
        return self.prefix == 0 and self.pattern == 0

    def is_finite(self):
        return self.pattern == 0

    def is_full(self):
        return self == EPSet.full(self.universe)

    def elements(self):
        if not self.is_finite():
            raise NotImplementedError("infinite set has no element list")
        bits, out, k = self.prefix, [], 0
        while bits:
            if bits & 1:
                out.append(k)
            bits >>= 1
            k += 1
        return out

    def first(self):
        """Smallest element, or ``None`` if empty."""
        if self.prefix:
            return (self.prefix & -self.prefix).bit_length() - 1
        if self.pattern == 0:
            return None
        n, p = self.prefix_len, self.period
        for k in range(n, n + p):
            if self.pattern >> (k % p) & 1:
                return k
        raise AssertionError("unreachable")

    def __len__(self):
        if not self.is_finite():
            raise TypeError("infinite EPSet has no len()")
        return self.prefix.bit_count()

    def density(self):
        if self.universe is not None:
            raise UniverseMismatch("natural density needs the naturals universe")
        return Fraction(self.pattern.bit_count(), self.period)

    # -- Boolean operations -----------------------------------------------

    def _same_universe(self, other):
        if not isinstance(other, EPSet):
            raise TypeError(f"expected EPSet, got {type(other).__name__}")
        if self.universe != other.universe:
            raise UniverseMismatch(
                f"universe mismatch: {self.universe!r} vs {other.universe!r}")

    def _combine(self, other, op):
        self._same_universe(other)
        if self.universe is not None:
            u = self.universe
            return EPSet(u, u, op(self.prefix, other.prefix) & bitmask(u))
        n = max(self.prefix_len, other.prefix_len)
        p = check_period(lcm(self.period, other.period))
        head = op(self.mask(n), other.mask(n)) & bitmask(n)
        rule = op(tile(self.pattern, self.period, p),
                  tile(other.pattern, other.period, p)) & bitmask(p)
        return EPSet(NATURALS, n, head, p, rule)

    def __and__(self, other):
        return self._combine(other, lambda x, y: x & y)

    def __or__(self, other):
        return self._combine(other, lambda x, y: x | y)

    def __sub__(self, other):
        return self._combine(other, lambda x, y: x & ~y)

    def __xor__(self, other):
        return self._combine(other, lambda x, y: x ^ y)

    def __invert__(self):
        if self.universe is not None:
            u = self.universe
            return EPSet(u, u, ~self.prefix & bitmask(u))
        return EPSet(NATURALS, self.prefix_len, ~self.prefix & bitmask(self.prefix_len),
                     self.period, ~self.pattern & bitmask(self.period))

    meet = __and__
    join = __or__
    difference = __sub__
    symmetric_difference = __xor__
    complement = __invert__

    def issubset(self, other):
        return (self - other).is_empty()

    __le__ = issubset

    def isdisjoint(self, other):
        return (self & other).is_empty()

    def cut(self, lo, hi=None):
        """Intersection with ``[lo, hi)`` (``hi=None`` means unbounded)."""
        window = EPSet.tail(lo, self.universe) if hi is None else \
            EPSet.interval(lo, hi, self.universe)
        return self & window

    # -- text form --------------------------------------------------------

    def text(self):
        if self.universe is not None:
            return "bits=" + _bitstring(self.prefix, self.universe)
        rs = ",".join(str(r) for r in range(self.period) if self.pattern >> r & 1)
        return (f"prefix={_bitstring(self.prefix, self.prefix_len)};"
                f"period={self.period};pattern={rs}")

    __str__ = text

    def __repr__(self):
        return f"EPSet({self.text()!r})"

    @classmethod
    def parse(cls, text):
        text = text.strip()
        if text.startswith("bits="):
            body = text[5:]
            try:
                return cls.from_bits(body)
            except ParseError as exc:
                raise ParseError(f"bad finite set {text!r}: {exc}",
                                 column=(exc.column or 0) + 5)
        fields = {}
        col = 1
        for part in text.split(";"):
            key, eq, value = part.partition("=")
            key = key.strip()
            if not eq or key not in ("prefix", "period", "pattern") or key in fields:
                raise ParseError(f"bad EPSet field {part!r}", column=col)
            fields[key] = (value.strip(), col + len(part) - len(part.lstrip()))
            col += len(part) + 1
        if set(fields) != {"prefix", "period", "pattern"}:
            raise ParseError(f"EPSet needs prefix, period and pattern: {text!r}")
        bits_s, c = fields["prefix"]
        if any(ch not in "01" for ch in bits_s):
            raise ParseError(f"bad prefix bits {bits_s!r}", column=c)
        period_s, c = fields["period"]
        try:
            period = int(period_s)
        except ValueError:
            raise ParseError(f"bad period {period_s!r}", column=c)
        if period < 1:
            raise ParseError("period must be >= 1", column=c)
        pattern_s, c = fields["pattern"]
        pattern = 0
        if pattern_s:
            for tok in pattern_s.split(","):
                try:
                    r = int(tok)
                except ValueError:
                    raise ParseError(f"bad residue {tok!r}", column=c)
                if not 0 <= r < period:
                    raise ParseError(f"residue {r} outside 0..{period - 1}", column=c)
                pattern |= 1 << r
        prefix = 0
        for k, ch in enumerate(bits_s):
            if ch == "1":
                prefix |= 1 << k
        return cls(NATURALS, len(bits_s), prefix, period, pattern)


def meet(a, b):
    return a & b


def join(a, b):
    return a | b


def difference(a, b):
    return a - b


def complement(a):
    return ~a


def natural_density(a):
    """Natural density ``|pattern| / period``; ignores the prefix."""
    return a.density()


def check_universe(*items):
    """Common universe of ``items`` (EPSets or objects with ``.universe``)."""
    universes = {x.universe for x in items}
    if len(universes) > 1:
        raise UniverseMismatch(f"universe mismatch: {sorted(universes, key=repr)}")
    return universes.pop() if universes else NATURALS


def partition_atoms(sets, universe=NATURALS):
    """Nonempty atoms of the partition generated by ``sets``."""
    atoms = [EPSet.full(universe)]
    for s in sets:
        refined = []
        for atom in atoms:
            inside, outside = atom & s, atom - s
            if not inside.is_empty():
                refined.append(inside)
            if not outside.is_empty():
                refined.append(outside)
        atoms = refined
    return atoms


MAX_GENERATORS = 4


@dataclass(frozen=True)
class FiniteSubalgebra:
    """Materialized Boolean subalgebra; ``elements[m]`` is the union of the atoms in bitmask ``m``."""

    universe: int | None
    generators: tuple
    atoms: tuple
    elements: tuple

    def __post_init__(self):
        object.__setattr__(self, "_index", {e: m for m, e in enumerate(self.elements)})

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, a):
        return a in self._index

    def atom_mask(self, a):
        return self._index[a]

    def atom_count(self, a):
        return self._index[a].bit_count()


def boolean_closure(sets, universe=NATURALS):
    """Subalgebra generated by any number of sets (no generator bound)."""
    sets = tuple(sets)
    if sets:
        universe = check_universe(*sets)
    atoms = tuple(partition_atoms(sets, universe))
    elements = [EPSet.empty(universe)]
    for m in range(1, 1 << len(atoms)):
        low = m & -m
        elements.append(elements[m ^ low] | atoms[low.bit_length() - 1])
    return FiniteSubalgebra(universe, sets, atoms, tuple(elements))


def generate_subalgebra(gens, universe=NATURALS):
    gens = tuple(gens)
    if len(gens) > MAX_GENERATORS:
        raise ChargeLabError(
            f"at most {MAX_GENERATORS} generators allowed, got {len(gens)}")
    return boolean_closure(gens, universe)
