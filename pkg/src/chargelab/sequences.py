"""Sequences of algebra elements and their classes modulo finitely many coordinates.

Eventually periodic lists of sets are not enough: tail sequences
``B ∩ {n, n+1, ...}`` move with ``n``.  An :class:`ElementSequence` therefore
describes coordinate ``n >= start`` through three pieces selected by the
absolute phase ``j = n mod period``::

    σ(n) = (left[j] ∩ [0, n-lo))  ∪  {n+d : bit d+lo of window[j]}  ∪  (right[j] ∩ [n+hi, ∞))

``left[j]`` is any EPSet, ``right[j]`` is purely periodic and the window is a
bitmask of width ``lo + hi``.  Coordinates below ``start`` are listed
explicitly in ``head``.  This class is closed under pointwise Boolean
operations, shifts and cumulative unions/intersections, and every
sequence is kept in a canonical form (minimal window, period, start), so
structural equality is coordinatewise equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

from ._text import fields, split_top, unwrap
from .epset import (EPSet, _divisors, bitmask, check_period, check_universe,
                    lcm, residue_pattern)
from .errors import ChargeLabError, InvariantViolation, ParseError


class HypothesisFailed(ChargeLabError):
    """The sequence is not eventually ν-constant; ``index`` witnesses it."""

    def __init__(self, message, index, partner):
        super().__init__(message)
        self.index = index
        self.partner = partner


@dataclass(frozen=True)
class ElementSequence:
    universe: int | None
    start: int
    head: tuple
    period: int
    lo: int
    hi: int
    left: tuple
    window: tuple
    right: tuple

    # -- evaluation -------------------------------------------------------

    def _formula(self, n):
        j = n % self.period
        cut, top = n - self.lo, n + self.hi
        bits = self.left[j].mask(cut) if cut > 0 else 0
        w = self.window[j]
        bits |= w << cut if cut >= 0 else w >> -cut
        right = self.right[j]
        if self.universe is None:
            return EPSet(None, top, bits & bitmask(top), right.period, right.pattern)
        u = self.universe
        bits |= right.mask(u) & ~bitmask(top)
        return EPSet(u, u, bits & bitmask(u))

    def coordinate(self, n):
        if n < 0:
            raise IndexError(n)
        if n < self.start:
            return self.head[n]
        return self._formula(n)

    __getitem__ = coordinate

    def __contains__(self, item):
        """``(n, k) in σ`` iff ``k ∈ σ(n)``, without building the coordinate."""
        n, k = item
        if n < self.start:
            return k in self.head[n]
        if k < 0 or (self.universe is not None and k >= self.universe):
            return False
        j = n % self.period
        if k < n - self.lo:
            return k in self.left[j]
        if k < n + self.hi:
            return bool(self.window[j] >> (k - n + self.lo) & 1)
        return k in self.right[j]

    def _ep(self):
        sets = self.head + self.left + self.right
        return (max(s.prefix_len for s in sets),
                lcm(*(s.period for s in sets)))

    def settle_index(self, charge=None):
        """First ``n`` from which ``m(σ(n))`` is periodic in ``n`` for ``charge``."""
        top_atom = charge.max_atom() if charge is not None else -1
        return max(self.start, top_atom + self.lo + 1)

    def limsup(self, charge):
        """``limsup_n m(σ(n))``: the max over one period past :meth:`settle_index`."""
        n0 = self.settle_index(charge)
        return max(charge.evaluate(self.coordinate(n))
                   for n in range(n0, n0 + self.period))

    def eventual_points(self):
        """Points lying in ``σ(n)`` for infinitely many ``n``."""
        return reduce(lambda a, b: a | b, self.left)

    def meets_infinitely_often(self, s):
        """Whether ``σ(n) ∩ s`` is nonempty for infinitely many ``n``."""
        hits = [left & s for left in self.left]
        reach = max((h.first() for h in hits if not h.is_empty()), default=0)
        n0 = self.start + self.lo + self.hi + s.prefix_len + reach + 1
        cycle = lcm(self.period, s.period)
        return any(not (self.coordinate(n) & s).is_empty()
                   for n in range(n0, n0 + cycle))

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_function(cls, coord, universe, start, period, lo=0, hi=0,
                      ep_prefix=0, ep_period=1):
        """Canonical sequence whose coordinate ``n`` is ``coord(n)``.

        The caller guarantees that for ``n >= start`` the coordinate follows the
        class layout with the given ``period``, ``lo`` and ``hi``, that the left
        and right pieces have prefix at most ``ep_prefix`` and period dividing
        ``ep_period``, and that the window does not depend on ``n`` within a phase.
        """
        return _assemble(universe, coord, start, period, lo, hi, ep_prefix, ep_period)

    @classmethod
    def periodic(cls, prefix, period):
        """``prefix[0], prefix[1], ...`` then ``period`` repeated forever."""
        prefix, period = tuple(prefix), tuple(period)
        if not period:
            raise InvariantViolation("period list must be nonempty")
        u = check_universe(*prefix, *period)
        m, p = len(prefix), len(period)
        ep_prefix = max(s.prefix_len for s in prefix + period)
        ep_period = lcm(*(s.period for s in prefix + period))

        def coord(n):
            return prefix[n] if n < m else period[(n - m) % p]
        return _assemble(u, coord, max(m, ep_prefix), p, 0, 0, ep_prefix, ep_period)

    @classmethod
    def constant(cls, a):
        return cls.periodic((), (a,))

    @classmethod
    def zero(cls, universe=None):
        return cls.constant(EPSet.empty(universe))

    @classmethod
    def full(cls, universe=None):
        return cls.constant(EPSet.full(universe))

    @classmethod
    def tails(cls, b):
        """``σ(n) = b ∩ {n, n+1, ...}``."""
        u = b.universe

        def coord(n):
            return b.cut(n)
        return _assemble(u, coord, b.prefix_len, b.period, 0, 0, b.prefix_len, b.period)

    # -- Boolean operations -----------------------------------------------

    def _pointwise(self, other, op):
        if not isinstance(other, ElementSequence):
            raise TypeError(f"expected ElementSequence, got {type(other).__name__}")
        u = check_universe(self, other)
        pa, qa = self._ep()
        pb, qb = other._ep()
        ep_prefix, ep_period = max(pa, pb), lcm(qa, qb)
        lo, hi = max(self.lo, other.lo), max(self.hi, other.hi)
        start = max(self.start, other.start, ep_prefix + lo)
        return _assemble(u, lambda n: op(self.coordinate(n), other.coordinate(n)),
                         start, lcm(self.period, other.period), lo, hi,
                         ep_prefix, ep_period)

    def __and__(self, other):
        return self._pointwise(other, lambda a, b: a & b)

    def __or__(self, other):
        return self._pointwise(other, lambda a, b: a | b)

    def __sub__(self, other):
        return self._pointwise(other, lambda a, b: a - b)

    def __xor__(self, other):
        return self._pointwise(other, lambda a, b: a ^ b)

    def __invert__(self):
        ep_prefix, ep_period = self._ep()
        return _assemble(self.universe, lambda n: ~self.coordinate(n),
                         max(self.start, ep_prefix + self.lo), self.period,
                         self.lo, self.hi, ep_prefix, ep_period)

    meet = __and__
    join = __or__
    difference = __sub__
    complement = __invert__

    def shift(self, m=1):
        """``n ↦ σ(n + m)``."""
        ep_prefix, ep_period = self._ep()
        return _assemble(self.universe, lambda n: self.coordinate(n + m),
                         max(self.start, ep_prefix + self.lo), self.period,
                         self.lo, self.hi + m, ep_prefix, ep_period)

    def is_zero(self):
        return self == ElementSequence.zero(self.universe)

    def is_decreasing(self):
        return (self.shift(1) - self).is_zero()

    def is_increasing(self):
        return (self - self.shift(1)).is_zero()

    def quotient(self):
        return QuotientSeq(self.universe, self.period, self.lo, self.hi,
                           self.left, self.window, self.right)

    # -- text form --------------------------------------------------------

    def text(self):
        def sets(xs):
            return "[" + ";".join(f"({x.text()})" for x in xs) + "]"
        width = self.lo + self.hi
        wins = ";".join("".join("1" if w >> i & 1 else "0" for i in range(width))
                        for w in self.window)
        return (f"start={self.start};head={sets(self.head)};period={self.period};"
                f"lo={self.lo};hi={self.hi};left={sets(self.left)};"
                f"window=[{wins}];right={sets(self.right)}")

    __str__ = text

    @classmethod
    def parse(cls, text):
        """Accepts the canonical form, ``prefix=[...];period=[...]`` or ``tails(<EPSet>)``."""
        text = text.strip()
        if text.startswith("tails("):
            return cls.tails(EPSet.parse(unwrap(text[5:])))
        if text.startswith("prefix="):
            f = fields(text, {"prefix", "period"})
            if set(f) != {"prefix", "period"}:
                raise ParseError(f"sequence needs prefix and period: {text!r}")
            return cls.periodic(_parse_sets(f["prefix"]), _parse_sets(f["period"]))
        keys = {"start", "head", "period", "lo", "hi", "left", "window", "right"}
        f = fields(text, keys)
        if set(f) != keys:
            raise ParseError(f"sequence is missing fields {sorted(keys - set(f))}")
        try:
            start, period, lo, hi = (int(f[k]) for k in ("start", "period", "lo", "hi"))
        except ValueError:
            raise ParseError("start, period, lo, hi must be integers")
        head, left, right = (tuple(_parse_sets(f[k])) for k in ("head", "left", "right"))
        wins = [w.strip() for w in split_top(unwrap(f["window"], "[", "]"), ";")]
        if min(start, lo, hi) < 0 or period < 1:
            raise InvariantViolation("start, lo, hi must be >= 0 and period >= 1")
        if len(head) != start or len(left) != period or len(right) != period \
                or len(wins) != period:
            raise InvariantViolation("sequence table lengths do not match")
        window = []
        for w in wins:
            if len(w) != lo + hi or any(ch not in "01" for ch in w):
                raise ParseError(f"bad window {w!r}")
            window.append(sum(1 << i for i, ch in enumerate(w) if ch == "1"))
        u = check_universe(*head, *left, *right)
        if u is None and any(r.prefix_len for r in right):
            raise InvariantViolation("right pieces must be purely periodic")
        raw = cls(u, start, head, period, lo, hi, left, tuple(window), right)
        ep_prefix, ep_period = raw._ep()
        return _assemble(u, raw.coordinate, max(start, ep_prefix + lo), period,
                         lo, hi, ep_prefix, ep_period)


def _parse_sets(text):
    body = unwrap(text, "[", "]").strip()
    if not body:
        return []
    return [EPSet.parse(unwrap(part)) for part in split_top(body, ";")]


def _assemble(universe, coord, start, period, lo, hi, ep_prefix, ep_period):
    p = check_period(lcm(period, ep_period))
    base = start + ep_prefix + lo + hi + ep_period
    samples, left, window, right = [], [], [], []
    for j in range(p):
        n = base + (j - base) % p
        c = coord(n)
        if universe is None:
            bits = c.mask(ep_prefix + ep_period)
            left.append(EPSet(None, ep_prefix, bits & bitmask(ep_prefix), ep_period,
                              residue_pattern(bits >> ep_prefix, ep_prefix, ep_period)))
            seg = c.mask(n + hi + ep_period) >> (n + hi)
            right.append(EPSet(None, 0, 0, ep_period,
                               residue_pattern(seg, n + hi, ep_period)))
        else:
            left.append(c)
            right.append(EPSet.empty(universe))
        window.append((c.mask(n + hi) >> (n - lo)) & bitmask(lo + hi))
        samples.append(n)
    head = tuple(coord(n) for n in range(start))
    return _canonical(universe, head, p, lo, hi, left, window, right, samples)


def _canonical(universe, head, p, lo, hi, left, window, right, samples):
    while lo > 0 and all((window[j] & 1) == ((samples[j] - lo) in left[j])
                         for j in range(p)):
        window = [w >> 1 for w in window]
        lo -= 1
    while hi > 0 and all((window[j] >> (lo + hi - 1) & 1) == ((samples[j] + hi - 1) in right[j])
                         for j in range(p)):
        window = [w & bitmask(lo + hi - 1) for w in window]
        hi -= 1
    table = list(zip(left, window, right))
    for d in _divisors(p)[:-1]:
        if all(table[j] == table[j % d] for j in range(p)):
            table, p = table[:d], d
            break
    left, window, right = (tuple(col) for col in zip(*table))
    start = len(head)
    seq = ElementSequence(universe, start, head, p, lo, hi, left, window, right)
    while start > 0 and seq._formula(start - 1) == head[start - 1]:
        start -= 1
    return ElementSequence(universe, start, head[:start], p, lo, hi, left, window, right)


def _cumulative(s, first, op, fill):
    """``n ↦ fill`` for ``n < first``, else ``op`` folded over ``σ(first..n)``."""
    ep_prefix, ep_period = s._ep()
    p = lcm(s.period, ep_period)
    a = max(s.start, first)
    lo = s.lo + p
    ep_prefix2 = ep_prefix + a + s.lo + s.hi + 2 * p
    start = ep_prefix2 + lo + s.hi + 2 * p
    cache = []

    def coord(n):
        while len(cache) <= n:
            i = len(cache)
            if i < first:
                cache.append(fill)
            elif i == first:
                cache.append(s.coordinate(i))
            else:
                cache.append(op(cache[-1], s.coordinate(i)))
        return cache[n]
    return _assemble(s.universe, coord, start, p, lo, s.hi, ep_prefix2, ep_period)


@dataclass(frozen=True)
class QuotientSeq:
    """Class of a sequence modulo sequences with finitely many nonzero coordinates.

    Stores only the eventual tables of the canonical representative, so two
    sequences have equal classes iff they agree from some index on.
    """

    universe: int | None
    period: int
    lo: int
    hi: int
    left: tuple
    window: tuple
    right: tuple

    def representative(self):
        return ElementSequence(self.universe, 0, (), self.period, self.lo, self.hi,
                               self.left, self.window, self.right)

    def is_zero(self):
        return self == ElementSequence.zero(self.universe).quotient()

    def __and__(self, other):
        return (self.representative() & other.representative()).quotient()

    def __or__(self, other):
        return (self.representative() | other.representative()).quotient()

    def __sub__(self, other):
        return (self.representative() - other.representative()).quotient()

    def __invert__(self):
        return (~self.representative()).quotient()

    def limsup(self, charge):
        return self.representative().limsup(charge)


# -- module-level operations ------------------------------------------------

def seq_meet(s, t):
    return s & t


def seq_join(s, t):
    return s | t


def seq_difference(s, t):
    return s - t


def limsup_functional(m, s):
    """``limsup_n m(σ(n))``; well defined on classes modulo finite changes."""
    return s.limsup(m)


def is_quasi_disjoint(s, t):
    """Whether ``σ ∧ τ`` has only finitely many nonzero coordinates."""
    if isinstance(s, ElementSequence) and isinstance(t, ElementSequence):
        return (s & t).quotient().is_zero()
    if not isinstance(s, ElementSequence):
        return s.is_quasi_disjoint(t)
    return t.is_quasi_disjoint(s)


def bounds_mod_finite(family):
    """``(υ, τ)`` with ``υ(n) = ∪_{j≤n} σ_j(n)`` and ``τ(n) = ∩_{j≤n} σ_j(n)``."""
    family = tuple(family)
    if not family:
        raise ChargeLabError("bounds_mod_finite needs a nonempty family")
    check_universe(*family)
    m = len(family)

    def build(op):
        whole = reduce(op, family)
        ep_prefix, ep_period = whole._ep()

        def coord(n):
            return reduce(op, (s.coordinate(n) for s in family[:n + 1]))
        return _assemble(whole.universe, coord,
                         max(whole.start, m, ep_prefix + whole.lo), whole.period,
                         whole.lo, whole.hi, ep_prefix, ep_period)
    return build(lambda a, b: a | b), build(lambda a, b: a & b)


def make_monotone(s, direction="increasing"):
    """Cumulative unions (``increasing``) or intersections (``decreasing``)."""
    if direction == "increasing":
        return _cumulative(s, 0, lambda a, b: a | b, None)
    if direction == "decreasing":
        return _cumulative(s, 0, lambda a, b: a & b, None)
    raise ValueError(f"direction must be 'increasing' or 'decreasing', not {direction!r}")


def exp_rate_membership(s, nu):
    """Whether ``2^n sup_{k>n} ν(σ(n) △ σ(k)) → 0``.

    For these sequences the sup is eventually periodic in ``n``, so the limit
    is zero exactly when the sup is eventually zero, i.e. all phases past
    the settle index are ν-equivalent.
    """
    return _phase_defect(s, nu) is None


def _phase_defect(s, nu):
    n0 = s.settle_index(nu)
    base = s.coordinate(n0)
    for a in range(1, s.period):
        if nu.evaluate(base ^ s.coordinate(n0 + a)) != 0:
            return n0, n0 + a
    return None


def sandwich_cutoff(s, nu, eps):
    """Smallest ``N`` with ``2^-N < eps/2`` and ``sup_{k≥n≥N} ν(σ(n)△σ(k)) < 2^-n``."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ChargeLabError("eps must be positive")
    defect = _phase_defect(s, nu)
    if defect is not None:
        n, k = defect
        raise HypothesisFailed(
            f"sequence is not eventually ν-constant: ν(σ({n}) △ σ({k})) > 0 "
            f"recurs along every later period", n, k)
    n_eps = 0
    while (1 << n_eps) * eps <= 2:
        n_eps += 1
    n0 = s.settle_index(nu)
    last_bad = -1
    for n in range(n0):
        here = s.coordinate(n)
        worst = max((nu.evaluate(here ^ s.coordinate(k))
                     for k in range(n + 1, n0 + s.period)), default=Fraction(0))
        if worst * (1 << n) >= 1:
            last_bad = n
    return max(n_eps, last_bad + 1)


def sandwich(s, nu, eps):
    """``(τ, υ)``: ``τ(n) = ∩_{N≤j≤n} σ(j)`` and ``υ(n) = ∪_{N≤j≤n} σ(j)``, with ``τ = 1``, ``υ = 0`` below ``N``."""
    cutoff = sandwich_cutoff(s, nu, eps)
    u = s.universe
    tau = _cumulative(s, cutoff, lambda a, b: a & b, EPSet.full(u))
    ups = _cumulative(s, cutoff, lambda a, b: a | b, EPSet.empty(u))
    return tau, ups
