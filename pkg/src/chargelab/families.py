"""Almost disjoint branch families, tail sequences and the quasi-disjoint census."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .epset import EPSet, _divisors, lcm
from .errors import ChargeLabError, InvariantViolation, ParseError
from .sequences import ElementSequence, is_quasi_disjoint

MAX_BRANCHES = 64


@dataclass(frozen=True)
class Branch:
    """Codes of the finite prefixes of the word ``stem + cycle + cycle + ...``.

    The binary string ``s`` is coded as the integer whose binary expansion is
    ``1`` followed by ``s``, so the codes of a branch form an infinite set of
    density zero.  Two branches meet in ``1 + lcp`` codes, ``lcp`` being the
    length of the longest common prefix of their words.
    """

    stem: str
    cycle: str

    def __post_init__(self):
        if not self.cycle or any(ch not in "01" for ch in self.stem + self.cycle):
            raise InvariantViolation("branch words are 0/1 strings with a nonempty cycle")
        cycle, stem = self.cycle, self.stem
        for d in _divisors(len(cycle)):
            if cycle[:d] * (len(cycle) // d) == cycle:
                cycle = cycle[:d]
                break
        while stem and stem[-1] == cycle[-1]:
            stem, cycle = stem[:-1], cycle[-1] + cycle[:-1]
        object.__setattr__(self, "stem", stem)
        object.__setattr__(self, "cycle", cycle)

    universe = None

    def letter(self, i):
        if i < len(self.stem):
            return int(self.stem[i])
        return int(self.cycle[(i - len(self.stem)) % len(self.cycle)])

    def code(self, length):
        c = 1
        for i in range(length):
            c = 2 * c + self.letter(i)
        return c

    def __contains__(self, x):
        if x < 1:
            return False
        s = bin(x)[3:]
        return all(int(ch) == self.letter(i) for i, ch in enumerate(s))

    def elements_below(self, bound):
        out, c, i = [], 1, 0
        while c < bound:
            out.append(c)
            c = 2 * c + self.letter(i)
            i += 1
        return out

    def common_prefix(self, other):
        """Length of the longest common prefix, or ``None`` for equal words."""
        horizon = max(len(self.stem), len(other.stem)) + lcm(len(self.cycle), len(other.cycle))
        for i in range(horizon):
            if self.letter(i) != other.letter(i):
                return i
        return None

    def intersection_size(self, other):
        lcp = self.common_prefix(other)
        return None if lcp is None else lcp + 1

    def residues_infinitely_often(self, m):
        """Residues mod ``m`` hit by infinitely many codes."""
        stem, cyc = len(self.stem), len(self.cycle)
        c, i, seen, trail = 1 % m, 0, {}, []
        while True:
            if i >= stem:
                state = (c, (i - stem) % cyc)
                if state in seen:
                    return frozenset(r for r, _ in trail[seen[state]:])
                seen[state] = len(trail)
                trail.append(state)
            c = (2 * c + self.letter(i)) % m
            i += 1

    def meets_infinitely(self, s):
        """Whether the branch shares infinitely many points with the EPSet ``s``."""
        if s.universe is not None:
            return False
        return any(s.pattern >> r & 1 for r in self.residues_infinitely_often(s.period))

    def text(self):
        return f"branch={self.stem}({self.cycle})"

    __str__ = text

    @classmethod
    def parse(cls, text):
        text = text.strip()
        if not text.startswith("branch=") or not text.endswith(")") or "(" not in text:
            raise ParseError(f"bad branch {text!r} (want branch=<stem>(<cycle>))")
        stem, _, cycle = text[7:-1].partition("(")
        return cls(stem, cycle)


@dataclass(frozen=True)
class BranchTail:
    """``σ(n) = B ∩ {n, n+1, ...}`` for a branch ``B``."""

    branch: Branch
    universe = None

    def __contains__(self, item):
        n, k = item
        return k >= n and k in self.branch

    def is_decreasing(self):
        return True

    def limsup(self, charge):
        # atoms leave the tails; the branch has density zero
        if charge.universe is not None:
            raise ChargeLabError("branch tails live in the naturals")
        return Fraction(0)

    def eventual_points(self):
        return EPSet.empty()

    def meets_infinitely_often(self, s):
        return self.branch.meets_infinitely(s)

    def is_quasi_disjoint(self, other):
        if isinstance(other, BranchTail):
            return self.branch.common_prefix(other.branch) is not None
        if not isinstance(other, ElementSequence):
            raise TypeError(f"cannot compare with {type(other).__name__}")
        if other.universe is not None:
            return True
        p = other.period
        hits = self.branch.residues_infinitely_often(p)
        for j in range(p):
            if self.branch.meets_infinitely(other.right[j]):
                return False
            w = other.window[j]
            for d in range(other.hi):
                if w >> (d + other.lo) & 1 and (j + d) % p in hits:
                    return False
        return True

    def limsup_of_sup(self, family):
        if family.is_point_masses:
            return Fraction(int(self.branch.meets_infinitely(family.support)))
        return max((self.limsup(m) for m in family.members), default=Fraction(0))

    def text(self):
        return f"tails({self.branch.text()})"


def almost_disjoint_family(k):
    """``k`` branches with words ``(0^i 1)^∞``, ``i = 0..k-1``; pairwise intersections are finite."""
    if not 1 <= k <= MAX_BRANCHES:
        raise ChargeLabError(f"k must lie in 1..{MAX_BRANCHES}, got {k}")
    return [Branch("", "0" * i + "1") for i in range(k)]


def tail_sequences(b):
    """Decreasing ``n ↦ b ∩ {n, n+1, ...}`` for an infinite EPSet or a branch."""
    if isinstance(b, Branch):
        return BranchTail(b)
    if b.is_finite():
        raise ChargeLabError("tail sequences of a finite set vanish; the class is zero")
    return ElementSequence.tails(b)


class QuasiDisjointnessViolation(ChargeLabError):
    def __init__(self, message, pair):
        super().__init__(message)
        self.pair = pair


class CensusViolation(AssertionError):
    """A census bound failed; this contradicts finite additivity."""


@dataclass(frozen=True)
class CensusReport:
    indices: tuple
    values: tuple
    total: Fraction
    norm: Fraction
    bound: int


def check_quasi_disjoint(family):
    for i, j in combinations(range(len(family)), 2):
        if not is_quasi_disjoint(family[i], family[j]):
            raise QuasiDisjointnessViolation(
                f"sequences {i} and {j} are not quasi disjoint", (i, j))


def quasi_disjoint_census(family, nu, eps):
    """Indices with ``limsup ν(σ_α(n)) ≥ eps``; at most ``floor(‖ν‖/eps)`` of them."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ChargeLabError("eps must be positive")
    family = list(family)
    for i, s in enumerate(family):
        if not s.is_decreasing():
            raise InvariantViolation(f"sequence {i} is not decreasing")
    check_quasi_disjoint(family)
    values = tuple(s.limsup(nu) for s in family)
    norm = nu.norm
    bound = int(norm // eps)
    indices = tuple(i for i, v in enumerate(values) if v >= eps)
    total = sum(values, Fraction(0))
    if total > norm or len(indices) > bound:
        raise CensusViolation(f"census bound broken: total {total}, norm {norm}, "
                              f"{len(indices)} indices over bound {bound}")
    return CensusReport(indices, values, total, norm, bound)


def cc_failures(elements, family):
    """Elements receiving no mass from any family member."""
    elements = list(elements)
    for i, a in enumerate(elements):
        if a.is_empty():
            raise InvariantViolation(f"element {i} is zero")
    for i, j in combinations(range(len(elements)), 2):
        if not elements[i].isdisjoint(elements[j]):
            raise InvariantViolation(f"elements {i} and {j} are not disjoint")
    return [a for a in elements if family.sup_evaluate(a) == 0]


def cc_predicate(elements, family):
    """Every listed disjoint nonzero element gets positive mass from some member."""
    return not cc_failures(elements, family)
