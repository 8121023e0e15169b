"""Inner measures, the ψ functional, uniform strong additivity and weak compactness.

Uniform strong additivity cannot be decided over every disjoint sequence, so
the checks here work over a library of disjoint sequence generators.  A
failure is always backed by a witness that re-verifies by direct evaluation;
a pass is backed by a certificate specific to the representable class.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from ._text import fmt_q, split_top, unwrap
from .epset import EPSet, NATURALS
from .errors import ChargeLabError, InvariantViolation, NotRepresentable, ParseError
from .families import almost_disjoint_family

GEOMETRIC_LIMIT = 20
KINDS = ("singletons", "blocks", "geometric", "explicit")


def _interval_meets(lo, hi, s):
    """Whether ``[lo, hi)`` meets the EPSet ``s``, without materializing the interval."""
    if hi <= lo:
        return False
    if lo >= s.prefix_len and hi - lo >= s.period:
        return s.pattern != 0
    stop = min(hi, max(lo, s.prefix_len) + s.period)
    return any(k in s for k in range(lo, stop))


@dataclass(frozen=True)
class DisjointSeqGen:
    """A disjoint sequence ``υ(0), υ(1), ...`` of the naturals.

    ``singletons``: ``{k}``; ``blocks``: ``{wk, ..., wk+w-1}``;
    ``geometric``: ``{2^k, ..., 2^(k+1)-1}``; ``explicit``: the listed sets,
    then empty.
    """

    kind: str
    width: int = 1
    sets: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ChargeLabError(f"unknown generator kind {self.kind!r}")
        if self.kind == "blocks" and self.width < 1:
            raise InvariantViolation("block width must be >= 1")
        for i, j in combinations(range(len(self.sets)), 2):
            if not self.sets[i].isdisjoint(self.sets[j]):
                raise InvariantViolation(f"explicit sets {i} and {j} are not disjoint")

    @classmethod
    def singletons(cls):
        return cls("singletons")

    @classmethod
    def blocks(cls, width):
        return cls("blocks", width)

    @classmethod
    def geometric(cls):
        return cls("geometric")

    @classmethod
    def explicit(cls, sets):
        return cls("explicit", 1, tuple(sets))

    @property
    def universe(self):
        return self.sets[0].universe if self.sets else NATURALS

    def bounds(self, k):
        """``υ(k)`` as ``[lo, hi)`` for the interval kinds."""
        if self.kind == "singletons":
            return k, k + 1
        if self.kind == "blocks":
            return self.width * k, self.width * (k + 1)
        if self.kind == "geometric":
            return 1 << k, 1 << (k + 1)
        raise TypeError("explicit coordinates are not intervals")

    def coordinate(self, k):
        if self.kind == "explicit":
            return self.sets[k] if k < len(self.sets) else EPSet.empty(self.universe)
        if self.kind == "geometric" and k > GEOMETRIC_LIMIT:
            raise NotRepresentable(f"geometric block {k} is too large to materialize")
        return EPSet.interval(*self.bounds(k))

    def union(self, e):
        """``υ(E) = ∪_{k ∈ E} υ(k)``."""
        if self.kind == "explicit":
            out = EPSet.empty(self.universe)
            for k in e.cut(0, len(self.sets)).elements():
                out = out | self.sets[k]
            return out
        if e.universe is not None:
            raise NotRepresentable("index sets of interval generators live in the naturals")
        if self.kind == "singletons":
            return e
        if self.kind == "blocks":
            w = self.width
            prefix = 0
            for k in range(e.prefix_len):
                if e.prefix >> k & 1:
                    prefix |= ((1 << w) - 1) << (w * k)
            pattern = 0
            for r in range(e.period):
                if e.pattern >> r & 1:
                    pattern |= ((1 << w) - 1) << (w * r)
            return EPSet(NATURALS, w * e.prefix_len, prefix, w * e.period, pattern)
        # geometric: only finite and cofinite index sets give eventually periodic unions
        if e.is_finite():
            head, tail_from = e, None
        elif (~e).is_finite():
            tail_from = (~e).prefix_len
            head = e.cut(0, tail_from)
        else:
            raise NotRepresentable("geometric union over an infinite, co-infinite index set")
        out = EPSet.empty()
        for k in head.elements():
            out = out | self.coordinate(k)
        if tail_from is not None:
            if tail_from > GEOMETRIC_LIMIT:
                raise NotRepresentable(f"geometric tail from block {tail_from} is too large")
            out = out | EPSet.tail(1 << tail_from)
        return out

    def meets(self, k, s):
        """Whether ``υ(k)`` meets ``s``."""
        if self.kind == "explicit":
            return not (self.coordinate(k) & s).is_empty()
        return _interval_meets(*self.bounds(k), s)

    def mass(self, charge, k):
        """``μ(υ(k))`` without materializing large blocks."""
        if self.kind == "explicit":
            return charge.evaluate(self.coordinate(k))
        lo, hi = self.bounds(k)
        # interval coordinates are finite, so only atoms count
        return sum((w for p, w in charge.atoms if lo <= p < hi), Fraction(0))

    def sup_mass(self, family, k):
        """``sup_μ μ(υ(k))``."""
        if family.is_point_masses:
            return Fraction(int(self.meets(k, family.support)))
        return max((self.mass(m, k) for m in family.members), default=Fraction(0))

    def indices_meeting(self, s):
        """``{k : υ(k) ∩ s ≠ ∅}`` as an EPSet."""
        if self.kind == "explicit":
            return EPSet.finite(k for k in range(len(self.sets)) if self.meets(k, s))
        if self.kind == "singletons":
            return s
        if self.kind == "blocks":
            w = self.width
            start = -(-s.prefix_len // w)
            prefix = sum(1 << k for k in range(start) if self.meets(k, s))
            pattern = 0
            for r in range(s.period):
                k = start + r
                if self.meets(k, s):
                    pattern |= 1 << (k % s.period)
            return EPSet(NATURALS, start, prefix, s.period, pattern)
        # geometric: once 2^k passes the prefix and the period, blocks hold a full period
        start = max(s.prefix_len, s.period).bit_length() + 1
        bits = sum(1 << k for k in range(start) if self.meets(k, s))
        if s.is_finite():
            return EPSet.finite(k for k in range(start) if bits >> k & 1)
        return EPSet(NATURALS, start, bits, 1, 1)

    def cutoff(self, charge):
        """First index after which ``υ(k)`` carries no atom of ``charge``."""
        top = charge.max_atom()
        if self.kind == "explicit":
            return len(self.sets)
        if top < 0:
            return 0
        if self.kind == "singletons":
            return top + 1
        if self.kind == "blocks":
            return top // self.width + 1
        return top.bit_length()

    def text(self):
        if self.kind == "blocks":
            return f"blocks({self.width})"
        if self.kind == "explicit":
            return "explicit(" + ",".join(f"({s.text()})" for s in self.sets) + ")"
        return self.kind

    __str__ = text

    @classmethod
    def parse(cls, text):
        text = text.strip()
        if text in ("singletons", "geometric"):
            return cls(text)
        if text.startswith("blocks(") and text.endswith(")"):
            try:
                return cls.blocks(int(text[7:-1]))
            except ValueError:
                raise ParseError(f"bad block width in {text!r}")
        if text.startswith("explicit(") and text.endswith(")"):
            body = text[9:-1].strip()
            sets = [EPSet.parse(unwrap(part)) for part in split_top(body, ",")] if body else []
            return cls.explicit(sets)
        raise ParseError(f"bad generator {text!r}")


def inner_measure(m, b, sub):
    """``m_*(B) = max{m(A) : A ∈ sub, A ⊆ B}``."""
    return max(m.evaluate(a) for a in sub if a.issubset(b))


def psi_functional(family, gen, e):
    """``ψ(E) = sup_μ μ_*(υ(E))``; on this class ``μ_*`` agrees with ``μ`` on ``υ(E)``."""
    return family.sup_evaluate(gen.union(e))


def psi_tail_limsup(family, gen, branch):
    """``lim_n ψ(B ∩ [n, ∞))`` for a branch ``B``.

    For a finite family the atoms leave the tails and an eventually periodic
    set inside ``υ(B ∩ [n, ∞))`` is finite (the branch is too sparse to hold an
    arithmetic progression), so the limit is 0.  For point masses it is 1
    exactly when the branch meets the indices of infinitely many ``υ(k)``
    touching the support.
    """
    if not family.is_point_masses:
        return Fraction(0)
    if gen.kind == "explicit":
        return Fraction(0)
    return Fraction(int(branch.meets_infinitely(gen.indices_meeting(family.support))))


@dataclass(frozen=True)
class USAWitness:
    """``sup_μ μ(υ(k)) ≥ eps`` for every ``k`` in the infinite set ``indices``."""

    generator: DisjointSeqGen
    indices: EPSet
    eps: Fraction

    def verify(self, family, probes=100):
        if self.indices.is_finite() or self.eps <= 0:
            return False
        k, seen = self.indices.first(), 0
        while seen < probes:
            if k in self.indices:
                if self.generator.sup_mass(family, k) < self.eps:
                    return False
                seen += 1
            k += 1
        return True

    def text(self):
        return (f"generator={self.generator.text()};indices=({self.indices.text()});"
                f"eps={fmt_q(self.eps)}")


@dataclass(frozen=True)
class USACertificate:
    """``sup_μ μ(υ_g(k)) = 0`` for every generator ``g`` and ``k ≥ cutoffs[g]``."""

    generators: tuple
    cutoffs: tuple
    reason: str

    def verify(self, family, probes=100):
        for gen, start in zip(self.generators, self.cutoffs):
            if start is None:
                continue
            for k in range(start, start + probes):
                if gen.sup_mass(family, k) != 0:
                    return False
        return True

    def text(self):
        cuts = ",".join(f"{g.text()}:{'none' if c is None else c}"
                        for g, c in zip(self.generators, self.cutoffs))
        return f"reason={self.reason};cutoffs={cuts}"


@dataclass(frozen=True)
class USAVerdict:
    passed: bool
    certificate: USACertificate | None = None
    witness: USAWitness | None = None

    def text(self):
        if self.passed:
            return f"verdict=Pass;certificate={self.certificate.text()}"
        return f"verdict=Fail;witness={self.witness.text()}"


def usa_test(family, gens):
    """Uniform strong additivity over the generator library.

    Finite families pass: each disjoint coordinate is finite (so density
    vanishes) or belongs to a finite list, and only finitely many coordinates
    hold atoms.  Point masses fail as soon as some generator meets the support
    in infinitely many coordinates.
    """
    gens = tuple(gens)
    if family.is_point_masses:
        for gen in gens:
            hits = gen.indices_meeting(family.support)
            if not hits.is_finite():
                return USAVerdict(False, witness=USAWitness(gen, hits, Fraction(1)))
        cutoffs = tuple(gen.indices_meeting(family.support).prefix_len for gen in gens)
        return USAVerdict(True, USACertificate(gens, cutoffs, "support meets finitely many blocks"))
    cutoffs = tuple(max((g.cutoff(m) for m in family.members), default=0) for g in gens)
    return USAVerdict(True, USACertificate(gens, cutoffs, "finite family of atoms and densities"))


NORM_UNBOUNDED = "NormUnbounded"
NOT_USA = "NotUSA"
COMPATIBLE = "CompatibleWithWeakCompactness"


@dataclass(frozen=True)
class WCVerdict:
    kind: str
    witness: USAWitness | None = None
    certificate: USACertificate | None = None
    norm_bound: Fraction | None = None

    def text(self):
        if self.kind == NOT_USA:
            return f"verdict={self.kind};witness={self.witness.text()}"
        if self.kind == COMPATIBLE:
            return (f"verdict={self.kind};norm={fmt_q(self.norm_bound)};"
                    f"certificate={self.certificate.text()}")
        return f"verdict={self.kind}"


def weak_compactness_check(family, gens):
    """Norm-bounded and uniformly strongly additive over ``gens``.

    The positive verdict only speaks for the generator library together with
    the class certificate.  Every representable family has a finite norm
    bound, so ``NormUnbounded`` is never produced here.
    """
    bound = family.norm_bound()
    if bound is None:
        return WCVerdict(NORM_UNBOUNDED)
    verdict = usa_test(family, gens)
    if not verdict.passed:
        return WCVerdict(NOT_USA, witness=verdict.witness, norm_bound=bound)
    return WCVerdict(COMPATIBLE, certificate=verdict.certificate, norm_bound=bound)


@dataclass(frozen=True)
class BranchSearchResult:
    index: int
    branch: object
    value: Fraction
    values: tuple


def e0_branch_search(family, gen, k=16):
    """Branch with the smallest ``ψ`` tail limit among ``k`` almost disjoint branches.

    A search heuristic for an infinite index set with small ψ on its tails;
    ties go to the lowest branch index.
    """
    branches = almost_disjoint_family(k)
    values = tuple(psi_tail_limsup(family, gen, b) for b in branches)
    best = min(range(k), key=lambda i: (values[i], i))
    return BranchSearchResult(best, branches[best], values[best], values)


@dataclass(frozen=True)
class DStarCensus:
    indices: tuple
    values: tuple
    bound: int


def dstar_census(seqs, family, eps):
    """Indices with ``lim_n sup_μ μ(σ_α(n)) ≥ eps``; at most ``floor(Σ‖μ‖/eps)``."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ChargeLabError("eps must be positive")
    seqs = list(seqs)
    values = tuple(family.limsup_of_sup(s) for s in seqs)
    indices = tuple(i for i, v in enumerate(values) if v >= eps)
    bound = int(family.total_norm() // eps)
    if len(indices) > bound:
        raise AssertionError(f"D* census broken: {len(indices)} indices over bound {bound}")
    return DStarCensus(indices, values, bound)
