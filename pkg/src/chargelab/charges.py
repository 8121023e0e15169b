"""Charges: nonnegative finitely additive set functions on EPSets.

A :class:`Charge` is a finite atomic part plus a density part
``a ↦ Σ_j w_j · d(a ∩ c_j)``.  The density part is stored in canonical
form (pairwise disjoint, purely periodic carriers with distinct weights), so
two charges are equal as set functions iff they are structurally equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

from ._text import fields, fmt_q, parse_q, split_top, unwrap
from .epset import NATURALS, EPSet, bitmask, check_period, lcm, tile
from .errors import InvariantViolation, ParseError, UniverseMismatch
from .sequences import ElementSequence


def _rational(x):
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass int, str or Fraction")
    return Fraction(x)


@dataclass(frozen=True)
class Charge:
    atoms: tuple = ()
    densities: tuple = ()
    universe: int | None = NATURALS

    def __post_init__(self):
        u = self.universe
        raw = self.atoms.items() if isinstance(self.atoms, dict) else self.atoms
        merged = {}
        for point, weight in raw:
            weight = _rational(weight)
            if weight < 0:
                raise InvariantViolation(f"negative atom weight {weight} at {point}")
            if point < 0 or (u is not None and point >= u):
                raise InvariantViolation(f"atom {point} outside the universe")
            merged[point] = merged.get(point, 0) + weight
        atoms = tuple(sorted((p, w) for p, w in merged.items() if w))

        comps = []
        for coeff, carrier in self.densities:
            coeff = _rational(coeff)
            if coeff < 0:
                raise InvariantViolation(f"negative density coefficient {coeff}")
            if carrier.universe != u:
                raise UniverseMismatch("density carrier in another universe")
            if coeff and not carrier.is_finite():
                comps.append((coeff, carrier))
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "densities", _canonical_densities(comps))

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, universe=NATURALS):
        return cls(universe=universe)

    @classmethod
    def point_mass(cls, point, weight=1, universe=NATURALS):
        return cls(atoms={point: weight}, universe=universe)

    @classmethod
    def density(cls, coeff=1, carrier=None):
        """``coeff · d(· ∩ carrier)`` (carrier defaults to the naturals)."""
        if carrier is None:
            carrier = EPSet.naturals()
        return cls(densities=((coeff, carrier),))

    # -- evaluation -------------------------------------------------------

    def _check(self, a):
        if a.universe != self.universe:
            raise UniverseMismatch(
                f"universe mismatch: charge on {self.universe!r}, set on {a.universe!r}")

    def atomic_mass(self, a):
        self._check(a)
        return sum((w for p, w in self.atoms if p in a), Fraction(0))

    def diffuse_mass(self, a):
        self._check(a)
        return sum((w * (a & c).density() for w, c in self.densities), Fraction(0))

    def evaluate(self, a):
        return self.atomic_mass(a) + self.diffuse_mass(a)

    __call__ = evaluate

    @property
    def norm(self):
        return sum((w for _, w in self.atoms), Fraction(0)) + \
            sum((w * c.density() for w, c in self.densities), Fraction(0))

    def is_zero(self):
        return not self.atoms and not self.densities

    def max_atom(self):
        return self.atoms[-1][0] if self.atoms else -1

    def atom_weight(self, point):
        return dict(self.atoms).get(point, Fraction(0))

    def atom_set(self):
        return EPSet.finite((p for p, _ in self.atoms), self.universe)

    def carrier(self):
        """Union of the density carriers (purely periodic)."""
        return reduce(lambda a, b: a | b, (c for _, c in self.densities),
                      EPSet.empty(self.universe))

    def support(self):
        return self.atom_set() | self.carrier()

    # -- algebra ----------------------------------------------------------

    def atomic_part(self):
        return Charge(self.atoms, (), self.universe)

    def diffuse_part(self):
        return Charge((), self.densities, self.universe)

    def restrict(self, a):
        """``h ↦ μ(h ∩ a)``."""
        self._check(a)
        return Charge(tuple((p, w) for p, w in self.atoms if p in a),
                      tuple((w, c & a) for w, c in self.densities), self.universe)

    def __add__(self, other):
        if not isinstance(other, Charge):
            return NotImplemented
        if other.universe != self.universe:
            raise UniverseMismatch("cannot add charges on different universes")
        return Charge(self.atoms + other.atoms, self.densities + other.densities,
                      self.universe)

    def __mul__(self, scalar):
        scalar = _rational(scalar)
        return Charge(tuple((p, scalar * w) for p, w in self.atoms),
                      tuple((scalar * w, c) for w, c in self.densities), self.universe)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1 / _rational(scalar))

    # -- text form --------------------------------------------------------

    def text(self):
        atoms = ",".join(f"{p}:{fmt_q(w)}" for p, w in self.atoms)
        dens = ",".join(f"{fmt_q(w)}@({c.text()})" for w, c in self.densities)
        head = "" if self.universe is None else f"universe={self.universe};"
        return f"{head}atoms={atoms};densities={dens}"

    __str__ = text

    @classmethod
    def parse(cls, text):
        f = fields(text, {"universe", "atoms", "densities"})
        universe = NATURALS
        if "universe" in f:
            try:
                universe = int(f["universe"])
            except ValueError:
                raise ParseError(f"bad universe {f['universe']!r}")
        atoms = []
        if f.get("atoms"):
            for item in f["atoms"].split(","):
                point, colon, weight = item.partition(":")
                if not colon:
                    raise ParseError(f"bad atom {item!r} (want point:weight)")
                try:
                    atoms.append((int(point), parse_q(weight)))
                except ValueError:
                    raise ParseError(f"bad atom point {point!r}")
        dens = []
        if f.get("densities"):
            for item in split_top(f["densities"], ","):
                coeff, at, carrier = item.partition("@")
                if not at:
                    raise ParseError(f"bad density {item!r} (want coeff@(EPSet))")
                dens.append((parse_q(coeff), EPSet.parse(unwrap(carrier))))
        return cls(tuple(atoms), tuple(dens), universe)


def _canonical_densities(comps):
    if not comps:
        return ()
    p = check_period(lcm(*(c.period for _, c in comps)))
    weight = [Fraction(0)] * p
    for coeff, carrier in comps:
        bits = tile(carrier.pattern, carrier.period, p)
        while bits:
            low = bits & -bits
            weight[low.bit_length() - 1] += coeff
            bits ^= low
    levels = {}
    for r, w in enumerate(weight):
        if w:
            levels[w] = levels.get(w, 0) | (1 << r)
    return tuple(sorted((w, EPSet(NATURALS, 0, 0, p, m & bitmask(p)))
                        for w, m in levels.items()))


@dataclass(frozen=True)
class ChargeFamily:
    """Either a finite list of charges or the point masses ``{δ_n : n ∈ support}``."""

    members: tuple = ()
    support: EPSet | None = None

    @classmethod
    def finite(cls, charges):
        charges = tuple(charges)
        if len({c.universe for c in charges}) > 1:
            raise UniverseMismatch("family members live in different universes")
        return cls(members=charges)

    @classmethod
    def point_masses(cls, support):
        if support.universe is not None or support.is_finite():
            raise InvariantViolation("point-mass families need an infinite support in the naturals")
        return cls(support=support)

    @property
    def is_point_masses(self):
        return self.support is not None

    @property
    def universe(self):
        if self.support is not None:
            return NATURALS
        return self.members[0].universe if self.members else NATURALS

    def __iter__(self):
        if self.is_point_masses:
            raise TypeError("point-mass family is infinite")
        return iter(self.members)

    def __len__(self):
        if self.is_point_masses:
            raise TypeError("point-mass family is infinite")
        return len(self.members)

    def sup_evaluate(self, a):
        """``sup_μ μ(a)``."""
        if self.is_point_masses:
            return Fraction(int(not (a & self.support).is_empty()))
        return max((m.evaluate(a) for m in self.members), default=Fraction(0))

    def norm_bound(self):
        if self.is_point_masses:
            return Fraction(1)
        return max((m.norm for m in self.members), default=Fraction(0))

    def total_norm(self):
        """``Σ_μ ‖μ‖`` for finite families (an upper bound for ``sup_μ μ(1)``-sums)."""
        if self.is_point_masses:
            raise TypeError("point-mass family has no finite total norm")
        return sum((m.norm for m in self.members), Fraction(0))

    def sup_of_limsups(self, seq):
        """``sup_μ limsup_n μ(σ(n))``."""
        if self.is_point_masses:
            return Fraction(int(not (seq.eventual_points() & self.support).is_empty()))
        return max((seq.limsup(m) for m in self.members), default=Fraction(0))

    def limsup_of_sup(self, seq):
        """``limsup_n sup_μ μ(σ(n))``."""
        if not isinstance(seq, ElementSequence):
            return seq.limsup_of_sup(self)
        if self.is_point_masses:
            return Fraction(int(seq.meets_infinitely_often(self.support)))
        if not self.members:
            return Fraction(0)
        n0 = max(seq.settle_index(m) for m in self.members)
        return max(self.sup_evaluate(seq.coordinate(n))
                   for n in range(n0, n0 + seq.period))

    def first_non_singular(self, nu):
        """A member not singular to ``nu`` (as a charge), or ``None``."""
        if self.is_point_masses:
            hit = (self.support & nu.atom_set()).first()
            return None if hit is None else Charge.point_mass(hit)
        for m in self.members:
            if not is_singular(m, nu):
                return m
        return None

    def text(self, names=None):
        if self.is_point_masses:
            return f"pointmasses({self.support.text()})"
        if names is None:
            return "finite(" + ",".join(f"[{m.text()}]" for m in self.members) + ")"
        return "finite(" + ",".join(names) + ")"


# -- operations ---------------------------------------------------------------

def evaluate(mu, a):
    return mu.evaluate(a)


def limit_along_decreasing(mu, sigma):
    """``λ(h) = lim_k μ(σ(k) ∩ h)`` for a decreasing ``σ``.

    A decreasing sequence of this class has one eventual left set ``L`` and one
    eventual right set ``R``; atoms survive iff they sit in ``L`` and the
    density part only sees ``R``.
    """
    if mu.universe != sigma.universe:
        raise UniverseMismatch("charge and sequence live in different universes")
    if not sigma.is_decreasing():
        raise InvariantViolation("limit_along_decreasing needs a decreasing sequence")
    return mu.atomic_part().restrict(sigma.left[0]) + \
        mu.diffuse_part().restrict(sigma.right[0])


def absolute_continuity_witness(mu, nu):
    """``(a, eps)`` with ``ν(a_n) → 0`` but ``μ(a_n) ≥ eps > 0``, or ``None`` if ``μ ≪ ν``."""
    if mu.universe != nu.universe:
        raise UniverseMismatch("charges live in different universes")
    for point, weight in mu.atoms:
        if nu.atom_weight(point) == 0:
            return ElementSequence.constant(EPSet.finite([point], mu.universe)), weight
    covered = nu.carrier()
    for _, c in mu.densities:
        gap = c - covered
        if not gap.is_finite():
            gap = gap - nu.atom_set()
            return ElementSequence.tails(gap), mu.diffuse_mass(gap)
    return None


def is_absolutely_continuous(mu, nu):
    """``μ ≪ ν``: every μ-atom is a ν-atom and μ's carriers lie in ν's modulo finite sets."""
    return absolute_continuity_witness(mu, nu) is None


def lebesgue_decompose(mu, nu):
    """``(μ_ac, μ_s, w)`` with ``μ = μ_ac + μ_s``, ``μ_ac ≪ ν``, ``ν(w) = 0 = μ_s(wᶜ)``."""
    if mu.universe != nu.universe:
        raise UniverseMismatch("charges live in different universes")
    u = mu.universe
    covered = nu.carrier()
    ac_atoms = tuple((p, w) for p, w in mu.atoms if nu.atom_weight(p) > 0)
    s_atoms = tuple((p, w) for p, w in mu.atoms if nu.atom_weight(p) == 0)
    ac_dens = tuple((w, c & covered) for w, c in mu.densities)
    s_dens = tuple((w, c - covered) for w, c in mu.densities)
    witness = EPSet.finite((p for p, _ in s_atoms), u)
    for _, c in s_dens:
        witness = witness | (c - nu.atom_set())
    return Charge(ac_atoms, ac_dens, u), Charge(s_atoms, s_dens, u), witness


def is_singular(mu, nu):
    return lebesgue_decompose(mu, nu)[0].is_zero()
