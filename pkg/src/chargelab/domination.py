"""Control measures, orthogonal subfamilies, separators and singular witnesses."""

from __future__ import annotations

from fractions import Fraction

from .charges import Charge, ChargeFamily, is_singular
from .epset import EPSet, lcm
from .errors import ChargeLabError, InvariantViolation
from .sequences import ElementSequence


class PredicateViolation(InvariantViolation):
    """A separator predicate breaks its preconditions at ``element``."""

    def __init__(self, message, element):
        super().__init__(message)
        self.element = element


class NotSingular(ChargeLabError):
    """A family member is not singular to the target charge."""

    def __init__(self, message, member):
        super().__init__(message)
        self.member = member


def _members(family):
    if isinstance(family, ChargeFamily):
        if family.is_point_masses:
            raise ChargeLabError("this operation needs a finite family")
        return list(family.members)
    return list(family)


def control_measure(family, ordering=None):
    """``μ₀ = Σ_n 2^-n μ_n / (1 + ‖μ_n‖)`` with ``n = 1, 2, ...`` along ``ordering``.

    The result depends on the ordering.  Every member satisfies
    ``μ_n ≤ 2^n (1 + ‖μ_n‖) μ₀``.
    """
    members = _members(family)
    if ordering is None:
        ordering = list(range(len(members)))
    ordering = list(ordering)
    if sorted(ordering) != list(range(len(members))):
        raise ChargeLabError(f"ordering must be a permutation of 0..{len(members) - 1}")
    if not members:
        return Charge.zero()
    total = Charge.zero(members[0].universe)
    for n, idx in enumerate(ordering, start=1):
        mu = members[idx]
        total = total + mu * Fraction(1, (1 << n)) / (1 + mu.norm)
    return total


def control_coefficients(family, ordering=None):
    """The scalars ``2^-n / (1 + ‖μ_n‖)`` in input order."""
    members = _members(family)
    ordering = list(range(len(members))) if ordering is None else list(ordering)
    coeffs = [Fraction(0)] * len(members)
    for n, idx in enumerate(ordering, start=1):
        coeffs[idx] = Fraction(1, 1 << n) / (1 + members[idx].norm)
    return coeffs


def maximal_orthogonal_subfamily(family):
    """Greedy pairwise-singular subfamily, maximal for inclusion, in input order."""
    chosen = []
    for mu in _members(family):
        if mu.is_zero():
            raise InvariantViolation("family members must be nonzero")
        if all(is_singular(mu, other) for other in chosen):
            chosen.append(mu)
    return chosen


def find_separating_element(algebra, in_f, in_g):
    """Smallest ``x₀ ∈ F`` with ``x ∖ x₀ ∉ G`` for every ``x ∈ G``.

    ``F`` and ``G`` are predicates on the algebra's elements; ``G ⊆ F``,
    ``0 ∉ F`` and ``F`` upward closed are checked by a full scan.  Size is
    cardinality on finite universes and atom count otherwise.
    """
    elements = list(algebra)
    f_mask = [bool(in_f(x)) for x in elements]
    g_mask = [bool(in_g(x)) for x in elements]
    if not any(g_mask):
        raise PredicateViolation("G must be nonempty", None)
    if f_mask[0]:
        raise PredicateViolation("0 must not belong to F", elements[0])
    for m, x in enumerate(elements):
        if g_mask[m] and not f_mask[m]:
            raise PredicateViolation("G must be contained in F", x)
        if f_mask[m]:
            for i in range(len(algebra.atoms)):
                up = m | (1 << i)
                if not f_mask[up]:
                    raise PredicateViolation("F must be upward closed", elements[up])
    finite = algebra.universe is not None

    def size(m):
        return len(elements[m]) if finite else m.bit_count()
    g_elements = [x for m, x in enumerate(elements) if g_mask[m]]
    for m in sorted(range(len(elements)), key=lambda m: (size(m), m)):
        if f_mask[m] and all(not in_g(x - elements[m]) for x in g_elements):
            return elements[m]
    raise AssertionError("no separator although the top element lies in F")


def singular_witness_sequence(nu, family, t):
    """Decreasing ``τ*`` with ``lim ν(τ*(n)) ≥ (1-t)‖ν‖`` and ``sup_μ lim μ(τ*(n)) = 0``.

    Built from exact supports: ν's atoms plus its carrier, with the family's
    atoms removed from the carrier (all at once for finite families, one
    more at each step for a point-mass family).
    """
    t = Fraction(t)
    if not 0 < t < 1:
        raise ChargeLabError("t must lie in (0, 1)")
    offender = family.first_non_singular(nu)
    if offender is not None:
        raise NotSingular(f"member {offender.text()} is not singular to ν", offender)
    u = nu.universe
    atoms, carrier = nu.atom_set(), nu.carrier()
    if not family.is_point_masses:
        hit = EPSet.empty(u)
        for mu in family.members:
            hit = hit | mu.atom_set()
        return ElementSequence.constant(atoms | (carrier - hit))
    support = family.support
    ep_prefix = max(atoms.prefix_len, support.prefix_len)
    ep_period = lcm(carrier.period, support.period)
    return ElementSequence.from_function(
        lambda n: atoms | (carrier - support.cut(0, n)), u, ep_prefix,
        ep_period, 0, 0, ep_prefix, ep_period)
