import random
from fractions import Fraction
from math import lcm

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chargelab import (Charge, ElementSequence, EPSet, HypothesisFailed, ParseError,
                       bounds_mod_finite, exp_rate_membership, is_quasi_disjoint,
                       limit_along_decreasing, limsup_functional, make_monotone, sandwich,
                       sandwich_cutoff, seq_difference, seq_meet)
from oracles import (admissible, coordinate_equal, limsup_by_sampling, random_charge,
                     random_raw, random_seq)

EVENS = EPSet.residues([0], 2)
ODDS = EPSet.residues([1], 2)
NAT = EPSet.naturals()
EMPTY = EPSet.empty()
D = Charge.density(1)
DELTA0 = Charge.point_mass(0)
SMALL = dict(max_prefix=4, periods=(1, 2, 3, 4, 6))


def seeds():
    return st.integers(0, 100_000)


def mutate_prefix(s, rng, m):
    """Copy of ``s`` with coordinates ``0..m-1`` replaced at random."""
    fresh = [random_raw(rng, **SMALL).build() for _ in range(m)]
    ep_prefix, ep_period = s._ep()
    return ElementSequence.from_function(
        lambda n: fresh[n] if n < m else s.coordinate(n), s.universe,
        max(s.start, m), s.period, s.lo, s.hi, ep_prefix, ep_period)


def test_seq_op_examples():
    assert seq_meet(ElementSequence.tails(EVENS), ElementSequence.tails(ODDS)).is_zero()
    s = ElementSequence.periodic([ODDS], [EVENS, NAT])
    assert seq_meet(s, s) == s
    assert seq_difference(ElementSequence.tails(NAT), ElementSequence.tails(EVENS)) == \
        ElementSequence.tails(ODDS)


def test_limsup_examples():
    tails = ElementSequence.tails(NAT)
    assert limsup_functional(D, tails) == 1
    assert limsup_functional(DELTA0, tails) == 0
    rng = random.Random(1)
    assert limsup_functional(D, mutate_prefix(tails, rng, 5)) == 1


def test_quasi_disjoint_examples():
    assert is_quasi_disjoint(ElementSequence.tails(EVENS), ElementSequence.tails(ODDS))
    s = ElementSequence.tails(EVENS)
    assert not is_quasi_disjoint(s, s)


def test_bounds_examples():
    s = ElementSequence.periodic([ODDS], [EVENS, NAT])
    assert bounds_mod_finite([s]) == (s, s)
    a, b = EPSet.residues([0], 3), EVENS
    upper, lower = bounds_mod_finite([ElementSequence.constant(a), ElementSequence.constant(b)])
    # coordinate 0 only sees the first member
    assert upper.quotient() == ElementSequence.constant(a | b).quotient()
    assert lower.quotient() == ElementSequence.constant(a & b).quotient()
    assert upper.coordinate(0) == a and upper.coordinate(1) == a | b
    with pytest.raises(ValueError):
        bounds_mod_finite([])


def test_exp_rate_examples():
    assert exp_rate_membership(ElementSequence.constant(EVENS), D)
    assert exp_rate_membership(ElementSequence.periodic([ODDS, NAT], [EVENS]), D)
    alt = ElementSequence.periodic([], [EVENS, NAT])
    assert not exp_rate_membership(alt, D)
    # ν-equivalent phases: they differ only on a set of density 0
    assert exp_rate_membership(ElementSequence.periodic([], [EVENS, EVENS | EPSet.finite([1])]), D)


def test_sandwich_on_stabilized_sequence():
    s = ElementSequence.periodic([ODDS, NAT], [EVENS])
    tau, ups = sandwich(s, D, Fraction(1, 4))
    assert tau.limsup(D) == s.limsup(D) == ups.limsup(D) == Fraction(1, 2)


def test_sandwich_with_oscillating_prefix_has_zero_slack():
    s = ElementSequence.periodic([NAT, EMPTY, NAT], [EVENS])
    tau, ups = sandwich(s, D, Fraction(1, 8))
    assert tau.limsup(D) == s.limsup(D) == ups.limsup(D)


def test_sandwich_cutoff_for_large_eps():
    s = ElementSequence.periodic([NAT], [EVENS])
    nu = Charge.density(Fraction(1, 2))
    assert sandwich_cutoff(s, nu, 3) == 0
    for eps in (2, 3):
        tau, ups = sandwich(s, nu, eps)
        assert tau.limsup(nu) + eps >= s.limsup(nu) >= ups.limsup(nu) - eps


def test_sandwich_rejects_failed_hypothesis():
    with pytest.raises(HypothesisFailed) as info:
        sandwich(ElementSequence.periodic([], [EVENS, NAT]), D, Fraction(1, 4))
    assert info.value.index == 0 and info.value.partner == 1


def test_make_monotone_examples():
    inc = ElementSequence.periodic([EMPTY], [EVENS, NAT])
    inc = make_monotone(inc, "increasing")
    assert make_monotone(inc, "increasing") == inc
    alt = ElementSequence.periodic([], [EVENS, ODDS])
    up = make_monotone(alt, "increasing")
    down = make_monotone(alt, "decreasing")
    assert up == ElementSequence.periodic([EVENS], [NAT])
    assert down == ElementSequence.periodic([EVENS], [EMPTY])


def test_text_round_trip():
    s = ElementSequence.periodic([ODDS], [EVENS, NAT])
    assert ElementSequence.parse(s.text()) == s
    t = ElementSequence.tails(EVENS)
    assert ElementSequence.parse(t.text()) == t
    assert ElementSequence.parse("tails(prefix=;period=2;pattern=0)") == t
    assert ElementSequence.parse(
        "prefix=[(prefix=;period=2;pattern=1)];period=[(prefix=;period=2;pattern=0);"
        "(prefix=;period=1;pattern=0)]") == s
    with pytest.raises(ParseError):
        ElementSequence.parse("prefix=[];period=")


@given(seeds())
def test_coordinates_match_raw(seed):
    rng = random.Random(seed)
    raw = random_seq(rng, **SMALL)
    s = raw.build()
    for n in range(0, 3 * raw.settle + 12):
        assert coordinate_equal(s, raw, n, 3 * raw.settle + 30)


@given(seeds())
def test_pointwise_ops_match_raw(seed):
    rng = random.Random(seed)
    ra, rb = random_seq(rng, **SMALL), random_seq(rng, **SMALL)
    a, b = ra.build(), rb.build()
    horizon = 3 * (ra.settle + rb.settle) + 30
    for got, member in ((a & b, lambda x, y: x and y), (a | b, lambda x, y: x or y),
                        (a - b, lambda x, y: x and not y)):
        for n in range(horizon // 2):
            ca, cb, cg = ra.coordinate(n), rb.coordinate(n), got.coordinate(n)
            assert all((k in cg) == member(k in ca, k in cb) for k in range(horizon))


@given(seeds())
def test_limsup_matches_sampling(seed):
    rng = random.Random(seed)
    raw = random_seq(rng, **SMALL)
    rc = random_charge(rng, **SMALL)
    s, mu = raw.build(), rc.build()
    start = raw.settle + mu.max_atom() + 2
    want = limsup_by_sampling(rc, raw.coordinate, start, 2 * 12 * raw.period)
    assert s.limsup(mu) == want


@given(seeds(), st.integers(1, 20))
def test_limsup_ignores_prefix_mutations(seed, m):
    rng = random.Random(seed)
    s = random_seq(rng, **SMALL).build()
    mu = random_charge(rng, **SMALL).build()
    assert mutate_prefix(s, rng, m).limsup(mu) == s.limsup(mu)
    assert mutate_prefix(s, rng, m).quotient() == s.quotient()


@given(seeds())
def test_ops_commute_with_quotient(seed):
    rng = random.Random(seed)
    s, t = (random_seq(rng, **SMALL).build() for _ in range(2))
    assert (s & t).quotient() == s.quotient() & t.quotient()
    assert (s | t).quotient() == s.quotient() | t.quotient()
    assert (s - t).quotient() == s.quotient() - t.quotient()
    assert (~s).quotient() == ~s.quotient()


@given(seeds())
def test_period_divides_lcm(seed):
    rng = random.Random(seed)
    s, t = (random_seq(rng, **SMALL).build() for _ in range(2))
    assert lcm(s.period, t.period) % (s & t).period == 0


@given(seeds())
def test_quasi_disjoint_is_symmetric_and_matches_quotient(seed):
    rng = random.Random(seed)
    s, t = (random_seq(rng, **SMALL).build() for _ in range(2))
    assert is_quasi_disjoint(s, t) == is_quasi_disjoint(t, s) == (s & t).quotient().is_zero()


@given(seeds())
def test_bounds_contain_members(seed):
    rng = random.Random(seed)
    family = [random_seq(rng, **SMALL).build() for _ in range(3)]
    upper, lower = bounds_mod_finite(family)
    limit = 3 * lcm(*(s.period for s in family)) + 6
    for j, s in enumerate(family):
        for n in range(j, limit):
            c = s.coordinate(n)
            assert lower.coordinate(n) <= c <= upper.coordinate(n)


@given(seeds())
def test_make_monotone_properties(seed):
    rng = random.Random(seed)
    s = random_seq(rng, **SMALL).build()
    up, down = make_monotone(s, "increasing"), make_monotone(s, "decreasing")
    assert up.is_increasing() and down.is_decreasing()
    for n in range(20):
        assert down.coordinate(n) <= s.coordinate(n) <= up.coordinate(n)


@given(seeds())
def test_decreasing_limsup_is_the_limit(seed):
    rng = random.Random(seed)
    s = make_monotone(random_seq(rng, **SMALL).build(), "decreasing")
    mu = random_charge(rng, **SMALL).build()
    assert s.limsup(mu) == limit_along_decreasing(mu, s).norm


@given(seeds())
def test_sandwich_post_conditions(seed):
    s, nu, eps = admissible(random.Random(seed))
    assert exp_rate_membership(s, nu)
    cutoff = sandwich_cutoff(s, nu, eps)
    tau, ups = sandwich(s, nu, eps)
    assert tau.is_decreasing() and (~ups).is_decreasing()
    for n in range(cutoff, cutoff + 3 * s.period + 6):
        assert tau.coordinate(n) <= s.coordinate(n) <= ups.coordinate(n)
    assert tau.limsup(nu) + eps >= s.limsup(nu) >= ups.limsup(nu) - eps
    assert 2 ** cutoff * eps > 2

