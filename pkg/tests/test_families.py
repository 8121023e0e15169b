import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chargelab import (Branch, BranchTail, Charge, ChargeFamily, ChargeLabError, ElementSequence,
                       EPSet, InvariantViolation, QuasiDisjointnessViolation,
                       almost_disjoint_family, cc_predicate, is_quasi_disjoint,
                       quasi_disjoint_census, tail_sequences)
from oracles import random_charge, random_raw

EVENS = EPSet.residues([0], 2)
ODDS = EPSet.residues([1], 2)
NAT = EPSet.naturals()
D = Charge.density(1)


def word(stem, cycle, length):
    w = stem
    while len(w) < length:
        w += cycle
    return w[:length]


def codes(stem, cycle, length=40):
    """Codes of all prefixes up to ``length``, straight from the word."""
    w = word(stem, cycle, length)
    return {int("1" + w[:L], 2) for L in range(length + 1)}


def test_single_branch_is_infinite():
    (b,) = almost_disjoint_family(1)
    assert len(b.elements_below(1 << 30)) == 30


def test_constant_branches_meet_once():
    zeros, ones = Branch("", "0"), Branch("", "1")
    assert zeros.intersection_size(ones) == 1
    assert codes("", "0") & codes("", "1") == {1}


def test_five_branches():
    fam = almost_disjoint_family(5)
    for i, j in combinations(range(5), 2):
        a, b = fam[i], fam[j]
        shared = codes(a.stem, a.cycle) & codes(b.stem, b.cycle)
        assert len(shared) == a.intersection_size(b) == 1 + min(i, j)


def test_family_size_range():
    with pytest.raises(ChargeLabError):
        almost_disjoint_family(0)
    with pytest.raises(ChargeLabError):
        almost_disjoint_family(65)
    assert len(almost_disjoint_family(64)) == 64


def test_branch_canonical_form_and_text():
    assert Branch("0101", "01") == Branch("", "01")
    assert Branch("", "0101") == Branch("", "01")
    assert Branch("1", "01") == Branch("", "10")
    b = Branch("110", "011")
    assert Branch.parse(b.text()) == b
    assert Branch("", "01").intersection_size(Branch("01", "01")) is None


@given(st.text("01", max_size=4), st.text("01", min_size=1, max_size=4))
def test_branch_membership_matches_words(stem, cycle):
    b = Branch(stem, cycle)
    want = codes(stem, cycle, 12)
    assert {x for x in range(1, 1 << 12) if x in b} == {c for c in want if c < 1 << 12}


@given(st.text("01", max_size=3), st.text("01", min_size=1, max_size=3),
       st.sampled_from([2, 3, 4, 5, 6, 8, 12]))
def test_residues_infinitely_often(stem, cycle, m):
    b = Branch(stem, cycle)
    w_codes = sorted(codes(stem, cycle, 200))
    assert b.residues_infinitely_often(m) == {c % m for c in w_codes[150:]}


def test_tail_sequence_examples():
    s = tail_sequences(EVENS)
    assert s.coordinate(3) == EVENS & EPSet.tail(3)
    assert s.is_decreasing()
    fam = almost_disjoint_family(2)
    assert is_quasi_disjoint(tail_sequences(fam[0]), tail_sequences(fam[1]))
    t = tail_sequences(NAT)
    assert t.limsup(D) == 1
    with pytest.raises(ChargeLabError):
        tail_sequences(EPSet.finite([1, 2]))


def test_branch_tail_membership():
    b = Branch("", "01")
    t = tail_sequences(b)
    assert isinstance(t, BranchTail)
    assert (0, 1) in t and (2, 1) not in t and (3, 5) in t


@given(st.text("01", max_size=3), st.text("01", min_size=1, max_size=3), st.integers(0, 10_000))
def test_branch_versus_ep_quasi_disjointness(stem, cycle, seed):
    rng = random.Random(seed)
    raw = random_raw(rng, periods=(1, 2, 3, 4, 6))
    b = Branch(stem, cycle)
    a = raw.build()
    s = tail_sequences(a) if not a.is_finite() and rng.random() < 0.5 else \
        ElementSequence.constant(a)
    late = sorted(codes(stem, cycle, 200))[150:]
    # σ_B(n) ∧ s(n) ≠ 0 infinitely often iff late codes land in s's eventual coordinates
    want = any((c, c) in s for c in late)
    assert is_quasi_disjoint(tail_sequences(b), s) == (not want)


def test_tails_of_ad_family_are_pairwise_quasi_disjoint():
    tails = [tail_sequences(b) for b in almost_disjoint_family(16)]
    for a, b in combinations(tails, 2):
        assert is_quasi_disjoint(a, b)


def test_census_examples():
    fam = [tail_sequences(EPSet.residues([r], 4)) for r in range(3)]
    report = quasi_disjoint_census(fam, D, Fraction(1, 4))
    assert report.indices == (0, 1, 2) and report.bound == 4
    assert report.total == Fraction(3, 4)
    assert quasi_disjoint_census(fam, D, 2).indices == ()
    zero = [ElementSequence.zero()]
    assert quasi_disjoint_census(zero, D, Fraction(1, 2)).indices == ()


def test_census_reports_violating_pair():
    fam = [tail_sequences(EVENS), tail_sequences(ODDS), tail_sequences(EPSet.residues([1], 4))]
    with pytest.raises(QuasiDisjointnessViolation) as info:
        quasi_disjoint_census(fam, D, Fraction(1, 4))
    assert info.value.pair == (1, 2)
    with pytest.raises(InvariantViolation):
        quasi_disjoint_census([ElementSequence.periodic([], [EVENS, NAT])], D, 1)


@given(st.integers(0, 100_000))
def test_census_bound_on_random_partitions(seed):
    rng = random.Random(seed)
    p = rng.choice([2, 3, 4, 6, 8, 12])
    residues = list(range(p))
    rng.shuffle(residues)
    cuts = sorted(rng.sample(range(1, p), rng.randrange(min(p - 1, 4) + 1))) if p > 1 else []
    groups = [residues[a:b] for a, b in zip([0] + cuts, cuts + [p])]
    fam = [tail_sequences(EPSet.residues(g, p)) for g in groups]
    fam += [tail_sequences(b) for b in almost_disjoint_family(rng.randrange(1, 5))
            if all(is_quasi_disjoint(tail_sequences(b), f) for f in fam)]
    nu = random_charge(rng, periods=(1, 2, 3, 4, 6)).build()
    eps = Fraction(rng.randrange(1, 6), rng.choice([2, 4, 8]))
    report = quasi_disjoint_census(fam, nu, eps)
    assert report.total <= nu.norm
    assert len(report.indices) <= report.bound == int(nu.norm // eps)


def test_cc_examples():
    classes = [EPSet.residues([r], 4) for r in range(4)]
    assert cc_predicate(classes, ChargeFamily.finite([D]))
    assert not cc_predicate([EVENS], ChargeFamily.finite([Charge.point_mass(1)]))
    assert cc_predicate([], ChargeFamily.finite([D]))
    assert cc_predicate([EVENS, ODDS], ChargeFamily.point_masses(NAT))
    with pytest.raises(InvariantViolation):
        cc_predicate([EVENS, NAT], ChargeFamily.finite([D]))
    with pytest.raises(InvariantViolation):
        cc_predicate([EPSet.empty()], ChargeFamily.finite([D]))
