import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chargelab import (Charge, ChargeFamily, DisjointSeqGen, EPSet, InvariantViolation,
                       NotRepresentable, almost_disjoint_family, dstar_census,
                       e0_branch_search, generate_subalgebra, inner_measure, is_quasi_disjoint,
                       psi_functional,
                       tail_sequences, usa_test, weak_compactness_check)
from chargelab.compactness import COMPATIBLE, NOT_USA
from oracles import random_charge, random_raw

EVENS = EPSet.residues([0], 2)
ODDS = EPSet.residues([1], 2)
NAT = EPSet.naturals()
D = Charge.density(1)
SMALL = dict(periods=(1, 2, 3, 4, 6))
GENS = [DisjointSeqGen.singletons(), DisjointSeqGen.blocks(3), DisjointSeqGen.geometric(),
        DisjointSeqGen.explicit([EVENS, EPSet.finite([1, 3])])]


def test_inner_measure_examples():
    sub = generate_subalgebra([EVENS])
    assert inner_measure(D, ODDS, sub) == Fraction(1, 2)
    assert inner_measure(D, EPSet.empty(), sub) == 0
    assert inner_measure(D, EPSet.residues([0], 3), sub) == 0


@given(st.integers(0, 100_000))
def test_inner_measure_matches_containment_scan(seed):
    rng = random.Random(seed)
    gens = [random_raw(rng, **SMALL).build() for _ in range(rng.randrange(5))]
    sub = generate_subalgebra(gens)
    mu = random_charge(rng, **SMALL).build()
    b = random_raw(rng, **SMALL).build() if rng.random() < 0.5 else rng.choice(sub.elements)
    fits = [a for a in sub if all(k in b for k in range(80) if k in a)]
    assert inner_measure(mu, b, sub) == max(mu(a) for a in fits)
    assert inner_measure(mu, b, sub) <= mu(b)
    if b in sub:
        assert inner_measure(mu, b, sub) == mu(b)


def test_generator_coordinates_are_disjoint():
    for gen in GENS:
        cs = [gen.coordinate(k) for k in range(8)]
        for i in range(8):
            for j in range(i + 1, 8):
                assert cs[i].isdisjoint(cs[j])
    assert DisjointSeqGen.geometric().coordinate(3) == EPSet.interval(8, 16)
    with pytest.raises(InvariantViolation):
        DisjointSeqGen.explicit([EVENS, NAT])


@given(st.integers(0, 100_000))
def test_union_matches_coordinates(seed):
    rng = random.Random(seed)
    e = random_raw(rng, **SMALL).build()
    for gen in (DisjointSeqGen.singletons(), DisjointSeqGen.blocks(rng.randrange(1, 5))):
        u = gen.union(e)
        for k in range(30):
            c = gen.coordinate(k)
            assert (c <= u) == (k in e)
    f = EPSet.finite(rng.sample(range(10), rng.randrange(4)))
    geo = DisjointSeqGen.geometric()
    want = EPSet.empty()
    for k in f.elements():
        want = want | geo.coordinate(k)
    assert geo.union(f) == want


def test_geometric_union_of_infinite_coinfinite_set_is_rejected():
    with pytest.raises(NotRepresentable):
        DisjointSeqGen.geometric().union(EVENS)
    assert DisjointSeqGen.geometric().union(EPSet.tail(3)) == EPSet.tail(8)


def test_psi_examples():
    pm = ChargeFamily.point_masses(NAT)
    single = DisjointSeqGen.singletons()
    assert psi_functional(pm, single, ODDS) == 1
    assert psi_functional(pm, single, EPSet.empty()) == 0
    assert psi_functional(ChargeFamily.finite([D]), single, EVENS) == Fraction(1, 2)


@given(st.integers(0, 100_000))
def test_psi_is_monotone(seed):
    rng = random.Random(seed)
    fam = ChargeFamily.finite([random_charge(rng, **SMALL).build() for _ in range(3)])
    e = random_raw(rng, **SMALL).build()
    bigger = e | random_raw(rng, **SMALL).build()
    gen = rng.choice(GENS[:2] + GENS[3:])
    assert psi_functional(fam, gen, e) <= psi_functional(fam, gen, bigger)


def test_point_masses_fail_usa():
    pm = ChargeFamily.point_masses(NAT)
    verdict = usa_test(pm, GENS)
    assert not verdict.passed
    assert verdict.witness.generator == DisjointSeqGen.singletons()
    assert verdict.witness.verify(pm)
    assert all(DisjointSeqGen.singletons().sup_mass(pm, k) == 1 for k in range(50))
    wc = weak_compactness_check(pm, GENS)
    assert wc.kind == NOT_USA
    assert wc.text().startswith("verdict=NotUSA;witness=generator=singletons")


def test_sparse_point_masses_with_explicit_generator_only_pass():
    pm = ChargeFamily.point_masses(ODDS)
    verdict = usa_test(pm, [DisjointSeqGen.explicit([EVENS])])
    assert verdict.passed and verdict.certificate.verify(pm)


def test_blocks_and_geometric_witnesses():
    pm = ChargeFamily.point_masses(EPSet.residues([5], 7))
    for gen in GENS[1:3]:
        verdict = usa_test(pm, [gen])
        assert not verdict.passed and verdict.witness.verify(pm)


def test_density_family_passes():
    verdict = usa_test(ChargeFamily.finite([D]), GENS)
    assert verdict.passed and verdict.certificate.verify(ChargeFamily.finite([D]))
    assert usa_test(ChargeFamily.finite([]), GENS).passed


@given(st.integers(0, 100_000))
def test_finite_families_pass_with_rechecked_certificates(seed):
    rng = random.Random(seed)
    fam = ChargeFamily.finite([random_charge(rng, **SMALL).build()
                               for _ in range(rng.randrange(1, 5))])
    verdict = usa_test(fam, GENS)
    assert verdict.passed and verdict.certificate.verify(fam, probes=100)
    wc = weak_compactness_check(fam, GENS)
    assert wc.kind == COMPATIBLE and wc.norm_bound == fam.norm_bound()


def test_huge_single_charge_is_still_compatible():
    fam = ChargeFamily.finite([D * 10**9])
    assert weak_compactness_check(fam, GENS).kind == COMPATIBLE


def test_branch_search_tie_break_and_values():
    pm = ChargeFamily.point_masses(NAT)
    result = e0_branch_search(pm, DisjointSeqGen.singletons(), 8)
    assert result.index == 0 and result.value == 1
    # the branch 111... has codes 2^n - 1, all odd: it misses the evens
    result = e0_branch_search(ChargeFamily.point_masses(EVENS), DisjointSeqGen.singletons(), 4)
    assert result.index == 0 and result.value == 0
    assert result.values[1] == 1
    assert e0_branch_search(ChargeFamily.finite([D]), DisjointSeqGen.blocks(2)).value == 0


@given(st.integers(0, 100_000))
def test_dstar_census_consistency(seed):
    rng = random.Random(seed)
    fam = ChargeFamily.finite([random_charge(rng, **SMALL).build()
                               for _ in range(rng.randrange(1, 4))])
    assert usa_test(fam, GENS).passed
    seqs = [tail_sequences(b) for b in almost_disjoint_family(rng.randrange(1, 17))]
    p = rng.choice([2, 3, 4])
    seqs += [tail_sequences(EPSet.residues([r], p)) for r in range(p)]
    kept = []
    for s in seqs:
        if all(is_quasi_disjoint(s, t) for t in kept):
            kept.append(s)
    seqs = kept
    eps = Fraction(1, rng.choice([2, 4, 8]))
    census = dstar_census(seqs, fam, eps)
    assert len(census.indices) <= census.bound


def test_generator_text_round_trip():
    for gen in GENS:
        assert DisjointSeqGen.parse(gen.text()) == gen
