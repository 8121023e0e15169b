"""An almost disjoint family of branches and the census of its tails."""

from fractions import Fraction

from chargelab import Charge, EPSet, almost_disjoint_family, quasi_disjoint_census, tail_sequences

branches = almost_disjoint_family(4)
for b in branches:
    print(b.text(), "codes below 40:", b.elements_below(40))
print("|B0 ∩ B1| =", branches[0].intersection_size(branches[1]))

evens, odds = EPSet.residues([0], 2), EPSet.residues([1], 2)
family = [tail_sequences(evens), tail_sequences(odds)]
nu = Charge(((3, Fraction(1)),), ((Fraction(1), evens), (Fraction(1, 4), odds)))
report = quasi_disjoint_census(family, nu, Fraction(1, 4))
print("limsups:", [str(v) for v in report.values], "indices ≥ 1/4:", report.indices,
      "bound:", report.bound)
