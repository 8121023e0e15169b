"""Absolute continuity, Lebesgue decomposition and a control measure."""

from fractions import Fraction

from chargelab import (Charge, EPSet, control_measure, is_absolutely_continuous,
                       lebesgue_decompose)

density = Charge((), ((Fraction(1), EPSet.naturals()),))
odd_density = Charge((), ((Fraction(1), EPSet.residues([1], 2)),))
mixed = Charge(((4, Fraction(1, 2)),), ((Fraction(1), EPSet.residues([0], 3)),))

print("odd density ≪ density:", is_absolutely_continuous(odd_density, density))
print("mixed ≪ density:      ", is_absolutely_continuous(mixed, density))

ac, singular, witness = lebesgue_decompose(mixed, density)
print("absolutely continuous part:", ac.text())
print("singular part:             ", singular.text())
print("witness set:               ", witness.text())

mu0 = control_measure([density, odd_density, mixed], [0, 1, 2])
print("control measure:", mu0.text())
print("mixed ≪ control:", is_absolutely_continuous(mixed, mu0))
