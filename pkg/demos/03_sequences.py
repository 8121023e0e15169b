"""Element sequences, limsups and the sandwich construction."""

from fractions import Fraction

from chargelab import Charge, ElementSequence, EPSet, HypothesisFailed, sandwich

nu = Charge(((1, Fraction(1)),), ((Fraction(2), EPSet.naturals()),))
evens = EPSet.residues([0], 2)


def flicker(points):
    return ElementSequence.periodic([], [evens | EPSet.finite(points), evens])


s = flicker([5, 7])
print("σ(0..3):", [s.coordinate(n).text() for n in range(4)])
print("limsup ν(σ(n)) =", s.limsup(nu))
tau, ups = sandwich(s, nu, Fraction(1, 4))
print("lower decreasing limsup:", tau.limsup(nu))
print("upper increasing limsup:", ups.limsup(nu))

# flickering an atom of ν breaks the hypothesis
try:
    sandwich(flicker([1]), nu, Fraction(1, 4))
except HypothesisFailed as exc:
    print("rejected:", exc)
