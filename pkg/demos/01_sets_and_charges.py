"""Eventually periodic sets and exact charges on them."""

from fractions import Fraction

from chargelab import Charge, EPSet

evens = EPSet.residues([0], 2)
mult3 = EPSet.residues([0], 3)
print("evens ∩ mult3  =", (evens & mult3).text())
print("evens ∪ {1, 3} =", (evens | EPSet.finite([1, 3])).text())

# natural density plus a point mass at 0
mu = Charge(((0, Fraction(1)),), ((Fraction(1), EPSet.naturals()),))
print("μ =", mu.text())
for name, s in [("evens", evens), ("mult3", mult3), ("{0}", EPSet.finite([0]))]:
    print(f"μ({name}) = {mu(s)}")
print("‖μ‖ =", mu.norm)
