"""Uniform strong additivity and the weak compactness verdict."""

from fractions import Fraction

from chargelab import Charge, ChargeFamily, DisjointSeqGen, EPSet, usa_test, weak_compactness_check

gens = [DisjointSeqGen.singletons(), DisjointSeqGen.blocks(3), DisjointSeqGen.geometric()]

finite = ChargeFamily.finite([Charge(((2, Fraction(1)),), ((Fraction(1), EPSet.naturals()),))])
verdict = usa_test(finite, gens)
print("finite family passes:", verdict.passed, "certificate checks:",
      verdict.certificate.verify(finite, probes=50))

points = ChargeFamily.point_masses(EPSet.naturals())
verdict = usa_test(points, gens)
print("point masses pass:", verdict.passed, "witness checks:",
      verdict.witness.verify(points, probes=50))
print("weak compactness:", weak_compactness_check(points, gens).kind)
