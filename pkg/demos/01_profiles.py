"""Upsilon profiles: evaluation, validation and the gc = 2 count."""
from fractions import Fraction

from upsilon import PLFunction, enumerate_profiles, validate_candidate
from upsilon.enumerator import strata
from upsilon.pl import upsilon_simple

trefoil = upsilon_simple(1)
print("Upsilon of T(2,3):", trefoil.describe())
print("  at t = 1/2:", trefoil(Fraction(1, 2)))

odd = PLFunction.from_pieces([(0, -1), (Fraction(1, 2), 0), (Fraction(3, 2), 1)])
report = validate_candidate(odd)
print("slope change -1 -> 0 at 1/2 accepted?", report.ok, [c.detail for c in report.failures])

for gc in (1, 2, 3):
    profiles = enumerate_profiles(gc)
    print(f"gc = {gc}: {len(profiles)} profiles, by tau {strata(profiles)}")
for f in enumerate_profiles(2):
    print("  ", f.describe())
