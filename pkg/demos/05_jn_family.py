"""J_n = 2n K # -K_{2n,1} for K the positive double of the trefoil."""
from fractions import Fraction

from upsilon import bundled_facts, derive
from upsilon.independence import jn_expression, jn_family

wh = derive("wh+(RHT)", bundled_facts())
for n in (1, 2, 3):
    j = derive(jn_expression("K", n), leaves={"K": wh})
    print(f"J_{n}: tau = {j.tau}, upsilon in {j.upsilon_at_1}, first singularity {j.first_singularity}")

for n, p, declared in [(1, 2, Fraction(2, 3)), (1, 2, None), (2, 5, None), (2, 3, None)]:
    rep = jn_family(wh, n, p, 1, declared_first_singularity=declared)
    how = "declared first singularity" if declared else "derived window"
    print(f"J_{n} with its ({p},1)-cable using the {how}: {rep.verdict}")
