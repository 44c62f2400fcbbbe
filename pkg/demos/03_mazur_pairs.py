"""Knots paired with their Mazur satellites."""
from upsilon import bundled_facts, derive
from upsilon.independence import decide_pattern_pair, decide_torus_mazur

for i in range(1, 10):
    d = decide_torus_mazur(3, 4, i)
    print(f"T(3,4) with M^{i}: {d.verdict}" + (f"  ({'; '.join(d.failed)})" if d.failed else ""))

facts = bundled_facts().merged(bundled_facts("literature.json"))
for n in range(4):
    expr = f"cable(wh+(T(2,3)), {n + 2}, {2 * n + 3}) # -T({n + 2},{2 * n + 3})"
    k = derive(expr, facts)
    m = derive(f"mazur({expr})", facts)
    d = decide_pattern_pair(k.tau, k.first_singularity, k.alpha, 1, m.tau == k.tau + 1)
    print(f"K_{n}: tau = {k.tau}, t0 = {k.first_singularity}, alpha = {k.alpha}; "
          f"tau(M(K_{n})) = {m.tau}; pair {d.verdict}")
