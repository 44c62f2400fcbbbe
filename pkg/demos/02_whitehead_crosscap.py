"""Whitehead doubles carry only tau, yet sums of them have large crosscap number."""
from upsilon import bundled_facts, derive

facts = bundled_facts()
for expr in ("wh+(RHT)", "wh+(RHT, k=2)", "wh-(RHT)", "wh-(RHT, k=3)", "wh+(U, k=-1)"):
    f = derive(expr, facts)
    print(f"{expr:16} Upsilon = {f.exact_upsilon.describe():10} tau = {f.tau}")

for k in (1, 3, 6):
    expr = " # ".join(["wh+(RHT)"] * k)
    f = derive(expr, facts)
    noun = "copy" if k == 1 else "copies"
    print(f"{k} {noun}: topologically slice = {f.top_slice}, gamma4 >= {f.gamma4.lo}")
