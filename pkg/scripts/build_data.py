"""Regenerate the bundled data files under src/upsilon/data."""
import json
from pathlib import Path

from upsilon.expr import Cable, Generator, Mirror, WhDouble, connected_sum, to_text, torus
from upsilon.seifert import sigma_torus_seifert

DATA = Path(__file__).resolve().parents[1] / "src" / "upsilon" / "data"
SIMPLE = {"anchor": "0/1", "pieces": [["0/1", -1], ["1/1", 1]]}


def base():
    return {
        "note": "Right-handed trefoil and a generic Upsilon-simple knot K0 with tau = g4 = gc = 1.",
        "generators": [
            {"name": "RHT", "tau": 1, "epsilon": 1, "sigma": -2, "g3": 1, "g4": 1, "gc": 1,
             "nontorsion": True, "upsilon": SIMPLE},
            {"name": "K0", "tau": 1, "epsilon": 1, "g4": 1, "gc": 1, "upsilon": SIMPLE},
        ],
    }


def literature():
    exprs = []
    double = WhDouble(torus(2, 3), "+", 0)
    for n in range(11):
        cab = Cable(double, n + 2, 2 * n + 3)
        exprs.append({"expr": to_text(cab), "first_singularity": f"2/{2 * n + 3}",
                      "alpha": -(n * n + n),
                      "note": f"cable used in K_{n}; first singularity and slope after it"})
    k = WhDouble(Generator("RHT"), "+", 0)
    for n in range(1, 11):
        jn = connected_sum(*([k] * (2 * n)), Mirror(Cable(k, 2 * n, 1)))
        exprs.append({"expr": to_text(jn), "first_singularity": f"2/{1 + 2 * n}",
                      "note": f"J_{n} for K = wh+(RHT)"})
    return {"note": "Imported first-singularity data for cables of Whitehead doubles.",
            "expressions": exprs}


def sigma_oracle():
    from math import gcd
    lines = ["# (p,q) sigma of T(p,q) at -1 from the Seifert form, coprime 2 <= p < q, pq <= 60"]
    for p in range(2, 31):
        for q in range(p + 1, 31):
            if p * q <= 60 and gcd(p, q) == 1:
                lines.append(f"({p},{q}) {sigma_torus_seifert(p, q)}")
    return "\n".join(lines) + "\n"


if __name__ == "__main__":
    DATA.mkdir(exist_ok=True)
    (DATA / "base.json").write_text(json.dumps(base(), indent=2) + "\n")
    (DATA / "literature.json").write_text(json.dumps(literature(), indent=2) + "\n")
    (DATA / "sigma_torus_oracle.txt").write_text(sigma_oracle())
