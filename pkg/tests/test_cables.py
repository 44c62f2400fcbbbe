from fractions import Fraction as F
from math import gcd
from pathlib import Path

import pytest

from upsilon.cables import (cable_genus_bounds, chen_envelope, first_sing_cable, rule_cable,
                            sigma_cable, sigma_torus, tau_cable, tau_torus)
from upsilon.derivation import complete, derive
from upsilon.facts import IntRange, KnotFacts, bundled_facts
from upsilon.pl import Interval, upsilon_simple
from upsilon.seifert import seifert_matrix, sigma_torus_seifert, symmetric_signature

ORACLE = Path(__file__).resolve().parents[1] / "src" / "upsilon" / "data" / "sigma_torus_oracle.txt"


def simple(tau, **kw):
    return complete(KnotFacts("K", tau=tau, upsilon=upsilon_simple(tau), **kw))


@pytest.mark.parametrize("n", range(6))
def test_tau_cable_for_literature_cables(n):
    assert tau_cable(1, 1, n + 2, 2 * n + 3) == (n + 2) + (n + 1) ** 2


def test_tau_cable_cases():
    assert tau_cable(1, 1, 2, 1) == 2
    assert tau_cable(0, 0, 3, -2) == -1
    assert tau_cable(2, -1, 3, 1) == 6 + 2
    assert tau_cable(2, None, 3, 1) == frozenset({6, 8})
    assert tau_cable(None, 1, 3, 1) is None
    with pytest.raises(ValueError):
        tau_cable(1, 0, 2, 1)
    with pytest.raises(ValueError):
        tau_cable(1, 1, 4, 2)


def test_tau_torus():
    assert tau_torus(3, 4) == 3
    assert tau_torus(3, -4) == -3
    assert tau_torus(1, 7) == 0


@pytest.mark.parametrize("p,q,sigma", [(2, 3, -2), (2, 5, -4), (2, 7, -6), (3, 4, -6), (3, 5, -8),
                                       (3, 7, -8), (4, 5, -8)])
def test_sigma_torus_known_values(p, q, sigma):
    assert sigma_torus(p, q) == sigma == sigma_torus_seifert(p, q)
    assert sigma_torus(p, -q) == -sigma


def test_trefoil_seifert_matrix():
    assert seifert_matrix(2, 3) == [[-1, 1], [0, -1]]
    assert symmetric_signature([[0, 1], [1, 0]]) == 0


def test_sigma_oracle_file_matches_counting():
    rows = [line.split() for line in ORACLE.read_text().splitlines() if not line.startswith("#")]
    assert rows
    for pq, s in rows:
        p, q = map(int, pq.strip("()").split(","))
        assert gcd(p, q) == 1
        assert sigma_torus(p, q) == int(s)


def test_sigma_cable():
    assert sigma_cable(None, True, 2, 3) == -2
    assert sigma_cable(-2, False, 3, 2) == -4
    assert sigma_cable(-2, False, 2, 1) == 0
    assert sigma_cable(None, False, 3, 2) is None
    assert sigma_cable(None, False, 4, 3) == sigma_torus(4, 3)


def test_chen_envelope_shape():
    env = chen_envelope(upsilon_simple(1), 2, 1)
    assert env.valid_on == Interval.closed(0, 1)
    assert env.lower(F(1, 2)) == -1 - F(1, 2) * 1
    assert env.upper(F(1, 2)) == -1
    assert env.is_ordered()


def test_genus_bounds():
    b, _ = cable_genus_bounds(simple(1, g4=IntRange.exact(1)), 2, 1)
    assert b["g4"] == IntRange.exact(2)
    b, _ = cable_genus_bounds(complete(KnotFacts("K", tau=1, gc=IntRange.exact(1))), 4, 1)
    assert b["gc"] == IntRange.exact(4)
    b, _ = cable_genus_bounds(KnotFacts("K"), 6, 1)
    assert b["gamma4"].hi == 3
    b, _ = cable_genus_bounds(KnotFacts("K", tau=1, g4=IntRange.exact(1)), 3, 2)
    assert b["g4"].hi is None


def test_first_singularity_windows():
    k = simple(1)
    assert first_sing_cable(k, 2, 3)[0] == Interval.left_open(0, F(2, 3))
    assert first_sing_cable(k, 2, 1)[0] == Interval.left_open(0, F(2, 3))
    sharp = simple(1, g4=IntRange.exact(1))
    assert first_sing_cable(sharp, 2, 1)[0] == Interval.closed(F(1, 2), F(2, 3))
    small = KnotFacts("K", tau=0, upsilon_at_1=IntRange.exact(-1))
    assert first_sing_cable(small, 3, 2)[0] == Interval.open(0, F(1, 3))
    assert first_sing_cable(KnotFacts("K", tau=5), 2, 3)[0] == Interval.left_open(0, 1)
    assert first_sing_cable(KnotFacts("K"), 2, 3)[0] is None


def test_mirrored_sharp_window():
    k = simple(-1, g4=IntRange.exact(1))
    assert first_sing_cable(k, 2, -1)[0] == Interval.closed(F(1, 2), F(2, 3))


def test_rule_cable_identity_and_slice():
    k = derive("wh+(RHT)", bundled_facts())
    same = rule_cable(k, 1, 5, "c")
    assert same.tau == k.tau and same.upsilon == k.upsilon
    c = rule_cable(k, 3, 1, "c")
    assert c.top_slice and c.sigma == 0
    assert not rule_cable(k, 3, 2, "c").top_slice


def test_cable_of_unknot_is_torus_knot():
    for p, q in [(2, 3), (3, 4), (2, 5)]:
        f = derive(f"cable(U, {p}, {q})")
        t = derive(f"T({p},{q})")
        assert (f.tau, f.sigma) == (t.tau, t.sigma)
