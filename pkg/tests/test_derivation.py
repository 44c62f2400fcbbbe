from dataclasses import replace
from fractions import Fraction as F

import pytest

from upsilon.derivation import (DerivationError, complete, consistency_check, crosscap_lower_bound,
                                derive, merge_declared, rule_gen_whitehead, rule_mirror,
                                rule_pattern_sat, rule_reverse, rule_sum, rule_whitehead, torus_facts)
from upsilon.facts import IntRange, KnotFacts, bundled_facts, load_facts
from upsilon.pl import Envelope, Interval, PLFunction, upsilon_simple

BASE = bundled_facts()
SIMPLE = upsilon_simple(1)


def K(tau, **kw):
    return KnotFacts(subject="K", tau=tau, **kw)


def test_trefoil():
    f = derive("T(2,3)", BASE)
    assert (f.tau, f.epsilon, f.sigma) == (1, 1, -2)
    assert f.exact_upsilon == SIMPLE
    assert f.upsilon_value == -1
    assert f.first_singularity == 1


def test_knot_minus_itself_is_zero():
    for name in ("RHT", "K0", "T(2,3)"):
        f = derive(f"{name} # -{name}", BASE)
        assert f.exact_upsilon.is_zero and f.tau == 0


def test_mazur_of_simple_knot():
    f = derive("mazur(K0)", BASE)
    assert f.tau == 2
    env = f.envelope
    assert env.valid_on == Interval.closed(0, 1)
    assert env.lower == SIMPLE.minus_linear(1) and env.upper == SIMPLE.minus_linear(-1)


def test_mirror_and_reverse():
    f = K(3)
    assert rule_mirror(f).tau == -3
    twice = rule_mirror(rule_mirror(f, "K"), "K")
    assert replace(twice, trace=()) == f
    g = derive("T(3,4)")
    r = rule_reverse(g, g.subject)
    assert (r.tau, r.sigma, r.upsilon, r.first_singularity) == (g.tau, g.sigma, g.upsilon, g.first_singularity)


def test_sum_of_simple_profiles():
    a = KnotFacts("A", tau=2, upsilon=upsilon_simple(2))
    b = KnotFacts("B", tau=-5, upsilon=upsilon_simple(-5))
    assert rule_sum(a, b).exact_upsilon == upsilon_simple(-3)


def test_sum_with_unknot_is_identity():
    f = derive("RHT # U", BASE)
    g = derive("RHT", BASE)
    for key in ("tau", "sigma", "upsilon", "first_singularity", "g4", "gc"):
        assert getattr(f, key) == getattr(g, key)


def test_five_whitehead_doubles():
    f = derive(" # ".join(["wh+(RHT)"] * 5), BASE)
    assert f.tau == 5 and f.upsilon_value == -5 and f.sigma == 0
    assert crosscap_lower_bound(f) == 5


def test_crosscap_arithmetic():
    assert crosscap_lower_bound(K(0, sigma=0, upsilon_at_1=IntRange.exact(0))) == 0
    assert crosscap_lower_bound(K(None, sigma=-2, upsilon_at_1=IntRange.exact(-3))) == 2


@pytest.mark.parametrize("sign,k,expected", [
    ("+", 0, upsilon_simple(1)),
    ("+", 4, PLFunction.zero()),
    ("-", 0, PLFunction.zero()),
])
def test_whitehead_examples(sign, k, expected):
    f = rule_whitehead(K(1), sign, k, "D")
    assert f.exact_upsilon == expected
    assert f.g3.hi == f.g4.hi == f.gc.hi == 1


def test_untwisted_double_is_top_slice():
    assert rule_whitehead(K(1), "+", 0, "D").top_slice
    assert not rule_whitehead(K(1), "+", 1, "D").top_slice


def test_generalized_doubles():
    assert rule_gen_whitehead(1, 0, K(1), 0, "D").exact_upsilon == upsilon_simple(1)
    assert rule_gen_whitehead(1, 2, K(1), 0, "D").exact_upsilon.is_zero
    assert rule_gen_whitehead(1, 3, K(1), 3, "D").exact_upsilon == upsilon_simple(-1)


def test_pattern_satellites():
    f = complete(K(4, upsilon=upsilon_simple(4)))
    g = rule_pattern_sat(f, 3, 3, None, "S")
    assert g.tau == 7
    assert g.envelope.upper == upsilon_simple(4).minus_linear(-3)
    assert g.envelope.contains(upsilon_simple(4))
    # the shift is only known for positive tau
    m = rule_pattern_sat(K(0), 1, 1, "mazur", "M")
    assert m.tau is None


def test_consistency_violations():
    assert consistency_check(KnotFacts("X", tau=1, upsilon=upsilon_simple(2)))
    bad_env = Envelope(upsilon_simple(0), upsilon_simple(1), Interval.closed(0, 1))
    assert consistency_check(KnotFacts("X", upsilon=bad_env))
    assert consistency_check(KnotFacts("X", tau=3, g4=IntRange(0, 2)))
    assert not consistency_check(derive("T(3,4)"))


def test_unresolved_generator():
    with pytest.raises(DerivationError):
        derive("mystery")


def test_declared_expression_facts_merge():
    table = BASE.merged(load_facts({"expressions": [{"expr": "cable(K0, 3, 1)", "first_singularity": "1/2"}]}))
    f = derive("cable(K0, 3, 1)", table)
    assert f.first_singularity == F(1, 2)
    clash = BASE.merged(load_facts({"expressions": [{"expr": "wh+(RHT)", "tau": 0}]}))
    with pytest.raises(DerivationError):
        derive("wh+(RHT)", clash)


def test_merge_rejects_upsilon_outside_envelope():
    f = derive("mazur(K0)", BASE)
    rec = load_facts({"expressions": [{"expr": "mazur(K0)", "upsilon": upsilon_simple(5).to_json()}]})
    with pytest.raises(DerivationError):
        merge_declared(f, rec.expressions["mazur(K0)"])


def test_torus_knot_facts():
    f = torus_facts(3, 4)
    assert (f.tau, f.sigma, f.first_singularity) == (3, -6, F(2, 3))
    m = derive("T(3,-4)")
    assert m.tau == -3 and m.sigma == 6
    assert derive("T(1,5)").tau == 0
