"""Independent reference computations used only by the tests."""
from __future__ import annotations

from fractions import Fraction
from math import gcd

import sympy

from upsilon.pl import PLFunction

T = sympy.Symbol("t")


def torus_alexander(p: int, q: int):
    num = sympy.expand((T ** (p * q) - 1) * (T - 1))
    den = sympy.expand((T ** p - 1) * (T ** q - 1))
    quo, rem = sympy.div(num, den, T)
    assert rem == 0
    return sympy.Poly(quo, T)


def cable_alexander(companion, p: int, q: int):
    """Alexander polynomial of the (p, q)-cable of a knot with polynomial ``companion``."""
    inner = sympy.Poly(companion.as_expr().subs(T, T ** p), T)
    return inner * (torus_alexander(p, q) if p > 1 and q != 1 else sympy.Poly(1, T))


def lspace_upsilon(alex) -> PLFunction:
    """Upsilon of an L-space knot from its Alexander polynomial.

    The semigroup is read off ``alex / (1 - t)``; Upsilon is the upper
    envelope of the lines ``-2 #(S cap [0, m)) - t (g - m)``.
    """
    coeffs = [int(c) for c in reversed(alex.all_coeffs())]
    g = (len(coeffs) - 1) // 2
    member, run = [], 0
    for n in range(2 * g + 1):
        run += coeffs[n] if n < len(coeffs) else 0
        member.append(run)
    counts = [sum(member[:m]) for m in range(2 * g + 1)]
    lines = [(m - g, -2 * counts[m]) for m in range(2 * g + 1)]

    def best(t):
        return max(lines, key=lambda ln: (ln[0] * t + ln[1], -ln[0]))

    cuts = {Fraction(0), Fraction(2)}
    for i, (a1, b1) in enumerate(lines):
        for a2, b2 in lines[i + 1:]:
            if a1 != a2:
                x = Fraction(b2 - b1, a1 - a2)
                if 0 < x < 2:
                    cuts.add(x)
    cuts = sorted(cuts)
    pieces = []
    for lo, hi in zip(cuts, cuts[1:]):
        pieces.append((lo, best((lo + hi) / 2)[0]))
    return PLFunction.from_pieces(pieces, 0)


def torus_upsilon(p: int, q: int) -> PLFunction:
    assert gcd(p, q) == 1 and p >= 2 and q >= 2
    return lspace_upsilon(torus_alexander(p, q))


def lambda_at(f: PLFunction, t: Fraction) -> Fraction:
    """lambda_t computed straight from the slope jump, with the parity normalization."""
    d = f.delta_at(t)
    return Fraction(d, 2 * t.denominator) if t.numerator % 2 else Fraction(d, t.denominator)
