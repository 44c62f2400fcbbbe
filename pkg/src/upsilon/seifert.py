"""Torus-knot signatures from an explicit Seifert matrix.

This is deliberately independent of the lattice-point count in
:mod:`upsilon.cables`; the two are compared by the test suite and the
results are cached in ``data/sigma_torus_oracle.txt``.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd


def _path_form(n: int) -> list[list[int]]:
    """(n-1)x(n-1) matrix with 1 on the diagonal and -1 just above it."""
    m = n - 1
    return [[1 if i == j else (-1 if j == i + 1 else 0) for j in range(m)] for i in range(m)]


def _kron(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    rb, cb = len(b), len(b[0])
    return [[a[i // rb][j // cb] * b[i % rb][j % cb] for j in range(len(a[0]) * cb)]
            for i in range(len(a) * rb)]


def seifert_matrix(p: int, q: int) -> list[list[int]]:
    """Seifert matrix of the positive torus knot T(p, q) for p, q >= 2.

    The fibre surface is the join of p and q points, whose Seifert form is
    minus the tensor product of the two path forms.  It has size
    (p-1)(q-1), i.e. twice the Seifert genus.
    """
    if p < 2 or q < 2 or gcd(p, q) != 1:
        raise ValueError(f"T({p},{q}) needs coprime p, q >= 2")
    return [[-x for x in row] for row in _kron(_path_form(p), _path_form(q))]


def symmetric_signature(m: list[list[int]]) -> int:
    """Signature of a symmetric rational matrix by exact congruence diagonalization."""
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    pos = neg = 0
    k = 0
    while k < n:
        piv = next((i for i in range(k, n) if a[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # row/col i += row/col j makes the diagonal entry 2*a[i][j]
            for c in range(n):
                a[i][c] += a[j][c]
            for r in range(n):
                a[r][i] += a[r][j]
            piv = i
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            for row in a:
                row[k], row[piv] = row[piv], row[k]
        d = a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / d
            if f:
                for c in range(k, n):
                    a[i][c] -= f * a[k][c]
                # symmetric column operation; only column k changes below the pivot block
                for r in range(k, n):
                    a[r][i] -= f * a[r][k]
        if d > 0:
            pos += 1
        else:
            neg += 1
        k += 1
    return pos - neg


def sigma_torus_seifert(p: int, q: int) -> int:
    """Signature of T(p, q) at omega = -1 from ``V + V^T``."""
    v = seifert_matrix(p, q)
    n = len(v)
    return symmetric_signature([[v[i][j] + v[j][i] for j in range(n)] for i in range(n)])
