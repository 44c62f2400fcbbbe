"""Exhaustive enumeration of admissible Upsilon profiles for a fixed concordance genus."""
from __future__ import annotations

from fractions import Fraction

from .pl import (ONE, InadmissibleSlopeChange, PLFunction, gc_window, singularity_candidates,
                 validate_candidate)


def symmetric_extension(breakpoints, slopes) -> PLFunction:
    """The function on [0, 2] that is symmetric about 1 and matches the data on [0, 1].

    ``breakpoints`` lie in (0, 1) and ``slopes`` has one more entry.
    """
    bps = list(breakpoints)
    sl = list(slopes)
    full_bps = bps + [ONE] + [2 - b for b in reversed(bps)]
    full_slopes = sl + [-s for s in reversed(sl)]
    return PLFunction(tuple(full_bps), tuple(full_slopes))


def profile_key(f: PLFunction):
    return (-f.initial_slope, f.breakpoints, f.slopes)


def _admissible_at_one(s: int) -> bool:
    if s == 0:
        return True
    try:
        return ONE in singularity_candidates(s, -s)
    except InadmissibleSlopeChange:
        return False


def enumerate_profiles(gc: int, tau: int | None = None) -> list[PLFunction]:
    """Every symmetric profile with slopes bounded by ``gc`` whose slope changes are admissible."""
    if not isinstance(gc, int) or gc < 1:
        raise ValueError(f"gc must be a positive integer, got {gc!r}")
    if tau is not None and abs(tau) > gc:
        raise ValueError(f"|tau| = {abs(tau)} exceeds gc = {gc}")
    window = gc_window(gc)
    taus = [tau] if tau is not None else range(-gc, gc + 1)
    found = []

    def walk(t: Fraction, bps: list, slopes: list):
        s = slopes[-1]
        if _admissible_at_one(s):
            found.append(symmetric_extension(bps, slopes))
        for m in range(-gc, gc + 1):
            if m == s:
                continue
            try:
                cands = singularity_candidates(s, m)
            except InadmissibleSlopeChange:
                continue
            for c in cands:
                if t < c < ONE and window.contains(c):
                    walk(c, bps + [c], slopes + [m])

    for tv in taus:
        walk(Fraction(0), [], [-tv])
    return sorted(set(found), key=profile_key)


def _grid(bound: int) -> list[Fraction]:
    return sorted({Fraction(a, b) for b in range(1, bound + 1) for a in range(1, b)})


def oracle_enumerate(gc: int, denominator_bound: int) -> list[PLFunction]:
    """Brute force over a rational grid, keeping what :func:`validate_candidate` accepts.

    Partial paths are pruned only by slope bounds and by the parity of
    ``t * delta`` at the point just placed, which the final filter checks
    too; no candidate-set logic is shared with :func:`enumerate_profiles`.
    """
    if gc < 1:
        raise ValueError("gc must be positive")
    grid = _grid(denominator_bound)
    found = set()

    def walk(i: int, bps: list, slopes: list):
        f = symmetric_extension(bps, slopes)
        if validate_candidate(f, tau=-slopes[0], gc=gc).ok:
            found.add(f)
        for j in range(i, len(grid)):
            t = grid[j]
            for m in range(-gc, gc + 1):
                d = m - slopes[-1]
                if d == 0:
                    continue
                prod = t * d
                if prod.denominator != 1 or prod.numerator % 2:
                    continue
                walk(j + 1, bps + [t], slopes + [m])

    for s in range(-gc, gc + 1):
        walk(0, [], [s])
    return sorted(found, key=profile_key)


def strata(profiles) -> dict[int, int]:
    """Number of profiles for each tau."""
    out: dict[int, int] = {}
    for f in profiles:
        tau = -f.initial_slope
        out[tau] = out.get(tau, 0) + 1
    return dict(sorted(out.items()))
