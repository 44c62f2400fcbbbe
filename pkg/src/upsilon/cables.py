"""(p, q)-cable rules: tau, signature, Upsilon envelopes, genus bounds and
first-singularity windows."""
from __future__ import annotations

from dataclasses import replace
from fractions import Fraction
from math import gcd

from .facts import GENUS, IntRange, KnotFacts, trace
from .pl import Envelope, Interval, Location, PLFunction, as_interval, simplify_location


def _check(p: int, q: int) -> None:
    if p < 1:
        raise ValueError(f"cable needs p >= 1, got {p}")
    if gcd(p, abs(q)) != 1:
        raise ValueError(f"cable parameters ({p}, {q}) are not coprime")


def tau_torus(p: int, q: int) -> int:
    """tau of T(p, q) for p >= 1; negative q is the mirror."""
    _check(p, q)
    return (p - 1) * (q - 1) // 2 if q > 0 else (p - 1) * (q + 1) // 2


def tau_cable(tau: int | None, epsilon: int | None, p: int, q: int) -> int | frozenset | None:
    """tau of K_{p,q}; a frozenset of candidates when epsilon is unknown."""
    _check(p, q)
    if tau is None:
        return None
    if epsilon is None:
        eps_cases = (-1, 1) if tau != 0 else (-1, 0, 1)
        cases = frozenset(tau_cable(tau, e, p, q) for e in eps_cases)
        return next(iter(cases)) if len(cases) == 1 else cases
    if epsilon == 1:
        return p * tau + (p - 1) * (q - 1) // 2
    if epsilon == -1:
        return p * tau + (p - 1) * (q + 1) // 2
    if epsilon == 0:
        if tau != 0:
            raise ValueError("epsilon = 0 requires tau = 0")
        return tau_torus(p, q)
    raise ValueError(f"epsilon must be -1, 0 or 1, got {epsilon}")


def sigma_torus(p: int, q: int) -> int:
    """Signature of T(p, q) at omega = -1 by counting lattice points.

    Counts pairs 0 < i < p, 0 < j < q by where ``2(iq + jp)`` falls relative
    to ``pq`` and ``3pq``: inside the band counts -1, outside +1.
    """
    if p < 2:
        raise ValueError(f"sigma_torus needs p >= 2, got {p}")
    _check(p, q)
    if q < 0:
        return -sigma_torus(p, -q)
    if q == 1:
        return 0
    total = 0
    for i in range(1, p):
        for j in range(1, q):
            v = 2 * (i * q + j * p)
            total += -1 if p * q < v < 3 * p * q else 1
    return total


def sigma_cable(sigma_k: int | None, top_slice: bool, p: int, q: int) -> int | None:
    """Signature at -1 of K_{p,q}: the companion term drops out for even p."""
    _check(p, q)
    if p == 1:
        return sigma_k
    torus = sigma_torus(p, q)
    if p % 2 == 0 or top_slice:
        return torus
    return None if sigma_k is None else sigma_k + torus


def chen_envelope(ups_k: PLFunction, p: int, q: int) -> Envelope:
    """Bounds on Upsilon of K_{p,q} from Upsilon of K, valid on [0, 2/p]."""
    _check(p, q)
    if p < 2:
        raise ValueError("the cable envelope needs p >= 2")
    base = ups_k.rescaled(p)
    lower = base.minus_linear((p - 1) * (q + 1) // 2)
    upper = base.minus_linear((p - 1) * (q - 1) // 2)
    return Envelope(lower, upper, Interval.closed(0, Fraction(2, p)))


def cable_genus_bounds(f: KnotFacts, p: int, q: int, subject: str = "") -> tuple[dict, list]:
    """Upper bounds (and equalities) for g4, gc, gamma4 of K_{p,q}.

    Returns ``({"g4": IntRange, "gc": IntRange, "gamma4": IntRange}, traces)``.
    The q = 1 statements carry over to q = -1 by mirroring.
    """
    _check(p, q)
    out = {"g4": GENUS, "gc": GENUS, "gamma4": GENUS}
    notes = []
    if abs(q) != 1:
        return out, notes
    tau = f.tau
    same_sign = tau is not None and tau * q > 0
    if f.g4.hi is not None:
        out["g4"] = out["g4"].cap_hi(p * f.g4.hi)
        notes.append(trace("cable-g4", subject, f"g4 <= {p * f.g4.hi}", p=p, g4_companion=f.g4.hi))
    if f.gc.hi is not None:
        out["gc"] = out["gc"].cap_hi(p * f.gc.hi)
        notes.append(trace("cable-gc", subject, f"gc <= {p * f.gc.hi}", p=p, gc_companion=f.gc.hi))
    if same_sign and f.g4.hi == abs(tau):
        out["g4"] = out["g4"].intersect(IntRange.exact(p * abs(tau)))
        notes.append(trace("cable-g4-equal", subject, f"g4 = {p * abs(tau)}", p=p, tau=tau))
    if same_sign and f.gc.hi == abs(tau):
        out["gc"] = out["gc"].intersect(IntRange.exact(p * abs(tau)))
        notes.append(trace("cable-gc-equal", subject, f"gc = {p * abs(tau)}", p=p, tau=tau))
    if p % 2 == 0:
        out["gamma4"] = out["gamma4"].cap_hi(p // 2)
        notes.append(trace("cable-gamma4", subject, f"gamma4 <= {p // 2}", p=p, q=q))
    return out, notes


def _window_hyp(p: int, a: int) -> Interval:
    return Interval.left_open(Fraction(2 * p * (a - 1) + 2, 2 * p * a - (p - 1)), 1)


def _window(p: int, a: int) -> Fraction:
    return Fraction(2 * a, 2 * p * a - (p - 1))


def first_sing_cable(f: KnotFacts, p: int, q: int, subject: str = "") -> tuple[Location | None, list]:
    """Tightest certified window for the first singularity of K_{p,q}."""
    _check(p, q)
    if p < 2:
        raise ValueError("first_sing_cable needs p >= 2")
    tau = f.tau
    found: list[tuple[Interval, str]] = []
    if tau is not None and tau != 0:
        a = abs(tau)
        found.append((Interval.left_open(0, Fraction(2, p)), "fs-cable"))
        if f.first_singularity is not None and as_interval(f.first_singularity).is_subset(_window_hyp(p, a)):
            found.append((Interval.left_open(0, _window(p, a)), "fs-cable-window"))
        if f.upsilon_simple:
            found.append((Interval.left_open(0, _window(p, a)), "fs-cable-simple"))
            if f.g4.hi == a and q == (1 if tau > 0 else -1):
                found.append((Interval.closed(Fraction(1, p), _window(p, a)), "fs-cable-sharp"))
    if tau == 0 and f.upsilon_at_1.excludes_zero():
        found.append((Interval.open(0, Fraction(1, p)), "fs-cable-small"))
    if not found:
        return None, [trace("fs-cable-none", subject, "first singularity unknown", p=p, q=q)]
    result = found[0][0]
    notes = []
    for iv, rule in found:
        nxt = result.intersect(iv)
        if nxt is None:
            raise ValueError(f"{subject}: first-singularity windows {result} and {iv} are disjoint")
        result = nxt
        notes.append(trace(rule, subject, f"first singularity in {iv}", p=p, q=q, tau=tau))
    return simplify_location(result), notes


def rule_cable(f: KnotFacts, p: int, q: int, subject: str = "") -> KnotFacts:
    """Facts for K_{p,q} from facts for K."""
    _check(p, q)
    if p == 1:
        return replace(f, subject=subject).with_trace(
            trace("cable-identity", subject, "same facts as the companion", q=q))
    notes = []
    tau_val = None
    cases = None
    if f.tau is not None:
        t = tau_cable(f.tau, f.epsilon, p, q)
        if isinstance(t, frozenset):
            cases = t
            notes.append(trace("cable-tau", subject, f"tau in {sorted(t)} (epsilon unknown)",
                               tau=f.tau, p=p, q=q))
        else:
            tau_val = t
            notes.append(trace("cable-tau", subject, f"tau = {t}", tau=f.tau, epsilon=f.epsilon, p=p, q=q))
    elif f.tau_cases is not None:
        cs = set()
        for tc in f.tau_cases:
            t = tau_cable(tc, None, p, q)
            cs |= t if isinstance(t, frozenset) else {t}
        cases = frozenset(cs)
        notes.append(trace("cable-tau", subject, f"tau in {sorted(cases)}", p=p, q=q))
    sigma = sigma_cable(f.sigma, f.top_slice, p, q)
    if sigma is not None:
        notes.append(trace("cable-sigma", subject, f"sigma = {sigma}", sigma_companion=f.sigma,
                           top_slice=f.top_slice, p=p, q=q))
    ups = None
    if f.exact_upsilon is not None:
        ups = chen_envelope(f.exact_upsilon, p, q)
        notes.append(trace("chen", subject, ups.describe(), p=p, q=q))
    bounds, more = cable_genus_bounds(f, p, q, subject)
    notes += more
    first, more = first_sing_cable(f, p, q, subject)
    notes += more
    top = f.top_slice and abs(q) == 1
    if top:
        notes.append(trace("cable-slice", subject, "topologically slice", p=p, q=q))
    return KnotFacts(
        subject=subject,
        tau=tau_val,
        tau_cases=cases,
        sigma=sigma,
        upsilon=ups,
        g4=bounds["g4"],
        gc=bounds["gc"],
        gamma4=bounds["gamma4"],
        first_singularity=first,
        top_slice=top,
        trace=f.trace + tuple(notes),
    )

