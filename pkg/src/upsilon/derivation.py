"""Forward propagation of knot facts through an expression tree."""
from __future__ import annotations

from dataclasses import replace
from fractions import Fraction
from math import ceil, floor

from .cables import rule_cable, sigma_torus
from .expr import (Cable, GenWhDouble, Generator, KnotExpr, Mirror, PatternSat, Reverse, Sum,
                   WhDouble, parse_expr, to_text, torus_params)
from .facts import (GENUS, FactTable, GeneratorFacts, IntRange, KnotFacts, TraceEntry,
                    trace)
from .pl import (Envelope, Interval, PLFunction, as_interval, format_location, gc_window,
                 crossing_change_envelope, simplify_location, upsilon_simple,
                 validate_candidate)


class DerivationError(ValueError):
    def __init__(self, message: str, violations: list[str] | None = None):
        self.violations = list(violations or [])
        detail = "; ".join(self.violations)
        super().__init__(f"{message}: {detail}" if detail else message)


UNKNOT_NAMES = ("U", "unknot")


# ---------------------------------------------------------------------------
# Leaves


def unknot_facts(subject: str = "U") -> KnotFacts:
    z = IntRange.exact(0)
    return KnotFacts(subject=subject, tau=0, epsilon=0, sigma=0, upsilon=PLFunction.zero(),
                     upsilon_at_1=z, g3=z, g4=z, gc=z, gamma4=z, top_slice=True, nontorsion=False,
                     trace=(trace("unknot", subject, "all invariants vanish"),))


def torus_facts(p: int, q: int, subject: str | None = None) -> KnotFacts:
    """Built-in facts for T(p, q); negative parameters give the mirror."""
    subject = subject or f"T({p},{q})"
    a, b = sorted((abs(p), abs(q)))
    if a == 1:
        return replace(unknot_facts(subject), trace=(trace("torus", subject, "T(1, n) is the unknot"),))
    positive = (p > 0) == (q > 0)
    tau = (a - 1) * (b - 1) // 2
    ups = upsilon_simple(1) if (a, b) == (2, 3) else None
    first = Fraction(2, a) if a >= 3 else None
    notes = [trace("torus", subject, f"tau = g3 = {tau}, epsilon = 1", p=a, q=b),
             trace("cable-sigma", subject, f"sigma = {sigma_torus(a, b)}", p=a, q=b)]
    if ups is not None:
        notes.append(trace("torus-upsilon", subject, ups.describe()))
    if first is not None:
        notes.append(trace("torus", subject, f"first singularity at {format_location(first)}", p=a))
    f = KnotFacts(subject=subject, tau=tau, epsilon=1, sigma=sigma_torus(a, b), upsilon=ups,
                  g3=IntRange.exact(tau), first_singularity=first, nontorsion=True, trace=tuple(notes))
    return f if positive else replace(rule_mirror(f), subject=subject)


def from_declared(g: GeneratorFacts, subject: str | None = None) -> KnotFacts:
    subject = subject or g.name
    f = KnotFacts(
        subject=subject, tau=g.tau, epsilon=g.epsilon, sigma=g.sigma, upsilon=g.upsilon,
        g3=g.g3 or GENUS, g4=g.g4 or GENUS, gc=g.gc or GENUS, gamma4=g.gamma4 or GENUS,
        first_singularity=g.first_singularity, alpha=g.alpha, top_slice=g.top_slice,
        nontorsion=g.nontorsion,
        trace=(trace("generator", subject, "declared facts", name=g.name),),
    )
    return f


# ---------------------------------------------------------------------------
# Rules


def rule_mirror(f: KnotFacts, subject: str | None = None) -> KnotFacts:
    subject = subject if subject is not None else f"-{f.subject}"

    def negate(x):
        return None if x is None else -x

    return replace(
        f, subject=subject, tau=negate(f.tau),
        tau_cases=None if f.tau_cases is None else frozenset(-x for x in f.tau_cases),
        epsilon=negate(f.epsilon), sigma=negate(f.sigma), upsilon=negate(f.upsilon),
        upsilon_at_1=-f.upsilon_at_1, alpha=negate(f.alpha),
        trace=f.trace + (trace("mirror", subject, "tau, epsilon, sigma, Upsilon negated"),),
    )


def rule_reverse(f: KnotFacts, subject: str | None = None) -> KnotFacts:
    subject = subject if subject is not None else f"rev({f.subject})"
    return replace(f, subject=subject,
                   trace=f.trace + (trace("reverse", subject, "facts unchanged"),))


def _linear_region(f: KnotFacts) -> Interval | None:
    """An interval starting at 0 on which Upsilon is certainly linear."""
    u = f.exact_upsilon
    if u is not None:
        if not u.breakpoints:
            return Interval.closed(0, 2)
        return Interval.right_open(0, u.breakpoints[0])
    if f.first_singularity is not None:
        iv = as_interval(f.first_singularity)
        if iv.lo == 0:
            return None
        return Interval(Fraction(0), iv.lo, True, not iv.lo_closed)
    if f.gc.hi is not None and f.gc.hi >= 1:
        return Interval.right_open(0, Fraction(1, f.gc.hi))
    if f.gc.hi == 0:
        return Interval.closed(0, 2)
    return None


def _sum_first_singularity(a: KnotFacts, b: KnotFacts, subject: str):
    """First singularity of a # b when one summand's lies below the other's linear region."""
    for x, y in ((a, b), (b, a)):
        if x.first_singularity is None:
            continue
        region = _linear_region(y)
        if region is None or not as_interval(x.first_singularity).is_subset(region):
            continue
        alpha = None
        if x.alpha is not None and y.tau is not None:
            alpha = x.alpha - y.tau
        note = trace("sum-first-singularity", subject,
                     f"first singularity {format_location(x.first_singularity)}"
                     + (f", alpha = {alpha}" if alpha is not None else ""),
                     singular=x.subject, linear=y.subject)
        return x.first_singularity, alpha, note
    return None, None, None


def _add_opt(x, y):
    return None if x is None or y is None else x + y


def _add_hi(r: IntRange, s: IntRange) -> IntRange:
    return IntRange(0, _add_opt(r.hi, s.hi))


def rule_sum(a: KnotFacts, b: KnotFacts, subject: str | None = None) -> KnotFacts:
    subject = subject if subject is not None else f"{a.subject} # {b.subject}"
    notes = []
    tau = _add_opt(a.tau, b.tau)
    cases = None
    if tau is None:
        ca = {a.tau} if a.tau is not None else a.tau_cases
        cb = {b.tau} if b.tau is not None else b.tau_cases
        if ca is not None and cb is not None:
            cases = frozenset(x + y for x in ca for y in cb)
    ua, ub = a.upsilon, b.upsilon
    if ua is None or ub is None:
        ups = None
    elif isinstance(ua, PLFunction) and isinstance(ub, PLFunction):
        ups = ua + ub
    elif isinstance(ua, PLFunction):
        ups = ub.shifted(ua)
    else:
        ups = ua + ub
    notes.append(trace("sum", subject, "tau, sigma, Upsilon added", left=a.subject, right=b.subject))
    g4 = _add_hi(a.g4, b.g4)
    gamma4 = _add_hi(a.gamma4, b.gamma4)
    gc = _add_hi(a.gc, b.gc)
    g3 = _add_hi(a.g3, b.g3)
    if g4.hi is not None or gamma4.hi is not None:
        notes.append(trace("sum-genus", subject, f"g4 <= {g4.hi}, gamma4 <= {gamma4.hi}"))
    if gc.hi is not None:
        notes.append(trace("sum-gc", subject, f"gc <= {gc.hi}"))
    first, alpha, note = _sum_first_singularity(a, b, subject)
    if note is not None:
        notes.append(note)
    return KnotFacts(
        subject=subject, tau=tau, tau_cases=cases, sigma=_add_opt(a.sigma, b.sigma), upsilon=ups,
        upsilon_at_1=a.upsilon_at_1 + b.upsilon_at_1, g3=g3, g4=g4, gc=gc, gamma4=gamma4,
        first_singularity=first, alpha=alpha, top_slice=a.top_slice and b.top_slice,
        trace=a.trace + b.trace + tuple(notes),
    )


def _genus_one() -> dict:
    one = IntRange(0, 1)
    return {"g3": one, "g4": one, "gc": one}


def rule_whitehead(f: KnotFacts, sign: str, k: int = 0, subject: str | None = None) -> KnotFacts:
    """Upsilon of the k-twisted, sign-clasped Whitehead double."""
    subject = subject if subject is not None else f"wh{sign}({f.subject}, k={k})"
    notes = []
    tau_k = f.tau
    ups = None
    if tau_k is None:
        notes.append(trace("whitehead", subject, "tau of the companion unknown: Upsilon unknown",
                           sign=sign, k=k))
    else:
        if sign == "+":
            ups = PLFunction.zero() if k >= 2 * tau_k else upsilon_simple(1)
        else:
            ups = PLFunction.zero() if k <= 2 * tau_k else upsilon_simple(-1)
        notes.append(trace("whitehead", subject, f"Upsilon = {ups.describe()}",
                           sign=sign, k=k, tau_companion=tau_k))
    top = k == 0
    if top:
        notes.append(trace("whitehead-slice", subject, "topologically slice", k=k))
    return KnotFacts(subject=subject, upsilon=ups, top_slice=top, trace=f.trace + tuple(notes),
                     **_genus_one())


def rule_gen_whitehead(tau_j: int, s: int, f: KnotFacts, k: int,
                       subject: str | None = None) -> KnotFacts:
    subject = subject if subject is not None else f"gwh({f.subject}, s={s}, k={k}, tauJ={tau_j})"
    notes = []
    ups = None
    if f.tau is None:
        notes.append(trace("gen-whitehead", subject, "tau of the companion unknown: Upsilon unknown"))
    else:
        if s < 2 * tau_j and k < 2 * f.tau:
            ups = upsilon_simple(1)
        elif s > 2 * tau_j and k > 2 * f.tau:
            ups = upsilon_simple(-1)
        else:
            ups = PLFunction.zero()
        notes.append(trace("gen-whitehead", subject, f"Upsilon = {ups.describe()}",
                           s=s, k=k, tauJ=tau_j, tau_companion=f.tau))
    top = k == 0
    if top:
        notes.append(trace("gen-whitehead", subject, "topologically slice", k=k))
    return KnotFacts(subject=subject, upsilon=ups, top_slice=top, trace=f.trace + tuple(notes),
                     **_genus_one())


def _positive_first_change(f: KnotFacts) -> bool:
    d = f.first_delta
    if d is not None:
        return d > 0
    return f.tau is not None and f.tau > 0 and f.g4.hi == f.tau


def rule_pattern_sat(f: KnotFacts, r: int, dtau: int, pattern: str | None = None,
                     subject: str | None = None) -> KnotFacts:
    """Satellite by a pattern that r positive crossing changes make trivial."""
    if r < 1:
        raise ValueError("r must be positive")
    subject = subject if subject is not None else f"sat({f.subject}, r={r}, dtau={dtau})"
    notes = []
    tau = None
    if f.tau is not None:
        if pattern == "mazur":
            if f.tau > 0:
                tau = f.tau + 1
                notes.append(trace("mazur-tau", subject, f"tau = {tau}", tau_companion=f.tau))
            else:
                notes.append(trace("mazur-tau", subject, "tau(K) <= 0: shift not established"))
        else:
            tau = f.tau + dtau
            notes.append(trace("pattern-tau", subject, f"tau = {tau}", tau_companion=f.tau, dtau=dtau))
    ups = None
    if f.upsilon is not None:
        try:
            ups = crossing_change_envelope(f.upsilon, r)
            notes.append(trace("pattern-sandwich", subject, ups.describe(), r=r))
        except ValueError:
            ups = None
    first = None
    shift_is_r = tau is not None and tau - f.tau == r
    if f.first_singularity is not None and shift_is_r and _positive_first_change(f):
        iv = as_interval(f.first_singularity)
        first = simplify_location(Interval(Fraction(0), iv.hi, False, iv.hi_closed))
        notes.append(trace("pattern-first-singularity", subject,
                           f"first singularity in {format_location(first)}",
                           companion_first=format_location(f.first_singularity), r=r))
    top = pattern == "mazur" and f.top_slice
    return KnotFacts(subject=subject, tau=tau, upsilon=ups, first_singularity=first, top_slice=top,
                     trace=f.trace + tuple(notes))


# ---------------------------------------------------------------------------
# Completion and consistency


def crosscap_lower_bound(f: KnotFacts) -> int | None:
    """|upsilon - sigma/2| when both are known exactly."""
    if f.upsilon_value is None or f.sigma is None:
        return None
    return abs(2 * f.upsilon_value - f.sigma) // 2


def _range_distance(r: IntRange, x: Fraction) -> Fraction:
    if r.lo is not None and r.lo > x:
        return r.lo - x
    if r.hi is not None and r.hi < x:
        return x - r.hi
    return Fraction(0)


def _min_abs(r: IntRange) -> int:
    return int(_range_distance(r, Fraction(0)))


def _complete_once(f: KnotFacts) -> KnotFacts:
    s = f.subject
    notes: list[TraceEntry] = []
    upd: dict = {}

    def cur(name):
        return upd.get(name, getattr(f, name))

    def setr(name, new, rule, text):
        if new != cur(name):
            upd[name] = new
            notes.append(trace(rule, s, text))

    u = f.exact_upsilon
    if u is not None:
        if cur("tau") is None:
            setr("tau", -u.initial_slope, "exact-upsilon", f"tau = {-u.initial_slope}")
        if u(1).denominator == 1:
            setr("upsilon_at_1", cur("upsilon_at_1").intersect(IntRange.exact(int(u(1)))),
                 "exact-upsilon", f"upsilon = {u(1)}")
        if u.breakpoints:
            b0 = u.breakpoints[0]
            loc = cur("first_singularity")
            if loc is None or (as_interval(loc).contains(b0) and loc != b0):
                setr("first_singularity", b0, "exact-upsilon", f"first singularity at {format_location(b0)}")
            if cur("alpha") is None:
                setr("alpha", u.slope_after(b0), "exact-upsilon", f"alpha = {u.slope_after(b0)}")
        smax = max(abs(x) for x in u.slopes)
        setr("gc", cur("gc").raise_lo(smax), "upsilon-gc", f"gc >= {smax}")
        if not u.is_zero and not cur("nontorsion"):
            setr("nontorsion", True, "nontorsion", "nonzero Upsilon")
    cases = cur("tau_cases")
    if cases is not None:
        if cur("tau") is not None:
            setr("tau_cases", None, "cable-tau", f"tau = {cur('tau')} fixes the case")
        elif len(cases) == 1:
            (only,) = cases
            setr("tau", only, "cable-tau", f"tau = {only}")
            setr("tau_cases", None, "cable-tau", "single case")
    tau = cur("tau")
    # genus chain
    g4, gc, g3 = cur("g4"), cur("gc"), cur("g3")
    if tau is not None:
        g4 = g4.raise_lo(abs(tau))
    g4 = g4.raise_lo(_min_abs(cur("upsilon_at_1")))
    gc = gc.raise_lo(g4.lo)
    g3 = g3.raise_lo(gc.lo)
    gc = gc.cap_hi(g3.hi)
    g4 = g4.cap_hi(gc.hi)
    for name, val in (("g4", g4), ("gc", gc), ("g3", g3)):
        setr(name, val, "genus-chain", f"{name} in {val}")
    # epsilon
    if cur("epsilon") is None and tau is not None and tau != 0 and cur("g4").hi == abs(tau):
        setr("epsilon", 1 if tau > 0 else -1, "epsilon-default", f"epsilon = {1 if tau > 0 else -1}")
    if cur("epsilon") == 0 and tau is None:
        setr("tau", 0, "epsilon-zero", "tau = 0")
    # signature
    if cur("top_slice") and cur("sigma") is None:
        setr("sigma", 0, "slice-signature", "sigma = 0")
    # upsilon range
    ur = cur("upsilon_at_1")
    g4hi = cur("g4").hi
    if g4hi is not None:
        ur = ur.intersect(IntRange(-g4hi, g4hi))
    env = f.envelope
    if env is not None:
        b = env.bounds_at(1)
        if b is not None:
            ur = ur.intersect(IntRange(ceil(b[0]), floor(b[1])))
    sigma = cur("sigma")
    gam = cur("gamma4")
    if sigma is not None and gam.hi is not None:
        ur = ur.intersect(IntRange(sigma // 2 - gam.hi, sigma // 2 + gam.hi))
    setr("upsilon_at_1", ur, "crosscap" if sigma is not None and gam.hi is not None else "upsilon-g4",
         f"upsilon in {ur}")
    if sigma is not None:
        d = _range_distance(cur("upsilon_at_1"), Fraction(sigma, 2))
        setr("gamma4", cur("gamma4").raise_lo(int(ceil(d))), "crosscap", f"gamma4 >= {int(ceil(d))}")
    # nontorsion
    if not cur("nontorsion"):
        ev = []
        if tau not in (None, 0):
            ev.append(f"tau = {tau}")
        if sigma not in (None, 0):
            ev.append(f"sigma = {sigma}")
        if cur("upsilon_at_1").excludes_zero():
            ev.append(f"upsilon in {cur('upsilon_at_1')}")
        if cur("tau_cases") is not None and 0 not in cur("tau_cases"):
            ev.append("every tau case is nonzero")
        if ev:
            setr("nontorsion", True, "nontorsion", ", ".join(ev))
    # location of singularities
    gchi = cur("gc").hi
    loc = cur("first_singularity")
    nonzero = (tau not in (None, 0)) or cur("upsilon_at_1").excludes_zero()
    if gchi is not None and gchi >= 1 and u is None and (loc is not None or nonzero):
        win = gc_window(gchi).intersect(Interval.left_open(0, 1))
        base = as_interval(loc) if loc is not None else win
        new = base.intersect(win) if win is not None else None
        if new is not None:
            newloc = simplify_location(new)
            if newloc != loc:
                setr("first_singularity", newloc, "gc-window",
                     f"first singularity in {format_location(newloc)}")
    if not upd:
        return f
    return replace(f, **upd, trace=f.trace + tuple(notes))


def complete(f: KnotFacts) -> KnotFacts:
    """Apply the derived-field rules until nothing changes."""
    for _ in range(10):
        g = _complete_once(f)
        if g is f:
            return g
        f = g
    return f


def consistency_check(f: KnotFacts) -> list[str]:
    """Cross-field violations; empty when the record is coherent."""
    out = []
    u = f.exact_upsilon
    for name in ("g3", "g4", "gc", "gamma4", "upsilon_at_1"):
        r = getattr(f, name)
        if r.is_empty:
            out.append(f"{name} range {r} is empty")
    if u is not None:
        report = validate_candidate(u, f.tau, f.g4.hi, f.gc.hi)
        out += [f"{c.axiom}: {c.detail}" for c in report.failures]
        v = u(1)
        if v.denominator != 1:
            out.append(f"upsilon = {v} is not an integer")
        elif not f.upsilon_at_1.contains(int(v)):
            out.append(f"upsilon = {v} outside the range {f.upsilon_at_1}")
        if u.breakpoints:
            b0 = u.breakpoints[0]
            if f.first_singularity is not None and not as_interval(f.first_singularity).contains(b0):
                out.append(f"first singularity {format_location(f.first_singularity)} but Upsilon breaks at {b0}")
            if f.alpha is not None and f.alpha != u.slope_after(b0):
                out.append(f"alpha {f.alpha} but Upsilon has slope {u.slope_after(b0)} after {b0}")
        elif f.first_singularity is not None:
            out.append("first singularity recorded for a linear Upsilon")
    if f.envelope is not None and not f.envelope.is_ordered():
        out.append(f"envelope lower bound exceeds upper bound on {f.envelope.valid_on}")
    if f.tau is not None and f.g4.hi is not None and abs(f.tau) > f.g4.hi:
        out.append(f"|tau| = {abs(f.tau)} exceeds g4 <= {f.g4.hi}")
    if f.tau_cases is not None and not f.tau_cases:
        out.append("no admissible tau")
    if f.tau is not None and f.tau_cases is not None and f.tau not in f.tau_cases:
        out.append(f"tau = {f.tau} not among the cases {sorted(f.tau_cases)}")
    if f.top_slice and f.sigma not in (None, 0):
        out.append(f"topologically slice with sigma = {f.sigma}")
    if f.sigma is not None and f.sigma % 2:
        out.append(f"odd signature {f.sigma}")
    if f.epsilon is not None and f.epsilon not in (-1, 0, 1):
        out.append(f"epsilon {f.epsilon} out of range")
    if f.epsilon == 0 and f.tau not in (None, 0):
        out.append("epsilon = 0 with nonzero tau")
    if f.first_singularity is not None:
        if not as_interval(f.first_singularity).is_subset(Interval.left_open(0, 1)):
            out.append(f"first singularity {format_location(f.first_singularity)} outside (0, 1]")
    if f.g4.lo is not None and f.gc.hi is not None and f.g4.lo > f.gc.hi:
        out.append("g4 exceeds gc")
    if f.gc.lo is not None and f.g3.hi is not None and f.gc.lo > f.g3.hi:
        out.append("gc exceeds g3")
    return out


def merge_declared(f: KnotFacts, g: GeneratorFacts) -> KnotFacts:
    """Combine derived facts with a declared record for the same expression."""
    s = f.subject
    problems = []
    upd: dict = {}

    def scalar(name):
        mine, theirs = getattr(f, name), getattr(g, name)
        if theirs is None:
            return
        if mine is not None and mine != theirs:
            problems.append(f"declared {name} = {theirs} but derived {mine}")
        upd[name] = theirs

    for name in ("tau", "epsilon", "sigma", "alpha"):
        scalar(name)
    if g.tau is not None and f.tau_cases is not None:
        if g.tau not in f.tau_cases:
            problems.append(f"declared tau = {g.tau} not among {sorted(f.tau_cases)}")
        upd["tau_cases"] = None
    for name in ("g3", "g4", "gc", "gamma4"):
        declared = getattr(g, name)
        if declared is not None:
            merged = getattr(f, name).intersect(declared)
            if merged.is_empty:
                problems.append(f"declared {name} {declared} conflicts with {getattr(f, name)}")
            upd[name] = merged
    if g.upsilon is not None:
        if isinstance(f.upsilon, PLFunction) and f.upsilon != g.upsilon:
            problems.append("declared Upsilon differs from derived Upsilon")
        if isinstance(f.upsilon, Envelope) and not f.upsilon.contains(g.upsilon):
            problems.append("declared Upsilon leaves the derived envelope")
        upd["upsilon"] = g.upsilon
    if g.first_singularity is not None:
        if f.first_singularity is None:
            upd["first_singularity"] = g.first_singularity
        else:
            both = as_interval(f.first_singularity).intersect(as_interval(g.first_singularity))
            if both is None:
                problems.append(f"declared first singularity {format_location(g.first_singularity)}"
                                f" outside derived {format_location(f.first_singularity)}")
            else:
                upd["first_singularity"] = simplify_location(both)
    if g.top_slice:
        upd["top_slice"] = True
    if g.nontorsion is not None:
        upd["nontorsion"] = g.nontorsion
    if problems:
        raise DerivationError(f"{s}: declared facts conflict with derivation", problems)
    return replace(f, **upd, trace=f.trace + (trace("declared", s, "literature facts merged"),))


# ---------------------------------------------------------------------------
# Dispatcher


def derive(expr: KnotExpr | str, table: FactTable | None = None,
           leaves: dict[str, KnotFacts] | None = None) -> KnotFacts:
    """Best-known facts for ``expr`` with a full rule trace.

    ``leaves`` maps generator names to already-derived facts; they take
    precedence over the table and the built-in generators.
    """
    if isinstance(expr, str):
        expr = parse_expr(expr)
    table = table or FactTable()
    cache: dict = {}
    return _derive(expr, table, cache, leaves or {})


def _derive(e: KnotExpr, table: FactTable, cache: dict, leaves: dict) -> KnotFacts:
    if e in cache:
        return cache[e]
    s = to_text(e)

    def sub(x):
        return _derive(x, table, cache, leaves)

    if isinstance(e, Generator):
        if e.name in leaves:
            f = replace(leaves[e.name], subject=s)
        elif e.name in table.generators:
            f = from_declared(table.generators[e.name], s)
        elif e.name in UNKNOT_NAMES:
            f = unknot_facts(s)
        elif torus_params(e.name) is not None:
            f = torus_facts(*torus_params(e.name), subject=s)
        else:
            raise DerivationError(f"unresolved generator {e.name!r}")
    elif isinstance(e, Mirror):
        f = rule_mirror(sub(e.child), s)
    elif isinstance(e, Reverse):
        f = rule_reverse(sub(e.child), s)
    elif isinstance(e, Sum):
        f = rule_sum(sub(e.left), sub(e.right), s)
    elif isinstance(e, Cable):
        f = rule_cable(sub(e.child), e.p, e.q, s)
    elif isinstance(e, WhDouble):
        f = rule_whitehead(sub(e.child), e.sign, e.k, s)
    elif isinstance(e, GenWhDouble):
        f = rule_gen_whitehead(e.tauJ, e.s, sub(e.child), e.k, s)
    elif isinstance(e, PatternSat):
        f = rule_pattern_sat(sub(e.child), e.r, e.dtau, e.pattern, s)
    else:
        raise TypeError(f"not a knot expression: {e!r}")
    if s in table.expressions:
        f = merge_declared(f, table.expressions[s])
    f = complete(f)
    problems = consistency_check(f)
    if problems:
        raise DerivationError(f"{s}: inconsistent facts", problems)
    cache[e] = f
    return f
