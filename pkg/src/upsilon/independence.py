"""Linear-independence and summand certificates built on the lambda homomorphism."""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import ceil, floor, gcd

from .cables import first_sing_cable, rule_cable, tau_torus
from .derivation import complete, derive
from .expr import Cable, Generator, Mirror, connected_sum, to_text
from .facts import KnotFacts, TraceEntry, trace
from .pl import (Location, as_interval, format_location, location_from_json, location_to_json,
                 simplify_location)

INDEPENDENT = "independent"
SUMMAND = "summand_basis"
INCONCLUSIVE = "inconclusive"


class InvalidCertificate(ValueError):
    pass


class HypothesisError(ValueError):
    def __init__(self, hypothesis: str, detail: str = ""):
        self.hypothesis = hypothesis
        super().__init__(f"hypothesis failed: {hypothesis}" + (f" ({detail})" if detail else ""))


def lambda_value(t, delta: int) -> Fraction:
    """lambda_t of a knot whose Upsilon changes slope by ``delta`` at ``t``."""
    t = Fraction(t)
    if not 0 < t < 2:
        raise InvalidCertificate(f"t = {t} is not in (0, 2)")
    if (t * delta).denominator != 1 or (t * delta).numerator % 2:
        raise InvalidCertificate(f"t * delta = {t * delta} is not an even integer")
    p, q = t.numerator, t.denominator
    return Fraction(delta, 2 * q) if p % 2 else Fraction(delta, q)


# ---------------------------------------------------------------------------
# Certificates


@dataclass(frozen=True)
class SingularityCertificate:
    """A singularity of one family member.

    ``first`` marks ``t`` as the first singularity, so the member is linear
    before it.  ``all_singularities`` lists every singularity when Upsilon is
    exactly known.  ``lambda_cases`` holds every lambda value compatible with
    an interval-valued ``t``.
    """

    knot: str
    t: Location
    delta: int | None = None
    first: bool = True
    all_singularities: tuple | None = None
    lambda_cases: tuple | None = None

    def __post_init__(self):
        if isinstance(self.t, Fraction) and self.delta is not None:
            if self.delta == 0:
                raise InvalidCertificate(f"{self.knot}: zero slope change at a singularity")
            lambda_value(self.t, self.delta)

    @property
    def exact(self) -> bool:
        return isinstance(self.t, Fraction)

    @property
    def lam(self) -> Fraction | None:
        if self.exact and self.delta is not None:
            return lambda_value(self.t, self.delta)
        return None

    def unit_lambda(self) -> bool:
        if self.lam is not None:
            return abs(self.lam) == 1
        return bool(self.lambda_cases) and all(abs(x) == 1 for x in self.lambda_cases)

    def certifies_not_singular(self, loc: Location) -> bool:
        """True when every point of ``loc`` is certainly not a singularity of this member."""
        iv = as_interval(loc)
        if self.first and iv.strictly_below(as_interval(self.t)):
            return True
        if self.all_singularities is not None:
            return not any(iv.contains(x) for x in self.all_singularities)
        return False

    def lambda_at(self, t: Fraction) -> Fraction | None:
        """lambda_t of this member, when determined by the certificate."""
        if self.exact and t == self.t and self.delta is not None:
            return self.lam
        if self.certifies_not_singular(t):
            return Fraction(0)
        return None

    def to_json(self) -> dict:
        out = {"knot": self.knot, "t": location_to_json(self.t), "first": self.first}
        if self.delta is not None:
            out["delta"] = self.delta
        if self.lam is not None:
            out["lambda"] = str(self.lam)
        if self.all_singularities is not None:
            out["all_singularities"] = [location_to_json(x) for x in self.all_singularities]
        if self.lambda_cases is not None:
            out["lambda_cases"] = [str(x) for x in self.lambda_cases]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "SingularityCertificate":
        sing = data.get("all_singularities")
        cases = data.get("lambda_cases")
        return cls(
            knot=data["knot"],
            t=location_from_json(data["t"]),
            delta=data.get("delta"),
            first=data.get("first", True),
            all_singularities=None if sing is None else tuple(location_from_json(x) for x in sing),
            lambda_cases=None if cases is None else tuple(Fraction(x) for x in cases),
        )


def certificate_from_facts(f: KnotFacts, knot: str | None = None) -> SingularityCertificate | None:
    """The first-singularity certificate carried by derived facts, if any."""
    knot = knot or f.subject
    u = f.exact_upsilon
    if u is not None:
        if not u.breakpoints:
            return None
        b0 = u.breakpoints[0]
        return SingularityCertificate(knot, b0, u.delta_at(b0), True, tuple(u.breakpoints))
    if f.first_singularity is None:
        return None
    delta = f.first_delta if isinstance(f.first_singularity, Fraction) else None
    return SingularityCertificate(knot, f.first_singularity, delta, True)


# ---------------------------------------------------------------------------
# Reports


@dataclass(frozen=True)
class IndependenceReport:
    members: tuple
    certificates: tuple
    verdict: str
    order: tuple = ()
    trace: tuple = ()
    facts: tuple = ()

    @property
    def lambdas(self) -> dict:
        return {c.knot: c.lam for c in self.certificates}

    def to_json(self) -> dict:
        return {
            "kind": "independence",
            "members": list(self.members),
            "verdict": self.verdict,
            "order": list(self.order),
            "certificates": [c.to_json() for c in self.certificates],
            "trace": [e.to_json() for e in self.trace],
            "facts": [f.to_json() for f in self.facts],
        }

    @classmethod
    def from_json(cls, data: dict) -> "IndependenceReport":
        return cls(
            members=tuple(data["members"]),
            certificates=tuple(SingularityCertificate.from_json(c) for c in data["certificates"]),
            verdict=data["verdict"],
            order=tuple(data.get("order", ())),
            trace=tuple(TraceEntry.from_json(e) for e in data.get("trace", ())),
            facts=tuple(KnotFacts.from_json(f) for f in data.get("facts", ())),
        )

    def summary_lines(self) -> list[str]:
        lines = [f"verdict: {self.verdict}"]
        for c in self.certificates:
            lam = f", lambda {c.lam}" if c.lam is not None else (
                f", lambda in {{{', '.join(str(x) for x in c.lambda_cases)}}}" if c.lambda_cases else "")
            lines.append(f"  {c.knot}: singularity {format_location(c.t)}"
                         + (f", slope change {c.delta}" if c.delta is not None else "") + lam)
        if self.order:
            lines.append("triangular order: " + " < ".join(self.order))
        return lines


@dataclass(frozen=True)
class Decision:
    """Verdict for a pair-type decision procedure."""

    verdict: str
    route: str | None = None
    failed: tuple = ()
    trace: tuple = ()

    def to_json(self) -> dict:
        return {"kind": "decision", "verdict": self.verdict, "route": self.route,
                "failed": list(self.failed), "trace": [e.to_json() for e in self.trace]}

    @classmethod
    def from_json(cls, data: dict) -> "Decision":
        return cls(data["verdict"], data.get("route"), tuple(data.get("failed", ())),
                   tuple(TraceEntry.from_json(e) for e in data.get("trace", ())))


def check_independence(certs, extra_trace=(), facts=()) -> IndependenceReport:
    """Look for a triangular ordering of the singularity certificates.

    Built from the back: the last member needs a singularity that is
    certainly not a singularity of anyone else still in play.
    """
    certs = sorted(certs, key=lambda c: c.knot)
    members = tuple(c.knot for c in certs)
    notes = list(extra_trace)
    if len(set(members)) != len(members):
        raise InvalidCertificate("one certificate per member")
    remaining = list(certs)
    tail = []
    while remaining:
        pick = next((c for c in remaining
                     if all(o.certifies_not_singular(c.t) for o in remaining if o is not c)), None)
        if pick is None:
            notes.append(trace("triangular", ", ".join(members),
                               "no triangular ordering certified",
                               stuck=", ".join(c.knot for c in remaining)))
            return IndependenceReport(members, tuple(certs), INCONCLUSIVE, (), tuple(notes), tuple(facts))
        tail.append(pick)
        remaining.remove(pick)
    order = tuple(c.knot for c in reversed(tail))
    notes.append(trace("triangular", ", ".join(members), "each singularity avoids the earlier members",
                       order=" < ".join(order)))
    verdict = INDEPENDENT
    if all(c.unit_lambda() for c in certs):
        verdict = SUMMAND
        notes.append(trace("summand", ", ".join(members), "every diagonal lambda is +-1"))
    return IndependenceReport(members, tuple(certs), verdict, order, tuple(notes), tuple(facts))


def lambda_matrix(certs) -> tuple[list[str], list[Fraction], list[list[Fraction | None]]]:
    """Rows are members, columns the distinct exact singularity points."""
    certs = sorted(certs, key=lambda c: c.knot)
    cols = sorted({c.t for c in certs if c.exact})
    rows = [[c.lambda_at(t) for t in cols] for c in certs]
    return [c.knot for c in certs], cols, rows


def exact_rank(rows: list[list]) -> int:
    """Rank over Q by Gaussian elimination; entries must all be known."""
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / m[rank][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# Pair decisions


def decide_pattern_pair(tau_k: int, t0, alpha: int | None, r: int, dtau_equals_r: bool = True,
                  alpha_below_tau: bool = False, subject: str = "K") -> Decision:
    """{K, P(K)} for a pattern undone by r positive crossing changes."""
    failed = []
    t0 = Fraction(t0) if t0 is not None else None
    if tau_k is None or tau_k <= 0:
        failed.append("tau(K) > 0")
    if t0 is None or t0 >= 1:
        failed.append("first singularity t0 < 1")
    if r == 0:
        failed.append("r != 0")
    if alpha is None:
        if not alpha_below_tau:
            failed.append("alpha != n tau(K) (alpha unknown)")
    elif tau_k and tau_k > 0 and alpha > 0 and alpha % tau_k == 0:
        failed.append(f"alpha != n tau(K) (alpha = {alpha} = {alpha // tau_k} tau)")
    if t0 is not None and r:
        prod = t0 * r
        if prod.denominator == 1 and prod.numerator % 2 == 0:
            failed.append(f"t0 r not even (t0 r = {prod})")
    if tau_k and r and gcd(r, tau_k) != 1:
        failed.append(f"gcd(r, tau(K)) = 1 (gcd = {gcd(r, tau_k)})")
    if not dtau_equals_r:
        failed.append("tau(P(K)) = tau(K) + r")
    inputs = dict(tau=tau_k, t0=t0, alpha=alpha, r=r)
    notes = []
    if alpha is None and alpha_below_tau:
        notes.append(trace("torus-convexity", subject, "|alpha| < tau, so alpha is no positive multiple"))
    verdict = INCONCLUSIVE if failed else INDEPENDENT
    notes.append(trace("pattern-pair", subject,
                       verdict if not failed else "failed: " + "; ".join(failed), **inputs))
    return Decision(verdict, None if failed else "pattern-pair", tuple(failed), tuple(notes))


def decide_torus_mazur(p: int, q: int, i: int) -> Decision:
    """{T(p,q), M^i(T(p,q))}."""
    subject = f"T({p},{q})"
    if not (3 <= p < q) or gcd(p, q) != 1:
        return Decision(INCONCLUSIVE, None, ("3 <= p < q coprime",),
                        (trace("pattern-pair", subject, "outside the torus-knot hypothesis", p=p, q=q),))
    tau = tau_torus(p, q)
    return decide_pattern_pair(tau, Fraction(2, p), None, i, True, alpha_below_tau=True, subject=subject)


def decide_cable_pair(f: KnotFacts, p: int, q: int, subject: str | None = None) -> Decision:
    """{K, K_{p,q}}: tries each certification route in turn."""
    subject = subject or f.subject
    cab = f"cable({subject}, {p}, {q})"
    if p < 2:
        return Decision(INCONCLUSIVE, None, ("p >= 2",))
    tau = f.tau
    notes = []
    window, more = first_sing_cable(f, p, q, cab)
    notes += more
    routes = []
    if f.upsilon_simple and tau:
        routes.append(("upsilon-simple", "K singular only at 1; the cable is singular earlier"))
    t0 = f.first_singularity
    if tau and isinstance(t0, Fraction) and p * t0 > 2:
        routes.append(("below-first-singularity", f"2/p < t0 = {t0}"))
    if tau and f.gc.hi is not None and p > 2 * f.gc.hi:
        routes.append(("concordance-genus", f"p > 2 gc = {2 * f.gc.hi}"))
    if tau == 0 and f.upsilon_at_1.excludes_zero() and t0 is not None and \
            Fraction(1, p) < as_interval(t0).lo:
        routes.append(("small-tau", f"1/p below the first singularity {format_location(t0)}"))
    if f.top_slice and abs(q) >= 2 and f.nontorsion:
        routes.append(("signature", "sigma(K_{p,q}) = sigma(T_{p,q}) != 0 while sigma(K) = 0"))
        notes.append(trace("cable-signature-route", cab, "signature separates the pair", p=p, q=q))
    for name, why in routes:
        notes.append(trace("triangular", cab, f"route {name}: {why}", p=p, q=q))
    if routes:
        return Decision(INDEPENDENT, routes[0][0], (), tuple(notes))
    return Decision(INCONCLUSIVE, None, ("no route applies",), tuple(notes))


# ---------------------------------------------------------------------------
# Families


def _cable_facts(f: KnotFacts, p: int, subject: str, q: int = 1) -> KnotFacts:
    if p == 1:
        return f
    return complete(rule_cable(f, p, q, f"cable({subject}, {p}, {q})"))


def family_power_cables(f: KnotFacts, base: int, count: int, subject: str | None = None
                        ) -> IndependenceReport:
    """The cables K_{base^i, 1}, i = 0..count-1."""
    subject = subject or f.subject or "K"
    notes = []
    tau = f.tau
    failed = None
    if base == 2:
        if not f.upsilon_simple:
            failed = "K is Upsilon-simple"
        elif not (tau and tau > 0 and f.g4.hi == tau):
            failed = "tau(K) = g4(K) > 0"
    else:
        if not (tau and tau > 0 and f.gc.hi == tau):
            failed = "tau(K) = gc(K) > 0"
        elif base <= 2 * tau:
            failed = f"n > 2 tau(K) (n = {base}, 2 tau = {2 * tau})"
    if failed:
        notes.append(trace("triangular", subject, f"hypothesis failed: {failed}", base=base))
        return IndependenceReport((), (), INCONCLUSIVE, (), tuple(notes))
    certs, facts = [], []
    for i in range(count):
        p = base ** i
        g = _cable_facts(f, p, subject)
        cert = certificate_from_facts(g, g.subject if p > 1 else subject)
        if cert is None:
            notes.append(trace("triangular", g.subject, "no first-singularity window"))
            return IndependenceReport((), (), INCONCLUSIVE, (), tuple(notes))
        certs.append(cert)
        facts.append(g)
    return check_independence(certs, notes, facts)


def family_iterated_cables(f: KnotFacts, count: int, p_choices=None, subject: str | None = None):
    """Greedy iterated (p_i, 1) cables with disjoint first-singularity windows.

    Returns ``(ps, report)``.
    """
    subject = subject or f.subject or "K"
    if not f.tau:
        raise HypothesisError("tau(K) != 0")
    notes = []
    cur = f
    name = subject
    cert = certificate_from_facts(cur, name)
    if cert is None:
        notes.append(trace("greedy-iterated-cable", name, "first singularity of K unknown"))
        return [], IndependenceReport((), (), INCONCLUSIVE, (), tuple(notes))
    certs, facts, ps = [cert], [cur], []
    for i in range(count):
        lo = as_interval(cur.first_singularity).lo
        if lo == 0:
            notes.append(trace("greedy-iterated-cable", name,
                               "window has lower end 0: no cabling parameter certified", step=i + 1))
            return ps, check_independence(certs, notes, facts)._replace_verdict(INCONCLUSIVE)
        p = floor(2 / lo) + 1
        if p_choices is not None:
            if i >= len(p_choices) or Fraction(2, p_choices[i]) >= lo:
                notes.append(trace("greedy-iterated-cable", name, "forced p_i does not clear the window",
                                   step=i + 1))
                return ps, check_independence(certs, notes, facts)._replace_verdict(INCONCLUSIVE)
            p = p_choices[i]
        name = f"cable({name}, {p}, 1)"
        cur = complete(rule_cable(cur, p, 1, name))
        notes.append(trace("greedy-iterated-cable", name, f"p_{i + 1} = {p}: 2/{p} < {lo}",
                           window=format_location(cur.first_singularity)))
        cert = certificate_from_facts(cur, name)
        if cert is None:
            return ps, check_independence(certs, notes, facts)._replace_verdict(INCONCLUSIVE)
        ps.append(p)
        certs.append(cert)
        facts.append(cur)
    return ps, check_independence(certs, notes, facts)


def _replace_verdict(self: IndependenceReport, verdict: str) -> IndependenceReport:
    return replace(self, verdict=verdict)


IndependenceReport._replace_verdict = _replace_verdict


def window_lambda_cases(window: Location, tau: int | None, gc: int) -> list[tuple[Fraction, int, Fraction]]:
    """Every (t, slope change, lambda) allowed at a first singularity inside ``window``.

    A first singularity changes the slope from -tau to -tau + delta, all
    slopes are bounded by gc, and t * delta must be even.
    """
    iv = as_interval(window)
    out = []
    for delta in range(-2 * gc, 2 * gc + 1):
        if delta == 0:
            continue
        if tau is not None and abs(-tau + delta) > gc:
            continue
        d = abs(delta)
        # t = 2k/d for positive k
        k_lo = max(1, ceil(iv.lo * d / 2))
        k_hi = floor(iv.hi * d / 2)
        for k in range(k_lo, k_hi + 1):
            t = Fraction(2 * k, d)
            if 0 < t < 2 and iv.contains(t):
                out.append((t, delta, lambda_value(t, delta)))
    return sorted(set(out))


def certify_summand_window(f: KnotFacts, i: int, subject: str | None = None):
    """Certificate for K_{2^i, 1} with every admissible lambda equal to +-1.

    Returns ``(certificate, cases)``.
    """
    subject = subject or f.subject or "K"
    if not f.upsilon_simple:
        raise HypothesisError("K is Upsilon-simple")
    for label, val in (("tau(K) = 1", f.tau), ("g4(K) = 1", f.g4.hi), ("gc(K) = 1", f.gc.hi)):
        if val != 1:
            raise HypothesisError(label, f"got {val}")
    p = 2 ** i
    g = _cable_facts(f, p, subject)
    if g.first_singularity is None or g.gc.hi is None:
        raise HypothesisError("first-singularity window and gc of the cable")
    cases = window_lambda_cases(g.first_singularity, g.tau, g.gc.hi)
    expected = sorted((Fraction(2, p + ell), p + ell, Fraction(1)) for ell in range(1, p + 1))
    if cases != expected:
        raise InvalidCertificate(f"window analysis for i = {i} disagrees with the slope-change count")
    lams = tuple(sorted({lam for _, _, lam in cases}))
    cert = SingularityCertificate(g.subject if p > 1 else subject, g.first_singularity, None, True,
                                  None, lams)
    return cert, cases


def summand_family(f: KnotFacts, count: int, subject: str | None = None) -> IndependenceReport:
    """Power-of-two cables with window-exhaustion lambda certificates."""
    subject = subject or f.subject or "K"
    certs, notes = [], []
    for i in range(count):
        cert, cases = certify_summand_window(f, i, subject)
        notes.append(trace("window-exhaustion", cert.knot,
                           f"{len(cases)} admissible singularities, lambda in {set(map(str, cert.lambda_cases))}",
                           window=format_location(cert.t)))
        certs.append(cert)
    return check_independence(certs, notes)


# ---------------------------------------------------------------------------
# J_n = 2n K # -K_{2n,1}


def jn_expression(subject: str, n: int):
    k = Generator(subject)
    return connected_sum(*([k] * (2 * n)), Mirror(Cable(k, 2 * n, 1)))


def jn_family(f: KnotFacts, n: int, p: int, q: int, subject: str | None = None,
              declared_first_singularity: Location | None = None) -> IndependenceReport:
    """Report for {J_n, (J_n)_{p,q}} with q = +-1."""
    subject = subject or f.subject or "K"
    notes = []
    failed = []
    if not f.upsilon_simple:
        failed.append("K is Upsilon-simple")
    if not f.top_slice:
        failed.append("K is topologically slice")
    if not (f.tau and f.tau > 0 and f.g4.hi == f.tau):
        failed.append("tau(K) = g4(K) > 0")
    if q not in (1, -1) or n < 1 or p < 2:
        failed.append("n >= 1, p >= 2, q = +-1")
    if failed:
        notes.append(trace("jn-construction", subject, "hypotheses failed: " + "; ".join(failed)))
        return IndependenceReport((), (), INCONCLUSIVE, (), tuple(notes))
    expr = jn_expression(subject, n)
    jname = to_text(expr)
    jn = derive(expr, leaves={subject: f})
    notes.append(trace("jn-construction", jname, f"tau = {jn.tau}, upsilon in {jn.upsilon_at_1}", n=n))
    if declared_first_singularity is not None:
        both = as_interval(jn.first_singularity).intersect(as_interval(declared_first_singularity)) \
            if jn.first_singularity is not None else as_interval(declared_first_singularity)
        if both is None:
            raise InvalidCertificate("declared first singularity of J_n conflicts with its window")
        jn = replace(jn, first_singularity=simplify_location(both)).with_trace(
            trace("declared", jname, f"first singularity {format_location(declared_first_singularity)}"))
    cab = complete(rule_cable(jn, p, q, f"cable({jname}, {p}, {q})"))
    c1 = certificate_from_facts(jn, jname)
    c2 = certificate_from_facts(cab, cab.subject)
    if c1 is None or c2 is None:
        notes.append(trace("triangular", jname, "missing first-singularity window"))
        return IndependenceReport((), (), INCONCLUSIVE, (), tuple(notes), (jn, cab))
    return check_independence([c1, c2], notes, (jn, cab))
