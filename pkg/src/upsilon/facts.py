"""Fact records, rule traces and the JSON facts-file format."""
from __future__ import annotations

import json
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Mapping

from .expr import ParseError, SemanticError, parse_expr, to_text
from .pl import (Envelope, Interval, Location, PLFunction, as_interval, format_location,
                 location_from_json, location_to_json, validate_candidate)


class FactsError(ValueError):
    """A facts document is malformed or violates an invariant."""

    def __init__(self, message: str, axiom: str | None = None, record: str | None = None):
        self.axiom = axiom
        self.record = record
        prefix = f"{record}: " if record else ""
        suffix = f" [axiom: {axiom}]" if axiom else ""
        super().__init__(f"{prefix}{message}{suffix}")


# ---------------------------------------------------------------------------
# Integer ranges


@dataclass(frozen=True)
class IntRange:
    """Closed integer range; ``None`` marks an unbounded side."""

    lo: int | None = None
    hi: int | None = None

    @classmethod
    def exact(cls, n: int) -> "IntRange":
        return cls(n, n)

    @classmethod
    def at_most(cls, n: int, lo: int | None = 0) -> "IntRange":
        return cls(lo, n)

    @property
    def is_empty(self) -> bool:
        return self.lo is not None and self.hi is not None and self.lo > self.hi

    @property
    def value(self) -> int | None:
        return self.lo if self.lo is not None and self.lo == self.hi else None

    def contains(self, x: int) -> bool:
        return (self.lo is None or self.lo <= x) and (self.hi is None or x <= self.hi)

    def excludes_zero(self) -> bool:
        return (self.lo is not None and self.lo > 0) or (self.hi is not None and self.hi < 0)

    def intersect(self, other: "IntRange") -> "IntRange":
        lo = self.lo if other.lo is None else other.lo if self.lo is None else max(self.lo, other.lo)
        hi = self.hi if other.hi is None else other.hi if self.hi is None else min(self.hi, other.hi)
        return IntRange(lo, hi)

    def raise_lo(self, n: int | None) -> "IntRange":
        return self if n is None else self.intersect(IntRange(n, None))

    def cap_hi(self, n: int | None) -> "IntRange":
        return self if n is None else self.intersect(IntRange(None, n))

    def __add__(self, other: "IntRange") -> "IntRange":
        lo = None if self.lo is None or other.lo is None else self.lo + other.lo
        hi = None if self.hi is None or other.hi is None else self.hi + other.hi
        return IntRange(lo, hi)

    def __neg__(self) -> "IntRange":
        return IntRange(None if self.hi is None else -self.hi, None if self.lo is None else -self.lo)

    def to_json(self) -> list:
        return [self.lo, self.hi]

    @classmethod
    def from_json(cls, data) -> "IntRange":
        if isinstance(data, bool):
            raise FactsError(f"range must be an integer or [lo, hi], got {data!r}")
        if isinstance(data, int):
            return cls.exact(data)
        if isinstance(data, (list, tuple)) and len(data) == 2:
            lo, hi = data
            for v in (lo, hi):
                if v is not None and (isinstance(v, bool) or not isinstance(v, int)):
                    raise FactsError(f"range bounds must be integers or null, got {data!r}")
            return cls(lo, hi)
        raise FactsError(f"range must be an integer or [lo, hi], got {data!r}")

    def __str__(self) -> str:
        if self.value is not None:
            return str(self.value)
        lo = "-inf" if self.lo is None else str(self.lo)
        hi = "inf" if self.hi is None else str(self.hi)
        return f"[{lo}, {hi}]"


GENUS = IntRange(0, None)
UNBOUNDED = IntRange(None, None)


# ---------------------------------------------------------------------------
# Rule traces

RULES: dict[str, str] = {
    "generator": "declared generator facts",
    "unknot": "the unknot is slice: every invariant vanishes",
    "torus": "torus knots: tau = (p-1)(q-1)/2 = g3, epsilon = 1, first singularity at 2/p for 3 <= p < q",
    "torus-upsilon": "Upsilon of the trefoil is -1+|1-t|",
    "declared": "declared literature fact for this expression",
    "mirror": "Upsilon, tau, epsilon, sigma are homomorphisms; genera are mirror invariant",
    "reverse": "Upsilon does not depend on the orientation of the knot",
    "sum": "Upsilon is a homomorphism: connected sum adds Upsilon, tau, sigma",
    "sum-genus": "4-genus and crosscap number are subadditive under connected sum",
    "sum-gc": "heuristic outside the Upsilon axioms: concordance genus assumed subadditive",
    "sum-first-singularity": "a summand that is linear past the other's first singularity does not move it",
    "whitehead": "Upsilon of Wh+-_k(K) is determined by k versus 2 tau(K); the pattern bounds a genus one surface",
    "whitehead-slice": "untwisted Whitehead doubles have trivial Alexander polynomial",
    "gen-whitehead": "Upsilon of D_{J,s}(K,k) by the three-case split on s versus 2 tau(J) and k versus 2 tau(K)",
    "pattern-tau": "declared tau shift of the pattern: tau(P(K)) = tau(K) + dtau",
    "mazur-tau": "tau(M(K)) = tau(K) + 1 when tau(K) > 0",
    "pattern-sandwich": "r positive crossing changes: |Upsilon_K(t) - Upsilon_P(K)(t)| <= r t for 0 <= t <= 1",
    "pattern-first-singularity": "P(K) has its first singularity in (0, t0] when the slope change at t0 is positive",
    "crosscap": "|upsilon - sigma/2| <= gamma4",
    "epsilon-default": "tau = g4 > 0 forces epsilon = 1 (mirrored for tau < 0)",
    "epsilon-zero": "epsilon = 0 forces tau = 0",
    "exact-upsilon": "tau is minus the slope at 0; upsilon = Upsilon(1); first singularity read off",
    "genus-chain": "|tau| <= g4 <= gc <= g3",
    "upsilon-g4": "|Upsilon(t)| <= t g4 on [0, 1], so |upsilon| <= g4",
    "upsilon-gc": "every slope of Upsilon is at most gc",
    "gc-window": "singularities lie in [1/gc, (2gc-1)/gc]",
    "envelope-upsilon": "upsilon bounded by an envelope valid at t = 1",
    "slice-signature": "topologically slice knots have vanishing signature",
    "nontorsion": "a nonzero homomorphic invariant makes the class non-torsion",
    "cable-identity": "a (1, q) cable is the companion itself",
    "cable-tau": "tau(K_{p,q}) from epsilon(K): p tau + (p-1)(q-+1)/2, or tau(T_{p,q}) when epsilon = 0",
    "cable-sigma": "sigma_w(K_{p,q}) = sigma_{w^p}(K) + sigma_w(T_{p,q}) at w = -1",
    "cable-slice": "a (p, +-1) cable of a topologically slice knot is topologically slice",
    "chen": "Upsilon_K(pt) - (p-1)(q+1)t/2 <= Upsilon_{K_{p,q}}(t) <= Upsilon_K(pt) - (p-1)(q-1)t/2 on [0, 2/p]",
    "cable-g4": "p parallel copies band-summed together: g4(K_{p,1}) <= p g4(K)",
    "cable-gc": "gc(K_{p,1}) <= p gc(K)",
    "cable-gamma4": "the (2n,1) cabling pattern reduces by non-orientable band moves: gamma4(K_{2n,1}) <= n",
    "cable-g4-equal": "tau(K) = g4(K) > 0 gives g4(K_{p,1}) = tau(K_{p,1}) = p tau(K)",
    "cable-gc-equal": "tau(K) = gc(K) > 0 gives gc(K_{p,1}) = tau(K_{p,1}) = p tau(K)",
    "fs-cable": "tau(K) != 0: first singularity of K_{p,q} in (0, 2/p]",
    "fs-cable-window": "first singularity of K in the hypothesis window: K_{p,q} singular in (0, 2|tau|/(2p|tau|-(p-1))]",
    "fs-cable-simple": "Upsilon-simple K: K_{p,q} singular in (0, 2|tau|/(2p|tau|-(p-1))]",
    "fs-cable-sharp": "Upsilon-simple K with g4 = tau > 0: first singularity of K_{p,1} in [1/p, 2tau/(2p tau-(p-1))]",
    "fs-cable-small": "tau(K) = 0 != upsilon(K): first singularity of K_{p,q} in (0, 1/p)",
    "fs-cable-none": "no first-singularity rule applies",
    "lambda": "lambda_t(K) = dU'(t)/(2q) for odd numerator, dU'(t)/q for even numerator",
    "triangular": "distinct first singularities ordered so each is not a singularity of earlier members",
    "summand": "each lambda_i(K_i) is +-1: the family spans a free direct summand",
    "window-exhaustion": "every admissible (t, slope change) in the window gives lambda = +-1",
    "pattern-pair": "{K, P(K)} independent: r != 0, alpha != n tau, t0 r not even, gcd(r, tau) = 1",
    "torus-convexity": "Upsilon of a torus knot is convex, so |alpha| < tau",
    "cable-signature-route": "sigma(K_{p,q}) = sigma(T_{p,q}) != 0 for topologically slice K",
    "greedy-iterated-cable": "choose p_i with 2/p_i below the certified lower end of the previous window",
    "jn-construction": "J_n = 2nK # -K_{2n,1}",
}


@dataclass(frozen=True)
class TraceEntry:
    rule: str
    subject: str
    inputs: tuple = ()
    conclusion: str = ""

    @property
    def reference(self) -> str:
        return RULES.get(self.rule, self.rule)

    def to_json(self) -> dict:
        return {"rule": self.rule, "reference": self.reference, "subject": self.subject,
                "inputs": {k: v for k, v in self.inputs}, "conclusion": self.conclusion}

    @classmethod
    def from_json(cls, data: dict) -> "TraceEntry":
        return cls(data["rule"], data.get("subject", ""),
                   tuple(sorted((str(k), str(v)) for k, v in data.get("inputs", {}).items())),
                   data.get("conclusion", ""))


def trace(rule: str, subject: str, conclusion: str, **inputs) -> TraceEntry:
    return TraceEntry(rule, subject, tuple(sorted((k, str(v)) for k, v in inputs.items())), conclusion)


# ---------------------------------------------------------------------------
# Declared facts


@dataclass(frozen=True)
class GeneratorFacts:
    """Facts declared for a generator name or for a specific expression."""

    name: str
    tau: int | None = None
    epsilon: int | None = None
    sigma: int | None = None
    g3: IntRange | None = None
    g4: IntRange | None = None
    gc: IntRange | None = None
    gamma4: IntRange | None = None
    top_slice: bool = False
    nontorsion: bool | None = None
    upsilon: PLFunction | None = None
    first_singularity: Location | None = None
    alpha: int | None = None

    def check(self) -> None:
        """Raise :class:`FactsError` naming the first violated invariant."""
        n = self.name

        def fail(msg, axiom):
            raise FactsError(msg, axiom, n)

        if self.epsilon is not None and self.epsilon not in (-1, 0, 1):
            fail(f"epsilon must be -1, 0 or 1, got {self.epsilon}", "epsilon-range")
        if self.epsilon == 0 and self.tau not in (None, 0):
            fail("epsilon = 0 forces tau = 0", "epsilon-zero")
        if self.sigma is not None and self.sigma % 2:
            fail(f"signature must be even, got {self.sigma}", "signature-parity")
        if self.top_slice and self.sigma not in (None, 0):
            fail(f"topologically slice knot with sigma = {self.sigma}", "slice-signature")
        for label in ("g3", "g4", "gc", "gamma4"):
            r = getattr(self, label)
            if r is None:
                continue
            if r.is_empty:
                fail(f"{label} range {r} is empty", "range")
            if r.lo is not None and r.lo < 0:
                fail(f"{label} cannot be negative", "range")
        g4 = self.g4 or GENUS
        gc = self.gc or GENUS
        g3 = self.g3 or GENUS
        if self.tau is not None and g4.hi is not None and abs(self.tau) > g4.hi:
            fail(f"|tau| = {abs(self.tau)} exceeds g4 <= {g4.hi}", "tau-g4-bound")
        if g4.lo is not None and gc.hi is not None and g4.lo > gc.hi:
            fail("g4 lower bound exceeds gc upper bound", "genus-chain")
        if gc.lo is not None and g3.hi is not None and gc.lo > g3.hi:
            fail("gc lower bound exceeds g3 upper bound", "genus-chain")
        if self.first_singularity is not None:
            iv = as_interval(self.first_singularity)
            if not iv.is_subset(Interval.left_open(0, 1)):
                fail(f"first singularity {format_location(self.first_singularity)} not in (0, 1]",
                     "first-singularity-range")
        if self.upsilon is not None:
            report = validate_candidate(self.upsilon, self.tau, g4.hi, gc.hi)
            if not report.ok:
                bad = report.failures[0]
                fail(f"declared Upsilon fails {bad.axiom}: {bad.detail}", bad.axiom)
            u = self.upsilon
            first = u.breakpoints[0] if u.breakpoints else None
            if self.first_singularity is not None:
                if first is None or not as_interval(self.first_singularity).contains(first):
                    fail("first singularity disagrees with declared Upsilon", "first-singularity")
            if self.alpha is not None and (first is None or u.slope_after(first) != self.alpha):
                fail("alpha disagrees with declared Upsilon", "alpha")


# ---------------------------------------------------------------------------
# Derived facts


@dataclass(frozen=True)
class KnotFacts:
    """Best-known invariants of one knot expression, with the rules that produced them."""

    subject: str = ""
    tau: int | None = None
    tau_cases: frozenset | None = None
    epsilon: int | None = None
    sigma: int | None = None
    upsilon: PLFunction | Envelope | None = None
    upsilon_at_1: IntRange = UNBOUNDED
    g3: IntRange = GENUS
    g4: IntRange = GENUS
    gc: IntRange = GENUS
    gamma4: IntRange = GENUS
    first_singularity: Location | None = None
    alpha: int | None = None
    top_slice: bool = False
    nontorsion: bool | None = None
    trace: tuple = ()

    @property
    def exact_upsilon(self) -> PLFunction | None:
        return self.upsilon if isinstance(self.upsilon, PLFunction) else None

    @property
    def envelope(self) -> Envelope | None:
        return self.upsilon if isinstance(self.upsilon, Envelope) else None

    @property
    def upsilon_simple(self) -> bool:
        from .pl import is_upsilon_simple
        u = self.exact_upsilon
        return u is not None and is_upsilon_simple(u)

    @property
    def upsilon_value(self) -> int | None:
        return self.upsilon_at_1.value

    @property
    def first_delta(self) -> int | None:
        """Slope change at the first singularity, when determined."""
        u = self.exact_upsilon
        if u is not None:
            return u.delta_at(u.breakpoints[0]) if u.breakpoints else None
        if self.alpha is not None and self.tau is not None:
            return self.alpha + self.tau
        return None

    def with_trace(self, *entries: TraceEntry) -> "KnotFacts":
        return replace(self, trace=self.trace + tuple(entries))

    def to_json(self) -> dict:
        u = self.upsilon
        if isinstance(u, PLFunction):
            ups = {"exact": u.to_json()}
        elif isinstance(u, Envelope):
            ups = {"envelope": u.to_json()}
        else:
            ups = None
        return {
            "subject": self.subject,
            "tau": self.tau,
            "tau_cases": sorted(self.tau_cases) if self.tau_cases is not None else None,
            "epsilon": self.epsilon,
            "sigma": self.sigma,
            "upsilon": ups,
            "upsilon_at_1": self.upsilon_at_1.to_json(),
            "g3": self.g3.to_json(),
            "g4": self.g4.to_json(),
            "gc": self.gc.to_json(),
            "gamma4": self.gamma4.to_json(),
            "first_singularity": location_to_json(self.first_singularity),
            "alpha": self.alpha,
            "top_slice": self.top_slice,
            "nontorsion": self.nontorsion,
            "trace": [e.to_json() for e in self.trace],
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "KnotFacts":
        ups = data.get("upsilon")
        if ups is None:
            u = None
        elif "exact" in ups:
            u = PLFunction.from_json(ups["exact"])
        else:
            u = Envelope.from_json(ups["envelope"])
        cases = data.get("tau_cases")
        return cls(
            subject=data.get("subject", ""),
            tau=data.get("tau"),
            tau_cases=frozenset(cases) if cases is not None else None,
            epsilon=data.get("epsilon"),
            sigma=data.get("sigma"),
            upsilon=u,
            upsilon_at_1=IntRange.from_json(data.get("upsilon_at_1", [None, None])),
            g3=IntRange.from_json(data.get("g3", [0, None])),
            g4=IntRange.from_json(data.get("g4", [0, None])),
            gc=IntRange.from_json(data.get("gc", [0, None])),
            gamma4=IntRange.from_json(data.get("gamma4", [0, None])),
            first_singularity=location_from_json(data.get("first_singularity")),
            alpha=data.get("alpha"),
            top_slice=bool(data.get("top_slice", False)),
            nontorsion=data.get("nontorsion"),
            trace=tuple(TraceEntry.from_json(e) for e in data.get("trace", ())),
        )

    def summary_lines(self) -> list[str]:
        u = self.upsilon
        if isinstance(u, PLFunction):
            ups = u.describe()
        elif isinstance(u, Envelope):
            ups = u.describe()
        else:
            ups = "unknown"
        tau = str(self.tau) if self.tau is not None else (
            f"one of {sorted(self.tau_cases)}" if self.tau_cases else "unknown")

        def opt(x):
            return "unknown" if x is None else str(x)

        return [
            f"knot: {self.subject}",
            f"tau: {tau}",
            f"epsilon: {opt(self.epsilon)}",
            f"sigma: {opt(self.sigma)}",
            f"Upsilon: {ups}",
            f"upsilon: {self.upsilon_at_1}",
            f"g3: {self.g3}",
            f"g4: {self.g4}",
            f"gc: {self.gc}",
            f"gamma4: {self.gamma4}",
            f"first singularity: {format_location(self.first_singularity)}",
            f"alpha: {opt(self.alpha)}",
            f"topologically slice: {'yes' if self.top_slice else 'not established'}",
        ]


# ---------------------------------------------------------------------------
# Facts files

_RECORD_KEYS = {f.name for f in fields(GeneratorFacts)} | {"expr", "note"}


def _record(data: Mapping[str, Any], *, expression: bool) -> GeneratorFacts:
    if not isinstance(data, Mapping):
        raise FactsError(f"record must be an object, got {type(data).__name__}")
    unknown = set(data) - _RECORD_KEYS
    label = data.get("expr") if expression else data.get("name")
    if unknown:
        raise FactsError(f"unknown fields {sorted(unknown)}", record=label)
    if expression:
        if not isinstance(data.get("expr"), str):
            raise FactsError("expression record needs an 'expr' string")
        try:
            name = to_text(parse_expr(data["expr"]))
        except (ParseError, SemanticError) as exc:
            raise FactsError(f"bad expression: {exc}", record=data["expr"]) from None
    else:
        name = data.get("name")
        if not isinstance(name, str) or not name:
            raise FactsError("generator record needs a non-empty 'name'")
        try:
            parsed = parse_expr(name)
        except (ParseError, SemanticError):
            parsed = None
        from .expr import Generator
        if not isinstance(parsed, Generator):
            raise FactsError("generator names must be plain identifiers", record=name)

    def integer(key):
        v = data.get(key)
        if v is None:
            return None
        if isinstance(v, bool) or not isinstance(v, int):
            raise FactsError(f"{key} must be an integer, got {v!r}", record=name)
        return v

    def rng(key):
        v = data.get(key)
        return None if v is None else IntRange.from_json(v)

    try:
        ups = data.get("upsilon")
        upsilon = None if ups is None else PLFunction.from_json(ups)
        first = location_from_json(data.get("first_singularity"))
    except (ValueError, TypeError, KeyError) as exc:
        raise FactsError(f"malformed rational data: {exc}", record=name) from None
    try:
        rec = GeneratorFacts(
            name=name,
            tau=integer("tau"),
            epsilon=integer("epsilon"),
            sigma=integer("sigma"),
            g3=rng("g3"), g4=rng("g4"), gc=rng("gc"), gamma4=rng("gamma4"),
            top_slice=bool(data.get("top_slice", False)),
            nontorsion=data.get("nontorsion"),
            upsilon=upsilon,
            first_singularity=first,
            alpha=integer("alpha"),
        )
    except FactsError as exc:
        raise FactsError(str(exc), exc.axiom, name) from None
    rec.check()
    return rec


@dataclass(frozen=True)
class FactTable:
    generators: Mapping[str, GeneratorFacts] = field(default_factory=dict)
    expressions: Mapping[str, GeneratorFacts] = field(default_factory=dict)

    def merged(self, other: "FactTable") -> "FactTable":
        return FactTable({**self.generators, **other.generators},
                         {**self.expressions, **other.expressions})

    def with_expression(self, rec: GeneratorFacts) -> "FactTable":
        return FactTable(self.generators, {**self.expressions, rec.name: rec})

    def to_json(self) -> dict:
        return {"generators": [generator_to_json(g) for _, g in sorted(self.generators.items())],
                "expressions": [generator_to_json(g, expression=True)
                                for _, g in sorted(self.expressions.items())]}


def generator_to_json(g: GeneratorFacts, expression: bool = False) -> dict:
    out: dict[str, Any] = {"expr" if expression else "name": g.name}
    for key in ("tau", "epsilon", "sigma", "alpha", "nontorsion"):
        v = getattr(g, key)
        if v is not None:
            out[key] = v
    for key in ("g3", "g4", "gc", "gamma4"):
        v = getattr(g, key)
        if v is not None:
            out[key] = v.to_json()
    if g.top_slice:
        out["top_slice"] = True
    if g.upsilon is not None:
        out["upsilon"] = g.upsilon.to_json()
    if g.first_singularity is not None:
        out["first_singularity"] = location_to_json(g.first_singularity)
    return out


def load_facts(document) -> FactTable:
    """Validate and load a facts document.

    ``document`` is JSON text, a parsed list of generator records, or an object
    with ``generators`` and ``expressions`` lists.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise FactsError(f"malformed JSON: {exc}") from None
    if isinstance(document, list):
        gens, exprs = document, []
    elif isinstance(document, Mapping):
        extra = set(document) - {"generators", "expressions", "note"}
        if extra:
            raise FactsError(f"unknown top-level keys {sorted(extra)}")
        gens = document.get("generators", [])
        exprs = document.get("expressions", [])
        if not isinstance(gens, list) or not isinstance(exprs, list):
            raise FactsError("'generators' and 'expressions' must be lists")
    else:
        raise FactsError("facts document must be a list or an object")
    table_g: dict[str, GeneratorFacts] = {}
    for d in gens:
        rec = _record(d, expression=False)
        if rec.name in table_g:
            raise FactsError("duplicate generator", record=rec.name)
        table_g[rec.name] = rec
    table_e: dict[str, GeneratorFacts] = {}
    for d in exprs:
        rec = _record(d, expression=True)
        if rec.name in table_e:
            raise FactsError("duplicate expression record", record=rec.name)
        table_e[rec.name] = rec
    return FactTable(table_g, table_e)


def load_facts_file(path: str | Path) -> FactTable:
    return load_facts(Path(path).read_text())


def bundled_facts(name: str = "base.json") -> FactTable:
    """Facts files shipped in ``upsilon/data``."""
    from importlib.resources import files
    return load_facts((files("upsilon") / "data" / name).read_text())


def save_report(report) -> str:
    """Serialize a report object (anything with ``to_json``) deterministically."""
    data = report.to_json() if hasattr(report, "to_json") else report
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def load_report(text: str):
    data = json.loads(text)
    kind = data.get("kind")
    if kind == "facts":
        return KnotFacts.from_json(data["facts"])
    if kind == "independence":
        from .independence import IndependenceReport
        return IndependenceReport.from_json(data)
    if kind == "decision":
        from .independence import Decision
        return Decision.from_json(data)
    if kind == "validation":
        return data
    raise FactsError(f"unknown report kind {kind!r}")


def facts_report(f: KnotFacts) -> dict:
    return {"kind": "facts", "facts": f.to_json()}
