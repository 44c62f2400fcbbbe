"""Exact piecewise-linear calculus on [0, 2].

Every quantity here is a :class:`fractions.Fraction` (or an ``int``); there
is no floating point and no tolerance anywhere.  A :class:`PLFunction` is
stored as its value at ``t = 0`` plus the integer slope of each segment, so
continuity holds by construction and values at breakpoints are derived.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Union

Rational = Fraction
RationalLike = Union[int, Fraction, str]

ZERO = Fraction(0)
ONE = Fraction(1)
TWO = Fraction(2)


class DomainError(ValueError):
    """Raised when a point lies outside [0, 2]."""


class InadmissibleSlopeChange(ValueError):
    """A slope change that no Upsilon function can exhibit."""


def as_rational(x: RationalLike) -> Fraction:
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse ``"num/den"`` or ``"num"``; decimal points are rejected."""
    s = text.strip()
    if "." in s or "e" in s.lower():
        raise ValueError(f"not an exact rational: {text!r}")
    num, sep, den = s.partition("/")
    try:
        if sep:
            return Fraction(int(num), int(den))
        return Fraction(int(num))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an exact rational: {text!r}") from exc


def format_rational(x: RationalLike) -> str:
    x = as_rational(x)
    return f"{x.numerator}/{x.denominator}"


def _short(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# Intervals


@dataclass(frozen=True)
class Interval:
    """A bounded interval of rationals with explicit endpoint flags."""

    lo: Fraction
    hi: Fraction
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "lo", as_rational(self.lo))
        object.__setattr__(self, "hi", as_rational(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval: lo={self.lo} > hi={self.hi}")
        if self.lo == self.hi and not (self.lo_closed and self.hi_closed):
            raise ValueError("a degenerate interval must be closed at both ends")

    @classmethod
    def closed(cls, lo: RationalLike, hi: RationalLike) -> "Interval":
        return cls(as_rational(lo), as_rational(hi), True, True)

    @classmethod
    def open(cls, lo: RationalLike, hi: RationalLike) -> "Interval":
        return cls(as_rational(lo), as_rational(hi), False, False)

    @classmethod
    def left_open(cls, lo: RationalLike, hi: RationalLike) -> "Interval":
        """``(lo, hi]``"""
        return cls(as_rational(lo), as_rational(hi), False, True)

    @classmethod
    def right_open(cls, lo: RationalLike, hi: RationalLike) -> "Interval":
        """``[lo, hi)``"""
        return cls(as_rational(lo), as_rational(hi), True, False)

    @classmethod
    def point(cls, x: RationalLike) -> "Interval":
        x = as_rational(x)
        return cls(x, x, True, True)

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x: RationalLike) -> bool:
        x = as_rational(x)
        above = x > self.lo or (self.lo_closed and x == self.lo)
        below = x < self.hi or (self.hi_closed and x == self.hi)
        return above and below

    __contains__ = contains

    def is_subset(self, other: "Interval") -> bool:
        lo_ok = self.lo > other.lo or (
            self.lo == other.lo and (other.lo_closed or not self.lo_closed))
        hi_ok = self.hi < other.hi or (
            self.hi == other.hi and (other.hi_closed or not self.hi_closed))
        return lo_ok and hi_ok

    def intersect(self, other: "Interval") -> "Interval | None":
        if self.lo > other.lo:
            lo, lo_closed = self.lo, self.lo_closed
        elif self.lo < other.lo:
            lo, lo_closed = other.lo, other.lo_closed
        else:
            lo, lo_closed = self.lo, self.lo_closed and other.lo_closed
        if self.hi < other.hi:
            hi, hi_closed = self.hi, self.hi_closed
        elif self.hi > other.hi:
            hi, hi_closed = other.hi, other.hi_closed
        else:
            hi, hi_closed = self.hi, self.hi_closed and other.hi_closed
        if lo > hi or (lo == hi and not (lo_closed and hi_closed)):
            return None
        return Interval(lo, hi, lo_closed, hi_closed)

    def strictly_below(self, other: "Interval") -> bool:
        """Every point of ``self`` is numerically smaller than ``other.lo``.

        Endpoints that merely touch never count, whatever their flags.
        """
        return self.hi < other.lo

    def __str__(self) -> str:
        if self.is_point:
            return "{" + _short(self.lo) + "}"
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{_short(self.lo)}, {_short(self.hi)}{right}"

    def to_json(self) -> dict:
        return {
            "lo": format_rational(self.lo),
            "hi": format_rational(self.hi),
            "lo_closed": self.lo_closed,
            "hi_closed": self.hi_closed,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Interval":
        return cls(parse_rational(data["lo"]), parse_rational(data["hi"]),
                   bool(data.get("lo_closed", True)), bool(data.get("hi_closed", True)))


Location = Union[Fraction, Interval]


def as_interval(loc: Location) -> Interval:
    return loc if isinstance(loc, Interval) else Interval.point(loc)


def simplify_location(iv: Interval) -> Location:
    return iv.lo if iv.is_point else iv


def location_to_json(loc: Location | None):
    if loc is None:
        return None
    if isinstance(loc, Interval):
        return loc.to_json()
    return format_rational(loc)


def location_from_json(data) -> Location | None:
    if data is None:
        return None
    if isinstance(data, dict):
        return simplify_location(Interval.from_json(data))
    return as_rational(data)


def format_location(loc: Location | None) -> str:
    if loc is None:
        return "unknown"
    if isinstance(loc, Interval):
        return str(loc)
    return _short(loc)


# ---------------------------------------------------------------------------
# Piecewise-linear functions


@dataclass(frozen=True)
class SlopeChange:
    t: Fraction
    before: int
    after: int

    @property
    def delta(self) -> int:
        return self.after - self.before


@dataclass(frozen=True)
class PLFunction:
    """Continuous piecewise-linear function on [0, 2] with integer slopes.

    ``slopes[i]`` is the slope on the ``i``-th segment of the partition
    induced by ``breakpoints``; ``anchor`` is the value at ``t = 0``.
    Construction canonicalizes: breakpoints separating equal slopes are
    dropped, so two functions are equal iff they agree pointwise.
    """

    breakpoints: tuple = ()
    slopes: tuple = (0,)
    anchor: Fraction = ZERO

    def __post_init__(self):
        bps = tuple(as_rational(b) for b in self.breakpoints)
        slopes = tuple(self.slopes)
        for s in slopes:
            if isinstance(s, bool) or not isinstance(s, int):
                if isinstance(s, Fraction) and s.denominator == 1:
                    continue
                raise TypeError(f"slopes must be integers, got {s!r}")
        slopes = tuple(int(s) for s in slopes)
        if len(slopes) != len(bps) + 1:
            raise ValueError("need exactly one slope per segment")
        for a, b in zip(bps, bps[1:]):
            if not a < b:
                raise ValueError("breakpoints must be strictly increasing")
        if bps and not (ZERO < bps[0] and bps[-1] < TWO):
            raise ValueError("breakpoints must lie in the open interval (0, 2)")
        kept_bps, kept_slopes = [], [slopes[0]]
        for b, s in zip(bps, slopes[1:]):
            if s != kept_slopes[-1]:
                kept_bps.append(b)
                kept_slopes.append(s)
        object.__setattr__(self, "breakpoints", tuple(kept_bps))
        object.__setattr__(self, "slopes", tuple(kept_slopes))
        object.__setattr__(self, "anchor", as_rational(self.anchor))

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls) -> "PLFunction":
        return cls((), (0,), ZERO)

    @classmethod
    def linear(cls, slope: int, anchor: RationalLike = 0) -> "PLFunction":
        return cls((), (slope,), as_rational(anchor))

    @classmethod
    def from_pieces(cls, pieces: Iterable[tuple[RationalLike, int]],
                    anchor: RationalLike = 0) -> "PLFunction":
        """Build from ``[(0, s0), (t1, s1), ...]`` pairs of (start, slope)."""
        pieces = [(as_rational(t), s) for t, s in pieces]
        if not pieces or pieces[0][0] != 0:
            raise ValueError("first piece must start at t = 0")
        return cls(tuple(t for t, _ in pieces[1:]), tuple(s for _, s in pieces), anchor)

    # -- evaluation -------------------------------------------------------

    def _segment(self, t: Fraction) -> int:
        """Index of the segment containing ``t`` (right-continuous)."""
        i = 0
        for b in self.breakpoints:
            if t >= b:
                i += 1
            else:
                break
        return i

    def __call__(self, t: RationalLike) -> Fraction:
        t = as_rational(t)
        if not ZERO <= t <= TWO:
            raise DomainError(f"t = {t} is outside [0, 2]")
        value, start = self.anchor, ZERO
        for b, s in zip(self.breakpoints, self.slopes):
            if t <= b:
                return value + s * (t - start)
            value += s * (b - start)
            start = b
        return value + self.slopes[-1] * (t - start)

    def slope_after(self, t: RationalLike) -> int:
        """Slope on ``(t, t + eps)``."""
        return self.slopes[self._segment(as_rational(t))]

    def slope_before(self, t: RationalLike) -> int:
        """Slope on ``(t - eps, t)``."""
        t = as_rational(t)
        i = 0
        for b in self.breakpoints:
            if t > b:
                i += 1
        return self.slopes[i]

    def delta_at(self, t: RationalLike) -> int:
        t = as_rational(t)
        if t in self.breakpoints:
            return self.slope_after(t) - self.slope_before(t)
        return 0

    @property
    def initial_slope(self) -> int:
        return self.slopes[0]

    @property
    def is_zero(self) -> bool:
        return not self.breakpoints and self.slopes == (0,) and self.anchor == 0

    def knots(self) -> tuple:
        """Breakpoints together with the domain ends 0 and 2."""
        return (ZERO,) + self.breakpoints + (TWO,)

    # -- algebra ----------------------------------------------------------

    def _combine(self, other: "PLFunction", op) -> "PLFunction":
        merged = sorted(set(self.breakpoints) | set(other.breakpoints))
        starts = [ZERO] + merged
        slopes = tuple(op(self.slope_after(s), other.slope_after(s)) for s in starts)
        return PLFunction(tuple(merged), slopes, op(self.anchor, other.anchor))

    def __add__(self, other: "PLFunction") -> "PLFunction":
        if not isinstance(other, PLFunction):
            return NotImplemented
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other: "PLFunction") -> "PLFunction":
        if not isinstance(other, PLFunction):
            return NotImplemented
        return self._combine(other, lambda a, b: a - b)

    def __neg__(self) -> "PLFunction":
        return PLFunction(self.breakpoints, tuple(-s for s in self.slopes), -self.anchor)

    def __mul__(self, n: int) -> "PLFunction":
        if isinstance(n, bool) or not isinstance(n, int):
            return NotImplemented
        if n == 0:
            return PLFunction.zero()
        return PLFunction(self.breakpoints, tuple(n * s for s in self.slopes), n * self.anchor)

    __rmul__ = __mul__

    def minus_linear(self, c: int) -> "PLFunction":
        """``t -> f(t) - c*t``"""
        return PLFunction(self.breakpoints, tuple(s - c for s in self.slopes), self.anchor)

    def rescaled(self, p: int) -> "PLFunction":
        """``t -> f(p*t)`` on [0, 2/p], continued linearly up to 2.

        Only the restriction to [0, 2/p] has meaning; the continuation keeps
        the value a total function on [0, 2].
        """
        if p < 1:
            raise ValueError("p must be a positive integer")
        bps = tuple(b / p for b in self.breakpoints)
        return PLFunction(bps, tuple(p * s for s in self.slopes), self.anchor)

    # -- presentation -----------------------------------------------------

    def pieces(self) -> list:
        return [(ZERO, self.slopes[0])] + list(zip(self.breakpoints, self.slopes[1:]))

    def to_json(self) -> dict:
        return {
            "anchor": format_rational(self.anchor),
            "pieces": [[format_rational(t), s] for t, s in self.pieces()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PLFunction":
        if not isinstance(data, dict) or "pieces" not in data:
            raise ValueError("PL function document needs 'pieces'")
        anchor = parse_rational(str(data.get("anchor", "0/1")))
        pieces = []
        for entry in data["pieces"]:
            t, s = entry
            if isinstance(s, bool) or not isinstance(s, int):
                raise ValueError(f"slope {s!r} is not an integer")
            pieces.append((parse_rational(str(t)), s))
        return cls.from_pieces(pieces, anchor)

    def describe(self) -> str:
        if self.is_zero:
            return "0"
        if self.anchor == 0 and len(self.breakpoints) == 1 and self.breakpoints[0] == 1:
            a, b = self.slopes
            if b == -a:
                tau = -a
                if tau == 1:
                    return "-1+|1-t|"
                if tau == -1:
                    return "1-|1-t|"
                return f"{tau}*(-1+|1-t|)"
        parts = []
        for (start, s), end in zip(self.pieces(), self.breakpoints + (TWO,)):
            parts.append(f"slope {s} on [{_short(start)}, {_short(end)}]")
        return "; ".join(parts)

    def __str__(self) -> str:
        return self.describe()


def evaluate(f: PLFunction, t: RationalLike) -> Fraction:
    return f(t)


def add(f: PLFunction, g: PLFunction) -> PLFunction:
    return f + g


def neg(f: PLFunction) -> PLFunction:
    return -f


def scale(f: PLFunction, n: int) -> PLFunction:
    return f * n


def singularities(f: PLFunction) -> list[SlopeChange]:
    return [SlopeChange(b, f.slopes[i], f.slopes[i + 1]) for i, b in enumerate(f.breakpoints)]


def upsilon_simple(tau: int) -> PLFunction:
    """The profile ``tau * (-1 + |1 - t|)``."""
    if tau == 0:
        return PLFunction.zero()
    return PLFunction((ONE,), (-tau, tau), ZERO)


def is_upsilon_simple(f: PLFunction) -> bool:
    return f == upsilon_simple(-f.initial_slope)


# ---------------------------------------------------------------------------
# Axioms for Upsilon candidates


@dataclass(frozen=True)
class AxiomCheck:
    axiom: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple = ()

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[AxiomCheck]:
        return [c for c in self.checks if not c.passed]

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok,
                "checks": [{"axiom": c.axiom, "passed": c.passed, "detail": c.detail}
                           for c in self.checks]}


AXIOMS = (
    "symmetry",
    "integer-slopes",
    "vanishes-at-zero",
    "initial-slope",
    "even-slope-change",
    "g4-bound",
    "gc-bound",
)


def _is_even_integer(x: Fraction) -> bool:
    return x.denominator == 1 and x.numerator % 2 == 0


def validate_candidate(f: PLFunction, tau: int | None = None, g4: int | None = None,
                       gc: int | None = None) -> ValidationReport:
    """Check ``f`` against the structural axioms an Upsilon function obeys.

    Absent claims (``tau``, ``g4``, ``gc``) pass vacuously.  The genus bound
    ``|f(t)| <= t*g4`` is only checked on [0, 1]; the concordance-genus
    bound checks the largest slope.
    """
    checks = []

    points = set(f.knots())
    points |= {TWO - b for b in f.breakpoints}
    bad = sorted(x for x in points if f(x) != f(TWO - x))
    checks.append(AxiomCheck("symmetry", not bad,
                             f"f({_short(bad[0])}) != f(2-{_short(bad[0])})" if bad else ""))

    checks.append(AxiomCheck("integer-slopes", all(isinstance(s, int) for s in f.slopes)))

    checks.append(AxiomCheck("vanishes-at-zero", f.anchor == 0,
                             "" if f.anchor == 0 else f"f(0) = {_short(f.anchor)}"))

    if tau is None:
        checks.append(AxiomCheck("initial-slope", True, "no tau claimed"))
    else:
        ok = f.initial_slope == -tau
        checks.append(AxiomCheck("initial-slope", ok,
                                 "" if ok else f"slope at 0 is {f.initial_slope}, expected {-tau}"))

    odd = [c for c in singularities(f) if not _is_even_integer(c.t * c.delta)]
    checks.append(AxiomCheck(
        "even-slope-change", not odd,
        f"t*delta = {_short(odd[0].t * odd[0].delta)} at t = {_short(odd[0].t)}" if odd else ""))

    if g4 is None:
        checks.append(AxiomCheck("g4-bound", True, "no g4 claimed"))
    else:
        pts = [x for x in f.knots() if x <= ONE] + [ONE]
        worst = [x for x in pts if abs(f(x)) > x * g4]
        checks.append(AxiomCheck(
            "g4-bound", not worst,
            f"|f({_short(worst[0])})| > {_short(worst[0])}*{g4}" if worst else ""))

    if gc is None:
        checks.append(AxiomCheck("gc-bound", True, "no gc claimed"))
    else:
        s = max(f.slopes)
        checks.append(AxiomCheck("gc-bound", s <= gc,
                                 "" if s <= gc else f"max slope {s} exceeds gc = {gc}"))

    return ValidationReport(tuple(checks))


def singularity_candidates(m1: int, m2: int) -> list[Fraction]:
    """Possible locations in (0, 1] of a slope change from ``m1`` to ``m2``.

    Raises :class:`ValueError` if ``m1 == m2`` and
    :class:`InadmissibleSlopeChange` for pairs no Upsilon function realizes.
    """
    if m1 == m2:
        raise ValueError("m1 and m2 must differ")
    d = abs(m2 - m1)
    if d == 1:
        raise InadmissibleSlopeChange(f"slope change {m1} -> {m2} has |delta| = 1")
    if d == 2 and not (m2 == -m1 and abs(m1) == 1):
        raise InadmissibleSlopeChange(
            f"|delta| = 2 forces t = 1 and m2 = -m1 = +-1, got {m1} -> {m2}")
    return [Fraction(2 * k, d) for k in range(1, d // 2 + 1)]


def gc_window(gc: int) -> Interval:
    """Closed interval containing every singularity when the concordance genus is ``gc``."""
    if gc < 1:
        raise ValueError("concordance genus must be positive")
    return Interval.closed(Fraction(1, gc), Fraction(2 * gc - 1, gc))


# ---------------------------------------------------------------------------
# Envelopes


def _le_on(f: PLFunction, g: PLFunction, iv: Interval) -> bool:
    """Exact test of ``f <= g`` on the closure of ``iv``."""
    pts = {iv.lo, iv.hi}
    pts |= {b for b in f.breakpoints + g.breakpoints if iv.lo < b < iv.hi}
    return all(f(x) <= g(x) for x in pts)


@dataclass(frozen=True)
class Envelope:
    """Pointwise bounds ``lower <= Upsilon <= upper`` valid on ``valid_on``."""

    lower: PLFunction
    upper: PLFunction
    valid_on: Interval = field(default_factory=lambda: Interval.closed(0, 2))

    def is_ordered(self) -> bool:
        return _le_on(self.lower, self.upper, self.valid_on)

    def contains(self, f: PLFunction) -> bool:
        return _le_on(self.lower, f, self.valid_on) and _le_on(f, self.upper, self.valid_on)

    def bounds_at(self, t: RationalLike) -> tuple[Fraction, Fraction] | None:
        t = as_rational(t)
        if not self.valid_on.contains(t):
            return None
        return self.lower(t), self.upper(t)

    def shifted(self, f: PLFunction) -> "Envelope":
        return Envelope(self.lower + f, self.upper + f, self.valid_on)

    def __add__(self, other: "Envelope | PLFunction") -> "Envelope | None":
        if isinstance(other, PLFunction):
            return self.shifted(other)
        if not isinstance(other, Envelope):
            return NotImplemented
        dom = self.valid_on.intersect(other.valid_on)
        if dom is None:
            return None
        return Envelope(self.lower + other.lower, self.upper + other.upper, dom)

    __radd__ = __add__

    def __neg__(self) -> "Envelope":
        return Envelope(-self.upper, -self.lower, self.valid_on)

    def __mul__(self, n: int) -> "Envelope":
        if n >= 0:
            return Envelope(self.lower * n, self.upper * n, self.valid_on)
        return Envelope(self.upper * n, self.lower * n, self.valid_on)

    __rmul__ = __mul__

    def widened(self, r: int, limit: Interval | None = None) -> "Envelope | None":
        dom = self.valid_on if limit is None else self.valid_on.intersect(limit)
        if dom is None:
            return None
        return Envelope(self.lower.minus_linear(r), self.upper.minus_linear(-r), dom)

    def to_json(self) -> dict:
        return {"lower": self.lower.to_json(), "upper": self.upper.to_json(),
                "valid_on": self.valid_on.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "Envelope":
        return cls(PLFunction.from_json(data["lower"]), PLFunction.from_json(data["upper"]),
                   Interval.from_json(data["valid_on"]))

    def describe(self) -> str:
        return f"envelope [{self.lower.describe()}] <= U <= [{self.upper.describe()}] on {self.valid_on}"


def crossing_change_envelope(center: PLFunction | Envelope, r: int) -> Envelope:
    """Bounds after ``r`` crossing changes: within ``r*t`` of ``center`` on [0, 1].

    Never extrapolated to (1, 2].
    """
    if r < 0:
        raise ValueError("r must be non-negative")
    unit = Interval.closed(0, 1)
    if isinstance(center, PLFunction):
        center = Envelope(center, center, unit)
    widened = center.widened(r, unit)
    if widened is None:
        raise ValueError("envelope has no overlap with [0, 1]")
    return widened
