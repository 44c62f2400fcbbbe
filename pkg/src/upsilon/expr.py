"""Knot expressions: AST, parser and canonical printer.

Grammar (whitespace-insensitive)::

    expr := term { "#" term }
    term := "-" term | "(" expr ")" | "rev(" expr ")"
          | "cable(" expr "," int "," int ")"
          | "wh" ("+"|"-") "(" expr ["," "k=" int] ")"
          | "gwh(" expr "," "s=" int "," "k=" int "," "tauJ=" int ")"
          | "sat(" expr "," "r=" int "," "dtau=" int ")"
          | "mazur(" expr ")"
          | "T(" int "," int ")"
          | name

``#`` is left-associative.  ``mazur(K)`` is shorthand for a satellite with
``r=1, dtau=1`` and prints back as ``mazur(K)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd
from typing import Union


class ParseError(ValueError):
    def __init__(self, message: str, offset: int, expected=()):
        self.offset = offset
        self.expected = tuple(sorted(set(expected)))
        exp = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at byte {offset}{exp}")


class SemanticError(ValueError):
    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        where = f" at byte {offset}" if offset is not None else ""
        super().__init__(f"{message}{where}")


@dataclass(frozen=True)
class Generator:
    name: str


@dataclass(frozen=True)
class Mirror:
    child: "KnotExpr"


@dataclass(frozen=True)
class Reverse:
    child: "KnotExpr"


@dataclass(frozen=True)
class Sum:
    left: "KnotExpr"
    right: "KnotExpr"


@dataclass(frozen=True)
class Cable:
    child: "KnotExpr"
    p: int
    q: int

    def __post_init__(self):
        if self.p < 1:
            raise SemanticError(f"cable needs p >= 1, got p = {self.p}")
        if gcd(self.p, abs(self.q)) != 1:
            raise SemanticError(f"cable parameters ({self.p}, {self.q}) are not coprime")


@dataclass(frozen=True)
class WhDouble:
    child: "KnotExpr"
    sign: str
    k: int = 0

    def __post_init__(self):
        if self.sign not in ("+", "-"):
            raise SemanticError(f"clasp sign must be '+' or '-', got {self.sign!r}")


@dataclass(frozen=True)
class GenWhDouble:
    child: "KnotExpr"
    s: int
    k: int
    tauJ: int


@dataclass(frozen=True)
class PatternSat:
    child: "KnotExpr"
    r: int
    dtau: int
    pattern: str | None = None

    def __post_init__(self):
        if self.r < 1:
            raise SemanticError(f"sat needs r >= 1, got r = {self.r}")


KnotExpr = Union[Generator, Mirror, Reverse, Sum, Cable, WhDouble, GenWhDouble, PatternSat]


def mazur(child: KnotExpr) -> PatternSat:
    return PatternSat(child, 1, 1, "mazur")


def torus(p: int, q: int) -> Generator:
    return Generator(f"T({p},{q})")


_TORUS = re.compile(r"^T\((-?\d+),(-?\d+)\)$")


def torus_params(name: str) -> tuple[int, int] | None:
    m = _TORUS.match(name)
    return (int(m.group(1)), int(m.group(2))) if m else None


def connected_sum(*parts: KnotExpr) -> KnotExpr:
    if not parts:
        raise ValueError("empty connected sum")
    out = parts[0]
    for p in parts[1:]:
        out = Sum(out, p)
    return out


def summands(e: KnotExpr) -> list[KnotExpr]:
    if isinstance(e, Sum):
        return summands(e.left) + summands(e.right)
    return [e]


# ---------------------------------------------------------------------------
# Printing


def to_text(e: KnotExpr) -> str:
    if isinstance(e, Generator):
        return e.name
    if isinstance(e, Mirror):
        inner = to_text(e.child)
        return f"-({inner})" if isinstance(e.child, Sum) else f"-{inner}"
    if isinstance(e, Reverse):
        return f"rev({to_text(e.child)})"
    if isinstance(e, Sum):
        right = to_text(e.right)
        if isinstance(e.right, Sum):
            right = f"({right})"
        return f"{to_text(e.left)} # {right}"
    if isinstance(e, Cable):
        return f"cable({to_text(e.child)}, {e.p}, {e.q})"
    if isinstance(e, WhDouble):
        k = f", k={e.k}" if e.k else ""
        return f"wh{e.sign}({to_text(e.child)}{k})"
    if isinstance(e, GenWhDouble):
        return f"gwh({to_text(e.child)}, s={e.s}, k={e.k}, tauJ={e.tauJ})"
    if isinstance(e, PatternSat):
        if e.pattern == "mazur" and e.r == 1 and e.dtau == 1:
            return f"mazur({to_text(e.child)})"
        return f"sat({to_text(e.child)}, r={e.r}, dtau={e.dtau})"
    raise TypeError(f"not a knot expression: {e!r}")


# ---------------------------------------------------------------------------
# Parsing

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<punct>[#()+,=-]))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = []  # (kind, value, char offset)
        pos = 0
        while True:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos >= len(text):
                break
            m = _TOKEN.match(text, pos)
            if not m:
                raise ParseError(f"unexpected character {text[pos]!r}", self._byte(pos))
            kind = m.lastgroup
            start = m.start(kind)
            self.tokens.append((kind, m.group(kind), start))
            pos = m.end()
        self.i = 0

    def _byte(self, char_offset: int) -> int:
        return len(self.text[:char_offset].encode("utf-8"))

    def _offset(self) -> int:
        if self.i < len(self.tokens):
            return self._byte(self.tokens[self.i][2])
        return len(self.text.encode("utf-8"))

    def peek(self, k: int = 0):
        j = self.i + k
        return self.tokens[j] if j < len(self.tokens) else ("eof", "", len(self.text))

    def fail(self, expected):
        kind, value, _ = self.peek()
        got = "end of input" if kind == "eof" else repr(value)
        raise ParseError(f"unexpected {got}", self._offset(), expected)

    def at(self, value: str) -> bool:
        kind, v, _ = self.peek()
        return kind in ("punct", "name") and v == value

    def expect(self, value: str):
        if not self.at(value):
            self.fail([repr(value)])
        self.i += 1

    def integer(self) -> int:
        sign = 1
        if self.at("-") or self.at("+"):
            sign = -1 if self.peek()[1] == "-" else 1
            self.i += 1
        kind, v, _ = self.peek()
        if kind != "int":
            self.fail(["int"])
        self.i += 1
        return sign * int(v)

    def keyword_int(self, key: str) -> int:
        self.expect(key)
        self.expect("=")
        return self.integer()

    def parse(self) -> KnotExpr:
        e = self.expr()
        if self.peek()[0] != "eof":
            self.fail(["'#'", "end of input"])
        return e

    def expr(self) -> KnotExpr:
        e = self.term()
        while self.at("#"):
            self.i += 1
            e = Sum(e, self.term())
        return e

    def _semantic(self, build, offset):
        try:
            return build()
        except SemanticError as exc:
            raise SemanticError(str(exc), offset) from None

    def term(self) -> KnotExpr:
        kind, v, _ = self.peek()
        start = self._offset()
        if kind == "punct" and v == "-":
            self.i += 1
            return Mirror(self.term())
        if kind == "punct" and v == "(":
            self.i += 1
            e = self.expr()
            self.expect(")")
            return e
        if kind != "name":
            self.fail(["'-'", "'('", "name", "'T('", "'cable('", "'wh+('", "'wh-('",
                       "'gwh('", "'sat('", "'mazur('", "'rev('"])
        nxt = self.peek(1)
        call = nxt[0] == "punct" and nxt[1] == "("
        if v == "wh" and nxt[0] == "punct" and nxt[1] in "+-":
            self.i += 2
            sign = nxt[1]
            self.expect("(")
            child = self.expr()
            k = 0
            if self.at(","):
                self.i += 1
                k = self.keyword_int("k")
            self.expect(")")
            return WhDouble(child, sign, k)
        if not call:
            self.i += 1
            return Generator(v)
        self.i += 2
        if v == "T":
            p = self.integer()
            self.expect(",")
            q = self.integer()
            self.expect(")")
            if p == 0 or q == 0 or gcd(abs(p), abs(q)) != 1:
                raise SemanticError(f"T({p},{q}) is not a knot (parameters must be coprime)", start)
            return torus(p, q)
        if v == "rev":
            child = self.expr()
            self.expect(")")
            return Reverse(child)
        if v == "mazur":
            child = self.expr()
            self.expect(")")
            return mazur(child)
        if v == "cable":
            child = self.expr()
            self.expect(",")
            p = self.integer()
            self.expect(",")
            q = self.integer()
            self.expect(")")
            return self._semantic(lambda: Cable(child, p, q), start)
        if v == "gwh":
            child = self.expr()
            self.expect(",")
            s = self.keyword_int("s")
            self.expect(",")
            k = self.keyword_int("k")
            self.expect(",")
            tau_j = self.keyword_int("tauJ")
            self.expect(")")
            return GenWhDouble(child, s, k, tau_j)
        if v == "sat":
            child = self.expr()
            self.expect(",")
            r = self.keyword_int("r")
            self.expect(",")
            dtau = self.keyword_int("dtau")
            self.expect(")")
            return self._semantic(lambda: PatternSat(child, r, dtau), start)
        raise ParseError(f"unknown operator {v!r}", start,
                         ["'T('", "'cable('", "'gwh('", "'sat('", "'mazur('", "'rev('"])


def parse_expr(text: str) -> KnotExpr:
    """Parse a knot expression; raises :class:`ParseError` or :class:`SemanticError`."""
    return _Parser(text).parse()


def canonical(text: str) -> str:
    return to_text(parse_expr(text))
