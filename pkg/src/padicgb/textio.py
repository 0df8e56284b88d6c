"""Input files and the structured output document.

An input file looks like::

    # comment
    field: qp 5
    vars: x, y, z
    order: grevlex
    10*x
    25*x*y^2 + y^3 + z^3

Header lines are optional (``field`` may omit ``p`` when it is given on the
command line; without ``vars`` the variables are taken in order of first
appearance).  Coefficients are written with ``*``; ``O(p^n)`` (or ``O(t^n)``
over F_p((t))) adds a ball and ``t`` is the series variable.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from dataclasses import field as dc_field

from .cdvf import CdvfContext
from .errors import ParseError
from .polyring import PolyRing, Polynomial

SCHEMA = "padicgb/1"
INF = math.inf

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))")
_HEADERS = ("field", "vars", "order", "prec", "p")


@dataclass
class SystemFile:
    """A parsed input file; ``polys`` keep the coefficients exactly as written."""

    field: str | None = None
    p: int | None = None
    vars: list = dc_field(default_factory=list)
    order: str | None = None
    prec: int | None = None
    lines: list = dc_field(default_factory=list)  # (line number, text)


@dataclass
class ParsedSystem:
    ring: PolyRing
    source: list  # polynomials as written
    prec: float = INF

    @property
    def F(self):
        """The input at the requested precision (written balls are kept)."""
        if self.prec == INF:
            return list(self.source)
        return [f.truncate(self.prec) for f in self.source]


def read_header(text: str) -> SystemFile:
    sf = SystemFile()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        key, sep, rest = line.partition(":")
        key = key.strip().lower()
        if sep and key in _HEADERS:
            if sf.lines:
                raise ParseError(f"header {key!r} after the first polynomial", lineno, 1)
            after = raw[raw.index(":") + 1:]
            col = raw.index(":") + 2 + len(after) - len(after.lstrip())
            _set_header(sf, key, rest.strip(), lineno, col)
        else:
            sf.lines.append((lineno, line))
    if not sf.lines:
        raise ParseError("no polynomials in input", 1, 1)
    return sf


def _set_header(sf, key, val, lineno, col):
    try:
        if key == "field":
            parts = re.split(r"[\s(),]+", val.strip())
            parts = [x for x in parts if x]
            kind = parts[0].lower() if parts else ""
            if kind not in ("qp", "fpt"):
                raise ParseError(f"unknown field {val!r} (expected qp or fpt)", lineno, col)
            sf.field = kind
            if len(parts) > 1:
                sf.p = int(parts[1])
        elif key == "vars":
            names = [v for v in re.split(r"[\s,]+", val) if v]
            for v in names:
                if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v):
                    raise ParseError(f"bad variable name {v!r}", lineno, col)
            if len(set(names)) != len(names):
                raise ParseError("repeated variable name", lineno, col)
            sf.vars = names
        elif key == "order":
            if val not in ("grevlex", "lex"):
                raise ParseError(f"unknown order {val!r}", lineno, col)
            sf.order = val
        elif key == "prec":
            sf.prec = int(val)
        elif key == "p":
            sf.p = int(val)
    except ValueError:
        raise ParseError(f"bad value for {key}: {val!r}", lineno, col) from None


def _tokens(line, lineno):
    pos, out = 0, []
    while pos < len(line):
        if line[pos:].strip() == "":
            break
        m = _TOKEN.match(line, pos)
        if not m:
            col = pos + 1 + (len(line[pos:]) - len(line[pos:].lstrip()))
            raise ParseError(f"unexpected character {line[col - 1]!r}", lineno, col)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start + 1))
        pos = m.end()
    out.append(("end", "", len(line) + 1))
    return out


class _Parser:
    """Recursive descent over one line: sums of products of powers."""

    def __init__(self, ring, line, lineno):
        self.ring = ring
        self.ctx = ring.domain
        self.toks = _tokens(line, lineno)
        self.i = 0
        self.lineno = lineno
        self.index = {v: k for k, v in enumerate(ring.names)}

    def err(self, msg, tok=None):
        tok = tok or self.toks[self.i]
        return ParseError(msg, self.lineno, tok[2])

    def peek(self):
        return self.toks[self.i]

    def take(self, value=None):
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            raise self.err(f"expected {value!r}, found {tok[1] or 'end of line'!r}")
        self.i += 1
        return tok

    def parse(self):
        f = self.expr()
        if self.peek()[0] != "end":
            raise self.err(f"unexpected {self.peek()[1]!r}")
        return f

    def expr(self):
        f = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            g = self.term()
            f = f + g if op == "+" else f - g
        return f

    def term(self):
        f = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()
            g = self.unary()
            if op[1] == "*":
                f = f * g
            else:
                c = self._constant(g, op, "division by a non-constant")
                if c.is_zero() or not c.is_certified_nonzero():
                    raise self.err("division by zero", op)
                f = f.scale(self.ctx.one() / c)
        return f

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return -self.unary()
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        f = self.atom()
        if self.peek()[1] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "num":
                raise self.err("exponent must be a non-negative integer", tok)
            f = f ** int(tok[1])
        return f

    def atom(self):
        tok = self.peek()
        kind, val = tok[0], tok[1]
        ring = self.ring
        zero = (0,) * ring.nvars
        if kind == "num":
            self.take()
            n = int(val)
            c = self.ctx.exact(n) if self.ctx.is_padic else self.ctx.exact((n % self.ctx.p,))
            return ring.monomial(zero, c)
        if kind == "name":
            self.take()
            if val in self.index:
                e = [0] * ring.nvars
                e[self.index[val]] = 1
                return ring.monomial(tuple(e))
            if val == "O" and self.peek()[1] == "(":
                self.take("(")
                arg = self.expr()
                self.take(")")
                c = self._constant(arg, tok, "O(...) needs a power of the uniformizer")
                v = c.valuation()
                if v == INF or v is None or c.unit != self.ctx.uniformizer_power(v).unit:
                    raise self.err("O(...) needs a power of the uniformizer", tok)
                return ring.monomial(zero, self.ctx.big_oh(v))
            if val == self.ctx.symbol and not self.ctx.is_padic:
                return ring.monomial(zero, self.ctx.uniformizer_power(1))
            raise self.err(f"unknown variable {val!r}", tok)
        if val == "(":
            self.take()
            f = self.expr()
            self.take(")")
            return f
        raise self.err(f"unexpected {val or 'end of line'!r}", tok)

    def _constant(self, f, tok, msg):
        if not f.terms:
            return self.ctx.zero()
        if list(f.terms) != [(0,) * self.ring.nvars]:
            raise self.err(msg, tok)
        return f.terms[(0,) * self.ring.nvars]


def _infer_vars(sf, symbol):
    seen = []
    for lineno, line in sf.lines:
        for kind, val, _ in _tokens(line, lineno):
            if kind == "name" and val not in seen and val != "O" and val != symbol:
                seen.append(val)
    return seen


def parse_system(text, field=None, p=None, prec=None, order=None) -> ParsedSystem:
    """Parse an input file; explicit arguments override the header."""
    sf = read_header(text)
    kind = field or sf.field or "qp"
    p = p if p is not None else sf.p
    if p is None:
        raise ParseError("the prime p is not given (header 'field: qp 5' or --p)", 1, 1)
    try:
        ctx = CdvfContext(p, "padic" if kind == "qp" else "series")
    except ValueError as exc:
        raise ParseError(str(exc), 1, 1) from None
    names = sf.vars or _infer_vars(sf, ctx.symbol if kind == "fpt" else None)
    if not names:
        raise ParseError("no variables", sf.lines[0][0], 1)
    ring = PolyRing(len(names), names, order or sf.order or "grevlex", ctx)
    polys = []
    for lineno, line in sf.lines:
        f = _Parser(ring, line, lineno).parse()
        if not f.terms:
            raise ParseError("polynomial is zero", lineno, 1)
        polys.append(f)
    prec = prec if prec is not None else sf.prec
    return ParsedSystem(ring, polys, INF if prec is None else prec)


def read_system(path, **kw) -> ParsedSystem:
    with open(path, encoding="utf-8") as fh:
        return parse_system(fh.read(), **kw)


# --- structured output ------------------------------------------------------


def poly_to_json(f):
    return [{"monomial": list(m), **c.to_json()} for m, c in f.items()]


def poly_from_json(ring, obj):
    return Polynomial(ring, {tuple(t["monomial"]): ring.domain.from_json(t) for t in obj})


def ring_to_json(ring):
    ctx = ring.domain
    return {"field": "qp" if ctx.is_padic else "fpt", "p": ctx.p,
            "vars": list(ring.names), "order": ring.order.kind}


def ring_from_json(obj):
    ctx = CdvfContext(obj["p"], "padic" if obj["field"] == "qp" else "series")
    return PolyRing(len(obj["vars"]), obj["vars"], obj["order"], ctx)


def _num(x):
    return None if x is None or x == INF else int(x)


def result_to_json(parsed: ParsedSystem, res, method, extra=None) -> dict:
    """The self-describing document written by ``gb`` and read by ``lift``."""
    doc = {
        "schema": SCHEMA,
        "command": "gb",
        "ring": ring_to_json(parsed.ring),
        "prec": _num(parsed.prec),
        "degree_cap": res.D,
        "method": method,
        "source": [poly_to_json(f) for f in parsed.source],
        "inputs": [poly_to_json(f) for f in res.F],
        "basis": [poly_to_json(g) for g in res.G],
        "basis_text": [str(g) for g in res.G],
        "leading_monomials": [list(m) for m in res.lms],
        "M": None if res.M is None else [[poly_to_json(a) for a in row] for row in res.M],
        "report": res.report.to_json(),
        "losses": {"max": res.realized_loss, "per_coefficient": res.losses},
    }
    if extra:
        doc.update(extra)
    return doc


@dataclass
class SavedResult:
    ring: PolyRing
    prec: float
    source: list
    F: list
    G: list
    M: list | None
    bound: int | None


def result_from_json(doc) -> SavedResult:
    if doc.get("schema") != SCHEMA:
        raise ParseError(f"unsupported schema {doc.get('schema')!r}", 1, 1)
    ring = ring_from_json(doc["ring"])
    load = lambda obj: poly_from_json(ring, obj)
    M = None if doc.get("M") is None else [[load(a) for a in row] for row in doc["M"]]
    prec = INF if doc.get("prec") is None else doc["prec"]
    return SavedResult(ring, prec, [load(f) for f in doc["source"]], [load(f) for f in doc["inputs"]],
                       [load(g) for g in doc["basis"]], M, doc.get("report", {}).get("bound"))


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
