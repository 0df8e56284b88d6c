"""Finite-precision arithmetic in complete discrete valuation fields.

Two fields are supported: the p-adic numbers Q_p (uniformizer p) and the
Laurent series F_p((t)) (uniformizer t).  An element is either exact (a
rational number, resp. a Laurent polynomial) or an approximation
``x + O(pi^n)`` in the capped-absolute model: ``n`` is the *order* (absolute
precision) and ``x`` is known modulo ``pi^n``.

Approximations are stored in relative form ``unit * pi^val + O(pi^order)``
with ``unit`` a residue modulo ``pi^(order - val)``.  When all stored digits
vanish the element is *indistinguishable from zero*: it has an order but no
certified valuation.

Valuations are reported as ``int`` when certified, ``math.inf`` for exact
zero, and ``None`` when the element is indistinguishable from zero.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from sympy import isprime

from .errors import AmbiguousDivisor, ContextMismatch, DivisionByExactZero, ParseError

INF = math.inf


def _padic_val(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class _IntResidues:
    """Residues of Z_p modulo p^k, stored as Python ints in [0, p^k)."""

    zero = 0

    def __init__(self, p):
        self.p = p
        self._pow = [1]

    def pk(self, k):
        pw = self._pow
        while len(pw) <= k:
            pw.append(pw[-1] * self.p)
        return pw[k]

    def reduce(self, x, k):
        return x % self.pk(k)

    def add(self, a, b, k):
        return (a + b) % self.pk(k)

    def sub(self, a, b, k):
        return (a - b) % self.pk(k)

    def mul(self, a, b, k):
        return (a * b) % self.pk(k)

    def neg(self, a, k):
        return (-a) % self.pk(k)

    def inv(self, a, k):
        return pow(a, -1, self.pk(k))

    def scale(self, a, j):
        return a * self.pk(j)

    def is_zero(self, a):
        return a == 0

    def strip(self, a):
        """Split a nonzero residue as (unit, valuation)."""
        p = self.p
        v = 0
        while a % p == 0:
            a //= p
            v += 1
        return a, v

    # exact units are Fractions with numerator and denominator prime to p
    def exact_residue(self, u, k):
        m = self.pk(k)
        return u.numerator * pow(u.denominator, -1, m) % m

    def split_exact(self, x):
        """Fraction -> (unit Fraction, valuation); x must be nonzero."""
        x = Fraction(x)
        p = self.p
        num, den, v = x.numerator, x.denominator, 0
        while num % p == 0:
            num //= p
            v += 1
        while den % p == 0:
            den //= p
            v -= 1
        return Fraction(num, den), v

    def exact_value(self, u, v):
        return u * Fraction(self.p) ** v

    def exact_add(self, a, b):
        return a + b

    def exact_mul(self, a, b):
        return a * b

    def exact_div(self, a, b):
        return a / b

    def residue_value(self, r):
        return r


class _SeriesResidues:
    """Residues of F_p[[t]] modulo t^k, stored as tuples of ints mod p (low degree first)."""

    zero = ()

    def __init__(self, p):
        self.p = p

    @staticmethod
    def _trim(a):
        n = len(a)
        while n and a[n - 1] == 0:
            n -= 1
        return tuple(a[:n])

    def reduce(self, a, k):
        return self._trim(a[:k])

    def add(self, a, b, k):
        p = self.p
        n = min(max(len(a), len(b)), k)
        out = [((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)]
        return self._trim(out)

    def sub(self, a, b, k):
        return self.add(a, self.neg(b, k), k)

    def neg(self, a, k):
        p = self.p
        return self._trim([(-c) % p for c in a[:k]])

    def mul(self, a, b, k):
        p = self.p
        n = min(len(a) + len(b) - 1, k) if a and b else 0
        out = [0] * max(n, 0)
        for i, ai in enumerate(a[:n]):
            if ai:
                for j in range(min(len(b), n - i)):
                    out[i + j] += ai * b[j]
        return self._trim([c % p for c in out])

    def inv(self, a, k):
        p = self.p
        c0 = pow(a[0], -1, p)
        out = [0] * k
        for i in range(k):
            s = 1 if i == 0 else 0
            for j in range(1, min(i, len(a) - 1) + 1):
                s -= a[j] * out[i - j]
            out[i] = (s * c0) % p
        return self._trim(out)

    def scale(self, a, j):
        return (0,) * j + tuple(a) if a else ()

    def is_zero(self, a):
        return not any(a)

    def strip(self, a):
        v = 0
        while a[v] == 0:
            v += 1
        return self._trim(a[v:]), v

    def exact_residue(self, u, k):
        return self.reduce(u, k)

    def split_exact(self, x):
        x = self._trim([c % self.p for c in x])
        u, v = self.strip(x)
        return u, v

    def exact_value(self, u, v):
        return u, v

    def exact_add(self, a, b):
        return self.add(a, b, max(len(a), len(b)))

    def exact_mul(self, a, b):
        return self.mul(a, b, len(a) + len(b))

    def exact_div(self, a, b):
        if len(b) != 1:
            raise ValueError("exact quotient by a non-monomial series is not representable; "
                             "give the operands a finite precision")
        c = pow(b[0], -1, self.p)
        return self._trim([(x * c) % self.p for x in a])

    def residue_value(self, r):
        return r


class CdvfContext:
    """A finite-precision complete discrete valuation field.

    ``kind`` is ``"padic"`` for Q_p or ``"series"`` for F_p((t)).  The residue
    field is F_p in both cases and digits are taken in ``{0, ..., p-1}``.
    """

    def __init__(self, p: int, kind: str = "padic", symbol: str | None = None):
        if kind not in ("padic", "series"):
            raise ValueError(f"unknown field kind {kind!r}")
        if not isprime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.kind = kind
        self.symbol = symbol or (str(p) if kind == "padic" else "t")
        self._res = _IntResidues(p) if kind == "padic" else _SeriesResidues(p)
        self._zero = CdvfElement(self, self._res.zero, INF, INF)

    @property
    def is_padic(self):
        return self.kind == "padic"

    def __eq__(self, other):
        return isinstance(other, CdvfContext) and (self.p, self.kind) == (other.p, other.kind)

    def __hash__(self):
        return hash((self.p, self.kind))

    def __repr__(self):
        return f"CdvfContext(p={self.p}, kind={self.kind!r})"

    def __str__(self):
        return f"Q_{self.p}" if self.is_padic else f"F_{self.p}((t))"

    # --- constructors -------------------------------------------------

    def zero(self) -> CdvfElement:
        return self._zero

    def one(self) -> CdvfElement:
        return self.exact(1)

    def exact(self, value) -> CdvfElement:
        """Exact element: a rational number (p-adic) or a coefficient tuple / int (series)."""
        res = self._res
        if self.is_padic:
            value = Fraction(value)
            if value == 0:
                return self._zero
        else:
            value = (value,) if isinstance(value, int) else tuple(value)
            if res.is_zero([c % self.p for c in value]):
                return self._zero
        u, v = res.split_exact(value)
        return CdvfElement(self, u, v, INF)

    def big_oh(self, order: int) -> CdvfElement:
        """The ball ``O(pi^order)``: indistinguishable from zero."""
        return CdvfElement(self, self._res.zero, None, order)

    def from_rational(self, num: int, den: int = 1, target_order: int = 0) -> CdvfElement:
        """Expansion of ``num/den`` truncated at ``O(pi^target_order)``.

        For series fields ``num`` and ``den`` are read in F_p and give a constant.
        """
        if target_order < 0:
            raise ValueError("target order must be non-negative")
        if den == 0:
            raise DivisionByExactZero("zero denominator")
        if self.is_padic:
            return self.exact(Fraction(num, den)).truncate(target_order)
        c = (num * pow(den, -1, self.p)) % self.p
        return self.exact((c,)).truncate(target_order)

    def approx(self, value, order: int) -> CdvfElement:
        """``value + O(pi^order)`` for an int/Fraction (or coefficient tuple for series)."""
        return self.exact(value).truncate(order)

    def coerce(self, x) -> CdvfElement:
        if isinstance(x, CdvfElement):
            if x.ctx is not self and x.ctx != self:
                raise ContextMismatch(f"{x.ctx} vs {self}")
            return x
        if isinstance(x, (int, Fraction)):
            if self.is_padic:
                return self.exact(x)
            return self.exact((int(x) % self.p,)) if isinstance(x, int) else self.exact(
                (x.numerator * pow(x.denominator, -1, self.p) % self.p,))
        if isinstance(x, tuple) and not self.is_padic:
            return self.exact(x)
        raise TypeError(f"cannot coerce {type(x).__name__} into {self}")

    # --- text ---------------------------------------------------------

    _PADIC_RE = re.compile(
        r"^\s*\(?\s*(?P<val>[+-]?\s*\d+(?:\s*/\s*\d+)?)?\s*"
        r"(?:(?P<plus>\+)?\s*O\(\s*(?P<base>\d+)\s*(?:\^\s*(?P<exp>-?\d+))?\s*\))?\s*\)?\s*$")

    def parse(self, text: str) -> CdvfElement:
        """Parse ``a``, ``a/b``, ``a + O(p^n)``, ``O(p^n)``; series use polynomials in ``t``."""
        if not self.is_padic:
            return _parse_series(self, text)
        m = self._PADIC_RE.match(text)
        if not m or (m.group("val") is None and m.group("base") is None):
            raise ParseError(f"cannot parse {text!r} as an element of {self}")
        val = Fraction(m.group("val").replace(" ", "")) if m.group("val") else Fraction(0)
        if m.group("base") is None:
            return self.exact(val)
        if int(m.group("base")) != self.p:
            raise ParseError(f"O({m.group('base')}^...) does not match p={self.p}")
        if m.group("val") is not None and m.group("plus") is None:
            raise ParseError(f"missing '+' before O(...) in {text!r}")
        order = int(m.group("exp")) if m.group("exp") is not None else 1
        return self.exact(val).truncate(order)

    def from_json(self, obj) -> CdvfElement:
        order = obj.get("order")
        if self.is_padic:
            x = self.exact(Fraction(obj["value"]))
        else:
            x = self.exact(tuple(obj["value"]))
            shift = obj.get("shift", 0)
            if shift and not x.is_zero():
                x = CdvfElement(self, x.unit, x.val + shift, INF)
        return x if order is None else x.truncate(order)

    def uniformizer_power(self, k: int) -> CdvfElement:
        """Exact ``pi^k`` (``k`` may be negative)."""
        return CdvfElement(self, Fraction(1) if self.is_padic else (1,), k, INF)


_SERIES_TERM = re.compile(r"\s*([+-])?\s*(\d+)?\s*\*?\s*(t(?:\s*\^\s*(\d+))?)?\s*")


def _parse_series(ctx, text):
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    order = None
    m = re.search(r"\+?\s*O\(\s*t\s*(?:\^\s*(-?\d+))?\s*\)\s*$", s)
    if m:
        order = int(m.group(1)) if m.group(1) else 1
        s = s[:m.start()].strip()
    coeffs = {}
    pos = 0
    while pos < len(s):
        tm = _SERIES_TERM.match(s, pos)
        if not tm or tm.end() == pos or (tm.group(2) is None and tm.group(3) is None):
            raise ParseError(f"cannot parse {text!r} as an element of {ctx}")
        sign = -1 if tm.group(1) == "-" else 1
        c = int(tm.group(2)) if tm.group(2) else 1
        e = (int(tm.group(4)) if tm.group(4) else 1) if tm.group(3) else 0
        coeffs[e] = coeffs.get(e, 0) + sign * c
        pos = tm.end()
    deg = max(coeffs, default=-1)
    x = ctx.exact(tuple(coeffs.get(i, 0) % ctx.p for i in range(deg + 1))) if coeffs else ctx.zero()
    return x if order is None else x.truncate(order)


class CdvfElement:
    """An exact element or a ball ``x + O(pi^order)`` of a CDVF.

    Instances are immutable.  ``val`` is ``None`` exactly when the element is an
    approximation with every stored digit zero.
    """

    __slots__ = ("ctx", "unit", "val", "order")

    def __init__(self, ctx, unit, val, order):
        self.ctx = ctx
        self.unit = unit
        self.val = val
        self.order = order

    # --- predicates ---------------------------------------------------

    def is_exact(self) -> bool:
        return self.order == INF

    def is_zero(self) -> bool:
        """True only for the exact zero."""
        return self.val == INF

    def is_indistinguishable(self) -> bool:
        return self.val is None

    def is_certified_nonzero(self) -> bool:
        return self.val is not None and self.val != INF

    def valuation(self):
        """Certified valuation, ``math.inf`` for exact zero, ``None`` if undefined."""
        return self.val

    def _low(self):
        # lower bound for the valuation of any element of the ball
        return self.order if self.val is None else self.val

    # --- conversions --------------------------------------------------

    def truncate(self, order) -> CdvfElement:
        """Forget digits at and above ``pi^order`` (no-op when already coarser)."""
        if order >= self.order:
            return self
        ctx = self.ctx
        if self.val is None or self.val >= order:
            return CdvfElement(ctx, ctx._res.zero, None, order)
        res = ctx._res
        if self.order == INF:
            u = res.exact_residue(self.unit, order - self.val)
        else:
            u = res.reduce(self.unit, order - self.val)
        return CdvfElement(ctx, u, self.val, order)

    def lift(self, order=INF) -> CdvfElement:
        """Canonical lift: pad with zero pi-digits up to ``order`` (exact when infinite)."""
        if self.order == INF:
            return self
        if order < self.order:
            raise ValueError(f"cannot lift from order {self.order} down to {order}")
        ctx = self.ctx
        if self.val is None:
            return ctx.zero() if order == INF else CdvfElement(ctx, ctx._res.zero, None, order)
        if order == INF:
            if ctx.is_padic:
                return CdvfElement(ctx, Fraction(self.unit), self.val, INF)
            return CdvfElement(ctx, self.unit, self.val, INF)
        return CdvfElement(ctx, self.unit, self.val, order)

    def rational(self):
        """Representative value: a Fraction (p-adic) or ``(coeffs, shift)`` (series).

        For approximations the representative has its digits in ``{0..p-1}``.
        """
        ctx = self.ctx
        if self.val is None or self.val == INF:
            return Fraction(0) if ctx.is_padic else ((), 0)
        return ctx._res.exact_value(self.unit, self.val)

    def contains(self, x) -> bool:
        """Whether the exact value ``x`` lies in this ball."""
        d = self - self.ctx.coerce(x).lift()
        if self.order == INF:
            return d.is_zero()
        return d.val is None or d.val == INF or d.val >= self.order

    def agrees(self, other, order=None) -> bool:
        """Equality modulo ``pi^order`` (default: the coarser of the two orders)."""
        if order is None:
            order = min(self.order, other.order)
        d = self - other
        if order == INF:
            return d.is_zero()
        low = d._low()
        return low >= order

    # --- arithmetic ---------------------------------------------------

    def _check(self, other):
        if isinstance(other, CdvfElement):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise ContextMismatch(f"{self.ctx} vs {other.ctx}")
            return other
        return self.ctx.coerce(other)

    def __add__(self, other):
        other = self._check(other)
        return _add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        return _add(self, -other)

    def __rsub__(self, other):
        other = self._check(other)
        return _add(other, -self)

    def __neg__(self):
        if self.val is None or self.val == INF:
            return self
        ctx = self.ctx
        if self.order == INF:
            if ctx.is_padic:
                return CdvfElement(ctx, -self.unit, self.val, INF)
            return CdvfElement(ctx, ctx._res.neg(self.unit, len(self.unit)), self.val, INF)
        return CdvfElement(ctx, ctx._res.neg(self.unit, self.order - self.val), self.val, self.order)

    def __pos__(self):
        return self

    def __mul__(self, other):
        other = self._check(other)
        return _mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._check(other)
        return _div(self, other)

    def __rtruediv__(self, other):
        other = self._check(other)
        return _div(other, self)

    def __pow__(self, n: int):
        if n < 0:
            return self.ctx.one() / (self ** (-n))
        out = self.ctx.one()
        for _ in range(n):
            out = out * self
        return out

    # --- comparison / display ----------------------------------------

    def _key(self):
        return (self.unit, self.val, self.order)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.coerce(other)
        if not isinstance(other, CdvfElement):
            return NotImplemented
        return self.ctx == other.ctx and self._key() == other._key()

    def __hash__(self):
        u = self.unit
        return hash((u if not isinstance(u, list) else tuple(u), self.val, self.order))

    def __repr__(self):
        return f"CdvfElement({self})"

    def __str__(self):
        ctx = self.ctx
        if self.val == INF:
            return "0"
        if ctx.is_padic:
            big = f"O({ctx.p}^{self.order})"
            if self.val is None:
                return big
            r = self.rational()
            s = str(r)
            return s if self.order == INF else f"{s} + {big}"
        big = f"O(t^{self.order})"
        if self.val is None:
            return big
        s = _series_str(self.unit, self.val)
        return s if self.order == INF else f"{s} + {big}"

    def to_json(self):
        ctx = self.ctx
        order = None if self.order == INF else self.order
        if ctx.is_padic:
            return {"value": str(self.rational()), "order": order}
        if self.val is None or self.val == INF:
            return {"value": [], "shift": 0, "order": order}
        return {"value": list(self.unit), "shift": self.val, "order": order}


def _series_str(unit, shift):
    parts = []
    for i, c in enumerate(unit):
        if c == 0:
            continue
        e = i + shift
        if e == 0:
            parts.append(str(c))
        else:
            mono = "t" if e == 1 else f"t^{e}"
            parts.append(mono if c == 1 else f"{c}*{mono}")
    return " + ".join(parts) if parts else "0"


def _new(ctx, r, v, o):
    """Normalize residue ``r`` standing for ``r * pi^v + O(pi^o)``."""
    res = ctx._res
    if v >= o or res.is_zero(r):
        return CdvfElement(ctx, res.zero, None, o)
    u, s = res.strip(r)
    v += s
    if v >= o:
        return CdvfElement(ctx, res.zero, None, o)
    return CdvfElement(ctx, res.reduce(u, o - v), v, o)


def _add(a, b):
    if a.val == INF:
        return b
    if b.val == INF:
        return a
    ctx = a.ctx
    res = ctx._res
    if a.order == INF and b.order == INF:
        if not ctx.is_padic:
            return _exact_series_add(ctx, a, b)
        return ctx.exact(res.exact_add(res.exact_value(a.unit, a.val), res.exact_value(b.unit, b.val)))
    o = min(a.order, b.order)
    va, vb = a._low(), b._low()
    e = min(va, vb, o)
    if e >= o:
        return CdvfElement(ctx, res.zero, None, o)
    k = o - e
    total = res.zero
    for x, vx in ((a, va), (b, vb)):
        if x.val is None or vx >= o:
            continue
        if x.order == INF:
            r = res.exact_residue(x.unit, o - vx)
        else:
            r = x.unit
        total = res.add(total, res.scale(r, vx - e), k)
    return _new(ctx, total, e, o)


def _exact_series_add(ctx, a, b):
    res = ctx._res
    e = min(a.val, b.val)
    s = res.exact_add(res.scale(a.unit, a.val - e), res.scale(b.unit, b.val - e))
    if res.is_zero(s):
        return ctx.zero()
    u, sh = res.strip(s)
    return CdvfElement(ctx, u, e + sh, INF)


def _mul(a, b):
    if a.val == INF or b.val == INF:
        return a.ctx.zero()
    ctx = a.ctx
    res = ctx._res
    if a.order == INF and b.order == INF:
        return CdvfElement(ctx, res.exact_mul(a.unit, b.unit), a.val + b.val, INF)
    o = min(a.order + b._low(), b.order + a._low())
    if a.val is None or b.val is None:
        return CdvfElement(ctx, res.zero, None, o)
    v = a.val + b.val
    k = o - v
    ua = res.exact_residue(a.unit, k) if a.order == INF else a.unit
    ub = res.exact_residue(b.unit, k) if b.order == INF else b.unit
    return CdvfElement(ctx, res.mul(ua, ub, k), v, o)


def _div(a, b):
    ctx = a.ctx
    res = ctx._res
    if b.val == INF:
        raise DivisionByExactZero("division by exact zero")
    if b.val is None:
        raise AmbiguousDivisor(f"divisor {b} is indistinguishable from zero")
    if a.val == INF:
        return ctx.zero()
    n0, m0 = b.val, b.order
    if a.order == INF and m0 == INF:
        q = res.exact_div(a.unit, b.unit)
        return CdvfElement(ctx, q, a.val - n0, INF)
    n1, m1 = a._low(), a.order
    o = min(m1 - n0, m0 + n1 - 2 * n0)
    if a.val is None:
        return CdvfElement(ctx, res.zero, None, o)
    v = n1 - n0
    k = o - v
    ua = res.exact_residue(a.unit, k) if a.order == INF else res.reduce(a.unit, k)
    ub = res.exact_residue(b.unit, k) if m0 == INF else res.reduce(b.unit, k)
    return CdvfElement(ctx, res.mul(ua, res.inv(ub, k), k), v, o)


def padic_valuation(x, p: int):
    """Valuation of an exact rational (``math.inf`` for zero)."""
    x = Fraction(x)
    if x == 0:
        return INF
    return _padic_val(x.numerator, p) - _padic_val(x.denominator, p)
