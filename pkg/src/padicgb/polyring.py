"""Multivariate polynomials over a CDVF, over Q, or over F_p.

Monomials are exponent tuples.  A polynomial keeps a ``{monomial: coeff}``
dict without exact-zero entries; coefficients that are indistinguishable
from zero (``O(p^n)``) *are* kept, since they carry precision information.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

from .cdvf import CdvfContext, CdvfElement
from .errors import AmbiguousLeadingTerm, PrecisionExhausted, ZeroPolynomial

Monomial = tuple


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a, b):
    return tuple(x - y for x, y in zip(a, b))


def mono_divides(a, b):
    """Whether ``a`` divides ``b``."""
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_degree(a):
    return sum(a)


class MonomialOrder:
    """``grevlex`` or ``lex`` with variable precedence X_1 > ... > X_n."""

    KINDS = ("grevlex", "lex")

    def __init__(self, kind="grevlex"):
        if kind not in self.KINDS:
            raise ValueError(f"unknown monomial order {kind!r}")
        self.kind = kind
        self.key = _grevlex_key if kind == "grevlex" else _lex_key

    @property
    def refines_degree(self):
        return self.kind == "grevlex"

    def compare(self, u, v) -> int:
        """-1, 0 or 1 as ``u`` is smaller than, equal to or greater than ``v``."""
        if len(u) != len(v):
            raise ValueError("monomials have different numbers of variables")
        ku, kv = self.key(u), self.key(v)
        return (ku > kv) - (ku < kv)

    def sorted(self, monos, reverse=True):
        return sorted(monos, key=self.key, reverse=reverse)

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and other.kind == self.kind

    def __hash__(self):
        return hash(self.kind)

    def __repr__(self):
        return f"MonomialOrder({self.kind!r})"


def _grevlex_key(m):
    return (sum(m), tuple(-e for e in reversed(m)))


def _lex_key(m):
    return m


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def get_order(order) -> MonomialOrder:
    if isinstance(order, MonomialOrder):
        return order
    return MonomialOrder(order)


@lru_cache(maxsize=None)
def _monomials(n, d, kind):
    out = []
    for combo in itertools.combinations_with_replacement(range(n), d):
        e = [0] * n
        for k in combo:
            e[k] += 1
        out.append(tuple(e))
    return tuple(MonomialOrder(kind).sorted(out))


def monomials_of_degree(n: int, d: int, order="grevlex") -> list:
    """All degree-``d`` monomials in ``n`` variables, strictly decreasing."""
    if d < 0:
        raise ValueError("degree must be non-negative")
    return list(_monomials(n, d, get_order(order).kind))


# --- coefficient domains ------------------------------------------------


class RationalField:
    name = "QQ"

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def coerce(self, x):
        if isinstance(x, CdvfElement):
            if not x.is_exact():
                raise ValueError("cannot coerce an approximation into QQ")
            return Fraction(x.rational())
        return Fraction(x)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


QQ = RationalField()


class ModP:
    __slots__ = ("v", "p")

    def __init__(self, v, p):
        self.v = v % p
        self.p = p

    def _c(self, o):
        return o.v if isinstance(o, ModP) else Fraction(o).numerator * pow(
            Fraction(o).denominator, -1, self.p)

    def __add__(self, o):
        return ModP(self.v + self._c(o), self.p)

    __radd__ = __add__

    def __sub__(self, o):
        return ModP(self.v - self._c(o), self.p)

    def __rsub__(self, o):
        return ModP(self._c(o) - self.v, self.p)

    def __mul__(self, o):
        return ModP(self.v * self._c(o), self.p)

    __rmul__ = __mul__

    def __truediv__(self, o):
        d = self._c(o)
        if d % self.p == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return ModP(self.v * pow(d, -1, self.p), self.p)

    def __rtruediv__(self, o):
        return ModP(self._c(o), self.p) / self

    def __neg__(self):
        return ModP(-self.v, self.p)

    def __eq__(self, o):
        if isinstance(o, ModP):
            return self.v == o.v and self.p == o.p
        if isinstance(o, (int, Fraction)):
            return self.v == self._c(o) % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __str__(self):
        return str(self.v)

    __repr__ = __str__


class PrimeField:
    def __init__(self, p):
        self.p = p
        self.name = f"GF({p})"

    def zero(self):
        return ModP(0, self.p)

    def one(self):
        return ModP(1, self.p)

    def coerce(self, x):
        if isinstance(x, ModP):
            return x
        if isinstance(x, CdvfElement):
            x = x.rational()
        x = Fraction(x)
        return ModP(x.numerator * pow(x.denominator, -1, self.p), self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return self.name


def is_zero(c) -> bool:
    """Exact zero."""
    if isinstance(c, CdvfElement):
        return c.is_zero()
    return c == 0


def is_certified_nonzero(c) -> bool:
    if isinstance(c, CdvfElement):
        return c.is_certified_nonzero()
    return c != 0


def is_indistinguishable(c) -> bool:
    return isinstance(c, CdvfElement) and c.is_indistinguishable()


# --- rings and polynomials ----------------------------------------------


def default_names(n):
    if n <= 3:
        return ("x", "y", "z")[:n]
    return tuple(f"x{i + 1}" for i in range(n))


class PolyRing:
    def __init__(self, nvars: int, names=None, order="grevlex", domain=None):
        self.nvars = nvars
        self.names = tuple(names) if names else default_names(nvars)
        if len(self.names) != nvars:
            raise ValueError("wrong number of variable names")
        self.order = get_order(order)
        self.domain = domain if domain is not None else QQ
        self._key = self.order.key

    def with_domain(self, domain) -> PolyRing:
        return PolyRing(self.nvars, self.names, self.order, domain)

    def with_order(self, order) -> PolyRing:
        return PolyRing(self.nvars, self.names, order, self.domain)

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and self.nvars == other.nvars
                and self.names == other.names and self.order == other.order
                and self.domain == other.domain)

    def __hash__(self):
        return hash((self.nvars, self.names, self.order))

    def __repr__(self):
        return f"PolyRing({', '.join(self.names)}; {self.order.kind}; {self.domain})"

    @property
    def is_cdvf(self):
        return isinstance(self.domain, CdvfContext)

    def zero(self) -> Polynomial:
        return Polynomial(self, {})

    def one(self) -> Polynomial:
        return self.monomial((0,) * self.nvars)

    def monomial(self, m, c=None) -> Polynomial:
        c = self.domain.one() if c is None else self.domain.coerce(c)
        return Polynomial(self, {tuple(m): c})

    def gens(self):
        out = []
        for k in range(self.nvars):
            e = [0] * self.nvars
            e[k] = 1
            out.append(self.monomial(tuple(e)))
        return out

    def from_dict(self, terms) -> Polynomial:
        co = self.domain.coerce
        return Polynomial(self, {tuple(m): co(c) for m, c in terms.items()})

    def from_sympy(self, expr) -> Polynomial:
        """Exact polynomial from a sympy expression in this ring's variable names."""
        import sympy

        syms = sympy.symbols(self.names)
        poly = sympy.Poly(expr, *syms)
        return self.from_dict({m: Fraction(int(c.p), int(c.q)) for m, c in poly.terms()})

    def monomial_str(self, m):
        parts = []
        for name, e in zip(self.names, m):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"


class Polynomial:
    """Immutable polynomial; use the arithmetic operators to build new ones."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = {m: c for m, c in terms.items() if not is_zero(c)}

    @classmethod
    def _raw(cls, ring, terms):
        # terms already free of exact zeros
        p = object.__new__(cls)
        p.ring = ring
        p.terms = terms
        return p

    # --- inspection ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def monomials(self) -> list:
        """Monomials with stored coefficients, decreasing."""
        return sorted(self.terms, key=self.ring._key, reverse=True)

    def items(self):
        return [(m, self.terms[m]) for m in self.monomials()]

    def coeff(self, m):
        return self.terms.get(tuple(m), self.ring.domain.zero())

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def is_exact(self) -> bool:
        return all(not isinstance(c, CdvfElement) or c.is_exact() for c in self.terms.values())

    def min_order(self):
        """Smallest coefficient order (``inf`` for exact polynomials)."""
        return min((c.order for c in self.terms.values() if isinstance(c, CdvfElement)),
                   default=float("inf"))

    def leading_term(self):
        """``(LM, LC)``: the greatest monomial whose coefficient is certified nonzero.

        Raises :class:`AmbiguousLeadingTerm` when a greater monomial carries a
        coefficient that is indistinguishable from zero.
        """
        if not self.terms:
            raise ZeroPolynomial("the zero polynomial has no leading term")
        key = self.ring._key
        best = None
        for m, c in self.terms.items():
            if best is None or key(m) > key(best):
                best = m
        c = self.terms[best]
        if is_certified_nonzero(c):
            return best, c
        ms = self.monomials()
        for m in ms:
            c = self.terms[m]
            if is_certified_nonzero(c):
                raise AmbiguousLeadingTerm(
                    f"coefficient of {self.ring.monomial_str(ms[0])} is {self.terms[ms[0]]}; "
                    f"cannot certify {self.ring.monomial_str(m)} as leading monomial")
        raise AmbiguousLeadingTerm("no coefficient has a certified valuation")

    def leading_monomial(self):
        return self.leading_term()[0]

    def leading_coefficient(self):
        return self.leading_term()[1]

    # --- arithmetic ---------------------------------------------------

    def _check(self, other):
        if other.ring.nvars != self.ring.nvars:
            raise ValueError("polynomials live in different rings")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = self.ring.monomial((0,) * self.ring.nvars, other)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            if m in out:
                s = out[m] + c
                if is_zero(s):
                    del out[m]
                else:
                    out[m] = s
            else:
                out[m] = c
        return Polynomial._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = self.ring.monomial((0,) * self.ring.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                c = c1 * c2
                if m in out:
                    out[m] = out[m] + c
                else:
                    out[m] = c
        return Polynomial(self.ring, out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    def scale(self, c):
        c = self.ring.domain.coerce(c)
        return Polynomial(self.ring, {m: a * c for m, a in self.terms.items()})

    def mul_term(self, mono, c=None):
        """``c * x^mono * self``."""
        if c is None:
            return Polynomial._raw(self.ring, {mono_mul(m, mono): a for m, a in self.terms.items()})
        return Polynomial(self.ring, {mono_mul(m, mono): a * c for m, a in self.terms.items()})

    def map_coeffs(self, fn, ring=None):
        ring = ring or self.ring
        return Polynomial(ring, {m: fn(c) for m, c in self.terms.items()})

    def change_ring(self, ring):
        co = ring.domain.coerce
        return Polynomial(ring, {m: co(c) for m, c in self.terms.items()})

    def truncate(self, order):
        return self.map_coeffs(lambda c: c.truncate(order))

    def lift(self, order=float("inf")):
        return self.map_coeffs(lambda c: c.lift(order))

    def top_component(self) -> Polynomial:
        """Sum of the terms of maximal total degree."""
        if not self.terms:
            raise ZeroPolynomial("the zero polynomial has no top component")
        return self.homogeneous_component(self.degree())

    def homogeneous_component(self, d) -> Polynomial:
        return Polynomial._raw(self.ring, {m: c for m, c in self.terms.items() if sum(m) == d})

    def agrees(self, other, order=None) -> bool:
        """Coefficient-wise agreement (exact equality for exact coefficients)."""
        for m in set(self.terms) | set(other.terms):
            a, b = self.coeff(m), other.coeff(m)
            if isinstance(a, CdvfElement) or isinstance(b, CdvfElement):
                if isinstance(a, CdvfElement):
                    if not a.agrees(a.ctx.coerce(b), order):
                        return False
                elif not b.agrees(b.ctx.coerce(a), order):
                    return False
            elif a != b:
                return False
        return True

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms))

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        ring = self.ring
        out = []
        for m, c in self.items():
            mono = ring.monomial_str(m)
            sign, body = _coeff_str(c)
            if mono == "1":
                term = body
            elif body == "1":
                term = mono
            else:
                term = f"{body}*{mono}"
            if not out:
                out.append(("-" if sign < 0 else "") + term)
            else:
                out.append((" - " if sign < 0 else " + ") + term)
        return "".join(out)


def _coeff_str(c):
    if isinstance(c, CdvfElement):
        if c.is_exact() and c.ctx.is_padic:
            r = c.rational()
            s = str(abs(r))
            return (-1 if r < 0 else 1), (f"({s})" if "/" in s else s)
        s = str(c)
        if c.is_indistinguishable():
            return 1, s
        return 1, (f"({s})" if not c.is_exact() or " " in s else s)
    if isinstance(c, Fraction):
        s = str(abs(c))
        return (-1 if c < 0 else 1), (f"({s})" if "/" in s else s)
    return 1, str(c)


# --- reduction ----------------------------------------------------------


def _check_exhausted(c, where):
    if isinstance(c, CdvfElement) and c.val is None and c.order <= 0:
        raise PrecisionExhausted(f"coefficient of {where} lost all precision")


def reduce(f: Polynomial, G, with_quotients: bool = False):
    """Multivariate division of ``f`` by the list ``G``.

    Greatest reducible term first, first divisor in ``G`` order.  Every term
    whose monomial is divisible by some ``LM(g)`` is eliminated, including
    terms with coefficients indistinguishable from zero; the eliminated slot
    becomes an exact zero.  Returns the remainder, or ``(remainder, quotients)``.
    """
    ring = f.ring
    lts = [g.leading_term() for g in G]
    key = ring._key
    p = dict(f.terms)
    rem = {}
    quots = [dict() for _ in G] if with_quotients else None
    while p:
        m = max(p, key=key)
        c = p.pop(m)
        for j, (lm, lc) in enumerate(lts):
            if mono_divides(lm, m):
                break
        else:
            rem[m] = c
            continue
        q = c / lc
        shift = mono_div(m, lm)
        for gm, gc in G[j].terms.items():
            if gm == lm:
                continue
            t = mono_mul(gm, shift)
            v = p[t] - q * gc if t in p else -(q * gc)
            if is_zero(v):
                p.pop(t, None)
            else:
                _check_exhausted(v, ring.monomial_str(t))
                p[t] = v
        if with_quotients:
            qd = quots[j]
            qd[shift] = qd[shift] + q if shift in qd else q
    r = Polynomial(ring, rem)
    if with_quotients:
        return r, [Polynomial(ring, qd) for qd in quots]
    return r


def interreduce(G, coords=None, monic=False):
    """Reduce every tail of the minimal basis ``G`` by the other elements.

    ``coords`` optionally holds, for each ``g``, its coordinate vector (a list
    of polynomials) which is updated alongside.  Returns ``(G', coords')``.
    """
    G = list(G)
    coords = [list(c) for c in coords] if coords is not None else None
    for i in range(len(G)):
        lm, lc = G[i].leading_term()
        head = Polynomial(G[i].ring, {lm: lc})
        tail = G[i] - head
        others = [j for j in range(len(G)) if j != i]
        r, qs = reduce(tail, [G[j] for j in others], with_quotients=True)
        G[i] = head + r
        if coords is not None:
            for j, q in zip(others, qs):
                if q:
                    coords[i] = [a - q * b for a, b in zip(coords[i], coords[j])]
    if monic:
        for i in range(len(G)):
            lc = G[i].leading_coefficient()
            inv = G[i].ring.domain.one() / lc
            G[i] = G[i].scale(inv)
            if coords is not None:
                coords[i] = [a.scale(inv) for a in coords[i]]
    return G, coords


def normal_form(f, G):
    return reduce(f, G)


def is_minimal(G) -> bool:
    lms = [g.leading_monomial() for g in G]
    return not any(i != j and mono_divides(a, b) for i, a in enumerate(lms) for j, b in enumerate(lms))
