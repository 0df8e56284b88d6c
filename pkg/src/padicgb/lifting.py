"""Lifting an approximate Gröbner basis to a higher precision.

Given ``G = F * M`` computed at precision ``m``, the coordinates ``M`` are
lifted canonically (zero pi-digits above ``pi^m``), ``H = F * M^`` is
formed with ``F`` known at precision ``l``, and each ``H[i]`` is reduced by
the already lifted elements.  The leading monomials are checked at the end
rather than bounded in advance.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .errors import LiftVerificationFailure
from .polyring import Polynomial, reduce

INF = math.inf


@dataclass
class LiftRequest:
    """``F`` at precision ``l`` (or exact), plus ``G`` and ``M`` from a run at precision ``m``."""

    F: list
    G: list
    M: list
    m: int
    l: float = INF
    bound: int | None = None  # prec_mf5 of F when known

    def __post_init__(self):
        if self.l <= self.m:
            raise ValueError(f"target precision {self.l} must exceed {self.m}")
        if len(self.M) != len(self.F) or any(len(row) != len(self.G) for row in self.M):
            raise ValueError("M must have one row per generator and one column per basis element")


@dataclass
class LiftResult:
    G: list
    M: list
    l: float

    def to_rational(self):
        """Exact results as polynomials over Q (only for ``l = inf``)."""
        from .polyring import QQ

        ring = self.G[0].ring.with_domain(QQ)
        return [g.change_ring(ring) for g in self.G]


def canonical_lift(M, l):
    """Lift every coefficient of the polynomial matrix ``M`` to order ``l``."""
    out = []
    for row in M:
        new = []
        for a in row:
            for c in a.terms.values():
                if not c.is_exact() and c.order >= l:
                    raise ValueError(f"cannot lift {c} to order {l}")
            new.append(a.lift(l))
        out.append(new)
    return out


def _normalizer(g) -> int:
    """Scalar clearing the denominators of ``g`` and making its leading coefficient positive."""
    den = 1
    for c in g.terms.values():
        den = math.lcm(den, Fraction(c.rational()).denominator)
    return -den if g.leading_coefficient().rational() < 0 else den


def weak_lift(req: LiftRequest) -> LiftResult:
    if req.bound is not None and req.m <= 2 * req.bound:
        warnings.warn(
            f"precision {req.m} does not exceed twice the bound {req.bound}; "
            "the lift is verified afterwards", RuntimeWarning, stacklevel=2)
    l = req.l
    F = [f if l == INF else f.truncate(l) for f in req.F]
    Mh = canonical_lift(req.M, l)
    s, r = len(F), len(req.G)
    ring = F[0].ring
    out, coords = [], []
    for i in range(r):
        h = ring.zero()
        col = [Mh[j][i] for j in range(s)]
        for j in range(s):
            if col[j]:
                h = h + F[j] * col[j]
        if out:
            h, qs = reduce(h, out, with_quotients=True)
            for k, q in enumerate(qs):
                if q:
                    col = [a - q * b for a, b in zip(col, coords[k])]
        if h.is_zero():
            raise LiftVerificationFailure(f"basis element {i} reduced to zero")
        lm = h.leading_monomial()
        want = req.G[i].leading_monomial()
        if lm != want:
            raise LiftVerificationFailure(
                f"basis element {i}: leading monomial {ring.monomial_str(lm)} "
                f"instead of {ring.monomial_str(want)}")
        if l == INF:
            c = _normalizer(h)
            if c != 1:
                h = h.scale(c)
                col = [a.scale(c) for a in col]
        out.append(h)
        coords.append(col)
    M = [[coords[k][j] for k in range(r)] for j in range(s)]
    return LiftResult(out, M, l)

