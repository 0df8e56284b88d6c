"""Exact reduced Gröbner bases over Q or F_p, used as ground truth.

Plain Buchberger with the normal selection strategy and the product
criterion, followed by minimalization and inter-reduction.  Shares the
polynomial type with the rest of the package but none of the matrix code.
"""

from __future__ import annotations

import math

from .polyring import (
    QQ, PolyRing, Polynomial, PrimeField, interreduce, mono_div, mono_divides, mono_lcm,
    mono_mul, monomials_of_degree, reduce,
)


class ResourceLimit(RuntimeError):
    """The oracle was stopped by its size guard."""


def _spoly(f, g):
    lf, cf = f.leading_term()
    lg, cg = g.leading_term()
    lcm = mono_lcm(lf, lg)
    return f.mul_term(mono_div(lcm, lf), cg) - g.mul_term(mono_div(lcm, lg), cf)


def _to_exact(F, domain=None):
    ring = F[0].ring
    domain = domain or QQ
    target = ring.with_domain(domain)
    return [f.change_ring(target) for f in F], target


def buchberger(F, max_pairs=200000):
    """A (non-reduced) Gröbner basis of ``F``; polynomials must have exact coefficients."""
    G = [f for f in F if f]
    if not G:
        return []
    key = G[0].ring._key
    lms = [g.leading_monomial() for g in G]
    pairs = [(i, j) for j in range(len(G)) for i in range(j)]
    done = 0
    while pairs:
        # normal strategy: smallest lcm first
        best = min(range(len(pairs)), key=lambda k: _pair_key(pairs[k], lms, key))
        i, j = pairs.pop(best)
        done += 1
        if done > max_pairs:
            raise ResourceLimit(f"more than {max_pairs} S-pairs")
        a, b = lms[i], lms[j]
        if all(x == 0 or y == 0 for x, y in zip(a, b)):
            continue  # coprime leading monomials
        r = reduce(_spoly(G[i], G[j]), G)
        if r:
            r = r.scale(1 / r.leading_coefficient())
            G.append(r)
            lms.append(r.leading_monomial())
            pairs.extend((k, len(G) - 1) for k in range(len(G) - 1))
    return G


def _pair_key(pair, lms, key):
    lcm = mono_lcm(lms[pair[0]], lms[pair[1]])
    return (sum(lcm), key(lcm), pair[1], pair[0])


def minimalize(G):
    G = [g for g in G if g]
    out = []
    lms = [g.leading_monomial() for g in G]
    for i, g in enumerate(G):
        lm = lms[i]
        dominated = False
        for j, h in enumerate(lms):
            if j == i:
                continue
            if mono_divides(h, lm) and (h != lm or j < i):
                dominated = True
                break
        if not dominated:
            out.append(g)
    return out


def sort_basis(G):
    """Degree first, then decreasing leading monomial."""
    if not G:
        return []
    key = G[0].ring._key
    G = sorted(G, key=lambda g: key(g.leading_monomial()), reverse=True)
    return sorted(G, key=lambda g: sum(g.leading_monomial()))


def buchberger_reduced(F, order=None, domain=None, max_pairs=200000):
    """The reduced (monic, self-reduced) Gröbner basis of the ideal generated by ``F``.

    ``F`` may have CDVF coefficients as long as they are exact; they are
    converted to ``domain`` (default Q).  ``order`` overrides the ring order.
    """
    F = [f for f in F if f]
    if not F:
        return []
    E, ring = _to_exact(F, domain)
    if order is not None:
        ring = ring.with_order(order)
        E = [Polynomial(ring, f.terms) for f in E]
    G = minimalize(buchberger(E, max_pairs))
    G, _ = interreduce(G, monic=True)
    return sort_basis(G)


def in_ideal(f, G) -> bool:
    """Membership test against a Gröbner basis ``G``."""
    return not reduce(f, G)


def _lm_count(lms, n, d):
    return sum(1 for m in monomials_of_degree(n, d) if any(mono_divides(a, m) for a in lms))


def _regular_dims(degrees, n, D):
    from .f5core import hilbert_ideal_dims

    return hilbert_ideal_dims(degrees, n, D)


def check_regular_sequence(F, D=None, domain=None) -> bool:
    """H1 through the Hilbert function, compared up to degree ``D``.

    ``D`` defaults to the sum of the degrees plus one.
    """
    F = list(F)
    n = F[0].ring.nvars
    degs = [f.degree() for f in F]
    D = D if D is not None else sum(degs) + 1
    ref = _regular_dims(degs, n, D)
    for i in range(1, len(F) + 1):
        G = buchberger_reduced(F[:i], domain=domain)
        lms = [g.leading_monomial() for g in G]
        for d in range(D + 1):
            if _lm_count(lms, n, d) != ref[i][d]:
                return False
    return True


def check_weakly_w(F, order=None, D=None, domain=None) -> bool:
    """H2: above each leading monomial of the reduced basis of every ``I_i``, every
    monomial of the same degree is a leading monomial of ``I_i``.
    """
    F = list(F)
    ring = F[0].ring
    order = ring.order if order is None else order
    from .polyring import get_order

    order = get_order(order)
    n = ring.nvars
    for i in range(1, len(F) + 1):
        G = buchberger_reduced(F[:i], order=order, domain=domain)
        lms = [g.leading_monomial() for g in G]
        for a in lms:
            d = sum(a)
            if D is not None and d > D:
                continue
            for b in monomials_of_degree(n, d, order):
                if b == a:
                    break
                if not any(mono_divides(c, b) for c in lms):
                    return False
    return True


def reduced_lms(F, order=None, domain=None):
    return [g.leading_monomial() for g in buchberger_reduced(F, order, domain)]


def sympy_reduced(F, order="grevlex"):
    """Cross-check helper: sympy's reduced basis, converted back (rational coefficients)."""
    import sympy

    ring = F[0].ring
    syms = sympy.symbols(ring.names)
    exprs = []
    for f in F:
        e = 0
        for m, c in f.terms.items():
            c = c.rational() if hasattr(c, "rational") else c
            e += sympy.Rational(c.numerator, c.denominator) * math.prod(s ** k for s, k in zip(syms, m))
        exprs.append(e)
    gb = sympy.groebner(exprs, *syms, order=order)
    R = PolyRing(ring.nvars, ring.names, order, QQ)
    out = [R.from_sympy(g) for g in gb.exprs]
    return sort_basis([g.scale(1 / g.leading_coefficient()) for g in out])


__all__ = [
    "ResourceLimit", "buchberger", "buchberger_reduced", "check_regular_sequence", "check_weakly_w",
    "in_ideal", "minimalize", "reduced_lms", "sort_basis", "sympy_reduced", "PrimeField",
]
