"""First-order sensitivity of the reduced Gröbner basis map.

At a sequence satisfying H1 and H2, the reduced basis ``g`` moves with
``f`` as ``dg = (df * M) mod g``, where ``M`` holds the coordinates of ``g``
in terms of ``f``.  Three estimates of the loss of precision are compared:

* direct: the precision left on the reduced basis computed from ``f + O(p^k)``;
* difference: valuations of ``g(f + df) - g(f)`` for a concrete ``df`` in ``p^k Z``;
* differential: the orders of ``(df * M) mod g`` with ``df`` encoded as balls.

The surjectivity hypothesis behind the differential is not checked, so the
last estimate is heuristic.
"""

from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass

from .cdvf import padic_valuation
from .errors import LMInstability, PadicGBError
from .f5core import weak_mf5
from .oracle import buchberger_reduced
from .polyring import Polynomial, interreduce, monomials_of_degree, reduce

INF = math.inf


@dataclass
class Perturbation:
    """``dF[j]`` perturbs ``F[j]``; ``concrete`` tells exact values from balls."""

    dF: list
    concrete: bool = True

    @classmethod
    def balls(cls, F, k, on_support=True) -> Perturbation:
        """``O(p^k)`` on every monomial of each ``f`` (or of its whole degree)."""
        out = []
        for f in F:
            ctx = f.ring.domain
            monos = f.terms if on_support else monomials_of_degree(f.ring.nvars, f.degree(), f.ring.order)
            out.append(Polynomial(f.ring, {m: ctx.big_oh(k) for m in monos}))
        return cls(out, concrete=False)

    def ball_encoding(self) -> Perturbation:
        """Each concrete coefficient ``c`` becomes ``O(p^val(c))``."""
        if not self.concrete:
            return self
        out = []
        for df in self.dF:
            ctx = df.ring.domain
            out.append(Polynomial(df.ring, {m: ctx.big_oh(c.valuation()) for m, c in df.terms.items()}))
        return Perturbation(out, concrete=False)

    def is_degree_compatible(self, F) -> bool:
        return all(df.is_zero() or (df.is_homogeneous() and df.degree() == f.degree())
                   for df, f in zip(self.dF, F))


def exact_reduced_with_coords(F, D=None, check=True):
    """Reduced (monic) basis of exact ``F`` together with its coordinates.

    Runs weak-MF5 with exact coefficients, then inter-reduces while updating
    the coordinates.  With ``check`` the leading monomials are compared
    against the Buchberger oracle.
    """
    res = weak_mf5(F, D, track=True)
    r = len(res.G)
    coords = [[res.M[j][k] for j in range(len(F))] for k in range(r)]
    G, coords = interreduce(res.G, coords, monic=True)
    if check:
        ref = buchberger_reduced(F)
        if [g.leading_monomial() for g in ref] != [g.leading_monomial() for g in G]:
            raise LMInstability("weak-MF5 and the oracle disagree on leading monomials; "
                                "the degree cap may be too low")
    M = [[coords[k][j] for k in range(r)] for j in range(len(F))]
    return G, M


def differential(F, M, G, dF, bound=None) -> list:
    """``dg_k = (sum_j dF[j] * M[j][k]) mod G``.

    ``bound`` (e.g. ``prec_mac(F)``) marks the neighbourhood where the
    leading monomials are known not to move; a perturbation that is not
    finer than it triggers a warning.

    Normal forms are linear, so with ``M`` and ``G`` exact each input term
    ``c * X^u`` of ``dF[j]`` contributes ``c * reduce(X^u * M[j][k], G)``.
    Ball coefficients are pushed through these exact images one at a time,
    which keeps the result as tight as the linear map allows (reducing the
    ball-valued sum directly forgets cancellations between terms).
    """
    if isinstance(dF, Perturbation):
        dF = dF.dF
    if bound is not None:
        low = min((c.order if c.is_indistinguishable() else c.valuation()
                   for d in dF for c in d.terms.values()), default=INF)
        if low <= bound:
            warnings.warn(f"perturbation of valuation {low} is not below the bound {bound}; "
                          "the leading monomials may change", RuntimeWarning, stacklevel=2)
    for g in G:
        g.leading_term()  # raises when a leading term is ambiguous
    ring = G[0].ring
    exact = all(g.is_exact() for g in G) and all(a.is_exact() for row in M for a in row if a)
    out = []
    for k in range(len(G)):
        acc = ring.zero()
        for j in range(len(F)):
            if not dF[j] or not M[j][k]:
                continue
            if not exact:
                acc = acc + reduce(dF[j] * M[j][k], G)
                continue
            for u, c in dF[j].terms.items():
                img = reduce(M[j][k].mul_term(u, ring.domain.one()), G)
                if img:
                    acc = acc + img.scale(c)
        out.append(acc)
    return out


def min_order(polys) -> float:
    """Smallest coefficient order over ``polys`` (``inf`` when everything is exact)."""
    return min((c.order for f in polys for c in f.terms.values() if not c.is_exact()), default=INF)


@dataclass
class DifferenceResult:
    valuations: list  # per basis element: {monomial: valuation of the difference}

    @property
    def minimum(self) -> float:
        return min((v for d in self.valuations for v in d.values()), default=INF)


def difference_method(F, dF, p=None) -> DifferenceResult:
    """Valuations of ``g(F + dF) - g(F)`` with both reduced bases from the exact oracle."""
    if isinstance(dF, Perturbation):
        dF = dF.dF
    ctx = F[0].ring.domain
    p = p or ctx.p
    F2 = [f + df if df else f for f, df in zip(F, dF)]
    g1 = buchberger_reduced(F)
    g2 = buchberger_reduced(F2)
    if [g.leading_monomial() for g in g1] != [g.leading_monomial() for g in g2]:
        raise LMInstability("the perturbation changed the leading monomials")
    vals = []
    for a, b in zip(g1, g2):
        d = a - b
        vals.append({m: padic_valuation(c, p) for m, c in d.terms.items()})
    return DifferenceResult(vals)


@dataclass
class TrialRecord:
    trial: int
    direct: float | None
    difference: float | None
    differential: float | None
    note: str = ""

    def to_json(self):
        enc = lambda v: None if v is None else ("inf" if v == INF else int(v))
        return {"trial": self.trial, "direct": enc(self.direct), "difference": enc(self.difference),
                "differential": enc(self.differential), "note": self.note}


def direct_precision(F, k, D):
    """Minimal order on the monic reduced basis computed from ``F + O(p^k)``."""
    res = weak_mf5([f.truncate(k) for f in F], D, track=False)
    G, _ = interreduce(res.G, monic=True)
    return min_order(G)


def random_perturbation(F, k, rng) -> Perturbation:
    """``p^k`` times random integers in ``[0, p^k)`` on every monomial of each degree."""
    out = []
    for f in F:
        ctx = f.ring.domain
        pk = ctx.p ** k
        terms = {m: ctx.exact(pk * rng.randrange(pk))
                 for m in monomials_of_degree(f.ring.nvars, f.degree(), f.ring.order)}
        out.append(Polynomial(f.ring, terms))
    return Perturbation(out, concrete=True)


def compare_trial(F, k, D, rng=None, dF=None, trial=0) -> TrialRecord:
    """One row of the comparison: ``F`` exact, ``dF`` concrete (random if omitted)."""
    if dF is None:
        dF = random_perturbation(F, k, rng or random.Random(0))
    notes = []
    try:
        direct = direct_precision(F, k, D)
    except PadicGBError as exc:
        direct, notes = None, notes + [f"direct: {type(exc).__name__}"]
    try:
        difference = difference_method(F, dF).minimum
    except PadicGBError as exc:
        difference, notes = None, notes + [f"difference: {type(exc).__name__}"]
    try:
        G, M = exact_reduced_with_coords(F, D)
        dg = differential(F, M, G, dF.ball_encoding())
        diff = min_order(dg)
    except PadicGBError as exc:
        diff, notes = None, notes + [f"differential: {type(exc).__name__}"]
    return TrialRecord(trial, direct, difference, diff, "; ".join(notes))


def compare_methods(degrees, D, p, trials=10, k=30, seed=0, n=None, order="grevlex"):
    """Run ``trials`` independent comparisons on random systems; returns the records."""
    from .experiments import ExperimentConfig, random_system

    cfg = ExperimentConfig(degrees=list(degrees), D=D, p=p, trials=trials, prec=k,
                           n=n, order=order, seed=seed)
    out = []
    for t in range(trials):
        rng = cfg.trial_rng(t)
        F = random_system(cfg, rng, exact=True)
        out.append(compare_trial(F, k, D, rng=rng, trial=t))
    return out


def format_table(records, degrees=None, D=None, p=None) -> str:
    """The comparison as an aligned text table, one line per method."""
    def cell(v):
        return "-" if v is None else ("inf" if v == INF else str(int(v)))

    head = ""
    if degrees is not None:
        head = f"d={list(degrees)} D={D} p={p} n_exp={len(records)}\n"
    lines = []
    for name in ("direct", "difference", "differential"):
        vals = ", ".join(cell(getattr(r, name)) for r in records)
        lines.append(f"{name:<13}[{vals}]")
    return head + "\n".join(lines)
