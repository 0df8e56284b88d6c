"""Macaulay matrices and the weak Matrix-F5 algorithm over a finite-precision CDVF.

For each degree ``d`` up to the cap ``D`` and each ``i``, the (F5-filtered)
Macaulay matrix of ``f_1..f_i`` is echelonized up to its first pivotless
column; the remaining leading monomials are then filled in with multiples
``X_k * P`` of rows ``P`` of the degree ``d-1`` result.  When this completion
cannot supply enough rows, the ideal is not weakly-w, the sequence is not
regular, or the precision is too low.  Those three cases cannot be told
apart, and all of them raise :class:`StructureOrPrecisionFailure`.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

from .cdvf import CdvfContext
from .errors import AmbiguousColumn, PrecisionError, StructureOrPrecisionFailure, UncertifiedBound
from .linalg import LabeledMatrix, row_echelon_prefix
from .polyring import (
    PolyRing, Polynomial, get_order, mono_divides, mono_mul, monomials_of_degree,
)

log = logging.getLogger(__name__)

INF = math.inf


@dataclass
class SystemInput:
    """Homogeneous generators, a degree cap and (implicitly) the ring's order."""

    F: list
    D: int

    def __post_init__(self):
        if not self.F:
            raise ValueError("empty system")
        ring = self.F[0].ring
        if not isinstance(ring.domain, CdvfContext):
            raise TypeError("coefficients must live in a CDVF context")
        for f in self.F:
            if f.ring.nvars != ring.nvars:
                raise ValueError("generators live in different rings")
            if f.is_zero():
                raise ValueError("zero generator")

    @property
    def ring(self) -> PolyRing:
        return self.F[0].ring

    @property
    def degrees(self):
        return [f.degree() for f in self.F]


@dataclass
class PrecisionReport:
    """Pivot data per ``(d, i)`` (``i`` is 1-based in the sorted input)."""

    delta: dict = field(default_factory=dict)      # (d, i) -> sum of pivot valuations
    pivots: dict = field(default_factory=dict)     # (d, i) -> list of valuations
    stop: dict = field(default_factory=dict)       # (d, i) -> 0-based first pivotless column
    rows: dict = field(default_factory=dict)       # (d, i) -> number of matrix rows
    method: str = "mf5"
    realized_loss: int = 0
    input_order: float = INF

    @property
    def bound(self) -> int:
        return max(self.delta.values(), default=0)

    def to_json(self):
        return {
            "method": self.method,
            "bound": self.bound,
            "realized_loss": self.realized_loss,
            "delta": [[d, i, v] for (d, i), v in sorted(self.delta.items())],
        }


@dataclass
class GroebnerResult:
    """``G`` sorted by degree then decreasing LM, with ``G = F * M``.

    ``M[j][k]`` is the coefficient polynomial of ``F[j]`` in ``G[k]`` (indices
    refer to the caller's generator order).
    """

    F: list
    G: list
    M: list | None
    D: int
    report: PrecisionReport
    minimal: bool = True

    @property
    def lms(self):
        return [g.leading_monomial() for g in self.G]

    @property
    def losses(self):
        """Per-coefficient loss ``m - order`` (exact coefficients are skipped)."""
        m = self.report.input_order
        out = []
        for g in self.G:
            for c in g.terms.values():
                if not c.is_exact():
                    out.append(m - c.order)
        return out

    @property
    def realized_loss(self):
        return max(self.losses, default=0)

    def check_coordinates(self) -> bool:
        """Expand ``F * M`` and compare with ``G`` within the stated orders."""
        if self.M is None:
            raise ValueError("coordinates were not tracked")
        ring = self.G[0].ring if self.G else self.F[0].ring
        for k, g in enumerate(self.G):
            acc = ring.zero()
            for j, f in enumerate(self.F):
                if self.M[j][k]:
                    acc = acc + self.M[j][k] * f
            if not acc.agrees(g):
                return False
        return True


def macaulay_bound(degrees) -> int:
    """Sum of (d_i - 1), plus 1."""
    if not degrees:
        raise ValueError("need at least one degree")
    return sum(d - 1 for d in degrees) + 1


def hilbert_ideal_dims(degrees, n, D):
    """``dim(I_i ∩ A_d)`` for a regular sequence of the given degrees, ``d <= D``.

    Returns ``dims[i][d]`` for ``i = 0..s`` (``i = 0`` is the zero ideal).
    """
    dims = []
    series = [math.comb(n + d - 1, d) if n else int(d == 0) for d in range(D + 1)]
    full = list(series)
    dims.append([0] * (D + 1))
    for dj in degrees:
        series = [series[d] - (series[d - dj] if d >= dj else 0) for d in range(D + 1)]
        dims.append([full[d] - series[d] for d in range(D + 1)])
    return dims


def macaulay_matrix(F, d, order=None) -> LabeledMatrix:
    """Rows ``x^a * f_i`` for every ``i`` and every monomial of degree ``d - d_i``."""
    ring = F[0].ring
    order = get_order(order) if order is not None else ring.order
    n = ring.nvars
    cols = monomials_of_degree(n, d, order)
    idx = {m: k for k, m in enumerate(cols)}
    rows, labels = [], []
    for i, f in enumerate(F):
        di = f.degree()
        if di > d:
            continue
        for a in monomials_of_degree(n, d - di, order):
            rows.append({idx[mono_mul(m, a)]: c for m, c in f.terms.items()})
            labels.append((i, a))
    return LabeledMatrix(rows, len(cols), labels, cols, ctx=ring.domain)


def f5_filter(labels, lm_sets):
    """Keep the row labels ``(j, a)`` with ``a`` not a leading monomial of ``I_{j-1}``.

    ``lm_sets[j]`` is the set of leading monomials of the echelonized matrix
    of ``f_1..f_j`` in the multiplier's degree (``j`` 0-based: index ``j``
    covers the generators before ``j``).
    """
    return [(j, a) for j, a in labels if a not in lm_sets.get(j, ())]


class _State:
    """Echelonized rows per (degree, i): list of (lm, {mono: coeff}, companion)."""

    def __init__(self):
        self.tilde = {}

    def get(self, d, i):
        return self.tilde.get((d, i), [])

    def lms(self, d, i):
        return {lm for lm, _, _ in self.get(d, i)}


def _prepare(inp: SystemInput):
    F = inp.F
    ring = inp.ring
    ctx = ring.domain
    for f in F:
        if not f.is_homogeneous():
            raise ValueError(f"generator {f} is not homogeneous")
    # rescale generators with negative valuations into the valuation ring
    scales = []
    scaled = []
    for f in F:
        low = min(c.val if c.val is not None else c.order for c in f.terms.values())
        s = -low if low < 0 else 0
        scales.append(s)
        scaled.append(f.scale(ctx.uniformizer_power(s)) if s else f)
    perm = sorted(range(len(F)), key=lambda j: scaled[j].degree())
    return [scaled[j] for j in perm], perm, scales


def _weak(inp: SystemInput, filtered: bool, track: bool, method: str):
    Fs, perm, scales = _prepare(inp)
    ring = inp.ring
    ctx = ring.domain
    order = ring.order
    n = ring.nvars
    s = len(Fs)
    D = inp.D
    degs = [f.degree() for f in Fs]
    one = ctx.one()
    expected = None if filtered else hilbert_ideal_dims(degs, n, D)
    report = PrecisionReport(method=method)
    report.input_order = min(f.min_order() for f in Fs)
    state = _State()
    G = []  # (lm, rowpoly dict, companion)
    gen_terms = [list(f.terms.items()) for f in Fs]

    for d in range(min(degs), D + 1):
        cols = monomials_of_degree(n, d, order)
        idx = {m: k for k, m in enumerate(cols)}
        for i in range(1, s + 1):
            if degs[i - 1] > d:
                # nothing new in this degree: same as the previous index
                state.tilde[(d, i)] = state.get(d, i - 1)
                if (d, i - 1) in report.delta:
                    report.delta[(d, i)] = report.delta[(d, i - 1)]
                continue
            rows, labels, comps = [], [], []
            for j in range(i):
                dj = degs[j]
                if dj > d:
                    continue
                banned = state.lms(d - dj, j) if filtered and j > 0 else ()
                for a in monomials_of_degree(n, d - dj, order):
                    if a in banned:
                        continue
                    rows.append({idx[mono_mul(m, a)]: c for m, c in gen_terms[j]})
                    labels.append((j, a))
                    if track:
                        comps.append({(j, a): one})
            M = LabeledMatrix(rows, len(cols), labels, cols, comps if track else None, ctx)
            try:
                W, rep, c = row_echelon_prefix(M, inplace=True)
            except AmbiguousColumn as exc:
                raise StructureOrPrecisionFailure(
                    f"degree {d}, index {i}: {exc}", degree=d, index=i, column=exc.column + 1) from exc
            report.delta[(d, i)] = rep.loss_bound
            report.pivots[(d, i)] = [v for _, _, v in rep.pivots]
            report.stop[(d, i)] = c
            report.rows[(d, i)] = len(rows)

            new = []
            for r, col, _ in rep.pivots:
                poly = {cols[k]: v for k, v in W.rows[r].items()}
                new.append((cols[col], poly, W.companions[r] if track else None))
            prev = state.get(d - 1, i)
            prev_lms = {}
            for lm, poly, comp in prev:
                for k in range(n):
                    e = [0] * n
                    e[k] = 1
                    t = mono_mul(lm, tuple(e))
                    if t not in prev_lms:
                        prev_lms[t] = (k, poly, comp)
            completed = 0
            for u in range(c, len(cols)):
                hit = prev_lms.get(cols[u])
                if hit is None:
                    continue
                k, poly, comp = hit
                e = [0] * n
                e[k] = 1
                e = tuple(e)
                prow = {mono_mul(m, e): v for m, v in poly.items()}
                pcomp = None
                if track:
                    pcomp = {(j, mono_mul(a, e)): v for (j, a), v in comp.items()}
                new.append((cols[u], prow, pcomp))
                completed += 1
            target = len(rows) if filtered else expected[i][d]
            if c + completed != target:
                raise StructureOrPrecisionFailure(
                    f"degree {d}, index {i}: echelon prefix stops at column {c + 1} and completion "
                    f"gives {c + completed} of {target} rows (not weakly-w, not regular, "
                    f"or not enough precision)", degree=d, index=i, column=c + 1)
            state.tilde[(d, i)] = new
            for lm, poly, comp in new[:c]:
                if not any(mono_divides(g[0], lm) for g in G):
                    G.append((lm, poly, comp))
    # degree first, then decreasing leading monomial
    G.sort(key=lambda g: order.key(g[0]), reverse=True)
    G.sort(key=lambda g: sum(g[0]))
    return _assemble(inp, G, perm, scales, track, report)


def _assemble(inp, G, perm, scales, track, report):
    ring = inp.ring
    ctx = ring.domain
    s = len(inp.F)
    polys = [Polynomial(ring, poly) for _, poly, _ in G]
    M = None
    if track:
        M = [[None] * len(G) for _ in range(s)]
        for k, (_, _, comp) in enumerate(G):
            per = [dict() for _ in range(s)]
            for (j, a), v in comp.items():
                per[perm[j]][a] = v
            for j in range(s):
                col = Polynomial(ring, per[j])
                if scales[j]:
                    col = col.scale(ctx.uniformizer_power(scales[j]))
                M[j][k] = col
    res = GroebnerResult(inp.F, polys, M, inp.D, report)
    report.realized_loss = res.realized_loss
    return res


def _as_input(F, D) -> SystemInput:
    if isinstance(F, SystemInput):
        return F
    F = list(F)
    if D is None:
        D = macaulay_bound([f.degree() for f in F])
    return SystemInput(F, D)


def weak_mf5(F, D=None, track: bool = True) -> GroebnerResult:
    """Approximate minimal ``D``-Gröbner basis by the weak Matrix-F5 algorithm."""
    inp = _as_input(F, D)
    return _weak(inp, filtered=True, track=track, method="mf5")


def weak_matrix(F, D=None, track: bool = True) -> GroebnerResult:
    """Same contract as :func:`weak_mf5`, echelonizing the full Macaulay matrices.

    The completion target is the Hilbert function of a regular sequence.
    """
    inp = _as_input(F, D)
    return _weak(inp, filtered=False, track=track, method="matrix")


def _bound(F, D, filtered):
    inp = _as_input(F, D)
    try:
        res = _weak(inp, filtered=filtered, track=False, method="mf5" if filtered else "matrix")
    except (StructureOrPrecisionFailure, PrecisionError) as exc:
        raise UncertifiedBound(f"bound not certified: {exc}") from exc
    return res.report.bound


def prec_mf5(F, D=None) -> int:
    """Maximum over ``(d, i)`` of the pivot-valuation sums on the filtered matrices."""
    return _bound(F, D, True)


def prec_mac(F, D=None) -> int:
    """Maximum over ``(d, i)`` of the pivot-valuation sums on the full Macaulay matrices."""
    return _bound(F, D, False)


def affine_weak_mf5(F, D=None, track: bool = True) -> GroebnerResult:
    """Weak-MF5 on the top homogeneous components, applied back to ``F``.

    The monomial order must refine the total degree.
    """
    F = list(F.F) if isinstance(F, SystemInput) else list(F)
    D = D if D is not None else (F.D if isinstance(F, SystemInput) else None)
    ring = F[0].ring
    if not ring.order.refines_degree:
        raise ValueError(f"{ring.order.kind} does not refine the total degree")
    if all(f.is_homogeneous() for f in F):
        return weak_mf5(F, D, track=track)
    top = [f.top_component() for f in F]
    res = weak_mf5(top, D, track=True)
    # the top part of F * M is the certified basis itself; only the lower
    # components are pushed through M, so cancelled terms stay exact zeros
    G = []
    for k, gk in enumerate(res.G):
        g = gk
        for j, f in enumerate(F):
            if res.M[j][k] and not f.is_homogeneous():
                low = Polynomial(ring, {m: c for m, c in f.terms.items() if sum(m) < f.degree()})
                g = g + res.M[j][k] * low
        G.append(g)
    out = GroebnerResult(F, G, res.M if track else None, D, res.report)
    out.report.realized_loss = out.realized_loss
    return out
