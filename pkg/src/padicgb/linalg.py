"""Row echelon forms over a finite-precision CDVR.

Pivots are chosen with minimal valuation in the working column (ties: lowest
row index), eliminated entries become exact zeros, and the sum of the pivot
valuations bounds the loss of absolute precision on every surviving entry.

Rows are stored sparsely as ``{column: CdvfElement}`` dicts.  Macaulay matrices
are mostly zeros and the elimination only touches nonzero entries.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .cdvf import CdvfElement
from .errors import AmbiguousColumn, PrecisionError, UncertifiedBound

INF = math.inf
MINOR_LIMIT = 10 ** 6


class LabeledMatrix:
    """Sparse matrix with row signatures and column monomials.

    ``companions`` is an optional list (one per row) of sparse vectors that
    undergo the same row operations; it is how coordinates ``G = F*M`` are
    tracked through elimination.
    """

    def __init__(self, rows, ncols, row_labels=None, col_labels=None, companions=None, ctx=None):
        self.rows = [dict(r) for r in rows]
        self.ncols = ncols
        self.row_labels = list(row_labels) if row_labels is not None else list(range(len(self.rows)))
        self.col_labels = list(col_labels) if col_labels is not None else list(range(ncols))
        self.companions = [dict(c) for c in companions] if companions is not None else None
        self.ctx = ctx
        if len(self.col_labels) != ncols or len(self.row_labels) != len(self.rows):
            raise ValueError("label count does not match the matrix shape")

    @classmethod
    def from_dense(cls, entries, ctx=None, **kw):
        ncols = len(entries[0]) if entries else 0
        rows = []
        for r in entries:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
            rows.append({j: v for j, v in enumerate(r) if not v.is_zero()})
        if ctx is None and rows:
            ctx = next((v.ctx for r in entries for v in r), None)
        return cls(rows, ncols, ctx=ctx, **kw)

    @property
    def nrows(self):
        return len(self.rows)

    def copy(self) -> LabeledMatrix:
        return LabeledMatrix(self.rows, self.ncols, self.row_labels, self.col_labels,
                             self.companions, self.ctx)

    def entry(self, i, j):
        v = self.rows[i].get(j)
        return v if v is not None else self.ctx.zero()

    def to_dense(self):
        return [[self.entry(i, j) for j in range(self.ncols)] for i in range(self.nrows)]

    def leading_column(self, i):
        """First column with a certified nonzero entry (``None`` if none)."""
        for j in sorted(self.rows[i]):
            if self.rows[i][j].is_certified_nonzero():
                return j
        return None

    def dump(self) -> str:
        cells = [[str(v) for v in row] for row in self.to_dense()]
        if not cells:
            return "(empty matrix)"
        width = max(len(c) for row in cells for c in row)
        return "\n".join("[ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells)

    def __repr__(self):
        return f"LabeledMatrix({self.nrows}x{self.ncols})"


@dataclass
class EchelonReport:
    """Outcome of an elimination.

    ``pivots`` holds ``(row, column, valuation)`` in processing order and
    ``stop_column`` the first column left unprocessed (``ncols`` when the
    elimination ran to the end).
    """

    pivots: list = field(default_factory=list)
    permutation: list = field(default_factory=list)
    stop_column: int = 0
    ncols: int = 0

    @property
    def loss_bound(self) -> int:
        return sum(v for _, _, v in self.pivots)

    @property
    def pivot_columns(self):
        return [c for _, c, _ in self.pivots]

    @property
    def rank(self):
        return len(self.pivots)

    @property
    def complete(self):
        return self.stop_column >= self.ncols


def pivot_eliminate(M: LabeledMatrix, pivot_row: int, target_row: int, col: int):
    """``L_target <- L_target - (M[target, col] / piv) * L_pivot``; the target entry becomes exact zero."""
    piv = M.rows[pivot_row].get(col)
    if piv is None or not piv.is_certified_nonzero():
        raise PrecisionError(f"pivot at ({pivot_row}, {col}) has no certified valuation")
    t = M.rows[target_row].get(col)
    if t is None:
        return
    if t.val is None and t.order <= piv.val:
        raise AmbiguousColumn(
            f"entry {t} at ({target_row}, {col}) cannot be eliminated by pivot {piv}", col)
    _eliminate(M, pivot_row, target_row, col, t / piv)


def _eliminate(M, pr, tr, col, q):
    prow, trow = M.rows[pr], M.rows[tr]
    del trow[col]
    for j, v in prow.items():
        if j == col:
            continue
        w = trow.get(j)
        nv = -(q * v) if w is None else w - q * v
        if nv.val == INF:
            trow.pop(j, None)
        else:
            trow[j] = nv
    if M.companions is not None:
        pc, tc = M.companions[pr], M.companions[tr]
        for k, v in pc.items():
            w = tc.get(k)
            nv = -(q * v) if w is None else w - q * v
            if nv.val == INF:
                tc.pop(k, None)
            else:
                tc[k] = nv


def _echelon(M, prefix, priority=None, start=0):
    rank_of = priority if priority is not None else list(range(M.nrows))
    remaining = sorted(range(M.nrows), key=lambda r: rank_of[r])
    report = EchelonReport(ncols=M.ncols)
    col = start
    while col < M.ncols and remaining:
        best = None
        bestkey = None
        ambiguous = []
        holders = []
        for r in remaining:
            v = M.rows[r].get(col)
            if v is None:
                continue
            holders.append(r)
            if v.val is None:
                ambiguous.append(r)
                continue
            key = (v.val, rank_of[r])
            if bestkey is None or key < bestkey:
                best, bestkey = r, key
        if best is None:
            if prefix:
                break
            if ambiguous:
                raise AmbiguousColumn(
                    f"column {col}: remaining entries are all indistinguishable from zero", col)
            col += 1
            continue
        piv = M.rows[best][col]
        for r in ambiguous:
            if M.rows[r][col].order <= piv.val:
                raise AmbiguousColumn(
                    f"column {col}: entry {M.rows[r][col]} may have smaller valuation than pivot {piv}", col)
        for r in holders:
            if r != best:
                _eliminate(M, best, r, col, M.rows[r][col] / piv)
        report.pivots.append((best, col, piv.val))
        remaining.remove(best)
        col += 1
    # in prefix mode every column before stop_column carries a pivot
    report.stop_column = col if prefix else M.ncols
    report.permutation = [r for r, _, _ in report.pivots] + remaining
    return report


def row_echelon(M: LabeledMatrix, priority=None, inplace=False):
    """Full echelon form; raises :class:`AmbiguousColumn` when the shape is uncertifiable."""
    W = M if inplace else M.copy()
    return W, _echelon(W, prefix=False, priority=priority)


def row_echelon_prefix(M: LabeledMatrix, priority=None, inplace=False):
    """Echelonize columns up to the first one without a certified nonzero candidate pivot.

    Returns ``(M', report, l)`` with ``l`` the 0-based stopping column.
    """
    W = M if inplace else M.copy()
    rep = _echelon(W, prefix=True, priority=priority)
    return W, rep, rep.stop_column


def _det(rows):
    # fraction-free Bareiss on integer/rational matrices
    n = len(rows)
    a = [list(r) for r in rows]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else Fraction(1)


def min_minor_valuation(M: LabeledMatrix, l: int) -> float:
    """Minimum valuation of the ``l x l`` minors on the first ``l`` columns (brute force)."""
    n = M.nrows
    if l == 0:
        return 0
    if l > n or l > M.ncols:
        return INF
    if math.comb(n, l) > MINOR_LIMIT:
        raise ValueError(f"too many minors: C({n}, {l}) > {MINOR_LIMIT}")
    ctx = M.ctx
    dense = [[M.entry(i, j) for j in range(l)] for i in range(n)]
    order = min((v.order for row in dense for v in row), default=INF)
    if not ctx.is_padic:
        raise NotImplementedError("minor enumeration is implemented for p-adic entries")
    vals = [[Fraction(v.lift().rational()) for v in row] for row in dense]
    best = INF
    from .cdvf import padic_valuation

    for rows in itertools.combinations(range(n), l):
        d = _det([vals[i] for i in rows])
        v = padic_valuation(d, ctx.p)
        if v < best:
            best = v
    if best >= order:
        raise UncertifiedBound(f"minor valuation {best} not certified at order {order}")
    return best
