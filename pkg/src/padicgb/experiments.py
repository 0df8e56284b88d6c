"""Random systems and the precision-loss experiment pipeline.

Trial ``t`` of a run with seed ``s`` draws everything from
``random.Random(f"{s}/{t}")``, so trials are reproducible one by one and can
be run in any order (or in parallel) with the same aggregate.
"""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass

from .cdvf import CdvfContext
from .errors import PrecisionError, StructureOrPrecisionFailure
from .f5core import affine_weak_mf5, weak_matrix, weak_mf5
from .polyring import PolyRing, Polynomial, monomials_of_degree

METHODS = {"mf5": weak_mf5, "matrix": weak_matrix, "affine": affine_weak_mf5}


@dataclass
class ExperimentConfig:
    degrees: list
    D: int
    p: int
    trials: int = 1
    prec: int = 30
    n: int | None = None
    order: str = "grevlex"
    seed: int = 0
    method: str = "mf5"
    field: str = "qp"

    def __post_init__(self):
        if not self.degrees:
            raise ValueError("need at least one degree")
        if self.n is None:
            self.n = len(self.degrees)
        if self.D < max(self.degrees):
            raise ValueError(f"degree cap {self.D} is below the largest degree {max(self.degrees)}")
        if self.trials < 1:
            raise ValueError("need at least one trial")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")

    def context(self) -> CdvfContext:
        return CdvfContext(self.p, "padic" if self.field == "qp" else "series")

    def ring(self) -> PolyRing:
        return PolyRing(self.n, order=self.order, domain=self.context())

    def trial_rng(self, t: int) -> random.Random:
        return random.Random(f"{self.seed}/{t}")


def random_system(cfg: ExperimentConfig, rng: random.Random, exact: bool = False):
    """Homogeneous ``f_i`` of degree ``d_i`` with uniform coefficients in ``Z/p^prec``.

    With ``exact=False`` each coefficient is ``c + O(p^prec)`` (it may be
    indistinguishable from zero); with ``exact=True`` it is the integer ``c``.
    For power series the digits are drawn uniformly in F_p.
    """
    ring = cfg.ring()
    ctx = ring.domain
    pk = cfg.p ** cfg.prec
    F = []
    for d in cfg.degrees:
        terms = {}
        for m in monomials_of_degree(cfg.n, d, cfg.order):
            if ctx.is_padic:
                v = rng.randrange(pk)
            else:
                v = tuple(rng.randrange(cfg.p) for _ in range(cfg.prec))
            c = ctx.exact(v)
            terms[m] = c if exact else c.truncate(cfg.prec)
        F.append(Polynomial(ring, terms))
    return F


@dataclass
class TrialRecord:
    trial: int
    failed: bool
    bound: int | None = None
    max_loss: int | None = None
    loss_sum: int = 0
    coeffs: int = 0
    error: str = ""
    degenerate_inputs: int = 0  # input coefficients indistinguishable from zero

    def to_json(self):
        return asdict(self)


@dataclass
class ExperimentStats:
    max: int
    mean: float
    gap: int | None
    failures: int
    trials: int

    def to_json(self):
        return asdict(self)


def aggregate(records) -> ExperimentStats:
    """Statistics from per-trial records (pure: any order gives the same result)."""
    ok = [r for r in records if not r.failed]
    total = sum(r.coeffs for r in ok)
    return ExperimentStats(
        max=max((r.max_loss for r in ok), default=0),
        mean=(sum(r.loss_sum for r in ok) / total) if total else 0.0,
        gap=max((r.bound - r.max_loss for r in ok), default=None),
        failures=len(records) - len(ok),
        trials=len(records),
    )


def run_trial(cfg: ExperimentConfig, t: int) -> TrialRecord:
    rng = cfg.trial_rng(t)
    F = random_system(cfg, rng)
    degenerate = sum(1 for f in F for c in f.terms.values() if c.is_indistinguishable())
    try:
        res = METHODS[cfg.method](F, cfg.D, track=False)
    except (StructureOrPrecisionFailure, PrecisionError) as exc:
        return TrialRecord(t, True, error=f"{type(exc).__name__}: {exc}", degenerate_inputs=degenerate)
    losses = [cfg.prec - c.order for g in res.G for c in g.terms.values() if not c.is_exact()]
    return TrialRecord(
        t, False, bound=res.report.bound, max_loss=max(losses, default=0),
        loss_sum=sum(losses), coeffs=len(losses), degenerate_inputs=degenerate)


def run_experiment(cfg: ExperimentConfig, progress=None):
    """Run every trial; returns ``(stats, records)``."""
    records = []
    for t in range(cfg.trials):
        records.append(run_trial(cfg, t))
        if progress is not None:
            progress(t, records[-1])
    return aggregate(records), records


def format_stats(cfg: ExperimentConfig, stats: ExperimentStats) -> str:
    head = f"{'d':<14}{'D':>4}{'p':>5}{'n_exp':>7}{'max':>6}{'mean':>8}{'gap':>6}{'f':>4}"
    gap = "-" if stats.gap is None else str(stats.gap)
    row = (f"{str(cfg.degrees):<14}{cfg.D:>4}{cfg.p:>5}{stats.trials:>7}{stats.max:>6}"
           f"{stats.mean:>8.2f}{gap:>6}{stats.failures:>4}")
    return head + "\n" + row
