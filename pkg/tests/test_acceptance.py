"""Acceptance criteria 1-11; a PASS/FAIL line per criterion is printed at the end of the run."""

import json
import os
import random
import time
from fractions import Fraction

import pytest

from padicgb.cdvf import CdvfContext
from padicgb.cli import main
from padicgb.errors import AmbiguousColumn, StructureOrPrecisionFailure, UncertifiedBound
from padicgb.experiments import ExperimentConfig, random_system, run_experiment
from padicgb.f5core import affine_weak_mf5, macaulay_bound, prec_mac, prec_mf5, weak_mf5
from padicgb.linalg import LabeledMatrix, min_minor_valuation, row_echelon, row_echelon_prefix
from padicgb.oracle import buchberger_reduced, check_regular_sequence, check_weakly_w
from padicgb.polyring import PolyRing, interreduce, monomials_of_degree
from padicgb.sensitivity import Perturbation, compare_methods, differential, exact_reduced_with_coords

Q5 = CdvfContext(5)
R5 = PolyRing(3, domain=Q5)
x, y, z = R5.gens()

# criterion 8 uses seeds that were not looked at during development; override to rerun
SEED8 = int(os.environ.get("PADICGB_ACCEPTANCE_SEED", "20261018"))


def acceptance(num, title):
    return pytest.mark.acceptance(num, title)


@acceptance(1, "worked example: LMs {x, y^3}, M = [[1, -y^2], [0, 1]], < 1 s")
def test_criterion_1(record_property):
    t = time.perf_counter()
    F = [f.truncate(10) for f in (x, x * y ** 2 + y ** 3 + z ** 3)]
    res = weak_mf5(F, 3)
    elapsed = time.perf_counter() - t
    loss = res.realized_loss
    want_G = [{(1, 0, 0): 1}, {(0, 3, 0): 1, (0, 0, 3): 1}]
    want_M = [[{(0, 0, 0): 1}, {(0, 2, 0): -1}], [{}, {(0, 0, 0): 1}]]

    def match(poly, want):
        if set(poly.terms) != set(want):
            return False
        return all(c.contains(want[m]) and (c.is_exact() or c.order >= 10 - loss)
                   for m, c in poly.terms.items())

    ok_lm = set(res.lms) == {(1, 0, 0), (0, 3, 0)}
    ok_g = all(match(g, w) for g, w in zip(res.G, want_G)) and len(res.G) == 2
    ok_m = all(match(res.M[j][k], want_M[j][k]) for j in range(2) for k in range(2))
    record_property("detail", f"loss {loss}, {elapsed:.3f} s")
    assert ok_lm and ok_g and ok_m and res.check_coordinates()
    assert elapsed < 1


@acceptance(2, "prec_mf5((5x, y, 25xy + z^2), 2) = 3 and prec_mac = 2, < 1 s")
def test_criterion_2(record_property):
    t = time.perf_counter()
    F = [5 * x, y, 25 * x * y + z ** 2]
    a, b = prec_mf5(F, 2), prec_mac(F, 2)
    elapsed = time.perf_counter() - t
    record_property("detail", f"prec_mf5 {a}, prec_mac {b}, {elapsed:.3f} s")
    assert (a, b) == (3, 2)
    assert elapsed < 1


@acceptance(3, "gb(p=5, prec=4) then lift(inf) gives exactly (10x, y^3 + z^3), < 1 s")
def test_criterion_3(record_property, tmp_path, capsys):
    src = tmp_path / "sys.txt"
    src.write_text("field: qp\nvars: x, y, z\norder: grevlex\n10*x\n25*x*y^2 + y^3 + z^3\n")
    out = tmp_path / "gb.json"
    lifted = tmp_path / "lift.json"
    t = time.perf_counter()
    rc1 = main(["gb", "--p", "5", "--prec", "4", "--out", "json", "-o", str(out), str(src)])
    rc2 = main(["lift", str(out), "--out", "json", "-o", str(lifted)])
    elapsed = time.perf_counter() - t
    doc = json.loads(lifted.read_text())
    got = [{tuple(term["monomial"]): (Fraction(term["value"]), term["order"]) for term in g}
           for g in doc["basis"]]
    want = [{(1, 0, 0): (Fraction(10), None)},
            {(0, 3, 0): (Fraction(1), None), (0, 0, 3): (Fraction(1), None)}]
    record_property("detail", f"{doc['basis_text']}, {elapsed:.3f} s")
    assert rc1 == 0 and rc2 == 0
    assert got == want
    assert elapsed < 1


@acceptance(4, "differential of the worked example is (0, O(5^5) z^3)")
def test_criterion_4(record_property):
    F = [x, x * y ** 2 + y ** 3 + z ** 3]
    G, M = exact_reduced_with_coords(F, 3)
    dg = differential(F, M, G, Perturbation.balls(F, 5))
    record_property("detail", f"({dg[0]}, {dg[1]})")
    assert not dg[0].terms
    assert list(dg[1].terms) == [(0, 0, 3)]
    c = dg[1].terms[(0, 0, 3)]
    assert c.is_indistinguishable() and c.order == 5


def _uniform_matrix(rng, ctx, n, m, k, exact=False):
    rows = [[rng.randrange(ctx.p ** k) for _ in range(m)] for _ in range(n)]
    mk = (lambda v: ctx.exact(v)) if exact else (lambda v: ctx.approx(v, k))
    return LabeledMatrix.from_dense([[mk(v) for v in r] for r in rows], ctx=ctx)


@acceptance(5, "row-echelon precision: 500 matrices, orders >= 20 - val(Delta), 0 violations")
def test_criterion_5(record_property):
    rng = random.Random(505)
    k = 20
    violations = skipped = 0
    for trial in range(500):
        ctx = CdvfContext(rng.choice([2, 5, 7]))
        n = rng.randint(1, 6)
        m = rng.randint(1, 8)
        M = _uniform_matrix(rng, ctx, n, m, k)
        try:
            E, rep = row_echelon(M)
        except AmbiguousColumn:
            skipped += 1  # the shape itself is not certified at this precision
            continue
        X = LabeledMatrix.from_dense([[v.lift() for v in row] for row in M.to_dense()], ctx=ctx)
        Xe, xrep = row_echelon(X)
        delta = rep.loss_bound
        if xrep.pivots != rep.pivots:
            violations += 1
            continue
        for i in range(n):
            for j in range(m):
                a, b = E.entry(i, j), Xe.entry(i, j)
                if a.is_zero():
                    violations += not b.is_zero()
                elif a.order < k - delta or not a.contains(b.rational()):
                    violations += 1
    record_property("detail", f"{violations} violations, {500 - skipped} matrices checked, "
                              f"{skipped} with uncertified shape")
    assert violations == 0
    assert skipped < 100


@acceptance(6, "pivot valuations equal the minimal l-minor valuation on 200 matrices")
def test_criterion_6(record_property):
    rng = random.Random(606)
    violations = 0
    for trial in range(200):
        ctx = CdvfContext(rng.choice([2, 3, 5, 7]))
        n = rng.randint(1, 5)
        m = rng.randint(1, 7)
        rows = [[ctx.exact(rng.randrange(ctx.p ** 6) * ctx.p ** rng.choice([0, 0, 1, 2]))
                 for _ in range(m)] for _ in range(n)]
        M = LabeledMatrix.from_dense(rows, ctx=ctx)
        _, rep, l = row_echelon_prefix(M)
        if rep.loss_bound != min_minor_valuation(M, l):
            violations += 1
    record_property("detail", f"{violations} violations")
    assert violations == 0


def _small_system(rng, degrees, ring):
    F = []
    for d in degrees:
        terms = {m: rng.randint(-9, 9) for m in monomials_of_degree(3, d)}
        F.append(ring.from_dict({m: c for m, c in terms.items() if c}))
    return F


def _contains_all(approx, exact):
    mons = set(approx.terms) | set(exact.terms)
    for m in mons:
        a = approx.terms.get(m)
        b = exact.terms.get(m)
        bv = b.rational() if b is not None and hasattr(b, "rational") else (b or 0)
        if a is None:
            if bv != 0:
                return False
        elif not a.contains(bv):
            return False
    return True


@acceptance(7, "oracle equivalence on 50 random H1+H2 systems, m = 2 prec_mf5 + 5")
def test_criterion_7(record_property):
    rng = random.Random(707)
    agree_lm = agree_coef = done = rejected = 0
    while done < 50:
        p = rng.choice([5, 7])
        ctx = CdvfContext(p)
        ring = PolyRing(3, domain=ctx)
        degrees = rng.choice([[2, 2], [2, 3], [2, 2, 3]])
        F = _small_system(rng, degrees, ring)
        if any(not f.terms for f in F) or not (check_regular_sequence(F) and check_weakly_w(F)):
            rejected += 1
            continue
        ref = buchberger_reduced(F)
        D = max(macaulay_bound(degrees), max(g.degree() for g in ref))
        try:
            bound = prec_mf5(F, D)
        except (StructureOrPrecisionFailure, UncertifiedBound):
            done += 1
            continue
        m = 2 * bound + 5
        res = weak_mf5([f.truncate(m) for f in F], D)
        exact = weak_mf5(F, D)
        done += 1
        G, _ = interreduce(res.G, monic=True)
        if [g.leading_monomial() for g in G] != [g.leading_monomial() for g in ref]:
            continue
        agree_lm += 1
        loss = res.realized_loss
        ok = all(_contains_all(a, b) for a, b in zip(res.G, exact.G))
        ok = ok and all(c.is_exact() or c.order >= m - loss for g in res.G for c in g.terms.values())
        ok = ok and all(_contains_all(a, b) for a, b in zip(G, ref))
        agree_coef += ok
    record_property("detail", f"LMs {agree_lm}/50, coefficients {agree_coef}/50, "
                              f"{rejected} generated systems failed H1 or H2")
    assert agree_lm == 50 and agree_coef == 50


@acceptance(8, "d=[3,4,7], D=12, p=7, 30 trials: f = 0, max loss <= 5, loss <= prec_MF5")
def test_criterion_8(record_property):
    cfg = ExperimentConfig([3, 4, 7], 12, 7, trials=30, prec=30, seed=SEED8)
    t = time.perf_counter()
    stats, recs = run_experiment(cfg)
    elapsed = time.perf_counter() - t
    within = all(r.max_loss <= r.bound for r in recs if not r.failed)
    record_property("detail", f"seed {SEED8}: max {stats.max}, mean {stats.mean:.3f}, gap {stats.gap}, "
                              f"f {stats.failures}, {elapsed:.1f} s")
    assert stats.failures == 0
    assert stats.max <= 5
    assert within
    assert elapsed < 600


@acceptance(9, "d=[2,2,3], D=5, p=7, 10 trials: difference and differential within 1 on >= 8")
def test_criterion_9(record_property):
    recs = compare_methods([2, 2, 3], 5, 7, trials=10, k=30, seed=909)
    close = sum(1 for r in recs if r.difference is not None and r.differential is not None
                and abs(r.difference - r.differential) <= 1)
    row = lambda name: [getattr(r, name) for r in recs]
    record_property("detail", f"{close}/10 close; difference {row('difference')}, "
                              f"differential {row('differential')}")
    assert close >= 8


@acceptance(10, "structure failures on (x+y, xy+y^2+z^2) and (x+y, x^2+xy), oracle confirms")
def test_criterion_10(record_property):
    cases = [([x + y, x * y + y ** 2 + z ** 2], (True, False)),
             ([x + y, x ** 2 + x * y], (False, True))]
    raised, hyp = [], []
    for F, want in cases:
        try:
            weak_mf5([f.truncate(10) for f in F], 3)
            raised.append(False)
        except StructureOrPrecisionFailure:
            raised.append(True)
        hyp.append((check_regular_sequence(F), check_weakly_w(F)) == want)
    record_property("detail", f"raised {raised}, oracle {hyp}")
    assert all(raised) and all(hyp)


@acceptance(11, "prec_mac <= prec_mf5 on 100 systems; affine == weak on homogeneous; Macaulay bounds")
def test_criterion_11(record_property):
    rng = random.Random(1111)
    bad = uncertified = 0
    same = True
    for t in range(100):
        degrees = rng.choice([[2, 2], [2, 3], [2, 2, 3], [1, 2, 3]])
        cfg = ExperimentConfig(degrees, macaulay_bound(degrees) + 1, rng.choice([3, 5, 7]),
                               prec=20, seed=rng.randrange(10 ** 6))
        F = random_system(cfg, cfg.trial_rng(0))
        try:
            a, b = prec_mf5(F, cfg.D), prec_mac(F, cfg.D)
        except UncertifiedBound:
            uncertified += 1
            continue
        bad += b > a
        if t < 20:
            try:
                w = weak_mf5(F, cfg.D)
            except StructureOrPrecisionFailure:
                continue
            af = affine_weak_mf5(F, cfg.D)
            same &= [str(g) for g in w.G] == [str(g) for g in af.G]
            same &= [[str(e) for e in row] for row in w.M] == [[str(e) for e in row] for row in af.M]
    mb = (macaulay_bound([2, 3, 4]), macaulay_bound([3, 4, 7]))
    record_property("detail", f"{bad} violations, {uncertified} uncertified, affine identical {same}, "
                              f"Macaulay bounds {mb}")
    assert bad == 0 and same and mb == (7, 12)
    assert uncertified < 10
