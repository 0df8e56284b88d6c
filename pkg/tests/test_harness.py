import json
import random
from collections import Counter
from fractions import Fraction

import pytest

from padicgb.cdvf import CdvfContext
from padicgb.cli import main
from padicgb.errors import ParseError
from padicgb.experiments import (
    ExperimentConfig, TrialRecord, aggregate, format_stats, random_system, run_experiment,
)
from padicgb.f5core import weak_mf5
from padicgb.polyring import PolyRing
from padicgb.textio import parse_system, result_from_json, result_to_json

S63 = "field: qp 5\nvars: x, y, z\norder: grevlex\n10*x\n25*x*y^2 + y^3 + z^3\n"
S34 = "vars: x y z\n5*x\ny\n25*x*y + z^2\n"


# --- experiments -------------------------------------------------------------


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig([3, 4], 3, 7)
    with pytest.raises(ValueError):
        ExperimentConfig([2], 2, 7, trials=0)
    with pytest.raises(ValueError):
        ExperimentConfig([2], 2, 7, method="f4")
    assert ExperimentConfig([2, 2, 3], 5, 7).n == 3


def test_random_system_deterministic():
    cfg = ExperimentConfig([2, 2, 3], 5, 7, seed=4)
    a = random_system(cfg, cfg.trial_rng(3))
    b = random_system(cfg, cfg.trial_rng(3))
    assert [str(f) for f in a] == [str(f) for f in b]
    c = random_system(cfg, cfg.trial_rng(4))
    assert [str(f) for f in a] != [str(f) for f in c]


def test_random_system_term_counts():
    cfg = ExperimentConfig([3, 4, 7], 12, 7)
    F = random_system(cfg, cfg.trial_rng(0))
    assert [len(f.terms) for f in F] == [10, 15, 36]
    assert all(c.order == 30 for f in F for c in f.terms.values())
    assert all(f.is_homogeneous() for f in F)


def test_random_coefficients_uniform():
    # chi-square on the residues mod 7 of 10^4 coefficients (6 dof, 0.1% level)
    cfg = ExperimentConfig([2], 2, 7, n=4, prec=5)
    rng = random.Random(0)
    counts = Counter()
    while sum(counts.values()) < 10000:
        for f in random_system(cfg, rng, exact=True):
            for c in f.terms.values():
                counts[int(c.rational()) % 7] += 1
    total = sum(counts.values())
    chi2 = sum((counts[r] - total / 7) ** 2 / (total / 7) for r in range(7))
    assert chi2 < 22.46


def test_series_random_system():
    cfg = ExperimentConfig([2, 2], 3, 3, n=2, prec=8, field="fpt")
    F = random_system(cfg, cfg.trial_rng(0))
    assert not F[0].ring.domain.is_padic
    assert all(c.order == 8 for f in F for c in f.terms.values())


def test_run_experiment_small():
    cfg = ExperimentConfig([2, 2, 3], 5, 7, trials=4, seed=2)
    stats, recs = run_experiment(cfg)
    assert stats.trials == 4 and len(recs) == 4
    assert stats.failures == 0
    for r in recs:
        assert 0 <= r.max_loss <= r.bound
    assert stats.gap >= 0
    # aggregation does not depend on the order of the records
    assert aggregate(list(reversed(recs))) == stats
    assert "n_exp" in format_stats(cfg, stats)


def test_unit_pivots_lose_nothing():
    ctx = CdvfContext(7)
    R = PolyRing(3, domain=ctx)
    res = weak_mf5([g.truncate(30) for g in R.gens()], 1)
    assert res.realized_loss == 0 and res.report.bound == 0
    stats = aggregate([TrialRecord(0, False, bound=0, max_loss=0, loss_sum=0, coeffs=3)])
    assert (stats.max, stats.mean, stats.failures, stats.gap) == (0, 0.0, 0, 0)


def test_failures_are_counted():
    recs = [TrialRecord(0, True, error="x"), TrialRecord(1, False, bound=3, max_loss=1, loss_sum=2, coeffs=4)]
    stats = aggregate(recs)
    assert stats.failures == 1 and stats.max == 1 and stats.mean == 0.5 and stats.gap == 2


# --- text input ----------------------------------------------------------------


def test_parse_worked_system():
    s = parse_system(S63, prec=4)
    assert s.ring.names == ("x", "y", "z")
    assert s.ring.domain.p == 5
    assert [str(f) for f in s.source] == ["10*x", "25*x*y^2 + y^3 + z^3"]
    assert [str(f) for f in s.F] == ["(10 + O(5^4))*x", "(25 + O(5^4))*x*y^2 + (1 + O(5^4))*y^3 + (1 + O(5^4))*z^3"]


def test_parse_expressions():
    s = parse_system("vars: x y\n(x + y)^2 - 2*x*y\n3/5*x + O(5^3)*y\n-(x)\n", p=5)
    a, b, c = s.source
    assert str(a) == "x^2 + y^2"
    assert b.terms[(1, 0)].rational() == Fraction(3, 5)
    assert b.terms[(0, 1)].is_indistinguishable() and b.terms[(0, 1)].order == 3
    assert str(c) == "-x"


def test_parse_round_trip():
    s = parse_system(S63, prec=4)
    text = "vars: x y z\n" + "\n".join(str(f) for f in s.F) + "\n"
    t = parse_system(text, p=5)
    assert [str(f) for f in t.source] == [str(f) for f in s.F]


def test_parse_series():
    s = parse_system("field: fpt 3\nvars: x y\n(1 + 2*t)*x + O(t^4)*y\nt^2*y\n", prec=6)
    f = s.F[0]
    c = f.terms[(1, 0)]
    assert c.order == 6 and c.unit[:2] == (1, 2)
    assert s.source[1].terms[(0, 1)].valuation() == 2


def test_vars_inferred_and_overrides():
    s = parse_system("field: qp 7\nb + a\na*b\n", p=5, order="lex")
    assert s.ring.names == ("b", "a")
    assert s.ring.domain.p == 5 and s.ring.order.kind == "lex"


@pytest.mark.parametrize("text,line,col", [
    ("", 1, 1),
    ("# only a comment\n\n", 1, 1),
    ("vars: x y\nx + 3*$y\n", 2, 7),
    ("vars: x y\nx + (y\n", 2, 7),
    ("vars: x y\nx + w\n", 2, 5),
    ("vars: x y\nx / y\n", 2, 3),
    ("vars: x y\nx + O(3)*y\n", 2, 5),
    ("vars: x y\nx^y\n", 2, 3),
    ("vars: x y\nx - x\n", 2, 1),
    ("vars: x y\norder: deglex\nx\n", 2, 8),
    ("vars: x y\nx\nfield: qp 5\n", 3, 1),
])
def test_parse_errors(text, line, col):
    with pytest.raises(ParseError) as info:
        parse_system(text, p=5)
    assert (info.value.line, info.value.column) == (line, col)
    assert str(info.value).startswith(f"line {line}, column {col}: ")


def test_missing_prime():
    with pytest.raises(ParseError):
        parse_system("vars: x\nx\n")


def test_json_round_trip():
    s = parse_system(S63, prec=4)
    res = weak_mf5(s.F, 3)
    doc = json.loads(json.dumps(result_to_json(s, res, "mf5")))
    assert doc["schema"] == "padicgb/1"
    back = result_from_json(doc)
    assert back.prec == 4
    assert [str(g) for g in back.G] == [str(g) for g in res.G]
    assert [[str(a) for a in row] for row in back.M] == [[str(a) for a in row] for row in res.M]
    assert [str(f) for f in back.source] == ["10*x", "25*x*y^2 + y^3 + z^3"]


# --- command line --------------------------------------------------------------


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, text in {"s63": S63, "s34": S34, "empty": "",
                       "h1": "vars: x y z\nx + y\nx*y + y^2 + z^2\n",
                       "h2": "vars: x y z\nx + y\nx^2 + x*y\n",
                       "bad": "vars: x y\nx +* y\n"}.items():
        p = tmp_path / f"{name}.txt"
        p.write_text(text)
        out[name] = str(p)
    out["dir"] = tmp_path
    return out


def test_cli_gb(files, capsys):
    assert main(["gb", "--p", "5", "--prec", "4", files["s63"]]) == 0
    out = capsys.readouterr().out
    assert "(10 + O(5^4))*x" in out and "leading monomials: x, y^3" in out


def test_cli_gb_lift_pipeline(files, capsys):
    res = str(files["dir"] / "r.json")
    assert main(["gb", "--p", "5", "--prec", "4", "--out", "json", "-o", res, files["s63"]]) == 0
    assert main(["lift", res]) == 0
    out = capsys.readouterr().out
    assert "10*x" in out and "y^3 + z^3" in out and "O(" not in out
    assert main(["lift", res, "--to", "8", "--out", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["basis_text"] == ["(10 + O(5^8))*x", "(1 + O(5^8))*y^3 + (1 + O(5^8))*z^3"]


def test_cli_prec(files, capsys):
    assert main(["prec", "--p", "5", files["s34"]]) == 0
    assert capsys.readouterr().out.split() == ["prec_MF5", "=", "3", "prec_Mac", "=", "2"]


def test_cli_exit_codes(files, capsys):
    assert main(["gb", "--p", "5", files["empty"]]) == 1
    assert main(["gb", "--p", "5", files["bad"]]) == 1
    err = capsys.readouterr().err
    assert "line 2, column 4" in err
    assert main(["gb", "--p", "5", "--prec", "10", files["h1"]]) == 2
    assert main(["gb", "--p", "5", "--prec", "10", files["h2"]]) == 2
    assert main(["prec", "--p", "5", "--prec", "1", files["s34"]]) == 3
    assert main(["gb", "--p", "5", str(files["dir"] / "missing.txt")]) == 1
    with pytest.raises(SystemExit) as info:
        main(["gb", "--order", "deglex", files["s63"]])
    assert info.value.code == 1


def test_cli_oracle(files, capsys):
    assert main(["oracle", "--p", "5", files["s63"]]) == 0
    assert capsys.readouterr().out.splitlines()[1:3] == ["  x,", "  y^3 + z^3,"]
    assert main(["oracle", "--p", "5", "--modular", files["s63"]]) == 0


def test_cli_experiment_deterministic(files, capsys):
    args = ["experiment", "--degrees", "2,2,3", "--degree-cap", "5", "--p", "7", "--trials", "3",
            "--seed", "9", "--out", "json"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    assert capsys.readouterr().out == first
    doc = json.loads(first)
    assert doc["stats"]["failures"] == 0 and len(doc["trials"]) == 3


def test_cli_diff(files, capsys):
    assert main(["diff", "--degrees", "2,2,3", "--p", "7", "--degree-cap", "5", "--trials", "2"]) == 0
    out = capsys.readouterr().out
    assert "difference" in out and "differential" in out
    assert main(["diff", "--p", "5", "--prec", "5", "--degree-cap", "3", "--trials", "1", files["s63"]]) == 0
