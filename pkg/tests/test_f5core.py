import random
from math import comb

import pytest

from padicgb.cdvf import CdvfContext
from padicgb.errors import StructureOrPrecisionFailure, UncertifiedBound
from padicgb.experiments import ExperimentConfig, random_system
from padicgb.f5core import (
    SystemInput, affine_weak_mf5, hilbert_ideal_dims, macaulay_bound, macaulay_matrix,
    prec_mac, prec_mf5, weak_matrix, weak_mf5,
)
from padicgb.oracle import buchberger_reduced
from padicgb.polyring import PolyRing, interreduce

Q5 = CdvfContext(5)
R = PolyRing(3, domain=Q5)
x, y, z = R.gens()


def approx(F, k):
    return [f.truncate(k) for f in F]


def test_macaulay_bound():
    assert macaulay_bound([2, 3, 4]) == 7
    assert macaulay_bound([3, 4, 7]) == 12
    assert macaulay_bound([1]) == 1
    with pytest.raises(ValueError):
        macaulay_bound([])


def test_hilbert_dims_regular_sequence():
    dims = hilbert_ideal_dims([2, 2], 3, 4)
    # ideal of two generic quadrics in 3 variables: dims 0, 0, 2, 6, 11
    assert dims[2] == [0, 0, 2, 6, 11]
    assert dims[0] == [0] * 5
    # a complete intersection of n forms fills everything past the Macaulay bound
    dims = hilbert_ideal_dims([2, 2, 3], 3, 6)
    assert dims[3][5] == comb(7, 2) and dims[3][6] == comb(8, 2)


def test_macaulay_matrix_shape():
    F = [x, x * y ** 2 + y ** 3 + z ** 3]
    M = macaulay_matrix(F, 3)
    # rows x * (monomials of degree 2) and f2 itself
    assert len(M.rows) == 6 + 1
    assert M.ncols == 10


def test_worked_example_basis_and_coordinates():
    F = approx([x, x * y ** 2 + y ** 3 + z ** 3], 10)
    res = weak_mf5(F, 3)
    assert res.lms == [(1, 0, 0), (0, 3, 0)]
    assert res.realized_loss == 0
    assert res.check_coordinates()
    m12 = res.M[0][1]
    assert list(m12.terms) == [(0, 2, 0)]
    assert m12.terms[(0, 2, 0)].contains(-1)
    assert not res.M[1][0]
    assert res.M[1][1].terms[(0, 0, 0)].contains(1)


def test_precision_bound_example():
    F = [5 * x, y, 25 * x * y + z ** 2]
    assert prec_mf5(F, 2) == 3
    assert prec_mac(F, 2) == 2


def test_bound_needs_enough_precision():
    F = approx([5 * x, y, 25 * x * y + z ** 2], 1)
    with pytest.raises(UncertifiedBound):
        prec_mf5(F, 2)


def test_lifting_example_at_low_precision():
    F = approx([10 * x, 25 * x * y ** 2 + y ** 3 + z ** 3], 4)
    res = weak_mf5(F, 3)
    assert res.lms == [(1, 0, 0), (0, 3, 0)]
    g1, g2 = res.G
    assert g1.terms[(1, 0, 0)].contains(10)
    assert g2.terms[(0, 3, 0)].contains(1) and g2.terms[(0, 0, 3)].contains(1)
    # the orders are at least those of the reference output
    assert g1.terms[(1, 0, 0)].order >= 4
    assert all(c.order >= 3 for c in g2.terms.values())
    assert res.check_coordinates()


@pytest.mark.parametrize("F", [
    [x + y, x * y + y ** 2 + z ** 2],  # regular, not weakly-grevlex
    [x + y, x ** 2 + x * y],           # weakly-grevlex, not regular
])
def test_structure_failures(F):
    with pytest.raises(StructureOrPrecisionFailure) as info:
        weak_mf5(approx(F, 10), 3)
    assert info.value.degree == 2 and info.value.index == 2


def test_too_little_precision_fails():
    with pytest.raises(StructureOrPrecisionFailure):
        weak_mf5(approx([10 * x, 25 * x * y ** 2 + y ** 3 + z ** 3], 1), 3)


def test_weak_matrix_agrees_with_mf5():
    F = approx([x, x * y ** 2 + y ** 3 + z ** 3], 10)
    a, b = weak_mf5(F, 3), weak_matrix(F, 3)
    assert a.lms == b.lms
    assert all(g.agrees(h) for g, h in zip(a.G, b.G))
    assert b.check_coordinates()


def test_generator_order_does_not_matter():
    F = approx([x * y ** 2 + y ** 3 + z ** 3, x], 10)
    res = weak_mf5(F, 3)
    assert res.lms == [(1, 0, 0), (0, 3, 0)]
    assert res.check_coordinates()


def test_negative_valuations_are_rescaled():
    F = [x.scale(Q5.exact(1) / 25), y + z.scale(Q5.exact(1) / 5)]
    res = weak_mf5(approx(F, 10), 1)
    assert res.lms == [(1, 0, 0), (0, 1, 0)]
    assert res.check_coordinates()


def test_system_input_validation():
    with pytest.raises(TypeError):
        SystemInput([PolyRing(2).gens()[0]], 2)
    with pytest.raises(ValueError):
        SystemInput([], 2)


def test_affine_equals_homogeneous_on_homogeneous_input():
    cfg = ExperimentConfig([2, 2, 3], 5, 7, prec=20)
    F = random_system(cfg, cfg.trial_rng(0))
    a, b = weak_mf5(F, 5), affine_weak_mf5(F, 5)
    assert [str(g) for g in a.G] == [str(g) for g in b.G]


def test_affine_rejects_lex():
    Rl = PolyRing(2, order="lex", domain=Q5)
    u, v = Rl.gens()
    with pytest.raises(ValueError):
        affine_weak_mf5([u + 1, v], 2)


def test_affine_inhomogeneous():
    one = R.one()
    F = approx([x + one.scale(5), x * y ** 2 + y ** 3 + z ** 3 + y], 10)
    res = affine_weak_mf5(F, 3)
    assert res.lms == [(1, 0, 0), (0, 3, 0)]
    assert res.check_coordinates()


@pytest.mark.parametrize("seed", range(5))
def test_random_systems_match_oracle(seed):
    cfg = ExperimentConfig([2, 2, 3], 5, 7, prec=20, seed=seed)
    rng = cfg.trial_rng(0)
    F = random_system(cfg, rng, exact=True)
    res = weak_mf5([f.truncate(20) for f in F], 5)
    ref = buchberger_reduced(F)
    G, _ = interreduce(res.G, monic=True)
    assert [g.leading_monomial() for g in G] == [g.leading_monomial() for g in ref]
    for g, h in zip(G, ref):
        for m, c in h.terms.items():
            assert g.terms[m].contains(c)
    assert 0 <= res.realized_loss <= res.report.bound
