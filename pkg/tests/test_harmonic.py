import numpy as np
import pytest

from harmroot.errors import DivisionByZeroJet
from harmroot.expr import Z, exp
from harmroot.harmonic import (HarmonicMap, Orientation, conjugate_map, eval_map, map_jets,
                               orientation)

LINEAR = HarmonicMap(Z, -Z / 2)


def test_eval_map_examples():
    assert eval_map(LINEAR, 1) == 0.5
    assert eval_map(LINEAR, 1j) == 1.5j
    ident = HarmonicMap.analytic(Z)
    for z in (0.3 - 2j, 5, -1j):
        assert eval_map(ident, z) == z


def test_map_jets_examples():
    mj = map_jets(LINEAR, 1)
    assert mj.jacobian == 0.75
    assert mj.dilatation == -0.5
    assert mj.f == 0.5

    mj = map_jets(HarmonicMap(Z, Z**2 / 2), 1)
    assert mj.jacobian == 0
    assert mj.orientation is Orientation.DEGENERATE

    assert map_jets(HarmonicMap(Z**2, Z), 0).dilatation is None


def test_orientation_examples():
    assert orientation(LINEAR, 0) is Orientation.PRESERVING
    assert orientation(HarmonicMap(Z / 2, Z), 0) is Orientation.REVERSING
    assert orientation(HarmonicMap(Z, Z**2 / 2), 1) is Orientation.DEGENERATE


def test_degeneracy_is_relative():
    # J = 1e-12 on derivatives of size 1 is a genuine, tiny Jacobian
    f = HarmonicMap(Z, (1 - 5e-13) * Z)
    assert orientation(f, 0) is Orientation.PRESERVING
    # rounding-level cancellation is treated as zero
    f = HarmonicMap(Z, (1 - 1e-16) * Z)
    assert orientation(f, 0) is Orientation.DEGENERATE


def test_conjugate_map_examples():
    c = conjugate_map(LINEAR)
    assert c.h == LINEAR.g and c.g == LINEAR.h
    assert conjugate_map(c) == LINEAR


@pytest.mark.parametrize("f", [LINEAR, HarmonicMap(exp(Z) - 1, Z**2 / 2),
                               HarmonicMap(Z**2, Z)])
def test_conjugate_negates_jacobian_and_conjugates_value(f):
    rng = np.random.default_rng(7)
    g = conjugate_map(f)
    for z in rng.normal(size=20) + 1j * rng.normal(size=20):
        a, b = map_jets(f, z), map_jets(g, z)
        assert b.jacobian == -a.jacobian
        assert b.f == a.f.conjugate()


def test_value_is_h_plus_conj_g():
    f = HarmonicMap(exp(Z), Z**3 + 2j)
    z = 0.4 - 0.7j
    expected = np.exp(z) + np.conj(z**3 + 2j)
    assert abs(eval_map(f, z) - expected) < 1e-15
    assert f(z) == eval_map(f, z)


def test_is_analytic():
    assert HarmonicMap.analytic(exp(Z)).is_analytic
    assert not LINEAR.is_analytic


def test_jet_errors_propagate():
    with pytest.raises(DivisionByZeroJet):
        eval_map(HarmonicMap(1 / Z, 0), 0)


def test_dilatation_modulus_matches_orientation():
    rng = np.random.default_rng(13)
    maps = [LINEAR, HarmonicMap(Z / 2, Z), HarmonicMap(Z**2, Z), HarmonicMap(exp(Z), Z**2 / 2)]
    for f in maps:
        for z in rng.uniform(-1.5, 1.5, 25) + 1j * rng.uniform(-1.5, 1.5, 25):
            mj = map_jets(f, z)
            if mj.dilatation is None:
                continue
            if mj.orientation is Orientation.PRESERVING:
                assert abs(mj.dilatation) < 1
            elif mj.orientation is Orientation.REVERSING:
                assert abs(mj.dilatation) > 1


def test_eval_map_agrees_with_direct_evaluation():
    f = HarmonicMap(exp(Z) - 1, Z**2 / 2)
    for z in (0.3 + 0.1j, -2j, 1.7):
        assert eval_map(f, z) == f.h(z) + f.g(z).conjugate()
