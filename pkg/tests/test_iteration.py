import cmath
import math

import numpy as np
import pytest

from harmroot.errors import DegenerateDenominator, DegenerateJacobian, NotLocallyUnivalent
from harmroot.expr import Z, exp, sin
from harmroot.harmonic import HarmonicMap
from harmroot.iteration import (CONVERGED, IterationOptions, IterationStatus, IterationTrace,
                                StepKind, Window, cluster_points, convergence_ratios,
                                estimate_order, find_zeros, halley_step,
                                harmonic_halley_step, harmonic_newton_step, iterate,
                                iterate_many, newton_step, pooled_order, step)

from conftest import SHEAR, ZERO_SUITE

LINEAR = HarmonicMap(Z, -Z / 2)
CUBE_ROOTS = [cmath.exp(2j * math.pi * k / 3) for k in range(3)]


def test_newton_step_examples():
    assert newton_step(Z**2 - 1, 2) == 1.25
    assert newton_step(Z**2 - 1, 1) == 1
    with pytest.raises(NotLocallyUnivalent):
        newton_step(Z**2, 0)


def test_halley_step_examples():
    assert halley_step(Z**2 - 1, 2) == pytest.approx(14 / 13, abs=1e-15)
    assert halley_step(Z**2 - 1, 1) == 1
    assert halley_step(Z, 0) == 0
    with pytest.raises(DegenerateDenominator):
        halley_step(Z**2, 0)


def test_harmonic_step_examples():
    for z0 in (3 + 4j, -0.5j, 17):
        assert abs(harmonic_newton_step(LINEAR, z0)) < 1e-12
        assert abs(harmonic_halley_step(LINEAR, z0)) < 1e-12
    assert harmonic_newton_step(SHEAR, 0) == 0
    assert harmonic_halley_step(SHEAR, 0) == 0
    with pytest.raises(DegenerateJacobian):
        harmonic_newton_step(HarmonicMap(Z, Z**2 / 2), 1)
    with pytest.raises(DegenerateJacobian):
        harmonic_halley_step(HarmonicMap(Z, Z**2 / 2), 1j)


def test_step_dispatch_rejects_analytic_kinds_on_harmonic_maps():
    with pytest.raises(ValueError):
        step(SHEAR, StepKind.NEWTON, 0.1)
    assert step(HarmonicMap.analytic(Z**2 - 1), StepKind.NEWTON, 2) == 1.25


@pytest.mark.parametrize("name, f, alpha", ZERO_SUITE, ids=[s[0] for s in ZERO_SUITE])
def test_fixed_point_property(name, f, alpha):
    kinds = list(StepKind) if f.is_analytic else [StepKind.HARMONIC_NEWTON,
                                                  StepKind.HARMONIC_HALLEY]
    for kind in kinds:
        assert abs(step(f, kind, alpha) - alpha) < 1e-12, kind


def test_analytic_reduction():
    rng = np.random.default_rng(17)
    for h in (Z**3 - 1, exp(Z) - 2, sin(Z) + Z**2):
        f = HarmonicMap.analytic(h)
        for z in rng.uniform(-1.5, 1.5, 20) + 1j * rng.uniform(-1.5, 1.5, 20):
            assert abs(harmonic_newton_step(f, z) - newton_step(h, z)) < 1e-12
            assert abs(harmonic_halley_step(f, z) - halley_step(h, z)) < 1e-12


def test_linear_exactness():
    rng = np.random.default_rng(23)
    for _ in range(20):
        a, b, c, d = rng.normal(size=4) + 1j * rng.normal(size=4)
        if abs(abs(a) - abs(c)) < 0.1:
            continue
        f = HarmonicMap(a * Z + b, c * Z + d)
        # a z + b + conj(c z + d) = 0 solved as a real 2x2 system
        m = np.array([[a.real + c.real, -a.imag - c.imag], [a.imag - c.imag, a.real - c.real]])
        rhs = -np.array([b.real + d.real, b.imag - d.imag])
        x, y = np.linalg.solve(m, rhs)
        root = complex(x, y)
        assert abs(f(root)) < 1e-12
        z0 = complex(*rng.normal(size=2))
        assert abs(harmonic_newton_step(f, z0) - root) < 1e-12
        assert abs(harmonic_halley_step(f, z0) - root) < 1e-12


def test_iterate_examples():
    tr = iterate(HarmonicMap.analytic(Z**3 - 1), StepKind.NEWTON, 1.2)
    assert tr.status is IterationStatus.CONVERGED
    assert abs(tr.final - 1) < 1e-12 and tr.n_steps <= 8
    assert len(tr.iterates) == len(tr.residuals)

    tr = iterate(HarmonicMap.analytic(Z**2 + 1), StepKind.NEWTON, 0.5)
    assert tr.status in (IterationStatus.MAX_ITER_EXCEEDED, IterationStatus.DIVERGED)
    assert all(z.imag == 0 for z in tr.iterates)

    tr = iterate(LINEAR, StepKind.HARMONIC_NEWTON, 3 + 4j)
    assert tr.status is IterationStatus.CONVERGED and tr.n_steps == 1
    assert abs(tr.final) < 1e-12


def test_iterate_start_on_root():
    tr = iterate(HarmonicMap.analytic(Z**3 - 1), StepKind.NEWTON, 1)
    assert tr.status is IterationStatus.CONVERGED and tr.n_steps == 0


def test_iterate_step_error_keeps_trace():
    tr = iterate(HarmonicMap.analytic(Z**2 - 1), StepKind.NEWTON, 0)
    assert tr.status is IterationStatus.STEP_ERROR
    assert tr.iterates == [0] and tr.error


def test_iterate_divergence():
    opts = IterationOptions(divergence_radius=10)
    tr = iterate(HarmonicMap.analytic(exp(Z) - 1), StepKind.NEWTON, 30, opts)
    assert tr.status is IterationStatus.DIVERGED


def test_options_validation():
    with pytest.raises(ValueError):
        IterationOptions(residual_tol=0)
    with pytest.raises(ValueError):
        IterationOptions(max_iter=0)
    with pytest.raises(ValueError):
        Window(1, 0, 0, 1)


def test_iterate_many_matches_iterate():
    f = HarmonicMap(Z**2, -Z)
    starts = np.array([0.9 + 0.1j, -0.4 + 0.8j, 2 - 2j, 0.01j, 0j])
    finals, n, st = iterate_many(f, StepKind.HARMONIC_NEWTON, starts)
    for z0, zf, k, s in zip(starts, finals, n, st):
        tr = iterate(f, StepKind.HARMONIC_NEWTON, z0)
        assert (s == CONVERGED) == (tr.status is IterationStatus.CONVERGED)
        if s == CONVERGED:
            assert k == tr.n_steps
            assert abs(zf - tr.final) < 1e-13


# -- order estimation ------------------------------------------------------

def _synthetic(errors):
    return IterationTrace(iterates=[complex(e) for e in errors], residuals=list(errors),
                          status=IterationStatus.CONVERGED, final=complex(errors[-1]))


def test_order_synthetic_quadratic():
    tr = _synthetic([10.0 ** -(2 ** k) for k in range(5)])
    assert abs(estimate_order(tr, 0) - 2.0) < 1e-9


def test_order_synthetic_cubic():
    tr = _synthetic([10.0 ** -(3 ** k) for k in range(5)])
    assert abs(estimate_order(tr, 0) - 3.0) < 1e-9


def test_order_absent_on_short_trace():
    assert estimate_order(_synthetic([0.1, 0.01]), 0) is None


def test_order_ignores_rounding_floor():
    root = 1 + 0j
    errs = [1e-1, 1e-2, 1e-4, 1e-8, 1e-16, 2e-16]
    tr = _synthetic([root + e for e in errs])
    assert convergence_ratios(tr, root) == pytest.approx([2.0, 2.0])


def test_order_unconverged():
    tr = _synthetic([0.1, 0.01, 1e-4, 1e-8])
    tr.status = IterationStatus.MAX_ITER_EXCEEDED
    assert estimate_order(tr, 0) is None
    assert pooled_order([(tr, 0)]) is None


def _ring_traces(f, kind, root, radius=0.3, n=8):
    starts = [root + radius * cmath.exp(2j * math.pi * (k + 0.5) / n) for k in range(n)]
    return [(iterate(f, kind, z0), root) for z0 in starts]


def test_newton_order_on_cubic():
    f = HarmonicMap.analytic(Z**3 - 1)
    tr = iterate(f, StepKind.NEWTON, 1.2)
    assert 1.8 <= estimate_order(tr, 1) <= 2.2


def test_pooled_orders():
    f = HarmonicMap.analytic(Z**3 - 1)
    halley = pooled_order([t for r in CUBE_ROOTS for t in _ring_traces(f, StepKind.HALLEY, r)])
    assert 2.7 <= halley <= 3.3
    hn = pooled_order(_ring_traces(HarmonicMap(Z**2, -Z), StepKind.HARMONIC_NEWTON, 1))
    assert 1.7 <= hn <= 2.3


# -- zero finding -------------------------------------------------------------

def test_cluster_points_order_independent():
    pts = [1 + 1e-10j, 1, -1, -1 + 5e-9, 2j]
    a = cluster_points(pts, 1e-8)
    b = cluster_points(list(reversed(pts)), 1e-8)
    assert a == b and len(a) == 3
    assert a[0].real < a[1].real


def test_find_zeros_cubic():
    zs = find_zeros(HarmonicMap.analytic(Z**3 - 1), StepKind.NEWTON, Window(-2, -2, 2, 2), 40)
    expected = sorted(CUBE_ROOTS, key=lambda c: (c.real, c.imag))
    assert len(zs) == 3
    for a, b in zip(zs, expected):
        assert abs(a - b) < 1e-8


def test_find_zeros_harmonic_star():
    # z^2 - conj(z) = 0: z = 0 or z^3 = 1
    zs = find_zeros(HarmonicMap(Z**2, -Z), StepKind.HARMONIC_NEWTON, Window(-2, -2, 2, 2), 40)
    expected = sorted([0j] + CUBE_ROOTS, key=lambda c: (c.real, c.imag))
    assert len(zs) == 4
    for a, b in zip(zs, expected):
        assert abs(a - b) < 1e-8


def test_find_zeros_empty():
    assert find_zeros(HarmonicMap.analytic(Z + 5), StepKind.NEWTON, Window(-1, -1, 1, 1), 10) == []


def test_find_zeros_deterministic():
    f = HarmonicMap(Z**2, Z)
    w = Window(-2, -2, 2, 2)
    assert find_zeros(f, StepKind.HARMONIC_HALLEY, w, 20) == find_zeros(
        f, StepKind.HARMONIC_HALLEY, w, 20)


def test_find_zeros_validation():
    with pytest.raises(ValueError):
        find_zeros(SHEAR, StepKind.HARMONIC_NEWTON, Window(-1, -1, 1, 1), 1)
