"""Numerical Wirtinger derivatives by local Taylor fitting in ``(z, conj z)``.

A smooth plane map ``F`` is sampled on concentric circles around a center and
the polynomial ``sum c[j][k] d^j conj(d)^k`` is fitted by least squares.  Then
``d^m F / dz^m = m! c[m][0]`` and ``d^m F / dconj(z)^m = m! c[0][m]``.

The harnesses below use the fit to check the fixed-point identities of the
harmonic Newton and Halley maps at a zero, and to cross-check the closed-form
harmonic operators against ``P_H = d/dz log J`` and ``S_H = d/dz P_H - P_H^2/2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DegenerateJacobian, IllConditionedFit, NotAZero
from .harmonic import HarmonicMap, Orientation, eval_map, map_jets
from .iteration import StepKind, harmonic_halley_step, harmonic_newton_step
from .schwarzian import harmonic_pre_schwarzian, harmonic_schwarzian

__all__ = [
    "WirtingerCoeffs",
    "IdentityReport",
    "wirtinger_fit",
    "verify_newton_identities",
    "verify_halley_identities",
    "operators_crosscheck",
    "DEFAULT_RADIUS",
    "DEFAULT_DEGREE",
]

DEFAULT_RADIUS = 1e-2
DEFAULT_DEGREE = 4
MAX_CONDITION = 1e12
ZERO_TOL = 1e-10


@dataclass(frozen=True)
class WirtingerCoeffs:
    center: complex
    degree: int
    radius: float
    coeffs: dict  # (j, k) -> complex, j + k <= degree
    residual_norm: float

    def c(self, j: int, k: int) -> complex:
        return self.coeffs[(j, k)]

    def dz(self, m: int = 1) -> complex:
        """``m``-th Wirtinger derivative in ``z`` at the center."""
        return math.factorial(m) * self.coeffs[(m, 0)]

    def dzbar(self, m: int = 1) -> complex:
        return math.factorial(m) * self.coeffs[(0, m)]


def _monomials(degree: int) -> list[tuple[int, int]]:
    return [(j, t - j) for t in range(degree + 1) for j in range(t, -1, -1)]


def _sample_offsets(radius: float, degree: int) -> np.ndarray:
    # three rings suffice up to degree 5; degree 6 needs a fourth ring to
    # separate the four rotation-invariant monomials 1, |d|^2, |d|^4, |d|^6
    n_rings = max(3, degree // 2 + 1)
    radii = [radius * (n_rings - i) / n_rings for i in range(n_rings)]
    n_ang = 4 * (degree + 1)
    angles = 2 * np.pi * np.arange(n_ang) / n_ang
    ring = np.exp(1j * angles)
    return np.concatenate([r * ring for r in radii])


def wirtinger_fit(F: Callable[[complex], complex], center, radius: float = DEFAULT_RADIUS,
                  degree: int = DEFAULT_DEGREE) -> WirtingerCoeffs:
    """Least-squares Taylor coefficients of ``F`` in ``(d, conj d)`` around ``center``."""
    if not radius > 0:
        raise ValueError("radius must be positive")
    if not 1 <= degree <= 6:
        raise ValueError("degree must be between 1 and 6")
    center = complex(center)
    offsets = _sample_offsets(radius, degree)
    values = np.array([complex(F(center + d)) for d in offsets])
    if not np.all(np.isfinite(values)):
        raise ValueError("F returned non-finite values on the fit disk")
    mons = _monomials(degree)
    u = offsets / radius  # unit-scaled design keeps the system well conditioned
    design = np.column_stack([u ** j * np.conj(u) ** k for j, k in mons])
    cond = np.linalg.cond(design) ** 2
    if not cond <= MAX_CONDITION:
        raise IllConditionedFit(f"fit normal-equation condition {cond:.3g} exceeds {MAX_CONDITION:g}")
    sol, *_ = np.linalg.lstsq(design, values, rcond=None)
    resid = values - design @ sol
    rms = float(np.sqrt(np.mean(np.abs(resid) ** 2)))
    coeffs = {(j, k): complex(sol[i] / radius ** (j + k)) for i, (j, k) in enumerate(mons)}
    return WirtingerCoeffs(center, degree, radius, coeffs, rms)


@dataclass
class IdentityReport:
    map_kind: str
    center: complex
    measured: list = field(default_factory=list)   # (label, complex)
    expected: list = field(default_factory=list)   # (label, complex)
    abs_errors: list = field(default_factory=list)
    tolerances: list = field(default_factory=list)
    passed: bool = False
    fit_diagnostics: tuple = ()                    # (radius, degree, residual_norm)
    informational: list = field(default_factory=list)  # (label, complex), not asserted

    def measured_value(self, label: str) -> complex:
        return dict(self.measured)[label]

    def expected_value(self, label: str) -> complex:
        return dict(self.expected)[label]


def _build_report(kind, center, rows, fit: WirtingerCoeffs, info) -> IdentityReport:
    rep = IdentityReport(kind, complex(center))
    for label, measured, expected, tol in rows:
        err = abs(measured - expected)
        rep.measured.append((label, complex(measured)))
        rep.expected.append((label, complex(expected)))
        rep.abs_errors.append(err)
        rep.tolerances.append(tol)
    rep.passed = all(e < t for e, t in zip(rep.abs_errors, rep.tolerances))
    rep.fit_diagnostics = (fit.radius, fit.degree, fit.residual_norm)
    rep.informational = info
    return rep


def _check_zero(f: HarmonicMap, alpha: complex):
    value = eval_map(f, alpha)
    if not abs(value) <= ZERO_TOL:
        raise NotAZero(f"|f(alpha)| = {abs(value):.3g} exceeds {ZERO_TOL:g}")
    if map_jets(f, alpha).orientation is Orientation.DEGENERATE:
        raise DegenerateJacobian(f"Jacobian vanishes at alpha={alpha!r}")


def verify_newton_identities(f: HarmonicMap, alpha, radius: float = DEFAULT_RADIUS,
                             degree: int = DEFAULT_DEGREE) -> IdentityReport:
    """Check ``F(alpha) = alpha``, ``F_z(alpha) = 0``, ``F_zz(alpha) = P_H(f)(alpha)`` for the harmonic Newton map."""
    if degree < 2:
        raise ValueError("the Newton check needs a fit of degree >= 2")
    alpha = complex(alpha)
    _check_zero(f, alpha)

    def newton_map(z):
        return harmonic_newton_step(f, z)

    fit = wirtinger_fit(newton_map, alpha, radius, degree)
    ph = harmonic_pre_schwarzian(f, alpha)
    rows = [
        ("F(alpha)-alpha", newton_map(alpha) - alpha, 0j, 1e-8),
        ("F_z", fit.dz(1), 0j, 1e-6),
        ("F_zz", fit.dz(2), ph, 1e-4),
    ]
    info = [("F_zbar", fit.dzbar(1))]
    return _build_report(StepKind.HARMONIC_NEWTON.value, alpha, rows, fit, info)


def verify_halley_identities(f: HarmonicMap, alpha, radius: float = DEFAULT_RADIUS,
                             degree: int = DEFAULT_DEGREE) -> IdentityReport:
    """Check ``F = alpha``, ``F_z = F_zz = 0`` and ``F_zzz = -S_H(f)`` at ``alpha`` for the harmonic Halley map."""
    if degree < 3:
        raise ValueError("the Halley check needs a fit of degree >= 3")
    alpha = complex(alpha)
    _check_zero(f, alpha)

    def halley_map(z):
        return harmonic_halley_step(f, z)

    fit = wirtinger_fit(halley_map, alpha, radius, degree)
    sh = harmonic_schwarzian(f, alpha)
    tol3 = 1e-3 * abs(sh) if abs(sh) > 1 else 1e-3
    rows = [
        ("F(alpha)-alpha", halley_map(alpha) - alpha, 0j, 1e-8),
        ("F_z", fit.dz(1), 0j, 1e-6),
        ("F_zz", fit.dz(2), 0j, 1e-5),
        ("F_zzz", fit.dz(3), -sh, tol3),
    ]
    info = [("F_zbar", fit.dzbar(1)), ("F_zbarzbar", fit.dzbar(2))]
    return _build_report(StepKind.HARMONIC_HALLEY.value, alpha, rows, fit, info)


def operators_crosscheck(f: HarmonicMap, z, radius: float = DEFAULT_RADIUS,
                         degree: int = DEFAULT_DEGREE) -> IdentityReport:
    """Compare the closed-form ``P_H`` and ``S_H`` against fitted Wirtinger derivatives."""
    if degree < 2:
        raise ValueError("the operator cross-check needs a fit of degree >= 2")
    z = complex(z)

    def log_jacobian(w):
        mj = map_jets(f, w)
        if mj.orientation is Orientation.DEGENERATE:
            raise DegenerateJacobian(f"Jacobian vanishes at {w!r} inside the fit disk")
        return math.log(abs(mj.jacobian))

    def pre_map(w):
        return harmonic_pre_schwarzian(f, w)

    ph = harmonic_pre_schwarzian(f, z)
    sh = harmonic_schwarzian(f, z)
    fit_j = wirtinger_fit(log_jacobian, z, radius, degree)
    fit_p = wirtinger_fit(pre_map, z, radius, degree)
    rows = [
        ("P_H", fit_j.dz(1), ph, 1e-6),
        ("S_H", fit_p.dz(1) - 0.5 * ph * ph, sh, 1e-6),
    ]
    rep = _build_report("operators", z, rows, fit_p, [])
    rep.fit_diagnostics = (radius, degree, max(fit_j.residual_norm, fit_p.residual_norm))
    return rep
