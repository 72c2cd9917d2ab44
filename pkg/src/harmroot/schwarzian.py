"""Classical and harmonic pre-Schwarzian / Schwarzian derivatives.

The harmonic operators are computed on the orientation-preserving
representative: if ``f`` reverses orientation at ``z`` the pair ``(g, h)`` is
used instead, which leaves both operators unchanged.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

from .errors import DegenerateJacobian, NotLocallyUnivalent
from .expr import AnalyticFn, Const, Var, as_expr, eval_jet
from .harmonic import HarmonicJet, HarmonicMap, Orientation, map_jets
from .jets import Jet3

__all__ = [
    "MobiusTransform",
    "OperatorValue",
    "pre_schwarzian",
    "schwarzian",
    "harmonic_pre_schwarzian",
    "harmonic_schwarzian",
    "harmonic_operators",
    "preserving_jets",
    "mobius_post_compose",
]


@dataclass(frozen=True)
class MobiusTransform:
    """``z -> (a z + b) / (c z + d)`` with ``ad - bc != 0``."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for name in "abcd":
            v = complex(getattr(self, name))
            if not cmath.isfinite(v):
                raise ValueError(f"Mobius coefficient {name} must be finite")
            object.__setattr__(self, name, v)
        det = self.a * self.d - self.b * self.c
        scale = abs(self.a) * abs(self.d) + abs(self.b) * abs(self.c)
        if abs(det) <= 1e-14 * scale or scale == 0:
            raise ValueError("Mobius transform is singular (ad - bc = 0)")

    @classmethod
    def identity(cls) -> "MobiusTransform":
        return cls(1, 0, 0, 1)

    def __call__(self, z):
        return (self.a * z + self.b) / (self.c * z + self.d)

    def as_expr(self) -> AnalyticFn:
        return mobius_post_compose(self, Var())


@dataclass(frozen=True)
class OperatorValue:
    value: complex
    point: complex
    kind: str  # one of "P", "S", "PH", "SH"
    conjugated: bool = False


def _require_univalent(j: Jet3, what="phi"):
    if j.d1 == 0:
        raise NotLocallyUnivalent(f"{what}'(z) = 0: not locally univalent")


def _pre_from_jet(j: Jet3) -> complex:
    return j.d2 / j.d1


def _schwarzian_from_jet(j: Jet3) -> complex:
    p = j.d2 / j.d1
    return j.d3 / j.d1 - 1.5 * (p * p)


def pre_schwarzian(phi: AnalyticFn, z) -> complex:
    """``phi''/phi'`` at ``z``."""
    j = eval_jet(phi, z)
    _require_univalent(j)
    return _pre_from_jet(j)


def schwarzian(phi: AnalyticFn, z) -> complex:
    """``phi'''/phi' - 3/2 (phi''/phi')^2`` at ``z``."""
    j = eval_jet(phi, z)
    _require_univalent(j)
    return _schwarzian_from_jet(j)


def preserving_jets(f: HarmonicMap, z) -> tuple[HarmonicJet, bool]:
    """Map jets of the orientation-preserving representative of ``f`` at ``z``.

    Returns the jets and whether ``f`` had to be conjugated.
    """
    mj = map_jets(f, z)
    kind = mj.orientation
    if kind is Orientation.DEGENERATE:
        raise DegenerateJacobian(f"Jacobian vanishes at z={complex(z)!r}")
    if kind is Orientation.PRESERVING:
        return mj, False
    swapped = HarmonicJet(mj.z, mj.f.conjugate(), mj.gjet, mj.hjet, -mj.jacobian,
                          None if mj.gjet.d1 == 0 else mj.hjet.d1 / mj.gjet.d1)
    return swapped, True


def _derivative_jet(j: Jet3) -> Jet3:
    return Jet3(j.d1, j.d2, j.d3, 0j)


def _dilatation_terms(mj: HarmonicJet):
    hj = mj.hjet
    _require_univalent(hj, "h")
    # jet of w = g'/h'; its third entry would need 4th derivatives and is unused
    w = _derivative_jet(mj.gjet) / _derivative_jet(hj)
    wbar = w.d0.conjugate()
    k = wbar / (1 - abs(w.d0) ** 2)
    return hj, w, k


def _harmonic_pre(mj: HarmonicJet) -> complex:
    hj, w, k = _dilatation_terms(mj)
    return _pre_from_jet(hj) - k * w.d1


def _harmonic_schwarzian(mj: HarmonicJet) -> complex:
    hj, w, k = _dilatation_terms(mj)
    t = w.d1 * k
    return (_schwarzian_from_jet(hj)
            + k * (_pre_from_jet(hj) * w.d1 - w.d2)
            - 1.5 * (t * t))


def harmonic_pre_schwarzian(f: HarmonicMap, z) -> complex:
    """``h''/h' - conj(w) w' / (1 - |w|^2)`` with ``w = g'/h'``."""
    mj, _ = preserving_jets(f, z)
    return _harmonic_pre(mj)


def harmonic_schwarzian(f: HarmonicMap, z) -> complex:
    """``S(h) + conj(w)/(1-|w|^2) (h''/h' w' - w'') - 3/2 (w' conj(w)/(1-|w|^2))^2``."""
    mj, _ = preserving_jets(f, z)
    return _harmonic_schwarzian(mj)


def harmonic_operators(f: HarmonicMap, z) -> tuple[OperatorValue, OperatorValue]:
    """Both harmonic operators at ``z``, tagged with whether conjugation was applied."""
    mj, flipped = preserving_jets(f, z)
    z = complex(z)
    return (OperatorValue(_harmonic_pre(mj), z, "PH", flipped),
            OperatorValue(_harmonic_schwarzian(mj), z, "SH", flipped))


def mobius_post_compose(m: MobiusTransform, phi: AnalyticFn) -> AnalyticFn:
    """Expression for ``(a phi + b) / (c phi + d)``."""
    phi = as_expr(phi)
    return (Const(m.a) * phi + Const(m.b)) / (Const(m.c) * phi + Const(m.d))
