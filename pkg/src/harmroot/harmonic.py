"""Harmonic maps ``f = h + conj(g)`` and their pointwise first-order data."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .expr import AnalyticFn, Const, as_expr, eval_jet
from .jets import Jet3

__all__ = [
    "HarmonicMap",
    "HarmonicJet",
    "Orientation",
    "eval_map",
    "map_jets",
    "orientation",
    "conjugate_map",
    "DEGENERACY_RTOL",
]

# |J| <= DEGENERACY_RTOL * (|h'|^2 + |g'|^2) counts as J = 0
DEGENERACY_RTOL = 1e-14


@dataclass(frozen=True)
class HarmonicMap:
    """The map ``z -> h(z) + conj(g(z))`` with ``h`` and ``g`` taken as supplied."""

    h: AnalyticFn
    g: AnalyticFn

    def __post_init__(self):
        object.__setattr__(self, "h", as_expr(self.h))
        object.__setattr__(self, "g", as_expr(self.g))

    @classmethod
    def analytic(cls, h) -> "HarmonicMap":
        return cls(as_expr(h), Const(0j))

    @property
    def is_analytic(self) -> bool:
        return self.g.is_zero()

    def __call__(self, z):
        return eval_map(self, z)

    def __str__(self):
        return f"h = {self.h}, g = {self.g}"


class Orientation(enum.Enum):
    PRESERVING = "preserving"
    REVERSING = "reversing"
    DEGENERATE = "degenerate"


def classify_jacobian(jacobian, hprime_sq, gprime_sq) -> Orientation:
    if abs(jacobian) <= DEGENERACY_RTOL * (hprime_sq + gprime_sq):
        return Orientation.DEGENERATE
    return Orientation.PRESERVING if jacobian > 0 else Orientation.REVERSING


@dataclass(frozen=True)
class HarmonicJet:
    z: complex
    f: complex
    hjet: Jet3
    gjet: Jet3
    jacobian: float
    dilatation: Optional[complex]

    @property
    def orientation(self) -> Orientation:
        return classify_jacobian(self.jacobian, abs(self.hjet.d1) ** 2,
                                 abs(self.gjet.d1) ** 2)


def eval_map(f: HarmonicMap, z) -> complex:
    return map_jets(f, z).f


def map_jets(f: HarmonicMap, z) -> HarmonicJet:
    """Jets of ``h`` and ``g`` at ``z`` together with the value, Jacobian and dilatation."""
    hj = eval_jet(f.h, z)
    gj = eval_jet(f.g, z)
    value = hj.d0 + gj.d0.conjugate()
    jac = abs(hj.d1) ** 2 - abs(gj.d1) ** 2
    dil = None if hj.d1 == 0 else gj.d1 / hj.d1
    return HarmonicJet(complex(z), value, hj, gj, jac, dil)


def orientation(f: HarmonicMap, z) -> Orientation:
    return map_jets(f, z).orientation


def conjugate_map(f: HarmonicMap) -> HarmonicMap:
    """``conj(f)``, i.e. the pair ``(g, h)``."""
    return HarmonicMap(f.g, f.h)
