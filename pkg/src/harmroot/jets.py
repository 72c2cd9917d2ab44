"""Order-3 truncated Taylor arithmetic.

A :class:`Jet3` holds the value and the first three derivatives of an analytic
function at a point.  Raw derivatives are stored (no factorial scaling), which
is what the Schwarzian-type formulas consume directly.

Components are normally Python ``complex`` scalars.  They may also be numpy
arrays of equal shape, in which case every operation is applied elementwise and
the division/branch checks are skipped (non-finite entries are left for the
caller to detect); the basin renderer relies on this.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import BranchPointError, DivisionByZeroJet

__all__ = [
    "Jet3",
    "jet_ring_ops",
    "jet_transcendental",
    "jet_compose",
    "TRANSCENDENTALS",
]


def _is_array(x) -> bool:
    return isinstance(x, np.ndarray)


@dataclass(frozen=True)
class Jet3:
    d0: complex
    d1: complex = 0j
    d2: complex = 0j
    d3: complex = 0j

    @classmethod
    def constant(cls, c) -> "Jet3":
        zero = np.zeros_like(c) if _is_array(c) else 0j
        return cls(c, zero, zero, zero)

    @classmethod
    def variable(cls, z) -> "Jet3":
        if _is_array(z):
            return cls(z, np.ones_like(z), np.zeros_like(z), np.zeros_like(z))
        return cls(z, 1 + 0j, 0j, 0j)

    def as_tuple(self) -> tuple:
        return (self.d0, self.d1, self.d2, self.d3)

    def __neg__(self) -> "Jet3":
        return Jet3(-self.d0, -self.d1, -self.d2, -self.d3)

    def __add__(self, other: "Jet3") -> "Jet3":
        return Jet3(self.d0 + other.d0, self.d1 + other.d1,
                    self.d2 + other.d2, self.d3 + other.d3)

    def __sub__(self, other: "Jet3") -> "Jet3":
        return Jet3(self.d0 - other.d0, self.d1 - other.d1,
                    self.d2 - other.d2, self.d3 - other.d3)

    def __mul__(self, other: "Jet3") -> "Jet3":
        a0, a1, a2, a3 = self.as_tuple()
        b0, b1, b2, b3 = other.as_tuple()
        return Jet3(
            a0 * b0,
            a1 * b0 + a0 * b1,
            a2 * b0 + 2 * (a1 * b1) + a0 * b2,
            a3 * b0 + 3 * (a2 * b1) + 3 * (a1 * b2) + a0 * b3,
        )

    def __truediv__(self, other: "Jet3") -> "Jet3":
        a0, a1, a2, a3 = self.as_tuple()
        b0, b1, b2, b3 = other.as_tuple()
        if not _is_array(b0) and b0 == 0:
            raise DivisionByZeroJet("jet division by a jet with zero value")
        # solve a = q*b order by order
        q0 = a0 / b0
        q1 = (a1 - q0 * b1) / b0
        q2 = (a2 - 2 * (q1 * b1) - q0 * b2) / b0
        q3 = (a3 - 3 * (q2 * b1) - 3 * (q1 * b2) - q0 * b3) / b0
        return Jet3(q0, q1, q2, q3)

    def __pow__(self, n: int) -> "Jet3":
        if not isinstance(n, (int, np.integer)):
            raise TypeError("jets only support integer powers")
        if n < 0:
            return Jet3.constant(_one_like(self.d0)) / (self ** (-n))
        result = Jet3.constant(_one_like(self.d0))
        base = self
        # square-and-multiply keeps polynomials free of exp/log branch issues
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result


def _one_like(x):
    return np.ones_like(x) if _is_array(x) else 1 + 0j


def jet_ring_ops(a: Jet3, b: Jet3, op: str) -> Jet3:
    """Combine two jets at the same point with ``add``, ``sub``, ``mul`` or ``div``."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown jet operation {op!r}")


def _ladder(fn: str, w):
    """Value and first three derivatives of an elementary function at ``w``."""
    arr = _is_array(w)
    lib = np if arr else cmath
    if fn == "exp":
        e = lib.exp(w)
        return e, e, e, e
    if fn == "log":
        if not arr and w == 0:
            raise BranchPointError("log evaluated at its branch point 0")
        r = 1 / w
        return lib.log(w), r, -r * r, 2 * r * r * r
    if fn == "sin":
        s, c = lib.sin(w), lib.cos(w)
        return s, c, -s, -c
    if fn == "cos":
        s, c = lib.sin(w), lib.cos(w)
        return c, -s, -c, s
    raise ValueError(f"unknown function {fn!r}")


TRANSCENDENTALS = ("exp", "log", "sin", "cos")


def jet_compose(outer: Jet3, inner: Jet3) -> Jet3:
    """Jet of ``f o g`` given the jet of ``f`` at ``g(z)`` and the jet of ``g`` at ``z``."""
    f0, f1, f2, f3 = outer.as_tuple()
    _, g1, g2, g3 = inner.as_tuple()
    g1sq = g1 * g1
    return Jet3(
        f0,
        f1 * g1,
        f2 * g1sq + f1 * g2,
        f3 * (g1sq * g1) + 3 * (f2 * g1 * g2) + f1 * g3,
    )


def jet_transcendental(a: Jet3, fn: str) -> Jet3:
    """Jet of ``fn(a)`` for ``fn`` one of exp, log, sin, cos (principal log branch)."""
    return jet_compose(Jet3(*_ladder(fn, a.d0)), a)
