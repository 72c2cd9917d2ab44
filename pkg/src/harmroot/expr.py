"""Expression trees over one complex variable.

Trees are immutable and evaluate to a :class:`~harmroot.jets.Jet3` by
structural recursion.  They can be built with ordinary operators::

    >>> from harmroot.expr import Z, exp
    >>> phi = exp(Z**2) - 1
    >>> phi.jet(1.0).d1
    (5.43656365691809+0j)

``str(tree)`` produces text that :func:`harmroot.parser.parse_expression`
reads back to an equivalent tree.
"""

from __future__ import annotations

import cmath
import math
import numbers
from dataclasses import dataclass

import numpy as np

from .errors import BranchPointError, DivisionByZeroJet
from .jets import Jet3, jet_compose, jet_transcendental

__all__ = [
    "AnalyticFn", "Var", "Const", "Neg", "Add", "Sub", "Mul", "Div", "Pow",
    "Func", "Compose", "Z", "const", "exp", "log", "sin", "cos", "compose",
    "eval_jet", "as_expr",
]


def as_expr(x) -> "AnalyticFn":
    if isinstance(x, AnalyticFn):
        return x
    if isinstance(x, numbers.Number):
        return Const(complex(x))
    raise TypeError(f"cannot convert {type(x).__name__} to an expression")


class AnalyticFn:
    """Base class of expression nodes."""

    __slots__ = ()

    def jet(self, z) -> Jet3:
        raise NotImplementedError

    def text(self, var: str = "z") -> str:
        raise NotImplementedError

    def is_zero(self) -> bool:
        """Conservative structural test for the zero function."""
        return False

    def __call__(self, z):
        return self.jet(z).d0

    def __str__(self) -> str:
        return self.text()

    def __neg__(self):
        return Neg(self)

    def __add__(self, other):
        return Add(self, as_expr(other))

    def __radd__(self, other):
        return Add(as_expr(other), self)

    def __sub__(self, other):
        return Sub(self, as_expr(other))

    def __rsub__(self, other):
        return Sub(as_expr(other), self)

    def __mul__(self, other):
        return Mul(self, as_expr(other))

    def __rmul__(self, other):
        return Mul(as_expr(other), self)

    def __truediv__(self, other):
        return Div(self, as_expr(other))

    def __rtruediv__(self, other):
        return Div(as_expr(other), self)

    def __pow__(self, n):
        return Pow(self, int(n))


def _format_real(x: float) -> str:
    return repr(float(x))


def format_complex(c: complex) -> str:
    """Text form ``a+bi`` accepted by the parser and the CLI."""
    c = complex(c)
    if c.imag == 0:
        return _format_real(c.real)
    if c.real == 0:
        return _format_real(c.imag) + "i"
    sign = "-" if math.copysign(1.0, c.imag) < 0 else "+"
    return f"{_format_real(c.real)}{sign}{_format_real(abs(c.imag))}i"


@dataclass(frozen=True)
class Var(AnalyticFn):
    def jet(self, z):
        return Jet3.variable(z)

    def text(self, var="z"):
        return var


@dataclass(frozen=True)
class Const(AnalyticFn):
    value: complex

    def jet(self, z):
        if isinstance(z, np.ndarray):
            return Jet3.constant(np.full(z.shape, self.value, dtype=complex))
        return Jet3.constant(complex(self.value))

    def text(self, var="z"):
        c = complex(self.value)
        if c.imag == 0 and c.real >= 0 and math.copysign(1.0, c.real) > 0:
            return _format_real(c.real)
        return f"({format_complex(c)})"

    def is_zero(self):
        return self.value == 0


@dataclass(frozen=True)
class Neg(AnalyticFn):
    arg: AnalyticFn

    def jet(self, z):
        return -self.arg.jet(z)

    def text(self, var="z"):
        return f"(-{self.arg.text(var)})"

    def is_zero(self):
        return self.arg.is_zero()


@dataclass(frozen=True)
class Add(AnalyticFn):
    left: AnalyticFn
    right: AnalyticFn

    def jet(self, z):
        return self.left.jet(z) + self.right.jet(z)

    def text(self, var="z"):
        return f"({self.left.text(var)} + {self.right.text(var)})"

    def is_zero(self):
        return self.left.is_zero() and self.right.is_zero()


@dataclass(frozen=True)
class Sub(AnalyticFn):
    left: AnalyticFn
    right: AnalyticFn

    def jet(self, z):
        return self.left.jet(z) - self.right.jet(z)

    def text(self, var="z"):
        return f"({self.left.text(var)} - {self.right.text(var)})"

    def is_zero(self):
        return self.left.is_zero() and self.right.is_zero()


@dataclass(frozen=True)
class Mul(AnalyticFn):
    left: AnalyticFn
    right: AnalyticFn

    def jet(self, z):
        return self.left.jet(z) * self.right.jet(z)

    def text(self, var="z"):
        return f"({self.left.text(var)} * {self.right.text(var)})"

    def is_zero(self):
        return self.left.is_zero() or self.right.is_zero()


@dataclass(frozen=True)
class Div(AnalyticFn):
    num: AnalyticFn
    den: AnalyticFn

    def jet(self, z):
        try:
            return self.num.jet(z) / self.den.jet(z)
        except DivisionByZeroJet as exc:
            if exc.expr is not None:
                raise
            raise DivisionByZeroJet(
                f"division by zero in '{self}' at z={z!r}", expr=self) from None

    def text(self, var="z"):
        return f"({self.num.text(var)} / {self.den.text(var)})"

    def is_zero(self):
        return self.num.is_zero()


@dataclass(frozen=True)
class Pow(AnalyticFn):
    base: AnalyticFn
    exponent: int

    def jet(self, z):
        try:
            return self.base.jet(z) ** self.exponent
        except DivisionByZeroJet as exc:
            if exc.expr is not None:
                raise
            raise DivisionByZeroJet(
                f"negative power of zero in '{self}' at z={z!r}", expr=self) from None

    def text(self, var="z"):
        return f"({self.base.text(var)})^{self.exponent}"

    def is_zero(self):
        return self.exponent > 0 and self.base.is_zero()


@dataclass(frozen=True)
class Func(AnalyticFn):
    name: str
    arg: AnalyticFn

    def __post_init__(self):
        if self.name not in ("exp", "log", "sin", "cos"):
            raise ValueError(f"unknown function {self.name!r}")

    def jet(self, z):
        try:
            return jet_transcendental(self.arg.jet(z), self.name)
        except BranchPointError as exc:
            if exc.expr is not None:
                raise
            raise BranchPointError(
                f"log branch point in '{self}' at z={z!r}", expr=self) from None

    def text(self, var="z"):
        return f"{self.name}({self.arg.text(var)})"

    def is_zero(self):
        return self.name == "sin" and self.arg.is_zero()


@dataclass(frozen=True)
class Compose(AnalyticFn):
    """``outer(inner(z))``."""

    outer: AnalyticFn
    inner: AnalyticFn

    def jet(self, z):
        inner = self.inner.jet(z)
        return jet_compose(self.outer.jet(inner.d0), inner)

    def text(self, var="z"):
        return self.outer.text(f"({self.inner.text(var)})")

    def is_zero(self):
        return self.outer.is_zero()


Z = Var()


def const(c) -> Const:
    return Const(complex(c))


def exp(f) -> Func:
    return Func("exp", as_expr(f))


def log(f) -> Func:
    return Func("log", as_expr(f))


def sin(f) -> Func:
    return Func("sin", as_expr(f))


def cos(f) -> Func:
    return Func("cos", as_expr(f))


def compose(outer, inner) -> Compose:
    return Compose(as_expr(outer), as_expr(inner))


def eval_jet(f: AnalyticFn, z) -> Jet3:
    """Value and first three derivatives of ``f`` at ``z``.

    Raises :class:`DivisionByZeroJet` or :class:`BranchPointError` naming the
    offending subexpression.  Scalar points must be finite.
    """
    if not isinstance(z, np.ndarray):
        z = complex(z)
        if not cmath.isfinite(z):
            raise ValueError(f"evaluation point must be finite, got {z!r}")
    return f.jet(z)
