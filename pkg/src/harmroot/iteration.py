"""Newton and Halley generating maps, analytic and harmonic, and drivers around them.

The step formulas are written once over jets so that the same arithmetic
serves single points (with explicit error checks) and numpy arrays of points
(used by the basin renderer, where failures become status codes).
"""

from __future__ import annotations

import cmath
import enum
import math
import statistics
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .errors import (DegenerateDenominator, DegenerateJacobian, NotLocallyUnivalent,
                     NumericalError)
from .expr import AnalyticFn, eval_jet
from .harmonic import DEGENERACY_RTOL, HarmonicMap
from .jets import Jet3

__all__ = [
    "StepKind",
    "IterationOptions",
    "IterationStatus",
    "IterationTrace",
    "Window",
    "newton_step",
    "halley_step",
    "harmonic_newton_step",
    "harmonic_halley_step",
    "step",
    "iterate",
    "iterate_many",
    "estimate_order",
    "convergence_ratios",
    "pooled_order",
    "find_zeros",
    "cluster_points",
]


class StepKind(enum.Enum):
    NEWTON = "newton"
    HALLEY = "halley"
    HARMONIC_NEWTON = "hnewton"
    HARMONIC_HALLEY = "hhalley"

    @property
    def analytic_only(self) -> bool:
        return self in (StepKind.NEWTON, StepKind.HALLEY)


@dataclass(frozen=True)
class IterationOptions:
    residual_tol: float = 1e-12
    step_tol: float = 1e-13
    max_iter: int = 64
    divergence_radius: float = 1e6

    def __post_init__(self):
        for name in ("residual_tol", "step_tol", "divergence_radius"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise ValueError("max_iter must be an integer >= 1")


class IterationStatus(enum.Enum):
    CONVERGED = "converged"
    MAX_ITER_EXCEEDED = "max_iter_exceeded"
    DIVERGED = "diverged"
    STEP_ERROR = "step_error"


@dataclass
class IterationTrace:
    iterates: list = field(default_factory=list)
    residuals: list = field(default_factory=list)
    status: IterationStatus = IterationStatus.MAX_ITER_EXCEEDED
    final: Optional[complex] = None
    error: Optional[str] = None

    @property
    def n_steps(self) -> int:
        return max(len(self.iterates) - 1, 0)


@dataclass(frozen=True)
class Window:
    """Axis-aligned rectangle ``[x0, x1] x [y0, y1]`` in the complex plane."""

    x0: float
    y0: float
    x1: float
    y1: float

    def __post_init__(self):
        if not (self.x1 > self.x0 and self.y1 > self.y0):
            raise ValueError("window must satisfy x0 < x1 and y0 < y1")

    def inflated(self, fraction: float) -> "Window":
        dx = 0.5 * fraction * (self.x1 - self.x0)
        dy = 0.5 * fraction * (self.y1 - self.y0)
        return Window(self.x0 - dx, self.y0 - dy, self.x1 + dx, self.y1 + dy)

    def contains(self, z: complex) -> bool:
        return self.x0 <= z.real <= self.x1 and self.y0 <= z.imag <= self.y1


# -- step formulas over jets ------------------------------------------------

def _newton_update(hj: Jet3):
    return hj.d0 / hj.d1


def _halley_update(hj: Jet3):
    phi, d1, d2 = hj.d0, hj.d1, hj.d2
    return 2 * phi * d1 / (2 * d1 * d1 - phi * d2), 2 * d1 * d1 - phi * d2


def _harmonic_nj(hj: Jet3, gj: Jet3):
    f = hj.d0 + gj.d0.conjugate()
    n = hj.d1.conjugate() * f - (gj.d1 * f).conjugate()
    jac = abs(hj.d1) ** 2 - abs(gj.d1) ** 2
    return f, n, jac


def _harmonic_newton_update(hj: Jet3, gj: Jet3):
    _, n, jac = _harmonic_nj(hj, gj)
    return n / jac, jac


def _harmonic_halley_update(hj: Jet3, gj: Jet3):
    f, n, jac = _harmonic_nj(hj, gj)
    h1, h2 = hj.d1, hj.d2
    g1, g2 = gj.d1, gj.d2
    nbar = n.conjugate()
    a = ((h1.conjugate() - h2.conjugate() / 2 * nbar / jac) * f
         - (g1.conjugate() - g2.conjugate() / 2 * nbar / jac) * f.conjugate())
    b = (abs(h1 - h2 / 2 * n / jac) ** 2
         - abs(g1 - g2 / 2 * n / jac) ** 2)
    return a / b, jac, b


def _degenerate_jacobian(jac, hj: Jet3, gj: Jet3) -> bool:
    return abs(jac) <= DEGENERACY_RTOL * (abs(hj.d1) ** 2 + abs(gj.d1) ** 2)


# -- public single-point steps ---------------------------------------------

def newton_step(phi: AnalyticFn, z) -> complex:
    """``z - phi(z)/phi'(z)``."""
    hj = eval_jet(phi, z)
    if hj.d1 == 0:
        raise NotLocallyUnivalent(f"phi'(z) = 0 at z={complex(z)!r}")
    return complex(z) - _newton_update(hj)


def halley_step(phi: AnalyticFn, z) -> complex:
    """``z - 2 phi phi' / (2 phi'^2 - phi phi'')``."""
    hj = eval_jet(phi, z)
    if 2 * hj.d1 * hj.d1 - hj.d0 * hj.d2 == 0:
        raise DegenerateDenominator(f"Halley denominator vanishes at z={complex(z)!r}")
    upd, _ = _halley_update(hj)
    return complex(z) - upd


def _harmonic_jets(f: HarmonicMap, z):
    return eval_jet(f.h, z), eval_jet(f.g, z)


def harmonic_newton_step(f: HarmonicMap, z) -> complex:
    """``z - N/J`` with ``N = conj(h') f - conj(g' f)`` and ``J = |h'|^2 - |g'|^2``."""
    hj, gj = _harmonic_jets(f, z)
    _, _, jac = _harmonic_nj(hj, gj)
    if _degenerate_jacobian(jac, hj, gj):
        raise DegenerateJacobian(f"Jacobian vanishes at z={complex(z)!r}")
    upd, _ = _harmonic_newton_update(hj, gj)
    return complex(z) - upd


def harmonic_halley_step(f: HarmonicMap, z) -> complex:
    """``z - A/B`` with ``A`` and ``B`` evaluated term by term as defined."""
    hj, gj = _harmonic_jets(f, z)
    _, _, jac = _harmonic_nj(hj, gj)
    if _degenerate_jacobian(jac, hj, gj):
        raise DegenerateJacobian(f"Jacobian vanishes at z={complex(z)!r}")
    upd, _, b = _harmonic_halley_update(hj, gj)
    if b == 0 or not cmath.isfinite(upd):
        raise DegenerateDenominator(f"harmonic Halley denominator vanishes at z={complex(z)!r}")
    return complex(z) - upd


def _check_kind(f: HarmonicMap, kind: StepKind):
    if kind.analytic_only and not f.is_analytic:
        raise ValueError(f"{kind.value} needs an analytic target (g must be 0)")


def step(f: HarmonicMap, kind: StepKind, z) -> complex:
    """One application of the generating map selected by ``kind``."""
    _check_kind(f, kind)
    if kind is StepKind.NEWTON:
        return newton_step(f.h, z)
    if kind is StepKind.HALLEY:
        return halley_step(f.h, z)
    if kind is StepKind.HARMONIC_NEWTON:
        return harmonic_newton_step(f, z)
    return harmonic_halley_step(f, z)


# -- drivers -----------------------------------------------------------------

def _residual(f: HarmonicMap, z) -> float:
    return abs(f(z))


def _stopped(res, z_old, z_new, opts: IterationOptions) -> bool:
    return res <= opts.residual_tol or abs(z_new - z_old) <= opts.step_tol * (1 + abs(z_new))


def iterate(f: HarmonicMap, kind: StepKind, z0,
            opts: IterationOptions = IterationOptions()) -> IterationTrace:
    """Run the fixed-point iteration from ``z0`` until a stopping rule fires.

    Never raises for numerical trouble; the outcome is in ``trace.status``.
    """
    _check_kind(f, kind)
    z = complex(z0)
    trace = IterationTrace()
    try:
        res = _residual(f, z)
    except NumericalError as exc:
        trace.iterates.append(z)
        trace.residuals.append(math.nan)
        trace.status = IterationStatus.STEP_ERROR
        trace.error = str(exc)
        return trace
    trace.iterates.append(z)
    trace.residuals.append(res)
    if res <= opts.residual_tol:
        trace.status = IterationStatus.CONVERGED
        trace.final = z
        return trace
    for _ in range(opts.max_iter):
        try:
            z_new = step(f, kind, z)
        except NumericalError as exc:
            trace.status = IterationStatus.STEP_ERROR
            trace.error = str(exc)
            return trace
        if not cmath.isfinite(z_new) or abs(z_new) > opts.divergence_radius:
            trace.status = IterationStatus.DIVERGED
            return trace
        try:
            res = _residual(f, z_new)
        except NumericalError as exc:
            trace.status = IterationStatus.STEP_ERROR
            trace.error = str(exc)
            return trace
        trace.iterates.append(z_new)
        trace.residuals.append(res)
        if _stopped(res, z, z_new, opts):
            trace.status = IterationStatus.CONVERGED
            trace.final = z_new
            return trace
        z = z_new
    trace.status = IterationStatus.MAX_ITER_EXCEEDED
    return trace


# status codes used by iterate_many
CONVERGED, MAX_ITER, DIVERGED, STEP_ERROR = 0, 1, 2, 3


def _array_update(f: HarmonicMap, kind: StepKind, z: np.ndarray):
    """Correction for each point; non-finite entries mark failed steps."""
    hj = eval_jet(f.h, z)
    if kind is StepKind.NEWTON:
        upd = _newton_update(hj)
        upd[hj.d1 == 0] = np.nan
        return upd
    if kind is StepKind.HALLEY:
        upd, den = _halley_update(hj)
        upd[den == 0] = np.nan
        return upd
    gj = eval_jet(f.g, z)
    if kind is StepKind.HARMONIC_NEWTON:
        upd, jac = _harmonic_newton_update(hj, gj)
    else:
        upd, jac, b = _harmonic_halley_update(hj, gj)
        upd[b == 0] = np.nan
    upd[_degenerate_jacobian(jac, hj, gj)] = np.nan
    return upd


def _array_residual(f: HarmonicMap, z: np.ndarray) -> np.ndarray:
    return np.abs(eval_jet(f.h, z).d0 + np.conj(eval_jet(f.g, z).d0))


def iterate_many(f: HarmonicMap, kind: StepKind, z0: np.ndarray,
                 opts: IterationOptions = IterationOptions()):
    """Vectorized :func:`iterate` over an array of starts.

    Returns ``(final, n_steps, status)`` arrays; ``status`` holds the module
    constants ``CONVERGED``, ``MAX_ITER``, ``DIVERGED`` or ``STEP_ERROR``.
    Each point follows the same stopping rules as :func:`iterate`.
    """
    _check_kind(f, kind)
    z = np.array(z0, dtype=complex).ravel()
    shape = np.shape(z0)
    final = z.copy()
    n_steps = np.zeros(z.shape, dtype=np.int64)
    status = np.full(z.shape, MAX_ITER, dtype=np.int8)
    with np.errstate(all="ignore"):
        res = _array_residual(f, z)
        bad = ~np.isfinite(res)
        status[bad] = STEP_ERROR
        done = res <= opts.residual_tol
        status[done] = CONVERGED
        active = np.flatnonzero(~(bad | done))
        for k in range(1, opts.max_iter + 1):
            if active.size == 0:
                break
            za = final[active]
            upd = _array_update(f, kind, za)
            failed = ~np.isfinite(upd)
            znew = za - upd
            diverged = ~failed & (~np.isfinite(znew) | (np.abs(znew) > opts.divergence_radius))
            ok = ~(failed | diverged)
            status[active[failed]] = STEP_ERROR
            status[active[diverged]] = DIVERGED
            idx = active[ok]
            za, znew = za[ok], znew[ok]
            rnew = _array_residual(f, znew)
            rbad = ~np.isfinite(rnew)
            status[idx[rbad]] = STEP_ERROR
            keep = ~rbad
            idx, za, znew, rnew = idx[keep], za[keep], znew[keep], rnew[keep]
            final[idx] = znew
            n_steps[idx] = k
            conv = (rnew <= opts.residual_tol) | (
                np.abs(znew - za) <= opts.step_tol * (1 + np.abs(znew)))
            status[idx[conv]] = CONVERGED
            active = idx[~conv]
    return final.reshape(shape), n_steps.reshape(shape), status.reshape(shape)


def convergence_ratios(trace: IterationTrace, root) -> list[float]:
    """Admissible ratios ``log(e[k+1]/e[k]) / log(e[k]/e[k-1])`` with ``e[k] = |z[k] - root|``.

    A ratio is admissible when ``e[k-1] > e[k] > e[k+1]`` and all three exceed
    the rounding floor ``100 * eps * |root|``, below which an iterate carries
    no information about the error.  Unconverged traces give no ratios.
    """
    if trace.status is not IterationStatus.CONVERGED:
        return []
    root = complex(root)
    floor = 100 * np.finfo(float).eps * abs(root)
    errs = [abs(z - root) for z in trace.iterates]
    ratios = []
    for k in range(1, len(errs) - 1):
        e0, e1, e2 = errs[k - 1], errs[k], errs[k + 1]
        if e0 > e1 > e2 > floor:
            ratios.append(math.log(e2 / e1) / math.log(e1 / e0))
    return ratios


def estimate_order(trace: IterationTrace, root) -> Optional[float]:
    """Median admissible log-ratio of one trace, or ``None`` with fewer than two."""
    if len(trace.iterates) < 4:
        return None
    ratios = convergence_ratios(trace, root)
    if len(ratios) < 2:
        return None
    return statistics.median(ratios)


def pooled_order(traces: Sequence[tuple[IterationTrace, complex]]) -> Optional[float]:
    """Median of the admissible ratios pooled over several ``(trace, root)`` pairs.

    Cubically convergent methods leave about one admissible ratio per trace in
    double precision, so a single trace rarely supports an estimate.
    """
    ratios = [r for trace, root in traces for r in convergence_ratios(trace, root)]
    if len(ratios) < 2:
        return None
    return statistics.median(ratios)


def _sorted_points(points):
    return sorted((complex(p) for p in points), key=lambda c: (c.real, c.imag))


def cluster_points(points: Sequence[complex], radius: float) -> list[complex]:
    """Single-linkage clusters of ``points`` within ``radius``; centroids sorted by (re, im).

    The result does not depend on the order of ``points``.
    """
    pts = _sorted_points(points)
    if not pts:
        return []
    xy = np.array([[p.real, p.imag] for p in pts])
    pairs = cKDTree(xy).query_pairs(radius, output_type="ndarray")
    n = len(pts)
    graph = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(n, n))
    _, labels = connected_components(graph, directed=False)
    centroids = []
    for lab in np.unique(labels):
        members = xy[labels == lab]
        c = members.mean(axis=0)
        centroids.append(complex(c[0], c[1]))
    return _sorted_points(centroids)


def find_zeros(f: HarmonicMap, kind: StepKind, window: Window, grid_n: int,
               opts: IterationOptions = IterationOptions(),
               dedup_radius: float = 1e-8) -> list[complex]:
    """Zeros of ``f`` found by iterating from a ``grid_n x grid_n`` lattice of starts."""
    if grid_n < 2:
        raise ValueError("grid_n must be at least 2")
    _check_kind(f, kind)
    xs = np.linspace(window.x0, window.x1, grid_n)
    ys = np.linspace(window.y0, window.y1, grid_n)
    keep_box = window.inflated(0.10)
    found = []
    for y in ys:
        for x in xs:
            trace = iterate(f, kind, complex(x, y), opts)
            if trace.status is not IterationStatus.CONVERGED:
                continue
            z = trace.final
            try:
                ok = _residual(f, z) <= 10 * opts.residual_tol
            except NumericalError:
                continue
            if ok and keep_box.contains(z):
                found.append(z)
    return cluster_points(found, dedup_radius)
