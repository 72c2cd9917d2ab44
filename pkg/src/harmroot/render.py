"""Basin-of-attraction images for the four iterations.

Each pixel center is iterated; pixels converging to one of the canonical roots
(as found by :func:`~harmroot.iteration.find_zeros`) get that root's palette
color, dimmed by the number of iterations.  Everything else is black.  Rows are
computed independently and written into preallocated slots, so the output is
byte-identical for any thread count.
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .harmonic import HarmonicMap
from .iteration import (CONVERGED, DIVERGED, MAX_ITER, STEP_ERROR, IterationOptions,
                        StepKind, Window, cluster_points, find_zeros, iterate_many)

__all__ = ["PALETTE", "BasinImage", "render_basins", "write_ppm", "write_stats_csv",
           "thread_count"]

PALETTE = (
    (230, 25, 75), (60, 180, 75), (255, 225, 25), (0, 130, 200),
    (245, 130, 48), (145, 30, 180), (70, 240, 240), (240, 50, 230),
    (210, 245, 60), (250, 190, 212), (0, 128, 128), (220, 190, 255),
)
ROOT_MATCH_RADIUS = 1e-6


@dataclass
class BasinImage:
    width: int
    height: int
    pixels: np.ndarray          # (height, width, 3) uint8, top row first
    roots: list                 # canonical roots, then informational extras
    iteration_counts: np.ndarray  # (height, width) int
    root_index: np.ndarray      # (height, width) int, -1 when not attributed
    n_canonical: int
    status_counts: dict = field(default_factory=dict)

    def ppm_bytes(self) -> bytes:
        header = f"P6\n{self.width} {self.height}\n255\n".encode("ascii")
        return header + np.ascontiguousarray(self.pixels, dtype=np.uint8).tobytes()

    def root_stats(self) -> list[dict]:
        rows = []
        for k, r in enumerate(self.roots):
            mask = self.root_index == k
            count = int(mask.sum())
            mean = float(self.iteration_counts[mask].mean()) if count else 0.0
            rows.append({"root_index": k, "root": complex(r), "pixel_count": count,
                         "mean_iters": mean, "canonical": k < self.n_canonical})
        return rows


def thread_count() -> int:
    """Worker threads, capped by ``HARMROOT_THREADS`` when set."""
    n = os.cpu_count() or 1
    cap = os.environ.get("HARMROOT_THREADS")
    if cap:
        n = min(n, max(1, int(cap)))
    return n


def pixel_centers(window: Window, width: int, height: int):
    i = np.arange(width)
    j = np.arange(height)
    xs = window.x0 + (window.x1 - window.x0) * (2 * i + 1) / (2 * width)
    ys = window.y1 - (window.y1 - window.y0) * (2 * j + 1) / (2 * height)
    return xs, ys


def _nearest(finals: np.ndarray, roots: np.ndarray):
    if roots.size == 0:
        return np.full(finals.shape, -1), np.full(finals.shape, np.inf)
    d = np.abs(finals[:, None] - roots[None, :])
    idx = np.argmin(d, axis=1)
    return idx, d[np.arange(finals.size), idx]


def render_basins(f: HarmonicMap, kind: StepKind, window: Window, width: int, height: int,
                  opts: IterationOptions = IterationOptions(), grid_n: int = 40,
                  threads: int | None = None) -> BasinImage:
    if width < 1 or height < 1:
        raise ValueError("image dimensions must be positive")
    roots = find_zeros(f, kind, window, grid_n, opts)
    root_arr = np.array(roots, dtype=complex)
    xs, ys = pixel_centers(window, width, height)

    finals = np.empty((height, width), dtype=complex)
    iters = np.empty((height, width), dtype=np.int64)
    status = np.empty((height, width), dtype=np.int8)

    def run_row(j):
        zf, n, st = iterate_many(f, kind, xs + 1j * ys[j], opts)
        finals[j], iters[j], status[j] = zf, n, st

    n_threads = threads if threads is not None else thread_count()
    if n_threads <= 1:
        for j in range(height):
            run_row(j)
    else:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            list(pool.map(run_row, range(height)))

    conv = status == CONVERGED
    idx = np.full((height, width), -1, dtype=np.int64)
    near, dist = _nearest(finals[conv], root_arr)
    hit = dist <= ROOT_MATCH_RADIUS
    conv_idx = np.where(hit, near, -1)
    idx[conv] = conv_idx

    # converged away from every canonical root: listed, never colored
    stray = finals[conv][~hit]
    extras = cluster_points(list(stray), ROOT_MATCH_RADIUS)
    all_roots = list(roots) + extras
    if extras:
        stray_mask = conv.copy()
        stray_mask[conv] = ~hit
        e_near, _ = _nearest(finals[stray_mask], np.array(extras, dtype=complex))
        idx_extra = np.full((height, width), -1, dtype=np.int64)
        idx_extra[stray_mask] = e_near + len(roots)
    else:
        idx_extra = None

    pixels = np.zeros((height, width, 3), dtype=np.uint8)
    colored = idx >= 0
    if colored.any():
        pal = np.array(PALETTE, dtype=np.float64)
        shade = 0.3 + 0.7 * (1.0 - iters[colored] / opts.max_iter)
        rgb = np.floor(pal[idx[colored] % len(PALETTE)] * shade[:, None] + 0.5)
        pixels[colored] = np.clip(rgb, 0, 255).astype(np.uint8)

    root_index = idx if idx_extra is None else np.where(idx >= 0, idx, idx_extra)
    counts = {
        "converged": int(conv.sum()),
        "converged_unattributed": int(conv.sum() - hit.sum()),
        "max_iter_exceeded": int((status == MAX_ITER).sum()),
        "diverged": int((status == DIVERGED).sum()),
        "step_error": int((status == STEP_ERROR).sum()),
    }
    return BasinImage(width, height, pixels, all_roots, iters, root_index, len(roots), counts)


def write_ppm(image: BasinImage, path) -> None:
    with open(path, "wb") as fh:
        fh.write(image.ppm_bytes())


def write_stats_csv(image: BasinImage, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["root_index", "re", "im", "pixel_count", "mean_iters"])
        for row in image.root_stats():
            r = row["root"]
            w.writerow([row["root_index"], format(r.real, ".17g"), format(r.imag, ".17g"),
                        row["pixel_count"], format(row["mean_iters"], ".17g")])
