"""Basins of attraction on a rectangular complex grid.

Each pixel centre is used as a starting point z0 and iterated with the full
method map until it comes within ``attract_tolerance`` of one of the known
roots (pixel gets that root's index) or ``max_iterations`` pass, the orbit
escapes or a non-finite value appears (pixel is NONE, drawn black).

Iteration runs in binary64 over numpy arrays; row bands are independent, so
they can be processed by a thread pool without changing any pixel.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .methods import MethodSpec, complex_map
from .problems import Problem

NONE = -1

DEFAULT_PALETTE = (
    (230, 25, 75),
    (60, 180, 75),
    (0, 130, 200),
    (255, 225, 25),
    (145, 30, 180),
    (70, 240, 240),
    (245, 130, 48),
    (240, 50, 230),
)


@dataclass(frozen=True)
class BasinConfig:
    re_min: float = -3.0
    re_max: float = 3.0
    im_min: float = -3.0
    im_max: float = 3.0
    width: int = 512
    height: int = 512
    max_iterations: int = 100
    attract_tolerance: float = 1e-3
    roots: tuple = ()
    escape_radius: float = 1e12

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("empty region: need re_min < re_max and im_min < im_max")
        if self.width < 1 or self.height < 1:
            raise ValueError("width and height must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if not self.attract_tolerance > 0:
            raise ValueError("attract_tolerance must be positive")
        roots = tuple(complex(r) for r in self.roots)
        object.__setattr__(self, "roots", roots)
        for i, a in enumerate(roots):
            for b in roots[i + 1:]:
                if abs(a - b) <= 2 * self.attract_tolerance:
                    raise ValueError("roots closer than 2 * attract_tolerance cannot be told apart")

    def with_roots(self, roots: Sequence) -> "BasinConfig":
        return replace(self, roots=tuple(roots))

    def pixel_centers(self, rows: slice = slice(None)) -> np.ndarray:
        """Complex starting points, shape (height, width); row 0 is the top (im_max)."""
        dx = (self.re_max - self.re_min) / self.width
        dy = (self.im_max - self.im_min) / self.height
        re = self.re_min + (np.arange(self.width) + 0.5) * dx
        im = self.im_max - (np.arange(self.height)[rows] + 0.5) * dy
        return re[None, :] + 1j * im[:, None]


@dataclass
class BasinGrid:
    width: int
    height: int
    max_iterations: int
    root_index: np.ndarray  # (height, width) int, NONE for black
    iterations: np.ndarray  # (height, width) int
    final: np.ndarray = field(repr=False, default=None)  # last iterate per pixel
    n_roots: int = 0


@dataclass(frozen=True)
class BasinStats:
    root_counts: tuple
    black_count: int
    mean_iterations: float

    def to_text(self) -> str:
        lines = [f"root_{k}_count={c}" for k, c in enumerate(self.root_counts)]
        lines.append(f"black_count={self.black_count}")
        lines.append(f"mean_iterations={self.mean_iterations:.6f}")
        return "\n".join(lines) + "\n"


def _resolve(p: Problem, cfg: BasinConfig | None) -> BasinConfig:
    cfg = cfg or BasinConfig()
    if not cfg.roots:
        if not p.known_roots_complex:
            raise ValueError(f"problem {p.name} has no known complex roots")
        cfg = cfg.with_roots(p.known_roots_complex)
    return cfg


def _iterate(G, z0: np.ndarray, cfg: BasinConfig):
    """Classify a flat array of starting points."""
    roots = np.asarray(cfg.roots, dtype=complex)
    tol = cfg.attract_tolerance
    n = z0.size
    idx = np.full(n, NONE, dtype=np.int16)
    iters = np.full(n, cfg.max_iterations, dtype=np.int32)
    z = z0.astype(complex, copy=True)
    active = np.arange(n)

    def capture(step_no):
        nonlocal active
        za = z[active]
        dist = np.abs(za[:, None] - roots[None, :])
        hit = dist <= tol
        got = hit.any(axis=1)
        if got.any():
            which = active[got]
            idx[which] = np.argmax(hit[got], axis=1)
            iters[which] = step_no
            active = active[~got]

    capture(0)
    with np.errstate(all="ignore"):
        for k in range(1, cfg.max_iterations + 1):
            if active.size == 0:
                break
            za = G(z[active])
            z[active] = za
            bad = ~np.isfinite(za) | (np.abs(za) > cfg.escape_radius)
            if bad.any():
                active = active[~bad]
            capture(k)
    return idx, iters, z


def classify_point(z0: complex, p: Problem, spec: MethodSpec, cfg: BasinConfig | None = None):
    """(root index or NONE, iterations used) for one starting point."""
    cfg = _resolve(p, cfg)
    idx, iters, _ = _iterate(complex_map(p, spec), np.array([complex(z0)]), cfg)
    k = int(idx[0])
    return (None if k == NONE else k), int(iters[0])


def render(p: Problem, spec: MethodSpec, cfg: BasinConfig | None = None,
           workers: int | None = None, band_rows: int = 32) -> BasinGrid:
    cfg = _resolve(p, cfg)
    G = complex_map(p, spec)
    h, w = cfg.height, cfg.width
    idx = np.empty((h, w), dtype=np.int16)
    iters = np.empty((h, w), dtype=np.int32)
    final = np.empty((h, w), dtype=complex)

    def band(start):
        rows = slice(start, min(start + band_rows, h))
        z0 = cfg.pixel_centers(rows)
        bi, bn, bz = _iterate(G, z0.ravel(), cfg)
        idx[rows] = bi.reshape(z0.shape)
        iters[rows] = bn.reshape(z0.shape)
        final[rows] = bz.reshape(z0.shape)

    starts = range(0, h, band_rows)
    workers = workers or os.cpu_count() or 1
    if workers == 1:
        for s in starts:
            band(s)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(band, starts))
    return BasinGrid(w, h, cfg.max_iterations, idx, iters, final, len(cfg.roots))


def stats(g: BasinGrid) -> BasinStats:
    n_roots = max(g.n_roots, int(g.root_index.max()) + 1 if g.root_index.size else 0)
    counts = tuple(int(np.count_nonzero(g.root_index == k)) for k in range(n_roots))
    converged = g.root_index != NONE
    black = int(g.root_index.size - np.count_nonzero(converged))
    mean = float(g.iterations[converged].mean()) if converged.any() else 0.0
    return BasinStats(counts, black, mean)


def image_bytes(g: BasinGrid, palette: Sequence = DEFAULT_PALETTE, shade: bool = False) -> bytes:
    n_used = int(g.root_index.max()) + 1 if g.root_index.size else 0
    if len(palette) < max(n_used, g.n_roots):
        raise ValueError("palette has fewer colours than roots")
    lut = np.zeros((len(palette) + 1, 3), dtype=np.int64)
    lut[:-1] = np.asarray(palette, dtype=np.int64).reshape(-1, 3)
    # NONE (-1) picks the last row, which stays black
    rgb = lut[g.root_index.astype(np.int64)]
    if shade:
        # darker with more iterations, never below a quarter of the base colour
        scale = 4 * g.max_iterations - 3 * g.iterations.astype(np.int64)
        rgb = rgb * scale[..., None] // (4 * g.max_iterations)
    header = f"P6\n{g.width} {g.height}\n255\n".encode("ascii")
    return header + rgb.astype(np.uint8).tobytes()


def write_image(g: BasinGrid, palette: Sequence = DEFAULT_PALETTE, path=None, shade: bool = False) -> None:
    """Write the grid as a binary PPM (P6, maxval 255)."""
    data = image_bytes(g, palette, shade)
    with open(path, "wb") as fh:
        fh.write(data)
