"""SVG pictures of the 2-simplex: cylinder partitions and fixed-point clouds.

Floats are allowed here and nowhere else in the library.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .ifs import Ifs

SQRT3_2 = math.sqrt(3) / 2
TRIANGLE_AREA = math.sqrt(3) / 4
# e0 bottom-left, e1 bottom-right, e2 top; SVG y grows downward
CORNERS = ((0.0, SQRT3_2), (1.0, SQRT3_2), (0.5, 0.0))

DEFAULT_PALETTE = ("#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1")
MAX_PARTITION_DEPTH = 12


def to_plane(x: Sequence) -> tuple[float, float]:
    """Barycentric coordinates to the equilateral triangle of side 1."""
    s = float(sum(x))
    w = [float(c) / s for c in x]
    return (
        sum(wi * c[0] for wi, c in zip(w, CORNERS)),
        sum(wi * c[1] for wi, c in zip(w, CORNERS)),
    )


def polygon_area(pts: Sequence[tuple[float, float]]) -> float:
    acc = 0.0
    for (x0, y0), (x1, y1) in zip(pts, list(pts[1:]) + [pts[0]]):
        acc += x0 * y1 - x1 * y0
    return abs(acc) / 2


@dataclass
class Scene:
    polygons: list[tuple[list[tuple[float, float]], str]] = field(default_factory=list)
    points: list[tuple[float, float]] = field(default_factory=list)
    viewport: tuple[float, float, float, float] = (-0.02, -0.02, 1.04, SQRT3_2 + 0.04)
    stroke_width: float = 0.002
    point_radius: float = 0.003

    def __post_init__(self):
        for pts, _ in self.polygons:
            if len(pts) < 3:
                raise ValueError("polygons need at least 3 vertices")

    def to_svg(self, pixels: int = 600) -> str:
        x, y, w, h = self.viewport
        height = round(pixels * h / w)
        out = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{pixels}" height="{height}" viewBox="{x!r} {y!r} {w!r} {h!r}">',
        ]
        for pts, fill in self.polygons:
            coords = " ".join(f"{px!r},{py!r}" for px, py in pts)
            out.append(
                f'<polygon points="{coords}" fill="{fill}" stroke="black" '
                f'stroke-width="{self.stroke_width!r}"/>'
            )
        if self.points:
            outline = " ".join(f"{px!r},{py!r}" for px, py in CORNERS)
            out.append(
                f'<polygon points="{outline}" fill="none" stroke="black" '
                f'stroke-width="{self.stroke_width!r}"/>'
            )
        for px, py in self.points:
            out.append(f'<circle cx="{px!r}" cy="{py!r}" r="{self.point_radius!r}" fill="black"/>')
        out.append("</svg>")
        return "\n".join(out) + "\n"


def _require_triangle(ifs: Ifs):
    if ifs.n != 2:
        raise ValueError(f"rendering needs n = 2, got n = {ifs.n}")


def partition_scene(
    ifs: Ifs,
    depth: int,
    palette: Sequence[str] = DEFAULT_PALETTE,
    stroke_width: float = 0.002,
) -> Scene:
    _require_triangle(ifs)
    if not 0 <= depth <= MAX_PARTITION_DEPTH:
        raise ValueError(f"depth must be in 0..{MAX_PARTITION_DEPTH}")
    scene = Scene(stroke_width=stroke_width)
    for w, m in ifs.cylinders(depth):
        pts = [to_plane(c) for c in m.columns()]
        color = palette[w[-1] % len(palette)] if w else palette[0]
        scene.polygons.append((pts, color))
    return scene


def partition_svg(ifs: Ifs, depth: int, **kw) -> str:
    return partition_scene(ifs, depth, **kw).to_svg()


def _word_matrices(ifs: Ifs, max_len: int) -> np.ndarray:
    branches = [np.array(b.tolist(), dtype=float) for b in ifs.branches]
    level = np.eye(ifs.n + 1)[None]
    out = []
    for _ in range(max_len):
        level = np.concatenate([level @ b for b in branches])
        # rescale so long products stay finite; directions are unaffected
        level = level / level.sum(axis=(1, 2), keepdims=True)
        out.append(level)
    return np.concatenate(out)


def attracting_directions(ifs: Ifs, max_len: int, margin: float = 1e-6) -> np.ndarray:
    """Dominant eigendirections (on the simplex) of proximal word matrices."""
    mats = _word_matrices(ifs, max_len)
    eig = np.sort(np.abs(np.linalg.eigvals(mats)), axis=1)[:, ::-1]
    proximal = eig[:, 0] * (1 - margin) > eig[:, 1]
    mats = mats[proximal]
    # power iteration by repeated squaring: M^(2^s) tends to a rank-one projector
    for _ in range(60):
        mats = mats @ mats
        mats = mats / mats.sum(axis=(1, 2), keepdims=True)
    v = mats.sum(axis=2)
    v = v / v.sum(axis=1, keepdims=True)
    return v[np.all(v > -1e-12, axis=1)]


def fixed_point_cloud_scene(ifs: Ifs, max_len: int, margin: float = 1e-6) -> Scene:
    _require_triangle(ifs)
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    dirs = attracting_directions(ifs, max_len, margin)
    pts = sorted({(round(a, 9), round(b, 9)) for a, b in (to_plane(v) for v in dirs)})
    return Scene(points=pts)


def fixed_point_cloud_svg(ifs: Ifs, max_len: int, margin: float = 1e-6) -> str:
    return fixed_point_cloud_scene(ifs, max_len, margin).to_svg()


def power_iteration(m, iters: int = 10_000, tol: float = 1e-15) -> np.ndarray:
    """Dominant eigendirection of a nonnegative matrix, normalized to sum 1."""
    a = np.asarray(m, dtype=float)
    v = np.ones(a.shape[0]) / a.shape[0]
    for _ in range(iters):
        w = a @ v
        w = w / w.sum()
        if np.max(np.abs(w - v)) < tol:
            return w
        v = w
    return v
