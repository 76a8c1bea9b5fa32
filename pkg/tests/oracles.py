"""Independent brute-force references used to check the production paths.

These deliberately avoid the axis-pair hashing of the library: they
enumerate grid points (or raw containment) and nothing else, so
agreement is meaningful evidence rather than a tautology.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from incidencelab.gridmodel import ColoredGridConfig, GridLine


def point_on_line(point: tuple[int, ...], line: GridLine) -> bool:
    """Raw containment: coordinates match the base outside the axis slot."""
    return all(
        point[t] == line.base[t]
        for t in range(len(point))
        if t != line.axis - 1
    )


def tiny_incidences(cfg: ColoredGridConfig) -> dict[tuple[int, ...], set]:
    """O(points * lines) enumeration; only for very small grids."""
    out: dict[tuple[int, ...], set] = {}
    for point in product(range(1, cfg.n + 1), repeat=cfg.k + 1):
        refs = {
            (color, idx)
            for color, idx, line in cfg.lines()
            if point_on_line(point, line)
        }
        if len(refs) >= 2:
            out[point] = refs
    return out


def point_enumeration_incidences(cfg: ColoredGridConfig) -> dict[tuple[int, ...], set]:
    """Full n^(k+1) grid sweep, testing class membership per axis at each point."""
    index_of = [
        {line: idx for idx, line in enumerate(cls)} for cls in cfg.classes
    ]
    out: dict[tuple[int, ...], set] = {}
    for point in product(range(1, cfg.n + 1), repeat=cfg.k + 1):
        refs = set()
        for color in range(1, cfg.num_colors + 1):
            for axis in range(1, cfg.k + 2):
                base = list(point)
                base[axis - 1] = 0
                candidate = GridLine(axis, tuple(base))
                idx = index_of[color - 1].get(candidate)
                if idx is not None:
                    refs.add((color, idx))
        if len(refs) >= 2:
            out[point] = refs
    return out


def colorful_point_exists(cfg: ColoredGridConfig) -> bool:
    """True iff some grid point carries lines of every color (full sweep)."""
    m = cfg.num_colors
    for point, refs in point_enumeration_incidences(cfg).items():
        if len({c for c, _ in refs}) == m:
            return True
    return False


def collinear(p, q, r) -> bool:
    """Exact 3x3 determinant test on homogeneous planar points."""
    (a1, a2, a3), (b1, b2, b3), (c1, c2, c3) = p.coords, q.coords, r.coords
    det = (
        a1 * (b2 * c3 - b3 * c2)
        - a2 * (b1 * c3 - b3 * c1)
        + a3 * (b1 * c2 - b2 * c1)
    )
    return det == 0


def rank3x3(rows) -> int:
    """Rank of a 3x3 rational matrix by explicit minors."""
    rows = [[Fraction(v) for v in row] for row in rows]
    det = (
        rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
        - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
        + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0])
    )
    if det != 0:
        return 3
    for i in range(3):
        for j in range(3):
            minor = [
                [rows[r][c] for c in range(3) if c != j]
                for r in range(3)
                if r != i
            ]
            if minor[0][0] * minor[1][1] - minor[0][1] * minor[1][0] != 0:
                return 2
    return 1 if any(any(v != 0 for v in row) for row in rows) else 0
