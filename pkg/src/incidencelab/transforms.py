"""Incidence-preserving maps between configurations.

* ``lift_to_concurrent`` turns the parallel classes of a grid
  configuration into concurrent classes by a projective transform that
  sends a hyperplane avoiding the grid to infinity.
* ``project_generic`` applies a seeded random rational linear projection
  and certifies genericity a posteriori by comparing extracted incidence
  structures (random rational draws cannot be generic in the measure
  sense, so the contract is checked, not assumed).
* ``dualize`` / ``undualize`` implement the planar pole-polar duality
  with respect to the conic x^2 + y^2 = w^2.

All maps send class lists in order, so ``(color, index)`` labels are
stable along pipelines.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .configs import ColoredLineConfig, DualPointConfig
from .exactgeom import (
    Line,
    ProjPoint,
    apply_matrix,
    int_rank,
    line_covector_2d,
    line_from_covector_2d,
    span,
)
from .gridmodel import ColoredGridConfig
from .rng import RETRY_OFFSET, splitmix64, substream
from .structure import (
    IncidenceStructure,
    Monomial,
    extract_structure_grid,
    extract_structure_lines,
)

_DRAW_HALF_RANGE = 1 << 16


def apply_projective(cfg: ColoredLineConfig, matrix: Sequence[Sequence]) -> ColoredLineConfig:
    """Map every line (and center) of a configuration through a matrix."""
    classes = []
    for cls in cfg.classes:
        mapped = []
        for line in cls:
            p, q = apply_matrix(matrix, line.p), apply_matrix(matrix, line.q)
            mapped.append(Line(p, q))
        classes.append(mapped)
    centers = [
        apply_matrix(matrix, c) if c is not None else None for c in cfg.centers
    ]
    return ColoredLineConfig(len(matrix) - 1, classes, centers)


def lift_to_concurrent(cfg: ColoredGridConfig, audit: bool = True) -> ColoredLineConfig:
    """Projective lift of a grid configuration making each axis class concurrent.

    The hyperplane {x_1 + ... + x_(k+1) = c} with c beyond the grid's
    coordinate-sum range is sent to infinity; the class of axis a becomes
    concurrent through the image of its direction, the affine unit point
    on axis a.  With ``audit`` the extracted incidence structure is
    checked to be identical before and after (skip for very large
    configurations, where the quadratic extraction is the bottleneck).
    """
    for cls in cfg.classes:
        if len({line.axis for line in cls}) > 1:
            raise ValueError("lift requires axis-parallel classes")
    dim = cfg.k + 1
    c = dim * cfg.n + 1
    matrix = [[Fraction(int(i == j)) for j in range(dim)] + [Fraction(0)] for i in range(dim)]
    matrix.append([Fraction(1)] * dim + [Fraction(-c)])

    from .configs import embed_grid_config

    embedded = embed_grid_config(cfg)
    lifted = apply_projective(embedded, matrix)
    if audit:
        before = extract_structure_grid(cfg)
        after = extract_structure_lines(lifted)
        if before != after:
            raise RuntimeError("lift failed its incidence preservation audit")
    return lifted


@dataclass(frozen=True)
class ProjectionResult:
    """A generic projection together with its genericity audit record."""

    config: ColoredLineConfig
    seed: int
    attempts: int
    new_crossings: frozenset[Monomial]


def _audit_projection(
    before: IncidenceStructure, after: IncidenceStructure, d: int
) -> tuple[bool, frozenset[Monomial]]:
    if d >= 3:
        return before.monomials == after.monomials, frozenset()
    # In the plane new 2-line crossings among previously disjoint lines
    # are unavoidable; every source incidence must survive with exactly
    # its line set and gain nothing.
    if not before.monomials <= after.monomials:
        return False, frozenset()
    extras = after.monomials - before.monomials
    for m in extras:
        if len(m) != 2:
            return False, frozenset()
        if any(m <= old for old in before.monomials):
            return False, frozenset()
    return True, frozenset(extras)


def project_generic(
    cfg: ColoredLineConfig,
    d: int,
    seed: int,
    max_attempts: int = 32,
) -> ProjectionResult:
    """Seeded random rational linear projection R^D -> R^d, certified generic.

    Retries with fresh draws until the incidence structure survives the
    audit (exact equality for d >= 3; the documented relaxed contract for
    d = 2) and no two lines collapse; raises after ``max_attempts``.
    """
    D = cfg.d
    if not 2 <= d <= D:
        raise ValueError("projection target must satisfy 2 <= d <= D")
    before = extract_structure_lines(cfg)
    for attempt in range(max_attempts):
        stream = substream(seed, RETRY_OFFSET + attempt)
        draws = iter(
            splitmix64(stream, i) % (2 * _DRAW_HALF_RANGE + 1) - _DRAW_HALF_RANGE
            for i in range(d * D)
        )
        matrix = [[next(draws) for _ in range(D)] + [0] for _ in range(d)]
        matrix.append([0] * D + [1])
        try:
            image = apply_projective(cfg, matrix)
        except ValueError:
            continue  # a line collapsed to a point
        keys = [line.key for _, _, line in image.lines()]
        if len(set(keys)) != len(keys):
            continue  # two distinct lines collapsed together
        after = extract_structure_lines(image)
        ok, extras = _audit_projection(before, after, d)
        if ok:
            return ProjectionResult(image, seed, attempt + 1, extras)
    raise RuntimeError(f"no generic projection found in {max_attempts} attempts")


_POLE = (0, 0, 1)


def _translation_clearing_pole(cfg: ColoredLineConfig) -> tuple[int, int]:
    """Deterministic translation after which no line passes the duality pole.

    Lines through the pole after translating by (j, j^2) correspond to
    source lines through (-j, -j^2); a line meets that parabola at most
    twice, so at most 2L candidates fail.
    """
    total = cfg.total_lines()
    for j in range(2 * total + 1):
        probe = ProjPoint([-j, -j * j, 1])
        if not any(line.contains(probe) for _, _, line in cfg.lines()):
            return j, j * j
    raise RuntimeError("unreachable: translation search exhausted")


def dualize(cfg: ColoredLineConfig) -> DualPointConfig:
    """Pole-polar dual of a planar line configuration.

    Concurrences of size t map to collinear t-tuples and vice versa.  The
    configuration is first translated (deterministically) so that no line
    passes through the pole, keeping every dual point finite.
    """
    if cfg.d != 2:
        raise ValueError("dualize needs a planar configuration; project to d=2 first")
    tx, ty = _translation_clearing_pole(cfg)
    matrix = [[1, 0, tx], [0, 1, ty], [0, 0, 1]]
    moved = apply_projective(cfg, matrix) if (tx, ty) != (0, 0) else cfg
    classes = []
    for cls in moved.classes:
        pts = []
        for line in cls:
            a, b, c = line_covector_2d(line)
            pts.append(ProjPoint([a, b, -c]))
        classes.append(pts)
    return DualPointConfig(classes)


def undualize(dual: DualPointConfig) -> ColoredLineConfig:
    """Inverse duality: points back to lines (infinite points map to lines
    through the pole, which is legitimate and needed for direction colors)."""
    classes = []
    for cls in dual.classes:
        lines = []
        for p in cls:
            x, y, z = p.coords
            lines.append(line_from_covector_2d((x, y, -z)))
        classes.append(lines)
    return ColoredLineConfig(2, classes)


def extract_planarity(cfg: ColoredLineConfig) -> tuple[bool, int]:
    """(all lines lie in a common 2-flat?, projective dimension of their span)."""
    rows = []
    for _, _, line in cfg.lines():
        rows.append(line.p.coords)
        rows.append(line.q.coords)
    if not rows:
        return True, 0
    dim = int_rank(rows) - 1
    return dim <= 2, dim


def flat_of_config(cfg: ColoredLineConfig):
    points = []
    for _, _, line in cfg.lines():
        points.extend([line.p, line.q])
    return span(points)
