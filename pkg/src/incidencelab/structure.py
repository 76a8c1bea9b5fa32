"""Incidence structures: the maximal concurrences of a configuration.

An incidence structure records, per concurrency point, the set of
``(color, index)`` line references meeting there ("monomials").  All
maximal concurrences are kept, including single-color ones (the center
of a concurrent class, or the shared direction of a parallel class), so
transform preservation audits can compare structures exactly.  The
classification tables of 4x3 configurations speak about the colorful
triples only; use :meth:`IncidenceStructure.colorful_triples` for those.

For dual point configurations the same record type holds the maximal
*alignments* (collinear subsets), which are exactly the dual notion of
concurrences, so the consistency checks below apply unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from . import gridmodel
from .configs import ColoredLineConfig, DualPointConfig
from .exactgeom import Line, ProjPoint, line_covector_2d, meet
from .gridmodel import ColoredGridConfig, ConsistencyVerdict, LineRef

Monomial = frozenset[LineRef]


@dataclass(frozen=True)
class IncidenceStructure:
    """Maximal concurrences with color annotations; witnesses per monomial.

    Equality compares monomials and class sizes only — witnesses are
    geometric and differ across incidence-preserving transforms.
    """

    monomials: frozenset[Monomial]
    class_sizes: tuple[int, ...]
    witnesses: dict = field(compare=False, hash=False, default_factory=dict)

    @property
    def num_colors(self) -> int:
        return len(self.class_sizes)

    def monomials_of(self, ref: LineRef) -> list[Monomial]:
        return [m for m in self.monomials if ref in m]

    def colorful_triples(self) -> frozenset[Monomial]:
        """Monomials of exactly three lines in three distinct colors."""
        return frozenset(
            m for m in self.monomials if len(m) == 3 and len({c for c, _ in m}) == 3
        )

    def max_colorful(self) -> tuple[int, object | None]:
        """Largest color count over all monomials, with a witness."""
        best, witness = 0, None
        for m in sorted(self.monomials, key=sorted):
            order = len({c for c, _ in m})
            if order > best:
                best, witness = order, self.witnesses.get(m)
        return best, witness


def _structure_from_map(
    point_map: dict, class_sizes: tuple[int, ...]
) -> IncidenceStructure:
    monomials = {}
    for witness, refs in point_map.items():
        if len(refs) >= 2:
            monomials[frozenset(refs)] = witness
    return IncidenceStructure(
        frozenset(monomials), class_sizes, {m: w for m, w in monomials.items()}
    )


def extract_structure_grid(cfg: ColoredGridConfig) -> IncidenceStructure:
    """Grid-point concurrences plus one monomial per shared axis direction."""
    point_map: dict[ProjPoint, set[LineRef]] = {}
    for pt, refs in gridmodel._incidence_map(cfg).items():
        point_map[ProjPoint.affine(pt)] = set(refs)
    by_axis: dict[int, set[LineRef]] = {}
    for color, idx, line in cfg.lines():
        by_axis.setdefault(line.axis, set()).add((color, idx))
    for axis, refs in by_axis.items():
        if len(refs) >= 2:
            direction = [0] * (cfg.k + 1)
            direction[axis - 1] = 1
            point_map[ProjPoint.direction(direction)] = refs
    return _structure_from_map(point_map, cfg.class_sizes())


def extract_structure_lines(cfg: ColoredLineConfig) -> IncidenceStructure:
    """All maximal concurrences of a line configuration via exact pairwise meets."""
    entries = list(cfg.lines())
    refs = [(color, idx) for color, idx, _ in entries]
    lines = [line for _, _, line in entries]
    on_points: list[set[ProjPoint]] = [set() for _ in lines]
    point_map: dict[ProjPoint, set[LineRef]] = {}
    for i, j in combinations(range(len(lines)), 2):
        if on_points[i] & on_points[j]:
            continue  # already bucketed at a shared point
        pt = meet(lines[i], lines[j])
        if pt is None:
            continue
        bucket = point_map.setdefault(pt, set())
        bucket.add(refs[i])
        bucket.add(refs[j])
        on_points[i].add(pt)
        on_points[j].add(pt)
    return _structure_from_map(point_map, cfg.class_sizes())


def extract_alignments(cfg: DualPointConfig) -> IncidenceStructure:
    """Maximal collinear subsets of a dual point configuration."""
    entries = list(cfg.points())
    line_map: dict[tuple[int, ...], set[LineRef]] = {}
    for (ca, ia, pa), (cb, ib, pb) in combinations(entries, 2):
        cov = line_covector_2d(Line(pa, pb))
        line_map.setdefault(cov, set()).update([(ca, ia), (cb, ib)])
    return _structure_from_map(line_map, cfg.class_sizes())


def extract_structure(cfg) -> IncidenceStructure:
    """Dispatch on configuration type (grid, lines, or dual points)."""
    if isinstance(cfg, ColoredGridConfig):
        return extract_structure_grid(cfg)
    if isinstance(cfg, ColoredLineConfig):
        return extract_structure_lines(cfg)
    if isinstance(cfg, DualPointConfig):
        return extract_alignments(cfg)
    raise TypeError(f"cannot extract structure from {type(cfg)!r}")


def structure_consistency(s: IncidenceStructure, k: int) -> ConsistencyVerdict:
    """k-consistency evaluated on an extracted structure.

    A line (or dual point) of color c is good for a k-subset S with
    c in S iff some monomial containing it covers the other colors of S.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > s.num_colors:
        raise ValueError("k exceeds the number of colors")
    colors = range(1, s.num_colors + 1)
    per_ref: dict[LineRef, list[frozenset[int]]] = {}
    for m in s.monomials:
        mcolors = frozenset(c for c, _ in m)
        for ref in m:
            per_ref.setdefault(ref, []).append(mcolors)
    failures = []
    for color in colors:
        others = [c for c in colors if c != color]
        for idx in range(s.class_sizes[color - 1]):
            covers = per_ref.get((color, idx), [])
            for T in combinations(others, k - 1):
                need = frozenset(T)
                if need and not any(need <= mc for mc in covers):
                    failures.append(((color, idx), need | {color}))
    return ConsistencyVerdict(not failures, tuple(failures))


def max_colorful_order_structure(s: IncidenceStructure) -> tuple[int, object | None]:
    return s.max_colorful()
