"""Combinatorial model of axis-aligned lines in the grid [n]^(k+1).

A grid line is identified by its axis and its fixed coordinates, so all
incidence questions reduce to tuple bookkeeping — no continuous geometry
is involved.  Incidence detection hashes lines by their coordinate
projections per axis pair rather than enumerating grid points; the full
point-enumeration oracle lives in the test suite as an independent
reference.

Colors are 1-based class indices.  Lines are referenced as
``(color, index)`` pairs, where ``index`` is the position in the class
tuple after the constructor's canonical sort.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence

from .exactgeom import Line, ProjPoint

LineRef = tuple[int, int]


@dataclass(frozen=True, order=True)
class GridLine:
    """An axis-parallel grid line: axis index (1-based) plus fixed coordinates.

    ``base`` has length k+1 with the (ignored) axis slot stored as 0 and
    every other entry in [1, n].
    """

    axis: int
    base: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 1 <= self.axis <= len(self.base):
            raise ValueError(f"axis {self.axis} out of range for base {self.base}")
        if self.base[self.axis - 1] != 0:
            raise ValueError("the axis slot of a grid line base must be stored as 0")
        if any(v < 1 for i, v in enumerate(self.base) if i != self.axis - 1):
            raise ValueError("non-axis base entries must be >= 1")

    def point_at(self, value: int) -> tuple[int, ...]:
        """The grid point on this line with the axis coordinate set to ``value``."""
        coords = list(self.base)
        coords[self.axis - 1] = value
        return tuple(coords)

    def points(self, n: int) -> Iterator[tuple[int, ...]]:
        for v in range(1, n + 1):
            yield self.point_at(v)


@dataclass(frozen=True)
class ColoredGridConfig:
    """Colored axis-aligned lines in [n]^(k+1); classes are canonically sorted."""

    k: int
    n: int
    classes: tuple[tuple[GridLine, ...], ...]

    def __init__(self, k: int, n: int, classes: Sequence[Sequence[GridLine]]):
        if k < 2:
            raise ValueError("grid model needs k >= 2")
        if n < 1:
            raise ValueError("grid side n must be >= 1")
        canon = tuple(tuple(sorted(set(cls))) for cls in classes)
        seen: set[GridLine] = set()
        for cls_idx, cls in enumerate(canon):
            if len(cls) != len(classes[cls_idx]):
                raise ValueError("duplicate line within a color class")
            for line in cls:
                if len(line.base) != k + 1:
                    raise ValueError("grid line dimension does not match k+1")
                if any(v > n for v in line.base):
                    raise ValueError("grid line base entry exceeds n")
                if line in seen:
                    raise ValueError(f"duplicate line across color classes: {line}")
                seen.add(line)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "classes", canon)

    @property
    def num_colors(self) -> int:
        return len(self.classes)

    def class_sizes(self) -> tuple[int, ...]:
        return tuple(len(cls) for cls in self.classes)

    def total_lines(self) -> int:
        return sum(self.class_sizes())

    def lines(self) -> Iterator[tuple[int, int, GridLine]]:
        """Yield (color, index, line) over the whole configuration."""
        for color, cls in enumerate(self.classes, start=1):
            for idx, line in enumerate(cls):
                yield color, idx, line

    def without_line(self, ref: LineRef) -> "ColoredGridConfig":
        color, idx = ref
        cls = list(self.classes[color - 1])
        del cls[idx]
        new_classes = list(self.classes)
        new_classes[color - 1] = tuple(cls)
        return ColoredGridConfig(self.k, self.n, new_classes)


@dataclass(frozen=True)
class IncidencePointRecord:
    """A grid point on at least two configuration lines."""

    point: tuple[int, ...]
    lines: frozenset[LineRef]
    colors: frozenset[int]


def grid_meet(a: GridLine, b: GridLine) -> tuple[int, ...] | None:
    """Common grid point of two distinct grid lines, or None.

    Lines on the same axis are distinct parallels and never meet in the
    grid; lines on different axes meet iff their bases agree on every
    slot outside the two axes.
    """
    if len(a.base) != len(b.base):
        raise ValueError("grid lines live in different grids")
    if a == b:
        raise ValueError("meet of identical grid lines is undefined")
    if a.axis == b.axis:
        return None
    ia, ib = a.axis - 1, b.axis - 1
    for t in range(len(a.base)):
        if t not in (ia, ib) and a.base[t] != b.base[t]:
            return None
    coords = list(a.base)
    coords[ia] = b.base[ia]
    coords[ib] = a.base[ib]
    return tuple(coords)


def embed_grid_line(line: GridLine) -> Line:
    """The grid line as an exact rational line in R^(k+1)."""
    direction = [0] * len(line.base)
    direction[line.axis - 1] = 1
    return Line(ProjPoint.affine(line.point_at(1)), ProjPoint.direction(direction))


def _incidence_map(cfg: ColoredGridConfig) -> dict[tuple[int, ...], set[LineRef]]:
    by_axis: dict[int, list[tuple[LineRef, GridLine]]] = {}
    for color, idx, line in cfg.lines():
        by_axis.setdefault(line.axis, []).append(((color, idx), line))
    points: dict[tuple[int, ...], set[LineRef]] = {}
    axes = sorted(by_axis)
    for a, b in combinations(axes, 2):
        ia, ib = a - 1, b - 1
        buckets: dict[tuple[int, ...], list[tuple[LineRef, GridLine]]] = {}
        for ref, line in by_axis[a]:
            key = tuple(v for t, v in enumerate(line.base) if t not in (ia, ib))
            buckets.setdefault(key, []).append((ref, line))
        for ref_b, line_b in by_axis[b]:
            key = tuple(v for t, v in enumerate(line_b.base) if t not in (ia, ib))
            for ref_a, line_a in buckets.get(key, ()):
                pt = list(line_a.base)
                pt[ia] = line_b.base[ia]
                pt[ib] = line_a.base[ib]
                tpt = tuple(pt)
                points.setdefault(tpt, set()).update((ref_a, ref_b))
    return points


def all_incidences(cfg: ColoredGridConfig) -> list[IncidencePointRecord]:
    """All grid points lying on >= 2 configuration lines, sorted by point."""
    points = _incidence_map(cfg)
    return [
        IncidencePointRecord(pt, frozenset(refs), frozenset(c for c, _ in refs))
        for pt, refs in sorted(points.items())
    ]


def _class_axis_bases(
    cfg: ColoredGridConfig, removed: LineRef | None = None
) -> list[dict[int, set[tuple[int, ...]]]]:
    out: list[dict[int, set[tuple[int, ...]]]] = []
    for color, cls in enumerate(cfg.classes, start=1):
        per_axis: dict[int, set[tuple[int, ...]]] = {}
        for idx, line in enumerate(cls):
            if removed == (color, idx):
                continue
            per_axis.setdefault(line.axis, set()).add(line.base)
        out.append(per_axis)
    return out


def _line_has_S_incidence(
    cfg: ColoredGridConfig,
    line: GridLine,
    others: Sequence[int],
    bases: Sequence[dict[int, set[tuple[int, ...]]]],
) -> bool:
    for value in range(1, cfg.n + 1):
        point = line.point_at(value)
        for color in others:
            hit = False
            for axis, base_set in bases[color - 1].items():
                zeroed = list(point)
                zeroed[axis - 1] = 0
                if tuple(zeroed) in base_set:
                    hit = True
                    break
            if not hit:
                break
        else:
            return True
    return False


def has_S_incidence(cfg: ColoredGridConfig, ref: LineRef, S: Sequence[int]) -> bool:
    """True iff some point of the line lies on lines of every color in S."""
    color, idx = ref
    subset = frozenset(S)
    if color not in subset:
        raise ValueError("the line's color must belong to S")
    if not subset <= set(range(1, cfg.num_colors + 1)):
        raise ValueError("S contains an unknown color")
    line = cfg.classes[color - 1][idx]
    others = sorted(subset - {color})
    return _line_has_S_incidence(cfg, line, others, _class_axis_bases(cfg))


@dataclass(frozen=True)
class ConsistencyVerdict:
    """Outcome of a k-consistency check with the full failing-pair witness list."""

    ok: bool
    failures: tuple[tuple[LineRef, frozenset[int]], ...]

    def __bool__(self) -> bool:
        return self.ok


def _iter_consistency_failures(
    cfg: ColoredGridConfig, k: int, removed: LineRef | None = None
) -> Iterator[tuple[LineRef, frozenset[int]]]:
    bases = _class_axis_bases(cfg, removed)
    colors = range(1, cfg.num_colors + 1)
    for color, cls in enumerate(cfg.classes, start=1):
        other_colors = [c for c in colors if c != color]
        for T in combinations(other_colors, k - 1):
            S = frozenset((color, *T))
            for idx, line in enumerate(cls):
                if removed == (color, idx):
                    continue
                if not _line_has_S_incidence(cfg, line, T, bases):
                    yield (color, idx), S


def is_k_consistent(cfg: ColoredGridConfig, k: int) -> ConsistencyVerdict:
    """Check that every line of every color in every k-subset S has an S-incidence."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > cfg.num_colors:
        raise ValueError("k exceeds the number of colors")
    failures = tuple(_iter_consistency_failures(cfg, k))
    return ConsistencyVerdict(not failures, failures)


def breaks_consistency_without(cfg: ColoredGridConfig, k: int, ref: LineRef) -> bool:
    """True iff removing the referenced line makes the configuration inconsistent."""
    return next(_iter_consistency_failures(cfg, k, removed=ref), None) is not None


def max_colorful_order(
    cfg: ColoredGridConfig,
) -> tuple[int, tuple[int, ...] | None]:
    """Largest number of distinct colors at any incidence point, with a witness."""
    best = 0
    witness: tuple[int, ...] | None = None
    for rec in all_incidences(cfg):
        if len(rec.colors) > best:
            best = len(rec.colors)
            witness = rec.point
    return best, witness


def grid_to_json(cfg: ColoredGridConfig) -> dict:
    classes = []
    for color, cls in enumerate(cfg.classes, start=1):
        by_axis: dict[int, list[list[int]]] = {}
        for line in cls:
            stripped = [v for t, v in enumerate(line.base) if t != line.axis - 1]
            by_axis.setdefault(line.axis, []).append(stripped)
        if not by_axis:
            # an empty class still occupies its color slot
            classes.append({"color": color, "axis": 1, "bases": []})
        for axis in sorted(by_axis):
            classes.append({"color": color, "axis": axis, "bases": by_axis[axis]})
    return {"model": "grid", "k": cfg.k, "n": cfg.n, "classes": classes}


def grid_from_json(data: dict) -> ColoredGridConfig:
    if data.get("model", "grid") != "grid":
        raise ValueError("not a grid configuration")
    k, n = data["k"], data["n"]
    classes: dict[int, list[GridLine]] = {}
    for entry in data["classes"]:
        color, axis = entry["color"], entry["axis"]
        classes.setdefault(color, [])
        for stripped in entry["bases"]:
            base = list(stripped)
            base.insert(axis - 1, 0)
            classes[color].append(GridLine(axis, tuple(base)))
    ordered = [classes.get(c, []) for c in range(1, max(classes, default=0) + 1)]
    return ColoredGridConfig(k, n, ordered)
