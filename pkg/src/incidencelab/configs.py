"""Colored configurations of rational lines and of dual planar points.

``ColoredLineConfig`` is the continuous counterpart of the grid model:
classes of pairwise-distinct projective lines in R^d, with an optional
concurrency center recorded per class.  ``DualPointConfig`` holds the
planar point sets produced by duality.  Both serialize to JSON with
rationals as "num/den" strings and a "model" discriminator so pipeline
commands can dispatch on file content.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from . import gridmodel
from .exactgeom import Line, ProjPoint, meet

LineRef = tuple[int, int]


@dataclass(frozen=True)
class ColoredLineConfig:
    """Colored, pairwise-distinct lines in projective R^d.

    Class and line order is caller-defined and preserved verbatim:
    transforms map lines in order, so ``(color, index)`` references stay
    stable along a pipeline.  Generators emit deterministic orders.
    """

    d: int
    classes: tuple[tuple[Line, ...], ...]
    centers: tuple[ProjPoint | None, ...]

    def __init__(
        self,
        d: int,
        classes: Sequence[Sequence[Line]],
        centers: Sequence[ProjPoint | None] | None = None,
    ):
        if d < 2:
            raise ValueError("line configurations need ambient dimension d >= 2")
        canon = tuple(tuple(cls) for cls in classes)
        seen: set[tuple] = set()
        for cls in canon:
            for line in cls:
                if line.ambient_dim != d:
                    raise ValueError("line ambient dimension does not match d")
                if line.key in seen:
                    raise ValueError("duplicate line in configuration")
                seen.add(line.key)
        if centers is None:
            centers = (None,) * len(canon)
        if len(centers) != len(canon):
            raise ValueError("one center entry per class required")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "classes", canon)
        object.__setattr__(self, "centers", tuple(centers))

    @property
    def num_colors(self) -> int:
        return len(self.classes)

    def class_sizes(self) -> tuple[int, ...]:
        return tuple(len(cls) for cls in self.classes)

    def total_lines(self) -> int:
        return sum(self.class_sizes())

    def lines(self) -> Iterator[tuple[int, int, Line]]:
        for color, cls in enumerate(self.classes, start=1):
            for idx, line in enumerate(cls):
                yield color, idx, line

    def line(self, ref: LineRef) -> Line:
        return self.classes[ref[0] - 1][ref[1]]


@dataclass(frozen=True)
class DualPointConfig:
    """Colored, pairwise-distinct points in the projective plane.

    Point order is preserved verbatim so duality round trips keep
    ``(color, index)`` references stable.
    """

    classes: tuple[tuple[ProjPoint, ...], ...]

    def __init__(self, classes: Sequence[Sequence[ProjPoint]]):
        canon = tuple(tuple(cls) for cls in classes)
        seen: set[tuple[int, ...]] = set()
        for cls in canon:
            for p in cls:
                if p.ambient_dim != 2:
                    raise ValueError("dual points live in the projective plane")
                if p.coords in seen:
                    raise ValueError("duplicate point in dual configuration")
                seen.add(p.coords)
        object.__setattr__(self, "classes", canon)

    @property
    def num_colors(self) -> int:
        return len(self.classes)

    def class_sizes(self) -> tuple[int, ...]:
        return tuple(len(cls) for cls in self.classes)

    def points(self) -> Iterator[tuple[int, int, ProjPoint]]:
        for color, cls in enumerate(self.classes, start=1):
            for idx, p in enumerate(cls):
                yield color, idx, p


def concurrency_center(lines: Sequence[Line]) -> ProjPoint | None:
    """Common point of a class of >= 2 lines, or None if not concurrent."""
    if len(lines) < 2:
        return None
    center = meet(lines[0], lines[1])
    if center is None:
        return None
    if all(ln.contains(center) for ln in lines[2:]):
        return center
    return None


def with_computed_centers(cfg: ColoredLineConfig) -> ColoredLineConfig:
    centers = [concurrency_center(cls) for cls in cfg.classes]
    return ColoredLineConfig(cfg.d, cfg.classes, centers)


def embed_grid_config(cfg: gridmodel.ColoredGridConfig) -> ColoredLineConfig:
    """The grid configuration as rational lines in R^(k+1), parallel per axis."""
    classes = [
        [gridmodel.embed_grid_line(line) for line in cls] for cls in cfg.classes
    ]
    centers = []
    for cls in cfg.classes:
        axes = {line.axis for line in cls}
        if len(axes) == 1 and len(cls) >= 2:
            direction = [0] * (cfg.k + 1)
            direction[next(iter(axes)) - 1] = 1
            centers.append(ProjPoint.direction(direction))
        else:
            centers.append(None)
    return ColoredLineConfig(cfg.k + 1, classes, centers)


def lines_to_json(cfg: ColoredLineConfig) -> dict:
    classes = []
    for color, cls in enumerate(cfg.classes, start=1):
        entry: dict = {
            "color": color,
            "lines": [{"p": ln.p.to_strings(), "q": ln.q.to_strings()} for ln in cls],
        }
        center = cfg.centers[color - 1]
        if center is not None:
            entry["center"] = center.to_strings()
        classes.append(entry)
    return {"model": "lines", "d": cfg.d, "classes": classes}


def lines_from_json(data: dict) -> ColoredLineConfig:
    if data.get("model") != "lines":
        raise ValueError("not a line configuration")
    classes = []
    centers = []
    for entry in data["classes"]:
        classes.append(
            [
                Line(ProjPoint.from_strings(ln["p"]), ProjPoint.from_strings(ln["q"]))
                for ln in entry["lines"]
            ]
        )
        center = entry.get("center")
        centers.append(ProjPoint.from_strings(center) if center else None)
    return ColoredLineConfig(data["d"], classes, centers)


def dual_to_json(cfg: DualPointConfig) -> dict:
    return {
        "model": "points",
        "classes": [
            {"color": color, "points": [p.to_strings() for p in cls]}
            for color, cls in enumerate(cfg.classes, start=1)
        ],
    }


def dual_from_json(data: dict) -> DualPointConfig:
    if data.get("model") != "points":
        raise ValueError("not a dual point configuration")
    return DualPointConfig(
        [
            [ProjPoint.from_strings(p) for p in entry["points"]]
            for entry in data["classes"]
        ]
    )


def config_to_json(cfg) -> dict:
    if isinstance(cfg, gridmodel.ColoredGridConfig):
        return gridmodel.grid_to_json(cfg)
    if isinstance(cfg, ColoredLineConfig):
        return lines_to_json(cfg)
    if isinstance(cfg, DualPointConfig):
        return dual_to_json(cfg)
    raise TypeError(f"unknown configuration type: {type(cfg)!r}")


def config_from_json(data: dict):
    model = data.get("model", "grid")
    if model == "grid":
        return gridmodel.grid_from_json(data)
    if model == "lines":
        return lines_from_json(data)
    if model == "points":
        return dual_from_json(data)
    raise ValueError(f"unknown configuration model: {model!r}")
