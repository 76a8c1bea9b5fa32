"""Structure matching, audits, bounds, and experiment harnesses.

Covers: isomorphism matching of 4x3 incidence structures against the two
reference tables, the determinant expansion that reproduces table I, the
flatness audit and the exact lower-bound formula for non-flat
configurations, minimality audits, the seeded Monte Carlo harness for
the probabilistic construction, and the two-slit intersection-graph
experiment.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product
from math import comb
from statistics import quantiles

from .configs import ColoredLineConfig
from .constructions import ProbParams, probabilistic_trial_stats
from .exactgeom import Line, meet, rank_of_directions
from .gridmodel import (
    ColoredGridConfig,
    LineRef,
    breaks_consistency_without,
    is_k_consistent,
)
from .rng import TRIAL_OFFSET, substream
from .structure import IncidenceStructure, Monomial, extract_structure_lines

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def monomial_name(m: Monomial) -> str:
    """Paper-style notation: color -> letter, 1-based line index (e.g. a1b2c3)."""
    parts = sorted(m)
    return "".join(f"{_LETTERS[c - 1]}{i + 1}" for c, i in parts)


def parse_monomial(text: str) -> Monomial:
    refs = []
    for t in range(0, len(text), 2):
        refs.append((_LETTERS.index(text[t]) + 1, int(text[t + 1]) - 1))
    return frozenset(refs)


def _table(*names: str) -> frozenset[Monomial]:
    return frozenset(parse_monomial(n) for n in names)


TABLE_I = _table(
    "a1b2c3", "a1b3d2", "a1c2d3", "b1c3d2",
    "a2b3c1", "a2b1d3", "a2c3d1", "b2c1d3",
    "a3b1c2", "a3b2d1", "a3c1d2", "b3c2d1",
)

TABLE_II = _table(
    "a1b2c3", "a1b3d2", "a1c2d3", "b1c1d1",
    "a2b3c1", "a2b1d3", "a2c3d1", "b2c2d2",
    "a3b1c2", "a3b2d1", "a3c1d2", "b3c3d3",
)

TABLES = {"I": TABLE_I, "II": TABLE_II}


@dataclass(frozen=True)
class StructureIsomorphism:
    """A relabeling (color permutation + per-class line permutations) onto a table."""

    target: str
    color_map: tuple[int, ...]  # color_map[c-1] = image color of c
    index_maps: tuple[tuple[int, ...], ...]  # per source color, image of each index

    def apply(self, monomials: frozenset[Monomial]) -> frozenset[Monomial]:
        return frozenset(
            frozenset(
                (self.color_map[c - 1], self.index_maps[c - 1][i]) for c, i in m
            )
            for m in monomials
        )


def match_structure(s: IncidenceStructure, target: str) -> StructureIsomorphism | None:
    """Search all 4! * (3!)^4 relabelings mapping the colorful triples onto a table.

    The classification tables record the three-colored triple concurrences
    of a 4x3 configuration; single-color monomials (a concurrent class
    center) are not part of the tables and are ignored here.
    """
    if target not in TABLES:
        raise ValueError("target must be 'I' or 'II'")
    if s.num_colors != 4 or any(size != 3 for size in s.class_sizes):
        raise ValueError("structure matching needs 4 colors with 3 lines each")
    triples = s.colorful_triples()
    if len(triples) != 12:
        raise ValueError(f"expected 12 colorful triples, found {len(triples)}")
    table = TABLES[target]
    idx_perms = list(permutations(range(3)))
    for color_map in permutations((1, 2, 3, 4)):
        for maps in product(idx_perms, repeat=4):
            iso = StructureIsomorphism(target, color_map, maps)
            if iso.apply(triples) == table:
                return iso
    return None


def determinant_monomials() -> frozenset[Monomial]:
    """Positive-sign cubic terms of the 4x4 determinant whose last row is ones.

    Rows 1..3 carry the line indices of each color (columns = colors);
    every positive term selects one index per color for three colors, and
    the expansion reproduces table I exactly (asserted).
    """
    terms = []
    for perm in permutations(range(4)):
        sign = 1
        seen = list(perm)
        # parity via inversion count
        inv = sum(
            1 for x, y in combinations(range(4), 2) if seen[x] > seen[y]
        )
        sign = -1 if inv % 2 else 1
        if sign != 1:
            continue
        refs = []
        for row, col in enumerate(perm):
            if row == 3:
                continue  # the all-ones row contributes the constant 1
            refs.append((col + 1, row))
        terms.append(frozenset(refs))
    result = frozenset(terms)
    if result != TABLE_I:
        raise AssertionError("determinant expansion does not reproduce table I")
    return result


@dataclass(frozen=True)
class FlatnessRecord:
    """One audited incidence: its point, lines, direction rank, and verdict."""

    point: object
    lines: tuple[LineRef, ...]
    rank: int
    flat: bool


def flatness_audit(cfg: ColoredLineConfig, t: int) -> list[FlatnessRecord]:
    """Audit every incidence of >= t lines: it is flat iff all lines at the
    point lie in a flat of dimension at most min(d, t_actual) - 1, where
    t_actual is the full line count at the point."""
    if t < 2:
        raise ValueError("flatness audit needs t >= 2")
    s = extract_structure_lines(cfg)
    records = []
    for m in sorted(s.monomials, key=sorted):
        if len(m) < t:
            continue
        point = s.witnesses[m]
        lines = [cfg.line(ref) for ref in sorted(m)]
        rank = rank_of_directions(lines, point)
        flat = rank <= min(cfg.d, len(m)) - 1
        records.append(FlatnessRecord(point, tuple(sorted(m)), rank, flat))
    return records


@dataclass(frozen=True)
class JointBoundReport:
    """The exact non-flat lower bound C(C(m-1,k-1)+k-1, k) / C(m-1,k-1)."""

    m: int
    k: int
    total_lines: int
    bound: Fraction
    satisfied: bool


def joint_bound_value(m: int, k: int) -> Fraction:
    denom = comb(m - 1, k - 1)
    return Fraction(comb(denom + k - 1, k), denom)


def joint_bound(cfg, k: int) -> JointBoundReport:
    m = cfg.num_colors
    total = cfg.total_lines()
    bound = joint_bound_value(m, k)
    return JointBoundReport(m, k, total, bound, Fraction(total) >= bound)


@dataclass(frozen=True)
class MinimalityVerdict:
    minimal: bool
    removable: tuple[LineRef, ...]


def minimality_audit(cfg: ColoredGridConfig, k: int) -> MinimalityVerdict:
    """True iff removing any single line breaks k-consistency."""
    if not is_k_consistent(cfg, k).ok:
        raise ValueError("minimality audit requires a k-consistent configuration")
    removable = tuple(
        (color, idx)
        for color, idx, _ in cfg.lines()
        if not breaks_consistency_without(cfg, k, (color, idx))
    )
    return MinimalityVerdict(not removable, removable)


# ---------------------------------------------------------------------------
# Monte Carlo harness

CSV_FIELDS_PREFIX = ["k", "n", "seed", "trial", "consistent", "bad_lines"]


@dataclass(frozen=True)
class MonteCarloSummary:
    k: int
    n: int
    trials: int
    consistency_rate: float
    colorful_within_k_rate: float
    size_quartiles: tuple[float, float, float]
    window_rate: float  # all class sizes within a common [N, 3N]
    mean_bad_lines: float


@dataclass(frozen=True)
class MonteCarloReport:
    rows: tuple[dict, ...]
    summaries: tuple[MonteCarloSummary, ...]
    fieldnames: tuple[str, ...]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(self.fieldnames), lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            writer.writerow(row)
        return buf.getvalue()


def monte_carlo(params_grid: list[ProbParams], trials: int) -> MonteCarloReport:
    """Run seeded trials of the probabilistic construction per parameter set.

    Trial t of a parameter set derives its seed from substream
    TRIAL_OFFSET + t of the set's master seed, so the whole report is a
    pure function of the parameter grid.  All sets must share one k (the
    CSV carries one size column per color).
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    ks = {p.k for p in params_grid}
    if len(ks) != 1:
        raise ValueError("monte_carlo needs a uniform k across the parameter grid")
    k = ks.pop()
    size_fields = [f"size_{i}" for i in range(1, k + 2)]
    fieldnames = tuple(CSV_FIELDS_PREFIX + size_fields + ["max_colorful"])
    rows = []
    summaries = []
    for params in params_grid:
        per_rows = []
        for trial in range(trials):
            seed = substream(params.seed, TRIAL_OFFSET + trial)
            stats = probabilistic_trial_stats(
                ProbParams(params.k, params.n, seed, params.p_sel)
            )
            row = {
                "k": params.k,
                "n": params.n,
                "seed": params.seed,
                "trial": trial,
                "consistent": int(stats["consistent"]),
                "bad_lines": stats["bad_lines"],
                "max_colorful": stats["max_colorful"],
            }
            for i, size in enumerate(stats["sizes"], start=1):
                row[f"size_{i}"] = size
            per_rows.append(row)
        rows.extend(per_rows)
        sizes = [row[f] for row in per_rows for f in size_fields]
        q = quantiles(sizes, n=4) if len(sizes) > 1 else [sizes[0]] * 3
        window = sum(
            1
            for row in per_rows
            if min(row[f] for f in size_fields) >= 1
            and max(row[f] for f in size_fields) <= 3 * min(row[f] for f in size_fields)
        )
        summaries.append(
            MonteCarloSummary(
                params.k,
                params.n,
                trials,
                sum(r["consistent"] for r in per_rows) / trials,
                sum(1 for r in per_rows if r["max_colorful"] <= params.k) / trials,
                tuple(q),
                window / trials,
                sum(r["bad_lines"] for r in per_rows) / trials,
            )
        )
    return MonteCarloReport(tuple(rows), tuple(summaries), fieldnames)


# ---------------------------------------------------------------------------
# Two-slit intersection graphs


@dataclass(frozen=True)
class BipartiteReport:
    edges: int
    k33: tuple[tuple[int, int, int], tuple[int, int, int]] | None


def bipartite_edges(A: list[Line], B: list[Line]) -> BipartiteReport:
    """Exact intersection-graph edge count plus an exhaustive K_{3,3} search.

    The search scans all triples on the A side and intersects neighbor
    bitmasks, so a reported witness is exact and absence is a proof for
    the given families.
    """
    masks = []
    edges = 0
    for a in A:
        mask = 0
        for j, b in enumerate(B):
            if a.key == b.key:
                raise ValueError("families share a line")
            if meet(a, b) is not None:
                mask |= 1 << j
        edges += mask.bit_count()
        masks.append(mask)
    rich = [i for i, m in enumerate(masks) if m.bit_count() >= 3]
    for i, j, l in combinations(rich, 3):
        common = masks[i] & masks[j] & masks[l]
        if common.bit_count() >= 3:
            bs = []
            probe = common
            while len(bs) < 3:
                low = probe & -probe
                bs.append(low.bit_length() - 1)
                probe ^= low
            return BipartiteReport(edges, ((i, j, l), tuple(bs)))
    return BipartiteReport(edges, None)
