"""Generators for colored line configurations.

* ``gen_algebraic`` — k+1 concurrent-after-lift classes of axis lines in
  [n]^(k+1), n = p^(k-1), selected by linear equations over (Z/pZ)^(k-1);
  k-consistent, no (k+1)-incidence, minimal, |class| = p^(k^2-k-1).
* ``gen_probabilistic`` — two-stage random selection: keep each grid line
  independently with an exact rational probability, then delete every
  line through a point covered by all k+1 axes (which unconditionally
  kills all (k+1)-incidences).
* ``gen_tricolor`` — the planar-style 3-color closed polygon family:
  2-consistent, no colorful incidence.
* ``gen_desargues`` / ``gen_reye`` — the two non-planar 4x3
  configurations, realized from fixed rational witnesses with colorings
  found by verifier-driven search.
* ``gen_dual_cycles`` — dual point sets made of six-step projection
  cycles across three concurrent lines plus two direction points.
* ``gen_two_slit`` — sampled lines secant to two fixed skew lines.

All generators are deterministic given identical parameters and seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterator, Sequence

import numpy as np

from .configs import (
    ColoredLineConfig,
    DualPointConfig,
    concurrency_center,
    with_computed_centers,
)
from .exactgeom import (
    Line,
    ProjPoint,
    Rational,
    int_nullspace,
    int_rank,
    meet,
    rank_of_directions,
)
from .gridmodel import ColoredGridConfig, GridLine
from .rng import (
    SLIT_OFFSET,
    default_selection_probability,
    selection_threshold,
    splitmix64,
    splitmix64_block,
    substream,
)
from .structure import (
    IncidenceStructure,
    extract_alignments,
    extract_structure_lines,
    structure_consistency,
)
from .transforms import extract_planarity

DENSE_GRID_LIMIT = 1 << 26


# ---------------------------------------------------------------------------
# Finite-field helpers


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def _modp_rank(rows: Sequence[Sequence[int]], p: int) -> int:
    mat = [[v % p for v in row] for row in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(mat)) if mat[i][col] % p != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = pow(mat[rank][col], p - 2, p)
        mat[rank] = [(v * inv) % p for v in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][col] % p != 0:
                f = mat[i][col]
                mat[i] = [(a - f * b) % p for a, b in zip(mat[i], mat[rank])]
        rank += 1
        if rank == len(mat):
            break
    return rank


@dataclass(frozen=True)
class FiniteVec:
    """A vector of length k-1 over Z/pZ, entries reduced mod p."""

    entries: tuple[int, ...]
    p: int

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if any(not 0 <= e < self.p for e in self.entries):
            raise ValueError("entries must be reduced mod p")

    def dot(self, other: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(self.entries, other)) % self.p


def default_v_vectors(k: int, p: int) -> list[FiniteVec]:
    """The standard admissible vector family: e_1..e_(k-1) and -(e_1+...+e_(k-1))."""
    if k < 3:
        raise ValueError("need k >= 3")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    dim = k - 1
    vecs = [
        FiniteVec(tuple(1 if t == i else 0 for t in range(dim)), p) for i in range(dim)
    ]
    vecs.append(FiniteVec(tuple((-1) % p for _ in range(dim)), p))
    return vecs


@dataclass(frozen=True)
class AlgebraicParams:
    """Parameters of the finite-field selection: prime p and vectors v_1..v_k
    summing to zero with every proper subset linearly independent."""

    k: int
    p: int
    v: tuple[FiniteVec, ...]

    def __init__(self, k: int, p: int, v: Sequence[FiniteVec] | None = None):
        if k < 3:
            raise ValueError("algebraic construction needs k >= 3")
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        vecs = tuple(v) if v is not None else tuple(default_v_vectors(k, p))
        if len(vecs) != k:
            raise ValueError(f"need exactly {k} vectors")
        if any(vec.p != p or len(vec.entries) != k - 1 for vec in vecs):
            raise ValueError("vectors must live in (Z/pZ)^(k-1)")
        total = [sum(vec.entries[t] for vec in vecs) % p for t in range(k - 1)]
        if any(total):
            raise ValueError("vectors must sum to zero")
        for subset in combinations(vecs, k - 1):
            if _modp_rank([vec.entries for vec in subset], p) != k - 1:
                raise ValueError("every proper subset of vectors must be independent")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "v", vecs)

    @property
    def n(self) -> int:
        return self.p ** (self.k - 1)

    @property
    def class_size(self) -> int:
        return self.p ** (self.k * self.k - self.k - 1)


def _digits(value: int, p: int, length: int) -> tuple[int, ...]:
    return tuple((value // p**t) % p for t in range(length))


def _coord_from_vec(entries: Sequence[int], p: int) -> int:
    return 1 + sum(e * p**t for t, e in enumerate(entries))


def _enumerate_affine_solutions(
    coeffs: Sequence[int], rhs: int, p: int
) -> Iterator[tuple[int, ...]]:
    """All solutions of one nonzero linear equation over F_p^D, in a fixed order."""
    D = len(coeffs)
    pivot = next(i for i, c in enumerate(coeffs) if c % p != 0)
    inv = pow(coeffs[pivot] % p, p - 2, p)
    free = [i for i in range(D) if i != pivot]
    for counter in range(p ** len(free)):
        x = [0] * D
        for t, pos in enumerate(free):
            x[pos] = (counter // p**t) % p
        acc = sum(coeffs[i] * x[i] for i in free)
        x[pivot] = ((rhs - acc) * inv) % p
        yield tuple(x)


def gen_algebraic(params: AlgebraicParams) -> ColoredGridConfig:
    """The finite-field grid selection; class i solves its own linear equation.

    Grid coordinates x in [1, p^(k-1)] correspond to vectors of
    (Z/pZ)^(k-1) via the little-endian base-p digits of x-1.
    """
    k, p, v = params.k, params.p, params.v
    n = params.n
    dim = k - 1
    classes = []
    for i in range(1, k + 2):
        if i <= k:
            slots = [j for j in range(1, k + 2) if j != i]
            slot_coeff = {j: v[i - 2] if j < i else v[i - 1] for j in slots}
            rhs = 0
        else:
            slots = list(range(1, k + 1))
            slot_coeff = {j: v[k - 1] for j in slots}
            rhs = 1
        coeffs = [slot_coeff[j].entries[t] for j in slots for t in range(dim)]
        lines = []
        for sol in _enumerate_affine_solutions(coeffs, rhs, p):
            base = [0] * (k + 1)
            for s_idx, j in enumerate(slots):
                entries = sol[s_idx * dim : (s_idx + 1) * dim]
                base[j - 1] = _coord_from_vec(entries, p)
            lines.append(GridLine(i, tuple(base)))
        if len(lines) != params.class_size:
            raise RuntimeError("algebraic class has unexpected size")
        classes.append(lines)
    return ColoredGridConfig(k, n, classes)


# ---------------------------------------------------------------------------
# Probabilistic construction


@dataclass(frozen=True)
class ProbParams:
    """Two-stage random selection parameters.

    ``p_sel`` defaults to the largest multiple of 2**-64 not exceeding
    min(1, 2*n^(-2/(2k-1))), stored as an exact Fraction; selection
    compares each 64-bit draw against it exactly.
    """

    k: int
    n: int
    seed: int
    p_sel: Fraction

    def __init__(self, k: int, n: int, seed: int, p_sel: Fraction | None = None):
        if k < 3:
            raise ValueError("probabilistic construction needs k >= 3")
        if n < 2:
            raise ValueError("probabilistic construction needs n >= 2")
        if p_sel is None:
            p_sel = default_selection_probability(k, n)
        p_sel = Fraction(p_sel)
        if not 0 < p_sel <= 1:
            raise ValueError("selection probability must lie in (0, 1]")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "seed", seed)
        object.__setattr__(self, "p_sel", p_sel)


@dataclass(frozen=True)
class DeletionReport:
    """Stage counts of the probabilistic construction."""

    k: int
    n: int
    seed: int
    p_sel: Fraction
    selected_sizes: tuple[int, ...]
    final_sizes: tuple[int, ...]
    covered_points: int

    @property
    def deleted_sizes(self) -> tuple[int, ...]:
        return tuple(s - f for s, f in zip(self.selected_sizes, self.final_sizes))


def _axis_slots(k: int, axis: int) -> list[int]:
    return [s for s in range(1, k + 2) if s != axis]


def _gridline_from_index(k: int, n: int, axis: int, index: int) -> GridLine:
    # Base indices are big-endian over the non-axis slots in ascending order.
    base = [0] * (k + 1)
    rem = index
    for t, slot in enumerate(_axis_slots(k, axis)):
        power = n ** (k - 1 - t)
        base[slot - 1] = rem // power + 1
        rem %= power
    return GridLine(axis, tuple(base))


def _selection_masks(k: int, n: int, seed: int, threshold: int) -> list[np.ndarray]:
    masks = []
    for axis in range(1, k + 2):
        stream = substream(seed, axis)
        draws = splitmix64_block(stream, 0, n**k)
        if threshold > (1 << 64) - 1:
            mask = np.ones(n**k, dtype=bool)
        else:
            mask = draws < np.uint64(threshold)
        masks.append(mask)
    return masks


def _dense_deletion(k: int, n: int, masks: list[np.ndarray]):
    shaped = [m.reshape((n,) * k) for m in masks]
    full = None
    for axis in range(1, k + 2):
        cov = np.expand_dims(shaped[axis - 1], axis=axis - 1)
        full = cov if full is None else full & cov
    covered = int(full.sum())
    final = [
        shaped[axis - 1] & ~full.any(axis=axis - 1) for axis in range(1, k + 2)
    ]
    return [m.reshape(-1) for m in final], covered


def _sparse_deletion(k: int, n: int, masks: list[np.ndarray]):
    coverage: dict[tuple[int, ...], int] = {}
    per_axis_points: list[list[tuple[int, list[tuple[int, ...]]]]] = []
    for axis in range(1, k + 2):
        entries = []
        for index in np.nonzero(masks[axis - 1])[0]:
            line = _gridline_from_index(k, n, axis, int(index))
            pts = [line.point_at(v) for v in range(1, n + 1)]
            for pt in pts:
                coverage[pt] = coverage.get(pt, 0) | (1 << (axis - 1))
            entries.append((int(index), pts))
        per_axis_points.append(entries)
    all_axes = (1 << (k + 1)) - 1
    covered = sum(1 for v in coverage.values() if v == all_axes)
    final = []
    for axis in range(1, k + 2):
        keep = masks[axis - 1].copy()
        for index, pts in per_axis_points[axis - 1]:
            if any(coverage[pt] == all_axes for pt in pts):
                keep[index] = False
        final.append(keep)
    return final, covered


def _stage_masks(params: ProbParams):
    k, n = params.k, params.n
    threshold = selection_threshold(params.p_sel)
    selected = _selection_masks(k, n, params.seed, threshold)
    if n ** (k + 1) <= DENSE_GRID_LIMIT:
        final, covered = _dense_deletion(k, n, selected)
    else:
        final, covered = _sparse_deletion(k, n, selected)
    return selected, final, covered


def _materialize(k: int, n: int, masks: list[np.ndarray]) -> ColoredGridConfig:
    classes = []
    for axis in range(1, k + 2):
        idx = np.nonzero(masks[axis - 1])[0]
        classes.append([_gridline_from_index(k, n, axis, int(i)) for i in idx])
    return ColoredGridConfig(k, n, classes)


def gen_probabilistic(
    params: ProbParams,
) -> tuple[ColoredGridConfig, ColoredGridConfig, DeletionReport]:
    """Run both stages; returns (before deletion, after deletion, report).

    Stage 1 draws every grid line independently (one SplitMix64 substream
    per axis, one draw per line in base-index order).  Stage 2 deletes,
    simultaneously on the stage-1 sets, every line through a point
    covered by all k+1 axes; the survivor therefore has no
    (k+1)-incidence regardless of the randomness.
    """
    selected, final, covered = _stage_masks(params)
    before = _materialize(params.k, params.n, selected)
    after = _materialize(params.k, params.n, final)
    report = DeletionReport(
        params.k,
        params.n,
        params.seed,
        params.p_sel,
        tuple(int(m.sum()) for m in selected),
        tuple(int(m.sum()) for m in final),
        covered,
    )
    return before, after, report


def probabilistic_trial_stats(params: ProbParams) -> dict:
    """Array-level statistics of one probabilistic run (no object materialization).

    Returns final class sizes, the k-consistency verdict with the number
    of distinct bad lines, and the maximal colorful order after deletion.
    Needs the dense grid path (n^(k+1) <= 2^26).
    """
    k, n = params.k, params.n
    if n ** (k + 1) > DENSE_GRID_LIMIT:
        raise ValueError("trial statistics need the dense grid path")
    selected, final, covered = _stage_masks(params)
    shaped = [m.reshape((n,) * k) for m in final]
    expanded = [
        np.expand_dims(shaped[axis - 1], axis=axis - 1) for axis in range(1, k + 2)
    ]
    counts = np.zeros((n,) * (k + 1), dtype=np.uint8)
    for cov in expanded:
        counts = counts + cov
    top = int(counts.max()) if counts.size else 0
    max_colorful = top if top >= 2 else 0

    bad_total = 0
    for axis in range(1, k + 2):
        others = [a for a in range(1, k + 2) if a != axis]
        bad = np.zeros_like(shaped[axis - 1])
        for T in combinations(others, k - 1):
            cov = None
            for j in T:
                cov = expanded[j - 1] if cov is None else cov & expanded[j - 1]
            good = cov.any(axis=axis - 1)
            bad |= shaped[axis - 1] & ~good
        bad_total += int(bad.sum())
    return {
        "k": k,
        "n": n,
        "seed": params.seed,
        "selected_sizes": tuple(int(m.sum()) for m in selected),
        "sizes": tuple(int(m.sum()) for m in final),
        "covered_points": covered,
        "consistent": bad_total == 0,
        "bad_lines": bad_total,
        "max_colorful": max_colorful,
    }


# ---------------------------------------------------------------------------
# Tricolor polygon


def gen_tricolor(n: int, steps: Sequence[Rational]) -> ColoredLineConfig:
    """Three parallel classes supporting a closed polygon cycling the axes.

    ``steps`` holds the 3n signed step lengths; consecutive edges use
    directions x, y, z cyclically and the polygon must close.  The output
    is verified to be 2-consistent with no colorful incidence.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if len(steps) != 3 * n:
        raise ValueError(f"need exactly {3 * n} steps")
    lengths = [Fraction(s) for s in steps]
    if any(s == 0 for s in lengths):
        raise ValueError("steps must be nonzero")
    vertex = [Fraction(0)] * 3
    vertices = [tuple(vertex)]
    for j, s in enumerate(lengths):
        vertex = list(vertex)
        vertex[j % 3] += s
        vertices.append(tuple(vertex))
    if vertices[-1] != vertices[0]:
        raise ValueError("steps do not close the polygon")
    classes: list[list[Line]] = [[], [], []]
    seen: set[tuple] = set()
    for j in range(3 * n):
        direction = [0, 0, 0]
        direction[j % 3] = 1
        line = Line.affine_with_direction(vertices[j], direction)
        if line.key in seen:
            raise ValueError("degenerate parameters: coincident lines")
        seen.add(line.key)
        classes[j % 3].append(line)
    cfg = ColoredLineConfig(3, classes)
    s = extract_structure_lines(cfg)
    order, _ = s.max_colorful()
    if not structure_consistency(s, 2).ok or order != 2:
        raise ValueError("degenerate parameters: polygon fails its own checks")
    return cfg


# ---------------------------------------------------------------------------
# The two non-planar 4x3 configurations


def _plane_pair_line(cov_a: Sequence[int], cov_b: Sequence[int]) -> Line:
    basis = int_nullspace([tuple(cov_a), tuple(cov_b)], 4)
    if len(basis) != 2:
        raise ValueError("planes do not meet in a line")
    return Line(ProjPoint(basis[0]), ProjPoint(basis[1]))


def _line_in_plane(line: Line, cov: Sequence[int]) -> bool:
    return (
        sum(c * x for c, x in zip(cov, line.p.coords)) == 0
        and sum(c * x for c, x in zip(cov, line.q.coords)) == 0
    )


def _point_buckets(lines: Sequence[Line]) -> dict[ProjPoint, set[int]]:
    buckets: dict[ProjPoint, set[int]] = {}
    on_points: list[set[ProjPoint]] = [set() for _ in lines]
    for i, j in combinations(range(len(lines)), 2):
        if on_points[i] & on_points[j]:
            continue
        pt = meet(lines[i], lines[j])
        if pt is None:
            continue
        buckets.setdefault(pt, set()).update((i, j))
        on_points[i].add(pt)
        on_points[j].add(pt)
    return buckets


def _search_coloring(
    lines: Sequence[Line],
    buckets: Sequence[frozenset[int]],
    fixed: dict[int, int],
    free_order: Sequence[int],
    exempt_bucket: frozenset[int] | None,
    validate,
) -> ColoredLineConfig | None:
    """Backtracking color assignment: class sizes 3, no repeated color in any
    bucket (except an exempted concurrent-class bucket), canonical first-use
    order for the free colors; first assignment passing ``validate`` wins."""
    colors = dict(fixed)
    counts = {c: 0 for c in (1, 2, 3, 4)}
    for c in fixed.values():
        counts[c] += 1

    def bucket_ok(idx: int) -> bool:
        for bucket in buckets:
            if bucket == exempt_bucket or idx not in bucket:
                continue
            seen = [colors[i] for i in bucket if i != idx and i in colors]
            if colors[idx] in seen:
                return False
        return True

    def rec(pos: int, max_used: int):
        if pos == len(free_order):
            classes: list[list[Line]] = [[], [], [], []]
            for i, line in enumerate(lines):
                classes[colors[i] - 1].append(line)
            try:
                cfg = ColoredLineConfig(3, classes)
            except ValueError:
                return None
            return cfg if validate(cfg) else None
        idx = free_order[pos]
        for c in range(1, min(max_used + 1, 4) + 1):
            if counts[c] >= 3:
                continue
            colors[idx] = c
            counts[c] += 1
            if bucket_ok(idx):
                found = rec(pos + 1, max(max_used, c))
                if found is not None:
                    return found
            counts[c] -= 1
            del colors[idx]
        return None

    return rec(0, max(fixed.values(), default=1))


def _validate_4x3(cfg: ColoredLineConfig, expect_concurrent: int) -> bool:
    if cfg.class_sizes() != (3, 3, 3, 3):
        return False
    s = extract_structure_lines(cfg)
    order, _ = s.max_colorful()
    if order != 3 or not structure_consistency(s, 3).ok:
        return False
    planar, _ = extract_planarity(cfg)
    if planar:
        return False
    concurrent = sum(1 for cls in cfg.classes if concurrency_center(cls) is not None)
    return concurrent == expect_concurrent


def gen_desargues() -> ColoredLineConfig:
    """The 12 lines lying in exactly two of six fixed planes, with the
    (unique up to relabeling) coloring making it 3-consistent without
    a colorful incidence; exactly one class is concurrent non-coplanar."""
    planes = [
        (1, 0, 0, 0),
        (0, 1, 0, 0),
        (0, 0, 1, 0),
        (1, 1, 1, -1),
        (1, 2, 4, -3),
        (1, 0, -2, 1),  # 2*plane4 - plane5: shares their common line
    ]
    for triple in combinations(range(5), 3):
        if int_rank([planes[t] for t in triple]) != 3:
            raise RuntimeError("witness planes 1..5 are not in general position")
    for quad in combinations(range(5), 4):
        if int_rank([planes[t] for t in quad]) != 4:
            raise RuntimeError("witness planes 1..5 are not in general position")
    for triple in combinations((0, 1, 2, 5), 3):
        if int_rank([planes[t] for t in triple]) != 3:
            raise RuntimeError("witness planes 1,2,3,6 are not in general position")
    if int_rank([planes[t] for t in (0, 1, 2, 5)]) != 4:
        raise RuntimeError("witness planes 1,2,3,6 are not in general position")
    if int_rank([planes[3], planes[4], planes[5]]) != 2:
        raise RuntimeError("planes 4,5,6 must share a line")

    lines: list[Line] = []
    for a, b in combinations(range(6), 2):
        line = _plane_pair_line(planes[a], planes[b])
        containing = sum(1 for cov in planes if _line_in_plane(line, cov))
        if containing == 2 and line not in lines:
            lines.append(line)
    if len(lines) != 12:
        raise RuntimeError("witness does not produce 12 two-plane lines")

    bucket_map = _point_buckets(lines)
    buckets = [frozenset(b) for b in bucket_map.values()]
    candidates = []
    for at, members in sorted(bucket_map.items(), key=lambda kv: sorted(kv[1])):
        bucket = frozenset(members)
        if len(bucket) != 3:
            continue
        if rank_of_directions([lines[i] for i in sorted(bucket)], at) == 3:
            candidates.append(bucket)
    for cand in candidates:
        fixed = {i: 1 for i in cand}
        free = [i for i in range(12) if i not in cand]
        cfg = _search_coloring(
            lines,
            buckets,
            fixed,
            free,
            cand,
            lambda c: _validate_4x3(c, expect_concurrent=1),
        )
        if cfg is not None:
            return with_computed_centers(cfg)
    raise RuntimeError("no valid coloring found for the Desargues witness")


def _cube_lines() -> list[Line]:
    lines = []
    for axis in range(3):
        for b0 in (0, 1):
            for b1 in (0, 1):
                point = [0, 0, 0]
                fixed = [t for t in range(3) if t != axis]
                point[fixed[0]], point[fixed[1]] = b0, b1
                direction = [0, 0, 0]
                direction[axis] = 1
                lines.append(Line.affine_with_direction(point, direction))
    diagonals = [
        ((0, 0, 0), (1, 1, 1)),
        ((1, 0, 0), (0, 1, 1)),
        ((0, 1, 0), (1, 0, 1)),
        ((0, 0, 1), (1, 1, 0)),
    ]
    for a, b in diagonals:
        lines.append(Line.through_affine(a, b))
    return lines


def gen_reye() -> ColoredLineConfig:
    """Twelve of the sixteen cube lines (edges + long diagonals) forming a
    12-point/12-line structure with three lines per point, colored so the
    result is 3-consistent with no colorful incidence; triples of parallel
    edges meet at infinity, so some incidence points are infinite."""
    lines = _cube_lines()
    buckets_map = _point_buckets(lines)
    buckets = [frozenset(b) for b in buckets_map.values()]
    if len(buckets) != 12 or any(len(b) != 4 for b in buckets):
        raise RuntimeError("cube lines do not form the expected 12x4 structure")
    memberships = [frozenset(i for i, b in enumerate(buckets) if idx in b) for idx in range(16)]
    if any(len(m) != 3 for m in memberships):
        raise RuntimeError("every cube line should lie on exactly 3 incidence points")

    for drop in combinations(range(16), 4):
        hit: set[int] = set()
        ok = True
        for idx in drop:
            if hit & memberships[idx]:
                ok = False
                break
            hit |= memberships[idx]
        if not ok or len(hit) != 12:
            continue
        kept = [i for i in range(16) if i not in drop]
        kept_lines = [lines[i] for i in kept]
        remap = {old: new for new, old in enumerate(kept)}
        kept_buckets = [
            frozenset(remap[i] for i in bucket if i in remap) for bucket in buckets
        ]
        if any(len(b) != 3 for b in kept_buckets):
            continue
        cfg = _search_coloring(
            kept_lines,
            kept_buckets,
            {0: 1},
            list(range(1, 12)),
            None,
            lambda c: _validate_4x3(c, expect_concurrent=0),
        )
        if cfg is not None:
            return with_computed_centers(cfg)
    raise RuntimeError("no valid 12-line selection/coloring found on the cube")


# ---------------------------------------------------------------------------
# Dual six-cycles


def _proj_v(slope: Fraction, beta: Fraction, pt: tuple[Fraction, Fraction]):
    return (pt[0], slope * pt[0] + beta)


def _proj_h(slope: Fraction, beta: Fraction, pt: tuple[Fraction, Fraction]):
    return ((pt[1] - beta) / slope, pt[1])


def six_fold_map(
    alphas: Sequence[Rational],
    betas: Sequence[Rational],
    point: tuple[Rational, Rational],
) -> tuple[Fraction, Fraction]:
    """One pass of the alternating projection cycle starting on the middle line.

    Lines are y = alpha_i x + beta_i for i = 2, 3, 4; the cycle applies
    h->4, v->2, h->3, v->4, h->2, v->3 in that order.
    """
    a2, a3, a4 = (Fraction(a) for a in alphas)
    b2, b3, b4 = (Fraction(b) for b in betas)
    pt = (Fraction(point[0]), Fraction(point[1]))
    pt = _proj_h(a4, b4, pt)
    pt = _proj_v(a2, b2, pt)
    pt = _proj_h(a3, b3, pt)
    pt = _proj_v(a4, b4, pt)
    pt = _proj_h(a2, b2, pt)
    pt = _proj_v(a3, b3, pt)
    return pt


def closure_shift(alphas: Sequence[Rational], betas: Sequence[Rational]) -> Fraction:
    """x-shift of one six-fold cycle pass when beta_2 = beta_3 = 0."""
    a2, a3, _ = (Fraction(a) for a in alphas)
    b4 = Fraction(betas[2])
    return (a3 - a2) / (a3 * a2) * b4


@dataclass(frozen=True)
class DualCyclesReport:
    """Which color-triple consistency conditions the dual cycles satisfy."""

    triples_with_direction_color: bool
    triple_other_colors: bool
    failures: tuple


def _subset_consistency(s: IncidenceStructure, S: frozenset[int]):
    failures = []
    for color in sorted(S):
        need = S - {color}
        for idx in range(s.class_sizes[color - 1]):
            covers = [frozenset(c for c, _ in m) for m in s.monomials_of((color, idx))]
            if not any(need <= mc for mc in covers):
                failures.append(((color, idx), S))
    return failures


def gen_dual_cycles(
    r: int,
    slopes: Sequence[Rational] = (Fraction(1), Fraction(2), Fraction(5)),
    starts: Sequence[Rational] | None = None,
) -> tuple[DualPointConfig, DualCyclesReport]:
    """Dual point classes: two direction points plus three collinear classes
    of size 2r built from r six-step projection cycles.

    The three support lines pass through the origin (the closure shift of
    the cycle map must vanish for cycles to exist at all).  Consistency
    for the color triples containing the direction color holds by
    construction and is asserted; the remaining {2,3,4} triple is checked
    and reported.  For r = 2 that triple is unsatisfiable with rational
    parameters: eliminating over every minimal transversal cover shows
    all solutions have irrational slopes, so a failing report there is
    inherent to exact rational coordinates, not a parameter choice.
    """
    if r < 2:
        raise ValueError("r >= 2 required: with r = 1 a colorful alignment is forced")
    a2, a3, a4 = (Fraction(a) for a in slopes)
    if len({a2, a3, a4}) != 3 or 0 in (a2, a3, a4):
        raise ValueError("slopes must be three distinct nonzero rationals")
    if starts is None:
        starts = [Fraction(3) ** i for i in range(r)]
    xs = [Fraction(s) for s in starts]
    if len(xs) != r or len(set(xs)) != r or 0 in xs:
        raise ValueError("need r distinct nonzero start coordinates")

    p1 = [ProjPoint([0, 1, 0]), ProjPoint([1, 0, 0])]  # vertical, horizontal
    p2: list[ProjPoint] = []
    p3: list[ProjPoint] = []
    p4: list[ProjPoint] = []
    for x0 in xs:
        a = (x0, a3 * x0)
        b = (a3 * x0 / a4, a3 * x0)
        c = (a3 * x0 / a4, a2 * a3 * x0 / a4)
        d = (a2 * x0 / a4, a2 * a3 * x0 / a4)
        e = (a2 * x0 / a4, a2 * x0)
        f = (x0, a2 * x0)
        p3.extend([ProjPoint.affine(a), ProjPoint.affine(d)])
        p4.extend([ProjPoint.affine(b), ProjPoint.affine(e)])
        p2.extend([ProjPoint.affine(c), ProjPoint.affine(f)])
    try:
        cfg = DualPointConfig([p1, p2, p3, p4])
    except ValueError as exc:
        raise ValueError(f"starts cause coincident points: {exc}") from exc

    s = extract_alignments(cfg)
    order, _ = s.max_colorful()
    if order >= 4:
        raise ValueError("parameters produce a colorful alignment")
    direction_failures = []
    for S in (frozenset({1, 2, 3}), frozenset({1, 2, 4}), frozenset({1, 3, 4})):
        direction_failures.extend(_subset_consistency(s, S))
    if direction_failures:
        raise ValueError(
            f"cycle construction broke a direction-color triple: {direction_failures}"
        )
    other_failures = tuple(_subset_consistency(s, frozenset({2, 3, 4})))
    report = DualCyclesReport(True, not other_failures, other_failures)
    return cfg, report


def search_dual_cycle_params(
    r: int,
    slope_candidates: Sequence[Rational],
    start_candidates: Sequence[Rational],
) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]] | None:
    """Best-effort deterministic search for parameters whose report is fully
    consistent (all four color triples).  Returns (slopes, starts) or None."""
    slope_pool = [Fraction(s) for s in slope_candidates]
    start_pool = [Fraction(s) for s in start_candidates]
    for slopes in permutations(slope_pool, 3):
        if 0 in slopes:
            continue
        for starts in combinations(start_pool, r):
            if 0 in starts:
                continue
            try:
                _, report = gen_dual_cycles(r, slopes, starts)
            except ValueError:
                continue
            if report.triple_other_colors:
                return tuple(slopes), tuple(starts)
    return None


# ---------------------------------------------------------------------------
# Two-slit families


def default_generic_slits() -> tuple[Line, Line, Line, Line]:
    """Four pairwise-generic slits: two skew lines per family."""
    s1 = Line.affine_with_direction((0, 0, 0), (1, 0, 0))
    s1p = Line.affine_with_direction((0, 1, 0), (0, 0, 1))
    s2 = Line.affine_with_direction((1, 0, 1), (0, 1, 0))
    s2p = Line.affine_with_direction((2, 3, 5), (1, 1, 2))
    return s1, s1p, s2, s2p


def quadric_ruling(family: int, param: tuple[int, int]) -> Line:
    """A ruling line of the quadric x*y = z*w (homogeneous coordinates).

    Family 1 fixes (s:t), family 2 fixes (u:v); opposite families meet.
    """
    s, t = param
    if family == 1:
        return Line(ProjPoint([s, 0, 0, t]), ProjPoint([0, t, s, 0]))
    if family == 2:
        return Line(ProjPoint([s, 0, t, 0]), ProjPoint([0, t, 0, s]))
    raise ValueError("family must be 1 or 2")


def quadric_ruling_slits() -> tuple[Line, Line, Line, Line]:
    """Slits in special position: both families are rulings of x*y = z*w."""
    return (
        quadric_ruling(1, (1, 1)),
        quadric_ruling(1, (2, 1)),
        quadric_ruling(2, (1, 1)),
        quadric_ruling(2, (1, 2)),
    )


def _point_on(line: Line, t: Fraction) -> ProjPoint:
    num, den = t.numerator, t.denominator
    return ProjPoint(
        [den * a + num * b for a, b in zip(line.p.coords, line.q.coords)]
    )


def gen_two_slit(
    which: int,
    slits: tuple[Line, Line, Line, Line],
    count: int,
    seed: int,
) -> list[Line]:
    """Sample ``count`` distinct lines secant to the chosen family's two slits.

    Each line joins a rational point of each slit (drawn from the seeded
    substream for the chosen family).
    """
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    sa, sb = (slits[0], slits[1]) if which == 1 else (slits[2], slits[3])
    if meet(sa, sb) is not None:
        raise ValueError("the chosen family's slits must be skew")
    stream = substream(seed, SLIT_OFFSET + which)
    out: list[Line] = []
    seen: set[tuple] = set()
    i = 0
    attempts = 0
    while len(out) < count:
        if attempts > 20 * count + 100:
            raise RuntimeError("could not sample enough distinct secant lines")
        t = Fraction(splitmix64(stream, i) % 20011) - 10005
        u = Fraction(splitmix64(stream, i + 1) % 20011) - 10005
        i += 2
        attempts += 1
        line = Line(_point_on(sa, t), _point_on(sb, u))
        if line.key in seen:
            continue
        seen.add(line.key)
        out.append(line)
    return out
