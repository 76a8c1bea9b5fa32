"""Exact rational projective linear algebra.

Points, lines and flats in projective d-space with arbitrary-precision
rational coordinates.  Every object canonicalizes its homogeneous
coordinates to a primitive integer vector (denominators cleared, gcd
divided out, first nonzero entry positive), so equality is tuple
equality, hashing is O(1), and every predicate reduces to exact integer
row reduction.  No floating point is used anywhere.

Conventions
-----------
* Homogeneous coordinates are ``(x_1, ..., x_d, w)``; a point is at
  infinity iff ``w == 0``.  The affine point ``x`` embeds as ``(x, 1)``.
* Rationals serialize as ``"num/den"`` strings (``"5"`` for 5/1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

Rational = int | Fraction


def parse_rational(text: str) -> Fraction:
    """Parse a "num/den" string (tolerating unicode minus signs)."""
    return Fraction(text.strip().replace("−", "-"))


def format_rational(value: Rational) -> str:
    """Format a rational as "num/den", or "num" when the denominator is 1."""
    return str(Fraction(value))


def _canonical_ints(values: Sequence[Rational]) -> tuple[int, ...]:
    """Scale a rational vector to a primitive integer vector, sign-fixed."""
    fracs = [Fraction(v) for v in values]
    if all(f == 0 for f in fracs):
        raise ValueError("zero vector has no canonical homogeneous form")
    scale = lcm(*(f.denominator for f in fracs))
    ints = [int(f * scale) for f in fracs]
    g = gcd(*ints)
    ints = [x // g for x in ints]
    first = next(x for x in ints if x != 0)
    if first < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def _reduce_row(row: Sequence[int]) -> tuple[int, ...]:
    """Divide a nonzero integer row by its gcd and fix the leading sign."""
    g = gcd(*row)
    out = [x // g for x in row]
    first = next(x for x in out if x != 0)
    if first < 0:
        out = [-x for x in out]
    return tuple(out)


def int_rref(rows: Iterable[Sequence[int]]) -> list[tuple[int, ...]]:
    """Canonical reduced row-echelon form of an integer matrix.

    Fraction-free Gauss-Jordan elimination; each returned row is
    primitive with positive leading entry, so the output is a canonical
    basis of the row space (unique per subspace).
    """
    mat = [list(r) for r in rows if any(r)]
    if not mat:
        return []
    ncols = len(mat[0])
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(mat)) if mat[i][col] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        prow = mat[rank]
        for i in range(len(mat)):
            if i != rank and mat[i][col] != 0:
                a, b = prow[col], mat[i][col]
                g = gcd(a, b)
                fa, fb = a // g, b // g
                new = [fa * x - fb * y for x, y in zip(mat[i], prow)]
                mat[i] = list(_reduce_row(new)) if any(new) else new
        rank += 1
        if rank == len(mat):
            break
    return [_reduce_row(r) for r in mat[:rank] if any(r)]


def int_rank(rows: Iterable[Sequence[int]]) -> int:
    return len(int_rref(rows))


def int_nullspace(rows: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """Primitive integer basis of the right nullspace, one vector per free column."""
    rref = int_rref(rows)
    pivots: list[int] = []
    for row in rref:
        pivots.append(next(c for c in range(ncols) if row[c] != 0))
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [0] * ncols
        scale = lcm(*(row[p] for row, p in zip(rref, pivots))) if rref else 1
        vec[f] = scale
        for row, p in zip(rref, pivots):
            vec[p] = -row[f] * (scale // row[p])
        basis.append(_reduce_row(vec))
    return basis


@dataclass(frozen=True)
class ProjPoint:
    """A projective point as a canonical primitive integer coordinate tuple."""

    coords: tuple[int, ...]

    def __init__(self, coords: Sequence[Rational]):
        object.__setattr__(self, "coords", _canonical_ints(coords))

    @classmethod
    def affine(cls, values: Sequence[Rational]) -> "ProjPoint":
        return cls([*values, 1])

    @classmethod
    def direction(cls, values: Sequence[Rational]) -> "ProjPoint":
        return cls([*values, 0])

    @classmethod
    def from_strings(cls, texts: Sequence[str]) -> "ProjPoint":
        return cls([parse_rational(t) for t in texts])

    @property
    def ambient_dim(self) -> int:
        return len(self.coords) - 1

    @property
    def is_infinite(self) -> bool:
        return self.coords[-1] == 0

    def affine_coords(self) -> tuple[Fraction, ...]:
        if self.is_infinite:
            raise ValueError("point at infinity has no affine coordinates")
        w = self.coords[-1]
        return tuple(Fraction(c, w) for c in self.coords[:-1])

    def to_strings(self) -> list[str]:
        return [format_rational(c) for c in self.coords]

    def __repr__(self) -> str:
        return "(" + ":".join(str(c) for c in self.coords) + ")"


def _combine(a: ProjPoint, ca: int, b: ProjPoint, cb: int) -> ProjPoint:
    return ProjPoint([ca * x + cb * y for x, y in zip(a.coords, b.coords)])


@dataclass(frozen=True)
class ProjFlat:
    """A flat (point, line, plane, ...) as a canonical row-reduced point basis."""

    basis: tuple[ProjPoint, ...]

    def __init__(self, points: Sequence[ProjPoint]):
        if not points:
            raise ValueError("a flat needs at least one spanning point")
        dims = {p.ambient_dim for p in points}
        if len(dims) != 1:
            raise ValueError("spanning points live in different ambient dimensions")
        rows = int_rref([p.coords for p in points])
        object.__setattr__(self, "basis", tuple(ProjPoint(r) for r in rows))

    @property
    def dim(self) -> int:
        return len(self.basis) - 1

    @property
    def ambient_dim(self) -> int:
        return self.basis[0].ambient_dim

    def contains(self, p: ProjPoint) -> bool:
        return incident(p, self)


def span(points: Sequence[ProjPoint]) -> ProjFlat:
    """Smallest flat containing all given points (exact Gaussian elimination)."""
    return ProjFlat(points)


def incident(p: ProjPoint, flat: ProjFlat) -> bool:
    """True iff p lies in the span of the flat's basis (exact rank test)."""
    if p.ambient_dim != flat.ambient_dim:
        raise ValueError(
            f"ambient dimension mismatch: point in {p.ambient_dim}, flat in {flat.ambient_dim}"
        )
    rows = [q.coords for q in flat.basis]
    return int_rank([*rows, p.coords]) == len(flat.basis)


@dataclass(frozen=True)
class Line:
    """A projective line stored as two distinct spanning points.

    The canonical key (reduced row-echelon basis of the two coordinate
    rows) identifies the line independently of the chosen point pair, so
    lines hash and compare by the geometric object they represent.
    """

    p: ProjPoint
    q: ProjPoint
    key: tuple[tuple[int, ...], ...]

    def __init__(self, p: ProjPoint, q: ProjPoint):
        if p.ambient_dim != q.ambient_dim:
            raise ValueError("line endpoints in different ambient dimensions")
        rows = int_rref([p.coords, q.coords])
        if len(rows) != 2:
            raise ValueError("a line needs two distinct projective points")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "key", (rows[0], rows[1]))

    @classmethod
    def through_affine(cls, a: Sequence[Rational], b: Sequence[Rational]) -> "Line":
        return cls(ProjPoint.affine(a), ProjPoint.affine(b))

    @classmethod
    def affine_with_direction(
        cls, point: Sequence[Rational], direction: Sequence[Rational]
    ) -> "Line":
        return cls(ProjPoint.affine(point), ProjPoint.direction(direction))

    @property
    def ambient_dim(self) -> int:
        return self.p.ambient_dim

    @property
    def flat(self) -> ProjFlat:
        return ProjFlat([self.p, self.q])

    def contains(self, point: ProjPoint) -> bool:
        return incident(point, self.flat)

    def at_infinity(self) -> ProjPoint | None:
        """The line's point at infinity, or None if the line lies at infinity."""
        pw, qw = self.p.coords[-1], self.q.coords[-1]
        if pw == 0 and qw == 0:
            return None
        if pw == 0:
            return self.p
        if qw == 0:
            return self.q
        return _combine(self.p, qw, self.q, -pw)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Line) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"Line({self.p!r}, {self.q!r})"


def meet(a: Line, b: Line) -> ProjPoint | None:
    """The unique common point of two distinct lines, or None if they are skew.

    Raises ValueError for identical lines (configurations assume pairwise
    distinct lines, so asking for their meet is a caller bug).
    """
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("lines live in different ambient dimensions")
    if a.key == b.key:
        raise ValueError("meet of identical lines is undefined")
    # Columns are the four spanning points; a nullvector (l1, l2, m1, m2)
    # expresses l1*a.p + l2*a.q = -(m1*b.p + m2*b.q) = common point.
    ncols = 4
    rows = [
        (a.p.coords[i], a.q.coords[i], b.p.coords[i], b.q.coords[i])
        for i in range(a.ambient_dim + 1)
    ]
    null = int_nullspace(rows, ncols)
    if not null:
        return None
    l1, l2 = null[0][0], null[0][1]
    return _combine(a.p, l1, a.q, l2)


def rank_of_directions(lines: Sequence[Line], at: ProjPoint) -> int:
    """Projective dimension of the smallest flat containing concurrent lines.

    Every line must pass through ``at``; k concurrent lines spanning k
    independent directions have rank k, three concurrent coplanar lines
    have rank 2.
    """
    if not lines:
        raise ValueError("need at least one line")
    for ln in lines:
        if not ln.contains(at):
            raise ValueError(f"line {ln!r} does not pass through {at!r}")
    rows = [at.coords]
    for ln in lines:
        rows.append(ln.p.coords)
        rows.append(ln.q.coords)
    return int_rank(rows) - 1


def apply_matrix(matrix: Sequence[Sequence[Rational]], point: ProjPoint) -> ProjPoint:
    """Image of a point under a projective transformation given by matrix rows."""
    if len(matrix[0]) != len(point.coords):
        raise ValueError("matrix shape does not match point coordinates")
    return ProjPoint(
        [sum(Fraction(m) * c for m, c in zip(row, point.coords)) for row in matrix]
    )


def line_covector_2d(line: Line) -> tuple[int, ...]:
    """Canonical covector (a, b, c) of a planar line: a*x + b*y + c*w = 0."""
    if line.ambient_dim != 2:
        raise ValueError("covectors are defined for planar lines only")
    (p1, p2, p3), (q1, q2, q3) = line.p.coords, line.q.coords
    return _reduce_row((p2 * q3 - p3 * q2, p3 * q1 - p1 * q3, p1 * q2 - p2 * q1))


def line_from_covector_2d(cov: Sequence[int]) -> Line:
    """A planar line materialized from its covector (two spanning points)."""
    if len(cov) != 3 or not any(cov):
        raise ValueError("covector must be a nonzero triple")
    basis = int_nullspace([tuple(cov)], 3)
    return Line(ProjPoint(basis[0]), ProjPoint(basis[1]))
