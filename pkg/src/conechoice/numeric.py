"""Exact rational scalars and dense rational vectors over a fixed dimension.

The scalar field of the whole engine is the rationals, realized by
:class:`fractions.Fraction` (canonical form is guaranteed by the stdlib:
positive denominator, reduced gcd).  Everything downstream is exact; there is
no floating point anywhere in the engine.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction

RationalLike = Union[Fraction, int, str]

_RATIONAL_RE = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(-?\d+)\s*)?$")


def parse_rational(text: str) -> Fraction:
    """Parse "p" or "p/q" into an exact rational.

    >>> parse_rational("2/4")
    Fraction(1, 2)
    >>> parse_rational("-3")
    Fraction(-3, 1)
    """
    match = _RATIONAL_RE.match(text)
    if match is None:
        raise ValueError(f"malformed rational literal: {text!r}")
    num = int(match.group(1))
    den_text = match.group(2)
    if den_text is None:
        return Fraction(num)
    den = int(den_text)
    if den <= 0:
        raise ValueError(f"rational literal needs a positive denominator: {text!r}")
    return Fraction(num, den)


def format_rational(r: Fraction) -> str:
    """Format a rational as "p" or "p/q" so that parse(format(r)) == r."""
    if r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator}"


def as_rational(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


@dataclass(frozen=True)
class Vector:
    """A dense rational vector of fixed dimension."""

    entries: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not self.entries:
            raise ValueError("vectors must have positive dimension")
        for entry in self.entries:
            if not isinstance(entry, Fraction):
                raise TypeError("vector entries must be Fraction")

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> Fraction:
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def _check_dim(self, other: "Vector") -> None:
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "Vector") -> "Vector":
        self._check_dim(other)
        return Vector(tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Vector") -> "Vector":
        self._check_dim(other)
        return Vector(tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "Vector":
        return Vector(tuple(-a for a in self.entries))

    def scale(self, factor: RationalLike) -> "Vector":
        factor = as_rational(factor)
        return Vector(tuple(factor * a for a in self.entries))

    def dot(self, other: "Vector") -> Fraction:
        self._check_dim(other)
        return sum((a * b for a, b in zip(self.entries, other.entries)), Fraction(0))

    def sup_norm(self) -> Fraction:
        return max(abs(a) for a in self.entries)

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.entries)

    def __str__(self) -> str:
        return "(" + ", ".join(format_rational(a) for a in self.entries) + ")"


def vec(*values: RationalLike) -> Vector:
    """Build a vector from ints, Fractions or "p/q" strings."""
    return Vector(tuple(as_rational(v) for v in values))


def vector_from_seq(values: Iterable[RationalLike]) -> Vector:
    return Vector(tuple(as_rational(v) for v in values))


def zero_vector(dim: int) -> Vector:
    return Vector((Fraction(0),) * dim)


def unit_vector(dim: int, i: int) -> Vector:
    entries = [Fraction(0)] * dim
    entries[i] = Fraction(1)
    return Vector(tuple(entries))


def ones(dim: int) -> Vector:
    return Vector((Fraction(1),) * dim)


class Background(Enum):
    """The a-priori strict vector order on the option space.

    POINTWISE: u > 0 iff all entries >= 0 and at least one > 0.
    STRICT: u > 0 iff all entries > 0.
    """

    POINTWISE = "pointwise"
    STRICT = "strict"


@dataclass(frozen=True)
class OptionSpace:
    """A finite-dimensional option space with background order and reference option."""

    dim: int
    background: Background
    u_o: Vector

    def __post_init__(self) -> None:
        if self.dim <= 0:
            raise ValueError("dimension must be positive")
        if self.u_o.dim != self.dim:
            raise ValueError("reference option has wrong dimension")
        # u_o must lie in the interior of the background cone.
        if not all(entry > 0 for entry in self.u_o.entries):
            raise ValueError("reference option u_o is not interior (needs all entries > 0)")

    def background_strictly_positive(self, u: Vector) -> bool:
        """Is u > 0 in the background order?"""
        if u.dim != self.dim:
            raise ValueError("dimension mismatch")
        if self.background is Background.POINTWISE:
            return all(a >= 0 for a in u.entries) and any(a > 0 for a in u.entries)
        return all(a > 0 for a in u.entries)


def default_space(dim: int, background: Background = Background.POINTWISE) -> OptionSpace:
    return OptionSpace(dim=dim, background=background, u_o=ones(dim))


def row_reduce(rows: Sequence[Vector]) -> tuple[list[list[Fraction]], list[int]]:
    """Gaussian elimination; returns the reduced rows and pivot column indices."""
    if not rows:
        return [], []
    dim = rows[0].dim
    matrix = [list(row.entries) for row in rows]
    pivots: list[int] = []
    rank = 0
    for col in range(dim):
        pivot_row = None
        for r in range(rank, len(matrix)):
            if matrix[r][col] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        matrix[rank], matrix[pivot_row] = matrix[pivot_row], matrix[rank]
        pivot = matrix[rank][col]
        matrix[rank] = [x / pivot for x in matrix[rank]]
        for r in range(len(matrix)):
            if r != rank and matrix[r][col] != 0:
                factor = matrix[r][col]
                matrix[r] = [x - factor * y for x, y in zip(matrix[r], matrix[rank])]
        pivots.append(col)
        rank += 1
    return matrix[:rank], pivots


def rank_of(rows: Sequence[Vector]) -> int:
    reduced, _ = row_reduce(rows)
    return len(reduced)


def nullspace_basis(rows: Sequence[Vector]) -> list[Vector]:
    """A basis of {x : row . x = 0 for every row}."""
    if not rows:
        raise ValueError("need at least one row to know the dimension")
    dim = rows[0].dim
    reduced, pivots = row_reduce(rows)
    free_cols = [c for c in range(dim) if c not in pivots]
    basis = []
    for free in free_cols:
        entries = [Fraction(0)] * dim
        entries[free] = Fraction(1)
        for r, pivot_col in enumerate(pivots):
            entries[pivot_col] = -reduced[r][free]
        basis.append(Vector(tuple(entries)))
    return basis
