"""Linear and superlinear bounded real functionals on the option space.

Superlinear functionals are restricted to finite min-envelopes of linear
pieces: every bounded superlinear functional is a lower envelope of the linear
functionals dominating it, and the finite-envelope fragment covers everything
this engine constructs.  Conjugates are evaluated (max over pieces), never
materialized as separate objects.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from . import lp
from .numeric import Background, OptionSpace, Vector, unit_vector


@dataclass(frozen=True)
class LinearF:
    """A linear functional u -> coeffs . u."""

    coeffs: Vector

    @property
    def dim(self) -> int:
        return self.coeffs.dim

    def eval(self, u: Vector) -> Fraction:
        return self.coeffs.dot(u)

    def conjugate_eval(self, u: Vector) -> Fraction:
        # Linear functionals are self-conjugate.
        return self.coeffs.dot(u)


@dataclass(frozen=True)
class SuperlinF:
    """A superlinear functional given as the min-envelope of linear pieces.

    Superadditivity and nonnegative homogeneity hold identically for a min of
    linear maps, so the shape itself certifies the axioms.
    """

    pieces: tuple[LinearF, ...]

    def __post_init__(self) -> None:
        if not self.pieces:
            raise ValueError("a min-envelope needs at least one piece")
        if len({p.dim for p in self.pieces}) != 1:
            raise ValueError("pieces must share one dimension")

    @property
    def dim(self) -> int:
        return self.pieces[0].dim

    def eval(self, u: Vector) -> Fraction:
        return min(p.eval(u) for p in self.pieces)

    def conjugate_eval(self, u: Vector) -> Fraction:
        # conj(u) = -eval(-u) = max over pieces.
        return max(p.eval(u) for p in self.pieces)


Functional = Union[LinearF, SuperlinF]


def pieces_of(f: Functional) -> tuple[LinearF, ...]:
    if isinstance(f, LinearF):
        return (f,)
    return f.pieces


def is_positive(f: Functional, space: OptionSpace) -> bool:
    """Is f strictly positive on every background-positive option?

    Pointwise dominance: piece(e_i) > 0 for every piece and coordinate, which
    suffices by superadditivity.  Strict dominance: every piece nonnegative
    coordinatewise and nonzero, so strictly positive vectors get positive value.
    """
    for piece in pieces_of(f):
        entries = piece.coeffs.entries
        if space.background is Background.POINTWISE:
            if not all(c > 0 for c in entries):
                return False
        else:
            if not all(c >= 0 for c in entries) or all(c == 0 for c in entries):
                return False
    return True


def operator_norm(f: LinearF) -> Fraction:
    """Exact operator norm under the sup-norm: sum of absolute coefficients."""
    return sum((abs(c) for c in f.coeffs.entries), Fraction(0))


def operator_norm_bound(f: SuperlinF) -> Fraction:
    """A certified upper bound on the operator norm: max over the pieces' norms."""
    return max(operator_norm(p) for p in f.pieces)


def dominating_polytope(f: SuperlinF) -> list[LinearF]:
    """Vertices of the convex hull of the piece coefficient vectors.

    A linear functional dominates the envelope everywhere iff its coefficient
    vector lies in this hull: hull members dominate term by term, and anything
    outside the hull is separated from it by some option u on which it drops
    below the envelope.  The envelope is the min over the returned vertices.
    """
    points: list[Vector] = []
    for piece in f.pieces:
        if piece.coeffs not in points:
            points.append(piece.coeffs)
    if len(points) == 1:
        return [LinearF(points[0])]
    vertices: list[LinearF] = []
    dim = points[0].dim
    for idx, p in enumerate(points):
        others = [q for k, q in enumerate(points) if k != idx]
        m = len(others)
        rows = []
        for j in range(dim):
            rows.append(
                lp.Constraint(Vector(tuple(q[j] for q in others)), lp.EQ, p[j])
            )
        rows.append(
            lp.Constraint(Vector((Fraction(1),) * m), lp.EQ, Fraction(1))
        )
        for r in range(m):
            rows.append(lp.Constraint(unit_vector(m, r), lp.GE, Fraction(0)))
        in_hull_of_others = isinstance(lp.solve(lp.LpProblem(m, tuple(rows))), lp.Feasible)
        if not in_hull_of_others:
            vertices.append(LinearF(p))
    return vertices


def hahn_banach_witness(f: SuperlinF, u: Vector) -> LinearF:
    """A dominating linear functional agreeing with f at u: a least-index argmin piece."""
    best = f.pieces[0]
    best_value = best.eval(u)
    for piece in f.pieces[1:]:
        value = piece.eval(u)
        if value < best_value:
            best, best_value = piece, value
    return best


def nml(f: Functional, u_o: Vector) -> Functional:
    """The normalisation transformation: nml f(u) = sup{a : f(u - a*u_o) > 0}.

    For a min-envelope with all pieces positive at u_o the sup is attained as
    min over pieces of piece(u)/piece(u_o): the defining condition is
    "a < piece(u)/piece(u_o) for every piece".  (Cross-validated in the test
    suite against a bisection oracle on the sup definition.)
    """
    for piece in pieces_of(f):
        if piece.eval(u_o) <= 0:
            raise ValueError("normalisation undefined: a piece is nonpositive at u_o")
    if isinstance(f, LinearF):
        return LinearF(f.coeffs.scale(1 / f.eval(u_o)))
    return SuperlinF(
        tuple(LinearF(p.coeffs.scale(1 / p.eval(u_o))) for p in f.pieces)
    )
