"""Sets of desirable option sets, choice functions, and decision rules.

An assessment-based model answers queries about the *coherent closure* of its
assessment, via the selection reduction: a finite option set B lies in the
closure iff for every way of picking one option per assessment set, the picked
options' natural extension is inconsistent or already meets B.  (Any coherent
cone compatible with the assessment contains some selection's extension, and
each consistent selection's extension is itself such a cone, so the finitely
many selection extensions are exactly the minimal witnesses.)

Selection enumeration is exponential in the number of assessment sets; a
documented cap (default 10**6 selections) raises beyond.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Callable, Iterator, Optional, Sequence, Union

from . import lp
from .cone import (
    DesirCone,
    PosiCone,
    member as cone_member,
    natural_extension,
    posi_member,
    strict_background_rows,
)
from .functional import LinearF, SuperlinF, is_positive, nml
from .numeric import OptionSpace, Vector

SELECTION_CAP = 10**6


@dataclass(frozen=True)
class OptionSet:
    """A finite set of options, deduplicated and stored in a fixed order.

    Empty sets are representable (they arise as rejection sets); everywhere an
    option set enters the system as an assessment or a menu, nonemptiness is
    enforced by the caller.
    """

    options: tuple[Vector, ...]

    def __post_init__(self) -> None:
        seen: list[Vector] = []
        for option in self.options:
            if option not in seen:
                seen.append(option)
        seen.sort(key=lambda v: v.entries)
        object.__setattr__(self, "options", tuple(seen))

    def __iter__(self) -> Iterator[Vector]:
        return iter(self.options)

    def __len__(self) -> int:
        return len(self.options)

    def __contains__(self, v: Vector) -> bool:
        return v in self.options

    def without_zero(self) -> tuple[Vector, ...]:
        return tuple(v for v in self.options if not v.is_zero())


def option_set(*options: Vector) -> OptionSet:
    return OptionSet(tuple(options))


@dataclass(frozen=True)
class AssessmentK:
    """The coherent closure of finitely many "some option here is desirable" statements."""

    assessment: tuple[OptionSet, ...]
    space: OptionSpace

    def __post_init__(self) -> None:
        for a in self.assessment:
            for v in a:
                if v.dim != self.space.dim:
                    raise ValueError("assessment option has wrong dimension")


@dataclass(frozen=True)
class CredalK:
    """The intersection of the models K_Lambda over a finite credal set.

    Functionals are normalized to value 1 at u_o on ingestion and must be
    background-positive.
    """

    functionals: tuple[LinearF, ...]
    space: OptionSpace

    def __post_init__(self) -> None:
        if not self.functionals:
            raise ValueError("a credal set needs at least one functional")
        normalized = []
        for f in self.functionals:
            if f.dim != self.space.dim:
                raise ValueError("credal functional has wrong dimension")
            if not is_positive(f, self.space):
                raise ValueError("credal functionals must be background-positive")
            g = nml(f, self.space.u_o)
            assert isinstance(g, LinearF)
            normalized.append(g)
        object.__setattr__(self, "functionals", tuple(normalized))


@dataclass(frozen=True)
class BinaryK:
    """The binary model K_D = {A : A meets D} of a set of desirable options."""

    cone: DesirCone

    @property
    def space(self) -> OptionSpace:
        return self.cone.space


KModel = Union[AssessmentK, CredalK, BinaryK]


def selections(model: AssessmentK, cap: int = SELECTION_CAP) -> Iterator[tuple[Vector, ...]]:
    """All ways of picking one (nonzero) option from each assessment set."""
    pruned = [a.without_zero() for a in model.assessment]
    count = 1
    for choices in pruned:
        count *= len(choices)
        if count > cap:
            raise ValueError(f"selection enumeration exceeds the cap of {cap}")
    return product(*pruned)


def member(model: KModel, b: OptionSet, cap: int = SELECTION_CAP) -> bool:
    """Is B in the model's semantic set (for AssessmentK: in the closure)?"""
    options = b.without_zero()
    if not options:
        return False
    if isinstance(model, CredalK):
        return all(any(f.eval(u) > 0 for u in options) for f in model.functionals)
    if isinstance(model, BinaryK):
        return any(cone_member(model.cone, u) for u in options)
    for selection in selections(model, cap):
        extension, report = natural_extension(list(selection), model.space)
        if report.consistent and not any(cone_member(extension, u) for u in options):
            return False
    return True


def consistent(model: AssessmentK, cap: int = SELECTION_CAP) -> bool:
    """Does some selection have a consistent natural extension?"""
    for selection in selections(model, cap):
        _, report = natural_extension(list(selection), model.space)
        if report.consistent:
            return True
    return False


def _selection_positive_functional(
    space: OptionSpace, selection: Sequence[Vector], nonpos: Sequence[Vector] = ()
) -> Optional[Vector]:
    strict_bg, nonneg_bg = strict_background_rows(space)
    return lp.strict_homogeneous_feasible(
        strict=list(selection) + strict_bg, nonpos=nonpos, nonneg=nonneg_bg
    )


def archimedean_consistency_witness(
    model: AssessmentK, cap: int = SELECTION_CAP
) -> Optional[LinearF]:
    """A background-positive functional strictly positive on some selection."""
    for selection in selections(model, cap):
        raw = _selection_positive_functional(model.space, selection)
        if raw is not None:
            return LinearF(raw)
    return None


def archimedean_consistent(model: AssessmentK, cap: int = SELECTION_CAP) -> bool:
    return archimedean_consistency_witness(model, cap) is not None


def archimedean_member_evidence(
    model: AssessmentK, b: OptionSet, cap: int = SELECTION_CAP
) -> Optional[SuperlinF]:
    """None when B is in the Archimedean closure; otherwise an excluding
    min-envelope, assembled from one per-option linear witness each strictly
    positive on a common selection, and re-verified before being returned.

    Soundness: the envelope is background-positive, strictly positive on the
    picked option of every assessment set (hence the model lies inside its
    K_envelope), and nonpositive on B.  Completeness: any excluding superlinear
    witness is positive somewhere on each assessment set, which picks the
    selection, and its dominating linear functionals supply the per-option
    witnesses.
    """
    if not archimedean_consistent(model, cap):
        raise ValueError("Archimedean-inconsistent model: the closure is everything")
    options = b.without_zero()
    if not options:
        # Nothing desirable can be asserted through B; excluded by every
        # background-positive functional.
        witness = archimedean_consistency_witness(model, cap)
        assert witness is not None
        return SuperlinF((witness,))
    for selection in selections(model, cap):
        per_option: list[LinearF] = []
        for v in options:
            raw = _selection_positive_functional(model.space, selection, nonpos=[v])
            if raw is None:
                break
            per_option.append(LinearF(raw))
        else:
            envelope = SuperlinF(tuple(per_option))
            _assert_excluding_envelope(model, envelope, selection, options)
            return envelope
    return None


def _assert_excluding_envelope(
    model: AssessmentK,
    envelope: SuperlinF,
    selection: Sequence[Vector],
    options: Sequence[Vector],
) -> None:
    assert is_positive(envelope, model.space)
    assert all(envelope.eval(u) > 0 for u in selection)
    assert all(envelope.eval(v) <= 0 for v in options)


def archimedean_member(model: AssessmentK, b: OptionSet, cap: int = SELECTION_CAP) -> bool:
    return archimedean_member_evidence(model, b, cap) is None


def to_binary_D(model: KModel) -> Callable[[Vector], bool]:
    """The binary cone extracted from the model: D_K(u) = member(K, {u})."""

    def d_k(u: Vector) -> bool:
        return member(model, option_set(u))

    return d_k


def is_binary(model: AssessmentK, cap: int = SELECTION_CAP) -> bool:
    """Does every assessment set contain an option whose singleton is in the closure?"""
    d_k = to_binary_D(model)
    return all(
        any(d_k(u) for u in a.without_zero()) for a in model.assessment
    )


class KmOutcome(Enum):
    PASS = "pass"
    VIOLATION = "violation"


def km_check(model: KModel, b: OptionSet, b2: OptionSet) -> KmOutcome:
    """Check the mixing axiom on one instance: B subset of B2 subset of posi(B)."""
    if not all(u in b2 for u in b):
        raise ValueError("precondition failed: B is not a subset of B2")
    base = list(b.options)
    for u in b2:
        if u not in b and not posi_member(base, u):
            raise ValueError("precondition failed: B2 is not inside posi(B)")
    if member(model, b2) and not member(model, b):
        return KmOutcome.VIOLATION
    return KmOutcome.PASS


def displaced(a: OptionSet, u: Vector) -> OptionSet:
    """A without u, displaced by -u: the set the rejection bridge queries."""
    return OptionSet(tuple(v - u for v in a if v != u))


def reject(model: KModel, a: OptionSet) -> OptionSet:
    """Options u in A whose removal-and-displacement lands in the model."""
    if len(a) < 1:
        raise ValueError("need a nonempty menu")
    return OptionSet(tuple(u for u in a if member(model, displaced(a, u))))


def choose(model: KModel, a: OptionSet) -> OptionSet:
    rejected = reject(model, a)
    return OptionSet(tuple(u for u in a if u not in rejected))


def e_admissible(credal: Sequence[LinearF], a: OptionSet) -> OptionSet:
    """Options maximizing expected value under at least one credal functional."""
    if not credal:
        raise ValueError("need a nonempty credal set")
    chosen = []
    for u in a:
        for f in credal:
            value = f.eval(u)
            if all(value >= f.eval(v) for v in a):
                chosen.append(u)
                break
    return OptionSet(tuple(chosen))


def maximal(cone: DesirCone, a: OptionSet) -> OptionSet:
    """Options not strictly dominated within the menu: no v with v - u in the cone."""
    return OptionSet(
        tuple(
            u
            for u in a
            if not any(v != u and cone_member(cone, v - u) for v in a)
        )
    )
