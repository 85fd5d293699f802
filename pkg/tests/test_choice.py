import random
from fractions import Fraction
from itertools import product

import pytest

from conechoice.choice import (
    AssessmentK,
    BinaryK,
    CredalK,
    KmOutcome,
    OptionSet,
    archimedean_consistent,
    archimedean_member,
    archimedean_member_evidence,
    choose,
    consistent,
    displaced,
    e_admissible,
    is_binary,
    km_check,
    maximal,
    member,
    option_set,
    reject,
    selections,
    to_binary_D,
)
from conechoice.cone import OpenDualCone, PosiCone, is_mixing, member as cone_member, natural_extension, posi_member
from conechoice.functional import LinearF, is_positive
from conechoice.numeric import vec, zero_vector

from conftest import expectation, rand_vector
from oracles import cone2_member, separation_direction_2d, units_2d


@pytest.fixture
def k_hot(pw2):
    """One of 'bet on heads' and 'bet on tails' is desirable."""
    return AssessmentK(
        (option_set(vec(1, 0), vec(0, 1)), option_set(vec(1, -1), vec(-1, 1))), pw2
    )


@pytest.fixture
def k_credal(pw2):
    return CredalK((expectation("1/3"), expectation("2/3")), pw2)


def test_option_set_deduplicates_and_orders():
    a = option_set(vec(1, 0), vec(0, 1), vec(1, 0))
    assert len(a) == 2
    assert a.options == (vec(0, 1), vec(1, 0))
    assert vec(1, 0) in a
    assert a.without_zero() == a.options
    assert option_set(zero_vector(2)).without_zero() == ()


def test_hot_model_membership(k_hot):
    assert member(k_hot, option_set(vec(1, -1), vec(-1, 1)))
    assert not member(k_hot, option_set(vec(1, -1)))
    assert not member(k_hot, option_set(vec(-1, 1)))
    assert member(k_hot, option_set(vec(1, 1)))


def test_vacuous_model_membership(pw2):
    vacuous = AssessmentK((), pw2)
    assert member(vacuous, option_set(vec(1, 1)))
    assert not member(vacuous, option_set(vec(-1, -1)))
    assert consistent(vacuous)


def test_binary_model_membership(pw2, d_half):
    model = BinaryK(d_half)
    # Both options evaluate to exactly zero under the half-space functional.
    assert not member(model, option_set(vec(1, -1), vec(-1, 1)))
    assert member(model, option_set(vec(1, -1), vec(0, 1)))


def test_membership_prunes_zero(k_hot, k_credal):
    for model in (k_hot, k_credal):
        b = option_set(vec(1, 1))
        with_zero = option_set(vec(1, 1), zero_vector(2))
        assert member(model, b) == member(model, with_zero)
        assert not member(model, option_set(zero_vector(2)))


def test_consistency_examples(pw2):
    assert consistent(AssessmentK((option_set(vec(1, -1), vec(-1, 1)),), pw2))
    assert not consistent(AssessmentK((option_set(vec(-1, -1)),), pw2))
    assert consistent(AssessmentK((), pw2))


def test_selection_cap(pw2):
    sets = tuple(option_set(vec(1, 1), vec(1, 2)) for _ in range(3))
    model = AssessmentK(sets, pw2)
    assert len(list(selections(model))) == 8
    with pytest.raises(ValueError):
        list(selections(model, cap=7))


def test_archimedean_consistency_examples(pw2, k_hot):
    assert archimedean_consistent(k_hot)
    forced = AssessmentK((option_set(vec(1, -1)), option_set(vec(-1, 1))), pw2)
    assert not archimedean_consistent(forced)
    assert archimedean_consistent(AssessmentK((), pw2))


def test_archimedean_membership_examples(pw2, k_hot):
    assert archimedean_member(k_hot, option_set(vec(1, 1)))
    single = AssessmentK((option_set(vec(1, -1)),), pw2)
    assert archimedean_member(single, option_set(vec(1, -1)))
    envelope = archimedean_member_evidence(single, option_set(vec(-2, 2)))
    assert envelope is not None
    assert is_positive(envelope, pw2)
    assert envelope.eval(vec(1, -1)) > 0
    assert envelope.eval(vec(-2, 2)) <= 0
    # The hand-checked witness (2,1) confirms the exclusion independently.
    hand = LinearF(vec(2, 1))
    assert hand.eval(vec(1, -1)) > 0 and hand.eval(vec(-2, 2)) <= 0


def test_archimedean_membership_requires_consistency(pw2):
    forced = AssessmentK((option_set(vec(1, -1)), option_set(vec(-1, 1))), pw2)
    with pytest.raises(ValueError):
        archimedean_member(forced, option_set(vec(1, 1)))


def test_binary_extraction(k_hot, pw2, d_half):
    assert not is_binary(k_hot)
    d_k = to_binary_D(BinaryK(d_half))
    for v in (vec(1, 1), vec(1, -1), vec(0, 1), vec(-1, -1)):
        assert d_k(v) == cone_member(d_half, v)
    singleton = AssessmentK((option_set(vec(1, 1)),), pw2)
    assert is_binary(singleton)


def test_km_check_examples(pw2, k_credal, d_interval):
    b = option_set(vec(1, -1), vec(-1, 1))
    assert km_check(k_credal, b, b) == KmOutcome.PASS
    rng = random.Random(61)
    for _ in range(100):
        base = [rand_vector(rng, 2) for _ in range(rng.randint(1, 3))]
        base = [v for v in base if not v.is_zero()] or [vec(1, 1)]
        b = OptionSet(tuple(base))
        extra = b.options[0].scale(2) + b.options[-1]
        b2 = OptionSet(b.options + (extra,))
        assert km_check(k_credal, b, b2) == KmOutcome.PASS

    mix = is_mixing(d_interval)
    u, v = mix.witness
    witness_b = option_set(u, v)
    witness_b2 = OptionSet(witness_b.options + (u + v,))
    assert km_check(BinaryK(d_interval), witness_b, witness_b2) == KmOutcome.VIOLATION


def test_km_check_preconditions(k_credal):
    with pytest.raises(ValueError):
        km_check(k_credal, option_set(vec(1, 0)), option_set(vec(0, 1)))
    with pytest.raises(ValueError):
        km_check(
            k_credal,
            option_set(vec(1, 0)),
            option_set(vec(1, 0), vec(-1, 0)),
        )


def test_displacement():
    a = option_set(vec(1, 0), vec(0, 1), vec("1/2", "1/2"))
    shifted = displaced(a, vec("1/2", "1/2"))
    assert shifted.options == (vec("-1/2", "1/2"), vec("1/2", "-1/2"))


def test_reject_and_choose_examples(pw2, k_credal, vacuous):
    menu = option_set(vec(1, 0), vec(0, 1), vec("1/2", "1/2"))
    assert reject(k_credal, menu).options == (vec("1/2", "1/2"),)
    assert choose(k_credal, menu).options == (vec(0, 1), vec(1, 0))

    binary_vacuous = BinaryK(vacuous)
    both = option_set(vec(1, 1), zero_vector(2))
    assert reject(binary_vacuous, both).options == (zero_vector(2),)

    assert reject(k_credal, option_set(vec(1, 0))).options == ()


def test_e_admissible_examples(k_credal):
    menu = option_set(vec(1, 0), vec(0, 1), vec("1/2", "1/2"))
    assert e_admissible(k_credal.functionals, menu).options == (vec(0, 1), vec(1, 0))
    single = [expectation("2/3")]
    assert e_admissible(single, menu).options == (vec(1, 0),)
    assert e_admissible(single, option_set(vec(5, 5))).options == (vec(5, 5),)


def test_maximal_examples(pw2, vacuous):
    menu = option_set(vec(1, 0), vec(0, 1), vec("1/2", "1/2"))
    pair_cone = OpenDualCone((expectation("1/3"), expectation("2/3")), pw2)
    assert maximal(pair_cone, menu).options == menu.options
    assert maximal(vacuous, option_set(zero_vector(2), vec(1, 1))).options == (vec(1, 1),)
    chain = option_set(vec(1, 0), vec(2, 0), vec(3, 0))
    single_cone = OpenDualCone((expectation("2/3"),), pw2)
    assert maximal(single_cone, chain).options == (vec(3, 0),)


def test_rejection_bridge_and_rule_equivalences(pw2):
    rng = random.Random(77)
    for _ in range(60):
        functionals = tuple(
            LinearF(vec(Fraction(rng.randint(1, 5)), Fraction(rng.randint(1, 5))))
            for _ in range(rng.randint(1, 3))
        )
        credal = CredalK(functionals, pw2)
        menu = OptionSet(tuple(rand_vector(rng, 2) for _ in range(rng.randint(1, 4))))
        if not menu.options:
            continue
        rejected = reject(credal, menu)
        for u in menu:
            assert (u in rejected) == member(credal, displaced(menu, u))
        eadm = e_admissible(credal.functionals, menu)
        assert choose(credal, menu) == eadm
        cone = OpenDualCone(credal.functionals, pw2)
        assert maximal(cone, menu) == choose(BinaryK(cone), menu)
        assert all(u in maximal(cone, menu) for u in eadm)


def test_k_axioms_on_fixtures(pw2, k_hot, k_credal, d_half):
    rng = random.Random(83)
    models = (k_hot, k_credal, BinaryK(d_half))
    for model in models:
        # K1: the zero singleton is never acceptable.
        assert not member(model, option_set(zero_vector(2)))
        # K4: background-positive singletons always are.
        for u in (vec(1, 0), vec(0, 1), vec(1, 1), vec("1/3", 2)):
            assert member(model, option_set(u))
        for _ in range(15):
            b = OptionSet(tuple(rand_vector(rng, 2) for _ in range(rng.randint(1, 3))))
            # K0: adjoining the zero option never changes membership.
            assert member(model, b) == member(
                model, OptionSet(b.options + (zero_vector(2),))
            )
            # K3: supersets of members stay members.
            if member(model, b):
                assert member(model, OptionSet(b.options + (rand_vector(rng, 2),)))
        # K2: positive pairwise combinations of two members form a member.
        b1 = option_set(vec(1, 0), vec(0, 1))
        b2 = option_set(vec(1, 1), vec(2, -1))
        if member(model, b1) and member(model, b2):
            for lam, mu in ((1, 1), (2, 1), (Fraction(1, 2), 3)):
                combined = OptionSet(
                    tuple(
                        u.scale(lam) + v.scale(mu)
                        for u, v in product(b1.options, b2.options)
                    )
                )
                assert member(model, combined)


def _k2_saturation_probes(assessment_sets, pool):
    """Option sets derivable from the assessment by axioms K2-K4 over a grid.

    Every derived set must belong to the coherent closure; this is the
    soundness half of the closure characterization, checked without LP.
    """
    known = [frozenset(a) for a in assessment_sets]
    for u in pool:
        if all(x >= 0 for x in u.entries) and any(x > 0 for x in u.entries):
            known.append(frozenset([u]))  # K4
    derived = list(known)
    for b1, b2 in product(known, repeat=2):
        for lam, mu in ((Fraction(1), Fraction(1)), (Fraction(2), Fraction(1)), (Fraction(1, 2), Fraction(1, 2))):
            derived.append(
                frozenset(u.scale(lam) + v.scale(mu) for u in b1 for v in b2)
            )  # K2 with a constant coefficient table
    for b in list(derived):
        derived.append(b | {pool[0]})  # K3
    return derived


def test_selection_reduction_against_independent_oracle(pw2):
    rng = random.Random(91)
    units = units_2d()
    for _ in range(25):
        sets = tuple(
            OptionSet(
                tuple(
                    vec(rng.randint(-2, 2), rng.randint(-2, 2))
                    for _ in range(rng.randint(1, 3))
                )
            )
            for _ in range(rng.randint(1, 3))
        )
        sets = tuple(a for a in sets if a.without_zero())
        if not sets:
            continue
        model = AssessmentK(sets, pw2)
        pruned = [a.without_zero() for a in sets]

        # By Gordan's alternative, 0 is a nontrivial nonnegative combination
        # of the generators exactly when no direction is strictly positive on
        # all of them.  (Pairwise Carathéodory does not apply to 0: three
        # generators with no antiparallel pair can still combine to 0.)
        def selection_consistent(gens):
            return separation_direction_2d(gens) is not None

        def oracle_member(options):
            for selection in product(*pruned):
                gens = list(selection) + units
                if not selection_consistent(gens):
                    continue  # inconsistent selection
                if not any(cone2_member(gens, v) for v in options):
                    return False
            return True

        oracle_consistent = any(
            selection_consistent(list(s) + units) for s in product(*pruned)
        )
        assert consistent(model) == oracle_consistent
        for _ in range(4):
            b = OptionSet(
                tuple(vec(rng.randint(-2, 2), rng.randint(-2, 2)) for _ in range(rng.randint(1, 3)))
            )
            options = b.without_zero()
            expected = bool(options) and oracle_member(options)
            assert member(model, b) == expected
        if oracle_consistent:
            pool = [v for a in pruned for v in a] + units
            probes = list(dict.fromkeys(_k2_saturation_probes(pruned, pool)))
            if len(probes) > 25:
                probes = rng.sample(probes, 25)
            for probe in probes:
                assert member(model, OptionSet(tuple(probe)))


def test_archimedean_membership_against_separation_oracle(pw2):
    rng = random.Random(97)
    units = units_2d()
    checked = 0
    for _ in range(40):
        sets = tuple(
            OptionSet(
                tuple(
                    vec(rng.randint(-2, 2), rng.randint(-2, 2))
                    for _ in range(rng.randint(1, 2))
                )
            )
            for _ in range(rng.randint(1, 3))
        )
        sets = tuple(a for a in sets if a.without_zero())
        if not sets:
            continue
        model = AssessmentK(sets, pw2)
        pruned = [a.without_zero() for a in sets]
        oracle_consistent = any(
            separation_direction_2d(list(s) + units) is not None
            for s in product(*pruned)
        )
        assert archimedean_consistent(model) == oracle_consistent
        if not oracle_consistent:
            continue
        for _ in range(4):
            b = OptionSet(
                tuple(vec(rng.randint(-2, 2), rng.randint(-2, 2)) for _ in range(rng.randint(1, 2)))
            )
            options = b.without_zero()
            excluded = any(
                all(
                    separation_direction_2d(list(s) + units, nonpos=[v]) is not None
                    for v in options
                )
                for s in product(*pruned)
            ) if options else True
            assert archimedean_member(model, b) == (not excluded)
            checked += 1
    assert checked >= 40
