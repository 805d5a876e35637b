"""Exact cylinder probabilities, invariance, characters, Haar tests, Cesaro
averages, the counterexample bundle and hypothesis reports."""

import itertools
import math
import random
from fractions import Fraction

import pytest

from groupca.automata import letters, linear_ca, shift_ca
from groupca.configs import Cylinder, PeriodicConfig
from groupca.groups import Character, GroupSpec, Subgroup
from groupca.kernels import FullShift, LinearKernelShift, ProductSubgroup
from groupca.measures import (
    Bernoulli,
    HaarMeasure,
    PeriodicOrbitMeasure,
    PushforwardMeasure,
    character_integral,
    cesaro_sequence,
    check_hypotheses,
    counterexample_suite,
    cylinder_prob,
    haar_test,
    invariance_check,
    sample,
    sigma_entropy_exact,
    uniform_bernoulli,
)

Z2 = GroupSpec((2,))
Z4 = GroupSpec((4,))

F_xor = linear_ca(Z2, {0: 1, 1: 1})


def w(*xs):
    return tuple((a,) for a in xs)


def test_bernoulli_cylinder_prob():
    mu = uniform_bernoulli(Z2)
    assert cylinder_prob(mu, Cylinder(0, w(0, 1))) == Fraction(1, 4)
    biased = Bernoulli(Z2, {(0,): Fraction(3, 4), (1,): Fraction(1, 4)})
    assert cylinder_prob(biased, Cylinder(2, w(0, 0, 1))) == Fraction(9, 64)


def test_bernoulli_validation():
    with pytest.raises(ValueError):
        Bernoulli(Z2, {(0,): Fraction(1, 2), (1,): Fraction(1, 4)})
    with pytest.raises(ValueError):
        Bernoulli(Z2, {(0,): Fraction(3, 2), (1,): Fraction(-1, 2)})


def test_haar_product_subgroup_probabilities():
    sigma = ProductSubgroup(Z4, 1, Subgroup(Z4, ((0,), (2,))))
    mu = HaarMeasure(sigma)
    assert cylinder_prob(mu, Cylinder(0, w(2))) == Fraction(1, 2)
    assert cylinder_prob(mu, Cylinder(0, w(1))) == 0
    assert cylinder_prob(mu, Cylinder(-3, w(0, 2, 0))) == Fraction(1, 8)


def test_haar_paired_blocks_phase():
    pair = Z2.power(2)
    diag = Subgroup(pair, ((0, 0), (1, 1)))
    x1 = ProductSubgroup(Z2, 2, diag, phase=0)
    mu = HaarMeasure(x1)
    assert cylinder_prob(mu, Cylinder(0, w(0, 0))) == Fraction(1, 2)
    assert cylinder_prob(mu, Cylinder(0, w(0, 1))) == 0
    # across a block boundary the two letters are independent
    assert cylinder_prob(mu, Cylinder(1, w(0, 0))) == Fraction(1, 4)
    assert cylinder_prob(mu, Cylinder(1, w(0, 1))) == Fraction(1, 4)


def test_haar_kernel_shift_probabilities():
    mu = HaarMeasure(LinearKernelShift(F_xor))
    # the kernel holds exactly the two constant configurations
    assert cylinder_prob(mu, Cylinder(0, w(0))) == Fraction(1, 2)
    assert cylinder_prob(mu, Cylinder(5, w(1, 1, 1))) == Fraction(1, 2)
    assert cylinder_prob(mu, Cylinder(0, w(0, 1))) == 0


def test_additivity_over_letter_refinement():
    suite = counterexample_suite()
    measures = [
        uniform_bernoulli(Z2),
        HaarMeasure(suite.x1),
        suite.mu,
        PushforwardMeasure(HaarMeasure(suite.x1), F_xor, 1),
        PeriodicOrbitMeasure.from_orbit(PeriodicConfig(Z2, w(0, 1))),
    ]
    abc = letters(Z2)
    for mu in measures:
        for ell in range(1, 5):
            for word in itertools.product(abc, repeat=ell):
                total = sum(
                    cylinder_prob(mu, Cylinder(0, word + (a,))) for a in abc
                )
                assert total == cylinder_prob(mu, Cylinder(0, word))


def test_pushforward_matches_preimage_sum():
    mu = uniform_bernoulli(Z2)
    push = PushforwardMeasure(mu, F_xor, 1)
    for word in itertools.product(letters(Z2), repeat=3):
        cyl = Cylinder(0, word)
        direct = push.cylinder_prob(cyl)
        expanded = sum(mu.cylinder_prob(c) for c in push.preimage(cyl))
        assert direct == expanded
    # a surjective rule preserves the uniform measure
    assert push.cylinder_prob(Cylinder(0, w(1, 0))) == Fraction(1, 4)


def test_periodic_orbit_measure():
    orbit = PeriodicOrbitMeasure.from_orbit(PeriodicConfig(Z2, w(0, 1)))
    assert len(orbit.configs) == 2
    assert cylinder_prob(orbit, Cylinder(0, w(0, 1, 0))) == Fraction(1, 2)
    assert cylinder_prob(orbit, Cylinder(0, w(0, 0))) == 0
    word = sample(orbit, (0, 5), seed=3)
    assert word in {w(0, 1, 0, 1, 0, 1), w(1, 0, 1, 0, 1, 0)}


def test_sampler_frequencies_match_exact():
    rng = random.Random(17)
    suite = counterexample_suite()
    cases = [
        uniform_bernoulli(Z2),
        HaarMeasure(suite.x1),
        suite.mu,
    ]
    n = 40_000
    for mu in cases:
        counts = {}
        for _ in range(n):
            word = mu.sample_word(0, 1, rng)
            counts[word] = counts.get(word, 0) + 1
        for word in itertools.product(letters(Z2), repeat=2):
            p = float(cylinder_prob(mu, Cylinder(0, word)))
            freq = counts.get(word, 0) / n
            sigma = math.sqrt(max(p * (1 - p), 1e-9) / n)
            assert abs(freq - p) < 4 * sigma + 1e-3


def test_invariance_uniform_under_surjective_rule():
    res = invariance_check(uniform_bernoulli(Z2), F_xor, f_power=1, length=6)
    assert res.invariant
    res_shift = invariance_check(uniform_bernoulli(Z2), shift=1, length=5)
    assert res_shift.invariant


def test_invariance_detects_noninvariant_measure():
    suite = counterexample_suite()
    res = invariance_check(suite.nu, shift=1, length=2)
    assert not res.invariant
    assert res.witness is not None
    assert res.max_discrepancy == Fraction(1, 4)


def test_character_integral_examples():
    mu = uniform_bernoulli(Z2)
    chi = {0: Character(Z2, (1,))}
    assert abs(character_integral(mu, chi)) < 1e-12
    assert character_integral(mu, {}) == 1
    suite = counterexample_suite()
    both = {0: Character(Z2, (1,)), 1: Character(Z2, (1,))}
    assert character_integral(suite.mu, both) == pytest.approx(0.25)


def test_haar_test_uniform_passes():
    rep = haar_test(uniform_bernoulli(Z2), FullShift(Z2), 3)
    assert rep.consistent
    assert rep.max_abs_integral < 1e-9


def test_haar_test_subshift_cases():
    sigma = ProductSubgroup(Z4, 1, Subgroup(Z4, ((0,), (2,))))
    mu = HaarMeasure(sigma)
    ok = haar_test(mu, sigma, 3)
    assert ok.consistent
    bad = haar_test(mu, FullShift(Z4), 3)
    assert not bad.consistent
    assert bad.witness is not None


def test_cesaro_sequence_biased_bernoulli():
    mu0 = Bernoulli(Z2, {(0,): Fraction(3, 4), (1,): Fraction(1, 4)})
    res = cesaro_sequence(mu0, F_xor, 32, 1)
    d = res.distances_to_uniform
    assert d[0] == Fraction(1, 4)
    # decay along doublings; strict stepwise monotonicity fails right after
    # powers of two, where the iterate briefly recovers structure
    for n in (1, 2, 4, 8, 16):
        assert d[2 * n - 1] < d[n - 1]
    assert d[-1] < d[0] / 4


def test_cesaro_uniform_is_fixed():
    res = cesaro_sequence(uniform_bernoulli(Z2), F_xor, 8, 2)
    assert all(dist == 0 for dist in res.distances_to_uniform)


def test_cesaro_point_mass_at_zero():
    zero = PeriodicOrbitMeasure.from_orbit(PeriodicConfig.zero(Z2))
    res = cesaro_sequence(zero, F_xor, 4, 1)
    for dist in res.distances_to_uniform:
        assert dist == Fraction(1, 2)


def test_counterexample_suite_checks():
    suite = counterexample_suite()
    checks = suite.verify(6)
    assert checks["sigma_image_of_x1_is_x2"]
    assert checks["sigma_preimage_of_x1_is_x2"]
    assert checks["sigma2_preimage_of_x1_is_x1"]
    assert checks["rule_image_languages_match"]
    assert checks["shifted_languages_match"]
    assert checks["mu_sigma_invariance"].invariant
    assert checks["mu_rule_invariance"].invariant
    assert not checks["nu_sigma_invariance"].invariant
    assert not checks["haar_test"].consistent


def test_suite_mu_single_letter_mass():
    suite = counterexample_suite()
    assert cylinder_prob(suite.mu, Cylinder(0, w(0))) == Fraction(5, 8)
    assert cylinder_prob(suite.mu, Cylinder(0, w(1))) == Fraction(3, 8)


def test_sigma_entropy_exact_values():
    suite = counterexample_suite()
    assert sigma_entropy_exact(uniform_bernoulli(Z2)) == pytest.approx(math.log(2))
    assert sigma_entropy_exact(HaarMeasure(suite.x1)) == pytest.approx(math.log(2) / 2)
    assert sigma_entropy_exact(suite.mu) == pytest.approx(math.log(2) / 2)
    assert sigma_entropy_exact(HaarMeasure(LinearKernelShift(F_xor))) == 0.0
    orbit = PeriodicOrbitMeasure.from_orbit(PeriodicConfig(Z2, w(0, 1)))
    assert sigma_entropy_exact(orbit) == 0.0


def test_check_hypotheses_xor_uniform():
    rep = check_hypotheses(F_xor, mu=uniform_bernoulli(Z2))
    assert rep.nontrivial and rep.bipermutative
    assert rep.k == 2 and rep.p1 == 1 and rep.k_p1 == 2
    assert rep.condition4.found and rep.condition4.m == 0
    assert rep.corollary_ker.holds
    assert rep.entropy_positive
    assert rep.all_checkable_hold
    assert len(rep.unchecked) == 2


def test_check_hypotheses_counterexample_measure():
    suite = counterexample_suite()
    rep = check_hypotheses(
        suite.automaton,
        mu=suite.mu,
        notes=(
            "the coupling subgroups are invariant for the second shift power "
            "but not for the shift itself, so the invariant-set equality "
            "premise fails for this measure",
        ),
    )
    assert rep.entropy_positive
    assert rep.condition4.found
    assert rep.notes
    assert "invariant-set equality" in rep.notes[0]


def test_check_hypotheses_trivial_rule():
    rep = check_hypotheses(shift_ca(Z2), mu="abstract")
    assert not rep.nontrivial
    assert rep.condition4 is None
    assert not rep.all_checkable_hold
    assert rep.entropy_positive is None


def test_invariance_mc_mode():
    res = invariance_check(
        uniform_bernoulli(Z2), F_xor, f_power=1, length=3,
        mode="mc", mc_samples=30_000, seed=2,
    )
    assert not res.exact
    assert res.invariant
    suite = counterexample_suite()
    res_bad = invariance_check(
        suite.nu, shift=1, length=2, mode="mc", mc_samples=30_000, seed=2
    )
    assert not res_bad.invariant
    assert res_bad.max_discrepancy > 0.2
