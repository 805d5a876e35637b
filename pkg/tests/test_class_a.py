"""Partition analysis, inversion, dual rules and conjugacy verification."""

import itertools

import pytest

from groupca.automata import (
    LaurentPoly,
    as_laurent,
    letters,
    linear_ca,
    table_from_rule,
)
from groupca.class_a import (
    analyze_radius1,
    check_bm1,
    check_bm2,
    check_linear_classA,
    dual_ca,
    invert_radius1,
    verify_conjugacy,
)
from groupca.groups import Endomorphism, GroupSpec
from groupca.kernels import kernel_elements
from groupca.configs import PeriodicConfig

Z2 = GroupSpec((2,))
V = GroupSpec((2, 2))  # Klein four group

F1 = linear_ca(V, {0: ((1, 1), (1, 0)), 1: ((1, 0), (0, 0))}, neighborhood=(0, 1))
F2 = linear_ca(V, {0: ((0, 1), (1, 0)), 1: ((1, 0), (0, 0))}, neighborhood=(0, 1))


def test_analysis_f1():
    a = analyze_radius1(F1)
    # classes keyed by the first coordinate
    assert a.classes == (((0, 0), (0, 1)), ((1, 0), (1, 1)))
    assert a.pi_is_permutation
    assert a.left_permutative
    assert a.class_a
    assert a.quotient_size == 2


def test_analysis_f2():
    a = analyze_radius1(F2)
    assert a.class_a
    assert a.classes == (((0, 0), (0, 1)), ((1, 0), (1, 1)))


def test_analysis_shift_like_rule():
    # rule that copies its right neighbor: classes are singletons
    S = table_from_rule(V, (0, 1), lambda w: w[1])
    a = analyze_radius1(S)
    assert a.quotient_size == 4
    assert not a.left_permutative  # F(ab) ignores a
    assert not a.class_a


def test_analysis_constant_rule():
    C = table_from_rule(V, (0, 1), lambda w: (0, 0))
    a = analyze_radius1(C)
    assert a.quotient_size == 1
    assert not a.pi_is_permutation
    assert not a.invertible_r1


def test_bm_checks():
    a1 = analyze_radius1(F1)
    assert check_bm1(a1) and check_bm2(a1)
    a2 = analyze_radius1(F2)
    assert check_bm1(a2) and check_bm2(a2)
    bad = analyze_radius1(table_from_rule(V, (0, 1), lambda w: (0, 0)))
    assert not check_bm1(bad)
    with pytest.raises(ValueError):
        check_bm2(bad)


def test_identity_is_invertible():
    I = linear_ca(V, {0: Endomorphism.identity(V), 1: Endomorphism.zero_map(V)},
                  neighborhood=(0, 1))
    a = analyze_radius1(I)
    assert check_bm1(a)
    inv = invert_radius1(I)
    for win in itertools.product(letters(V), repeat=2):
        assert inv.local(win) == win[0]


def test_invert_f1_matches_closed_form():
    inv = invert_radius1(F1)
    # closed form: first output coordinate y0, second y0+y1+x0
    for (x0, y0), (x1, y1) in itertools.product(letters(V), repeat=2):
        got = inv.local(((x0, y0), (x1, y1)))
        assert got == (y0, (y0 + y1 + x0) % 2)


def test_invert_f2_matches_closed_form():
    inv = invert_radius1(F2)
    for (x0, y0), (x1, y1) in itertools.product(letters(V), repeat=2):
        assert inv.local(((x0, y0), (x1, y1))) == (y0, (y1 + x0) % 2)


def test_invert_table_path_agrees_with_formula_path():
    # feed the same rule through the table route
    T = table_from_rule(V, (0, 1), F1.local)
    inv_t = invert_radius1(T)
    inv_f = invert_radius1(F1)
    for win in itertools.product(letters(V), repeat=2):
        assert inv_t.local(win) == inv_f.local(win)


def test_invert_rejects_noninvertible():
    S = table_from_rule(V, (0, 1), lambda w: w[1])
    with pytest.raises(ValueError):
        invert_radius1(S)


def test_check_linear_classA_examples():
    assert check_linear_classA(F1.coeff(0), F1.coeff(1))
    assert check_linear_classA(F2.coeff(0), F2.coeff(1))
    assert not check_linear_classA(F1.coeff(0), Endomorphism.zero_map(V))


def test_check_linear_classA_equals_bm_conditions_exhaustively():
    # every linear radius-1 rule on the Klein four group
    mats = list(itertools.product(range(2), repeat=4))
    for m0, m1 in itertools.product(mats, repeat=2):
        f0 = Endomorphism(V, V, ((m0[0], m0[1]), (m0[2], m0[3])))
        f1 = Endomorphism(V, V, ((m1[0], m1[1]), (m1[2], m1[3])))
        F = linear_ca(V, {0: f0, 1: f1}, neighborhood=(0, 1))
        a = analyze_radius1(F)
        lhs = check_linear_classA(f0, f1)
        rhs = a.class_a
        assert lhs == rhs, (m0, m1)


def test_dual_f1_rule():
    dual = dual_ca(F1)
    assert dual.provenance == "formula"
    assert dual.linear_form is not None
    assert as_laurent(dual.linear_form) == LaurentPoly(Z2, {-1: 1, 0: 1, 1: 1})
    # solved table agrees: alpha + beta + gamma
    for key, value in dual.rule_table().items():
        total = (key[0][0] + key[1][0] + key[2][0]) % 2
        assert value == (total,)
    assert dual.automaton.permutativity().bipermutative


def test_dual_f2_rule():
    dual = dual_ca(F2)
    assert as_laurent(dual.linear_form) == LaurentPoly(Z2, {-1: 1, 1: 1})
    for key, value in dual.rule_table().items():
        assert value == ((key[0][0] + key[2][0]) % 2,)


def test_dual_rejects_non_class_a():
    S = table_from_rule(V, (0, 1), lambda w: w[1])
    with pytest.raises(ValueError):
        dual_ca(S)


def test_dual_kernel_matches_reference_sets():
    dual1 = dual_ca(F1)
    ker1 = set(kernel_elements(dual1.automaton, 1))
    mk = lambda *xs: PeriodicConfig(Z2, tuple((x,) for x in xs))
    assert ker1 == {mk(0), mk(0, 1, 1), mk(1, 1, 0), mk(1, 0, 1)}
    dual2 = dual_ca(F2)
    ker2 = set(kernel_elements(dual2.automaton, 1))
    assert ker2 == {mk(0), mk(1), mk(0, 1), mk(1, 0)}


def test_verify_conjugacy_f1_f2():
    dual1 = dual_ca(F1)
    res = verify_conjugacy(F1, dual1, depth=2, width=6)
    assert res.ok and res.windows_checked > 0
    dual2 = dual_ca(F2)
    assert verify_conjugacy(F2, dual2, depth=2, width=6).ok


def test_verify_conjugacy_mismatch_produces_witness():
    dual2 = dual_ca(F2)
    res = verify_conjugacy(F1, dual2, depth=2, width=5)
    assert not res.ok
    assert res.witness is not None


def test_wrong_arity_rejected():
    with pytest.raises(ValueError):
        analyze_radius1(linear_ca(Z2, {0: 1, 1: 1, 2: 1}))
