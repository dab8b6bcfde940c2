from fractions import Fraction
from itertools import combinations
from math import factorial

import pytest

from cmcycles.cm import CMConfig, ConfigError, CycleType, EigenvalueTuple, all_types
from cmcycles.descent import descent_data
from cmcycles.exterior import Element, ExteriorError, monomial_basis, wedge
from cmcycles.lefschetz import (
    HardLefschetzError,
    L_power_apply,
    LefschetzClass,
    is_primitive,
    lambda_apply,
    lambda_type_support,
    lefschetz_component,
    lefschetz_product,
    power_matrix,
    support_types,
    theta,
)
from cmcycles.linalg import identity, matmul

from oracles import wedge_sign


def std(*genera):
    return LefschetzClass.standard(CMConfig(genera))


def mono(lc, text):
    return lc.config.monomial(lc.config.parse(text))


def T(lc, text):
    return CycleType.parse(lc.config, text)


# --- components and powers ---------------------------------------------------


def test_components_square_to_zero_and_sum_to_L():
    lc = LefschetzClass.from_zeta(CMConfig.of(3), EigenvalueTuple.skew(CMConfig.of(3), [2, Fraction(-1, 2), 5]))
    total = Element.zero(lc.genera)
    for s in range(3):
        Ls = lefschetz_component(lc, s)
        assert not wedge(Ls, Ls)
        total = total + Ls
    assert total == lc.element


def test_component_readout():
    lc = std(2)
    assert lefschetz_component(lc, 0) == mono(lc, "w[1.1]*w[1.1]^bar")


def test_component_rejects_barred():
    with pytest.raises(ConfigError):
        lefschetz_component(std(2), 2)


def test_power_zero_is_identity():
    lc = std(2)
    a = mono(lc, "w[1.1]") + mono(lc, "w[1.2]*w[1.1]^bar")
    assert L_power_apply(lc, a, 0) == a


def test_L_squared_on_unit():
    lc = std(2)
    sign = wedge_sign([(1, 1, False), (1, 1, True)], [(1, 2, False), (1, 2, True)])
    assert L_power_apply(lc, lc.config.one(), 2) == lc.config.monomial(0b1111, factorial(2) * sign)


def test_L_on_single_generator_has_one_term():
    lc = std(2)
    got = L_power_apply(lc, mono(lc, "w[1.1]"), 1)
    # w_s1 ^ (w_s1 w_cs1 + w_s2 w_cs2): only K = {s2} survives
    sign = wedge_sign([(1, 1, False)], [(1, 2, False), (1, 2, True)])
    assert got == mono(lc, "w[1.1]*w[1.2]*w[1.2]^bar").scale(sign)


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_power_coefficient_law_on_unit(g):
    zeta_vals = [Fraction(k + 2, k + 1) for k in range(g)]
    cfg = CMConfig.of(g)
    lc = LefschetzClass.from_zeta(cfg, EigenvalueTuple.skew(cfg, zeta_vals))
    for n in range(g + 1):
        got = L_power_apply(lc, cfg.one(), n)
        expected_masks = set()
        for K in combinations(range(g), n):
            km = sum(1 << s for s in K)
            m = CycleType(km, km).mask(g)
            expected_masks.add(m)
            zk = Fraction(1)
            for s in K:
                zk *= zeta_vals[s]
            assert abs(got.coefficient(m)) == factorial(n) * zk
        assert set(got.terms) == expected_masks


def test_lefschetz_product_of_empty_set_is_one():
    lc = std(3)
    assert lefschetz_product(lc, 0) == lc.config.one()


# --- theta -------------------------------------------------------------------


def test_theta_top_is_identity():
    lc = std(3)
    th = theta(lc, 3)
    assert [list(r) for r in th.entries] == identity(20)


def test_theta_g1_inverts_unit_to_L():
    lc = std(1)
    assert theta(lc, 0).apply(mono(lc, "w[1.1]*w[1.1]^bar")) == lc.config.one()


@pytest.mark.parametrize("g,i", [(2, 1), (2, 0), (3, 1), (3, 0), (4, 2)])
def test_theta_inverts_power(g, i):
    lc = std(g)
    fwd = power_matrix(lc, g - i, i)
    inv = theta(lc, i)
    n = len(fwd.entries[0])
    assert matmul(inv.entries, fwd.entries) == identity(n)
    assert matmul(fwd.entries, inv.entries) == identity(n)


def _strict_support_violations(lc):
    g = lc.g
    bad = []
    for i in range(g + 1):
        th = theta(lc, i)
        for m in monomial_basis(g, 2 * g - i):
            src = CycleType.from_mask(g, m)
            for t in support_types(th.apply(lc.config.monomial(m))):
                K = src.I & ~t.I
                ok = t.I | K == src.I and t.J | K == src.J and not t.I & K and not t.J & K
                if not (ok and bin(K).count("1") == g - i):
                    bad.append((i, src, t))
    return bad


@pytest.mark.parametrize("g", [1, 2])
def test_theta_output_is_source_minus_K_small_genus(g):
    assert _strict_support_violations(std(g)) == []


def test_theta_strict_support_fails_at_g3():
    # L: H^2 -> H^4 mixes the L_a, so its inverse does too
    lc = std(3)
    out = theta(lc, 2).apply(mono(lc, "w[1.1]*w[1.2]*w[1.1]^bar*w[1.2]^bar"))
    assert support_types(out) == {T(lc, "w[1.1]*w[1.1]^bar"), T(lc, "w[1.2]*w[1.2]^bar"), T(lc, "w[1.3]*w[1.3]^bar")}
    assert {abs(c) for c in out.terms.values()} == {Fraction(1, 2)}
    assert (2, CycleType(3, 3), CycleType(4, 4)) in _strict_support_violations(lc)


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_theta_preserves_reduced_label(g):
    lc = std(g)
    for i in range(g + 1):
        th = theta(lc, i)
        for m in monomial_basis(g, 2 * g - i):
            want = descent_data(CycleType.from_mask(g, m)).reduced
            for t in support_types(th.apply(lc.config.monomial(m))):
                assert t.weight == i and descent_data(t).reduced == want


def test_theta_rejects_degree_out_of_range():
    with pytest.raises(ValueError):
        theta(std(2), 3)


def test_degenerate_zeta_fails_hard_lefschetz():
    cfg = CMConfig.of(2)
    lc = LefschetzClass.from_zeta(cfg, EigenvalueTuple.skew(cfg, [1, 0]))
    assert lc.degenerate == [1]
    with pytest.raises(HardLefschetzError) as info:
        theta(lc, 0)
    assert info.value.degenerate == [1]


def test_operator_matrix_json_export():
    data = theta(std(1), 0).to_json()
    assert data == {"domain_degree": 2, "codomain_degree": 0, "entries": [["1/1"]]}


# --- Lambda --------------------------------------------------------------------


def test_lambda_on_lefschetz_type_hits_unit():
    lc = std(2)
    out = lambda_apply(lc, mono(lc, "w[1.1]*w[1.1]^bar"), 2)
    assert set(out.terms) == {0}


def test_lambda_kills_primitive_class():
    lc = std(2)
    assert not lambda_apply(lc, mono(lc, "w[1.1]*w[1.2]^bar"), 2)


def test_lambda_in_upper_regime():
    lc = std(2)
    out = lambda_apply(lc, mono(lc, "w[1.1]*w[1.2]*w[1.1]^bar"), 3)
    assert support_types(out) == {T(lc, "w[1.2]")}


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_lambda_at_g_plus_one_is_theta(g):
    lc = std(g)
    i = g + 1
    for m in monomial_basis(g, i):
        a = lc.config.monomial(m)
        assert lambda_apply(lc, a, i) == theta(lc, g - 1).apply(a)


def test_lambda_rejects_bad_degree_and_mixed_input():
    lc = std(2)
    with pytest.raises(ValueError):
        lambda_apply(lc, lc.config.one(), 0)
    with pytest.raises(ExteriorError):
        lambda_apply(lc, mono(lc, "w[1.1]*w[1.1]^bar") + mono(lc, "w[1.1]"), 2)


def test_lambda_type_support_examples():
    lc = std(2)
    assert lambda_type_support(lc, T(lc, "w[1.1]*w[1.1]^bar")) == {CycleType(0, 0)}
    assert lambda_type_support(lc, T(lc, "w[1.1]*w[1.2]^bar")) == set()


@pytest.mark.parametrize("g", [1, 2, 3])
def test_lambda_preserves_reduced_label(g):
    lc = std(g)
    for t in all_types(lc.config):
        if t.weight < 2:
            continue
        for s in lambda_type_support(lc, t):
            assert s.weight == t.weight - 2
            assert descent_data(s).reduced == descent_data(t).reduced


def test_lambda_type_support_needs_weight_two():
    with pytest.raises(ValueError):
        lambda_type_support(std(2), CycleType(1, 0))


# --- primitivity ---------------------------------------------------------------


def test_primitivity_examples():
    lc = std(2)
    assert not is_primitive(lc, mono(lc, "w[1.1]*w[1.1]^bar"), 2)
    assert is_primitive(lc, mono(lc, "w[1.1]*w[1.2]^bar"), 2)
    assert is_primitive(lc, lc.config.one(), 0)


def test_primitivity_requires_low_degree():
    with pytest.raises(ValueError):
        is_primitive(std(2), mono(std(2), "w[1.1]*w[1.2]*w[1.1]^bar"), 3)


@pytest.mark.parametrize("genera", [(1,), (2,), (3,), (4,), (1, 2)])
def test_primitivity_criterion(genera):
    lc = std(*genera)
    g = lc.g
    for t in all_types(lc.config):
        if t.weight <= g:
            assert is_primitive(lc, lc.config.monomial(t.mask(g)), t.weight) == (not t.I & t.J)


def test_degenerate_zeta_can_fake_primitivity():
    cfg = CMConfig.of(2)
    lc = LefschetzClass.from_zeta(cfg, EigenvalueTuple.skew(cfg, [0, 1]))
    # w_s2 w_cs2 is not primitive for an ample class; here L = L_s2, which squares to zero
    a = mono(lc, "w[1.2]*w[1.2]^bar")
    assert is_primitive(lc, a, 2)
