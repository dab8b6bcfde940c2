import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmcycles.cm import CMConfig, CycleType, EigenvalueTuple, all_types, conjugate_type, project
from cmcycles.descent import (
    DescentError,
    Derivation,
    certify_theorem,
    close_ledger,
    descend,
    descent_chain,
    descent_data,
    divide,
)
from cmcycles.exterior import Element, numerically_trivial, top_trace, wedge
from cmcycles.lefschetz import LefschetzClass, lefschetz_product

from oracles import wedge_sign


def cfg_of(*genera):
    return CMConfig(genera)


def T(cfg, text):
    return CycleType.parse(cfg, text)


def leaves(ledger, t):
    return {u for u, d in ledger.tree([t]) if not d.premises}


# --- descent data ------------------------------------------------------------


def test_descent_data_examples():
    cfg = cfg_of(2)
    d = descent_data(T(cfg, "w[1.1]*w[1.1]^bar"))
    assert (d.K, d.I0, d.J0, d.k) == (0b01, 0, 0, 1)
    d = descent_data(T(cfg, "w[1.1]*w[1.2]^bar"))
    assert (d.K, d.I0, d.J0, d.k) == (0, 0b01, 0b10, 0)
    d = descent_data(T(cfg, "w[1.1]*w[1.2]*w[1.1]^bar"))
    assert (d.K, d.I0, d.J0, d.k) == (0b01, 0b10, 0, 1)


@pytest.mark.parametrize("genera", [(1,), (2,), (3,), (1, 2)])
def test_descent_data_invariants(genera):
    cfg = cfg_of(*genera)
    for t in all_types(cfg):
        d = descent_data(t)
        assert d.I0 | d.K == t.I and not d.I0 & d.K
        assert d.J0 | d.K == t.J and not d.J0 & d.K
        assert not d.I0 & d.J0
        assert d.reduced.weight == t.weight - 2 * d.k


# --- descend / divide ----------------------------------------------------------


def test_descend_lefschetz_type_reaches_unit():
    cfg = cfg_of(1)
    ledger = close_ledger(cfg)
    t = T(cfg, "w[1.1]*w[1.1]^bar")
    assert descend(ledger, t) == CycleType(0, 0)
    assert CycleType(0, 0) in ledger


def test_descend_without_K_is_identity():
    cfg = cfg_of(2)
    ledger = close_ledger(cfg)
    t = T(cfg, "w[1.1]*w[1.2]^bar")
    ledger.add(t, Derivation("hypothesis"))
    assert descend(ledger, t) == t


def test_descend_g3_takes_two_lambda_steps():
    cfg = cfg_of(3)
    lc = LefschetzClass.standard(cfg)
    t = T(cfg, "w[1.1]*w[1.2]*w[1.1]^bar*w[1.2]^bar")
    chain = descent_chain(lc, t)
    assert len(chain) == 3 and chain[-1] == CycleType(0, 0)
    assert [u.weight for u in chain] == [4, 2, 0]
    ledger = close_ledger(cfg, lc)
    assert descend(ledger, t) == CycleType(0, 0)


def test_descend_rejects_unknown_and_odd():
    cfg = cfg_of(2)
    ledger = close_ledger(cfg)
    with pytest.raises(DescentError):
        descend(ledger, T(cfg, "w[1.1]*w[1.2]^bar"))
    odd = T(cfg, "w[1.1]")
    ledger.add(odd, Derivation("hypothesis"))
    with pytest.raises(DescentError):
        descend(ledger, odd)


def test_divide_examples():
    cfg = cfg_of(1)
    ledger = close_ledger(cfg)
    t = T(cfg, "w[1.1]*w[1.1]^bar")
    assert divide(ledger, t, 0b1) == CycleType(0, 0)
    assert divide(ledger, t, 0) == t


def test_divide_g2_partial():
    cfg = cfg_of(2)
    ledger = close_ledger(cfg)
    t = T(cfg, "w[1.1]*w[1.2]*w[1.1]^bar")
    ledger.add(t, Derivation("hypothesis"))
    assert divide(ledger, t, 0b01) == T(cfg, "w[1.2]")
    assert T(cfg, "w[1.2]") in ledger


def test_divide_rejects_K_outside_intersection():
    cfg = cfg_of(2)
    ledger = close_ledger(cfg)
    with pytest.raises(DescentError):
        divide(ledger, T(cfg, "w[1.1]*w[1.1]^bar"), 0b10)


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_full_division_matches_descent_target(g):
    cfg = cfg_of(g)
    ledger = close_ledger(cfg)
    for t in sorted(ledger.algebraic_types):
        d = descent_data(t)
        assert divide(ledger.copy(), t, d.K) == d.reduced == descend(ledger.copy(), t)


def test_divide_then_remultiply_realizes_the_type():
    cfg = cfg_of(3)
    ledger = close_ledger(cfg)
    t = T(cfg, "w[1.1]*w[1.2]*w[1.3]*w[1.1]^bar*w[1.2]^bar*w[1.3]^bar")
    out = divide(ledger, t, 0b011)
    assert out == T(cfg, "w[1.3]*w[1.3]^bar")
    x = ledger.realize(out)
    assert set(x.terms) == {out.mask(3)}


# --- ledger closure --------------------------------------------------------------


def test_close_ledger_g1():
    cfg = cfg_of(1)
    assert close_ledger(cfg).algebraic_types == {CycleType(0, 0), CycleType(1, 1)}


@pytest.mark.parametrize("genera", [(1,), (2,), (3,), (4,), (1, 1), (1, 2), (2, 2)])
def test_closed_ledger_is_exactly_the_lefschetz_products(genera):
    cfg = cfg_of(*genera)
    ledger = close_ledger(cfg)
    assert ledger.algebraic_types == {CycleType(K, K) for K in range(1 << cfg.g)}
    for t in ledger.algebraic_types:
        assert conjugate_type(t) in ledger


@pytest.mark.parametrize("genera", [(1,), (2,), (3,), (1, 2)])
def test_ledger_soundness(genera):
    cfg = cfg_of(*genera)
    ledger = close_ledger(cfg)
    for t in ledger.algebraic_types:
        assert t.weight % 2 == 0
        x = ledger.realize(t)
        assert x and set(x.terms) == {t.mask(cfg.g)}
        assert leaves(ledger, t) <= {CycleType(0, 0)} | {CycleType(1 << s, 1 << s) for s in range(cfg.g)}


def test_ledger_rejects_missing_premises():
    cfg = cfg_of(2)
    ledger = close_ledger(cfg)
    with pytest.raises(DescentError):
        ledger.add(T(cfg, "w[1.1]*w[1.2]^bar"), Derivation("product", (T(cfg, "w[1.1]"), T(cfg, "w[1.2]^bar"))))


def test_unknown_rule_rejected():
    with pytest.raises(ValueError):
        Derivation("magic")


# --- certificate -------------------------------------------------------------------


def rec_for(cert, cfg, text):
    (rec,) = [r for r in cert.records if r.type == T(cfg, text)]
    return rec


def test_certificate_g1_lefschetz_record():
    cfg = cfg_of(1)
    cert = certify_theorem(cfg)
    assert len(cert.records) == 4 and cert.verdict is True
    rec = rec_for(cert, cfg, "w[1.1]*w[1.1]^bar")
    assert rec.data.K == 1 and rec.partner == CycleType(0, 0) and rec.H == 0
    assert rec.trace == top_trace(Element.monomial((1,), 0b11)) == 1


def test_certificate_g2_primitive_record():
    cfg = cfg_of(2)
    cert = certify_theorem(cfg)
    rec = rec_for(cert, cfg, "w[1.1]*w[1.2]^bar")
    assert rec.data.K == 0 and rec.H == 0
    assert rec.partner == T(cfg, "w[1.2]*w[1.1]^bar")
    # w_s1 w_cs2 ^ w_s2 w_cs1, canonical order s1 s2 cs1 cs2
    sign = wedge_sign([(1, 1, False), (1, 2, True)], [(1, 2, False), (1, 1, True)])
    assert rec.trace == sign != 0


def test_certificate_product_config_covers_16_types():
    cfg = cfg_of(1, 1)
    cert = certify_theorem(cfg)
    assert len(cert.records) == 16
    assert {r.type for r in cert.records} == set(all_types(cfg))
    assert cert.verdict is True


@pytest.mark.parametrize("genera", [(1,), (2,), (3,), (4,), (1, 1), (1, 2), (1, 1, 1), (2, 2), (1, 3)])
def test_witness_nonvanishing(genera):
    cfg = cfg_of(*genera)
    cert = certify_theorem(cfg)
    assert all(r.trace != 0 for r in cert.records)
    for r in cert.records:
        if r.type.weight % 2 == 0:
            assert r.mu != 0


def test_witness_nonvanishing_with_general_zeta():
    cfg = cfg_of(3)
    lc = LefschetzClass.from_zeta(cfg, EigenvalueTuple.skew(cfg, [3, -2, Fraction(1, 5)]))
    cert = certify_theorem(cfg, lc)
    assert cert.verdict is True


def test_recorded_mu_relates_type_to_descended_class():
    cfg = cfg_of(3)
    lc = LefschetzClass.standard(cfg)
    cert = certify_theorem(cfg, lc)
    for r in cert.records:
        lhs = Element.monomial(cfg.factor_genera, r.type.mask(3))
        assert lhs == wedge(lefschetz_product(lc, r.data.K), r.descended).scale(r.mu)


def test_certificate_derivations_bottom_out():
    cfg = cfg_of(2)
    cert = certify_theorem(cfg)
    base = {CycleType(0, 0)} | {CycleType(1 << s, 1 << s) for s in range(2)}
    for r in cert.records:
        seen = set()
        for t, d in r.derivation:
            for p in d.premises:
                assert p in seen
            if not d.premises:
                assert t in base or (d.rule == "hypothesis" and t == r.type)
            seen.add(t)
        assert r.type in seen


def test_degenerate_zeta_withholds_verdict():
    cfg = cfg_of(2)
    lc = LefschetzClass.from_zeta(cfg, EigenvalueTuple.skew(cfg, [1, 0]))
    cert = certify_theorem(cfg, lc)
    assert cert.verdict is None and cert.records == ()
    assert "withheld" in cert.diagnostic


def test_certificate_json_shape():
    cfg = cfg_of(2)
    doc = json.loads(certify_theorem(cfg).dumps())
    assert doc["config"] == {"factors": [2], "zeta": {"w[1.1]": "1/1", "w[1.2]": "1/1"}}
    assert doc["axioms"] == ["1", "w[1.1]*w[1.1]^bar", "w[1.2]*w[1.2]^bar"]
    assert doc["verdict"] is True
    first = doc["records"][0]
    assert first["type"] == "1" and first["trace"] != "0/1"
    assert set(first) >= {"type", "K", "I0", "J0", "partner", "H", "trace", "derivation"}


def test_certificate_is_deterministic():
    cfg = cfg_of(1, 2)
    assert certify_theorem(cfg).dumps() == certify_theorem(cfg).dumps()


# --- model-level theorem and projectors ----------------------------------------


@pytest.mark.parametrize("g", [1, 2, 3])
def test_model_level_theorem_random(g):
    cfg = cfg_of(g)
    masks = {}
    for t in close_ledger(cfg).algebraic_types:
        masks.setdefault(t.weight, []).append(t.mask(g))
    rng = random.Random(f"model:{g}")
    for _ in range(100):
        d = rng.choice(sorted(masks))
        a = Element(cfg.factor_genera, {m: rng.randint(-2, 2) for m in masks[d]})
        assert numerically_trivial(a, d) == (not a)


@settings(max_examples=40)
@given(st.dictionaries(st.integers(0, 63), st.integers(-3, 3), max_size=8))
def test_projector_compatibility(terms):
    cfg = cfg_of(3)
    a = Element(cfg.factor_genera, terms)
    total = Element.zero(cfg.factor_genera)
    for t in all_types(cfg):
        p = project(a, t)
        assert p == Element(cfg.factor_genera, {t.mask(3): a.coefficient(t.mask(3))})
        total = total + p
    assert total == a
