import json
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modbeta.chromatic import (
    BetaIndexed,
    MRWIndex,
    PowerOfPException,
    Rejected,
    alpha_group,
    alpha_infinity,
    beta_group,
    beta_search,
    certificate_from_json,
    certificate_to_json,
    check_conditions,
    coface_d0,
    coface_d1,
    converse_check,
    mrw_admissible,
    mrw_enumerate,
    precision_for,
    rigidity_check,
    verify_certificate,
)
from modbeta.errors import NotFound
from modbeta.level1 import ModularForm, delta, eisenstein
from modbeta.numtheory import PrimeContext
from modbeta.qseries import QExpansion, ZZ, Zmod, reduce_mod, verschiebung

P5 = PrimeContext(5, 2, (3,))
P7 = PrimeContext(7, 3, (5,))


def unit_multiple(a: QExpansion, b: QExpansion, p: int, k: int = 1) -> bool:
    m = p**k
    n = min(a.precision, b.precision)
    return any(all((u * a[i] - b[i]) % m == 0 for i in range(n)) for u in range(1, m) if u % p)


@pytest.fixture(scope="module")
def beta1():
    return beta_search(MRWIndex(5, 1, 1, 1), P5)


# -- cofaces ---------------------------------------------------------------------------


def test_coface_d0_on_constants():
    one = ModularForm(0, QExpansion.constant(1, 6))
    up, down = coface_d0(one, 2)
    assert up.qexp == verschiebung(one.qexp, 2) and down.qexp == one.qexp
    assert up.qexp[0] == down.qexp[0] == 1


def test_coface_d0_on_delta():
    d = ModularForm(12, delta(8).qexp)
    up, down = coface_d0(d, 2)
    assert [up.qexp[n] for n in range(6)] == [0, 0, 4096, 0, 4096 * -24, 0]
    assert [down.qexp[n] for n in range(4)] == [0, 4096, 4096 * -24, 4096 * 252]
    assert up.level == 2


def test_coface_d1_examples():
    e4 = eisenstein(4, 6)
    a, b = coface_d1(e4, 3)
    assert a.qexp == e4.qexp == b.qexp and a.level == 3
    zero = ModularForm(4, QExpansion.zero(5))
    assert all(x.qexp.is_zero() for x in coface_d1(zero, 2))


def test_cofaces_agree_in_weight_zero():
    c = ModularForm(0, QExpansion.constant(7, 6))
    assert coface_d0(c, 3)[1].qexp == coface_d1(c, 3)[1].qexp


@given(st.lists(st.integers(-99, 99), min_size=4, max_size=4), st.lists(st.integers(-99, 99), min_size=4, max_size=4))
@settings(max_examples=30, deadline=None)
def test_cofaces_are_additive(a, b):
    f = ModularForm(8, QExpansion(a, 0, 4, ZZ))
    g = ModularForm(8, QExpansion(b, 0, 4, ZZ))
    fg = ModularForm(8, f.qexp + g.qexp)
    for d in (coface_d0, coface_d1):
        for x, y, z in zip(d(f, 2), d(g, 2), d(fg, 2)):
            assert (x.qexp + y.qexp) == z.qexp


# -- alpha -------------------------------------------------------------------------------


def test_alpha_examples():
    a = alpha_group(4, 1, P5, 2)
    assert a.order == 5 and unit_multiple(a.generator.qexp, reduce_mod(eisenstein(4, 10).qexp, 5, 1), 5)
    a = alpha_group(20, 2, P5, 2)
    assert a.order == 25
    assert unit_multiple(a.generator.qexp, reduce_mod(eisenstein(20, 10).qexp, 5, 2), 5, 2)
    for j in (1, 2, 3):
        assert alpha_group(6, j, P5, 2).is_trivial


def test_alpha_infinity_weight_zero_is_symbolic():
    assert alpha_infinity(0, P5).order == float("inf")


@pytest.mark.parametrize("t, order", [(4, 5), (20, 25), (40, 25), (100, 125)])
def test_alpha_infinity_orders(t, order):
    assert alpha_infinity(t, P5).order == order


# -- MRW indices ---------------------------------------------------------------------------


def test_mrw_examples():
    assert [j for j in range(1, 10) if mrw_admissible(5, 5, j, 1)] == [1, 2, 3, 4, 5]
    assert [(j, k) for j in range(1, 10) for k in (1, 2, 3) if mrw_admissible(5, 1, j, k)] == [(1, 1)]
    assert not any(mrw_admissible(5, 5, j, 2) for j in range(1, 30))


def test_mrw_enumerate_degrees():
    idx = mrw_enumerate(5, 300)
    tuples = {(x.i, x.j, x.k): x.degree for x in idx}
    assert tuples[(1, 1, 1)] == 40 and tuples[(2, 1, 1)] == 88
    assert all(x.degree <= 300 for x in idx)
    assert idx == sorted(idx, key=lambda x: (x.i, x.j, x.k))


def test_mrw_k2_appears_at_p_squared():
    idx = {(x.i, x.j, x.k) for x in mrw_enumerate(5, 2 * 25 * 24)}
    assert (25, 5, 2) in idx
    assert not any(k == 2 and i < 25 for i, j, k in idx)


# -- beta groups ------------------------------------------------------------------------------


def test_beta_group_contains_delta_squared():
    g = beta_group(20, 1, 1, P5, 2)
    assert g.orders == [5]
    d2 = reduce_mod(delta(g.precision).qexp ** 2, 5, 1)
    assert unit_multiple(g.forms[0].qexp, d2, 5)


@pytest.mark.parametrize("t", [2, 6, 10, 14, 18, 22, 26, 30, 34, 38])
def test_beta_group_vanishes_off_multiples_of_four(t):
    for j in (1, 2, 3):
        assert beta_group(t, j, 1, P5, 2).orders == []


def test_beta_group_rejects_small_weight():
    with pytest.raises(ValueError):
        beta_group(-4, 1, 1, P5, 2)


def test_beta_group_rejects_j_not_divisible():
    with pytest.raises(ValueError):
        beta_group(40, 3, 2, P5, 2)


@pytest.mark.parametrize("t, j, k", [(20, 1, 1), (44, 4, 1), (92, 5, 1), (116, 4, 1), (16, 2, 1)])
def test_beta_group_is_independent_of_ell(t, j, k):
    assert beta_group(t, j, k, P5, 2).orders == beta_group(t, j, k, P5, 3).orders


# -- certificates ------------------------------------------------------------------------------


def test_beta1_certificate(beta1):
    f = beta1.f.qexp
    assert f.ord_q() == 2 and 12 * 2 > 20
    d2 = reduce_mod(delta(f.precision).qexp ** 2, 5, 1)
    assert unit_multiple(f, d2, 5)


def test_certificate_in_weight_120():
    cert = beta_search(MRWIndex(5, 5, 5, 1), P5)
    assert cert.weight == 120
    assert 12 * cert.f.qexp.ord_q() > 120 - 20


def test_inadmissible_index_has_no_certificate():
    with pytest.raises(NotFound):
        beta_search(MRWIndex(5, 1, 2, 1), P5)


def test_verify_examples(beta1):
    assert verify_certificate(beta1, 2).passed
    assert verify_certificate(beta1, 3).passed


def test_multiple_of_p_fails_condition_one(beta1):
    bad = replace(
        beta1,
        coordinates=[5 * c for c in beta1.coordinates],
        f=ModularForm(beta1.weight, beta1.f.qexp.scale(5)),
        verified_levels=[],
    )
    rep = verify_certificate(bad, 2)
    assert not rep.passed and rep.failed == 1


def test_json_round_trip_reverifies(beta1):
    text = certificate_to_json(beta1)
    again = certificate_from_json(text)
    assert certificate_to_json(again) == text
    assert verify_certificate(again, 2).passed
    doc = json.loads(text)
    assert list(doc) == sorted(doc)


def test_corrupted_witness_names_condition(beta1):
    doc = json.loads(certificate_to_json(beta1))
    doc["witnesses"]["2"]["ord_q"] = "3"
    rep = rigidity_check(certificate_from_json(json.dumps(doc)), [2, 3])
    assert not rep.passed
    assert {(r.ell, r.failed) for r in rep.violations} == {(2, 2), (3, 2)}


def test_corrupted_membership_witness(beta1):
    doc = json.loads(certificate_to_json(beta1))
    coords = doc["witnesses"]["4"]["2"]["coordinates"]
    if coords:
        coords[0] = str((int(coords[0]) + 1) % 5)
    else:
        doc["witnesses"]["4"]["2"]["coordinates"] = ["1"]
    rep = verify_certificate(certificate_from_json(json.dumps(doc)), 2)
    assert not rep.passed and rep.failed == 4


def test_rigidity_at_p7():
    cert = beta_search(MRWIndex(7, 1, 1, 1), P7)
    assert rigidity_check(cert, [3, 5]).passed


# -- converse ---------------------------------------------------------------------------------


def test_converse_on_delta_squared():
    N = precision_for(24, 2)
    f = ModularForm(24, reduce_mod(delta(N).qexp ** 2, 5, 1))
    assert converse_check(f, 1, 1, P5) == BetaIndexed(1, 1, 1)


def test_converse_rejects_eisenstein():
    N = precision_for(24, 2)
    f = ModularForm(24, reduce_mod(eisenstein(24, N).qexp, 5, 1))
    res = converse_check(f, 1, 1, P5)
    assert isinstance(res, Rejected) and res.condition == 2


def test_converse_rejects_multiples_of_p():
    N = precision_for(24, 2)
    f = ModularForm(24, reduce_mod(delta(N).qexp ** 2, 5, 2).scale(5))
    res = converse_check(f, 1, 1, P5)
    assert isinstance(res, Rejected) and res.condition == 1


def test_converse_rejects_weight_drop():
    # E4 Delta^2 is Delta^2 mod 5 in a higher weight
    N = precision_for(28, 2)
    f = ModularForm(28, reduce_mod(eisenstein(4, N).qexp * delta(N).qexp ** 2, 5, 1))
    res = converse_check(f, 2, 1, P5)
    assert isinstance(res, Rejected) and res.condition == 3


def test_converse_power_of_p_exception():
    cert = beta_search(MRWIndex(5, 5, 1, 1), P5)
    assert converse_check(cert.f, 1, 1, P5) == PowerOfPException(5)


def test_converse_needs_divisible_weight():
    with pytest.raises(ValueError):
        converse_check(ModularForm(26, QExpansion.zero(40, Zmod(25))), 1, 2, P5)


def test_conditions_report_witnesses(beta1):
    res = check_conditions(beta1.f, 1, 1, 5, 3)
    assert res.passed and set(res.witnesses) == {"1", "2", "3", "4"}
