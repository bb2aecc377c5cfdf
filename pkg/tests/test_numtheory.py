from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from modbeta.numtheory import (
    PrimeContext,
    alpha_order,
    bernoulli,
    clausen_von_staudt_check,
    is_prime,
    is_topological_generator,
    nu_p,
    prime_factors,
    sigma,
    sigma_table,
    topological_generators,
)


@pytest.mark.parametrize("m, value", [(0, Fraction(1)), (4, Fraction(-1, 30)), (12, Fraction(-691, 2730))])
def test_bernoulli_examples(m, value):
    assert bernoulli(m) == value


def test_bernoulli_matches_sympy_for_even_indices():
    for m in range(0, 101, 2):
        b = sympy.bernoulli(m)
        assert bernoulli(m) == Fraction(int(b.p), int(b.q))


def test_odd_bernoulli_vanish_beyond_one():
    assert all(bernoulli(m) == 0 for m in range(3, 40, 2))


@pytest.mark.parametrize("x, p, v", [(120, 5, 1), (Fraction(-1, 30), 5, -1), (1, 7, 0), (7**5 * 3, 7, 5)])
def test_nu_p_examples(x, p, v):
    assert nu_p(x, p) == v


def test_nu_p_of_zero_is_infinite():
    assert nu_p(0, 5) == float("inf")


@given(st.integers(1, 10**12), st.sampled_from([2, 3, 5, 7, 11, 13]))
def test_nu_p_matches_sympy_multiplicity(n, p):
    assert nu_p(n, p) == sympy.multiplicity(p, n)


@given(st.integers(1, 10**6), st.integers(1, 10**6), st.sampled_from([5, 7]))
def test_nu_p_of_ratio_is_difference(a, b, p):
    assert nu_p(Fraction(a, b), p) == nu_p(a, p) - nu_p(b, p)


@pytest.mark.parametrize("k, n, value", [(3, 1, 1), (3, 2, 9), (1, 6, 12)])
def test_sigma_examples(k, n, value):
    assert sigma(k, n) == value


def test_sigma_table_matches_sympy():
    for k in (0, 1, 3, 5, 11):
        table = sigma_table(k, 60)
        assert table[1:] == [int(sympy.divisor_sigma(n, k)) for n in range(1, 61)]


@given(st.integers(-5, 10**5))
def test_is_prime_matches_sympy(n):
    assert is_prime(n) == (n > 1 and sympy.isprime(n))


@given(st.integers(2, 10**6))
def test_prime_factors_multiply_back(n):
    fs = prime_factors(n)
    assert all(is_prime(q) for q in fs)
    assert sorted(set(fs)) == sorted(sympy.factorint(n))


@pytest.mark.parametrize("k, primes", [(4, (2, 3, 5)), (12, (2, 3, 5, 7, 13)), (2, (2, 3))])
def test_clausen_von_staudt_examples(k, primes):
    rep = clausen_von_staudt_check(k)
    assert rep.primes == primes and rep.passed


def test_clausen_von_staudt_rejects_odd_weight():
    with pytest.raises(ValueError):
        clausen_von_staudt_check(5)


@pytest.mark.parametrize("t, p, order", [(4, 5, 5), (20, 5, 25), (8, 5, 5), (6, 7, 7), (42, 7, 49), (100, 5, 125)])
def test_alpha_order_examples(t, p, order):
    assert alpha_order(t, p) == order


def test_alpha_order_requires_divisibility():
    with pytest.raises(ValueError):
        alpha_order(6, 5)


def test_topological_generators_among_supported_levels():
    assert topological_generators(5, (2, 3, 5, 7, 13)) == [2, 3, 13]
    assert topological_generators(7, (2, 3, 5, 7, 13), 2) == [3, 5]


def test_topological_generator_needs_unit_valuation():
    # 7 is a primitive root mod 5, but 7^4 - 1 = 2400 is divisible by 25
    assert not is_topological_generator(7, 5)
    assert is_topological_generator(2, 5)


def test_prime_context_validates():
    ctx = PrimeContext(5, 2, (3,))
    assert ctx.ells == (2, 3)
    assert ctx.with_ell(3).ells == (3, 2)
    with pytest.raises(ValueError):
        PrimeContext(3, 2)
    with pytest.raises(ValueError):
        PrimeContext(5, 7)
