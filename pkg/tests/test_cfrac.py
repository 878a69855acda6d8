from __future__ import annotations

from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from milnor_boundary.cfrac import ncf_convergents, ncf_eval, ncf_expand, validate_ncf


def _value(terms):
    """Evaluate ``k_1 - 1/(k_2 - ...)`` directly with fractions."""
    x = None
    for k in reversed(terms):
        x = Fraction(k) if x is None else k - 1 / x
    return x


@pytest.mark.parametrize(
    "a, b, want",
    [
        (17, 15, (2, 2, 2, 2, 2, 2, 2, 3)),
        (1, 30, (1,) + (2,) * 29),
        (9, 1, (9,)),
        (-4, 1, (-4,)),
        (7, 5, (2, 2, 3)),
    ],
)
def test_expand_examples(a, b, want):
    got = ncf_expand(a, b)
    assert got == want
    assert _value(got) == Fraction(a, b)


@pytest.mark.parametrize("a, b", [(4, 2), (3, 0), (3, -2), (0, 2)])
def test_expand_rejects(a, b):
    with pytest.raises(ValueError):
        ncf_expand(a, b)


def test_convergent_examples():
    empty = ncf_convergents([])
    assert (empty.mu, empty.mu_tilde) == ((0, 1), (-1, 0))
    c = ncf_convergents([2, 2, 3])
    assert c.mu == (0, 1, 2, 3, 7)
    assert c.mu_tilde == (-1, 0, 1, 2, 5)
    long = ncf_convergents([2] * 7 + [3])
    assert (long.mu[-1], long.mu_tilde[-1]) == (17, 15)


def test_eval_examples():
    assert ncf_eval([3]) == (3, 1)
    assert ncf_eval([2, 2, 3]) == (7, 5)
    assert ncf_eval([2] * 7 + [3]) == (17, 15)
    assert ncf_eval([]) == (1, 0)


def test_invalid_tail():
    with pytest.raises(ValueError, match="k_3"):
        validate_ncf([5, 2, 1])
    with pytest.raises(ValueError):
        ncf_eval([1, 1])


def test_first_term_unrestricted():
    assert validate_ncf([-3, 2]) == (-3, 2)


coprime = st.tuples(st.integers(-50, 50), st.integers(1, 50)).filter(lambda p: gcd(abs(p[0]), p[1]) == 1)


@given(coprime)
def test_round_trip_and_sign_laws(pair):
    a, b = pair
    terms = ncf_expand(a, b)
    assert ncf_eval(terms) == (a, b)
    validate_ncf(terms)
    assert (terms[0] >= 2) == (a > b)
    assert (terms[0] > 0) == (a > 0)


@given(coprime)
def test_determinant_identity(pair):
    conv = ncf_convergents(ncf_expand(*pair))
    assert conv.determinants() == [1] * (len(conv) - 1)
    assert conv.mu[:2] == (0, 1) and conv.mu_tilde[:2] == (-1, 0)


@given(st.integers(1, 200), st.integers(1, 200))
def test_convergents_positive(a, b):
    if gcd(a, b) != 1:
        return
    conv = ncf_convergents(ncf_expand(a, b))
    assert all(x > 0 for x in conv.mu[2:])
    assert all(x > 0 for x in conv.mu_tilde[2:])


@given(st.integers(-5, 5), st.lists(st.integers(2, 5), max_size=7))
def test_uniqueness(k1, tail):
    terms = (k1, *tail)
    a, b = ncf_eval(terms)
    if b <= 0:
        return
    assert gcd(abs(a), b) == 1
    assert ncf_expand(a, b) == terms
