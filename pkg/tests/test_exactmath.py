import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sfl.exactmath import (
    INFINITY,
    ZERO,
    DomainError,
    Slope,
    cf_eval,
    cf_expand,
    farey_sum,
    format_rational,
    has_edge,
    i_invariant,
    mod_inverse,
    parse_rational,
)


@pytest.mark.parametrize("text,value", [("4/3", Fraction(4, 3)), ("-1/3", Fraction(-1, 3)), ("7", Fraction(7)),
                                        (" 2 / 6 ", Fraction(1, 3))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["0.5", "1/0", "", "a/b", "1/2/3"])
def test_parse_rational_rejects(text):
    with pytest.raises(DomainError):
        parse_rational(text)


def test_format_rational():
    assert format_rational(Fraction(-1)) == "-1/1"
    assert format_rational(Fraction(22, 9)) == "22/9"


@pytest.mark.parametrize("x,cf", [(Fraction(4), [4]), (Fraction(11, 3), [4, 3]), (Fraction(3, 2), [2, 2]),
                                  (Fraction(9, 5), [2, 5]), (Fraction(8, 3), [3, 3])])
def test_cf_examples(x, cf):
    assert cf_expand(x) == cf
    assert cf_eval(cf) == x


@pytest.mark.parametrize("k", range(0, 8))
def test_cf_all_twos(k):
    assert cf_eval([2] * (k + 1)) == Fraction(k + 2, k + 1)
    assert cf_expand(Fraction(k + 2, k + 1)) == [2] * (k + 1)


def test_cf_domain():
    with pytest.raises(DomainError):
        cf_expand(1)
    with pytest.raises(DomainError):
        cf_expand(Fraction(1, 2))
    assert cf_expand(Fraction(1, 2), allow_head_one=True) == [1, 2]
    assert cf_expand(1, allow_head_one=True) == [1]
    with pytest.raises(DomainError):
        cf_eval([2, 1, 1])


@given(st.integers(1, 500), st.integers(1, 2000))
def test_cf_round_trip(q, p):
    x = Fraction(q + p, q)
    cf = cf_expand(x)
    assert all(a >= 2 for a in cf)
    assert cf_eval(cf) == x


@given(st.integers(1, 300), st.integers(1, 300))
def test_cf_head_one_round_trip(p, q):
    x = Fraction(p, q)
    cf = cf_expand(x, allow_head_one=True)
    assert cf[0] >= 1 and all(a >= 2 for a in cf[1:])
    assert cf_eval(cf) == x


@pytest.mark.parametrize("x,i", [(Fraction(4), 1), (Fraction(8, 3), 0), (Fraction(3, 2), -2)])
def test_i_invariant(x, i):
    assert i_invariant(x) == i


@given(st.integers(2, 400), st.integers(1, 399))
def test_i_invariant_dual(p, q):
    # the expansions of p/q and p/q* have the same I value
    if q >= p or math.gcd(p, q) != 1:
        return
    assert i_invariant(Fraction(p, q)) == i_invariant(Fraction(p, mod_inverse(q, p)))


@pytest.mark.parametrize("q,p,inv", [(1, 5, 1), (3, 8, 3), (2, 9, 5)])
def test_mod_inverse(q, p, inv):
    assert mod_inverse(q, p) == inv


@given(st.integers(2, 500), st.integers(1, 499))
def test_mod_inverse_involution(p, q):
    if q >= p or math.gcd(p, q) != 1:
        return
    qs = mod_inverse(q, p)
    assert (q * qs) % p == 1 and mod_inverse(qs, p) == q


def test_mod_inverse_needs_coprime():
    with pytest.raises(DomainError):
        mod_inverse(2, 4)


def test_slopes():
    assert str(INFINITY) == "inf"
    assert Slope.parse("1/0") == INFINITY == Slope(-1, 0)
    assert Slope(2, -4) == Slope(-1, 2)
    assert farey_sum(ZERO, INFINITY) == Slope(1, 1)
    assert farey_sum(Slope(1, 2), Slope(1, 3)) == Slope(2, 5)
    assert farey_sum(Slope(-1, 1), Slope(-2, 1)) == Slope(-3, 2)
    assert has_edge(ZERO, INFINITY)
    assert has_edge(Slope(1, 2), Slope(2, 5))
    assert not has_edge(Slope(1, 2), Slope(1, 4))


@given(st.integers(-50, 50), st.integers(1, 50), st.integers(-50, 50), st.integers(1, 50))
def test_mediant_is_adjacent(b, a, d, c):
    s, t = Slope(b, a), Slope(d, c)
    if not has_edge(s, t):
        return
    m = farey_sum(s, t)
    assert has_edge(s, m) and has_edge(m, t)
