import random

import pytest
from hypothesis import given, settings, strategies as st

from algdiag.errors import VariableCountMismatch, ZeroPolynomial
from algdiag.ff import Field
from algdiag.poly import (
    MultiPoly,
    degree_profile,
    derivative_y,
    is_separable_in_y,
    lambda_extract,
    poly_pow,
    term_order_key,
)
from algdiag.series import TruncatedSeries, eval_poly_at_series
from conftest import F4, F9

F2, F3, F5 = Field(2), Field(3), Field(5)


def P(F, n, terms):
    return MultiPoly.from_coeffs(F, n, terms)


def naive_mul(F, a, b):
    # schoolbook over the integer codes, reducing with the field's own add/mul
    out = {}
    for ea, ca in a.terms.items():
        for eb, cb in b.terms.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = F.add(out.get(e, 0), F.mul(ca, cb))
    return MultiPoly(F, a.n, out)


def poly_strategy(F, n, max_terms=5, max_exp=3):
    exps = st.tuples(*[st.integers(0, max_exp)] * (n + 1))
    return st.dictionaries(exps, st.integers(0, F.q - 1), max_size=max_terms).map(
        lambda d: MultiPoly(F, n, d)
    )


def test_small_products():
    y = MultiPoly.var(F5, 1, 1)
    t = MultiPoly.var(F5, 1, 0)
    assert y * y == P(F5, 1, {(0, 2): 1})
    assert (t + y) * (t - y) == P(F5, 1, {(2, 0): 1, (0, 2): -1})
    assert (t + y) + (-(t + y)) == MultiPoly(F5, 1)
    assert (t + y) - (t + y) == MultiPoly(F5, 1)


def test_powers():
    one_t = P(F2, 1, {(0, 0): 1, (1, 0): 1})
    assert poly_pow(one_t, 2) == P(F2, 1, {(0, 0): 1, (2, 0): 1})
    E = P(F3, 1, {(0, 1): 1, (1, 0): -1})
    assert poly_pow(E, 2) == P(F3, 1, {(0, 2): 1, (1, 1): 1, (2, 0): 1})
    assert poly_pow(E, 0) == MultiPoly.constant(F3, 1)


@pytest.mark.parametrize("F", [F2, F3, F4, F9], ids=repr)
def test_pow_matches_repeated_products(F):
    rng = random.Random(F.q)
    for _ in range(10):
        a = MultiPoly(F, 2, {(rng.randint(0, 2), rng.randint(0, 2), rng.randint(0, 2)): rng.randrange(1, F.q)
                             for _ in range(3)})
        acc = MultiPoly.constant(F, 2)
        for k in range(1, 2 * F.p + 2):
            acc = naive_mul(F, acc, a)
            assert poly_pow(a, k) == acc


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_ring_axioms(data):
    F = data.draw(st.sampled_from([F2, F3, F4, F9]))
    a, b, c = (data.draw(poly_strategy(F, 2)) for _ in range(3))
    assert a * b == b * a == naive_mul(F, a, b)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) - b == a


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_freshman_dream(data):
    F = data.draw(st.sampled_from([F2, F3, F4, F9]))
    a = data.draw(poly_strategy(F, 1))
    acc = MultiPoly.constant(F, 1)
    for _ in range(F.p):
        acc = naive_mul(F, acc, a)
    assert acc == a.frobenius_twist()


def test_derivative_y():
    assert derivative_y(P(F3, 1, {(0, 3): 1})).is_zero()
    E = P(F3, 1, {(1, 2): 1, (0, 1): -1, (0, 0): 1})
    assert derivative_y(E) == P(F3, 1, {(1, 1): 2, (0, 0): -1})
    pas = P(F5, 2, {(0, 0, 1): 1, (1, 0, 1): -1, (0, 1, 1): -1, (0, 0, 0): -1})
    assert derivative_y(pas) == P(F5, 2, {(0, 0, 0): 1, (1, 0, 0): -1, (0, 1, 0): -1})


def test_separability():
    assert not is_separable_in_y(P(F2, 1, {(0, 2): 1, (1, 0): 1}))
    assert is_separable_in_y(P(F3, 1, {(1, 2): 1, (0, 1): -1, (0, 0): 1}))
    assert not is_separable_in_y(P(F5, 1, {(0, 5): 1, (1, 0): -1}))
    with pytest.raises(ZeroPolynomial):
        is_separable_in_y(MultiPoly(F5, 1))


def test_lambda_extract_examples():
    U = P(F3, 1, {(4, 5): 1, (2, 2): 2, (1, 2): 1})
    assert lambda_extract(U, (1,), 2) == P(F3, 1, {(1, 1): 1, (0, 0): 1})
    one = MultiPoly.constant(F3, 2)
    assert lambda_extract(one, (0, 0), 0) == one
    assert lambda_extract(one, (1, 0), 0).is_zero()
    assert lambda_extract(one, (0, 0), 2).is_zero()


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_lambda_inverts_frobenius_twist(data):
    F = data.draw(st.sampled_from([F2, F3, F4, F9]))
    V = data.draw(poly_strategy(F, 2))
    assert lambda_extract(V.frobenius_twist(), (0, 0), 0) == V


def test_lambda_is_semilinear():
    rng = random.Random(3)
    F = F9
    for _ in range(20):
        U = MultiPoly(F, 1, {(rng.randint(0, 6), rng.randint(0, 6)): rng.randrange(1, 9) for _ in range(6)})
        c = rng.randrange(1, 9)
        lhs = lambda_extract(U.scale(F.frob(c)), (1,), 2)
        assert lhs == lambda_extract(U, (1,), 2).scale(c)


def test_degree_profile():
    pas = P(F5, 2, {(0, 0, 1): 1, (1, 0, 1): -1, (0, 1, 1): -1, (0, 0, 0): -1})
    dp = degree_profile(pas)
    assert (dp.d, dp.h, dp.hvec) == (1, 1, (1, 1))
    cat = P(F3, 2, {(1, 1, 2): 1, (0, 0, 1): -1, (0, 0, 0): 1})
    dp = degree_profile(cat)
    assert (dp.d, dp.h, dp.hvec) == (2, 2, (1, 1))
    dp = degree_profile(MultiPoly.constant(F3, 2))
    assert (dp.d, dp.h, dp.hvec) == (0, 0, (0, 0))


def test_term_order_and_repr():
    A = P(F3, 1, {(0, 0): 1, (1, 0): 2, (0, 1): 1, (2, 1): 1})
    assert A.support() == sorted(A.support(), key=term_order_key)
    assert [sum(e) for e in A.support()] == [0, 1, 1, 3]
    assert repr(A) == "1 + y + 2*t1 + t1^2*y"


def test_mismatched_variable_count():
    with pytest.raises(VariableCountMismatch):
        MultiPoly.var(F3, 1, 0) + MultiPoly.var(F3, 2, 0)


def test_eval_at_series():
    f = TruncatedSeries.from_terms(F3, 1, 6, {(0,): 1, (1,): 1})
    assert eval_poly_at_series(MultiPoly.var(F3, 1, 1), f) == f
    # f = t + t^2 + t^4 solves y^2 + y + t = 0 over F_2 to precision 8
    g = TruncatedSeries.from_terms(F2, 1, 8, {(1,): 1, (2,): 1, (4,): 1})
    E = P(F2, 1, {(0, 2): 1, (0, 1): 1, (1, 0): 1})
    assert eval_poly_at_series(E, g).is_zero()


def test_hashable_and_cached():
    a = P(F3, 1, {(1, 1): 1})
    b = P(F3, 1, {(1, 1): 4})
    assert a == b and hash(a) == hash(b) and len({a, b}) == 1
