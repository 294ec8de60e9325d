from fractions import Fraction
from itertools import permutations
from math import factorial

import pytest
from hypothesis import given, strategies as st

import oracles
from conftest import forms, linear_maps, vectors
from lefschetz.exterior import (
    DimensionError,
    Form,
    LinearMap,
    Vector,
    basis,
    blocked_sign,
    dimension,
    drop_coordinates,
    dx,
    dy,
    e,
    e_prime,
    evaluate,
    form_power,
    interior_product,
    interleaved_sign,
    omega_power_closed_form,
    pullback,
    sort_sign,
    standard_symplectic_form,
    wedge,
)


def terms(a):
    return dict(a.terms)


def as_lists(vs):
    return [list(v.coords) for v in vs]


# construction and normalisation


def test_sort_sign():
    assert sort_sign([2, 1]) == (-1, (1, 2))
    assert sort_sign([3, 1, 2]) == (1, (1, 2, 3))
    assert sort_sign([1, 1]) == (0, ())


def test_monomial_normalises_sign():
    assert Form.monomial(2, [3, 1]) == Form(2, 2, {(1, 3): -1})
    assert Form.monomial(2, [1, 1]).is_zero()


def test_form_rejects_bad_terms():
    with pytest.raises(ValueError):
        Form(2, 2, {(3, 1): 1})
    with pytest.raises(ValueError):
        Form(2, 2, {(1, 5): 1})
    with pytest.raises(ValueError):
        Form(2, 2, {(1,): 1})
    with pytest.raises(TypeError):
        Form(2, 1, {(1,): 0.5})


def test_zero_coefficients_dropped():
    assert Form(2, 1, {(1,): 0, (2,): 3}).terms == {(2,): Fraction(3)}


def test_mismatched_operands():
    with pytest.raises(DimensionError):
        dx(2, 1) + dx(3, 1)
    with pytest.raises(DimensionError):
        dx(2, 1) + (dx(2, 1) ^ dy(2, 1))


def test_basis_order_and_dimension():
    assert basis(1, 1) == [(1,), (2,)]
    assert basis(2, 2)[:3] == [(1, 2), (1, 3), (1, 4)]
    assert dimension(3, 3) == 20 and dimension(3, 7) == 0


# omega and its powers


def test_omega_examples():
    assert standard_symplectic_form(1).terms == {(1, 2): 1}
    assert standard_symplectic_form(3).terms == {(1, 4): 1, (2, 5): 1, (3, 6): 1}
    w = standard_symplectic_form(3)
    assert evaluate(w, [e(3, 1), e_prime(3, 1)]) == 1
    assert evaluate(w, [e(3, 1), e_prime(3, 2)]) == 0


def test_wedge_examples():
    assert wedge(dx(2, 1), dy(2, 1)).terms == {(1, 3): 1}
    assert wedge(dx(2, 1) ^ dy(2, 1), dx(2, 1) ^ dy(2, 2)).is_zero()
    w = standard_symplectic_form(2)
    # dx1 dy1 dx2 dy2 = dx1 dx2 dy1 dy2 after one transposition
    assert (w ^ w).terms == {(1, 2, 3, 4): -2}


def test_omega_square_against_oracle():
    w = standard_symplectic_form(2)
    vs = [list(e(2, 1).coords), list(e_prime(2, 1).coords), list(e(2, 2).coords), list(e_prime(2, 2).coords)]
    brute = oracles.eval_wedge(terms(w), 2, terms(w), 2, vs)
    assert brute == 2
    assert evaluate(w ^ w, [e(2, 1), e_prime(2, 1), e(2, 2), e_prime(2, 2)]) == brute


def test_form_power_examples():
    w = standard_symplectic_form(3)
    assert form_power(w, 0) == Form.constant(3)
    assert form_power(w, 3).terms == {(1, 2, 3, 4, 5, 6): -6}
    assert form_power(w, 4).is_zero()
    inter = [e(3, 1), e_prime(3, 1), e(3, 2), e_prime(3, 2), e(3, 3), e_prime(3, 3)]
    assert evaluate(form_power(w, 3), inter) == 6


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_omega_power_sign_conventions(n):
    w = standard_symplectic_form(n)
    p = form_power(w, n - 1)
    planes = list(range(1, n))
    inter = [v for i in planes for v in (e(n, i), e_prime(n, i))]
    blocked = [e(n, i) for i in planes] + [e_prime(n, i) for i in planes]
    # independent value from the permutation-sum oracle
    assert evaluate(p, inter) == oracles.eval_form(terms(p), as_lists(inter)) == factorial(n - 1)
    m = n - 1
    expected_blocked = (-1) ** (m * (m - 1) // 2) * factorial(m)
    assert evaluate(p, blocked) == oracles.eval_form(terms(p), as_lists(blocked)) == expected_blocked
    assert interleaved_sign(n, planes) * p.coeff(sorted(planes + [n + i for i in planes])) == factorial(m)
    assert p.coeff(planes + [n + i for i in planes]) == expected_blocked
    assert blocked_sign(n, planes) == 1


@pytest.mark.parametrize("n,m", [(n, m) for n in range(1, 6) for m in range(0, n + 1)])
def test_closed_form_power(n, m):
    assert omega_power_closed_form(n, m) == form_power(standard_symplectic_form(n), m)


def test_evaluate_examples():
    a = dx(2, 1) ^ dx(2, 2)
    assert evaluate(a, [e(2, 1), e(2, 2)]) == 1
    assert evaluate(a, [e(2, 2), e(2, 1)]) == -1
    with pytest.raises(DimensionError):
        evaluate(a, [e(2, 1)])


def test_interior_examples():
    w = standard_symplectic_form(3)
    assert interior_product(e(3, 1), w) == dy(3, 1)
    assert interior_product(e(3, 1), dx(3, 2) ^ dy(3, 2)).is_zero()


def test_pullback_examples():
    w = standard_symplectic_form(3)
    assert pullback(LinearMap.identity(3), w) == w
    f = LinearMap.diagonal(3, [2, 2, 2, 2, 2, Fraction(1, 32)])
    assert pullback(f, w).terms == {(1, 4): 4, (2, 5): 4, (3, 6): Fraction(1, 16)}


def test_drop_coordinates():
    a = (dx(2, 1) ^ dy(2, 1)) + (dx(2, 2) ^ dy(2, 2))
    assert drop_coordinates(a, [1]) == dx(2, 2) ^ dy(2, 2)


# properties against the brute-force oracle


@given(st.data())
def test_evaluate_matches_oracle(data):
    a = data.draw(forms(n=3))
    vs = [data.draw(vectors(3)) for _ in range(a.degree)]
    assert evaluate(a, vs) == oracles.eval_form(terms(a), as_lists(vs))


@given(st.data())
def test_wedge_matches_shuffle_oracle(data):
    a = data.draw(forms(n=2, degree=data.draw(st.integers(0, 2))))
    b = data.draw(forms(n=2, degree=data.draw(st.integers(0, 2))))
    vs = [data.draw(vectors(2)) for _ in range(a.degree + b.degree)]
    assert evaluate(a ^ b, vs) == oracles.eval_wedge(terms(a), a.degree, terms(b), b.degree, as_lists(vs))


@given(st.data())
def test_alternation(data):
    a = data.draw(forms(n=2, degree=3))
    vs = [data.draw(vectors(2)) for _ in range(3)]
    value = evaluate(a, vs)
    for p in permutations(range(3)):
        assert evaluate(a, [vs[i] for i in p]) == oracles.perm_sign(p) * value
    assert evaluate(a, [vs[0], vs[0], vs[1]]) == 0


@given(st.data())
def test_graded_commutativity_and_associativity(data):
    a, b, c = (data.draw(forms(n=2)) for _ in range(3))
    assert a ^ b == (b ^ a).scale((-1) ** (a.degree * b.degree))
    assert (a ^ b) ^ c == a ^ (b ^ c)


@given(st.data())
def test_interior_product(data):
    a = data.draw(forms(n=2, degree=data.draw(st.integers(1, 3))))
    b = data.draw(forms(n=2, degree=data.draw(st.integers(1, 2))))
    X = data.draw(vectors(2))
    # iota_X iota_X = 0
    if a.degree >= 2:
        assert interior_product(X, interior_product(X, a)).is_zero()
    # antiderivation (Leibniz rule)
    lhs = interior_product(X, a ^ b)
    rhs = (interior_product(X, a) ^ b) + (a ^ interior_product(X, b)).scale((-1) ** a.degree)
    assert lhs == rhs
    # (iota_X a)(v...) = a(X, v...)
    vs = [data.draw(vectors(2)) for _ in range(a.degree - 1)]
    assert evaluate(interior_product(X, a), vs) == evaluate(a, [X] + vs)


@given(st.data())
def test_pullback_properties(data):
    S = data.draw(linear_maps(2))
    T = data.draw(linear_maps(2))
    a = data.draw(forms(n=2))
    b = data.draw(forms(n=2))
    assert pullback(S @ T, a) == pullback(T, pullback(S, a))
    assert pullback(T, a ^ b) == pullback(T, a) ^ pullback(T, b)
    vs = [data.draw(vectors(2)) for _ in range(a.degree)]
    assert evaluate(pullback(T, a), vs) == oracles.eval_form(
        terms(a), [oracles.apply_matrix(T.matrix, v) for v in as_lists(vs)])


@given(linear_maps(2))
def test_top_degree_pullback_is_determinant(T):
    top = Form(2, 4, {(1, 2, 3, 4): 1})
    assert pullback(T, top) == top.scale(oracles.determinant(T.matrix))
    assert T.determinant() == oracles.determinant(T.matrix)


def test_vector_indexing():
    v = Vector(1, (3, 4))
    assert v[1] == 3 and v[2] == 4
