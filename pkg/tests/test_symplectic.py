from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import forms
from lefschetz.cli import default_seeds
from lefschetz.exterior import Form, LinearMap, dx, dy, form_power, pullback, standard_symplectic_form
from lefschetz.symplectic import (
    NotSymplecticError,
    SymplecticMatrix,
    construct_large_family,
    default_seed_pool,
    generator_catalog,
    generator_matrix,
    hyperbolic_shear,
    is_nondegenerate,
    is_proportional_to_omega,
    large_family_report,
    orbit_span,
    plane_swap,
    rotation_j,
    shear_f_ij,
    torus_element,
    torus_weight,
    verify_span_steps,
    weight_decompose,
    word_from_json,
    word_json,
    word_matrix,
)


def test_symplectic_matrix_rejects():
    with pytest.raises(NotSymplecticError):
        SymplecticMatrix.of(LinearMap.diagonal(1, [2, 1]))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_catalog_is_symplectic(n):
    w = standard_symplectic_form(n)
    for gen, args in generator_catalog(n):
        T = generator_matrix(n, gen, args)
        assert pullback(T, w) == w
        assert T.determinant() == 1


def test_torus_examples():
    assert torus_element(3, [1, 1, 1]).is_identity()
    T = torus_element(3, [2, 1, 1])
    assert pullback(T, dx(3, 1) ^ dy(3, 1)) == dx(3, 1) ^ dy(3, 1)
    assert pullback(T, dx(3, 1) ^ dx(3, 2)) == (dx(3, 1) ^ dx(3, 2)).scale(2)
    with pytest.raises(ValueError):
        torus_element(3, [0, 1, 1])


@given(st.data())
def test_torus_acts_by_weights(data):
    t = data.draw(st.lists(st.sampled_from([Fraction(2), Fraction(1, 2), Fraction(3), Fraction(1)]), min_size=3,
                           max_size=3))
    a = data.draw(forms(n=3, degree=2))
    w = weight_decompose(a)
    T = torus_element(3, t)
    expected = {}
    for label, comp, key in (("E", w.E, lambda ij: (ij[0], ij[1])), ("E_prime", w.E_prime, lambda ij: (3 + ij[0], 3 + ij[1])),
                             ("F", w.F, lambda ij: (ij[0], 3 + ij[1]))):
        for ij, c in comp.items():
            expected[key(ij)] = c * torus_weight(label, ij, t)
    for i, c in w.F_diag.items():
        expected[(i, 3 + i)] = c
    assert pullback(T, a) == Form(3, 2, expected)
    assert pullback(T, standard_symplectic_form(3)) == standard_symplectic_form(3)


def test_swap_and_shear_examples():
    assert pullback(plane_swap(3, 1, 2), dx(3, 1) ^ dy(3, 1)) == dx(3, 2) ^ dy(3, 2)
    n = 3
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                F_ii = dx(n, i) ^ dy(n, i)
                assert pullback(shear_f_ij(n, i, j), F_ii) - F_ii == dx(n, i) ^ dy(n, j)
    m = shear_f_ij(3, 1, 2).matrix
    changed = [r for r in range(6) for c in range(6) if m[r][c] != (1 if r == c else 0)]
    assert changed == [1, 3]  # rows of x_2 and y_1


def test_rotation_and_hyperbolic_examples():
    assert pullback(rotation_j(3, 2), dx(3, 1) ^ dy(3, 2)) == dx(3, 1) ^ dx(3, 2)
    n = 3
    for r, s in ((1, 2), (1, 3), (2, 3)):
        f = hyperbolic_shear(n, r, s)
        E = dx(n, r) ^ dx(n, s)
        assert pullback(f, E) - E + (dy(n, r) ^ dy(n, s)) == (dx(n, r) ^ dy(n, r)) - (dx(n, s) ^ dy(n, s))
    m = hyperbolic_shear(3, 1, 2).matrix
    off = [(r, c) for r in range(6) for c in range(6) if r != c and m[r][c]]
    assert len(off) == 2 and all(m[r][c] == 1 for r, c in off)


def test_generator_errors():
    with pytest.raises(ValueError):
        plane_swap(3, 1, 1)
    with pytest.raises(ValueError):
        shear_f_ij(3, 1, 4)
    with pytest.raises(ValueError):
        generator_matrix(3, "nope", ())


def test_word_round_trip_and_order():
    word = [("shear", (1, 2)), ("torus", (Fraction(2), Fraction(1))), ("rotation", (2,))]
    data = word_json(word)
    assert data[1] == {"gen": "torus", "args": ["2", "1"]}
    assert word_from_json(data) == word
    # a word g1 g2 acts on forms by pulling back along g1 first
    a = dx(2, 1) ^ dy(2, 1)
    T = word_matrix(2, word[:2])
    g1, g2 = (generator_matrix(2, g, args) for g, args in word[:2])
    assert pullback(T, a) == pullback(g2, pullback(g1, a))


def test_weight_examples():
    w = weight_decompose(standard_symplectic_form(3))
    assert w.F_diag == {1: 1, 2: 1, 3: 1} and not (w.E or w.E_prime or w.F)
    w = weight_decompose((dx(2, 1) ^ dx(2, 2)) + (dy(2, 1) ^ dy(2, 2)).scale(2))
    assert w.E == {(1, 2): 1} and w.E_prime == {(1, 2): 2}
    assert w.nonzero_labels() == ["E12", "E'12"]


@given(forms(n=3, degree=2))
def test_weight_reassembly(a):
    assert weight_decompose(a).reassemble() == a


def test_predicates():
    assert is_nondegenerate(standard_symplectic_form(3))
    assert not is_nondegenerate((dx(3, 1) ^ dy(3, 1)) - (dx(3, 2) ^ dy(3, 2)))
    assert is_proportional_to_omega(standard_symplectic_form(2).scale(2))


def test_orbit_span_examples():
    a = (dx(2, 1) ^ dy(2, 1)) - (dx(2, 2) ^ dy(2, 2))
    r = orbit_span(a, 3)
    assert r.passed and r.witness["rank"] == 6 == r.witness["target"]
    b = standard_symplectic_form(3) + (dx(3, 1) ^ dx(3, 2))
    r = orbit_span(b, 4)
    assert r.passed and r.witness["rank"] == 15
    r = orbit_span(standard_symplectic_form(2).scale(2), 3)
    assert not r.passed and "rejected" in r.witness


def test_orbit_certificate_replays():
    from lefschetz.io import form_from_json
    from lefschetz.linalg import span_rank
    a = default_seeds(3)[1]
    r = orbit_span(a, 4)
    forms_ = []
    for item in r.witness["certificate"]:
        f = form_from_json(item["form"])
        if item.get("note") != "omega":
            assert pullback(word_matrix(3, word_from_json(item["word"])), a) == f
        forms_.append(f.terms)
    assert span_rank(forms_) == 15


@pytest.mark.parametrize("n", [2, 3])
def test_orbit_span_monotone_in_budget(n):
    for seed in default_seeds(n):
        ranks = [orbit_span(seed, b).witness["rank"] for b in (1, 2, 3, 4)]
        assert ranks == sorted(ranks)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_span_steps(n):
    reports = verify_span_steps(n)
    assert [r.check for r in reports] == [
        "span_step.F_r_implies_F", "span_step.F_rs_implies_E", "span_step.E_rs_implies_F_i"]
    assert all(r.passed for r in reports)
    assert reports[2].witness["averaging_coefficient"] == Fraction(1, n)


@pytest.mark.parametrize("n,target", [(2, 6), (3, 15)])
def test_large_family(n, target):
    fam = construct_large_family(n)
    assert fam.complete and fam.rank == target
    w = standard_symplectic_form(n)
    for T, f in zip(fam.maps, fam.forms):
        assert pullback(T, w) == f
        assert form_power(f, n) == form_power(w, n)
    assert large_family_report(n).passed


def test_large_family_pool_preserves_volume():
    w = standard_symplectic_form(3)
    for _, S in default_seed_pool(3):
        assert form_power(pullback(S, w), 3) == form_power(w, 3)


def test_large_family_reports_shortfall():
    fam = construct_large_family(3, pool=[("id", LinearMap.identity(3))], budget=1)
    assert fam.rank < fam.target and not fam.complete
