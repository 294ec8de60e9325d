import pytest

from lefschetz.exterior import LinearMap
from lefschetz.kahler import (
    check_hard_lefschetz,
    check_lambda_conjugation,
    check_lefschetz_decomposition,
    check_power_commutator,
    check_primitive_dimensions,
    check_primitive_injectivity,
    check_sl2_relations,
    check_star_squared,
    expected_primitive_dimension,
    kahler_checks,
)
from lefschetz.metric import CompatibleTriple

PARTS = [check_star_squared, check_lambda_conjugation, check_sl2_relations, check_power_commutator]
STRUCTURE = [check_lefschetz_decomposition, check_primitive_dimensions, check_primitive_injectivity,
             check_hard_lefschetz]


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("check", PARTS + STRUCTURE, ids=lambda f: f.__name__)
def test_standard_triple(n, check):
    r = check(CompatibleTriple.standard(n))
    assert r.passed, r.witness


def test_all_parts_in_order():
    names = [r.check for r in kahler_checks(CompatibleTriple.standard(2))]
    assert names == [
        "kahler.star_squared", "kahler.lambda_conjugation", "kahler.sl2_relations",
        "kahler.power_commutator", "kahler.lefschetz_decomposition", "kahler.primitive_dimensions",
        "kahler.primitive_injectivity", "kahler.hard_lefschetz",
    ]
    assert len(kahler_checks(CompatibleTriple.standard(2), structure=False)) == 4


def test_non_standard_triple():
    t = CompatibleTriple.conjugated(LinearMap(2, [[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 5, 0], [0, 0, 2, 1]]))
    assert not t.is_standard_metric
    for r in kahler_checks(t):
        assert r.passed, (r.check, r.witness)


def test_expected_primitive_dimension():
    assert [expected_primitive_dimension(3, k) for k in range(7)] == [1, 6, 14, 14, 0, 0, 0]


@pytest.mark.slow
def test_n4_full():
    for r in kahler_checks(CompatibleTriple.standard(4)):
        assert r.passed, (r.check, r.witness)
