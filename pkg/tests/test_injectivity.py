from math import comb

import pytest

from lefschetz.injectivity import kernel_chain_check, proof_certificate_kernel, verify_injectivity, wedge_power_matrix


@pytest.mark.parametrize("n,k,rank,kernel", [(3, 2, 15, 0), (3, 3, 1, 14), (4, 3, 28, 0), (4, 2, 28, 0),
                                             (3, 1, 15, 0), (4, 4, 1, 27)])
def test_rank_examples(n, k, rank, kernel):
    r = verify_injectivity(n, k)
    assert r.passed
    assert (r.witness["rank"], r.witness["kernel_dim"]) == (rank, kernel)


def test_contrast_case_k_equals_n():
    for n in (3, 4, 5):
        assert verify_injectivity(n, n).witness["kernel_dim"] == comb(2 * n, 2) - 1


def test_trivial_and_invalid():
    r = verify_injectivity(2, 1)
    assert r.passed and r.witness.get("trivial")
    with pytest.raises(ValueError):
        verify_injectivity(1, 1)
    with pytest.raises(ValueError):
        proof_certificate_kernel(3, 3)


def test_matrix_shape():
    m = wedge_power_matrix(3, 2)
    assert (m.rows, m.cols) == (15, 15)


def steps(report, name):
    return [s for s in report.witness["trace"] if s["step"] == name]


def test_certificate_base_case():
    r = proof_certificate_kernel(3, 2)
    assert r.passed and r.witness["agrees_with_rank"]
    forced = [s["unknown"] for s in steps(r, "i")]
    assert sorted(forced) == ["a12", "a13", "a23", "c12", "c13", "c23"]
    assert all(s["unique_before_substitution"] for s in steps(r, "ii"))
    assert len(steps(r, "ii")) == 6
    chain, = steps(r, "chain")
    assert chain["relation"] == "b11 = -b22 = -(-b33) = -(-(-b11)) = -b11"
    assert chain["cycle_factor"] == -1


@pytest.mark.parametrize("n,k", [(4, 2), (4, 3), (5, 2), (5, 3), (5, 4)])
def test_certificate_induction(n, k):
    r = proof_certificate_kernel(n, k)
    assert r.passed
    rel = steps(r, "iii")
    assert len(rel) == n
    assert all(s["relation_factor"] == -(k - 1) for s in rel)
    chain, = steps(r, "chain")
    assert chain["cycle_factor"] == -(k - 1) ** 3
    assert steps(r, "induction")[0]["hypothesis"] == {"n": n - 1, "k": k - 1}


def test_certificate_disjoint_sets():
    # the degree-2k monomials used in step i carry I of size k - 1 avoiding i, j
    r = proof_certificate_kernel(4, 3)
    for s in steps(r, "i"):
        assert s["monomial"].count("^") == 2 * 3 - 1


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_kernel_chain(n):
    for k in range(1, n + 1):
        r = kernel_chain_check(n, k)
        assert r.passed, r.witness
    assert kernel_chain_check(3, 3).witness == {"kernel_dim_k": 14, "kernel_dim_n": 14}
    assert kernel_chain_check(5, 2).witness["kernel_dim_k"] == 0
