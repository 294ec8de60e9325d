"""Injectivity of alpha -> omega^{k-1} ^ alpha on 2-forms.

Two independent routes: an exact rank computation (``verify_injectivity``),
and a replay of the inductive coefficient-elimination argument on a symbolic
general 2-form (``proof_certificate_kernel``).  The replay never calls the rank
engine except for the final agreement check.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb

from . import linalg
from .exterior import (
    Form,
    basis,
    coordinate_name,
    drop_coordinates,
    e,
    form_power,
    interior_product,
    standard_symplectic_form,
    wedge,
)
from .metric import OperatorMatrix
from .report import CheckReport


@lru_cache(maxsize=None)
def wedge_power_matrix(n: int, k: int) -> OperatorMatrix:
    """Matrix of alpha -> omega^{k-1} ^ alpha from 2-forms to 2k-forms."""
    wk = form_power(standard_symplectic_form(n), k - 1)
    return OperatorMatrix(n, 2, 2 * k, tuple(wedge(wk, Form(n, 2, {I: 1})) for I in basis(n, 2)))


def _check_nk(n: int, k: int, min_n: int = 2) -> None:
    if n < min_n:
        raise ValueError(f"n must be at least {min_n}")
    if not 1 <= k <= n:
        raise ValueError("k must satisfy 1 <= k <= n")


def verify_injectivity(n: int, k: int) -> CheckReport:
    """Exact rank / kernel dimension of wedging 2-forms with omega^{k-1}."""
    _check_nk(n, k)
    m = wedge_power_matrix(n, k)
    r = m.rank()
    kdim = comb(2 * n, 2) - r
    expected = 0 if k < n else comb(2 * n, 2) - 1
    witness = {"rank": r, "kernel_dim": kdim, "expected_kernel_dim": expected,
               "source_dim": comb(2 * n, 2), "target_dim": comb(2 * n, 2 * k)}
    if n == 2:
        witness["trivial"] = True
    return CheckReport("injectivity.rank", {"n": n, "k": k}, kdim == expected, witness)


# symbolic general 2-form: unknown name -> coefficient form


def _unknowns(n: int) -> dict[str, Form]:
    out = {}
    for i, j in combinations(range(1, n + 1), 2):
        out[f"a{i}{j}"] = Form(n, 2, {(i, j): 1})
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            out[f"b{i}{j}"] = Form(n, 2, {(i, n + j): 1})
    for i, j in combinations(range(1, n + 1), 2):
        out[f"c{i}{j}"] = Form(n, 2, {(n + i, n + j): 1})
    return out


def _name(n: int, idx) -> str:
    return "^".join(coordinate_name(n, i) for i in idx)


def _equation(product: dict[str, Form], monomial: tuple, dead: set) -> dict[str, Fraction]:
    return {u: f.terms[monomial] for u, f in product.items() if monomial in f.terms and u not in dead}


def _disjoint_set(n: int, size: int, avoid: set) -> tuple:
    return tuple(p for p in range(1, n + 1) if p not in avoid)[:size]


def _sym_map(fn, sym: dict[str, Form]) -> dict[str, Form]:
    return {u: fn(f) for u, f in sym.items()}


def _sym_equal(a: dict[str, Form], b: dict[str, Form]) -> bool:
    keys = set(a) | set(b)
    return all(a.get(u, None) == b.get(u, None) or
               (a.get(u) is not None and b.get(u) is not None and (a[u] - b[u]).is_zero()) or
               (a.get(u) is None and b[u].is_zero()) or (b.get(u) is None and a[u].is_zero())
               for u in keys)


def _chain_text(m: int, n: int) -> str:
    if m == 1 and n == 3:
        return "b11 = -b22 = -(-b33) = -(-(-b11)) = -b11"
    return f"b11 = -{m}*b22 = {m ** 2}*b33 = -{m ** 3}*b11"


@lru_cache(maxsize=None)
def proof_certificate_kernel(n: int, k: int) -> CheckReport:
    """Replay the elimination proving omega^{k-1} ^ alpha = 0 forces alpha = 0.

    The trace lists every forced conclusion in order.  Steps (i)/(ii) read off
    monomials in which a single unknown occurs; step (iii) handles the diagonal
    coefficients b_ii, by direct pairing when n = 3 and by contraction with
    d/dx_i plus induction on n otherwise.
    """
    if n < 3:
        raise ValueError("the elimination argument needs n >= 3")
    if not 0 < k < n:
        raise ValueError("k must satisfy 0 < k < n")
    params = {"n": n, "k": k}
    trace: list[dict] = []

    def fail(reason: str, **data) -> CheckReport:
        return CheckReport("injectivity.proof_certificate", params, False,
                           {"trace": trace, "failure": {"reason": reason, **data}})

    if k == 1:
        trace.append({"step": "k=1", "claim": "omega^0 ^ alpha = alpha; nothing to prove"})
        return _finish(n, k, trace, params)

    omega = standard_symplectic_form(n)
    wk = form_power(omega, k - 1)
    alpha = _unknowns(n)
    product = _sym_map(lambda f: wedge(wk, f), alpha)
    dead: set[str] = set()

    # (i) a_ij and c_ij via dx_i^dx_j^dx_I^dy_I, dy_i^dy_j^dx_I^dy_I
    for family, shift in (("a", 0), ("c", n)):
        for i, j in combinations(range(1, n + 1), 2):
            I = _disjoint_set(n, k - 1, {i, j})
            if len(I) != k - 1:
                return fail("no disjoint index set", unknown=f"{family}{i}{j}")
            mono = tuple(sorted((i + shift, j + shift) + I + tuple(n + p for p in I)))
            eq = _equation(product, mono, set())
            target = f"{family}{i}{j}"
            if set(eq) != {target}:
                return fail("monomial does not isolate the unknown", monomial=_name(n, mono),
                            unknown=target, equation=eq)
            dead.add(target)
            trace.append({"step": "i", "unknown": target, "monomial": _name(n, mono),
                          "coefficient": eq[target], "conclusion": f"{target} = 0"})

    # (ii) off-diagonal b_rs via dx_r^dy_s^dx_I^dy_I
    for r in range(1, n + 1):
        for s in range(1, n + 1):
            if r == s:
                continue
            I = _disjoint_set(n, k - 1, {r, s})
            mono = tuple(sorted((r, n + s) + I + tuple(n + p for p in I)))
            target = f"b{r}{s}"
            full = _equation(product, mono, set())
            eq = _equation(product, mono, dead)
            if set(eq) != {target}:
                return fail("monomial does not isolate the unknown", monomial=_name(n, mono),
                            unknown=target, equation=eq)
            dead.add(target)
            trace.append({"step": "ii", "unknown": target, "monomial": _name(n, mono),
                          "coefficient": eq[target], "unique_before_substitution": set(full) == {target},
                          "conclusion": f"{target} = 0"})

    diag = {f"b{i}{i}": alpha[f"b{i}{i}"] for i in range(1, n + 1)}
    if set(alpha) - dead != set(diag):
        return fail("unexpected survivors", survivors=sorted(set(alpha) - dead))

    relations: dict[tuple[int, int], Fraction] = {}  # (p, q) -> f with b_pp = f * b_qq
    if n == 3:
        # base case: dx_p^dy_p^dx_q^dy_q has coefficient proportional to b_pp + b_qq
        for p, q in combinations(range(1, n + 1), 2):
            mono = tuple(sorted((p, q, n + p, n + q)))
            eq = _equation(product, mono, dead)
            bp, bq = f"b{p}{p}", f"b{q}{q}"
            if set(eq) != {bp, bq} or eq[bp] != eq[bq]:
                return fail("diagonal pairing", monomial=_name(n, mono), equation=eq)
            relations[(p, q)] = -eq[bq] / eq[bp]
            relations[(q, p)] = -eq[bp] / eq[bq]
            trace.append({"step": "iii", "monomial": _name(n, mono), "equation": eq,
                          "relation": f"{bq} = -{bp}", "relation_factor": relations[(q, p)]})
    else:
        sub = proof_certificate_kernel(n - 1, k - 1)
        if not sub.passed:
            return fail("induction hypothesis failed", sub_params=sub.params)
        trace.append({"step": "induction", "hypothesis": {"n": n - 1, "k": k - 1},
                      "status": sub.status})
        wk2 = form_power(omega, k - 2)
        alpha_d = diag
        for i in range(1, n + 1):
            X = e(n, i)
            lhs = _sym_map(lambda f: interior_product(X, wedge(f, wk)), alpha_d)
            leibniz = _sym_map(lambda f: wedge(interior_product(X, f), wk) + wedge(f, interior_product(X, wk)),
                               alpha_d)
            dyi = Form(n, 1, {(n + i,): 1})
            beta = {u: (omega if u == f"b{i}{i}" else Form.zero(n, 2)) + f.scale(k - 1)
                    for u, f in alpha_d.items()}
            factored = _sym_map(lambda f: wedge(dyi, wedge(f, wk2)), beta)
            if not (_sym_equal(lhs, leibniz) and _sym_equal(lhs, factored)):
                return fail("contraction identity", contraction=i)
            alpha1 = _sym_map(lambda f: drop_coordinates(f, {n + i}), beta)
            omega1 = form_power(drop_coordinates(omega, {i, n + i}), k - 2)
            if drop_coordinates(wk2, {n + i}) != omega1:
                return fail("omega^{k-2} split", contraction=i)
            if any(i in I or n + i in I for f in alpha1.values() for I in f.terms):
                return fail("alpha_1 involves plane i", contraction=i)
            if not _sym_equal(factored, _sym_map(lambda f: wedge(dyi, wedge(f, omega1)), alpha1)):
                return fail("dy_i factor", contraction=i)
            # induction hypothesis: alpha_1 ^ omega_1 = 0 forces alpha_1 = 0
            bi = f"b{i}{i}"
            for j in range(1, n + 1):
                if j == i:
                    continue
                mono = (j, n + j)
                eq = {u: f.terms[mono] for u, f in alpha1.items() if mono in f.terms}
                bj = f"b{j}{j}"
                if eq != {bi: 1, bj: k - 1}:
                    return fail("diagonal relation", contraction=i, equation=eq)
                relations[(i, j)] = -eq[bj] / eq[bi]
            trace.append({"step": "iii", "contraction": f"d/dx{i}",
                          "relation": f"b{i}{i} = -({k - 1})*b_jj for all j != {i}",
                          "relation_factor": relations[(i, i % n + 1)]})
    ratio = relations[(1, 2)] * relations[(2, 3)] * relations[(3, 1)]
    # b11 = ratio * b11 with ratio != 1 forces b11 = 0, then every b_ii = 0
    if ratio == 1:
        return fail("relation chain does not close")
    trace.append({"step": "chain", "relation": _chain_text(k - 1, n), "cycle_factor": ratio,
                  "conclusion": "b11 = 0, hence b_ii = 0 for all i, hence alpha = 0"})
    return _finish(n, k, trace, params)


def _finish(n: int, k: int, trace: list, params: dict) -> CheckReport:
    rank_report = verify_injectivity(n, k)
    agree = rank_report.passed and rank_report.witness["kernel_dim"] == 0
    return CheckReport("injectivity.proof_certificate", params, agree,
                       {"trace": trace, "agrees_with_rank": agree,
                        "kernel_dim_by_rank": rank_report.witness["kernel_dim"]})


def kernel_chain_check(n: int, k: int) -> CheckReport:
    """ker(omega^{k-1} ^ .) is contained in ker(omega^{n-1} ^ .) on 2-forms."""
    _check_nk(n, k)
    small = wedge_power_matrix(n, k).kernel()
    big_matrix = wedge_power_matrix(n, n)
    big = big_matrix.kernel()
    killed = all(big_matrix.apply(v).is_zero() for v in small)
    spanned = linalg.span_rank(v.terms for v in big + small) == linalg.span_rank(v.terms for v in big)
    return CheckReport("injectivity.kernel_chain", {"n": n, "k": k}, killed and spanned,
                       {"kernel_dim_k": len(small), "kernel_dim_n": len(big)})
