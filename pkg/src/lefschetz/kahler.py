"""Exact checks of the sl(2) / Lefschetz identities on a compatible triple."""

from __future__ import annotations

from math import comb

from . import linalg
from .exterior import Form, basis, dimension
from .metric import (
    CompatibleTriple,
    OperatorMatrix,
    identity_matrix,
    op_L_power,
    operator_matrix,
    primitive_decompose,
    primitive_space_basis,
)
from .report import CheckReport


def _zero(n: int, source: int, target: int) -> OperatorMatrix:
    return OperatorMatrix(n, source, target, tuple(Form.zero(n, max(target, 0)) for _ in basis(n, source)))


def _L(t: CompatibleTriple, k: int, power: int = 1) -> OperatorMatrix | None:
    """Matrix of L^power on degree k, or None when the target degree exceeds 2n."""
    if k + 2 * power > 2 * t.n:
        return None
    return operator_matrix(f"Lpow:{power}", k, t)


def _Lambda(t: CompatibleTriple, k: int) -> OperatorMatrix | None:
    if k < 2 or k > 2 * t.n:
        return None
    return operator_matrix("Lambda", k, t)


def _compose(*ops: OperatorMatrix | None) -> OperatorMatrix | None:
    """Right-to-left product; None stands for a map into the zero space."""
    if any(op is None for op in ops):
        return None
    out = ops[-1]
    for op in reversed(ops[:-1]):
        out = op @ out
    return out


def _diff(n: int, k: int, target: int, a: OperatorMatrix | None, b: OperatorMatrix | None) -> OperatorMatrix:
    a = a if a is not None else _zero(n, k, target)
    b = b if b is not None else _zero(n, k, target)
    return a - b


def check_star_squared(triple: CompatibleTriple) -> CheckReport:
    """(* o *) = (-1)^k on every degree."""
    n = triple.n
    bad = []
    for k in range(2 * n + 1):
        sq = operator_matrix("star", 2 * n - k, triple) @ operator_matrix("star", k, triple)
        if sq != identity_matrix(n, k).scale((-1) ** k):
            bad.append(k)
    return CheckReport("kahler.star_squared", {"n": n}, not bad, {"failing_degrees": bad})


def check_lambda_conjugation(triple: CompatibleTriple) -> CheckReport:
    """Lambda (adjoint of L) equals *^{-1} L * and, in matrix form, the Gram-transpose of L."""
    n = triple.n
    bad_star, bad_transpose = [], []
    for k in range(2, 2 * n + 1):
        lam = operator_matrix("Lambda", k, triple)
        conj = (operator_matrix("star_inv", 2 * n - k + 2, triple)
                @ operator_matrix("L", 2 * n - k, triple)
                @ operator_matrix("star", k, triple))
        if conj != lam or operator_matrix("Lambda_star", k, triple) != lam:
            bad_star.append(k)
        if triple.is_standard_metric and operator_matrix("L", k - 2, triple).transpose() != lam:
            bad_transpose.append(k)
    ok = not bad_star and not bad_transpose
    return CheckReport("kahler.lambda_conjugation", {"n": n}, ok,
                       {"star_mismatch": bad_star, "transpose_mismatch": bad_transpose})


def check_sl2_relations(triple: CompatibleTriple) -> CheckReport:
    """[H, L] = 2L, [H, Lambda] = -2 Lambda, [L, Lambda] = H on every degree."""
    n = triple.n
    bad = []
    for k in range(2 * n + 1):
        H_k = operator_matrix("H", k, triple)
        L_k = _L(triple, k)
        if L_k is not None:
            HL = operator_matrix("H", k + 2, triple) @ L_k - L_k @ H_k
            if HL != L_k.scale(2):
                bad.append(("[H,L]", k))
        lam = _Lambda(triple, k)
        if lam is not None:
            HLam = operator_matrix("H", k - 2, triple) @ lam - lam @ H_k
            if HLam != lam.scale(-2):
                bad.append(("[H,Lambda]", k))
        comm = _diff(n, k, k, _compose(_L(triple, k - 2) if k >= 2 else None, lam),
                     _compose(_Lambda(triple, k + 2), L_k))
        if comm != H_k:
            bad.append(("[L,Lambda]", k))
    return CheckReport("kahler.sl2_relations", {"n": n}, not bad, {"failures": bad})


def check_power_commutator(triple: CompatibleTriple) -> CheckReport:
    """[L^i, Lambda] = i (k - n + i - 1) L^{i-1} on degree-k forms."""
    n = triple.n
    bad = []
    count = 0
    for k in range(2 * n + 1):
        i = 1
        while k + 2 * i - 2 <= 2 * n:
            target = k + 2 * i - 2
            left = _compose(_L(triple, k - 2, i), _Lambda(triple, k)) if k >= 2 else None
            right = _compose(_Lambda(triple, k + 2 * i), _L(triple, k, i))
            comm = _diff(n, k, target, left, right)
            expected = operator_matrix(f"Lpow:{i - 1}", k, triple).scale(i * (k - n + i - 1))
            if comm != expected:
                bad.append({"k": k, "i": i})
            count += 1
            i += 1
    return CheckReport("kahler.power_commutator", {"n": n}, not bad,
                       {"cases_checked": count, "failures": bad})


def expected_primitive_dimension(n: int, k: int) -> int:
    if k > n:
        return 0
    return comb(2 * n, k) - (comb(2 * n, k - 2) if k >= 2 else 0)


def check_lefschetz_decomposition(triple: CompatibleTriple, decompose_monomials: bool = True) -> CheckReport:
    """Every degree splits as a direct sum of L^i(P^{k-2i}); monomials decompose exactly."""
    n = triple.n
    dims = {k: len(primitive_space_basis(k, triple)) for k in range(2 * n + 1)}
    bad = []
    for k in range(2 * n + 1):
        blocks = [[op_L_power(p, i, triple).terms for p in primitive_space_basis(k - 2 * i, triple)]
                  for i in range(k // 2 + 1)]
        block_ranks = [linalg.span_rank(b) for b in blocks]
        total = linalg.span_rank(v for b in blocks for v in b)
        if total != dimension(n, k) or sum(block_ranks) != total:
            bad.append({"k": k, "reason": "not a direct sum", "block_ranks": block_ranks})
            continue
        if decompose_monomials:
            for I in basis(n, k):
                a = Form(n, k, {I: 1})
                dec = primitive_decompose(a, triple)
                lam_ok = all(_Lambda(triple, b.degree) is None or operator_matrix("Lambda", b.degree, triple)
                             .apply(b).is_zero() for _, b in dec.components)
                if dec.reconstruct(triple) != a or not lam_ok:
                    bad.append({"k": k, "monomial": list(I)})
                    break
    return CheckReport("kahler.lefschetz_decomposition", {"n": n}, not bad,
                       {"primitive_dims": dims, "failures": bad})


def check_primitive_dimensions(triple: CompatibleTriple) -> CheckReport:
    """dim P^k = C(2n,k) - C(2n,k-2) for k <= n and P^k = 0 for k > n."""
    n = triple.n
    dims = {k: len(primitive_space_basis(k, triple)) for k in range(2 * n + 1)}
    bad = [k for k, d in dims.items() if d != expected_primitive_dimension(n, k)]
    return CheckReport("kahler.primitive_dimensions", {"n": n}, not bad, {"dims": dims, "failing_degrees": bad})


def check_primitive_injectivity(triple: CompatibleTriple) -> CheckReport:
    """L^{n-k} is injective on P^k, replaying the minimal-power argument.

    For each primitive basis form alpha the smallest i > 0 with L^i alpha = 0
    must satisfy i (k - n + i - 1) = 0, i.e. i = n - k + 1, so L^{n-k} alpha != 0.
    Injectivity on all of P^k is then confirmed by exact rank.
    """
    n = triple.n
    bad = []
    for k in range(n + 1):
        P = primitive_space_basis(k, triple)
        for alpha in P:
            i, power = 1, op_L_power(alpha, 1, triple)
            while not power.is_zero():
                i += 1
                power = op_L_power(power, 1, triple)
            if i * (k - n + i - 1) != 0 or i != n - k + 1:
                bad.append({"k": k, "reason": "minimal power", "i": i})
                break
        images = [op_L_power(p, n - k, triple).terms for p in P]
        if linalg.span_rank(images) != len(P):
            bad.append({"k": k, "reason": "rank"})
    return CheckReport("kahler.primitive_injectivity", {"n": n}, not bad, {"failures": bad})


def check_hard_lefschetz(triple: CompatibleTriple, replay: bool = True) -> CheckReport:
    """L^{n-k}: degree k -> degree 2n-k has rank C(2n, k) for k <= n.

    With ``replay`` every basis monomial also goes through the decomposition
    argument: some primitive component beta_j is nonzero, L^{n-k+2j} beta_j != 0
    by the previous part, hence L^{n-k+j} beta_j != 0 and L^{n-k} alpha != 0.
    """
    n = triple.n
    ranks, bad = {}, []
    for k in range(n + 1):
        m = operator_matrix(f"Lpow:{n - k}", k, triple)
        ranks[k] = m.rank()
        if ranks[k] != comb(2 * n, k):
            bad.append({"k": k, "reason": "rank"})
        if not replay:
            continue
        for I in basis(n, k):
            alpha = Form(n, k, {I: 1})
            dec = primitive_decompose(alpha, triple)
            nonzero = [(j, b) for j, b in dec.components if not b.is_zero()]
            if not nonzero:
                bad.append({"k": k, "monomial": list(I), "reason": "empty decomposition"})
                break
            j, beta = nonzero[0]
            if (op_L_power(beta, n - k + 2 * j, triple).is_zero()
                    or op_L_power(beta, n - k + j, triple).is_zero()
                    or m.apply(alpha).is_zero()):
                bad.append({"k": k, "monomial": list(I), "reason": "replay"})
                break
    return CheckReport("kahler.hard_lefschetz", {"n": n}, not bad, {"ranks": ranks, "failures": bad})


def kahler_checks(triple: CompatibleTriple, structure: bool = True) -> list[CheckReport]:
    """All eight identities; ``structure=False`` runs only the operator identities (1)-(4)."""
    out = [
        check_star_squared(triple),
        check_lambda_conjugation(triple),
        check_sl2_relations(triple),
        check_power_commutator(triple),
    ]
    if structure:
        out += [
            check_lefschetz_decomposition(triple),
            check_primitive_dimensions(triple),
            check_primitive_injectivity(triple),
            check_hard_lefschetz(triple),
        ]
    return out
