"""The diagonal volume-preserving map that does not preserve omega^k for 0 < k < n.

The map scales every x_i and y_1, ..., y_{n-1} by s and y_n by s^{1-2n}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .exterior import (
    LinearMap,
    as_scalar,
    e,
    e_prime,
    evaluate,
    form_power,
    interleaved_sign,
    pullback,
    standard_symplectic_form,
)
from .report import CheckReport


@dataclass(frozen=True)
class CounterexampleMap:
    n: int
    scale: Fraction
    matrix: LinearMap

    @property
    def trivial(self) -> bool:
        return self.scale == 1


def _diagonal(n: int, s: Fraction) -> LinearMap:
    return LinearMap.diagonal(n, [s] * (2 * n - 1) + [s ** (1 - 2 * n)])


def counterexample_map(n: int, s) -> CounterexampleMap:
    s = as_scalar(s)
    if n < 2:
        raise ValueError("the counterexample needs n >= 2")
    if s <= 1:
        raise ValueError("scale must exceed 1; use identity_map for s = 1")
    return _checked(n, s)


def identity_map(n: int) -> CounterexampleMap:
    """The s = 1 member of the family (the identity)."""
    if n < 2:
        raise ValueError("the counterexample needs n >= 2")
    return _checked(n, Fraction(1))


def _checked(n: int, s: Fraction) -> CounterexampleMap:
    m = _diagonal(n, s)
    if m.determinant() != 1:
        raise ArithmeticError("counterexample map is not unimodular")
    top = form_power(standard_symplectic_form(n), n)
    if pullback(m, top) != top:
        raise ArithmeticError("counterexample map does not preserve omega^n")
    return CounterexampleMap(n, s, m)


def compose(f: CounterexampleMap, g: CounterexampleMap) -> LinearMap:
    if f.n != g.n:
        raise ValueError("maps live on different spaces")
    return f.matrix @ g.matrix


def verify_volume_preserving(f: CounterexampleMap) -> CheckReport:
    top = form_power(standard_symplectic_form(f.n), f.n)
    pulled = pullback(f.matrix, top)
    (idx, before), = top.terms.items()
    after = pulled.terms.get(idx, Fraction(0))
    return CheckReport("counterexample.volume", {"n": f.n, "scale": f.scale}, pulled == top, {
        "monomial": list(idx), "original": before, "pulled_back": after, "trivial": f.trivial,
    })


def _planes_of(n: int, idx: tuple) -> list[int] | None:
    """Planes p if idx is {x_p, y_p : p in planes}, else None."""
    xs = [i for i in idx if i <= n]
    ys = [i - n for i in idx if i > n]
    return xs if xs == ys else None


def verify_not_k_preserving(f: CounterexampleMap, k: int) -> CheckReport:
    """Find the lexicographically smallest monomial where f^* omega^k and omega^k differ."""
    n = f.n
    if not 0 < k < n:
        raise ValueError("k must satisfy 0 < k < n")
    wk = form_power(standard_symplectic_form(n), k)
    pulled = pullback(f.matrix, wk)
    params = {"n": n, "scale": f.scale, "k": k}
    for idx in sorted(set(wk.terms) | set(pulled.terms)):
        before = wk.terms.get(idx, Fraction(0))
        after = pulled.terms.get(idx, Fraction(0))
        if before != after:
            witness = {"monomial": list(idx), "original": before, "pulled_back": after}
            planes = _planes_of(n, idx)
            if planes is not None:
                # same coefficients written against dx_p1^dy_p1^dx_p2^dy_p2^...
                sgn = interleaved_sign(n, planes)
                witness["interleaved_planes"] = planes
                witness["interleaved_original"] = sgn * before
                witness["interleaved_pulled_back"] = sgn * after
            return CheckReport("counterexample.not_k_preserving", params, True, witness)
    return CheckReport("counterexample.not_k_preserving", params, False, None)


def _interleaved_tuple(n: int, planes) -> list:
    out = []
    for p in planes:
        out += [e(n, p), e_prime(n, p)]
    return out


def _blocked_tuple(n: int, planes) -> list:
    return [e(n, p) for p in planes] + [e_prime(n, p) for p in planes]


def scaling_factor_check(n: int, s) -> CheckReport:
    """Ratio of f^*omega^{n-1} to omega^{n-1} on (e_1, e_1', ..., e_{n-1}, e_{n-1}').

    The ratio must be s^{2n-2}.  The raw values depend on the ordering of the
    evaluation tuple, so both the interleaved and the blocked orderings are
    reported, together with the sign (-1)^n quoted for this evaluation in the
    literature; a tuple through the n-th plane is reported as a contrast.
    """
    s = as_scalar(s)
    f = identity_map(n) if s == 1 else counterexample_map(n, s)
    w = form_power(standard_symplectic_form(n), n - 1)
    pw = pullback(f.matrix, w)
    planes = list(range(1, n))
    inter = _interleaved_tuple(n, planes)
    blocked = _blocked_tuple(n, planes)
    before, after = evaluate(w, inter), evaluate(pw, inter)
    ratio = after / before
    contrast_planes = list(range(1, n - 1)) + [n]
    ct = _interleaved_tuple(n, contrast_planes)
    contrast_ratio = evaluate(pw, ct) / evaluate(w, ct)
    expected = s ** (2 * n - 2)
    witness = {
        "ratio": ratio,
        "expected_ratio": expected,
        "interleaved_value": before,
        "interleaved_pulled_back": after,
        "blocked_value": evaluate(w, blocked),
        "blocked_pulled_back": evaluate(pw, blocked),
        "quoted_value": (-1) ** n * factorial(n - 1),
        "quoted_sign_matches_interleaved": (-1) ** n * factorial(n - 1) == before,
        "quoted_sign_matches_blocked": (-1) ** n * factorial(n - 1) == evaluate(w, blocked),
        "contrast_planes": contrast_planes,
        "contrast_ratio": contrast_ratio,
    }
    return CheckReport("counterexample.scaling_factor", {"n": n, "scale": s}, ratio == expected, witness)


def counterexample_checks(n: int, s) -> list[CheckReport]:
    f = counterexample_map(n, s)
    out = [verify_volume_preserving(f)]
    out += [verify_not_k_preserving(f, k) for k in range(1, n)]
    out.append(scaling_factor_check(n, s))
    return out
