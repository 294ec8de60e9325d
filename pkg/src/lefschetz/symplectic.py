"""Linear symplectic generators, torus weights, orbit spans and large families.

A generator word ``[g_1, ..., g_m]`` names the map g_1 o g_2 o ... o g_m, so
pulling a form back along the word applies g_1^* first and g_m^* last.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from math import comb
from typing import Sequence

from . import linalg
from .exterior import (
    Form,
    LinearMap,
    as_scalar,
    form_power,
    pullback,
    standard_symplectic_form,
)
from .report import CheckReport, fraction_str


class NotSymplecticError(ValueError):
    pass


@dataclass(frozen=True)
class SymplecticMatrix(LinearMap):
    """A linear map with T^*omega = omega, checked at construction."""

    def __post_init__(self):
        super().__post_init__()
        omega = standard_symplectic_form(self.n)
        if pullback(self, omega) != omega:
            raise NotSymplecticError("T^*omega != omega")
        if self.determinant() != 1:
            raise NotSymplecticError("symplectic map with determinant != 1")

    @classmethod
    def of(cls, T: LinearMap) -> "SymplecticMatrix":
        return cls(T.n, T.matrix)


def _from_images(n: int, images: dict[int, dict[int, Fraction]]) -> LinearMap:
    """Build a map from new-coordinate rows: row i gives new coordinate i in old ones."""
    size = 2 * n
    m = [[Fraction(int(i == j)) for j in range(size)] for i in range(size)]
    for i, row in images.items():
        m[i - 1] = [Fraction(0)] * size
        for j, c in row.items():
            m[i - 1][j - 1] = Fraction(c)
    return LinearMap(n, m)


def torus_element(n: int, t: Sequence) -> SymplecticMatrix:
    """x_i -> t_i x_i, y_i -> y_i / t_i."""
    t = [as_scalar(v) for v in t]
    if len(t) != n:
        raise ValueError(f"need {n} torus parameters")
    if any(v == 0 for v in t):
        raise ValueError("torus parameters must be nonzero")
    return SymplecticMatrix.of(LinearMap.diagonal(n, t + [1 / v for v in t]))


def _check_planes(n: int, *planes: int) -> None:
    if any(not 1 <= p <= n for p in planes):
        raise ValueError(f"plane index out of range 1..{n}")


def plane_swap(n: int, r: int, i: int) -> SymplecticMatrix:
    """Exchange the (x_r, y_r) and (x_i, y_i) planes."""
    _check_planes(n, r, i)
    if r == i:
        raise ValueError("plane swap needs two distinct planes")
    return SymplecticMatrix.of(_from_images(n, {
        r: {i: 1}, i: {r: 1}, n + r: {n + i: 1}, n + i: {n + r: 1},
    }))


def shear_f_ij(n: int, i: int, j: int) -> SymplecticMatrix:
    """x_j -> x_j - x_i, y_i -> y_i + y_j."""
    _check_planes(n, i, j)
    if i == j:
        raise ValueError("shear needs i != j")
    return SymplecticMatrix.of(_from_images(n, {j: {j: 1, i: -1}, n + i: {n + i: 1, n + j: 1}}))


def rotation_j(n: int, j: int) -> SymplecticMatrix:
    """(x_j, y_j) -> (-y_j, x_j)."""
    _check_planes(n, j)
    return SymplecticMatrix.of(_from_images(n, {j: {n + j: -1}, n + j: {j: 1}}))


def hyperbolic_shear(n: int, r: int, s: int) -> SymplecticMatrix:
    """x_r -> x_r + y_s, x_s -> x_s + y_r."""
    _check_planes(n, r, s)
    if r == s:
        raise ValueError("hyperbolic shear needs r != s")
    return SymplecticMatrix.of(_from_images(n, {r: {r: 1, n + s: 1}, s: {s: 1, n + r: 1}}))


GENERATORS = {
    "torus": lambda n, *t: torus_element(n, t),
    "swap": plane_swap,
    "shear": shear_f_ij,
    "rotation": rotation_j,
    "hyperbolic": hyperbolic_shear,
}


def generator_matrix(n: int, gen: str, args: Sequence) -> LinearMap:
    if gen not in GENERATORS:
        raise ValueError(f"unknown generator {gen!r}")
    return GENERATORS[gen](n, *args)


def generator_catalog(n: int, torus_values: Sequence = (2, Fraction(1, 2))) -> list[tuple[str, tuple]]:
    """Deterministic generator list: torus, swaps, shears, rotations, hyperbolic shears."""
    out: list[tuple[str, tuple]] = []
    for p in range(n):
        for v in torus_values:
            t = [Fraction(1)] * n
            t[p] = Fraction(v)
            if t != [1] * n:
                out.append(("torus", tuple(t)))
    out += [("swap", (r, i)) for r, i in combinations(range(1, n + 1), 2)]
    out += [("shear", (i, j)) for i, j in permutations(range(1, n + 1), 2)]
    out += [("rotation", (j,)) for j in range(1, n + 1)]
    out += [("hyperbolic", (r, s)) for r, s in combinations(range(1, n + 1), 2)]
    return out


def word_json(word: Sequence[tuple[str, tuple]]) -> list[dict]:
    return [{"gen": g, "args": [fraction_str(a) if isinstance(a, Fraction) else a for a in args]}
            for g, args in word]


def word_from_json(data: Sequence[dict]) -> list[tuple[str, tuple]]:
    out = []
    for item in data:
        if not isinstance(item, dict) or "gen" not in item or "args" not in item:
            raise ValueError(f"malformed generator {item!r}")
        gen = item["gen"]
        args = tuple(Fraction(a) if gen == "torus" else int(a) for a in item["args"])
        out.append((gen, args))
    return out


def word_matrix(n: int, word: Sequence[tuple[str, tuple]]) -> LinearMap:
    T = LinearMap.identity(n)
    for gen, args in word:
        T = T @ generator_matrix(n, gen, args)
    return T


# weight spaces of the diagonal torus on 2-forms


@dataclass(frozen=True)
class WeightComponents:
    """Coordinates of a 2-form along dx_i^dx_j, dy_i^dy_j, dx_i^dy_j (i != j) and dx_i^dy_i."""

    n: int
    E: dict = field(default_factory=dict)
    E_prime: dict = field(default_factory=dict)
    F: dict = field(default_factory=dict)
    F_diag: dict = field(default_factory=dict)

    def reassemble(self) -> Form:
        n = self.n
        terms = {}
        terms.update({(i, j): c for (i, j), c in self.E.items()})
        terms.update({(n + i, n + j): c for (i, j), c in self.E_prime.items()})
        terms.update({(i, n + j): c for (i, j), c in self.F.items()})
        terms.update({(i, n + i): c for i, c in self.F_diag.items()})
        return Form(n, 2, terms)

    def nonzero_labels(self) -> list[str]:
        out = [f"E{i}{j}" for (i, j), c in self.E.items() if c]
        out += [f"E'{i}{j}" for (i, j), c in self.E_prime.items() if c]
        out += [f"F{i}{j}" for (i, j), c in self.F.items() if c]
        out += [f"F{i}" for i, c in self.F_diag.items() if c]
        return out


def weight_decompose(a: Form) -> WeightComponents:
    if a.degree != 2:
        raise ValueError("weight decomposition is defined on 2-forms")
    n = a.n
    E, Ep, F, Fd = {}, {}, {}, {}
    for (p, q), c in a.terms.items():
        if q <= n:
            E[(p, q)] = c
        elif p > n:
            Ep[(p - n, q - n)] = c
        elif q - n == p:
            Fd[p] = c
        else:
            F[(p, q - n)] = c
    return WeightComponents(n, E, Ep, F, Fd)


def torus_weight(label: str, ij: tuple, t: Sequence[Fraction]) -> Fraction:
    """Character by which the torus element t scales a weight component."""
    if label == "E":
        i, j = ij
        return t[i - 1] * t[j - 1]
    if label == "E_prime":
        i, j = ij
        return 1 / (t[i - 1] * t[j - 1])
    if label == "F":
        i, j = ij
        return t[i - 1] / t[j - 1]
    return Fraction(1)


# orbit span


def is_nondegenerate(a: Form) -> bool:
    return a.degree == 2 and not form_power(a, a.n).is_zero()


def is_proportional_to_omega(a: Form) -> bool:
    omega = standard_symplectic_form(a.n)
    return linalg.span_rank([a.terms, omega.terms]) <= 1


def _form_json(a: Form) -> dict:
    from .io import form_to_json
    return form_to_json(a)


def orbit_span(alpha: Form, budget: int, catalog: list | None = None) -> CheckReport:
    """Saturate span{T^*alpha : T a word of length <= budget} + <omega>.

    New orbit elements are generated breadth-first: at each level every
    generator is applied to the orbit elements that enlarged the span at the
    previous level, which is enough to span all words of that length.
    """
    n = alpha.n
    params = {"n": n, "alpha": alpha.pretty(), "budget": budget}
    if alpha.degree != 2:
        raise ValueError("orbit span is defined for 2-forms")
    if budget < 1:
        raise ValueError("budget must be at least 1")
    if not is_nondegenerate(alpha):
        return CheckReport("orbit_span", params, False, {"rejected": "degenerate: alpha^n = 0"})
    if is_proportional_to_omega(alpha):
        return CheckReport("orbit_span", params, False, {"rejected": "proportional to omega"})
    catalog = catalog if catalog is not None else generator_catalog(n)
    mats = [generator_matrix(n, g, a) for g, a in catalog]
    target = comb(2 * n, 2)
    omega = standard_symplectic_form(n)

    span = linalg.EchelonBasis()
    span.add(omega.terms)
    certificate = [{"word": [], "form": _form_json(omega), "note": "omega"}]
    span.add(alpha.terms)
    certificate.append({"word": [], "form": _form_json(alpha)})
    frontier = [((), alpha)]
    ranks = [len(span)]
    for _level in range(budget):
        if len(span) == target:
            break
        nxt = []
        for word, form in frontier:
            for gen, T in zip(catalog, mats):
                img = pullback(T, form)
                if span.add(img.terms):
                    w = word + (gen,)
                    nxt.append((w, img))
                    certificate.append({"word": word_json(w), "form": _form_json(img)})
        frontier = nxt
        ranks.append(len(span))
        if not frontier:
            break
    ok = len(span) == target
    return CheckReport("orbit_span", params, ok, {
        "rank": len(span), "target": target, "rank_by_level": ranks,
        "certificate": certificate if ok else None,
    })


def _in_span(forms: Sequence[Form], target: Form) -> bool:
    eb = linalg.EchelonBasis()
    for f in forms:
        eb.add(f.terms)
    return eb.contains(target.terms)


def _F(n, i, j):
    return Form(n, 2, {(i, n + j): 1})


def _E(n, i, j):
    return Form.monomial(n, (i, j))


def _Ep(n, i, j):
    return Form.monomial(n, (n + i, n + j))


def _swap_to(n: int, form: Form, moves: list[tuple[int, int]]) -> tuple[Form, list]:
    word = []
    for a, b in moves:
        if a != b:
            form = pullback(plane_swap(n, a, b), form)
            word.append(("swap", (a, b)))
    return form, word


def verify_span_steps(n: int, r: int = 1, s: int = 2) -> list[CheckReport]:
    """Check the three implications that close the loop over weight components.

    Each step starts from one synthetic weight component plus omega, derives new
    elements only by pulling back known elements along explicit symplectic maps
    and taking linear combinations, and checks membership of every target.
    """
    if n < 2:
        raise ValueError("the weight loop needs n >= 2")
    omega = standard_symplectic_form(n)
    planes = range(1, n + 1)
    reports = []

    # F_r => every F_i and F_ij
    known = [omega, _F(n, r, r)]
    identities = []
    ok = True
    for i in planes:
        if i != r:
            img = pullback(plane_swap(n, r, i), _F(n, r, r))
            ok &= img == _F(n, i, i)
            known.append(img)
    for i, j in permutations(planes, 2):
        diff = pullback(shear_f_ij(n, i, j), _F(n, i, i)) - _F(n, i, i)
        good = diff == _F(n, i, j)
        identities.append({"i": i, "j": j, "shear_identity": good})
        ok &= good
        known.append(diff)
    targets = [_F(n, i, j) for i in planes for j in planes]
    ok &= all(_in_span(known, t) for t in targets)
    reports.append(CheckReport("span_step.F_r_implies_F", {"n": n, "r": r}, ok,
                               {"shear_identities": identities, "targets": len(targets)}))

    # F_rs => every E_ij and E'_ij
    known = [omega, _F(n, r, s)]
    ok = True
    words = []
    for i, j in permutations(planes, 2):
        img, w1 = _swap_to(n, _F(n, r, s), [(r, i)])
        s_img = {r: i, i: r}.get(s, s)
        img, w2 = _swap_to(n, img, [(s_img, j)])
        ok &= img == _F(n, i, j)
        known.append(img)
        e_ij = pullback(rotation_j(n, j), img)
        ep_ij = pullback(rotation_j(n, i), img)
        ok &= e_ij == _E(n, i, j) and ep_ij == -_Ep(n, i, j)
        known += [e_ij, ep_ij]
        words.append({"i": i, "j": j, "swaps": word_json(w1 + w2)})
    targets = [_E(n, i, j) for i, j in combinations(planes, 2)] + \
              [_Ep(n, i, j) for i, j in combinations(planes, 2)]
    ok &= all(_in_span(known, t) for t in targets)
    reports.append(CheckReport("span_step.F_rs_implies_E", {"n": n, "r": r, "s": s}, ok,
                               {"swap_words": words, "targets": len(targets)}))

    # E_rs => every F_i, through the hyperbolic shear and averaging
    known = [omega, _E(n, r, s)]
    both = pullback(rotation_j(n, s), pullback(rotation_j(n, r), _E(n, r, s)))
    ok = both == _Ep(n, r, s)
    known.append(both)
    alphas = []
    identities = []
    for i in planes:
        if i == r:
            alphas.append(Form.zero(n, 2))
            continue
        e_ri, _ = _swap_to(n, _E(n, r, s), [(s, i)])
        ep_ri, _ = _swap_to(n, _Ep(n, r, s), [(s, i)])
        known += [e_ri, ep_ri]
        a_i = pullback(hyperbolic_shear(n, r, i), e_ri) - e_ri + ep_ri
        good = a_i == _F(n, r, r) - _F(n, i, i)
        identities.append({"r": r, "s": i, "hyperbolic_identity": good})
        ok &= good
        alphas.append(a_i)
        known.append(a_i)
    total = omega
    for a_i in alphas:
        total = total + a_i
    averaged = total.scale(Fraction(1, n))
    averaging_ok = averaged == _F(n, r, r)
    ok &= averaging_ok
    known.append(averaged)
    for i in planes:
        if i != r:
            known.append(pullback(plane_swap(n, r, i), averaged))
    targets = [_F(n, i, i) for i in planes]
    ok &= all(_in_span(known, t) for t in targets)
    reports.append(CheckReport("span_step.E_rs_implies_F_i", {"n": n, "r": r, "s": s}, ok,
                               {"hyperbolic_identities": identities, "averaging_coefficient": Fraction(1, n),
                                "averaging_identity": averaging_ok, "targets": len(targets)}))
    return reports


# large families


@dataclass
class LargeFamily:
    n: int
    maps: list
    words: list
    forms: list
    rank: int
    target: int

    @property
    def complete(self) -> bool:
        return self.rank == self.target


def default_seed_pool(n: int, scale=2) -> list[tuple[str, LinearMap]]:
    """The volume-preserving diagonal map with its odd coordinate moved to each plane."""
    from .counterexample import counterexample_map
    f = counterexample_map(n, scale).matrix
    pool = [("id", LinearMap.identity(n)), (f"f^{scale}", f)]
    for p in range(1, n):
        P = plane_swap(n, p, n)
        pool.append((f"swap({p},{n}) f^{scale} swap({p},{n})", P @ f @ P))
    return pool


def construct_large_family(n: int, pool: list | None = None, budget: int = 3) -> LargeFamily:
    """Greedy family of maps T with (T^*omega)^n = omega^n and spanning (n-1)-st powers."""
    if n < 2:
        raise ValueError("large families need n >= 2")
    omega = standard_symplectic_form(n)
    vol = form_power(omega, n)
    pool = pool if pool is not None else default_seed_pool(n)
    catalog = generator_catalog(n)
    mats = [generator_matrix(n, g, a) for g, a in catalog]
    target = comb(2 * n, 2 * n - 2)
    span = linalg.EchelonBasis()
    family = LargeFamily(n, [], [], [], 0, target)
    seen: set = set()

    def consider(name, T, word, form):
        if form in seen:
            return False
        seen.add(form)
        if form_power(form, n) != vol:
            raise ValueError(f"candidate {name} does not preserve omega^n")
        if span.add(form_power(form, n - 1).terms):
            family.maps.append(T)
            family.words.append({"seed": name, "word": word_json(word)})
            family.forms.append(form)
        return len(span) == target

    frontier = []
    for name, S in pool:
        form = pullback(S, omega)
        if form_power(form, n) != vol:
            raise ValueError(f"seed {name} does not preserve omega^n")
        frontier.append((name, S, (), form))
        if consider(name, S, (), form):
            break
    for _ in range(budget):
        if len(span) == target:
            break
        nxt = []
        for name, T, word, form in frontier:
            for gen, G in zip(catalog, mats):
                img = pullback(G, form)
                if img in seen:
                    continue
                TG = T @ G
                item = (name, TG, word + (gen,), img)
                nxt.append(item)
                if consider(*item):
                    break
            if len(span) == target:
                break
        frontier = nxt
    family.rank = len(span)
    return family


def large_family_report(n: int, budget: int = 3) -> CheckReport:
    fam = construct_large_family(n, budget=budget)
    omega = standard_symplectic_form(n)
    vol = form_power(omega, n)
    members_ok = all(form_power(pullback(T, omega), n) == vol and pullback(T, omega) == f
                     for T, f in zip(fam.maps, fam.forms))
    return CheckReport("large_family", {"n": n, "budget": budget}, fam.complete and members_ok, {
        "rank": fam.rank, "target": fam.target, "members": len(fam.maps),
        "members_preserve_volume": members_ok,
        "words": fam.words,
    })
