"""Compatible triples (g, J, omega), the Hodge star and the Lefschetz operators.

Operator matrices are kept column-sparse: column j is the image of the j-th
basis monomial, basis monomials of each degree being ordered lexicographically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Sequence

from . import linalg
from .exterior import (
    DimensionError,
    Form,
    LinearMap,
    Vector,
    basis,
    pullback,
    sort_sign,
    standard_symplectic_form,
    wedge,
)

Matrix = tuple[tuple[Fraction, ...], ...]


def _mat(rows) -> Matrix:
    return tuple(tuple(Fraction(c) for c in r) for r in rows)


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(r, c)), Fraction(0)) for c in cols) for r in a)


def _transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def _inverse(a: Matrix) -> Matrix:
    size = len(a)
    cols = linalg.dense_columns(a)
    inv_cols = []
    for j in range(size):
        x = linalg.solve(cols, {j: Fraction(1)})
        if x is None:
            raise ValueError("matrix is singular")
        inv_cols.append([x.get(i, Fraction(0)) for i in range(size)])
    return _transpose(_mat(inv_cols))


def _identity(size: int) -> Matrix:
    return _mat([[int(i == j) for j in range(size)] for i in range(size)])


def standard_complex_structure(n: int) -> LinearMap:
    """J e_i = e_i', J e_i' = -e_i."""
    size = 2 * n
    m = [[0] * size for _ in range(size)]
    for i in range(n):
        m[n + i][i] = 1
        m[i][n + i] = -1
    return LinearMap(n, m)


def exact_sqrt(q: Fraction) -> Fraction:
    if q < 0:
        raise ValueError("square root of a negative number")
    num, den = isqrt(q.numerator), isqrt(q.denominator)
    if num * num != q.numerator or den * den != q.denominator:
        raise ValueError(f"{q} is not the square of a rational")
    return Fraction(num, den)


@dataclass(frozen=True)
class CompatibleTriple:
    """Inner product g, g-compatible complex structure J and omega = g(J., .)."""

    n: int
    g: Matrix
    J: LinearMap
    omega: Form

    def __post_init__(self):
        object.__setattr__(self, "g", _mat(self.g))
        self.validate()
        object.__setattr__(self, "_standard", self.g == _identity(2 * self.n))
        object.__setattr__(self, "_hash", hash((self.n, self.g, self.J, self.omega)))

    def __hash__(self):
        return self._hash

    @classmethod
    def standard(cls, n: int) -> "CompatibleTriple":
        return cls(n, _identity(2 * n), standard_complex_structure(n), standard_symplectic_form(n))

    @classmethod
    def conjugated(cls, A: LinearMap) -> "CompatibleTriple":
        """Transport the standard triple along an invertible rational map A."""
        n = A.n
        a = A.matrix
        g = _matmul(_transpose(a), a)
        J0 = standard_complex_structure(n).matrix
        J = LinearMap(n, _matmul(_inverse(a), _matmul(J0, a)))
        return cls(n, g, J, pullback(A, standard_symplectic_form(n)))

    def validate(self) -> None:
        size = 2 * self.n
        if len(self.g) != size or any(len(r) != size for r in self.g):
            raise DimensionError("metric has the wrong shape")
        if self.g != _transpose(self.g):
            raise ValueError("metric is not symmetric")
        J = self.J.matrix
        if _matmul(J, J) != _mat([[-int(i == j) for j in range(size)] for i in range(size)]):
            raise ValueError("J o J != -id")
        if _matmul(_transpose(J), _matmul(self.g, J)) != self.g:
            raise ValueError("J is not a g-isometry")
        gJ = _matmul(self.g, J)
        for a in range(size):
            for b in range(a + 1, size):
                # omega(e_a, e_b) = g(J e_a, e_b)
                if self.omega.coeff((a + 1, b + 1)) != gJ[b][a]:
                    raise ValueError(f"omega != g(J.,.) on (e_{a + 1}, e_{b + 1})")
        if self.omega.degree != 2 or self.omega.n != self.n:
            raise ValueError("omega must be a 2-form on the same space")

    @property
    def is_standard_metric(self) -> bool:
        return self._standard


@lru_cache(maxsize=None)
def _dual_gram(triple: CompatibleTriple) -> Matrix:
    if triple.is_standard_metric:
        return triple.g
    return _inverse(triple.g)


def _monomial_product(triple: CompatibleTriple, I: tuple, J: tuple) -> Fraction:
    if triple.is_standard_metric:
        return Fraction(int(I == J))
    if not I:
        return Fraction(1)
    G = _dual_gram(triple)
    return linalg.determinant([[G[i - 1][j - 1] for j in J] for i in I])


def induced_inner_product(a: Form, b: Form, triple: CompatibleTriple) -> Fraction:
    """Gram-determinant extension of the (dual) metric to degree-k forms."""
    if a.degree != b.degree:
        raise DimensionError("inner product of forms of different degrees")
    if a.n != triple.n or b.n != triple.n:
        raise DimensionError("form and triple live on different spaces")
    if triple.is_standard_metric:
        return sum((c * b.terms.get(I, 0) for I, c in a.terms.items()), Fraction(0))
    total = Fraction(0)
    for I, ca in a.terms.items():
        for J, cb in b.terms.items():
            total += ca * cb * _monomial_product(triple, I, J)
    return total


def _oriented_basis_sign(triple: CompatibleTriple) -> int:
    """Orientation of a g-orthogonal basis (u_1, J u_1, ..., u_n, J u_n)."""
    n, G, J = triple.n, triple.g, triple.J
    size = 2 * n

    def ip(v, w):
        return sum((v[i] * G[i][j] * w[j] for i in range(size) for j in range(size) if v[i] and w[j]),
                   Fraction(0))

    chosen: list[list[Fraction]] = []
    for _ in range(n):
        for cand in range(size):
            u = [Fraction(int(i == cand)) for i in range(size)]
            for w in chosen:
                c = ip(u, w) / ip(w, w)
                u = [a - c * b for a, b in zip(u, w)]
            if any(u):
                break
        Ju = list(J.apply(Vector(n, tuple(u))).coords)
        chosen += [u, Ju]
    det = linalg.determinant(_transpose(_mat(chosen)))
    return 1 if det > 0 else -1


@lru_cache(maxsize=None)
def volume_form(triple: CompatibleTriple) -> Form:
    """Top form equal to 1 on g-orthonormal bases oriented like J."""
    n = triple.n
    scale = exact_sqrt(linalg.determinant(triple.g))
    return Form(n, 2 * n, {tuple(range(1, 2 * n + 1)): _oriented_basis_sign(triple) * scale})


def _volume_coefficient(triple: CompatibleTriple) -> Fraction:
    return next(iter(volume_form(triple).terms.values()))


def _complement(n: int, I: tuple) -> tuple:
    s = set(I)
    return tuple(i for i in range(1, 2 * n + 1) if i not in s)


def hodge_star(a: Form, triple: CompatibleTriple) -> Form:
    """The (2n-k)-form *a with alpha ^ *a = g(alpha, a) vol for every k-form alpha."""
    n = triple.n
    if a.n != n:
        raise DimensionError("form and triple live on different spaces")
    k = a.degree
    v = _volume_coefficient(triple)
    out = {}
    if triple.is_standard_metric:
        pairs = a.terms.items()
    else:
        pairs = ((I, induced_inner_product(Form(n, k, {I: 1}), a, triple)) for I in basis(n, k))
    for I, gi in pairs:
        if not gi:
            continue
        Ic = _complement(n, I)
        sign, _ = sort_sign(I + Ic)
        out[Ic] = gi * v * sign
    return Form(n, 2 * n - k, out)


@lru_cache(maxsize=None)
def _star_solver(triple: CompatibleTriple, k: int) -> linalg.EchelonBasis:
    """Echelon basis of the star images of degree-k monomials."""
    eb = linalg.EchelonBasis(track=True)
    for j, I in enumerate(basis(triple.n, k)):
        eb.add(hodge_star(Form(triple.n, k, {I: 1}), triple).terms, label=j)
    return eb


def hodge_star_inverse(a: Form, triple: CompatibleTriple) -> Form:
    """Solve *b = a for b (computed, not assumed to be a signed star)."""
    n = triple.n
    k = 2 * n - a.degree
    eb = _star_solver(triple, k)
    residual, combo = eb.reduce(a.terms, {})
    if residual:
        raise ArithmeticError("Hodge star is not surjective; triple is invalid")
    B = basis(n, k)
    return Form(n, k, {B[j]: -c for j, c in combo.items()})


def op_L(a: Form, triple: CompatibleTriple) -> Form:
    return wedge(triple.omega, a)


def op_L_power(a: Form, i: int, triple: CompatibleTriple) -> Form:
    for _ in range(i):
        a = op_L(a, triple)
    return a


def op_H(a: Form, triple: CompatibleTriple) -> Form:
    return a.scale(a.degree - triple.n)


@lru_cache(maxsize=None)
def _gram_solver(triple: CompatibleTriple, k: int) -> linalg.EchelonBasis:
    n = triple.n
    B = basis(n, k)
    eb = linalg.EchelonBasis(track=True)
    for j, J in enumerate(B):
        eb.add({i: _monomial_product(triple, I, J) for i, I in enumerate(B)}, label=j)
    return eb


def _lambda_orthonormal(a: Form, triple: CompatibleTriple) -> Form:
    # monomials are orthonormal, so the adjoint is the transpose of L:
    # <L dx_I, dx_K> is the coefficient of dx_K in omega ^ dx_I
    n = triple.n
    acc: dict = {}
    for K, c in a.terms.items():
        sK = set(K)
        for P, w in triple.omega.terms.items():
            if not sK.issuperset(P):
                continue
            I = tuple(i for i in K if i not in P)
            sign, _ = sort_sign(P + I)
            acc[I] = acc.get(I, Fraction(0)) + sign * w * c
    return Form(n, a.degree - 2, acc)


def op_Lambda(a: Form, triple: CompatibleTriple, method: str = "adjoint") -> Form:
    """Dual Lefschetz operator.

    ``method="adjoint"`` solves g(alpha, Lambda a) = g(L alpha, a) for all
    (k-2)-forms alpha; ``method="star"`` computes *^{-1} L * a.
    """
    n, k = triple.n, a.degree
    if k < 2:
        return Form.zero(n, max(k - 2, 0))
    if method == "star":
        return hodge_star_inverse(op_L(hodge_star(a, triple), triple), triple)
    if method != "adjoint":
        raise ValueError(f"unknown method {method!r}")
    B = basis(n, k - 2)
    if triple.is_standard_metric:
        return _lambda_orthonormal(a, triple)
    rhs = {}
    for i, I in enumerate(B):
        val = induced_inner_product(op_L(Form(n, k - 2, {I: 1}), triple), a, triple)
        if val:
            rhs[i] = val
    residual, combo = _gram_solver(triple, k - 2).reduce(rhs, {})
    assert not residual, "Gram matrix is singular"
    return Form(n, k - 2, {B[j]: -c for j, c in combo.items()})


# operator matrices


@lru_cache(maxsize=None)
def _positions(n: int, k: int) -> dict:
    return {I: j for j, I in enumerate(basis(n, k))}


@dataclass(frozen=True)
class OperatorMatrix:
    """Matrix of a linear operator between degree-``source`` and degree-``target`` forms."""

    n: int
    source: int
    target: int
    columns: tuple[Form, ...]

    @property
    def rows(self) -> int:
        return len(basis(self.n, self.target))

    @property
    def cols(self) -> int:
        return len(self.columns)

    def entries(self) -> list[list[Fraction]]:
        rows = basis(self.n, self.target)
        return [[col.terms.get(I, Fraction(0)) for col in self.columns] for I in rows]

    def apply(self, a: Form) -> Form:
        if a.degree != self.source:
            raise DimensionError(f"operator acts on degree {self.source}, got {a.degree}")
        pos = _positions(self.n, self.source)
        acc: dict = {}
        for I, c in a.terms.items():
            for J, v in self.columns[pos[I]].terms.items():
                acc[J] = acc.get(J, Fraction(0)) + c * v
        return Form(self.n, self.target, acc)

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if other.target != self.source or other.n != self.n:
            raise DimensionError("incompatible operator composition")
        return OperatorMatrix(self.n, other.source, self.target,
                              tuple(self.apply(col) for col in other.columns))

    def _same_shape(self, other: "OperatorMatrix"):
        if (self.n, self.source, self.target) != (other.n, other.source, other.target):
            raise DimensionError("operators have different shapes")

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._same_shape(other)
        return OperatorMatrix(self.n, self.source, self.target,
                              tuple(a + b for a, b in zip(self.columns, other.columns)))

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._same_shape(other)
        return OperatorMatrix(self.n, self.source, self.target,
                              tuple(a - b for a, b in zip(self.columns, other.columns)))

    def scale(self, c) -> "OperatorMatrix":
        return OperatorMatrix(self.n, self.source, self.target, tuple(col.scale(c) for col in self.columns))

    def is_zero(self) -> bool:
        return all(col.is_zero() for col in self.columns)

    def transpose(self) -> "OperatorMatrix":
        pos = _positions(self.n, self.target)
        src = basis(self.n, self.source)
        acc: list[dict] = [{} for _ in range(len(pos))]
        for j, col in enumerate(self.columns):
            for I, c in col.terms.items():
                acc[pos[I]][src[j]] = c
        return OperatorMatrix(self.n, self.target, self.source,
                              tuple(Form(self.n, self.source, d) for d in acc))

    def rank(self) -> int:
        return linalg.rank(self.entries()) if self.columns and self.rows else 0

    def kernel(self) -> list[Form]:
        src = basis(self.n, self.source)
        vecs = linalg.kernel([col.terms for col in self.columns])
        return [Form(self.n, self.source, {src[j]: c for j, c in v.items()}) for v in vecs]

    def to_json(self) -> dict:
        from .report import fraction_str
        return {"rows": self.rows, "cols": self.cols,
                "entries": [[fraction_str(c) for c in row] for row in self.entries()]}


def matrix_of(fn, n: int, source: int, target: int) -> OperatorMatrix:
    cols = []
    for I in basis(n, source):
        img = fn(Form(n, source, {I: 1}))
        if img.degree != target:
            raise DimensionError(f"operator produced degree {img.degree}, expected {target}")
        cols.append(img)
    return OperatorMatrix(n, source, target, tuple(cols))


def identity_matrix(n: int, k: int) -> OperatorMatrix:
    return matrix_of(lambda a: a, n, k, k)


OPERATORS = ("L", "Lambda", "Lambda_star", "H", "star", "star_inv")


@lru_cache(maxsize=None)
def operator_matrix(op: str, k: int, triple: CompatibleTriple) -> OperatorMatrix:
    """Exact matrix of ``op`` restricted to degree-k forms.

    ``op`` is one of L, Lambda, Lambda_star, H, star, star_inv, or ``Lpow:i``.
    Targets outside 0..2n are represented as the zero operator into degree
    ``max(target, 0)`` only for Lambda on degrees 0 and 1.
    """
    n = triple.n
    if not 0 <= k <= 2 * n:
        raise ValueError(f"degree {k} out of range 0..{2 * n}")
    if op.startswith("Lpow:"):
        i = int(op.split(":", 1)[1])
        if i < 0:
            raise ValueError("negative power")
        if i == 0:
            return identity_matrix(n, k)
        if k + 2 * i > 2 * n:
            return OperatorMatrix(n, k, k + 2 * i, tuple(Form.zero(n, k + 2 * i) for _ in basis(n, k)))
        prev = operator_matrix(f"Lpow:{i - 1}", k, triple)
        return operator_matrix("L", k + 2 * (i - 1), triple) @ prev
    if op == "L":
        if k + 2 > 2 * n:
            return OperatorMatrix(n, k, k + 2, tuple(Form.zero(n, k + 2) for _ in basis(n, k)))
        return matrix_of(lambda a: op_L(a, triple), n, k, k + 2)
    if op == "Lambda":
        return matrix_of(lambda a: op_Lambda(a, triple, "adjoint"), n, k, max(k - 2, 0))
    if op == "Lambda_star":
        return matrix_of(lambda a: op_Lambda(a, triple, "star"), n, k, max(k - 2, 0))
    if op == "H":
        return matrix_of(lambda a: op_H(a, triple), n, k, k)
    if op == "star":
        return matrix_of(lambda a: hodge_star(a, triple), n, k, 2 * n - k)
    if op == "star_inv":
        return matrix_of(lambda a: hodge_star_inverse(a, triple), n, k, 2 * n - k)
    raise ValueError(f"unknown operator {op!r}")


def primitive_space_basis(k: int, triple: CompatibleTriple) -> list[Form]:
    """Basis of the primitive k-forms, i.e. the kernel of Lambda on degree k."""
    n = triple.n
    if not 0 <= k <= 2 * n:
        raise ValueError(f"degree {k} out of range 0..{2 * n}")
    if k < 2:
        return [Form(n, k, {I: 1}) for I in basis(n, k)]
    return operator_matrix("Lambda", k, triple).kernel()


@dataclass(frozen=True)
class PrimitiveDecomposition:
    form: Form
    components: tuple[tuple[int, Form], ...]

    def reconstruct(self, triple: CompatibleTriple) -> Form:
        out = Form.zero(self.form.n, self.form.degree)
        for i, beta in self.components:
            out = out + op_L_power(beta, i, triple)
        return out

    def component(self, i: int) -> Form:
        return dict(self.components)[i]


def primitive_decompose(a: Form, triple: CompatibleTriple) -> PrimitiveDecomposition:
    """Write a = sum_i L^i beta_i with every beta_i primitive (unique)."""
    n, k = triple.n, a.degree
    if k > 2 * n:
        raise ValueError("degree exceeds 2n")
    candidates = []  # (i, primitive basis form, L^i of it)
    for i in range(k // 2 + 1):
        for p in primitive_space_basis(k - 2 * i, triple):
            image = op_L_power(p, i, triple)
            # L^i vanishes on P^{k-2i} once i exceeds n - (k - 2i)
            if not image.is_zero():
                candidates.append((i, p, image))
    x = linalg.solve([c[2].terms for c in candidates], a.terms)
    if x is None:
        raise ArithmeticError("form is not in the span of the Lefschetz pieces")
    comps = []
    for i in range(k // 2 + 1):
        beta = Form.zero(n, k - 2 * i)
        for j, (ii, p, _) in enumerate(candidates):
            if ii == i and j in x:
                beta = beta + p.scale(x[j])
        comps.append((i, beta))
    return PrimitiveDecomposition(a, tuple(comps))
