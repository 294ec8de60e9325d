"""Sparse exact exterior algebra on R^{2n}.

Coordinates are numbered 1..2n with x_i <-> i and y_i <-> n + i.  A basis
monomial dx_{i_1} ^ ... ^ dx_{i_k} is stored as the strictly increasing tuple
``(i_1, ..., i_k)``; every sign is normalised when a term is inserted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Mapping, Sequence, Tuple, Union

Scalar = Fraction
MultiIndex = Tuple[int, ...]
Number = Union[int, Fraction]


class DimensionError(ValueError):
    """Operands live on different ambient spaces or have the wrong arity."""


def as_scalar(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"refusing inexact or boolean scalar {value!r}")
    return Fraction(value)


def sort_sign(indices: Sequence[int]) -> Tuple[int, MultiIndex]:
    """Return ``(sign, sorted_indices)``; sign is 0 when an index repeats."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, ()
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(idx)


def basis(n: int, k: int) -> list[MultiIndex]:
    """Lexicographically ordered monomial basis of the degree-k forms."""
    return list(combinations(range(1, 2 * n + 1), k))


def dimension(n: int, k: int) -> int:
    if k < 0 or k > 2 * n:
        return 0
    return comb(2 * n, k)


def x(i: int) -> int:
    return i


def y(n: int, i: int) -> int:
    return n + i


@dataclass(frozen=True)
class Form:
    """A degree-k alternating form with sparse rational coefficients."""

    n: int
    degree: int
    terms: Mapping[MultiIndex, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("ambient half-dimension must be positive")
        if not 0 <= self.degree:
            raise ValueError("degree must be non-negative")
        clean = {}
        for idx, c in self.terms.items():
            idx = tuple(idx)
            c = as_scalar(c)
            if len(idx) != self.degree:
                raise ValueError(f"monomial {idx} does not have degree {self.degree}")
            if any(b <= a for a, b in zip(idx, idx[1:])):
                raise ValueError(f"monomial {idx} is not strictly increasing")
            if idx and (idx[0] < 1 or idx[-1] > 2 * self.n):
                raise ValueError(f"monomial {idx} out of range 1..{2 * self.n}")
            if c:
                clean[idx] = c
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    # construction helpers

    @classmethod
    def zero(cls, n: int, degree: int) -> "Form":
        return cls(n, degree, {})

    @classmethod
    def constant(cls, n: int, value: Number = 1) -> "Form":
        return cls(n, 0, {(): value})

    @classmethod
    def monomial(cls, n: int, indices: Sequence[int], coeff: Number = 1) -> "Form":
        """Monomial in arbitrary index order; the sign is normalised."""
        sign, idx = sort_sign(indices)
        if sign == 0:
            return cls.zero(n, len(indices))
        return cls(n, len(idx), {idx: sign * as_scalar(coeff)})

    @classmethod
    def from_terms(cls, n: int, degree: int, items: Iterable[Tuple[Sequence[int], Number]]) -> "Form":
        """Accumulate possibly unsorted/repeated monomials."""
        acc: dict[MultiIndex, Fraction] = {}
        for indices, c in items:
            if len(indices) != degree:
                raise ValueError(f"monomial {tuple(indices)} does not have degree {degree}")
            sign, idx = sort_sign(indices)
            if sign:
                acc[idx] = acc.get(idx, Fraction(0)) + sign * as_scalar(c)
        return cls(n, degree, acc)

    # vector-space structure

    def _check(self, other: "Form"):
        if not isinstance(other, Form):
            return NotImplemented
        if other.n != self.n:
            raise DimensionError(f"ambient mismatch: n={self.n} vs n={other.n}")
        if other.degree != self.degree:
            raise DimensionError(f"degree mismatch: {self.degree} vs {other.degree}")
        return None

    def __add__(self, other: "Form") -> "Form":
        if self._check(other) is NotImplemented:
            return NotImplemented
        acc = dict(self.terms)
        for idx, c in other.terms.items():
            acc[idx] = acc.get(idx, Fraction(0)) + c
        return Form(self.n, self.degree, acc)

    def __neg__(self) -> "Form":
        return Form(self.n, self.degree, {i: -c for i, c in self.terms.items()})

    def __sub__(self, other: "Form") -> "Form":
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def scale(self, c: Number) -> "Form":
        c = as_scalar(c)
        return Form(self.n, self.degree, {i: c * v for i, v in self.terms.items()})

    def __mul__(self, c):
        if isinstance(c, Form):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __xor__(self, other: "Form") -> "Form":
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return (self.n, self.degree, self.terms) == (other.n, other.degree, other.terms)

    def __hash__(self):
        return hash((self.n, self.degree, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def coeff(self, indices: Sequence[int]) -> Fraction:
        """Coefficient of the monomial written in the given (any) order."""
        sign, idx = sort_sign(indices)
        if sign == 0:
            return Fraction(0)
        return sign * self.terms.get(idx, Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        if not self.terms:
            return f"Form(n={self.n}, degree={self.degree}, 0)"
        parts = [f"{c}*{list(i)}" for i, c in self.terms.items()]
        return f"Form(n={self.n}, degree={self.degree}, " + " + ".join(parts) + ")"

    def pretty(self) -> str:
        """Human-readable rendering using dx_i / dy_i names."""
        if not self.terms:
            return "0"
        out = []
        for idx, c in self.terms.items():
            name = "^".join(coordinate_name(self.n, i) for i in idx) or "1"
            out.append(f"{c}*{name}" if c != 1 else name)
        return " + ".join(out)


def coordinate_name(n: int, i: int) -> str:
    return f"dx{i}" if i <= n else f"dy{i - n}"


@dataclass(frozen=True)
class Vector:
    n: int
    coords: Tuple[Fraction, ...]

    def __post_init__(self):
        coords = tuple(as_scalar(c) for c in self.coords)
        if len(coords) != 2 * self.n:
            raise DimensionError(f"vector needs {2 * self.n} coordinates, got {len(coords)}")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def basis_vector(cls, n: int, i: int) -> "Vector":
        return cls(n, tuple(1 if j == i else 0 for j in range(1, 2 * n + 1)))

    def __getitem__(self, i: int) -> Fraction:
        """1-based coordinate access."""
        return self.coords[i - 1]

    def __add__(self, other: "Vector") -> "Vector":
        return Vector(self.n, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def scale(self, c: Number) -> "Vector":
        return Vector(self.n, tuple(as_scalar(c) * a for a in self.coords))


def e(n: int, i: int) -> Vector:
    """d/dx_i."""
    return Vector.basis_vector(n, i)


def e_prime(n: int, i: int) -> Vector:
    """d/dy_i."""
    return Vector.basis_vector(n, n + i)


@dataclass(frozen=True)
class LinearMap:
    """2n x 2n matrix; column j is the image of the j-th basis vector."""

    n: int
    matrix: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(as_scalar(c) for c in row) for row in self.matrix)
        size = 2 * self.n
        if len(rows) != size or any(len(r) != size for r in rows):
            raise DimensionError(f"linear map must be {size}x{size}")
        object.__setattr__(self, "matrix", rows)

    @classmethod
    def identity(cls, n: int) -> "LinearMap":
        size = 2 * n
        return cls(n, tuple(tuple(int(i == j) for j in range(size)) for i in range(size)))

    @classmethod
    def diagonal(cls, n: int, entries: Sequence[Number]) -> "LinearMap":
        size = 2 * n
        if len(entries) != size:
            raise DimensionError(f"need {size} diagonal entries")
        return cls(n, tuple(tuple(entries[i] if i == j else 0 for j in range(size)) for i in range(size)))

    def entry(self, i: int, j: int) -> Fraction:
        """1-based matrix entry."""
        return self.matrix[i - 1][j - 1]

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        """Composition: (self @ other)(v) = self(other(v))."""
        if not isinstance(other, LinearMap):
            return NotImplemented
        if other.n != self.n:
            raise DimensionError("composition of maps on different spaces")
        size = 2 * self.n
        cols = list(zip(*other.matrix))
        return LinearMap(self.n, tuple(
            tuple(sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in cols)
            for row in self.matrix
        ))

    def apply(self, v: Vector) -> Vector:
        if v.n != self.n:
            raise DimensionError("vector and map live on different spaces")
        return Vector(self.n, tuple(sum((a * b for a, b in zip(row, v.coords)), Fraction(0))
                                    for row in self.matrix))

    def transpose(self) -> "LinearMap":
        return LinearMap(self.n, tuple(zip(*self.matrix)))

    def determinant(self) -> Fraction:
        from .linalg import determinant
        return determinant([list(r) for r in self.matrix])

    def is_identity(self) -> bool:
        return self.matrix == LinearMap.identity(self.n).matrix


def _same_n(a: Form, b: Form) -> None:
    if a.n != b.n:
        raise DimensionError(f"ambient mismatch: n={a.n} vs n={b.n}")


def _shuffle_sign(I: MultiIndex, J: MultiIndex) -> int:
    inversions = sum(1 for a in I for b in J if a > b)
    return -1 if inversions % 2 else 1


def wedge(a: Form, b: Form) -> Form:
    _same_n(a, b)
    degree = a.degree + b.degree
    if degree > 2 * a.n:
        return Form.zero(a.n, degree)
    acc: dict[MultiIndex, Fraction] = {}
    for I, ca in a.terms.items():
        sI = set(I)
        for J, cb in b.terms.items():
            if sI.intersection(J):
                continue
            K = tuple(sorted(I + J))
            acc[K] = acc.get(K, Fraction(0)) + _shuffle_sign(I, J) * ca * cb
    return Form(a.n, degree, acc)


def wedge_all(forms: Sequence[Form], n: int | None = None) -> Form:
    if not forms:
        if n is None:
            raise ValueError("empty wedge needs the ambient dimension")
        return Form.constant(n)
    out = forms[0]
    for f in forms[1:]:
        out = wedge(out, f)
    return out


def form_power(a: Form, k: int) -> Form:
    if k < 0:
        raise ValueError("power must be non-negative")
    out = Form.constant(a.n)
    for _ in range(k):
        out = wedge(out, a)
    return out


def standard_symplectic_form(n: int) -> Form:
    if n < 1:
        raise ValueError("n must be at least 1")
    return Form(n, 2, {(i, n + i): 1 for i in range(1, n + 1)})


def omega_power(n: int, k: int) -> Form:
    return form_power(standard_symplectic_form(n), k)


def _det(m: list[list[Fraction]]) -> Fraction:
    from .linalg import determinant
    return determinant(m)


def evaluate(a: Form, vs: Sequence[Vector]) -> Fraction:
    """Value of the form on a tuple of vectors (coefficient times minor)."""
    if len(vs) != a.degree:
        raise DimensionError(f"degree-{a.degree} form evaluated on {len(vs)} vectors")
    for v in vs:
        if v.n != a.n:
            raise DimensionError("vector and form live on different spaces")
    total = Fraction(0)
    for I, c in a.terms.items():
        if not I:
            total += c
            continue
        minor = [[v[i] for v in vs] for i in I]
        total += c * _det(minor)
    return total


def interior_product(X: Vector, a: Form) -> Form:
    if a.degree < 1:
        raise ValueError("interior product of a degree-0 form")
    if X.n != a.n:
        raise DimensionError("vector and form live on different spaces")
    acc: dict[MultiIndex, Fraction] = {}
    for I, c in a.terms.items():
        for pos, i in enumerate(I):
            xi = X[i]
            if not xi:
                continue
            rest = I[:pos] + I[pos + 1:]
            term = (-1) ** pos * xi * c
            acc[rest] = acc.get(rest, Fraction(0)) + term
    return Form(a.n, a.degree - 1, acc)


def pullback(T: LinearMap, a: Form) -> Form:
    """T^*a, i.e. (T^*a)(v_1, ..., v_k) = a(T v_1, ..., T v_k)."""
    if T.n != a.n:
        raise DimensionError("map and form live on different spaces")
    n = a.n
    rows: dict[int, Form] = {}

    def row_form(i: int) -> Form:
        if i not in rows:
            rows[i] = Form(n, 1, {(j + 1,): c for j, c in enumerate(T.matrix[i - 1]) if c})
        return rows[i]

    out = Form.zero(n, a.degree)
    for I, c in a.terms.items():
        piece = Form.constant(n, c)
        for i in I:
            piece = wedge(piece, row_form(i))
            if piece.is_zero():
                break
        else:
            out = out + piece
    return out


def monomial_form(n: int, indices: Sequence[int], coeff: Number = 1) -> Form:
    return Form.monomial(n, indices, coeff)


def dx(n: int, i: int) -> Form:
    return Form(n, 1, {(i,): 1})


def dy(n: int, i: int) -> Form:
    return Form(n, 1, {(n + i,): 1})


def drop_coordinates(a: Form, removed: Iterable[int]) -> Form:
    """Keep only the terms not involving any coordinate in ``removed``."""
    removed = set(removed)
    return Form(a.n, a.degree, {I: c for I, c in a.terms.items() if not removed.intersection(I)})


def interleaved_sign(n: int, planes: Sequence[int]) -> int:
    """Sign relating dx_{p1}^dy_{p1}^dx_{p2}^dy_{p2}^... to its sorted monomial."""
    order = []
    for p in planes:
        order += [p, n + p]
    s, _ = sort_sign(order)
    return s


def blocked_sign(n: int, planes: Sequence[int]) -> int:
    """Sign relating dx_{p1}^...^dx_{pm}^dy_{p1}^...^dy_{pm} to its sorted monomial."""
    s, _ = sort_sign(list(planes) + [n + p for p in planes])
    return s


def omega_power_closed_form(n: int, m: int) -> Form:
    """omega^m written as m! * sum_I s_m dx_I ^ dy_I over |I| = m.

    dx_I ^ dy_I lists all x factors before the y factors; moving from the
    interleaved product dx_i1^dy_i1^... to that order costs m(m-1)/2
    transpositions, so s_m = (-1)^{m(m-1)/2}.  Only used to cross-check
    ``form_power``.
    """
    from math import factorial

    sign = -1 if (m * (m - 1) // 2) % 2 else 1
    items = []
    for I in combinations(range(1, n + 1), m):
        items.append((list(I) + [n + i for i in I], sign * factorial(m)))
    return Form.from_terms(n, 2 * m, items)
