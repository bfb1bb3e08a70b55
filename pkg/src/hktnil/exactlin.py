"""Exact rational linear algebra: scalars, dense matrices, subspaces and
alternating forms.

Everything here works over ``fractions.Fraction``; no floating point value is
ever produced.  All objects are immutable once built.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from math import lcm
from numbers import Rational
from typing import Iterable, Iterator, Mapping, Sequence

Scalar = Fraction
Vector = tuple  # tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def to_scalar(x) -> Fraction:
    """Coerce ints, Fractions and strings like ``"-3/4"`` to a Fraction.

    Floats and decimal strings are refused: they would smuggle rounding into
    exact code.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not s:
            raise ValueError("empty rational string")
        if any(ch in s for ch in ".eE"):
            raise ValueError(f"write rationals as p/q, not decimals: {x!r}")
        try:
            return Fraction(s)
        except ValueError:
            raise ValueError(f"not a rational number: {x!r}") from None
    raise TypeError(f"cannot use {type(x).__name__} as an exact scalar")


def vector(values: Iterable) -> Vector:
    return tuple(to_scalar(v) for v in values)


def zero_vector(n: int) -> Vector:
    return (ZERO,) * n


def basis_vector(n: int, i: int) -> Vector:
    v = [ZERO] * n
    v[i] = ONE
    return tuple(v)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v) if a and b), ZERO)


def axpy(a: Fraction, x: Sequence[Fraction], y: Sequence[Fraction]) -> Vector:
    """Return ``a*x + y``."""
    if not a:
        return tuple(y)
    return tuple(a * xi + yi if xi else yi for xi, yi in zip(x, y))


def is_zero_vector(v: Iterable[Fraction]) -> bool:
    return not any(v)


def fmt_scalar(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class Matrix:
    """Dense immutable matrix of Fractions."""

    __slots__ = ("_rows", "rows", "cols")

    def __init__(self, data: Iterable[Iterable]):
        rows = tuple(vector(r) for r in data)
        if not rows:
            raise ValueError("matrix needs at least one row")
        ncols = len(rows[0])
        if ncols == 0 or any(len(r) != ncols for r in rows):
            raise ValueError("ragged or empty matrix rows")
        self._rows = rows
        self.rows = len(rows)
        self.cols = ncols

    @classmethod
    def _trusted(cls, rows: tuple) -> "Matrix":
        m = object.__new__(cls)
        m._rows = rows
        m.rows = len(rows)
        m.cols = len(rows[0])
        return m

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._trusted(tuple(basis_vector(n, i) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "Matrix":
        cols = rows if cols is None else cols
        return cls._trusted(tuple(zero_vector(cols) for _ in range(rows)))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> "Matrix":
        cols = [vector(c) for c in columns]
        return cls._trusted(tuple(tuple(c[i] for c in cols) for i in range(len(cols[0]))))

    @classmethod
    def diagonal(cls, entries: Sequence) -> "Matrix":
        d = vector(entries)
        n = len(d)
        return cls._trusted(
            tuple(tuple(d[i] if i == j else ZERO for j in range(n)) for i in range(n))
        )

    @classmethod
    def block_diagonal(cls, blocks: Sequence["Matrix"]) -> "Matrix":
        n = sum(b.rows for b in blocks)
        m = sum(b.cols for b in blocks)
        out = [[ZERO] * m for _ in range(n)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.rows):
                out[r0 + i][c0 : c0 + b.cols] = b._rows[i]
            r0 += b.rows
            c0 += b.cols
        return cls._trusted(tuple(tuple(r) for r in out))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, idx):
        i, j = idx
        return self._rows[i][j]

    def row(self, i: int) -> Vector:
        return self._rows[i]

    def col(self, j: int) -> Vector:
        return tuple(r[j] for r in self._rows)

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._rows]

    def __iter__(self) -> Iterator[Vector]:
        return iter(self._rows)

    @property
    def T(self) -> "Matrix":
        return Matrix._trusted(tuple(zip(*self._rows)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(fmt_scalar(x) for x in r) for r in self._rows)
        return f"Matrix([{body}])"

    def _check_same_shape(self, other: "Matrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix._trusted(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows))
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix._trusted(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows))
        )

    def __neg__(self) -> "Matrix":
        return Matrix._trusted(tuple(tuple(-a for a in r) for r in self._rows))

    def scale(self, c) -> "Matrix":
        c = to_scalar(c)
        return Matrix._trusted(tuple(tuple(c * a for a in r) for r in self._rows))

    def __mul__(self, c) -> "Matrix":
        if isinstance(c, Matrix):
            raise TypeError("use @ for matrix products")
        return self.scale(c)

    __rmul__ = __mul__

    def apply(self, v: Sequence[Fraction]) -> Vector:
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} for {self.shape} matrix")
        nz = [(j, x) for j, x in enumerate(v) if x]
        return tuple(sum((r[j] * x for j, x in nz if r[j]), ZERO) for r in self._rows)

    def _integer_rows(self) -> tuple[int, list[list[int]]]:
        den = lcm(1, *(x.denominator for r in self._rows for x in r if x))
        return den, [[x.numerator * (den // x.denominator) for x in r] for r in self._rows]

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
            # clear denominators once; integer products are much cheaper than Fraction ones
            da, ia = self._integer_rows()
            db, ib = other._integer_rows()
            den = da * db
            out = []
            for r in ia:
                acc = [0] * other.cols
                for k, a in enumerate(r):
                    if a:
                        for j, b in enumerate(ib[k]):
                            if b:
                                acc[j] += a * b
                out.append(tuple(Fraction(x, den) for x in acc))
            return Matrix._trusted(tuple(out))
        return self.apply(other)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self._rows)

    def is_symmetric(self) -> bool:
        return self.is_square and self._rows == tuple(zip(*self._rows))

    def is_skew(self) -> bool:
        return self.is_square and (-self).T == self

    def trace(self) -> Fraction:
        if not self.is_square:
            raise ValueError("trace of a non-square matrix")
        return sum((self._rows[i][i] for i in range(self.rows)), ZERO)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix._trusted(tuple(tuple(self._rows[i][j] for j in cols) for i in rows))

    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        """Reduced row-echelon form and the pivot columns."""
        m = [list(r) for r in self._rows]
        pivots = []
        r = 0
        for c in range(self.cols):
            p = next((i for i in range(r, self.rows) if m[i][c]), None)
            if p is None:
                continue
            m[r], m[p] = m[p], m[r]
            inv = 1 / m[r][c]
            m[r] = [x * inv for x in m[r]]
            for i in range(self.rows):
                if i != r and m[i][c]:
                    f = m[i][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return Matrix._trusted(tuple(tuple(x) for x in m)), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> list[Vector]:
        """Basis of the kernel, one vector per free column."""
        red, pivots = self.rref()
        free = [c for c in range(self.cols) if c not in pivots]
        basis = []
        for f in free:
            v = [ZERO] * self.cols
            v[f] = ONE
            for i, p in enumerate(pivots):
                v[p] = -red[i, f]
            basis.append(tuple(v))
        return basis

    def det(self) -> Fraction:
        if not self.is_square:
            raise ValueError("determinant of a non-square matrix")
        m = [list(r) for r in self._rows]
        n = self.rows
        d = ONE
        for c in range(n):
            p = next((i for i in range(c, n) if m[i][c]), None)
            if p is None:
                return ZERO
            if p != c:
                m[c], m[p] = m[p], m[c]
                d = -d
            piv = m[c][c]
            d *= piv
            for i in range(c + 1, n):
                if m[i][c]:
                    f = m[i][c] / piv
                    m[i] = [a - f * b for a, b in zip(m[i], m[c])]
        return d

    def inverse(self) -> "Matrix":
        if not self.is_square:
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        aug = Matrix._trusted(
            tuple(r + basis_vector(n, i) for i, r in enumerate(self._rows))
        )
        red, pivots = aug.rref()
        if pivots[:n] != tuple(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return Matrix._trusted(tuple(r[n:] for r in red._rows))

    def power(self, p: int) -> "Matrix":
        out = Matrix.identity(self.rows)
        for _ in range(p):
            out = out @ self
        return out


def solve_linear(A: Matrix, b: Sequence) -> Vector | None:
    """Solve ``A x = b`` exactly.

    Returns ``None`` when the system is inconsistent.  Underdetermined systems
    get the particular solution whose free variables are zero.
    """
    b = vector(b)
    if len(b) != A.rows:
        raise ValueError(f"right-hand side has {len(b)} entries, matrix has {A.rows} rows")
    aug = Matrix._trusted(tuple(r + (bi,) for r, bi in zip(A, b)))
    red, pivots = aug.rref()
    if A.cols in pivots:
        return None
    x = [ZERO] * A.cols
    for i, p in enumerate(pivots):
        x[p] = red[i, A.cols]
    return tuple(x)


def char_poly(A: Matrix) -> list[Fraction]:
    """Coefficients of det(λI - A), leading coefficient first.

    Faddeev-LeVerrier recursion; exact because it only divides by integers.
    """
    if not A.is_square:
        raise ValueError("characteristic polynomial needs a square matrix")
    n = A.rows
    coeffs = [ONE]
    M = Matrix.zeros(n)
    ident = Matrix.identity(n)
    for k in range(1, n + 1):
        M = A @ M + ident.scale(coeffs[-1])
        coeffs.append(-(A @ M).trace() / k)
    return coeffs


def poly_eval(coeffs: Sequence[Fraction], x) -> Fraction:
    acc = ZERO
    for c in coeffs:
        acc = acc * x + c
    return acc


def poly_from_roots(roots: Iterable) -> list[Fraction]:
    """Monic polynomial with the given roots (with multiplicity)."""
    coeffs = [ONE]
    for r in roots:
        r = to_scalar(r)
        nxt = coeffs + [ZERO]
        for i in range(1, len(nxt)):
            nxt[i] -= r * coeffs[i - 1]
        coeffs = nxt
    return coeffs


def positive_definite(g: Matrix) -> bool:
    """Sylvester's criterion on exact leading principal minors."""
    if not g.is_symmetric():
        return False
    return all(g.submatrix(range(k), range(k)).det() > 0 for k in range(1, g.rows + 1))


class Subspace:
    """A linear subspace of Q^n stored by its reduced row-echelon basis.

    Equal subspaces have identical stored bases, so ``==`` is structural.
    """

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, vectors: Iterable[Sequence] = ()):
        vecs = [vector(v) for v in vectors]
        if any(len(v) != ambient_dim for v in vecs):
            raise ValueError("vector length does not match ambient dimension")
        self.ambient_dim = ambient_dim
        vecs = [v for v in vecs if any(v)]
        if not vecs:
            self.basis: tuple[Vector, ...] = ()
            return
        red, pivots = Matrix._trusted(tuple(vecs)).rref()
        self.basis = tuple(red.row(i) for i in range(len(pivots)))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n)

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, (basis_vector(n, i) for i in range(n)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    def __add__(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimensions differ")
        return Subspace(self.ambient_dim, self.basis + other.basis)

    def __contains__(self, v: Sequence) -> bool:
        return Subspace(self.ambient_dim, self.basis + (vector(v),)).dim == self.dim

    def __le__(self, other: "Subspace") -> bool:
        return (self + other).dim == other.dim

    def __lt__(self, other: "Subspace") -> bool:
        return self <= other and self.dim < other.dim

    def image(self, A: Matrix) -> "Subspace":
        return Subspace(A.rows, (A.apply(v) for v in self.basis))

    def orthogonal_complement(self, g: Matrix | None = None) -> "Subspace":
        """Complement with respect to the bilinear form ``g`` (identity default)."""
        n = self.ambient_dim
        if not self.basis:
            return Subspace.full(n)
        rows = [g.apply(v) for v in self.basis] if g is not None else list(self.basis)
        return Subspace(n, Matrix._trusted(tuple(rows)).nullspace())

    def intersection(self, other: "Subspace") -> "Subspace":
        return self.orthogonal_complement().__add__(other.orthogonal_complement()).orthogonal_complement()


def perm_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq``; 0 if it has repeats."""
    s = list(seq)
    if len(set(s)) != len(s):
        return 0
    sign = 1
    for i in range(len(s)):
        for j in range(i + 1, len(s)):
            if s[i] > s[j]:
                sign = -sign
    return sign


def sort_with_sign(idx: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    sgn = perm_sign(idx)
    return sgn, tuple(sorted(idx))


class AltForm:
    """Alternating k-form on Q^n with sparse coefficients on e^{i_1}...e^{i_k}.

    Keys are strictly increasing 0-based index tuples.  The coefficient of
    ``(0, 1)`` is the value of the form on ``(e_0, e_1)``.
    """

    __slots__ = ("ambient_dim", "degree", "_coeffs")

    def __init__(self, ambient_dim: int, degree: int, coeffs: Mapping[tuple, object] | None = None):
        if degree < 0:
            raise ValueError(f"negative degree {degree}")
        self.ambient_dim = ambient_dim
        self.degree = degree
        acc: dict[tuple[int, ...], Fraction] = {}
        for key, val in (coeffs or {}).items():
            key = tuple(key)
            if len(key) != degree:
                raise ValueError(f"index tuple {key} has wrong length for a {degree}-form")
            if any(i < 0 or i >= ambient_dim for i in key):
                raise ValueError(f"index tuple {key} out of range")
            sgn, skey = sort_with_sign(key)
            val = to_scalar(val)
            if sgn and val:
                acc[skey] = acc.get(skey, ZERO) + sgn * val
        self._coeffs = {k: v for k, v in sorted(acc.items()) if v}

    @classmethod
    def _trusted(cls, n: int, k: int, coeffs: dict) -> "AltForm":
        f = object.__new__(cls)
        f.ambient_dim = n
        f.degree = k
        f._coeffs = {key: v for key, v in sorted(coeffs.items()) if v}
        return f

    @classmethod
    def zero(cls, n: int, k: int) -> "AltForm":
        return cls._trusted(n, k, {})

    @classmethod
    def basis(cls, n: int, *idx: int) -> "AltForm":
        """The monomial e^{idx[0]} ^ ... ^ e^{idx[-1]} (0-based, any order)."""
        return cls(n, len(idx), {tuple(idx): ONE})

    @classmethod
    def covector(cls, values: Sequence) -> "AltForm":
        v = vector(values)
        return cls._trusted(len(v), 1, {(i,): x for i, x in enumerate(v) if x})

    @property
    def coeffs(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self._coeffs)

    def items(self):
        return self._coeffs.items()

    def __getitem__(self, idx: Sequence[int]) -> Fraction:
        sgn, key = sort_with_sign(idx)
        if not sgn:
            return ZERO
        return sgn * self._coeffs.get(key, ZERO)

    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AltForm):
            return NotImplemented
        return (self.ambient_dim, self.degree, self._coeffs) == (
            other.ambient_dim,
            other.degree,
            other._coeffs,
        )

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.degree, tuple(self._coeffs.items())))

    def __repr__(self) -> str:
        return f"AltForm({self})"

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for key, v in self._coeffs.items():
            mono = "^".join(f"e{i + 1}" for i in key) if key else "1"
            if v == 1:
                parts.append(f"+ {mono}")
            elif v == -1:
                parts.append(f"- {mono}")
            else:
                sign = "-" if v < 0 else "+"
                parts.append(f"{sign} {fmt_scalar(abs(v))}*{mono}")
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def _check_compatible(self, other: "AltForm") -> None:
        if self.ambient_dim != other.ambient_dim or self.degree != other.degree:
            raise ValueError("forms live in different spaces")

    def __add__(self, other: "AltForm") -> "AltForm":
        self._check_compatible(other)
        acc = dict(self._coeffs)
        for k, v in other._coeffs.items():
            acc[k] = acc.get(k, ZERO) + v
        return AltForm._trusted(self.ambient_dim, self.degree, acc)

    def __neg__(self) -> "AltForm":
        return AltForm._trusted(self.ambient_dim, self.degree, {k: -v for k, v in self._coeffs.items()})

    def __sub__(self, other: "AltForm") -> "AltForm":
        return self + (-other)

    def scale(self, c) -> "AltForm":
        c = to_scalar(c)
        return AltForm._trusted(self.ambient_dim, self.degree, {k: c * v for k, v in self._coeffs.items()})

    def __mul__(self, c) -> "AltForm":
        if isinstance(c, AltForm):
            raise TypeError("use wedge() or ^ for the exterior product")
        return self.scale(c)

    __rmul__ = __mul__

    def __xor__(self, other: "AltForm") -> "AltForm":
        return wedge(self, other)

    def __call__(self, *vectors: Sequence) -> Fraction:
        return evaluate(self, vectors)

    def eval_basis(self, idx: Sequence[int]) -> Fraction:
        """Value on a tuple of basis vectors, given by their indices."""
        return self[idx]

    def dot(self, other: "AltForm") -> Fraction:
        """Coefficient inner product (the induced one for an orthonormal basis)."""
        self._check_compatible(other)
        small, big = sorted((self._coeffs, other._coeffs), key=len)
        return sum((v * big[k] for k, v in small.items() if k in big), ZERO)


def wedge(a: AltForm, b: AltForm) -> AltForm:
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("wedge of forms on different spaces")
    n = a.ambient_dim
    k = a.degree + b.degree
    acc: dict[tuple[int, ...], Fraction] = {}
    for I, x in a.items():
        sI = set(I)
        for J, y in b.items():
            if sI.intersection(J):
                continue
            sgn, key = sort_with_sign(I + J)
            acc[key] = acc.get(key, ZERO) + sgn * x * y
    return AltForm._trusted(n, k, acc)


def evaluate(a: AltForm, vectors: Sequence[Sequence]) -> Fraction:
    """Value of ``a`` on ``degree`` vectors: sum of coefficient times minor."""
    if len(vectors) != a.degree:
        raise ValueError(f"{a.degree}-form evaluated on {len(vectors)} vectors")
    vecs = [vector(v) for v in vectors]
    if any(len(v) != a.ambient_dim for v in vecs):
        raise ValueError("vector length does not match form dimension")
    if a.degree == 0:
        return a._coeffs.get((), ZERO)
    total = ZERO
    for I, c in a.items():
        minor = Matrix._trusted(tuple(tuple(v[i] for v in vecs) for i in I))
        d = minor.det()
        if d:
            total += c * d
    return total


def evaluate_leibniz(a: AltForm, vectors: Sequence[Sequence]) -> Fraction:
    """Brute-force evaluation by summing over all permutations.

    Slow; used as an independent oracle for :func:`evaluate`.
    """
    k = a.degree
    vecs = [vector(v) for v in vectors]
    total = ZERO
    for I, c in a.items():
        for perm in permutations(range(k)):
            term = c * perm_sign(perm)
            for slot, p in enumerate(perm):
                term *= vecs[p][I[slot]]
                if not term:
                    break
            total += term
    return total


def index_tuples(n: int, k: int) -> list[tuple[int, ...]]:
    return list(combinations(range(n), k))
