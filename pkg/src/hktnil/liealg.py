"""Metric Lie algebras given by structure constants, with the
Chevalley-Eilenberg differential and its metric adjoint on invariant forms."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Mapping, Sequence

from .errors import InvalidLieAlgebra
from .exactlin import (
    ONE,
    ZERO,
    AltForm,
    Fraction,
    Matrix,
    Subspace,
    Vector,
    basis_vector,
    dot,
    positive_definite,
    sort_with_sign,
    to_scalar,
    vector,
)


def _as_sparse(target, dim: int) -> dict[int, Fraction]:
    if isinstance(target, Mapping):
        out = {}
        for k, v in target.items():
            k = int(k)
            if not 0 <= k < dim:
                raise ValueError(f"bracket target index {k} out of range")
            v = to_scalar(v)
            if v:
                out[k] = out.get(k, ZERO) + v
        return {k: v for k, v in out.items() if v}
    v = vector(target)
    if len(v) != dim:
        raise ValueError("bracket target vector has the wrong length")
    return {k: x for k, x in enumerate(v) if x}


class MetricLieAlgebra:
    """A real Lie algebra with rational structure constants and inner product.

    ``brackets`` maps 0-based pairs ``(i, j)`` to ``[e_i, e_j]``, given either
    as a mapping ``{k: coeff}`` or a dense vector.  Only one of ``(i, j)`` and
    ``(j, i)`` may be supplied; the other is implied by antisymmetry.  The
    Jacobi identity and positivity of the metric are checked unless
    ``check=False`` (useful for diagnosing bad input).
    """

    def __init__(
        self,
        dim: int,
        brackets: Mapping[tuple[int, int], object] | None = None,
        metric: Matrix | Sequence[Sequence] | None = None,
        labels: Sequence[str] | None = None,
        *,
        check: bool = True,
    ):
        if dim < 1:
            raise ValueError("dimension must be positive")
        self.dim = dim
        table: list[list[dict[int, Fraction]]] = [[{} for _ in range(dim)] for _ in range(dim)]
        seen = set()
        for (i, j), target in (brackets or {}).items():
            i, j = int(i), int(j)
            if not (0 <= i < dim and 0 <= j < dim):
                raise ValueError(f"bracket indices ({i}, {j}) out of range")
            if i == j:
                raise ValueError(f"[e_{i}, e_{i}] must vanish and cannot be specified")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValueError(f"bracket {key} specified twice")
            seen.add(key)
            t = _as_sparse(target, dim)
            if i > j:
                t = {k: -v for k, v in t.items()}
            table[key[0]][key[1]] = t
            table[key[1]][key[0]] = {k: -v for k, v in t.items()}
        self._table = table

        g = Matrix.identity(dim) if metric is None else metric
        if not isinstance(g, Matrix):
            g = Matrix(g)
        if g.shape != (dim, dim):
            raise ValueError(f"metric has shape {g.shape}, expected {(dim, dim)}")
        self.metric = g
        if labels is None:
            labels = [f"e{i + 1}" for i in range(dim)]
        if len(labels) != dim:
            raise ValueError("wrong number of basis labels")
        self.labels = tuple(labels)

        if check:
            report = validate(self)
            if not report.ok:
                raise InvalidLieAlgebra(report.summary(), report.jacobi_violations)

    # ---- structure -------------------------------------------------------

    def bracket_basis(self, a: int, b: int) -> dict[int, Fraction]:
        """``[e_a, e_b]`` as a sparse ``{k: coeff}`` dict (do not mutate)."""
        return self._table[a][b]

    def structure_constant(self, i: int, j: int, k: int) -> Fraction:
        return self._table[i][j].get(k, ZERO)

    @cached_property
    def structure_constants(self) -> dict[tuple[int, int], dict[int, Fraction]]:
        """Nonzero brackets ``(i, j) -> {k: c}`` with ``i < j``."""
        return {
            (i, j): dict(sorted(self._table[i][j].items()))
            for i in range(self.dim)
            for j in range(i + 1, self.dim)
            if self._table[i][j]
        }

    def bracket(self, X: Sequence, Y: Sequence) -> Vector:
        out = [ZERO] * self.dim
        ynz = [(b, y) for b, y in enumerate(Y) if y]
        for a, x in enumerate(X):
            if not x:
                continue
            row = self._table[a]
            for b, y in ynz:
                for k, c in row[b].items():
                    out[k] += x * y * c
        return tuple(out)

    def ad(self, X: Sequence) -> Matrix:
        cols = [self.bracket(X, basis_vector(self.dim, b)) for b in range(self.dim)]
        return Matrix.from_columns(cols)

    @property
    def is_abelian(self) -> bool:
        return not self.structure_constants

    def inner(self, X: Sequence, Y: Sequence) -> Fraction:
        return dot(X, self.metric.apply(Y))

    @cached_property
    def metric_inverse(self) -> Matrix:
        return self.metric.inverse()

    @cached_property
    def metric_is_identity(self) -> bool:
        return self.metric == Matrix.identity(self.dim)

    def basis(self, i: int) -> Vector:
        return basis_vector(self.dim, i)

    def with_metric(self, g: Matrix) -> "MetricLieAlgebra":
        return MetricLieAlgebra(self.dim, self.structure_constants, g, self.labels, check=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MetricLieAlgebra):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.structure_constants == other.structure_constants
            and self.metric == other.metric
        )

    def __hash__(self) -> int:
        sc = tuple((k, tuple(v.items())) for k, v in self.structure_constants.items())
        return hash((self.dim, sc, self.metric))

    def __repr__(self) -> str:
        return f"MetricLieAlgebra(dim={self.dim}, brackets={len(self.structure_constants)})"

    # ---- exterior derivative caches ---------------------------------------

    @cached_property
    def _d_monomial_cache(self) -> dict:
        return {}

    @cached_property
    def _d_one_forms(self) -> list[list[tuple[tuple[int, int], Fraction]]]:
        # d e^m = -sum_{i<j} c^m_ij e^i ^ e^j
        out: list[list] = [[] for _ in range(self.dim)]
        for (i, j), t in self.structure_constants.items():
            for m, c in t.items():
                out[m].append(((i, j), -c))
        return out

    def d_monomial(self, I: tuple[int, ...]) -> dict[tuple[int, ...], Fraction]:
        """Coefficients of d(e^{I}) for a strictly increasing tuple ``I``."""
        cache = self._d_monomial_cache
        hit = cache.get(I)
        if hit is not None:
            return hit
        acc: dict[tuple[int, ...], Fraction] = {}
        d1 = self._d_one_forms
        for p, m in enumerate(I):
            sign_p = -1 if p % 2 else 1
            for (i, j), c in d1[m]:
                sgn, key = sort_with_sign(I[:p] + (i, j) + I[p + 1 :])
                if sgn:
                    acc[key] = acc.get(key, ZERO) + sign_p * sgn * c
        res = {k: v for k, v in acc.items() if v}
        cache[I] = res
        return res


@dataclass
class ValidationReport:
    jacobi_violations: list[tuple[tuple[int, int, int], Vector]] = field(default_factory=list)
    metric_symmetric: bool = True
    metric_positive_definite: bool = True

    @property
    def ok(self) -> bool:
        return not self.jacobi_violations and self.metric_symmetric and self.metric_positive_definite

    def summary(self) -> str:
        if self.ok:
            return "valid"
        parts = []
        if self.jacobi_violations:
            trip = ", ".join(
                f"(e{a + 1},e{b + 1},e{c + 1})" for (a, b, c), _ in self.jacobi_violations
            )
            parts.append(f"Jacobi identity fails on {trip}")
        if not self.metric_symmetric:
            parts.append("metric is not symmetric")
        elif not self.metric_positive_definite:
            parts.append("metric is not positive definite")
        return "; ".join(parts)


def jacobiator(L: MetricLieAlgebra, a: int, b: int, c: int) -> Vector:
    e = L.basis
    return tuple(
        x + y + z
        for x, y, z in zip(
            L.bracket(L.bracket(e(a), e(b)), e(c)),
            L.bracket(L.bracket(e(b), e(c)), e(a)),
            L.bracket(L.bracket(e(c), e(a)), e(b)),
        )
    )


def validate(L: MetricLieAlgebra) -> ValidationReport:
    """Check Jacobi on every basis triple and positive-definiteness of g."""
    report = ValidationReport()
    for a, b, c in combinations(range(L.dim), 3):
        jac = jacobiator(L, a, b, c)
        if any(jac):
            report.jacobi_violations.append(((a, b, c), jac))
    report.metric_symmetric = L.metric.is_symmetric()
    report.metric_positive_definite = report.metric_symmetric and positive_definite(L.metric)
    return report


def bracket_subspaces(L: MetricLieAlgebra, S: Subspace, T: Subspace) -> Subspace:
    return Subspace(L.dim, (L.bracket(x, y) for x in S.basis for y in T.basis))


def derived_algebra(L: MetricLieAlgebra) -> Subspace:
    full = Subspace.full(L.dim)
    return bracket_subspaces(L, full, full)


@dataclass(frozen=True)
class CentralSeries:
    terms: tuple[Subspace, ...]
    nilpotent: bool

    @property
    def step(self) -> int | None:
        """Minimal s with n^s = 0, or None if the series stalls."""
        return len(self.terms) - 1 if self.nilpotent else None


def lower_central_series(L: MetricLieAlgebra) -> CentralSeries:
    full = Subspace.full(L.dim)
    terms = [full]
    while not terms[-1].is_zero():
        nxt = bracket_subspaces(L, terms[-1], full)
        if nxt == terms[-1]:
            return CentralSeries(tuple(terms), nilpotent=False)
        terms.append(nxt)
    return CentralSeries(tuple(terms), nilpotent=True)


def nilpotency_step(L: MetricLieAlgebra) -> int | None:
    return lower_central_series(L).step


def center(L: MetricLieAlgebra) -> Subspace:
    n = L.dim
    # X is central iff sum_a X_a c^k_{a b} = 0 for all b, k
    rows = []
    for b in range(n):
        for k in range(n):
            row = tuple(L.structure_constant(a, b, k) for a in range(n))
            if any(row):
                rows.append(row)
    if not rows:
        return Subspace.full(n)
    return Subspace(n, Matrix(rows).nullspace())


# ---- Chevalley-Eilenberg calculus ----------------------------------------


def ce_d(L: MetricLieAlgebra, a: AltForm) -> AltForm:
    """Exterior derivative of a left-invariant form.

    Convention: (d a)(X_0..X_k) = sum_{i<j} (-1)^(i+j) a([X_i,X_j], X_0..^i..^j..X_k),
    so that (d e^m)(X, Y) = -e^m([X, Y]).  Computed monomial by monomial as
    a graded derivation, which agrees with that formula.
    """
    if a.ambient_dim != L.dim:
        raise ValueError("form and algebra have different dimensions")
    acc: dict[tuple[int, ...], Fraction] = {}
    for I, x in a.items():
        for key, c in L.d_monomial(I).items():
            acc[key] = acc.get(key, ZERO) + x * c
    return AltForm._trusted(L.dim, a.degree + 1, acc)


def ce_d_by_formula(L: MetricLieAlgebra, a: AltForm) -> AltForm:
    """Same as :func:`ce_d` but straight from the bracket formula on basis
    tuples.  Slower; kept as a cross-check."""
    n, k = L.dim, a.degree
    acc = {}
    for T in combinations(range(n), k + 1):
        total = ZERO
        for p in range(k + 1):
            for q in range(p + 1, k + 1):
                rest = T[:p] + T[p + 1 : q] + T[q + 1 :]
                sgn = -1 if (p + q) % 2 else 1
                for m, c in L.bracket_basis(T[p], T[q]).items():
                    v = a[(m,) + rest]
                    if v:
                        total += sgn * c * v
        if total:
            acc[T] = total
    return AltForm._trusted(n, k + 1, acc)


def _compound_entry(M: Matrix, I: Sequence[int], J: Sequence[int]) -> Fraction:
    if not I:
        return ONE
    return M.submatrix(I, J).det()


def _apply_compound(L: MetricLieAlgebra, M: Matrix, a: dict, k: int, diagonal: bool) -> dict:
    """Apply the k-th compound matrix of ``M`` to form coefficients ``a``."""
    if diagonal:
        out = {}
        for I, x in a.items():
            d = ONE
            for i in I:
                d *= M[i, i]
            if d:
                out[I] = x * d
        return out
    out = {}
    for I in combinations(range(L.dim), k):
        s = sum((_compound_entry(M, I, J) * x for J, x in a.items()), ZERO)
        if s:
            out[I] = s
    return out


def _metric_kind(L: MetricLieAlgebra) -> str:
    g = L.metric
    if L.metric_is_identity:
        return "identity"
    if all(g[i, j] == 0 for i in range(L.dim) for j in range(L.dim) if i != j):
        return "diagonal"
    return "general"


def form_inner(L: MetricLieAlgebra, a: AltForm, b: AltForm) -> Fraction:
    """Inner product on k-forms induced by the metric (e^I orthonormal when g = I)."""
    if a.degree != b.degree:
        raise ValueError("inner product of forms of different degree")
    kind = _metric_kind(L)
    if kind == "identity":
        return a.dot(b)
    ma = _apply_compound(L, L.metric_inverse, a.coeffs, a.degree, kind == "diagonal")
    return sum((x * b[I] for I, x in ma.items()), ZERO)


def ce_codifferential(L: MetricLieAlgebra, a: AltForm) -> AltForm:
    """Metric adjoint of :func:`ce_d`: <delta a, b> = <a, d b> for all b."""
    k = a.degree
    if k < 1:
        raise ValueError("codifferential needs a form of degree >= 1")
    kind = _metric_kind(L)
    if kind == "identity":
        w = a.coeffs
    else:
        w = _apply_compound(L, L.metric_inverse, a.coeffs, k, kind == "diagonal")
    # D^T w, where D is the matrix of d on (k-1)-forms
    dt = {}
    for J in combinations(range(L.dim), k - 1):
        s = ZERO
        for key, c in L.d_monomial(J).items():
            x = w.get(key)
            if x:
                s += c * x
        if s:
            dt[J] = s
    if kind != "identity":
        dt = _apply_compound(L, L.metric, dt, k - 1, kind == "diagonal")
    return AltForm._trusted(L.dim, k - 1, dt)
