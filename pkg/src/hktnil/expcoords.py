"""Exponential coordinates on simply connected 2-step nilpotent groups.

A point is written exp(X) with X = sum x_i v_i + sum y_a z_a, where the z_a
are the basis vectors spanning the center.  For a 2-step algebra the
Baker-Campbell-Hausdorff series stops after the bracket term, so

    exp(X) exp(Y) = exp(X + Y + [X, Y]/2)

and the left-invariant coframe at X is E(X) = I - ad_X / 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

from .errors import PreconditionError
from .exactlin import ZERO, Fraction, Matrix, Subspace, basis_vector, dot, to_scalar, vector
from .liealg import MetricLieAlgebra, center, derived_algebra, lower_central_series

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class CoordinateSplit:
    """Basis indices carrying the x (non-central) and y (central) coordinates."""

    v: tuple[int, ...]
    z: tuple[int, ...]


@lru_cache(maxsize=64)
def coordinate_split(L: MetricLieAlgebra) -> CoordinateSplit:
    series = lower_central_series(L)
    if not series.nilpotent or series.step > 2:
        raise PreconditionError("exponential coordinates here need a nilpotent algebra of step <= 2")
    n = L.dim
    z = tuple(k for k in range(n) if basis_vector(n, k) in center(L))
    zspan = [basis_vector(n, k) for k in z]
    if Subspace(n, zspan) != center(L):
        raise PreconditionError("the center is not spanned by basis vectors")
    if not derived_algebra(L) <= Subspace(n, zspan):
        raise PreconditionError("[n, n] is not central")
    return CoordinateSplit(tuple(k for k in range(n) if k not in z), z)


@dataclass(frozen=True)
class GroupPoint:
    v: tuple[Fraction, ...]
    z: tuple[Fraction, ...]

    def __init__(self, v: Sequence, z: Sequence):
        object.__setattr__(self, "v", vector(v))
        object.__setattr__(self, "z", vector(z))


def _check_point(split: CoordinateSplit, p: GroupPoint) -> None:
    if len(p.v) != len(split.v) or len(p.z) != len(split.z):
        raise ValueError(
            f"point has {len(p.v)}+{len(p.z)} coordinates, algebra splits as {len(split.v)}+{len(split.z)}"
        )


def to_algebra(L: MetricLieAlgebra, p: GroupPoint) -> tuple[Fraction, ...]:
    split = coordinate_split(L)
    _check_point(split, p)
    X = [ZERO] * L.dim
    for k, x in zip(split.v, p.v):
        X[k] = x
    for k, y in zip(split.z, p.z):
        X[k] = y
    return tuple(X)


def from_algebra(L: MetricLieAlgebra, X: Sequence) -> GroupPoint:
    split = coordinate_split(L)
    return GroupPoint([X[k] for k in split.v], [X[k] for k in split.z])


def origin(L: MetricLieAlgebra) -> GroupPoint:
    split = coordinate_split(L)
    return GroupPoint([ZERO] * len(split.v), [ZERO] * len(split.z))


def group_mul(L: MetricLieAlgebra, a: GroupPoint, b: GroupPoint) -> GroupPoint:
    A, B = to_algebra(L, a), to_algebra(L, b)
    C = L.bracket(A, B)
    return from_algebra(L, [x + y + HALF * c for x, y, c in zip(A, B, C)])


def group_inverse(L: MetricLieAlgebra, a: GroupPoint) -> GroupPoint:
    return GroupPoint([-x for x in a.v], [-y for y in a.z])


def left_translation_differential(L: MetricLieAlgebra, a: GroupPoint, u: Sequence) -> tuple[Fraction, ...]:
    """d(L_a) u = u + [a, u]/2, with u in coordinate (basis) order."""
    A = to_algebra(L, a)
    u = vector(u)
    return tuple(x + HALF * c for x, c in zip(u, L.bracket(A, u)))


def coframe_matrix(L: MetricLieAlgebra, p: GroupPoint) -> Matrix:
    """E(p) = I - ad_p/2; row k is the covector theta^k at p."""
    X = to_algebra(L, p)
    return Matrix.identity(L.dim) - L.ad(X).scale(HALF)


def coframe_at(L: MetricLieAlgebra, p: GroupPoint) -> list[tuple[Fraction, ...]]:
    E = coframe_matrix(L, p)
    return [E.row(k) for k in range(L.dim)]


def metric_at(L: MetricLieAlgebra, g: Matrix | None, p: GroupPoint) -> Matrix:
    g = L.metric if g is None else g
    E = coframe_matrix(L, p)
    return E.T @ g @ E


@dataclass(frozen=True)
class InvarianceCheck:
    ok: bool
    lhs: Fraction
    rhs: Fraction

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "left-invariant"
        return f"G_p(u, w) = {self.lhs} but G_(a.p)(dL_a u, dL_a w) = {self.rhs}"


def verify_left_invariance(
    L: MetricLieAlgebra,
    g: Matrix | None,
    a: GroupPoint,
    p: GroupPoint,
    u: Sequence,
    w: Sequence,
    coframe: Callable[[GroupPoint], Matrix] | None = None,
) -> InvarianceCheck:
    """Exact check of G_p(u, w) = G_{a.p}(dL_a u, dL_a w).

    ``coframe`` overrides the coframe used to build G; the group law and
    the differential of left translation always come from ``L``.
    """
    g = L.metric if g is None else g
    frame = coframe or (lambda q: coframe_matrix(L, q))

    def G(q: GroupPoint) -> Matrix:
        E = frame(q)
        return E.T @ g @ E

    u, w = vector(u), vector(w)
    lhs = dot(u, G(p).apply(w))
    ap = group_mul(L, a, p)
    du, dw = left_translation_differential(L, a, u), left_translation_differential(L, a, w)
    rhs = dot(du, G(ap).apply(dw))
    return InvarianceCheck(lhs == rhs, lhs, rhs)


# ---- symbolic metric ----------------------------------------------------------

# A polynomial is a dict from a sorted tuple of coordinate indices to its
# coefficient; () is the constant term.
Poly = dict[tuple[int, ...], Fraction]


def _poly_mul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = tuple(sorted(m1 + m2))
            out[m] = out.get(m, ZERO) + c1 * c2
    return {m: c for m, c in out.items() if c}


def _poly_add(p: Poly, q: Poly, scale: Fraction = Fraction(1)) -> Poly:
    out = dict(p)
    for m, c in q.items():
        out[m] = out.get(m, ZERO) + scale * c
    return {m: c for m, c in out.items() if c}


def coframe_polynomial(L: MetricLieAlgebra) -> list[list[Poly]]:
    """E as a matrix of affine polynomials in the coordinates (basis order)."""
    n = L.dim
    E: list[list[Poly]] = [[({(): Fraction(1)} if k == j else {}) for j in range(n)] for k in range(n)]
    # ad_X[k][j] = sum_i x_i c^k_ij
    for i in range(n):
        for j in range(n):
            for k, c in L.bracket_basis(i, j).items():
                E[k][j] = _poly_add(E[k][j], {(i,): c}, -HALF)
    return E


def metric_polynomial(L: MetricLieAlgebra, g: Matrix | None = None) -> dict[tuple[int, int], Poly]:
    """Quadratic form sum_{r <= s} q_rs(x) du_r du_s of the left-invariant metric.

    du_r is dx or dy depending on whether r is a non-central or central
    index; off-diagonal terms carry the factor 2 from the symmetric product.
    """
    g = L.metric if g is None else g
    n = L.dim
    E = coframe_polynomial(L)
    form: dict[tuple[int, int], Poly] = {}
    for r in range(n):
        for s in range(r, n):
            acc: Poly = {}
            for k in range(n):
                for l in range(n):
                    if g[k, l] and E[k][r] and E[l][s]:
                        acc = _poly_add(acc, _poly_mul(E[k][r], E[l][s]), g[k, l])
            if r != s:
                acc = {m: 2 * c for m, c in acc.items()}
            if acc:
                form[(r, s)] = acc
    return form


def coordinate_names(L: MetricLieAlgebra) -> list[str]:
    """x1.. for non-central and y1.. for central basis indices, in basis order."""
    split = coordinate_split(L)
    names = [""] * L.dim
    for a, k in enumerate(split.v, start=1):
        names[k] = f"x{a}"
    for a, k in enumerate(split.z, start=1):
        names[k] = f"y{a}"
    return names


def parse_point(L: MetricLieAlgebra, text: str) -> GroupPoint:
    """Comma-separated x1,..,x_p,y1,..,y_q."""
    split = coordinate_split(L)
    vals = [to_scalar(t.strip()) for t in text.split(",") if t.strip()]
    if len(vals) != L.dim:
        raise ValueError(f"expected {L.dim} coordinates, got {len(vals)}")
    return GroupPoint(vals[: len(split.v)], vals[len(split.v):])
