"""Builders for concrete HKT algebras: the 8-dimensional catalog, the
12-dimensional 3-step example, the j-map correspondence between 2-step
algebras with abelian hypercomplex structure and subspaces of sp(l), and the
deformation families built from it.

Quaternions use the basis (1, i, j, k); H^l is laid out block-contiguously.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import PreconditionError
from .exactlin import ZERO, Fraction, Matrix, Subspace, dot, to_scalar
from .hypercx import (
    HypercomplexStructure,
    check_abelian,
    check_hkt,
    check_quaternion,
    complete_hypercomplex,
)
from .liealg import MetricLieAlgebra, center, derived_algebra, lower_central_series


@dataclass(frozen=True)
class Quaternion:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __init__(self, a=0, b=0, c=0, d=0):
        for name, val in zip("abcd", (a, b, c, d)):
            object.__setattr__(self, name, to_scalar(val))

    @property
    def coords(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, other: "Quaternion") -> "Quaternion":
        if not isinstance(other, Quaternion):
            s = to_scalar(other)
            return Quaternion(*(s * x for x in self.coords))
        a1, b1, c1, d1 = self.coords
        a2, b2, c2, d2 = other.coords
        return Quaternion(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    def __rmul__(self, s) -> "Quaternion":
        return self * s

    def __neg__(self) -> "Quaternion":
        return Quaternion(*(-x for x in self.coords))

    def conj(self) -> "Quaternion":
        return Quaternion(self.a, -self.b, -self.c, -self.d)

    def norm2(self) -> Fraction:
        return sum((x * x for x in self.coords), ZERO)


QI = Quaternion(0, 1, 0, 0)
QJ = Quaternion(0, 0, 1, 0)
QK = Quaternion(0, 0, 0, 1)
_UNITS = (Quaternion(1), QI, QJ, QK)


def quaternion_mult_matrix(q: Quaternion, side: str = "left") -> Matrix:
    """Matrix of x -> q x (``side="left"``) or x -> x q on R^4 = H."""
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    cols = [(q * u if side == "left" else u * q).coords for u in _UNITS]
    return Matrix.from_columns(cols)


def block_mult(quats: Sequence[Quaternion], side: str = "left") -> Matrix:
    """Block-diagonal multiplication by (q_1, ..., q_l) on H^l."""
    return Matrix.block_diagonal([quaternion_mult_matrix(q, side) for q in quats])


def standard_right_structure(l: int) -> HypercomplexStructure:
    """Right multiplication by (i,..,i), (j,..,j), (-k,..,-k) on H^l."""
    return HypercomplexStructure(
        block_mult([QI] * l, "right"),
        block_mult([QJ] * l, "right"),
        block_mult([-QK] * l, "right"),
    )


# ---- catalog -----------------------------------------------------------------

_N1 = {(0, 1): {4: 1}, (2, 3): {4: -1}}
_N2 = {(0, 2): {5: 1}, (1, 3): {5: 1}, (0, 3): {6: 1}, (1, 2): {6: -1}}
_N3 = {**_N1, **_N2}

# [e1,e2] = -[e5,e6] = -e10, [e2,e5] = -[e1,e6] = -e11,
# [e1,e4] = [e2,e10] = [e5,e8] = [e6,e11] = -e12   (1-based)
_EX3 = {
    (0, 1): {9: -1},
    (4, 5): {9: 1},
    (1, 4): {10: -1},
    (0, 5): {10: 1},
    (0, 3): {11: -1},
    (1, 9): {11: -1},
    (4, 7): {11: -1},
    (5, 10): {11: -1},
}

# signed basis images (1-based index, sign), J1 and J2
_EX3_J1 = {1: (2, 1), 3: (12, 1), 4: (10, 1), 5: (6, 1), 7: (9, 1), 8: (11, 1)}
_EX3_J2 = {1: (6, 1), 2: (5, 1), 3: (9, 1), 4: (11, 1), 8: (10, -1), 7: (12, -1)}

CATALOG_NAMES = ("n1", "n2", "n3", "example3_12dim")


def _signed_images(n: int, spec: dict[int, tuple[int, int]]) -> dict[int, tuple]:
    out = {}
    for src, (dst, sign) in spec.items():
        v = [ZERO] * n
        v[dst - 1] = Fraction(sign)
        out[src - 1] = tuple(v)
    return out


def _eight_dim_structure() -> HypercomplexStructure:
    # J_i e1 = e_{i+1}, J_i e5 = e_{5+i}; the rest follows from the relations
    imgs = [_signed_images(8, {1: (1 + i, 1), 5: (5 + i, 1)}) for i in (1, 2, 3)]
    return complete_hypercomplex(8, *imgs)


def catalog(name: str) -> tuple[MetricLieAlgebra, HypercomplexStructure]:
    """One of ``"n1"``, ``"n2"``, ``"n3"``, ``"example3_12dim"`` with the
    identity metric and its (completed) abelian hypercomplex structure."""
    if name in ("n1", "n2", "n3"):
        brackets = {"n1": _N1, "n2": _N2, "n3": _N3}[name]
        H = _eight_dim_structure()
        return MetricLieAlgebra(8, brackets), H
    if name == "example3_12dim":
        H = complete_hypercomplex(12, _signed_images(12, _EX3_J1), _signed_images(12, _EX3_J2))
        return MetricLieAlgebra(12, _EX3), H
    raise KeyError(f"unknown catalog algebra {name!r}; choose from {', '.join(CATALOG_NAMES)}")


# ---- j-maps ------------------------------------------------------------------


@dataclass(frozen=True)
class JMap:
    """Linear map z -> j_z from R^m into sp of a 4l-dimensional space.

    ``maps[a]`` is j_{e_a}; ``reference`` is the hypercomplex structure of
    the representation space the j's must commute with.
    """

    maps: tuple[Matrix, ...]
    reference: HypercomplexStructure | None

    @property
    def m(self) -> int:
        return len(self.maps)

    @property
    def rep_dim(self) -> int:
        return 0 if self.reference is None else self.reference.dim

    def is_empty(self) -> bool:
        return self.reference is None

    def validate(self) -> None:
        if self.reference is None:
            if self.maps:
                raise PreconditionError("j-map without a representation space must be empty")
            return
        n = self.rep_dim
        if n % 4:
            raise PreconditionError("representation dimension must be a multiple of 4")
        ident = Matrix.identity(n)
        if not check_quaternion(self.reference):
            raise PreconditionError("reference structure violates the quaternion relations")
        if any(J.T @ J != ident for J in self.reference.triple):
            raise PreconditionError("reference structure is not orthogonal")
        for a, j in enumerate(self.maps):
            if j.shape != (n, n):
                raise PreconditionError(f"j_{a + 1} has the wrong size")
            if not j.is_skew():
                raise PreconditionError(f"j_{a + 1} is not skew-symmetric")
            for i, J in enumerate(self.reference.triple, start=1):
                if j @ J != J @ j:
                    raise PreconditionError(f"j_{a + 1} does not commute with J{i}")
        if self.m:
            flat = Matrix([[x for row in j for x in row] for j in self.maps])
            if flat.rank() != self.m:
                raise PreconditionError("j is not injective")


def to_jmap(
    L: MetricLieAlgebra, H: HypercomplexStructure, g: Matrix | None = None
) -> JMap:
    """Read off j from a 2-step algebra with abelian HKT structure.

    g(j_z X, Y) = g([X, Y], z) for X, Y orthogonal to the center and z in an
    orthonormal basis of [n, n].  Orthonormal bases are built by exact
    Gram-Schmidt; a basis vector whose squared norm is not a rational square
    raises :class:`PreconditionError`.
    """
    g = L.metric if g is None else g
    series = lower_central_series(L)
    if not series.nilpotent or series.step > 2:
        raise PreconditionError("to_jmap needs a nilpotent algebra of step at most 2")
    if not check_hkt(L, H, g).hkt or not check_abelian(L, H):
        raise PreconditionError("to_jmap needs an abelian HKT structure")
    vbasis = orthonormal_basis(center(L).orthogonal_complement(g), g)
    if not vbasis:
        return JMap((), None)
    zbasis = orthonormal_basis(derived_algebra(L), g)

    def restrict(J: Matrix) -> Matrix:
        # entry (b, a) is g(J f_a, f_b)
        return Matrix([[dot(g.apply(fb), J.apply(fa)) for fa in vbasis] for fb in vbasis])

    ref = HypercomplexStructure(*(restrict(J) for J in H.triple))
    maps = []
    for zeta in zbasis:
        gz = g.apply(zeta)
        maps.append(Matrix([[dot(L.bracket(fa, fb), gz) for fa in vbasis] for fb in vbasis]))
    j = JMap(tuple(maps), ref)
    j.validate()
    return j


def _rational_sqrt(x: Fraction) -> Fraction | None:
    from math import isqrt

    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def orthonormal_basis(S: Subspace, g: Matrix) -> list[tuple]:
    """Exact Gram-Schmidt on the canonical basis of ``S``."""
    out: list[tuple] = []
    for v in S.basis:
        w = list(v)
        for f in out:
            c = dot(f, g.apply(w))
            w = [a - c * b for a, b in zip(w, f)]
        n2 = dot(w, g.apply(w))
        r = _rational_sqrt(n2)
        if r is None:
            raise PreconditionError("no rational orthonormal basis: squared norm " f"{n2} is not a square")
        out.append(tuple(x / r for x in w))
    return out


def from_jmap(j: JMap) -> tuple[MetricLieAlgebra, HypercomplexStructure, int]:
    """Build the 2-step algebra R^{4l} + R^s + R^m from a j-map.

    s = (-m) mod 4 pads the center to a multiple of 4.  Brackets are
    g([X, Y], z_a) = g(j_a X, Y) on the representation space, the metric is
    the standard one, and the hypercomplex structure is the reference one on
    R^{4l} and right multiplication by i, j, -k on each 4-block of the center.
    """
    j.validate()
    if j.is_empty():
        raise PreconditionError("an empty j-map does not determine an algebra")
    k, m = j.rep_dim, j.m
    pad = (-m) % 4
    n = k + pad + m
    brackets = {}
    for p in range(k):
        for q in range(p + 1, k):
            t = {k + pad + a: ja[q, p] for a, ja in enumerate(j.maps) if ja[q, p]}
            if t:
                brackets[(p, q)] = t
    L = MetricLieAlgebra(n, brackets)
    blocks = (pad + m) // 4
    center_H = standard_right_structure(blocks) if blocks else None
    triple = []
    for idx, J in enumerate(j.reference.triple):
        parts = [J] + ([center_H.triple[idx]] if center_H else [])
        triple.append(Matrix.block_diagonal(parts))
    H = HypercomplexStructure(*triple)
    return L, H, pad


def family_t_jmap(l: int, t) -> JMap:
    """j_{e1} = L_(i,..,i), j_{e2} = L_(j,..,j,tj) on H^l."""
    t = to_scalar(t)
    if l < 2:
        raise PreconditionError("family_t needs l >= 2")
    if t <= 0:
        raise PreconditionError("family_t needs t > 0")
    j1 = block_mult([QI] * l)
    j2 = block_mult([QJ] * (l - 1) + [QJ * t])
    return JMap((j1, j2), standard_right_structure(l))


def family_ts_jmap(l: int, t, s) -> JMap:
    """j_{e1} = L_(i,..,i), j_{e2} = L_(j,..,tj,j), j_{e3} = L_(k,..,k,sk) on H^l."""
    t, s = to_scalar(t), to_scalar(s)
    if l < 3:
        raise PreconditionError("family_ts needs l >= 3")
    if not 0 < t < s < 1:
        raise PreconditionError("family_ts needs 0 < t < s < 1")
    j1 = block_mult([QI] * l)
    j2 = block_mult([QJ] * (l - 2) + [QJ * t, QJ])
    j3 = block_mult([QK] * (l - 1) + [QK * s])
    return JMap((j1, j2, j3), standard_right_structure(l))


def family_t(l: int, t) -> tuple[MetricLieAlgebra, HypercomplexStructure]:
    L, H, _ = from_jmap(family_t_jmap(l, t))
    return L, H


def family_ts(l: int, t, s) -> tuple[MetricLieAlgebra, HypercomplexStructure]:
    L, H, _ = from_jmap(family_ts_jmap(l, t, s))
    return L, H


def relabel(L: MetricLieAlgebra, perm: Sequence[int], signs: Sequence[int] | None = None) -> MetricLieAlgebra:
    """Algebra in the basis f_{perm[a]} = signs[a] e_a.

    Useful for comparing bracket tables up to a signed permutation.
    """
    n = L.dim
    signs = signs or [1] * n
    brackets = {}
    for (i, j), t in L.structure_constants.items():
        s = signs[i] * signs[j]
        brackets[(perm[i], perm[j])] = {perm[k]: s * c * signs[k] for k, c in t.items()}
    return MetricLieAlgebra(n, brackets, check=False)


def lie_algebra_is_two_step_with(L: MetricLieAlgebra, m: int) -> bool:
    series = lower_central_series(L)
    return series.nilpotent and series.step == 2 and series.terms[1].dim == m

