"""Non-isometry certificates for j-map algebras and the rational-basis lattice
criterion.

Two simply connected 2-step groups built from j-maps j, j' can only be
isometric if some orthogonal f of the representation space and some
orthogonal h of the parameter space satisfy j'_{h z} = f j_z f^{-1}.  Every
quantity collected in :class:`InvariantSignature` is unchanged by such
(f, h), so differing signatures certify non-isometry.  Equal signatures
prove nothing, and :func:`compare` says so.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Literal, Sequence

from .constructors import JMap
from .exactlin import Matrix, char_poly
from .hypercx import HypercomplexStructure
from .liealg import MetricLieAlgebra, lower_central_series
from .errors import PreconditionError


@dataclass(frozen=True)
class InvariantSignature:
    """Spectral data of a j-map.

    ``pair_traces`` is the characteristic polynomial of the m^2 x m^2 Gram
    matrix tr({j_a, j_b}{j_c, j_d}).  Its diagonal holds the individual
    traces tr({j_a, j_b}^2); the individual values move under rotations of
    the parameter space but the Gram spectrum does not.
    """

    m: int
    rep_dim: int
    charpoly_S: tuple[Fraction, ...]
    power_traces: tuple[Fraction, ...]
    pair_traces: tuple[Fraction, ...]

    def is_empty(self) -> bool:
        return self.m == 0


def _sum_of_squares(j: JMap) -> Matrix:
    S = Matrix.zeros(j.rep_dim)
    for ja in j.maps:
        S = S + ja @ ja
    return S


def power_sums(charpoly: Sequence[Fraction]) -> list[Fraction]:
    """tr(A^p), p = 1..n, from the monic characteristic polynomial of A
    (Newton's identities)."""
    n = len(charpoly) - 1
    p: list[Fraction] = []
    for k in range(1, n + 1):
        acc = -k * charpoly[k]
        for i in range(1, k):
            acc -= charpoly[i] * p[k - i - 1]
        p.append(acc)
    return p


def _trace_of_product(X: Matrix, Y: Matrix) -> Fraction:
    return sum((x * y for rx, cy in zip(X, Y.T) for x, y in zip(rx, cy) if x and y), Fraction(0))


def isometry_signature(j: JMap) -> InvariantSignature:
    """Signature of a j-map; the caller is responsible for ``j.validate()``."""
    if j.m == 0:
        return InvariantSignature(0, j.rep_dim, (), (), ())
    S = _sum_of_squares(j)
    cp = char_poly(S)
    anti = [ja @ jb + jb @ ja for ja in j.maps for jb in j.maps]
    gram = Matrix([[_trace_of_product(x, y) for y in anti] for x in anti])
    return InvariantSignature(
        j.m, j.rep_dim, tuple(cp), tuple(power_sums(cp)), tuple(char_poly(gram))
    )


def compare(j1: JMap, j2: JMap) -> Literal["distinct", "inconclusive"]:
    """``"distinct"`` certifies the two metric groups are not isometric."""
    if isometry_signature(j1) != isometry_signature(j2):
        return "distinct"
    return "inconclusive"


@dataclass(frozen=True)
class LatticeWitness:
    """Scaling every basis vector by ``scale`` makes all structure constants
    integers; ``integral_constants`` lists them (0-based, i < j)."""

    rational: bool
    scale: int
    integral_constants: dict[tuple[int, int], dict[int, int]]

    def __bool__(self) -> bool:
        return self.rational


def lattice_criterion(L: MetricLieAlgebra) -> LatticeWitness:
    """Rational-basis criterion for the existence of a lattice.

    The basis D*e_i, with D the common denominator of all constants, has
    integer structure constants D*c^k_ij.
    """
    if not lower_central_series(L).nilpotent:
        raise PreconditionError("lattice criterion applies to nilpotent algebras")
    consts = L.structure_constants
    values = [c for t in consts.values() for c in t.values()]
    rational = all(isinstance(c, Fraction) for c in values)
    D = lcm(*(c.denominator for c in values)) if values else 1
    scaled = {}
    for key, t in consts.items():
        row = {}
        for k, c in t.items():
            v = D * c
            if v.denominator != 1:
                raise AssertionError("common denominator did not clear a constant")
            row[k] = int(v)
        scaled[key] = row
    return LatticeWitness(rational, D, scaled)


_SLOPES = (Fraction(1, 2), Fraction(2), Fraction(1, 3), Fraction(3, 2), Fraction(-1, 2), Fraction(-2, 3))


def random_rational_orthogonal(n: int, rng: random.Random, rotations: int | None = None) -> Matrix:
    """Random signed permutation followed by rational plane rotations.

    A rotation with slope u has cos = (1 - u^2)/(1 + u^2), sin = 2u/(1 + u^2);
    keeping u small keeps the denominators manageable.
    """
    perm = list(range(n))
    rng.shuffle(perm)
    rows = [[Fraction(0)] * n for _ in range(n)]
    for a, b in enumerate(perm):
        rows[a][b] = Fraction(rng.choice((1, -1)))
    for _ in range(n if rotations is None else rotations):
        if n < 2:
            break
        a, b = rng.sample(range(n), 2)
        u = rng.choice(_SLOPES)
        cos, sin = (1 - u * u) / (1 + u * u), 2 * u / (1 + u * u)
        ra, rb = rows[a], rows[b]
        rows[a] = [cos * x - sin * y for x, y in zip(ra, rb)]
        rows[b] = [sin * x + cos * y for x, y in zip(ra, rb)]
    return Matrix(rows)


def conjugate_jmap(j: JMap, P: Matrix) -> JMap:
    """Push j forward by an orthogonal P: j_z -> P j_z P^T, reference likewise."""
    if j.reference is None:
        return j
    Pt = P.T
    ref = HypercomplexStructure(*(P @ J @ Pt for J in j.reference.triple))
    return JMap(tuple(P @ ja @ Pt for ja in j.maps), ref)


def rotate_parameters(j: JMap, R: Matrix) -> JMap:
    """New parameter basis e'_a = sum_b R[b, a] e_b."""
    if R.shape != (j.m, j.m):
        raise ValueError("rotation size does not match the parameter dimension")
    maps = []
    for a in range(j.m):
        acc = Matrix.zeros(j.rep_dim)
        for b, jb in enumerate(j.maps):
            if R[b, a]:
                acc = acc + jb.scale(R[b, a])
        maps.append(acc)
    return JMap(tuple(maps), j.reference)
