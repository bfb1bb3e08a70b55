"""Hypercomplex structures on Lie algebras: quaternion relations,
integrability, compatibility, the abelian condition and the HKT identities."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Sequence

from .errors import ConsistencyError, PreconditionError
from .exactlin import ZERO, Fraction, Matrix, Subspace, Vector, basis_vector, solve_linear, vector
from .liealg import MetricLieAlgebra, bracket_subspaces, center, derived_algebra, lower_central_series


@dataclass(frozen=True)
class HypercomplexStructure:
    J1: Matrix
    J2: Matrix
    J3: Matrix

    def __post_init__(self):
        shapes = {self.J1.shape, self.J2.shape, self.J3.shape}
        if len(shapes) != 1 or not self.J1.is_square:
            raise ValueError("J1, J2, J3 must be square matrices of equal size")

    @classmethod
    def from_pair(cls, J1: Matrix, J2: Matrix) -> "HypercomplexStructure":
        return cls(J1, J2, J1 @ J2)

    @property
    def dim(self) -> int:
        return self.J1.rows

    @property
    def triple(self) -> tuple[Matrix, Matrix, Matrix]:
        return (self.J1, self.J2, self.J3)

    def __getitem__(self, i: int) -> Matrix:
        """1-based access: ``H[1]`` is J1."""
        return self.triple[i - 1]

    def conjugate(self, P: Matrix) -> "HypercomplexStructure":
        """The structure P J P^-1."""
        Pinv = P.inverse()
        return HypercomplexStructure(*(P @ J @ Pinv for J in self.triple))


@dataclass(frozen=True)
class Check:
    ok: bool
    witness: object = None

    def __bool__(self) -> bool:
        return self.ok


class _PartialMap:
    """A linear map known on a subspace, grown by adding input/output pairs."""

    def __init__(self, n: int, name: str):
        self.n = n
        self.name = name
        self.inputs: list[Vector] = []
        self.outputs: list[Vector] = []

    @property
    def complete(self) -> bool:
        return len(self.inputs) == self.n

    def apply(self, v: Vector) -> Vector | None:
        if not self.inputs:
            return None
        A = Matrix.from_columns(self.inputs)
        coeffs = solve_linear(A, v)
        if coeffs is None:
            return None
        out = [ZERO] * self.n
        for c, y in zip(coeffs, self.outputs):
            if c:
                for k, yk in enumerate(y):
                    out[k] += c * yk
        return tuple(out)

    def add(self, x: Vector, y: Vector) -> bool:
        known = self.apply(x)
        if known is not None:
            if known != y:
                raise ConsistencyError(
                    f"{self.name}: relations force two different images for {_fmt_vec(x)}"
                )
            return False
        self.inputs.append(x)
        self.outputs.append(y)
        return True

    def matrix(self) -> Matrix:
        return Matrix.from_columns([self.apply(basis_vector(self.n, a)) for a in range(self.n)])


def _fmt_vec(v: Sequence[Fraction]) -> str:
    terms = [f"{c}*e{k + 1}" for k, c in enumerate(v) if c]
    return " + ".join(terms) or "0"


def complete_hypercomplex(
    n: int,
    images1: Mapping[int, Sequence],
    images2: Mapping[int, Sequence],
    images3: Mapping[int, Sequence] | None = None,
) -> HypercomplexStructure:
    """Complete partially specified J1, J2 (and optionally J3) to a full
    hypercomplex triple.

    ``images1[a]`` is J1 e_a (0-based, dense vector).  The rules used are
    J_i^2 = -1 and J1 = J2 J3, J2 = J3 J1, J3 = J1 J2.  Conflicting data raises
    :class:`ConsistencyError`; data that does not determine the matrices raises
    :class:`PreconditionError`.
    """
    maps = [_PartialMap(n, "J1"), _PartialMap(n, "J2"), _PartialMap(n, "J3")]
    for pm, imgs in zip(maps, (images1, images2, images3 or {})):
        for a, y in imgs.items():
            pm.add(basis_vector(n, a), vector(y))
    compose = [(0, 1, 2), (1, 2, 0), (2, 0, 1)]  # J_i = J_j J_k
    changed = True
    while changed and not all(m.complete for m in maps):
        changed = False
        for pm in maps:
            for x, y in list(zip(pm.inputs, pm.outputs)):
                changed |= pm.add(y, tuple(-c for c in x))
        for a in range(n):
            e = basis_vector(n, a)
            for i, j, k in compose:
                inner = maps[k].apply(e)
                if inner is None:
                    continue
                outer = maps[j].apply(inner)
                if outer is not None:
                    changed |= maps[i].add(e, outer)
    missing = [m.name for m in maps if not m.complete]
    if missing:
        raise PreconditionError(f"partial data does not determine {', '.join(missing)}")
    H = HypercomplexStructure(*(m.matrix() for m in maps))
    q = check_quaternion(H)
    if not q:
        raise ConsistencyError(f"completed structure violates {q.witness}")
    return H


def check_quaternion(H: HypercomplexStructure) -> Check:
    """J_i^2 = -I and J1 J2 = -J2 J1 = J3, all exactly."""
    J1, J2, J3 = H.triple
    minus_id = -Matrix.identity(H.dim)
    for name, lhs, rhs in (
        ("J1^2 != -I", J1 @ J1, minus_id),
        ("J2^2 != -I", J2 @ J2, minus_id),
        ("J3^2 != -I", J3 @ J3, minus_id),
        ("J1J2 != J3", J1 @ J2, J3),
        ("J2J1 != -J3", J2 @ J1, -J3),
    ):
        if lhs != rhs:
            return Check(False, name)
    return Check(True)


def nijenhuis(L: MetricLieAlgebra, J: Matrix, X: Sequence, Y: Sequence) -> Vector:
    """N(X,Y) = J([X,Y] - [JX,JY]) - ([JX,Y] + [X,JY])."""
    X, Y = vector(X), vector(Y)
    JX, JY = J.apply(X), J.apply(Y)
    inner = tuple(a - b for a, b in zip(L.bracket(X, Y), L.bracket(JX, JY)))
    first = J.apply(inner)
    return tuple(
        f - (a + b) for f, a, b in zip(first, L.bracket(JX, Y), L.bracket(X, JY))
    )


def nijenhuis_witness(L: MetricLieAlgebra, J: Matrix) -> tuple[int, int] | None:
    """First basis pair (a, b), a < b, with N(e_a, e_b) != 0."""
    for a, b in combinations(range(L.dim), 2):
        if any(nijenhuis(L, J, L.basis(a), L.basis(b))):
            return (a, b)
    return None


def check_integrable(L: MetricLieAlgebra, H: HypercomplexStructure) -> tuple[bool, bool, bool]:
    return tuple(nijenhuis_witness(L, J) is None for J in H.triple)


def check_compatibility(L: MetricLieAlgebra, H: HypercomplexStructure, g: Matrix | None = None) -> bool:
    g = L.metric if g is None else g
    return all(J.T @ g @ J == g for J in H.triple)


def check_abelian(L: MetricLieAlgebra, H: HypercomplexStructure) -> Check:
    """[J_i e_a, J_i e_b] = [e_a, e_b] for every i and basis pair.

    The witness is ``(i, a, b)`` with 1-based ``i`` and 0-based indices.
    """
    for i, J in enumerate(H.triple, start=1):
        cols = [J.col(a) for a in range(L.dim)]
        for a, b in combinations(range(L.dim), 2):
            if L.bracket(cols[a], cols[b]) != L.bracket(L.basis(a), L.basis(b)):
                return Check(False, (i, a, b))
    return Check(True)


def _lowered_bracket_table(L: MetricLieAlgebra, g: Matrix, cols: Sequence[Vector], post: Matrix | None = None):
    """T[a][b] = g(post [cols_a, cols_b], .) as a covector over the basis."""
    n = L.dim
    gT = g.T
    T = [[None] * n for _ in range(n)]
    zero = (ZERO,) * n
    for a in range(n):
        T[a][a] = zero
        for b in range(a + 1, n):
            v = L.bracket(cols[a], cols[b])
            if post is not None and any(v):
                v = post.apply(v)
            row = gT.apply(v) if any(v) else zero
            T[a][b] = row
            T[b][a] = tuple(-x for x in row)
    return T


def _cyclic(T, a: int, b: int, c: int) -> Fraction:
    return T[a][b][c] + T[b][c][a] + T[c][a][b]


def hkt_rows(L: MetricLieAlgebra, H: HypercomplexStructure, g: Matrix | None = None):
    """The three rows of the HKT identity as alternating trilinear tables.

    Row i at (a, b, c) is g([J_i e_a, J_i e_b], e_c) + cyclic.  Returns a
    function ``row(i, a, b, c)`` with 1-based ``i``.
    """
    g = L.metric if g is None else g
    tables = [
        _lowered_bracket_table(L, g, [J.col(a) for a in range(L.dim)]) for J in H.triple
    ]

    def row(i: int, a: int, b: int, c: int) -> Fraction:
        return _cyclic(tables[i - 1], a, b, c)

    return row


@dataclass(frozen=True)
class HktWitness:
    triple: tuple[int, int, int]
    rows: tuple[int, int]
    values: tuple[Fraction, Fraction]

    def describe(self) -> str:
        a, b, c = (f"e{k + 1}" for k in self.triple)
        i, j = self.rows
        return f"rows {i} and {j} differ at ({a},{b},{c}): {self.values[0]} != {self.values[1]}"


@dataclass(frozen=True)
class HktVerdict:
    quaternion: bool
    compatible: bool
    integrable: tuple[bool, bool, bool]
    abelian: bool
    eq3: bool
    eq4: bool
    hkt: bool
    witness: HktWitness | None = None
    failed_gate: str | None = None

    def __bool__(self) -> bool:
        return self.hkt


def _eq3_scan(L, H, g) -> HktWitness | None:
    row = hkt_rows(L, H, g)
    for a, b, c in combinations(range(L.dim), 3):
        r1, r2, r3 = row(1, a, b, c), row(2, a, b, c), row(3, a, b, c)
        if r1 != r2:
            return HktWitness((a, b, c), (1, 2), (r1, r2))
        if r2 != r3:
            return HktWitness((a, b, c), (2, 3), (r2, r3))
    return None


def _eq4_holds(L, H, g) -> bool:
    n = L.dim
    J1, _, J3 = H.triple
    ident = [L.basis(a) for a in range(n)]
    lhs = _lowered_bracket_table(L, g, ident, post=J3)
    rhs = _lowered_bracket_table(L, g, [J1.col(a) for a in range(n)], post=J3)
    return all(
        _cyclic(lhs, a, b, c) == _cyclic(rhs, a, b, c) for a, b, c in combinations(range(n), 3)
    )


def check_hkt(L: MetricLieAlgebra, H: HypercomplexStructure, g: Matrix | None = None) -> HktVerdict:
    """Decide whether (H, g) is an HKT structure on L.

    The row identity is scanned on every basis triple regardless of the
    gates, so a witness is reported even for non-hyperhermitian data.  When
    the gates hold, the J3-form of the identity is evaluated as well and must
    agree; disagreement raises :class:`ConsistencyError`.
    """
    g = L.metric if g is None else g
    quat = bool(check_quaternion(H))
    compat = check_compatibility(L, H, g)
    integ = check_integrable(L, H) if quat else (False, False, False)
    abel = bool(check_abelian(L, H))
    witness = _eq3_scan(L, H, g)
    eq3 = witness is None
    gates_ok = quat and compat and all(integ)
    eq4 = _eq4_holds(L, H, g)
    failed = None
    if not quat:
        failed = "quaternion relations"
    elif not compat:
        failed = "metric compatibility"
    elif not all(integ):
        failed = "integrability"
    if gates_ok:
        if eq3 != eq4:
            raise ConsistencyError("row form and J3 form of the HKT identity disagree")
        if abel and not eq3:
            raise ConsistencyError("abelian hypercomplex structure fails the HKT identity")
    return HktVerdict(
        quaternion=quat,
        compatible=compat,
        integrable=tuple(integ),
        abelian=abel,
        eq3=eq3,
        eq4=eq4,
        hkt=gates_ok and eq3,
        witness=witness,
        failed_gate=failed,
    )


def quaternionic_closure(H: HypercomplexStructure, S: Subspace) -> Subspace:
    """S + J1 S + J2 S + J3 S."""
    out = S
    for J in H.triple:
        out = out + S.image(J)
    return out


def central_identity_violations(L: MetricLieAlgebra, H: HypercomplexStructure) -> list[str]:
    """Consequences of integrability on the center, checked on a basis:
    [J U, J V] = 0 for U, V central and J[J U, V] = [J U, J V] for U central."""
    z = center(L).basis
    out = []
    for l, J in enumerate(H.triple, start=1):
        for U in z:
            JU = J.apply(U)
            for V in z:
                if any(L.bracket(JU, J.apply(V))):
                    out.append(f"[J{l}U, J{l}V] != 0 for central U, V")
            for b in range(L.dim):
                V = L.basis(b)
                if J.apply(L.bracket(JU, V)) != L.bracket(JU, J.apply(V)):
                    out.append(f"J{l}[J{l}U, e{b + 1}] != [J{l}U, J{l}e{b + 1}]")
    return out


@dataclass
class CertificateStep:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class AbelianCertificate:
    """Step-by-step check that an HKT structure on a 2-step algebra is abelian."""

    steps: list[CertificateStep] = field(default_factory=list)
    quaternionic_derived: Subspace | None = None
    complement: Subspace | None = None

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.steps)


def _brackets_vanish(L: MetricLieAlgebra, S: Subspace, T: Subspace) -> bool:
    return bracket_subspaces(L, S, T).is_zero()


def abelian_certificate(
    L: MetricLieAlgebra, H: HypercomplexStructure, g: Matrix | None = None
) -> AbelianCertificate:
    """Run the chain of checks proving that an HKT structure on a nilpotent
    algebra of step at most two is abelian.

    With n1Q = [n,n] + J1[n,n] + J2[n,n] + J3[n,n] and m its orthogonal
    complement: (a) n1Q is proper, (b) [n1Q, n1Q] = 0, (c) [n1Q, m] = 0,
    (d) [Y, Z] = [J_i Y, J_i Z] on m, (e) the structure is abelian.  Any
    failed step would be a counterexample and is reported, not raised.
    """
    g = L.metric if g is None else g
    series = lower_central_series(L)
    if not series.nilpotent or series.step > 2:
        raise PreconditionError("certificate needs a nilpotent algebra of step at most 2")
    verdict = check_hkt(L, H, g)
    if not verdict.hkt:
        raise PreconditionError(f"structure is not HKT ({verdict.failed_gate or 'identity fails'})")

    n1 = derived_algebra(L)
    n1q = quaternionic_closure(H, n1)
    m = n1q.orthogonal_complement(g)
    cert = AbelianCertificate(quaternionic_derived=n1q, complement=m)
    full = Subspace.full(L.dim)
    cert.steps.append(
        CertificateStep("n1Q proper", n1q < full, f"dim n1Q = {n1q.dim} of {L.dim}")
    )
    cert.steps.append(CertificateStep("[n1Q, n1Q] = 0", _brackets_vanish(L, n1q, n1q)))
    cert.steps.append(CertificateStep("[n1Q, m] = 0", _brackets_vanish(L, n1q, m)))

    bad = None
    for J in H.triple:
        if not m.image(J) <= m:
            bad = "m is not J-invariant"
            break
        for Y, Z in combinations(m.basis, 2):
            if L.bracket(Y, Z) != L.bracket(J.apply(Y), J.apply(Z)):
                bad = "[Y, Z] != [JY, JZ] on m"
                break
        if bad:
            break
    cert.steps.append(CertificateStep("[Y,Z] = [J_i Y, J_i Z] on m", bad is None, bad or ""))
    ab = check_abelian(L, H)
    cert.steps.append(
        CertificateStep("abelian", ab.ok, "" if ab.ok else f"fails at {ab.witness}")
    )
    return cert
