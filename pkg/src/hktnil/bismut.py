"""The Bismut connection of an invariant HKT structure and its torsion,
curvature, Ricci tensor, Lee forms and covariant derivatives.

Invariant tensors are handled through their values on a fixed basis, so the
derivative of a constant coefficient is dropped: for an invariant form
(nabla_X a)(Y_1..Y_k) = -sum_m a(Y_1, .., nabla_X Y_m, .., Y_k).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Sequence

from .errors import ConsistencyError, NotHKT, PreconditionError
from .exactlin import (
    ZERO,
    AltForm,
    Fraction,
    Matrix,
    Vector,
    char_poly,
    dot,
    perm_sign,
    positive_definite,
    sort_with_sign,
    vector,
)
from .hypercx import HypercomplexStructure, _lowered_bracket_table, check_abelian
from .liealg import MetricLieAlgebra, ce_d, center

# The closed-form dc expressions below are written for the opposite
# orientation of d (brackets of right-invariant fields).  Under ce_d's
# left-invariant convention, ce_d(c) = DC_FORMULA_SIGN * formula.
DC_FORMULA_SIGN = -1


@dataclass(frozen=True)
class Connection:
    """Invariant connection; ``operators[i]`` is the matrix of nabla_{e_i}.

    Column j of ``operators[i]`` is nabla_{e_i} e_j, i.e. its entry (k, j) is
    the Christoffel symbol Gamma^k_{ij}.
    """

    operators: tuple[Matrix, ...]

    @property
    def dim(self) -> int:
        return len(self.operators)

    def gamma(self, i: int, j: int, k: int) -> Fraction:
        return self.operators[i][k, j]

    def nabla_basis(self, i: int, j: int) -> Vector:
        return self.operators[i].col(j)

    def nabla(self, X: Sequence, Y: Sequence) -> Vector:
        out = [ZERO] * self.dim
        Y = vector(Y)
        for i, x in enumerate(vector(X)):
            if x:
                for k, v in enumerate(self.operators[i].apply(Y)):
                    out[k] += x * v
        return tuple(out)

    def entries(self) -> list[tuple[int, int, dict[int, Fraction]]]:
        """Nonzero nabla_{e_i} e_j as ``(i, j, {k: coeff})``, sorted."""
        out = []
        for i, A in enumerate(self.operators):
            for j in range(self.dim):
                col = A.col(j)
                if any(col):
                    out.append((i, j, {k: v for k, v in enumerate(col) if v}))
        return out

    def with_gamma(self, i: int, j: int, k: int, value) -> "Connection":
        """Copy with one Christoffel symbol replaced."""
        ops = list(self.operators)
        rows = ops[i].tolist()
        rows[k][j] = value
        ops[i] = Matrix(rows)
        return Connection(tuple(ops))


def eq5_lowered(
    L: MetricLieAlgebra, H: HypercomplexStructure, i: int, g: Matrix | None = None
) -> list[list[Vector]]:
    """g(nabla_{e_x} e_y, e_z) from the invariant Bismut formula using J_i.

    2 g(nabla_X Y, Z) = g([X,Y] - [JX,JY], Z) - g([Y,Z] + [JY,JZ], X)
                        + g([Z,X] - [JZ,JX], Y)
    """
    g = L.metric if g is None else g
    n = L.dim
    J = H[i]
    P = _lowered_bracket_table(L, g, [L.basis(a) for a in range(n)])
    Q = _lowered_bracket_table(L, g, [J.col(a) for a in range(n)])
    half = Fraction(1, 2)
    out = []
    for x in range(n):
        rows = []
        for y in range(n):
            rows.append(
                tuple(
                    half
                    * (
                        P[x][y][z]
                        - Q[x][y][z]
                        - P[y][z][x]
                        - Q[y][z][x]
                        + P[z][x][y]
                        - Q[z][x][y]
                    )
                    for z in range(n)
                )
            )
        out.append(rows)
    return out


def _raise_table(L: MetricLieAlgebra, g: Matrix, lowered) -> Connection:
    ginv = L.metric_inverse if g is L.metric else g.inverse()
    n = L.dim
    ops = []
    for x in range(n):
        cols = [ginv.apply(lowered[x][y]) for y in range(n)]
        ops.append(Matrix.from_columns(cols))
    return Connection(tuple(ops))


def bismut_connection(
    L: MetricLieAlgebra, H: HypercomplexStructure, g: Matrix | None = None
) -> Connection:
    """The Bismut connection of an invariant HKT structure.

    Builds the connection from J1, J2 and J3 separately and requires the three
    to coincide, which is exactly the HKT condition.  For abelian structures
    the result is also matched against g(nabla_X Y, Z) = -g([Y,Z], X).
    """
    g = L.metric if g is None else g
    n = L.dim
    tables = [eq5_lowered(L, H, i, g) for i in (1, 2, 3)]
    for i in (1, 2):
        if tables[i] != tables[0]:
            x, y = next(
                (x, y) for x in range(n) for y in range(n) if tables[i][x][y] != tables[0][x][y]
            )
            raise NotHKT(
                f"connection built from J1 and J{i + 1} differ at nabla_e{x + 1} e{y + 1}"
            )
    if check_abelian(L, H):
        P = _lowered_bracket_table(L, g, [L.basis(a) for a in range(n)])
        for x in range(n):
            for y in range(n):
                if tables[0][x][y] != tuple(-P[y][z][x] for z in range(n)):
                    raise ConsistencyError("abelian reduction of the Bismut connection fails")
    return _raise_table(L, g, tables[0])


@dataclass
class AxiomReport:
    metric_compatible: bool = True
    parallel_J: tuple[bool, bool, bool] = (True, True, True)
    torsion_alternating: bool = True
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.metric_compatible and all(self.parallel_J) and self.torsion_alternating


def torsion_values(L: MetricLieAlgebra, conn: Connection, g: Matrix | None = None) -> list:
    """c[x][y][z] = g(e_x, T(e_y, e_z)) with T(Y,Z) = nabla_Y Z - nabla_Z Y - [Y,Z]."""
    g = L.metric if g is None else g
    n = L.dim
    c = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    for y in range(n):
        for z in range(y + 1, n):
            T = [
                a - b - c_
                for a, b, c_ in zip(
                    conn.nabla_basis(y, z),
                    conn.nabla_basis(z, y),
                    L.bracket(L.basis(y), L.basis(z)),
                )
            ]
            low = g.apply(T)
            for x in range(n):
                c[x][y][z] = low[x]
                c[x][z][y] = -low[x]
    return c


def verify_bismut_axioms(
    L: MetricLieAlgebra,
    H: HypercomplexStructure,
    conn: Connection,
    g: Matrix | None = None,
) -> AxiomReport:
    """Check nabla g = 0, nabla J_i = 0 and total skew-symmetry of the torsion."""
    g = L.metric if g is None else g
    rep = AxiomReport()
    for x, A in enumerate(conn.operators):
        gA = g @ A
        if gA.T != -gA:
            rep.metric_compatible = False
            rep.failures.append(f"nabla_e{x + 1} is not g-skew")
            break
    par = []
    for l, J in enumerate(H.triple, start=1):
        bad = next((x for x, A in enumerate(conn.operators) if A @ J != J @ A), None)
        par.append(bad is None)
        if bad is not None:
            rep.failures.append(f"(nabla_e{bad + 1} J{l}) != 0")
    rep.parallel_J = tuple(par)
    c = torsion_values(L, conn, g)
    n = L.dim
    for x in range(n):
        for y in range(x + 1, n):
            for z in range(n):
                if c[x][y][z] != -c[y][x][z]:
                    rep.torsion_alternating = False
                    rep.failures.append(
                        f"torsion not alternating at (e{x + 1},e{y + 1},e{z + 1})"
                    )
                    return rep
    return rep


def torsion_form(L: MetricLieAlgebra, conn: Connection, g: Matrix | None = None) -> AltForm:
    """The torsion 3-form c(X,Y,Z) = g(X, T(Y,Z))."""
    c = torsion_values(L, conn, g)
    n = L.dim
    for x in range(n):
        for y in range(x + 1, n):
            for z in range(n):
                if c[x][y][z] != -c[y][x][z]:
                    raise PreconditionError("torsion is not a 3-form; input is not HKT")
    return AltForm._trusted(
        n, 3, {(x, y, z): c[x][y][z] for x, y, z in combinations(range(n), 3) if c[x][y][z]}
    )


def abelian_torsion_formula(L: MetricLieAlgebra, g: Matrix | None = None) -> AltForm:
    """c(X,Y,Z) = -(g([X,Y],Z) + g([Y,Z],X) + g([Z,X],Y))."""
    g = L.metric if g is None else g
    n = L.dim
    P = _lowered_bracket_table(L, g, [L.basis(a) for a in range(n)])
    coeffs = {}
    for x, y, z in combinations(range(n), 3):
        v = -(P[x][y][z] + P[y][z][x] + P[z][x][y])
        if v:
            coeffs[(x, y, z)] = v
    return AltForm._trusted(n, 3, coeffs)


# ---- dc and the strong / weak dichotomy ------------------------------------


def dc_formula(L: MetricLieAlgebra, X, Y, Z, W, g: Matrix | None = None) -> Fraction:
    """-2g([X,Y],[Z,W]) + 2g([X,Z],[Y,W]) - 2g([X,W],[Y,Z])."""
    g = L.metric if g is None else g
    b = L.bracket
    ip = lambda u, v: dot(u, g.apply(v))  # noqa: E731
    return 2 * (-ip(b(X, Y), b(Z, W)) + ip(b(X, Z), b(Y, W)) - ip(b(X, W), b(Y, Z)))


def dc_formula_form(L: MetricLieAlgebra, g: Matrix | None = None) -> AltForm:
    e = L.basis
    coeffs = {}
    for q in combinations(range(L.dim), 4):
        v = dc_formula(L, *(e(i) for i in q), g=g)
        if v:
            coeffs[q] = v
    return AltForm._trusted(L.dim, 4, coeffs)


def _norm2(L: MetricLieAlgebra, g: Matrix, v: Vector) -> Fraction:
    return dot(v, g.apply(v))


def eq6_rhs(L: MetricLieAlgebra, H: HypercomplexStructure, X, g: Matrix | None = None) -> Fraction:
    """2 sum_i ||[X, J_i X]||^2."""
    g = L.metric if g is None else g
    X = vector(X)
    return 2 * sum((_norm2(L, g, L.bracket(X, J.apply(X))) for J in H.triple), ZERO)


def eq7_rhs(L: MetricLieAlgebra, H: HypercomplexStructure, X, Y, g: Matrix | None = None) -> Fraction:
    """-2g([X,J1X],[Y,J1Y]) + 2||[X,Y]||^2 + 2||[X,J1Y]||^2."""
    g = L.metric if g is None else g
    X, Y = vector(X), vector(Y)
    J1 = H.J1
    b = L.bracket
    return (
        -2 * dot(b(X, J1.apply(X)), g.apply(b(Y, J1.apply(Y))))
        + 2 * _norm2(L, g, b(X, Y))
        + 2 * _norm2(L, g, b(X, J1.apply(Y)))
    )


def classify_strong_weak(
    L: MetricLieAlgebra,
    c: AltForm,
    H: HypercomplexStructure | None = None,
    g: Matrix | None = None,
) -> str:
    """``"torsion-free"`` if c = 0, ``"strong"`` if dc = 0, else ``"weak"``.

    When an abelian hypercomplex structure on a non-abelian algebra is
    supplied, dc is cross-checked against the closed-form expression and
    some basis vector X must give dc(X, J1X, J2X, J3X) != 0.
    """
    dc = ce_d(L, c)
    if c.is_zero():
        verdict = "torsion-free"
    elif dc.is_zero():
        verdict = "strong"
    else:
        verdict = "weak"
    if H is not None and not L.is_abelian and check_abelian(L, H):
        if dc != dc_formula_form(L, g).scale(DC_FORMULA_SIGN):
            raise ConsistencyError("dc disagrees with the closed-form expression")
        witness = False
        for a in range(L.dim):
            X = L.basis(a)
            args = [X] + [J.apply(X) for J in H.triple]
            val = dc(*args)
            if val != DC_FORMULA_SIGN * eq6_rhs(L, H, X, g):
                raise ConsistencyError(f"dc(X,J1X,J2X,J3X) identity fails at e{a + 1}")
            witness |= val != 0
        if not witness or verdict != "weak":
            raise ConsistencyError("abelian structure on a non-abelian algebra must be weak")
    return verdict


# ---- curvature ---------------------------------------------------------------


@dataclass(frozen=True)
class CurvatureTensor:
    """``ops[i][j]`` is the matrix of R(e_i, e_j) = [nabla_i, nabla_j] - nabla_[e_i,e_j]."""

    ops: tuple[tuple[Matrix, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.ops)

    def value(self, l: int, i: int, j: int, k: int) -> Fraction:
        """R^l_{ijk}: the e_l component of R(e_i, e_j) e_k."""
        return self.ops[i][j][l, k]

    def apply(self, i: int, j: int, v: Sequence) -> Vector:
        return self.ops[i][j].apply(vector(v))

    def is_zero(self) -> bool:
        return all(M.is_zero() for row in self.ops for M in row)


def curvature(L: MetricLieAlgebra, conn: Connection) -> CurvatureTensor:
    n = L.dim
    A = conn.operators
    zero = Matrix.zeros(n)
    grid = [[zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            R = A[i] @ A[j] - A[j] @ A[i]
            for m, c in L.bracket_basis(i, j).items():
                R = R - A[m].scale(c)
            grid[i][j] = R
            grid[j][i] = -R
    return CurvatureTensor(tuple(tuple(r) for r in grid))


def _split(L: MetricLieAlgebra, g: Matrix):
    z = center(L)
    v = z.orthogonal_complement(g)
    return z, v


def connection_structure_violations(
    L: MetricLieAlgebra, conn: Connection, g: Matrix | None = None
) -> list[str]:
    """For 2-step abelian HKT data: nabla_X Z = 0 (Z central), nabla_V X = 0
    (V orthogonal to the center) and nabla_X Y orthogonal to the center."""
    g = L.metric if g is None else g
    z, v = _split(L, g)
    out = []
    n = L.dim
    for a in range(n):
        X = L.basis(a)
        if any(any(conn.nabla(X, Z)) for Z in z.basis):
            out.append(f"nabla_e{a + 1} moves a central vector")
        for b in range(n):
            if conn.nabla_basis(a, b) not in v:
                out.append(f"nabla_e{a + 1} e{b + 1} leaves the complement of the center")
    for V in v.basis:
        if any(any(conn.nabla(V, L.basis(b))) for b in range(n)):
            out.append("nabla_V is nonzero for some V orthogonal to the center")
    return out


def curvature_identity_violations(
    L: MetricLieAlgebra, R: CurvatureTensor, g: Matrix | None = None
) -> list[str]:
    """g(R(X,Z)Y, Z') = 0 for central Z, Z' and
    g(R(X,V)Y, V') = g([X,V], [Y,V']) for V, V' orthogonal to the center."""
    g = L.metric if g is None else g
    z, v = _split(L, g)
    n = L.dim
    out = []
    ops = R.ops

    def R_apply(X, Y, W):
        acc = [ZERO] * n
        for i, x in enumerate(X):
            if not x:
                continue
            for j, y in enumerate(Y):
                if y:
                    for k, w in enumerate(ops[i][j].apply(W)):
                        acc[k] += x * y * w
        return acc

    ip = lambda u, w: dot(u, g.apply(w))  # noqa: E731
    for a in range(n):
        X = L.basis(a)
        for b in range(n):
            Y = L.basis(b)
            for Z in z.basis:
                for Z2 in z.basis:
                    if ip(R_apply(X, Z, Y), Z2):
                        out.append(f"g(R(e{a + 1},Z)e{b + 1},Z') != 0")
            for V in v.basis:
                for V2 in v.basis:
                    lhs = ip(R_apply(X, V, Y), V2)
                    rhs = ip(L.bracket(X, V), L.bracket(Y, V2))
                    if lhs != rhs:
                        out.append(f"g(R(e{a + 1},V)e{b + 1},V') != g([X,V],[Y,V'])")
    return out


# ---- Ricci tensor ------------------------------------------------------------


@dataclass(frozen=True)
class RicciForm:
    matrix: Matrix

    def __call__(self, X, Y) -> Fraction:
        return dot(vector(X), self.matrix.apply(vector(Y)))

    @property
    def symmetric(self) -> bool:
        return self.matrix.is_symmetric()


def ricci(L: MetricLieAlgebra, R: CurvatureTensor, g: Matrix | None = None) -> RicciForm:
    """rho(X, Y) = sum_j g(R(X, f_j) Y, f_j) over a g-orthonormal basis f_j.

    That sum is the trace of W -> R(X, W) Y, so no orthonormal basis (and no
    square root) is needed.  ``g`` is accepted for interface symmetry and
    checked for positivity.
    """
    g = L.metric if g is None else g
    if not positive_definite(g):
        raise PreconditionError("Ricci contraction needs a positive definite metric")
    n = L.dim
    rows = [
        [sum((R.value(p, a, p, b) for p in range(n)), ZERO) for b in range(n)] for a in range(n)
    ]
    return RicciForm(Matrix(rows))


def ricci_char_poly(rho: RicciForm, g: Matrix) -> list[Fraction]:
    """Characteristic polynomial of the g-self-adjoint endomorphism of rho."""
    return char_poly(g.inverse() @ rho.matrix)


def ricci_property_violations(
    L: MetricLieAlgebra, H: HypercomplexStructure, rho: RicciForm, g: Matrix | None = None
) -> list[str]:
    """Symmetry, rho(Z, .) = 0 on the center, and (polarized on a basis of the
    complement V of the center) rho(V, J W) + rho(W, J V) = 0 and
    rho(V, W) = rho(JV, JW)."""
    g = L.metric if g is None else g
    z, v = _split(L, g)
    out = []
    if not rho.symmetric:
        out.append("Ricci tensor is not symmetric")
    for Z in z.basis:
        if any(rho.matrix.T.apply(Z)):
            out.append("rho(Z, .) != 0 for a central Z")
            break
    for l, J in enumerate(H.triple, start=1):
        for V in v.basis:
            for W in v.basis:
                if rho(V, J.apply(W)) + rho(W, J.apply(V)):
                    out.append(f"rho(V, J{l}V) != 0")
                if rho(V, W) != rho(J.apply(V), J.apply(W)):
                    out.append(f"rho(V, V) != rho(J{l}V, J{l}V)")
    return out


# ---- Lee forms -----------------------------------------------------------------


def lee_form(
    L: MetricLieAlgebra,
    H: HypercomplexStructure,
    c: AltForm,
    l: int,
    g: Matrix | None = None,
) -> Vector:
    """theta(X) = -1/2 sum_i c(J_l X, f_i, J_l f_i), f_i g-orthonormal.

    The sum over an orthonormal basis is the g-trace of the bilinear form
    (u, w) -> c(J_l X, u, J_l w), so it is contracted with g^-1 directly.
    """
    g = L.metric if g is None else g
    if l not in (1, 2, 3):
        raise ValueError("l must be 1, 2 or 3")
    ginv = L.metric_inverse if g is L.metric else g.inverse()
    J = H[l]
    n = L.dim
    Jg = J @ ginv  # Jg[s, p] = sum_q J[s, q] ginv[q, p]
    out = [ZERO] * n
    for I, val in c.items():
        for perm in _PERMS3:
            r, p, s = (I[k] for k in perm)
            w = Jg[s, p]
            if not w:
                continue
            coef = _PERM_SIGN3[perm] * val * w
            for a, jra in enumerate(J.row(r)):
                if jra:
                    out[a] += coef * jra
    half = Fraction(1, 2)
    return tuple(-half * x for x in out)


_PERMS3 = list(permutations(range(3)))
_PERM_SIGN3 = {p: perm_sign(p) for p in _PERMS3}


def lee_forms(
    L: MetricLieAlgebra, H: HypercomplexStructure, c: AltForm, g: Matrix | None = None
) -> tuple[Vector, Vector, Vector]:
    thetas = tuple(lee_form(L, H, c, l, g) for l in (1, 2, 3))
    if not thetas[0] == thetas[1] == thetas[2]:
        raise ConsistencyError("Lee forms of J1, J2, J3 differ")
    return thetas


# ---- covariant derivatives of invariant forms ----------------------------------


def covariant_derivative(conn: Connection, a: AltForm) -> tuple[AltForm, ...]:
    """``result[i]`` is the k-form nabla_{e_i} a."""
    n = conn.dim
    out = []
    for i in range(n):
        A = conn.operators[i]
        acc: dict[tuple[int, ...], Fraction] = {}
        for I, x in a.items():
            for p, m in enumerate(I):
                # e^m o A = sum_r A[m, r] e^r
                for r, arm in enumerate(A.row(m)):
                    if not arm:
                        continue
                    sgn, key = sort_with_sign(I[:p] + (r,) + I[p + 1 :])
                    if sgn:
                        acc[key] = acc.get(key, ZERO) - sgn * x * arm
        out.append(AltForm._trusted(n, a.degree, acc))
    return tuple(out)


def nonzero_slots(nabla_a: Sequence[AltForm]) -> list[tuple[int, tuple[int, ...], Fraction]]:
    """All ``(i, I, value)`` with (nabla_{e_i} a)(e_I) != 0, I increasing."""
    return [(i, I, v) for i, form in enumerate(nabla_a) for I, v in form.items()]


def is_parallel(conn: Connection, a: AltForm) -> bool:
    return all(f.is_zero() for f in covariant_derivative(conn, a))


def central_dual_forms(L: MetricLieAlgebra, g: Matrix | None = None) -> list[AltForm]:
    """The 1-forms g(Z, .) for Z running over a basis of the center."""
    g = L.metric if g is None else g
    return [AltForm.covector(g.T.apply(Z)) for Z in center(L).basis]


@dataclass(frozen=True)
class TableDiscrepancy:
    direction: int
    argument: int
    expected: dict[int, Fraction] | None
    computed: dict[int, Fraction]

    def describe(self) -> str:
        def fmt(d):
            if not d:
                return "0"
            return " + ".join(f"{v}*e{k + 1}" for k, v in sorted(d.items()))

        exp = "(not listed)" if self.expected is None else fmt(self.expected)
        return (
            f"nabla_e{self.direction + 1} e{self.argument + 1}: "
            f"table says {exp}, computed {fmt(self.computed)}"
        )


def compare_connection_table(
    conn: Connection, table: Sequence[tuple[int, int, dict[int, object]]]
) -> list[TableDiscrepancy]:
    """Compare a transcribed list of nonzero nabla_{e_i} e_j entries with ``conn``.

    Every listed entry must match, and every nonzero entry of ``conn`` must be
    listed.  Duplicate listings of one slot are each compared.
    """
    out = []
    listed = set()
    for i, j, img in table:
        expected = {k: v for k, v in ((k, Fraction(v)) for k, v in img.items()) if v}
        col = conn.nabla_basis(i, j)
        computed = {k: v for k, v in enumerate(col) if v}
        listed.add((i, j))
        if expected != computed:
            out.append(TableDiscrepancy(i, j, expected, computed))
    for i, j, computed in conn.entries():
        if (i, j) not in listed:
            out.append(TableDiscrepancy(i, j, None, computed))
    return out
