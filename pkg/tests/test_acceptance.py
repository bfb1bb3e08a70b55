"""Acceptance gate: one test per criterion, each at its stated tolerance.

All comparisons are exact.  A summary line per criterion is printed at the
end of the run by the hook in conftest.py.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction
from itertools import combinations

import pytest
import sympy

from hktnil.bismut import (
    DC_FORMULA_SIGN,
    bismut_connection,
    central_dual_forms,
    classify_strong_weak,
    compare_connection_table,
    covariant_derivative,
    curvature,
    eq5_lowered,
    eq6_rhs,
    eq7_rhs,
    is_parallel,
    lee_forms,
    nonzero_slots,
    ricci,
    ricci_char_poly,
    torsion_form,
)
from hktnil.constructors import (
    catalog,
    family_t_jmap,
    family_ts,
    family_ts_jmap,
    from_jmap,
    to_jmap,
)
from hktnil.exactlin import AltForm, Matrix, basis_vector, index_tuples, poly_from_roots
from hktnil.expcoords import GroupPoint, group_mul, metric_polynomial, verify_left_invariance
from hktnil.hypercx import (
    abelian_certificate,
    check_abelian,
    check_compatibility,
    check_hkt,
    check_integrable,
    check_quaternion,
    nijenhuis,
)
from hktnil.invariants import (
    compare,
    conjugate_jmap,
    isometry_signature,
    lattice_criterion,
    random_rational_orthogonal,
)
from hktnil.liealg import ce_codifferential, ce_d, derived_algebra, form_inner, lower_central_series

from .conftest import random_jmap
from .test_bismut import TABLE_N1, TABLE_N2, TABLE_N3, form, literal_curvature_apply, zero_based
from .test_expcoords import PRINTED, as_sympy

EIGHT = ["n1", "n2", "n3"]


def e(n, i):
    return basis_vector(n, i)


def random_form(rng: random.Random, n: int, k: int, terms: int = 4) -> AltForm:
    keys = list(index_tuples(n, k))
    coeffs = {}
    for _ in range(terms):
        coeffs[rng.choice(keys)] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    return AltForm(n, k, coeffs)


def random_point(rng: random.Random) -> GroupPoint:
    v = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(8)]
    return GroupPoint(v[:4], v[4:])


# ---- 1 ----------------------------------------------------------------------------


@pytest.mark.parametrize("name,lam", [("n1", 1), ("n2", 2), ("n3", 3)])
def test_criterion_01_catalog_golden_suite(name, lam):
    """Catalog golden suite on n1, n2, n3 (< 1 s per algebra)."""
    start = time.perf_counter()
    L, H = catalog(name)
    assert check_quaternion(H)
    assert all(check_integrable(L, H))
    assert check_compatibility(L, H)
    assert check_abelian(L, H)
    assert check_hkt(L, H).hkt
    conn = bismut_connection(L, H)
    c = torsion_form(L, conn)
    assert classify_strong_weak(L, c, H) == "weak"
    assert all(not any(theta) for theta in lee_forms(L, H, c))
    assert ce_codifferential(L, c).is_zero()
    rho = ricci(L, curvature(L, conn))
    assert rho.symmetric
    cp = ricci_char_poly(rho, L.metric)
    assert all(is_parallel(conn, z) for z in central_dual_forms(L))
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"{name} took {elapsed:.2f} s"

    # Ricci spectrum: {lambda x4, 0 x4} with |lambda| fixed, and the matrix
    # itself rebuilt by summing curvature components directly
    assert cp in (poly_from_roots([lam] * 4 + [0] * 4), poly_from_roots([-lam] * 4 + [0] * 4))
    for a in range(8):
        for b in range(8):
            direct = sum(literal_curvature_apply(L, conn, e(8, a), e(8, j), e(8, b))[j] for j in range(8))
            assert rho(e(8, a), e(8, b)) == direct


# ---- 2 ----------------------------------------------------------------------------


def test_criterion_02_torsion_goldens():
    """Torsion goldens: c on n1, parallel torsion on n1 only, n2 slot, n3 slot scan."""
    L1, H1 = catalog("n1")
    conn1 = bismut_connection(L1, H1)
    c1 = torsion_form(L1, conn1)
    assert c1 == form(8, (1, (3, 4, 5)), (-1, (1, 2, 5)))
    assert is_parallel(conn1, c1)

    L2, H2 = catalog("n2")
    conn2 = bismut_connection(L2, H2)
    n2 = covariant_derivative(conn2, torsion_form(L2, conn2))
    assert n2[5](e(8, 0), e(8, 1), e(8, 6)) != 0

    L3, H3 = catalog("n3")
    conn3 = bismut_connection(L3, H3)
    n3 = covariant_derivative(conn3, torsion_form(L3, conn3))
    # the cited slot evaluates to zero; the scan finds nonzero ones elsewhere
    assert n3[5](e(8, 0), e(8, 2), e(8, 7)) == 0
    slots = nonzero_slots(n3)
    assert slots
    i, I, v = slots[0]
    assert n3[i](*(e(8, k) for k in I)) == v != 0


# ---- 3 ----------------------------------------------------------------------------


def test_criterion_03_connection_goldens():
    """Connection goldens: printed tables for n1, n2 match; n3 differs only at the flagged row."""
    for name, table in (("n1", TABLE_N1), ("n2", TABLE_N2)):
        L, H = catalog(name)
        assert compare_connection_table(bismut_connection(L, H), zero_based(table)) == []
    L, H = catalog("n3")
    found = compare_connection_table(bismut_connection(L, H), zero_based(TABLE_N3))
    assert [(d.direction + 1, d.argument + 1) for d in found] == [(7, 3), (6, 3)]
    assert found[0].expected == {0: -1} and found[0].computed == {1: -1}
    assert found[1].expected is None and found[1].computed == {0: 1}


# ---- 4 ----------------------------------------------------------------------------


def test_criterion_04_identity_suite():
    """Identity suite: HKT identity forms, connection versions, integrability, dc identities, d^2, adjointness (< 10 s)."""
    rng = random.Random(4)
    start = time.perf_counter()

    # the row form and the J3 form of the HKT identity agree on hyperhermitian data,
    # and the three versions of the connection coincide exactly when the rows agree
    for name in EIGHT:
        L, H = catalog(name)
        for _ in range(4):
            H2 = H.conjugate(random_rational_orthogonal(8, rng, rotations=3))
            v = check_hkt(L, H2)
            assert v.eq3 == v.eq4
            tables = [eq5_lowered(L, H2, i) for i in (1, 2, 3)]
            assert (tables[0] == tables[1] == tables[2]) == v.eq3
            if all(v.integrable):
                assert (tables[0] == tables[1] == tables[2]) == v.hkt
        tables = [eq5_lowered(L, H, i) for i in (1, 2, 3)]
        assert tables[0] == tables[1] == tables[2] and check_hkt(L, H).hkt

    # abelian implies integrable: every Nijenhuis tensor vanishes
    samples = [catalog(n) for n in EIGHT + ["example3_12dim"]]
    samples += [from_jmap(random_jmap(rng, rng.randint(1, 3), rng.randint(1, 2)))[:2] for _ in range(4)]
    for L, H in samples:
        assert check_abelian(L, H)
        assert all(check_integrable(L, H))
        for J in H.triple:
            for a, b in combinations(range(L.dim), 2):
                assert not any(nijenhuis(L, J, e(L.dim, a), e(L.dim, b)))

    # dc identities on every basis vector and every pair of basis vectors
    for name in EIGHT:
        L, H = catalog(name)
        dc = ce_d(L, torsion_form(L, bismut_connection(L, H)))
        J1 = H.J1
        for a in range(8):
            X = e(8, a)
            assert dc(X, *(J.apply(X) for J in H.triple)) == DC_FORMULA_SIGN * eq6_rhs(L, H, X)
            for b in range(8):
                Y = e(8, b)
                assert dc(X, J1.apply(X), Y, J1.apply(Y)) == DC_FORMULA_SIGN * eq7_rhs(L, H, X, Y)

    # d^2 = 0 on every basis form of degree <= 3
    for name in EIGHT + ["example3_12dim"]:
        L, _ = catalog(name)
        for k in range(4):
            for I in index_tuples(L.dim, k):
                assert ce_d(L, ce_d(L, AltForm.basis(L.dim, *I))).is_zero()

    # <delta a, b> = <a, d b> on 200 random rational forms and three metrics
    L3, _ = catalog("n3")
    metrics = [
        Matrix.identity(8),
        Matrix.diagonal([2, 1, 3, 1, 1, 2, 1, 5]),
        Matrix.identity(8) + Matrix([[int((i, j) in {(0, 4), (4, 0)}) for j in range(8)] for i in range(8)]).scale(Fraction(1, 2)),
    ]
    algebras = [L3.with_metric(g) for g in metrics]
    for t in range(200):
        L = algebras[t % 3]
        k = rng.randint(1, 4)
        a, b = random_form(rng, 8, k), random_form(rng, 8, k - 1)
        assert form_inner(L, ce_codifferential(L, a), b) == form_inner(L, a, ce_d(L, b))

    elapsed = time.perf_counter() - start
    assert elapsed < 10.0, f"identity suite took {elapsed:.2f} s"


# ---- 5 ----------------------------------------------------------------------------


def test_criterion_05_abelian_certificate():
    """Certificate steps pass on n1, n2, n3 and on 25 random j-map algebras (< 5 s)."""
    rng = random.Random(5)
    start = time.perf_counter()
    for name in EIGHT:
        cert = abelian_certificate(*catalog(name))
        assert cert.ok and len(cert.steps) == 5
    for _ in range(25):
        m, l = rng.randint(1, 3), rng.randint(1, 3)
        L, H, _ = from_jmap(random_jmap(rng, m, l))
        cert = abelian_certificate(L, H)
        assert cert.ok and len(cert.steps) == 5
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0, f"certificates took {elapsed:.2f} s"


# ---- 6 ----------------------------------------------------------------------------


def test_criterion_06_jmap_correspondence():
    """to_jmap after from_jmap keeps the signature; outputs have dim [n,n] = m and are HKT."""
    rng = random.Random(6)
    for _ in range(25):
        m, l = rng.randint(1, 3), rng.randint(1, 3)
        j = random_jmap(rng, m, l)
        L, H, _ = from_jmap(j)
        assert derived_algebra(L).dim == m
        assert lower_central_series(L).step == 2
        v = check_hkt(L, H)
        assert v.quaternion and v.compatible and all(v.integrable) and v.abelian and v.hkt
        assert isometry_signature(to_jmap(L, H)) == isometry_signature(j)


# ---- 7 ----------------------------------------------------------------------------


def test_criterion_07_family_separation():
    """Family separation: 15 family_t pairs and 3 family_ts pairs distinct; signatures conjugation-invariant (< 5 s)."""
    start = time.perf_counter()
    ts = [Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(1), Fraction(3, 2)]
    jt = [family_t_jmap(3, t) for t in ts]
    pairs = list(combinations(jt, 2))
    assert len(pairs) == 15
    assert all(compare(a, b) == "distinct" for a, b in pairs)
    params = [(Fraction(1, 4), Fraction(1, 2)), (Fraction(1, 3), Fraction(1, 2)), (Fraction(1, 3), Fraction(2, 3))]
    jts = [family_ts_jmap(3, t, s) for t, s in params]
    assert all(compare(a, b) == "distinct" for a, b in combinations(jts, 2))
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0, f"family separation took {elapsed:.2f} s"

    rng = random.Random(7)
    base = jt + jts
    for k in range(50):
        j = base[k % len(base)]
        P = random_rational_orthogonal(j.rep_dim, rng, rotations=4)
        assert isometry_signature(conjugate_jmap(j, P)) == isometry_signature(j)


# ---- 8 ----------------------------------------------------------------------------


@pytest.mark.parametrize("name", EIGHT)
def test_criterion_08_coordinate_metrics(name):
    """Coordinate metrics: printed g_i reproduced, left-invariance at 100 points, associativity."""
    L, _ = catalog(name)
    assert sympy.expand(PRINTED[name] - as_sympy(L, metric_polynomial(L))) == 0
    rng = random.Random(8)
    for _ in range(100):
        a, p = random_point(rng), random_point(rng)
        u = [Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(8)]
        w = [Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(8)]
        assert verify_left_invariance(L, None, a, p, u, w)
        b = random_point(rng)
        assert group_mul(L, group_mul(L, a, p), b) == group_mul(L, a, group_mul(L, p, b))


# ---- 9 ----------------------------------------------------------------------------


def test_criterion_09_twelve_dimensional_example():
    """12-dimensional 3-step example: abelian, HKT, weak, zero Lee form (< 1 s)."""
    start = time.perf_counter()
    L, H = catalog("example3_12dim")
    assert lower_central_series(L).step == 3
    assert check_abelian(L, H)
    assert check_hkt(L, H).hkt
    conn = bismut_connection(L, H)
    c = torsion_form(L, conn)
    assert classify_strong_weak(L, c, H) == "weak"
    assert all(not any(theta) for theta in lee_forms(L, H, c))
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"example took {elapsed:.2f} s"


# ---- 10 ---------------------------------------------------------------------------


def test_criterion_10_certificate_substitutes():
    """Sound substitutes for manifold claims: lattice witnesses and one-sided non-isometry certificates."""
    # rational parameters give integral structure constants after scaling
    for t, s, D in ((Fraction(1, 3), Fraction(2, 3), 3), (Fraction(1, 4), Fraction(1, 2), 4)):
        L, _ = family_ts(4, t, s)
        w = lattice_criterion(L)
        assert w.rational and w.scale == D
        for (i, j), row in L.structure_constants.items():
            for k, c in row.items():
                assert w.integral_constants[(i, j)][k] == D * c
    # equal signatures never claim isometry, only "inconclusive"
    rng = random.Random(10)
    j = family_ts_jmap(3, Fraction(1, 3), Fraction(1, 2))
    j2 = conjugate_jmap(j, random_rational_orthogonal(12, rng, rotations=4))
    assert compare(j, j2) == "inconclusive"
    assert compare(j, family_ts_jmap(3, Fraction(1, 4), Fraction(1, 2))) == "distinct"
