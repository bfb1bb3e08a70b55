from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hktnil.constructors import QI, QJ, QK, catalog, from_jmap, quaternion_mult_matrix, standard_right_structure
from hktnil.errors import ConsistencyError, PreconditionError
from hktnil.exactlin import Matrix, Subspace, basis_vector, dot
from hktnil.hypercx import (
    HypercomplexStructure,
    abelian_certificate,
    central_identity_violations,
    check_abelian,
    check_compatibility,
    check_hkt,
    check_integrable,
    check_quaternion,
    complete_hypercomplex,
    nijenhuis,
    quaternionic_closure,
)
from hktnil.invariants import random_rational_orthogonal
from hktnil.liealg import MetricLieAlgebra

from .conftest import random_jmap


def span(n, *idx):
    return Subspace(n, [basis_vector(n, i) for i in idx])


def e(n, i):
    return basis_vector(n, i)


def literal_nijenhuis(L, J, X, Y):
    b = L.bracket
    JX, JY = J.apply(X), J.apply(Y)
    first = J.apply(tuple(p - q for p, q in zip(b(X, Y), b(JX, JY))))
    second = tuple(p + q for p, q in zip(b(JX, Y), b(X, JY)))
    return tuple(p - q for p, q in zip(first, second))


def literal_rows(L, H, g, a, b, c):
    """The three cyclic sums g([J_i X, J_i Y], Z) + cyclic, straight from brackets."""
    X, Y, Z = e(L.dim, a), e(L.dim, b), e(L.dim, c)
    out = []
    for J in H.triple:
        JX, JY, JZ = J.apply(X), J.apply(Y), J.apply(Z)
        ip = lambda u, v: dot(u, g.apply(v))  # noqa: E731
        out.append(ip(L.bracket(JX, JY), Z) + ip(L.bracket(JY, JZ), X) + ip(L.bracket(JZ, JX), Y))
    return out


# ---- quaternion relations and completion ---------------------------------------


def test_standard_triple_on_R4():
    H = HypercomplexStructure(*(quaternion_mult_matrix(q, "right") for q in (QI, QJ, -QK)))
    assert check_quaternion(H)


def test_sign_flip_witness():
    H = standard_right_structure(1)
    bad = HypercomplexStructure(H.J1, H.J2, -(H.J1 @ H.J2))
    check = check_quaternion(bad)
    assert not check and check.witness == "J1J2 != J3"


def test_catalog_completion():
    _, H = catalog("n1")
    assert check_quaternion(H)
    # J1 e3 = J1 J2 e1 = J3 e1 = e4 and J1 e8 = -e7
    assert H.J1.col(2) == e(8, 3)
    assert H.J1.col(7) == tuple(-x for x in e(8, 6))
    for i in (1, 2, 3):
        assert H[i].col(0) == e(8, i) and H[i].col(4) == e(8, 4 + i)


def test_completion_reports_conflicts_and_gaps():
    with pytest.raises(PreconditionError):
        complete_hypercomplex(4, {0: e(4, 1)}, {})
    with pytest.raises(ConsistencyError):
        # J1 e1 = e2 and J1 e2 = e2 contradict J1^2 = -1
        complete_hypercomplex(4, {0: e(4, 1), 1: e(4, 1)}, {0: e(4, 2)})


def test_example3_completion_is_consistent():
    _, H = catalog("example3_12dim")
    assert check_quaternion(H)
    assert H.J2.col(7) == tuple(-x for x in e(12, 9))
    assert H.J3 == H.J1 @ H.J2


# ---- Nijenhuis tensor ---------------------------------------------------------


def test_nijenhuis_vanishes_on_abelian_algebra():
    L = MetricLieAlgebra(4)
    J = standard_right_structure(1).J1
    assert all(not any(nijenhuis(L, J, e(4, a), e(4, b))) for a, b in product(range(4), repeat=2))


def test_nijenhuis_n1_e1_e3():
    L, H = catalog("n1")
    assert not any(nijenhuis(L, H.J1, e(8, 0), e(8, 2)))


def breaking_conjugation(name="n1", seed=0):
    """An orthogonal P for which P H P^T is no longer integrable on L."""
    L, H = catalog(name)
    rng = random.Random(seed)
    while True:
        P = random_rational_orthogonal(8, rng)
        H2 = H.conjugate(P)
        if not all(check_integrable(L, H2)):
            return L, H2


def test_integrability_breaking_structure_detected():
    L, H2 = breaking_conjugation()
    assert check_quaternion(H2) and check_compatibility(L, H2)
    flags = check_integrable(L, H2)
    assert not all(flags)
    # brute force agrees with the verdict for every i
    for i, J in enumerate(H2.triple):
        vanishes = all(
            not any(literal_nijenhuis(L, J, e(8, a), e(8, b))) for a, b in combinations(range(8), 2)
        )
        assert vanishes == flags[i]


@pytest.mark.parametrize("name", ["n1", "n2", "n3", "example3_12dim"])
def test_nijenhuis_matches_literal_formula(name):
    L, H = catalog(name)
    for J in H.triple:
        for a, b in combinations(range(L.dim), 2):
            assert nijenhuis(L, J, e(L.dim, a), e(L.dim, b)) == literal_nijenhuis(L, J, e(L.dim, a), e(L.dim, b))


# ---- compatibility and abelian -------------------------------------------------


def test_compatibility_examples():
    L, H = catalog("n2")
    assert check_compatibility(L, H)
    assert check_compatibility(MetricLieAlgebra(4), standard_right_structure(1))
    L1, H1 = catalog("n1")
    assert not check_compatibility(L1, H1, Matrix.diagonal([2] + [1] * 7))


def test_abelian_examples():
    assert check_abelian(MetricLieAlgebra(4), standard_right_structure(1))
    for name in ("n3", "example3_12dim"):
        assert check_abelian(*catalog(name))


def test_non_abelian_witness():
    L, H2 = breaking_conjugation()
    check = check_abelian(L, H2)
    assert not check
    i, a, b = check.witness
    J = H2[i]
    assert L.bracket(J.col(a), J.col(b)) != L.bracket(e(8, a), e(8, b))


# ---- HKT identity -------------------------------------------------------------


@pytest.mark.parametrize("name", ["n1", "n2", "n3", "example3_12dim"])
def test_catalog_is_hkt(name):
    v = check_hkt(*catalog(name))
    assert v.hkt and v.abelian and v.eq3 and v.eq4 and v.witness is None


def test_abelian_structure_on_abelian_algebra_is_hkt():
    assert check_hkt(MetricLieAlgebra(8), standard_right_structure(2)).hkt


def test_non_metric_conjugation_breaks_identity_with_witness():
    L, H = catalog("n3")
    P = Matrix.identity(8) + Matrix([[int((i, j) == (0, 4)) for j in range(8)] for i in range(8)])
    H2 = H.conjugate(P)
    assert check_quaternion(H2)
    v = check_hkt(L, H2)
    assert not v.hkt and not v.eq3 and v.failed_gate == "metric compatibility"
    a, b, c = v.witness.triple
    i, j = v.witness.rows
    rows = literal_rows(L, H2, L.metric, a, b, c)
    assert rows[i - 1] != rows[j - 1]
    assert (rows[i - 1], rows[j - 1]) == v.witness.values


@pytest.mark.parametrize("name", ["n1", "n3"])
@given(seed=st.integers(0, 10_000))
def test_row_form_and_j3_form_agree_on_hyperhermitian_data(name, seed):
    L, H = catalog(name)
    H2 = H.conjugate(random_rational_orthogonal(8, random.Random(seed), rotations=3))
    v = check_hkt(L, H2)
    assert v.eq3 == v.eq4
    brute = all(len(set(literal_rows(L, H2, L.metric, a, b, c))) == 1 for a, b, c in combinations(range(8), 3))
    assert brute == v.eq3


# ---- quaternionic closure, central identities, certificate ---------------------


def test_quaternionic_closure_examples():
    L, H = catalog("n1")
    assert quaternionic_closure(H, Subspace.zero(8)).is_zero()
    assert quaternionic_closure(H, span(8, 4)) == span(8, 4, 5, 6, 7)
    _, H3 = catalog("n3")
    assert quaternionic_closure(H3, span(8, 4, 5, 6)) == span(8, 4, 5, 6, 7)


@pytest.mark.parametrize("name", ["n1", "n2", "n3"])
def test_central_identities(name):
    assert central_identity_violations(*catalog(name)) == []


@pytest.mark.parametrize("name", ["n1", "n2", "n3"])
def test_certificate_on_catalog(name):
    cert = abelian_certificate(*catalog(name))
    assert cert.ok and len(cert.steps) == 5


@given(seed=st.integers(0, 10_000))
def test_certificate_on_random_jmap_algebras(seed):
    L, H, _ = from_jmap(random_jmap(random.Random(seed), m=2, l=2))
    assert abelian_certificate(L, H).ok


def test_certificate_on_abelian_algebra():
    cert = abelian_certificate(MetricLieAlgebra(4), standard_right_structure(1))
    assert cert.ok
    assert cert.quaternionic_derived.is_zero()


def test_certificate_preconditions():
    with pytest.raises(PreconditionError):
        abelian_certificate(*catalog("example3_12dim"))
    L, H2 = breaking_conjugation()
    with pytest.raises(PreconditionError):
        abelian_certificate(L, H2)


def test_row_values_are_rational():
    L, H = catalog("n2")
    assert all(isinstance(x, Fraction) for x in literal_rows(L, H, L.metric, 0, 2, 5))
