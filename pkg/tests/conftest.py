from __future__ import annotations

import random
import re
from collections import OrderedDict
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from hktnil.constructors import JMap, Quaternion, catalog, quaternion_mult_matrix, standard_right_structure
from hktnil.exactlin import Matrix

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

small_rationals = st.builds(
    Fraction, st.integers(min_value=-4, max_value=4), st.integers(min_value=1, max_value=3)
)


def rational_vectors(n: int):
    return st.lists(small_rationals, min_size=n, max_size=n).map(tuple)


def random_quaternion(rng: random.Random, real: bool = True) -> Quaternion:
    parts = [Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(4)]
    if not real:
        parts[0] = Fraction(0)
    return Quaternion(*parts)


def random_sp(rng: random.Random, l: int) -> Matrix:
    """Random element of sp(l): a quaternionic skew-hermitian l x l matrix acting by
    left multiplication on H^l, so it commutes with the right-multiplication structure."""
    quats = [[Quaternion() for _ in range(l)] for _ in range(l)]
    for p in range(l):
        quats[p][p] = random_quaternion(rng, real=False)
        for q in range(p + 1, l):
            if rng.random() < 0.5:
                a = random_quaternion(rng)
                quats[p][q], quats[q][p] = a, -a.conj()
    blocks = [[quaternion_mult_matrix(quats[p][q]) for q in range(l)] for p in range(l)]
    return Matrix([[x for q in range(l) for x in blocks[p][q].row(r)] for p in range(l) for r in range(4)])


def random_jmap(rng: random.Random, m: int, l: int) -> JMap:
    """Random injective j-map into sp(l) whose maps have no common kernel.

    A common kernel vector would be central in the built algebra and split
    off as an abelian factor.
    """
    while True:
        maps = tuple(random_sp(rng, l) for _ in range(m))
        flat = Matrix([[x for row in j for x in row] for j in maps])
        stacked = Matrix([row for j in maps for row in j])
        if flat.rank() == m and stacked.rank() == 4 * l:
            return JMap(maps, standard_right_structure(l))


@pytest.fixture(scope="session", params=["n1", "n2", "n3"])
def eight_dim(request):
    L, H = catalog(request.param)
    return request.param, L, H


# ---- one PASS/FAIL line per acceptance criterion ------------------------------

_CRITERION = re.compile(r"test_criterion_(\d+)")
_results: "OrderedDict[int, list[bool]]" = OrderedDict()
_titles: dict[int, str] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = _CRITERION.match(item.name)
    if not m or item.module.__name__.rsplit(".", 1)[-1] != "test_acceptance":
        return
    num = int(m.group(1))
    title = (item.function.__doc__ or "").strip().splitlines()
    _titles.setdefault(num, title[0] if title else item.name)
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _results.setdefault(num, []).append(rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_results):
        verdict = "PASS" if all(_results[num]) else "FAIL"
        terminalreporter.write_line(f"criterion {num:>2}: {verdict}  {_titles.get(num, '')}")
