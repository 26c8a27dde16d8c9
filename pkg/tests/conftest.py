import numpy as np
import pytest
from hypothesis import settings

from opdisk.algebra import Algebra

settings.register_profile("opdisk", max_examples=40, deadline=None, derandomize=True)
settings.load_profile("opdisk")

ALGEBRAS = [Algebra.scalar(), Algebra.commutative(3), Algebra.matrix(2), Algebra.matrix(4)]

# filled by test_acceptance: criterion -> (passed, detail)
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture(params=ALGEBRAS, ids=str)
def alg(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (int(k.split(".")[0].rstrip("abcdefgh")), k)):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {key:<4} {detail}")
