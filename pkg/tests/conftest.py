import json
import random
import sys
import warnings
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from rank3.curve import INFINITY, _add, scalar_mul  # noqa: E402
from rank3.families import HypothesisWarning, build_sixth, build_square  # noqa: E402

FIXTURES = Path(__file__).resolve().parent / "fixtures"


def combo(inst, coeffs):
    """sum of coeffs[i] * P_i over the instance's designated points."""
    R = INFINITY
    for k, P in zip(coeffs, inst.points):
        R = _add(inst.curve, R, scalar_mul(inst.curve, k, P))
    return R


def sample_points(inst, count, seed=0, span=2, affine=True):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        coeffs = [rng.randint(-span, span) for _ in inst.points]
        P = combo(inst, coeffs)
        if affine and P.is_identity:
            continue
        out.append(P)
    return out


@pytest.fixture(scope="session")
def e26():
    return build_square(26, 15)


@pytest.fixture(scope="session")
def e12():
    return build_sixth(1, 2)


@pytest.fixture(scope="session")
def height_fixtures():
    return json.loads((FIXTURES / "heights.json").read_text())


@pytest.fixture(autouse=True)
def _quiet_hypothesis_warnings():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", HypothesisWarning)
        yield


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
