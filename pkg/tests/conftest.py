import functools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from amcurves.curve import new_am_curve  # noqa: E402
from amcurves.gf import make_field  # noqa: E402
from amcurves.linpoly import linpoly  # noqa: E402
from amcurves.quotient import y_curve, z_curve  # noqa: E402

ROOT = Path(__file__).resolve().parent.parent
CURVES = ROOT / "curves"
GOLDEN = Path(__file__).parent / "golden"

# (name, ok, detail) lines from test_acceptance, printed at the end of the run
ACCEPTANCE_LINES: list[tuple[str, bool, str]] = []


@functools.lru_cache(maxsize=None)
def field(p, d):
    return make_field(p, d, 0)


@functools.lru_cache(maxsize=None)
def corpus(name):
    F3 = field(3, 1)
    if name == "classical":
        L = linpoly(F3, [-1, 1])
        return new_am_curve(L, L)
    if name == "pair_q3":
        return new_am_curve(linpoly(F3, [-1, 1]), linpoly(F3, [1, 1]))
    if name == "pair_q9_qbar3":
        return new_am_curve(linpoly(F3, [1, 1, 1]), linpoly(F3, [-1, 0, 1]))
    if name == "diagonal_q9":
        L = linpoly(field(3, 2), [-1, 1], n=2)
        return new_am_curve(L, L)
    if name == "ycurve":
        return y_curve(linpoly(F3, [-1, 1]), 1)
    if name == "zcurve":
        return z_curve(linpoly(field(5, 1), [-1, 1]), 0)
    raise KeyError(name)


@pytest.fixture
def classical():
    return corpus("classical")


@pytest.fixture
def pair_q3():
    return corpus("pair_q3")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_LINES:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  ({detail})")
