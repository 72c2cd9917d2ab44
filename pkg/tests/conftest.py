import cmath

import pytest

from harmroot.expr import Z, exp, sin
from harmroot.harmonic import HarmonicMap

SHEAR = HarmonicMap(Z, Z**2 / 2 + Z / 2)

# (name, map, zero) with the zero known in closed form
ZERO_SUITE = [
    ("shear", SHEAR, 0j),
    ("exp_quadratic", HarmonicMap(exp(Z) - 1, Z**2 / 2), 0j),
    ("linear", HarmonicMap(Z, -Z / 2), 0j),
    ("analytic_quadratic", HarmonicMap.analytic(Z**2 - 1), 1 + 0j),
    ("analytic_exp", HarmonicMap.analytic(exp(Z) - 1), 0j),
    ("cubic_star", HarmonicMap(Z**2, -Z), cmath.exp(2j * cmath.pi / 3)),
    ("sine_shear", HarmonicMap(sin(Z), Z**2 / 4 + 0.25j * Z), 0j),
]


@pytest.fixture
def shear():
    return SHEAR


# PASS/FAIL lines appended by the acceptance tests
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split("] ")[1].split()[0])):
            terminalreporter.write_line(line)
