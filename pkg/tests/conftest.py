import json
from importlib import resources

import pytest
import sympy

from motivic_kit.exactalg import MPoly
from motivic_kit.strata import load_resolution

DATA = resources.files("motivic_kit") / "data"

# one PASS/FAIL line per exit criterion, echoed at the end of the run
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)


def data_path(name):
    return DATA / name


def raw_document(name):
    return json.loads((DATA / name).read_text())


def document(name):
    return load_resolution(raw_document(name))


def to_sympy(x):
    """Independent representation of an MPoly/RatFunc for oracle checks."""
    return sympy.sympify(str(x).replace("^", "**"))


def sympy_equal(a, b):
    return sympy.simplify(to_sympy(a) - (to_sympy(b) if not isinstance(b, sympy.Basic) else b)) == 0


@pytest.fixture
def cusp_zeta():
    return document("cusp_zeta.json")


@pytest.fixture
def node_zeta():
    return document("node_zeta.json")


def poly_from_terms(terms, names=("L", "T")):
    return MPoly(names, {tuple(e): c for e, c in terms.items()})
