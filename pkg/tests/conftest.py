import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from subtiling.fixtures import load_ruleset
from subtiling.hierarchy import Hierarchy
from subtiling.spectra import analyze_ruleset


@pytest.fixture(scope="session")
def rs_s4():
    return load_ruleset("s4-3d")


@pytest.fixture(scope="session")
def rs_ex1():
    return load_ruleset("s5-ex1")


@pytest.fixture(scope="session")
def rs_ex2():
    return load_ruleset("s5-ex2")


@pytest.fixture(scope="session")
def rs_ex3():
    return load_ruleset("s5-ex3")


@pytest.fixture(scope="session")
def rs_geo():
    return load_ruleset("s5-ex1-geo")


@pytest.fixture(scope="session")
def rep_s4(rs_s4):
    return analyze_ruleset(rs_s4)


@pytest.fixture(scope="session")
def rep_ex1(rs_ex1):
    return analyze_ruleset(rs_ex1)


@pytest.fixture(scope="session")
def rep_ex2(rs_ex2):
    return analyze_ruleset(rs_ex2)


@pytest.fixture(scope="session")
def rep_ex3(rs_ex3):
    return analyze_ruleset(rs_ex3)


@pytest.fixture(scope="session")
def rep_geo(rs_geo):
    return analyze_ruleset(rs_geo)


@pytest.fixture(scope="session")
def h_s4_l4(rs_s4):
    return Hierarchy(rs_s4, "T2", 4)


@pytest.fixture(scope="session")
def h_geo_l4(rs_geo):
    return Hierarchy(rs_geo, "a", 4)
