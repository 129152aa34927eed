import sys

import pytest
from hypothesis import HealthCheck, settings

from nilkgroups.finite import (
    cyclic,
    dihedral,
    direct_product,
    from_permutation_generators,
    heisenberg_mod_p,
    quaternion8,
    semidirect_z_p_on_z_q,
    symmetric,
    alternating,
)

settings.register_profile(
    "repo", max_examples=60, deadline=None, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


@pytest.fixture(scope="session")
def S3():
    return from_permutation_generators(3, ["(1 2)", "(1 2 3)"], name="S3")


@pytest.fixture(scope="session")
def S4():
    return symmetric(4)


@pytest.fixture(scope="session")
def Q8():
    return quaternion8()


@pytest.fixture(scope="session")
def D5():
    return dihedral(5)


@pytest.fixture(scope="session")
def Heis3():
    return heisenberg_mod_p(3)


def small_groups():
    """A spread of groups up to order 24, built afresh for each caller."""
    return [
        cyclic(1), cyclic(2), cyclic(6), dihedral(3), dihedral(4), dihedral(5), dihedral(6),
        quaternion8(), symmetric(3), alternating(4), symmetric(4),
        direct_product(cyclic(2), cyclic(2)), direct_product(symmetric(3), cyclic(2)),
        direct_product(quaternion8(), cyclic(2)), semidirect_z_p_on_z_q(3, 7),
        heisenberg_mod_p(2),
    ]


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(acceptance.RESULTS):
        terminalreporter.write_line(acceptance.RESULTS[n])
