import pytest

from orderlab.groups import Heisenberg, IntegerLattice, Unipotent

GROUPS = [IntegerLattice(1), IntegerLattice(2), IntegerLattice(3), Heisenberg(), Unipotent(2), Unipotent(3)]


@pytest.fixture(params=GROUPS, ids=lambda g: g.name)
def group(request):
    return request.param


def small_radius(group):
    """Largest box radius that keeps exhaustive pair scans quick."""
    if isinstance(group, Unipotent) and group.d >= 3:
        return 1
    if isinstance(group, IntegerLattice) and group.d == 1:
        return 3
    return 2


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
