import pytest

from nscs.states import FamilySpec

FAMILIES = {
    "scs": FamilySpec.scs(),
    "oscs3": FamilySpec.oscs(3),
    "bgcs_half": FamilySpec.bgcs(0.5),
    "msgcs": FamilySpec.msgcs(),
}


@pytest.fixture(params=list(FAMILIES), ids=list(FAMILIES))
def family(request):
    return FAMILIES[request.param]


def pytest_configure(config):
    config._acceptance_lines = []


@pytest.fixture
def acceptance_report(request):
    """Record one pass/fail line for the terminal summary."""
    lines = request.config._acceptance_lines

    def report(number, passed, detail):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
        lines.append(line)
        print(line)

    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = sorted(getattr(config, "_acceptance_lines", []))
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
