import pytest

from cavity_transfer.model import ModelParams

RESONANT = ModelParams(omega=1.0, delta=0.0, g=65.0, c=1.0)
DISPERSIVE = ModelParams(omega=1.0, delta=-600.0, g=65.0, c=1.0)

_acceptance_lines: list[str] = []


@pytest.fixture
def record_criterion():
    """Collects one PASS/FAIL line per acceptance criterion for the terminal summary."""

    def record(label: str, passed: bool, detail: str):
        _acceptance_lines.append(f"{'PASS' if passed else 'FAIL'} {label}: {detail}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
