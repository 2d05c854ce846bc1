import pytest

from jumpcast import Horizon, JumpSpec, ModelParams

# the parameter set used throughout the acceptance suite
REFERENCE = dict(alpha=0.05, sigma=0.2, lam=1.0, nu=0.01, tau2=0.04)


@pytest.fixture
def params():
    return ModelParams(**REFERENCE)


@pytest.fixture
def jumps(params):
    return JumpSpec.for_params(params)


@pytest.fixture
def horizon():
    return Horizon(6.0, 9.0)


ACCEPTANCE_LINES = []


def record_criterion(label: str, ok: bool, detail: str = "") -> bool:
    line = f"[{'PASS' if ok else 'FAIL'}] {label}" + (f" ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
