import pytest

from teamlog import kernels


@pytest.fixture(params=sorted(kernels.backends()))
def backend(request, monkeypatch):
    """Run a test once per importable kernel module."""
    mod = kernels.backends()[request.param]
    for name in ("dual_horn", "two_sat", "dpll"):
        monkeypatch.setattr(kernels, name, getattr(mod, name))
    return request.param


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE

    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
