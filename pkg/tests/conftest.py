import pytest

_ACCEPTANCE = {}


@pytest.fixture(scope="session")
def record_criterion():
    """Store one acceptance outcome; printed in the terminal summary."""
    def record(number, passed, detail):
        _ACCEPTANCE.setdefault(number, []).append((bool(passed), detail))
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        parts = _ACCEPTANCE[number]
        ok = all(p for p, _ in parts)
        detail = "; ".join(d for _, d in parts)
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {number}: {detail}")
