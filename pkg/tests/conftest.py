"""Collects acceptance outcomes and prints them after the run."""

ACCEPTANCE: dict = {}


def record(key: str, passed: bool, text: str):
    ACCEPTANCE[key] = (bool(passed), text)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k.split()[0])):
        passed, text = ACCEPTANCE[key]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  criterion {key}: {text}")
