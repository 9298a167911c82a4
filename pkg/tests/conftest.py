import pytest

# filled by tests/test_acceptance.py, printed once at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def acceptance_record():
    def record(number: int, title: str, passed: bool, detail: str, seconds: float, limit: float):
        ok = passed and seconds < limit
        ACCEPTANCE_LINES.append(
            f"{'PASS' if ok else 'FAIL'} {number}: {title} | {detail} | {seconds:.1f}s (limit {limit:g}s)"
        )
        return ok

    return record
