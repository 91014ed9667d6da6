import pytest

# Lines queued by the acceptance tests; shown after the run so measured
# values (error bounds, cost ratios, runtimes) survive output capture.
acceptance_lines: list[str] = []


@pytest.fixture()
def report_line():
    return acceptance_lines.append


def pytest_terminal_summary(terminalreporter):
    if acceptance_lines:
        terminalreporter.section("acceptance")
        for line in acceptance_lines:
            terminalreporter.write_line(line)
