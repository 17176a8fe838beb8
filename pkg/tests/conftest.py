from __future__ import annotations

import pytest


class Criterion:
    """Context manager that records one PASS/FAIL line per acceptance criterion."""

    def __init__(self, lines, number, text):
        self.lines, self.number, self.text = lines, number, text

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        status = "FAIL" if exc_type else "PASS"
        line = f"{status} criterion {self.number}: {self.text}"
        self.lines.append(line)
        print(line)
        return False


def pytest_configure(config):
    config.acceptance_lines = []


@pytest.fixture
def criterion(request):
    return lambda number, text: Criterion(request.config.acceptance_lines, number, text)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
