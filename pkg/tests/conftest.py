"""Shared test plumbing.

The acceptance tests record one scoreboard line each.  Default capture
swallows per-test stdout, so the lines are replayed in a summary section
where they stay visible in a plain `pytest` run.
"""

SCOREBOARD = []


def pytest_terminal_summary(terminalreporter):
    if SCOREBOARD:
        terminalreporter.section("acceptance criteria")
        for line in SCOREBOARD:
            terminalreporter.write_line(line)
