"""Shared pytest plumbing: surface the acceptance verdict lines.

The acceptance tests register one PASS/FAIL line per criterion; printing
them from inside a test would be swallowed by capture, so they are echoed
in the terminal summary instead.
"""

acceptance_verdicts = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_verdicts:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_verdicts:
            terminalreporter.write_line(line)
