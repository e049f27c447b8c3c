from hypothesis import settings

# reproducible property tests: the same examples on every run
settings.register_profile("repro", derandomize=True, deadline=None)
settings.load_profile("repro")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for c in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[c])
