import time

SESSION = {"start": None}
ACCEPTANCE = []


def pytest_sessionstart(session):
    SESSION["start"] = time.perf_counter()


def pytest_collection_modifyitems(session, config, items):
    # the acceptance module runs last so its runtime check covers the whole suite
    items.sort(key=lambda item: item.module.__name__.endswith("test_acceptance"))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE:
        terminalreporter.write_line(line)
