from hypothesis import settings

settings.register_profile("lab", max_examples=40, deadline=None)
settings.load_profile("lab")


def pytest_terminal_summary(terminalreporter):
    from _acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
