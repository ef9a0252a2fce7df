def pytest_terminal_summary(terminalreporter):
    import acceptance_log
    if not acceptance_log.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(acceptance_log.RESULTS):
        status, text = acceptance_log.RESULTS[number]
        terminalreporter.write_line(f"{status} criterion {number}: {text}")
