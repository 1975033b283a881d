"""Collects acceptance results and prints one verdict line per criterion."""

_VERDICTS = {}


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    key = props["criterion"]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        verdict = "PASS" if report.outcome == "passed" else "FAIL"
        _VERDICTS[key] = (verdict, props.get("detail", ""))


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_VERDICTS, key=lambda k: int(k.split()[0])):
        verdict, detail = _VERDICTS[key]
        line = f"criterion {key}: {verdict}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)
