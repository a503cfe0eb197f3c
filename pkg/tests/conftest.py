def pytest_terminal_summary(terminalreporter):
    """One line per acceptance criterion, in criterion order."""
    rows = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            props = dict(getattr(rep, "user_properties", ()))
            if "criterion" not in props:
                continue
            if outcome == "passed" and rep.when != "call":
                continue
            number = props["criterion"]
            prev = rows.get(number)
            status = "PASS" if outcome == "passed" else "FAIL"
            if prev is None or status == "FAIL":
                rows[number] = (status, props.get("title", ""), props.get("elapsed"))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(rows):
        status, title, elapsed = rows[number]
        timing = f" ({elapsed:.2f}s)" if elapsed is not None else ""
        terminalreporter.write_line(f"criterion {number}: {status}  {title}{timing}")
