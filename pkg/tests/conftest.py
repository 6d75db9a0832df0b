import pytest

# criterion number -> (title, passed); filled in by tests/test_acceptance.py
ACCEPTANCE: dict[int, tuple[str, bool]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for i in sorted(ACCEPTANCE):
        title, ok = ACCEPTANCE[i]
        terminalreporter.write_line(f"criterion {i:2d} {'PASS' if ok else 'FAIL'}  {title}")


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion; the test body sets the outcome."""
    marker = request.node.get_closest_marker("acceptance")
    num, title = marker.args
    ACCEPTANCE[num] = (title, False)
    yield
    rep = getattr(request.node, "rep_call", None)
    ok = rep is not None and rep.passed
    ACCEPTANCE[num] = (title, ok)
    print(f"criterion {num:2d} {'PASS' if ok else 'FAIL'}  {title}")


@pytest.hookimpl(wrapper=True)
def pytest_runtest_makereport(item, call):
    rep = yield
    if rep.when == "call":
        item.rep_call = rep
    return rep
