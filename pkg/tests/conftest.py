import pytest

from multiwall.floorplan import FloorPlan, Wall, WallCategory

_acceptance = []


def plan_from_segments(segments, loss_db=10.0, losses=None):
    """Floor plan with one category per distinct loss value."""
    losses = list(losses) if losses is not None else [loss_db] * len(segments)
    cats = {}
    walls = []
    for (a, b), loss in zip(segments, losses):
        cid = cats.setdefault(loss, WallCategory(f"c{len(cats)}", float(loss), 0.25)).id
        walls.append(Wall(a, b, cid))
    return FloorPlan("test", tuple(cats.values()), tuple(walls))


@pytest.fixture
def make_plan():
    return plan_from_segments


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
