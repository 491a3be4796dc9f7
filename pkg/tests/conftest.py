from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"
TOY = DATA / "toy"

# six-user toy example: checkmarked (relevant) items per user
TOY_RELEVANT = {
    "u1": {"i1", "i3", "i7"},
    "u2": {"i5", "i8"},
    "u3": {"i2", "i7"},
    "u4": {"i3", "i4", "i9"},
    "u5": {"i5", "i7", "i10"},
    "u6": {"i1", "i3", "i6", "i9"},
}
TOY_GROUPS = {"a1": {"u1", "u2", "u3"}, "a2": {"u4", "u5", "u6"}}
TOY_RECS = {
    "rec0": {"u1": ["i1", "i6", "i8"], "u2": ["i2", "i5", "i9"], "u3": ["i1", "i6", "i7"],
             "u4": ["i3", "i4", "i9"], "u5": ["i1", "i5", "i7"], "u6": ["i2", "i6", "i9"]},
    "rec1": {"u1": ["i1", "i5", "i9"], "u2": ["i2", "i5", "i7"], "u3": ["i2", "i5", "i9"],
             "u4": ["i4", "i5", "i6"], "u5": ["i1", "i2", "i10"], "u6": ["i1", "i5", "i8"]},
    "rec2": {"u1": ["i1", "i3", "i7"], "u2": ["i1", "i5", "i8"], "u3": ["i2", "i7", "i9"],
             "u4": ["i3", "i4", "i9"], "u5": ["i5", "i7", "i10"], "u6": ["i3", "i6", "i9"]},
}


@pytest.fixture
def toy_dir():
    return TOY


def _acceptance_lines(terminalreporter):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if getattr(rep, "when", "call") != "call" and outcome != "error":
                continue
            if "test_acceptance.py" not in rep.nodeid:
                continue
            lines.append((rep.nodeid.split("::")[-1], "PASS" if outcome == "passed" else "FAIL"))
    return sorted(lines)


def pytest_terminal_summary(terminalreporter):
    lines = _acceptance_lines(terminalreporter)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for name, status in lines:
        terminalreporter.write_line(f"[{status}] {name}")
