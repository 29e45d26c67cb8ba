import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qpbands.params import DimensionlessParams, normalized_from_dimensionless  # noqa: E402
from qpbands.presets import PRESET_COMBOS  # noqa: E402


@pytest.fixture(params=PRESET_COMBOS, ids=lambda bg: f"b{bg[0]}-g{bg[1]}")
def preset_params(request):
    beta, gamma = request.param
    return beta, gamma, normalized_from_dimensionless(DimensionlessParams(beta, gamma))


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if getattr(rep, "when", "call") != "call" and outcome != "error":
                continue
            if "test_acceptance.py" not in rep.nodeid:
                continue
            lines.append((rep.nodeid.split("::")[-1], "PASS" if outcome == "passed" else "FAIL"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, status in sorted(lines):
            terminalreporter.write_line(f"{status}  {name}")
