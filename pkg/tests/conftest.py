import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

# criterion number -> (title, passed, detail); filled by test_acceptance
CRITERIA = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k in sorted(CRITERIA):
        title, ok, detail = CRITERIA[k]
        tr.write_line(f"criterion {k:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
