"""One test per acceptance criterion, at the pinned tolerances in convasym.verify.

Each test prints a single PASS/FAIL line; the same lines are repeated in the
terminal summary (see conftest.py).
"""

import pytest

from convasym import verify

RESULTS = {}


@pytest.mark.parametrize("criterion", sorted(verify.CRITERIA))
def test_criterion(criterion, capsys):
    checks = verify.CRITERIA[criterion]()
    ok = all(c.passed for c in checks)
    failed = [c for c in checks if not c.passed]
    line = f"criterion {criterion:>2}: {'PASS' if ok else 'FAIL'}"
    if failed:
        line += " -- " + "; ".join(f"{c.name} [{c.detail}]" for c in failed)
    RESULTS[criterion] = line
    with capsys.disabled():
        print("\n" + line)
    assert ok, "\n".join(f"{c.name}: {c.detail} (checks: {c.claim})" for c in failed)
