"""One test per acceptance criterion, each reporting a single pass/fail line."""

from __future__ import annotations

import pytest

from qrank.verification import CRITERIA, run_criterion


@pytest.mark.parametrize("number", sorted(CRITERIA), ids=lambda n: f"criterion_{n:02d}")
def test_criterion(number, capsys, acceptance_log):
    result = run_criterion(number, seed=0)
    line = result.line()
    acceptance_log.append(line)
    with capsys.disabled():
        print("\n" + line)
    assert result.in_time, f"took {result.elapsed:.2f}s, limit {result.limit}s"
    assert result.ok, f"failed checks: {result.failed_checks()}; details: {result.details}"
