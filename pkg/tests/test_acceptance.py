"""The twelve acceptance criteria, one test each.

Bounds, corpus sizes and time limits live in ``fsrkit.acceptance``.  Every
result line is also printed in the terminal summary (see conftest.py); run
this file directly to print the lines without pytest.
"""

import pytest

from fsrkit.acceptance import CRITERIA, run_criterion

RESULTS: list = []


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda c: f"c{c.number:02d}")
def test_criterion(criterion):
    result = run_criterion(criterion)
    RESULTS.append(result)
    print(result.line())
    assert result.ok, result.detail
    assert result.in_time, f"{result.seconds:.1f}s exceeds {result.limit:.0f}s"


if __name__ == "__main__":
    from fsrkit.acceptance import run_criteria

    results = run_criteria(on_result=lambda r: print(r.line(), flush=True))
    raise SystemExit(0 if all(r.passed for r in results) else 1)
