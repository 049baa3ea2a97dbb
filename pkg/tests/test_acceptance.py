"""Acceptance gate: every criterion at its pinned scale and tolerance.

Each test prints the criterion's machine-readable line so the pytest output
doubles as the acceptance report. `structcode selftest` runs the same
functions.
"""

import pytest

from structcode.acceptance import ACCEPTANCE, DEFAULT_SEED


@pytest.mark.parametrize(
    "cid,description,fn", ACCEPTANCE, ids=[cid for cid, _, _ in ACCEPTANCE]
)
def test_criterion(cid, description, fn, capsys):
    result = fn(DEFAULT_SEED)
    with capsys.disabled():
        print(f"\n{result.line()}   # {description} [{result.elapsed:.1f}s]")
    assert result.passed, result.line()
