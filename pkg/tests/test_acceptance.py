"""Acceptance gate: one parametrized test per criterion, one summary line each."""
from __future__ import annotations

import pytest

from injquiver.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [n for n, _, _ in CRITERIA], ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(number: int, capsys) -> None:
    result = run_criterion(number, seed=0)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail
