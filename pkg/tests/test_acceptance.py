"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line."""

import re

import pytest

from fockforge.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [num for num, _, _ in CRITERIA],
                         ids=[f"c{num:02d}_" + re.sub(r"[^a-z0-9]+", "_", title.lower()).strip("_")
                              for num, title, _ in CRITERIA])
def test_criterion(number, capsys):
    result = run_criterion(number)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail
