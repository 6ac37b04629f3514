"""Acceptance criteria 1-10; each prints one PASS/FAIL line."""

from __future__ import annotations

import time

import pytest

from charp_lab.acceptance import CRITERIA, FIXTURE_SECONDS


@pytest.mark.parametrize("label,fn", CRITERIA, ids=[label.split()[0] for label, _ in CRITERIA])
def test_criterion(label, fn, capsys):
    t = time.perf_counter()
    ok, detail = fn()
    dt = time.perf_counter() - t
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} criterion {label} [{dt:.1f}s] {detail}")
    assert ok, detail
    assert dt < FIXTURE_SECONDS * 5  # five fixtures at most per criterion
