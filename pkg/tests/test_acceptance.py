"""Acceptance gate: the eleven numbered checks, one test (and one line) each.

Every test prints its single pass/fail line (shown with `pytest -s`) and
fails exactly when the underlying check fails.  `rotabouss verify` prints
the same table from the command line.
"""
import pytest

from rotabouss import verify

_IDS = [fn.__name__.removeprefix("check_") for fn, _ in verify.CHECKS]


@pytest.mark.parametrize("index", range(len(verify.CHECKS)), ids=_IDS)
def test_acceptance_criterion(index):
    fn, _is_long = verify.CHECKS[index]
    res = fn()
    status = "PASS" if res.passed else "FAIL"
    print(f"criterion {res.number:2d} [{status}] {res.name}: {res.detail}")
    assert res.passed, (f"criterion {res.number} ({res.name}) failed: "
                        f"{res.detail}")
