"""Exit criteria, one test each.

Each test prints a single ``[PASS]``/``[FAIL]`` line with the measured
value, the pinned expectation and the wall time; the lines are repeated in
the pytest terminal summary. Tolerances live in
:mod:`vortexpair.harness.acceptance` and are not adjusted here.
"""

import pytest

from vortexpair.harness.acceptance import CHECKS, run_check

LINES = {}


@pytest.mark.acceptance
@pytest.mark.parametrize("number", sorted(CHECKS))
def test_criterion(number):
    res = run_check(number)
    LINES[number] = res.line()
    print(res.line())
    assert res.passed, res.line()
