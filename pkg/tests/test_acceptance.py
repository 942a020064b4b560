"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run directly (``python tests/test_acceptance.py``) for just the summary lines.
"""

import json
import time
from pathlib import Path

import pytest

from mcgauge import suite
from mcgauge.cli import main

K_PLUS_KU = Path(__file__).resolve().parent.parent / "presentations" / "k_plus_ku.txt"

# wall-clock limits in seconds
LIMITS = {1: 10, 2: 60, 3: 300, 4: 600, 5: 600, 6: 600, 7: 600, 8: 600}


def line(k, res, elapsed):
    return f"criterion {k}: {'PASS' if res['passed'] else 'FAIL'}  {res['summary']}  ({elapsed:.1f}s)"


@pytest.mark.parametrize("k", sorted(suite.CRITERIA))
def test_criterion(k, capsys):
    start = time.perf_counter()
    res = suite.CRITERIA[k]()
    elapsed = time.perf_counter() - start
    with capsys.disabled():
        print("\n" + line(k, res, elapsed))
    assert res["passed"], res["details"]
    assert elapsed < LIMITS[k]



def test_criterion_1_command(capsys):
    """The same classification through the example-1-4 command."""
    code = main(["example-1-4", str(K_PLUS_KU), "--poly-D", "3", "--format", "json"])
    rep = json.loads(capsys.readouterr().out)
    assert code == 0
    assert (rep["commutative_parameters"], rep["associative_parameters"]) == (2, 3)
    assert rep["injective"] and not rep["surjective"] and rep["stable"]


if __name__ == "__main__":
    for k in sorted(suite.CRITERIA):
        t = time.perf_counter()
        r = suite.CRITERIA[k]()
        print(line(k, r, time.perf_counter() - t))
