"""Acceptance criteria 1-10, one test per criterion.

Each test records a one-line verdict; the lines are printed in the pytest
terminal summary (see ``conftest.py``) and when this file is run directly.
"""

import subprocess
import sys
import time

import pytest

from spintomo import verification as v

VERDICTS = {}


def _record(number, passed, detail, seconds):
    VERDICTS[number] = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail} ({seconds:.2f}s)"


def _run(number, check):
    res = check()
    _record(number, res.passed, f"{res.name}: {res.detail}", res.seconds)
    return res


def test_criterion_01_normalization():
    assert _run(1, v.check_normalization).passed


def test_criterion_02_psi_independence():
    assert _run(2, v.check_psi_independence).passed


def test_criterion_03_round_trip():
    res = _run(3, v.check_round_trip)
    assert res.passed
    assert res.seconds <= 30.0


def test_criterion_04_frame_consistency():
    assert _run(4, v.check_frame_consistency).passed


def test_criterion_05_classical_identities():
    assert _run(5, v.check_classical_identities).passed


def test_criterion_06_marginals():
    assert _run(6, v.check_marginals).passed


def test_criterion_07_minimum_principle():
    assert _run(7, v.check_minimum_principle).passed


def test_criterion_08_scalar_anchors():
    assert _run(8, v.check_scalar_anchors).passed


def test_criterion_09_dual_form():
    assert _run(9, v.check_dual_form).passed


def _cli(*argv):
    return subprocess.run([sys.executable, "-m", "spintomo", *argv], capture_output=True, check=False)


def test_criterion_10_cli_contract(tmp_path):
    start = time.perf_counter()
    proc = _cli("verify")
    verify_ok = proc.returncode == 0 and b"overall" in proc.stdout and b"FAIL" not in proc.stdout

    state = tmp_path / "state.json"
    from spintomo import io
    from spintomo.state import random_density
    io.write_state(state, random_density(3, seed=21))
    outputs = []
    for k in range(2):
        out = tmp_path / f"min{k}.json"
        code = _cli("minimize", "--state", str(state), "--seed", "5", "--no-timestamp", "--out", str(out)).returncode
        outputs.append((code, out.read_bytes() if out.exists() else None))
    identical = outputs[0][0] == 0 and outputs[0][1] is not None and outputs[0] == outputs[1]

    passed = verify_ok and identical
    detail = f"verify exit {proc.returncode}; fixed-seed minimize outputs {'identical' if identical else 'differ'}"
    _record(10, passed, f"10 CLI contract: {detail}", time.perf_counter() - start)
    assert verify_ok, proc.stdout.decode() + proc.stderr.decode()
    assert identical


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
