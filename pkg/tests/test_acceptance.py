"""End-to-end acceptance run.

Each test runs one seeded verification suite at its full scale and
prints a single pass/fail line; the assertions repeat what the suite
already measured, so a red line here is a red case in the library's
own report.  The whole file is expected to finish within five
minutes; the spectral-counting slope check documents a measured
mismatch and stays red.
"""

import math

from ncgasket import verify

SEED = 42
_ELAPSED = []


def _ratio(case):
    if case["tolerance"] > 0:
        return case["measured"] / case["tolerance"]
    return math.inf if case["measured"] > 0 else 0.0


def _run(num, name, time_limit=None):
    report = verify.run_suite(name, SEED)
    _ELAPSED.append(report["elapsed"])
    ok = verify.suite_passed(report)
    worst = max(report["cases"], key=_ratio)
    print("[criterion %02d] %s: %s (%.2fs, worst case %s: %.3e vs tolerance %.3e)"
          % (num, name, "PASS" if ok else "FAIL", report["elapsed"],
             worst["name"], worst["measured"], worst["tolerance"]))
    if time_limit is not None:
        assert report["elapsed"] < time_limit, (
            "suite %s took %.2fs, limit %.2fs" % (name, report["elapsed"], time_limit))
    failing = [c for c in report["cases"] if c["status"] != "pass"]
    assert not failing, "criterion %02d (%s) failing cases: %r" % (num, name, failing)
    return report


def test_criterion_01_dense_oracle():
    _run(1, "dense-oracle", time_limit=60.0)


def test_criterion_02_eigenform():
    _run(2, "eigenform")


def test_criterion_03_fiber():
    _run(3, "fiber")


def test_criterion_04_selfsim():
    _run(4, "selfsim")


def test_criterion_05_osc():
    _run(5, "osc")


def test_criterion_06_commutator():
    _run(6, "commutator")


def test_criterion_07_lip():
    _run(7, "lip")


def test_criterion_08_dimension():
    _run(8, "dimension", time_limit=1.0)


def test_criterion_09_connes():
    _run(9, "connes")


def test_criterion_10_energy_residue():
    _run(10, "energy-residue")


def test_criterion_11_traces():
    _run(11, "traces")


def test_criterion_12_norm_energy():
    _run(12, "norm-energy")


def test_criterion_13_classical():
    _run(13, "classical")
    total = sum(_ELAPSED)
    print("[acceptance] total suite time %.2fs" % total)
    assert total < 300.0
