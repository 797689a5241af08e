"""Acceptance criteria, run at full size with exact comparisons.

Each test prints one line ``criterion <id>: PASS|FAIL <detail>``.  Suite
results are computed once per session and shared.
"""
import subprocess
import sys
import time
from fractions import Fraction as Fr

import pytest

from randhorizon.verify import SUITES, fixture, run_suite

THIRD = Fr(1, 3)
_cache = {}


def suite(name):
    if name not in _cache:
        start = time.perf_counter()
        r = run_suite(name)
        _cache[name] = (r, time.perf_counter() - start)
    return _cache[name]


def verdict(capsys, cid, checks):
    """checks: list of (label, ok).  Prints one line and asserts all hold."""
    bad = [label for label, ok in checks if not ok]
    line = f"criterion {cid}: {'PASS' if not bad else 'FAIL'} " + \
        ("; ".join(label for label, _ in checks) if not bad else "failed: " + "; ".join(bad))
    with capsys.disabled():
        print("\n" + line)
    assert not bad, line


def _suite_checks(r, secs=None, limit=None):
    out = [(f"{r.name} checks={r.checks} failures={len(r.failures)}", r.ok)]
    if not r.ok:
        tags = sorted({f.tag for f in r.failures})
        out.append((f"failing tags {','.join(tags)}", False))
    if limit is not None:
        out.append((f"runtime {secs:.1f}s < {limit}s", secs < limit))
    return out


def test_criterion_1_fixture_M1(capsys):
    from randhorizon.pricing import backward_price, global_oracle, one_step
    start = time.perf_counter()
    m = fixture("M1")
    a = m.analyze()
    sp = m.space
    xi = tuple(max(s[0] - 1, 0) for s in a.ps.S[1])
    vals, strat, _ = one_step(a.ps.S, sp.filtration, sp.P, 0, xi)
    rep = backward_price(a.ps.S, sp.filtration, sp.P, xi)
    oracle = global_oracle(a.ps.S, sp.filtration, sp.P, xi)
    secs = time.perf_counter() - start
    theta = (Fr(2, 3),)
    verdict(capsys, 1, [
        ("one_step price 1/3 theta 2/3", vals == (THIRD, THIRD) and strat == (theta, theta)),
        ("backward_price 1/3 theta 2/3", rep.prices[0] == (THIRD, THIRD) and rep.strategies[0] == (theta, theta)),
        ("global_oracle 1/3", oracle == (THIRD, THIRD)),
        (f"runtime {secs:.3f}s < 1s", secs < 1),
    ])


def test_criterion_2_esssup(capsys):
    r, secs = suite("esssup")
    verdict(capsys, 2, _suite_checks(r, secs, 30) + [
        (f"instances={r.stats['instances']} >= 500", r.stats["instances"] >= 500),
        (f"nontrivial_null={r.stats['nontrivial_null']} >= 50", r.stats["nontrivial_null"] >= 50),
    ])


def test_criterion_3_onestep(capsys):
    r, secs = suite("onestep")
    verdict(capsys, 3, _suite_checks(r, secs, 60) + [(f"models={r.models} >= 300", r.models >= 300)])


def test_criterion_4_aip(capsys):
    r, _ = suite("aip")
    verdict(capsys, 4, _suite_checks(r) + [
        (f"models={r.models} >= 300", r.models >= 300),
        (f"predictable_processes={r.stats['predictable_processes']} >= 100", r.stats["predictable_processes"] >= 100),
        (f"nojump_hypothesis={r.stats['nojump_hypothesis']} > 0", r.stats["nojump_hypothesis"] > 0),
    ])


def test_criterion_5_preservation(capsys):
    r, _ = suite("preservation")
    s = r.stats
    verdict(capsys, 5, _suite_checks(r) + [
        (f"z_identity_models={s['z_identity_models']} >= 100", s["z_identity_models"] >= 100),
        (f"processes={s['processes']} >= 10000", s["processes"] >= 10000),
        (f"with_deadzone_models={s['with_deadzone_models']} >= 20", s["with_deadzone_models"] >= 20),
    ])


def test_criterion_6_multistep(capsys):
    r, _ = suite("multistep")
    verdict(capsys, 6, _suite_checks(r) + [(f"models={r.stats['models']} >= 50", r.stats["models"] >= 50)])


def test_criterion_7_decomp(capsys):
    r, secs = suite("decomp")
    verdict(capsys, 7, _suite_checks(r, secs, 60) + [
        (f"models={r.stats['models']} >= 100", r.stats["models"] >= 100),
        (f"gmart_pairs={r.stats['gmart_pairs']} >= 200", r.stats["gmart_pairs"] >= 200),
    ])


def test_criterion_8_options(capsys):
    r, _ = suite("options")
    verdict(capsys, 8, _suite_checks(r) + [(f"models={r.stats['models']} >= 100", r.stats["models"] >= 100)])


def test_criterion_full_run(capsys):
    start = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "randhorizon", "verify", "--suite", "all"],
                          capture_output=True, text=True)
    secs = time.perf_counter() - start
    heads = [ln for ln in proc.stdout.splitlines() if ln.startswith("suite=")]
    ok = all(ln.endswith("status=pass") for ln in heads)
    verdict(capsys, "full", [
        (f"verify --suite all in {secs:.1f}s < 180s", secs < 180),
        (f"{len(heads)} suites reported", len(heads) == len(SUITES)),
        (f"exit code {proc.returncode} matches overall status", proc.returncode == (0 if ok else 1)),
    ])
