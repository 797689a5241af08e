import pytest

from randhorizon import verify
from randhorizon.verify import SUITES, report, run, run_suite


def test_fixtures_only_pass():
    results = run(SUITES, models=0, nworkers=1)
    assert all(r.ok for r in results), report(results)
    assert report(results).endswith("overall=pass\n")


@pytest.mark.parametrize("name", [s for s in SUITES if s != "aip"])
def test_small_sweeps_pass(name):
    r = run_suite(name, models=4, seed=10, nworkers=1)
    assert r.ok, "\n".join(r.lines())
    assert r.checks > 0


def test_small_aip_sweep_reports_only_no_jump_failures():
    r = run_suite("aip", models=12, seed=0, nworkers=1)
    assert {f.tag.split(":")[0] for f in r.failures} <= {"nojump"}
    assert r.stats["predictable_processes"] >= 12


def test_report_independent_of_workers():
    one = report(run(["onestep", "preservation"], models=3, seed=4, nworkers=1))
    two = report(run(["onestep", "preservation"], models=3, seed=4, nworkers=2))
    assert one == two


def test_report_format():
    r = run_suite("options", models=2, seed=0, nworkers=1)
    head = r.lines()[0]
    assert head.startswith("suite=options models=2 seed=0 checks=") and head.endswith("status=pass")
    assert "stat options.models=2" in r.lines()


def test_bad_arguments(monkeypatch):
    with pytest.raises(ValueError):
        run_suite("nope")
    with pytest.raises(ValueError):
        run_suite("aip", models=-1)
    monkeypatch.setenv(verify.WORKERS_ENV, "3")
    assert verify.workers() == 3
    monkeypatch.setenv(verify.WORKERS_ENV, "many")
    with pytest.raises(ValueError):
        verify.workers()
