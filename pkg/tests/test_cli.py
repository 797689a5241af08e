import subprocess
import sys
from pathlib import Path

import pytest

from randhorizon.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, main
from randhorizon.modelfile import load


@pytest.fixture
def fx(fixture_dir):
    return lambda name: str(Path(fixture_dir) / f"{name}.json")


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate(capsys, fx):
    code, out, _ = _run(capsys, "validate", fx("M3"))
    assert code == EXIT_OK
    assert "model=M3 status=valid" in out and "deadzone_times=1" in out and "ZF_identity=false" in out


def test_price_M1(capsys, fx):
    code, out, _ = _run(capsys, "price", fx("M1"))
    assert code == EXIT_OK
    assert "price=1/3" in out and "strategy t=0 atom={u,d} theta=(2/3)" in out


def test_price_all_classes(capsys, fx):
    code, out, _ = _run(capsys, "price", fx("M2"), "--class", "all")
    assert code == EXIT_OK
    assert out.count("status=ok") == 4


def test_price_reports_violation(capsys, fx):
    code, out, _ = _run(capsys, "price", fx("M3"))
    assert code == EXIT_FAIL and "status=aip_violation" in out


def test_aip_stopped_M3(capsys, fx):
    code, out, _ = _run(capsys, "aip", fx("M3"), "--model", "stopped")
    assert code == EXIT_FAIL
    assert "violation t=0 atom={a} certificate=(2)" in out and out.endswith("aip=false\n")
    code, out, _ = _run(capsys, "aip", fx("M3"), "--model", "bar")
    assert code == EXIT_OK and out.endswith("aip=true\n")


def test_decompose(capsys, fx):
    code, out, _ = _run(capsys, "decompose", fx("M2"), "--class", "mixed")
    assert code == EXIT_OK and "telescopes=true" in out and "term=PFRisk" in out


def test_gen_writes_loadable_model(capsys, tmp_path):
    p = tmp_path / "m.json"
    assert _run(capsys, "gen", "--seed", "3", "--regime", "with_deadzone", "--out", str(p))[0] == EXIT_OK
    m = load(p)
    assert m.name == "gen-with_deadzone-3"
    _, a, _ = _run(capsys, "gen", "--seed", "3", "--regime", "with_deadzone")
    assert a == p.read_text()


def test_verify_fixtures_only(capsys):
    code, out, _ = _run(capsys, "verify", "--suite", "all", "--models", "0")
    assert code == EXIT_OK and out.endswith("overall=pass\n")
    assert out.count("suite=") == 7


def test_verify_is_deterministic(capsys):
    a = _run(capsys, "verify", "--suite", "multistep", "--models", "3", "--seed", "7")
    b = _run(capsys, "verify", "--suite", "multistep", "--models", "3", "--seed", "7")
    assert a == b and a[0] == EXIT_OK


def test_input_errors(capsys, tmp_path, fx):
    code, _, err = _run(capsys, "price", str(tmp_path / "missing.json"))
    assert code == EXIT_INPUT and err.startswith("error=")
    bad = tmp_path / "bad.json"
    bad.write_text('{"horizon": 1}')
    assert _run(capsys, "validate", str(bad))[0] == EXIT_INPUT
    assert _run(capsys, "verify", "--suite", "nope")[0] == EXIT_INPUT
    assert _run(capsys, "aip", fx("M1"), "--model", "other")[0] == EXIT_INPUT


def test_module_entry_point(fx):
    proc = subprocess.run([sys.executable, "-m", "randhorizon", "price", fx("M1")], capture_output=True, text=True)
    assert proc.returncode == 0 and "price=1/3" in proc.stdout


def test_decompose_all_classes(capsys, fx):
    code, out, _ = _run(capsys, "decompose", fx("M1"), "--class", "all")
    assert code == EXIT_OK and out.count("telescopes=true") == 4
