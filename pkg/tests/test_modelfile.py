import copy
import json
from pathlib import Path

import pytest

from randhorizon.generator import REGIMES, GenConfig, gen
from randhorizon.modelfile import ModelError, canonical, dumps, from_dict, load, loads, save, to_dict


def test_fixtures_are_canonical(fixture_dir):
    for name in ("M1", "M2", "M3"):
        text = (Path(fixture_dir) / f"{name}.json").read_text()
        assert canonical(text) == text


def test_generated_models_round_trip(tmp_path):
    for s in range(12):
        m = gen(GenConfig(seed=s, regime=REGIMES[s % 4]))
        p = tmp_path / f"{s}.json"
        save(m, p)
        back = load(p)
        assert (back.space, back.tau, back.S, back.claim) == (m.space, m.tau, m.S, m.claim)
        assert dumps(back) == dumps(m)


@pytest.fixture
def doc(M1):
    return to_dict(M1)


def _err(doc):
    with pytest.raises(ModelError) as exc:
        from_dict(doc)
    return str(exc.value)


def test_zero_denominator(doc):
    doc["outcomes"][0]["prob"] = "1/0"
    assert "outcomes[0].prob" in _err(doc)


def test_probabilities_must_sum_to_one(doc):
    doc["outcomes"][0]["prob"] = "1/3"
    assert "sum to 5/6" in _err(doc)


def test_missing_keys(doc):
    d = copy.deepcopy(doc)
    del d["filtration"]
    assert "'filtration'" in _err(d)
    d = copy.deepcopy(doc)
    del d["outcomes"][1]["S"]
    assert "outcomes[1]" in _err(d) and "'S'" in _err(d)


def test_bad_tau(doc):
    doc["outcomes"][0]["tau"] = 5
    assert "outcomes[0].tau" in _err(doc)
    doc["outcomes"][0]["tau"] = "never"
    assert "outcomes[0].tau" in _err(doc)


def test_filtration_must_refine(M2):
    d = to_dict(M2)
    d["filtration"][0] = [["uS", "dD"], ["uD", "dS"]]
    d["filtration"][1] = [["uS", "uD"], ["dS", "dD"]]
    msg = _err(d)
    assert "filtration[1]" in msg and "not contained" in msg and "'uS'" in msg


def test_prices_must_be_measurable(doc):
    doc["outcomes"][0]["S"] = [["2", "2"]]
    assert "S at t=0" in _err(doc)


def test_unknown_claim_class(doc):
    doc["claim"]["class"] = "forward"
    assert "claim.class" in _err(doc)


def test_json_syntax_error_reports_position():
    with pytest.raises(ModelError) as exc:
        loads('{"horizon": 1,,}')
    assert "line 1" in str(exc.value)


def test_claim_is_optional(doc):
    del doc["claim"]
    assert from_dict(doc).claim is None
    json.dumps(doc)
