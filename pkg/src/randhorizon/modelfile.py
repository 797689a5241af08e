"""JSON model files: loading with diagnostics, and canonical saving.

Layout (rationals are strings such as "1/3" or "2"):

    {
      "horizon": T,
      "assets": d,
      "outcomes": [
        {"id": "u", "prob": "1/2", "tau": "inf" | 0..T,
         "S": [[S^0_0, ..., S^0_T], ..., [S^{d-1}_0, ..., S^{d-1}_T]]},
        ...
      ],
      "filtration": [[["u", "d"]], [["u"], ["d"]]],
      "claim": {"class": "survival_strict", "g": {"u": [g_0, ..., g_T], ...},
                "K": {"u": [K_0, ..., K_T], ...}}
    }

"claim" is optional; "filtration" lists T+1 partitions of the outcome ids.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .extended import POS_INF, fmt
from .model import Claim, Model
from .pricing import CLASSES
from .prob import FilteredSpace, Partition


class ModelError(ValueError):
    """Schema or consistency violation in a model file."""


def _rational(v, where: str) -> Fraction:
    if isinstance(v, bool) or not isinstance(v, (str, int)):
        raise ModelError(f"{where}: expected a rational string, got {v!r}")
    try:
        return Fraction(v)
    except (ValueError, ZeroDivisionError):
        raise ModelError(f"{where}: malformed rational {v!r}") from None


def _expect(cond: bool, msg: str):
    if not cond:
        raise ModelError(msg)


def from_dict(doc: dict, name: str = "") -> Model:
    _expect(isinstance(doc, dict), "top level: expected an object")
    for key in ("horizon", "assets", "outcomes", "filtration"):
        _expect(key in doc, f"top level: missing key {key!r}")
    extra = set(doc) - {"horizon", "assets", "outcomes", "filtration", "claim", "name"}
    _expect(not extra, f"top level: unknown keys {sorted(extra)}")
    T, d = doc["horizon"], doc["assets"]
    _expect(isinstance(T, int) and not isinstance(T, bool) and T >= 0, "horizon: expected an integer >= 0")
    _expect(isinstance(d, int) and not isinstance(d, bool) and d >= 1, "assets: expected an integer >= 1")
    outs = doc["outcomes"]
    _expect(isinstance(outs, list) and outs, "outcomes: expected a nonempty list")
    ids, probs, taus, prices = [], [], [], []
    for i, o in enumerate(outs):
        where = f"outcomes[{i}]"
        _expect(isinstance(o, dict), f"{where}: expected an object")
        for key in ("id", "prob", "tau", "S"):
            _expect(key in o, f"{where}: missing key {key!r}")
        _expect(isinstance(o["id"], str) and o["id"], f"{where}.id: expected a nonempty string")
        _expect(o["id"] not in ids, f"{where}.id: duplicate outcome id {o['id']!r}")
        ids.append(o["id"])
        p = _rational(o["prob"], f"{where}.prob")
        _expect(p > 0, f"{where}.prob: outcome {o['id']!r} must have positive probability, got {fmt(p)}")
        probs.append(p)
        tv = o["tau"]
        if tv == "inf":
            taus.append(POS_INF)
        else:
            _expect(isinstance(tv, int) and not isinstance(tv, bool) and 0 <= tv <= T,
                    f"{where}.tau: expected an integer in 0..{T} or \"inf\", got {tv!r}")
            taus.append(tv)
        S = o["S"]
        _expect(isinstance(S, list) and len(S) == d, f"{where}.S: expected {d} asset rows")
        rows = []
        for k, row in enumerate(S):
            _expect(isinstance(row, list) and len(row) == T + 1, f"{where}.S[{k}]: expected {T + 1} values")
            vals = [_rational(v, f"{where}.S[{k}][{t}]") for t, v in enumerate(row)]
            _expect(all(v >= 0 for v in vals), f"{where}.S[{k}]: prices must be nonnegative")
            rows.append(vals)
        prices.append(rows)
    total = sum(probs)
    _expect(total == 1, f"outcomes: probabilities sum to {fmt(total)}, not 1")
    index = {o: i for i, o in enumerate(ids)}
    n = len(ids)

    filt = doc["filtration"]
    _expect(isinstance(filt, list) and len(filt) == T + 1, f"filtration: expected {T + 1} partitions")
    parts = []
    for t, blocks in enumerate(filt):
        where = f"filtration[{t}]"
        _expect(isinstance(blocks, list) and blocks, f"{where}: expected a nonempty list of blocks")
        seen = {}
        for b, block in enumerate(blocks):
            _expect(isinstance(block, list) and block, f"{where}[{b}]: expected a nonempty list of ids")
            for o in block:
                _expect(o in index, f"{where}[{b}]: unknown outcome {o!r}")
                _expect(o not in seen, f"{where}: outcome {o!r} appears in blocks {seen.get(o)} and {b}")
                seen[o] = b
        missing = [o for o in ids if o not in seen]
        _expect(not missing, f"{where}: outcomes {missing} are not covered")
        part = Partition.from_blocks([[index[o] for o in block] for block in blocks], n)
        if parts:
            prev = parts[-1]
            for block in blocks:
                owners = sorted({prev.block_of[index[o]] for o in block})
                if len(owners) > 1:
                    spans = [[ids[w] for w in prev.blocks[k]] for k in owners]
                    raise ModelError(f"{where}: block {block} is not contained in a single block of "
                                     f"filtration[{t - 1}]; it meets {spans}")
        parts.append(part)

    S = tuple(tuple(tuple(prices[w][k][t] for k in range(d)) for w in range(n)) for t in range(T + 1))
    for t in range(T + 1):
        for block in parts[t].blocks:
            if len({S[t][w] for w in block}) > 1:
                raise ModelError(f"S at t={t} is not F_{t}-measurable on block {[ids[w] for w in block]}")

    claim = None
    if "claim" in doc and doc["claim"] is not None:
        c = doc["claim"]
        _expect(isinstance(c, dict), "claim: expected an object")
        _expect(c.get("class") in CLASSES, f"claim.class: expected one of {list(CLASSES)}, got {c.get('class')!r}")
        procs = {}
        for key in ("g", "K"):
            table = c.get(key)
            if table is None:
                procs[key] = tuple((Fraction(0),) * n for _ in range(T + 1))
                continue
            _expect(isinstance(table, dict) and set(table) == set(ids),
                    f"claim.{key}: expected one entry per outcome id")
            vals = {}
            for o in ids:
                row = table[o]
                _expect(isinstance(row, list) and len(row) == T + 1, f"claim.{key}.{o}: expected {T + 1} values")
                vals[o] = [_rational(v, f"claim.{key}.{o}[{t}]") for t, v in enumerate(row)]
            proc = tuple(tuple(vals[o][t] for o in ids) for t in range(T + 1))
            for t in range(T + 1):
                for block in parts[t].blocks:
                    if len({proc[t][w] for w in block}) > 1:
                        raise ModelError(f"claim.{key} at t={t} is not F_{t}-measurable on block "
                                         f"{[ids[w] for w in block]}")
            procs[key] = proc
        claim = Claim(c["class"], procs["g"], procs["K"])

    space = FilteredSpace(tuple(ids), tuple(probs), T, tuple(parts))
    return Model(space, tuple(taus), S, claim, doc.get("name", name))


def to_dict(model: Model) -> dict:
    sp = model.space
    ids = sp.outcomes
    T, d = sp.horizon, model.d
    outs = []
    for w, o in enumerate(ids):
        tv = model.tau[w]
        outs.append({
            "id": o,
            "prob": fmt(sp.base_prob[w]),
            "tau": "inf" if tv == POS_INF else tv,
            "S": [[fmt(model.S[t][w][k]) for t in range(T + 1)] for k in range(d)],
        })
    doc = {}
    if model.name:
        doc["name"] = model.name
    doc.update({
        "horizon": T,
        "assets": d,
        "outcomes": outs,
        "filtration": [[[ids[w] for w in b] for b in part.blocks] for part in sp.filtration],
    })
    if model.claim is not None:
        c = model.claim
        doc["claim"] = {
            "class": c.cls,
            "g": {o: [fmt(c.g[t][w]) for t in range(T + 1)] for w, o in enumerate(ids)},
            "K": {o: [fmt(c.K[t][w]) for t in range(T + 1)] for w, o in enumerate(ids)},
        }
    return doc


def _render(obj, indent: int = 0) -> str:
    pad = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_render(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(obj, list):
        flat = all(not isinstance(v, (list, dict)) for v in obj)
        if flat or all(isinstance(v, list) and all(not isinstance(x, (list, dict)) for x in v) for v in obj):
            return json.dumps(obj)
        items = [pad + _render(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"
    return json.dumps(obj)


def dumps(model: Model) -> str:
    """Canonical text: two-space indentation, short lists kept on one line."""
    return _render(to_dict(model)) + "\n"


def loads(text: str, name: str = "") -> Model:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return from_dict(doc, name)


def load(path) -> Model:
    p = Path(path)
    return loads(p.read_text(), p.stem)


def save(model: Model, path) -> None:
    Path(path).write_text(dumps(model))


def canonical(text: str) -> str:
    return dumps(loads(text))


__all__ = ["ModelError", "from_dict", "to_dict", "dumps", "loads", "load", "save", "canonical"]
