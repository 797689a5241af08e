"""Command-line front end.

Reports are line-oriented ``key=value`` text with rationals printed as
"p/q".  Exit codes: 0 when everything in scope holds, 1 when an assertion
fails (AIP violated, a suite check fails, a decomposition does not
telescope), 2 for unusable input.  Plotting is left to the user.
"""
from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import verify
from .decomp import TERMS, decompose
from .extended import fmt
from .generator import REGIMES, GenConfig, GenerationError, deadzone_times, gen
from .modelfile import ModelError, dumps, load
from .pricing import CLASSES, AIPViolation, aip, price_vulnerable
from .prob import ConsistencyError, DomainError

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _vec(v) -> str:
    if v is None:
        return "masked"
    if isinstance(v, tuple):
        return "(" + ",".join(fmt(x) for x in v) + ")"
    return fmt(v)


def _atom(model, atom) -> str:
    return "{" + ",".join(model.space.outcomes[w] for w in atom) + "}"


def _load(path):
    try:
        return load(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except (ModelError, DomainError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _claim_kit(model, a, cls: Optional[str]):
    if model.claim is None:
        raise InputError("model has no claim section")
    return a.kit(cls or model.claim.cls, model.claim.g, model.claim.K)


def _per_atom(out, model, label, parts, values):
    for t, part in enumerate(parts):
        if t >= len(values) or values[t] is None:
            continue
        for b in part.blocks:
            out.append(f"{label} t={t} atom={_atom(model, b)} value={_vec(values[t][b[0]])}")


# --- commands --------------------------------------------------------------------

def cmd_validate(args, out) -> int:
    m = _load(args.model)
    a = m.analyze()
    ZF = a.defl.ZF
    out.append(f"model={m.name} status=valid")
    out.append(f"horizon={m.T} outcomes={m.n} assets={m.d}")
    out.append(f"claim={m.claim.cls if m.claim else 'none'}")
    out.append("deadzone_times=" + ",".join(str(t) for t in deadzone_times(m)))
    out.append(f"ZF_identity={str(all(z == 1 for row in ZF for z in row)).lower()}")
    for t in range(m.T + 1):
        out.append(f"azema t={t} G={_vec(a.az.G[t])} Gtilde={_vec(a.az.Gt[t])} ZF={_vec(ZF[t])}")
    return EXIT_OK


def _aip_report(m, which: str):
    a = m.analyze()
    sp = m.space
    if which == "stopped":
        return a.ps.Stau, a.Gfilt, sp.P, aip(a.ps.Stau, a.Gfilt, sp.P)
    if which == "tilde":
        return a.ps.Stilde, sp.filtration, a.defl.Qtilde, aip(a.ps.Stilde, sp.filtration, a.defl.Qtilde)
    return a.ps.Sbar, sp.filtration, sp.P, aip(a.ps.Sbar, sp.filtration, sp.P)


def cmd_aip(args, out) -> int:
    m = _load(args.model)
    _, _, _, rep = _aip_report(m, args.which)
    out.append(f"model={m.name} market={args.which}")
    for (t, atom), h in sorted(rep.verdicts.items()):
        line = f"verdict t={t} atom={_atom(m, atom)} aip={str(h.contains).lower()}"
        if not h.contains:
            line += f" certificate={_vec(h.separator)}"
        out.append(line)
    for t, atom, h in rep.violations():
        out.append(f"violation t={t} atom={_atom(m, atom)} certificate={_vec(h.separator)}")
    out.append(f"aip={str(rep.overall).lower()}")
    return EXIT_OK if rep.overall else EXIT_FAIL


def _priced(m, cls, literal):
    a = m.analyze()
    kit = _claim_kit(m, a, cls)
    v = price_vulnerable(kit, m.space, a.tau, a.az, a.defl, a.ps, a.Gfilt, literal=literal)
    return a, kit, v


def cmd_price(args, out) -> int:
    m = _load(args.model)
    classes = CLASSES if args.cls == "all" else [args.cls]
    out.append(f"model={m.name}")
    for cls in classes:
        try:
            a, kit, v = _priced(m, cls, args.literal)
        except AIPViolation as exc:
            out.append(f"class={cls or m.claim.cls} status=aip_violation t={exc.t} "
                       f"atom={_atom(m, exc.atom)} certificate={_vec(exc.certificate)}")
            return EXIT_FAIL
        out.append(f"class={kit.cls} status=ok")
        out.append(f"price={_vec(v.G_report.prices[0][0])}" if len(a.Gfilt[0].blocks) == 1 else
                   "price=" + ",".join(f"{_atom(m, b)}:{_vec(v.G_report.prices[0][b[0]])}" for b in a.Gfilt[0].blocks))
        _per_atom(out, m, "G", a.Gfilt, v.G_report.prices)
        for t, part in enumerate(a.Gfilt[:-1]):
            for b in part.blocks:
                out.append(f"strategy t={t} atom={_atom(m, b)} theta={_vec(v.G_report.strategies[t][b[0]])}")
        _per_atom(out, m, "F", m.space.filtration, v.F_process)
        for t in range(m.T + 1):
            out.append(f"convention t={t} match={','.join(sorted(v.conventions[t])) or 'none'}")
    return EXIT_OK


def cmd_decompose(args, out) -> int:
    m = _load(args.model)
    classes = CLASSES if args.cls == "all" else [args.cls]
    ids = m.space.outcomes
    code = EXIT_OK
    for cls in classes:
        try:
            a, kit, v = _priced(m, cls, args.literal)
        except AIPViolation as exc:
            out.append(f"status=aip_violation t={exc.t} atom={_atom(m, exc.atom)} certificate={_vec(exc.certificate)}")
            return EXIT_FAIL
        d = decompose(kit, v.F_process, m.space, a.tau, a.az, a.haz, literal=args.literal)
        out.append(f"model={m.name} class={kit.cls} literal={str(args.literal).lower()}")
        for name in TERMS:
            for t in range(m.T + 1):
                out.append(f"term={name} t={t} " + " ".join(f"{ids[w]}={fmt(x)}" for w, x in enumerate(d.terms[name][t])))
        for t in range(m.T + 1):
            out.append(f"total t={t} " + " ".join(f"{ids[w]}={fmt(x)}" for w, x in enumerate(d.total[t])))
        ok = d.telescopes() and d.telescopes(v.G_report.prices)
        out.append(f"telescopes={str(ok).lower()}")
        if not ok:
            code = EXIT_FAIL
    return code


def cmd_gen(args, out) -> int:
    try:
        cfg = GenConfig(seed=args.seed, max_outcomes=args.max_outcomes, max_T=args.max_T, max_d=args.max_d,
                        denom_bound=args.denom_bound, regime=args.regime, aip_prices=not args.any_prices,
                        quiet_deadzone=args.quiet_deadzone, claim_class=args.cls, nonneg_claim=args.nonneg)
        m = gen(cfg)
    except (ValueError, GenerationError) as exc:
        raise InputError(str(exc)) from None
    text = dumps(m)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        out.append(f"wrote={args.out}")
    else:
        out.append(text.rstrip("\n"))
    return EXIT_OK


def cmd_verify(args, out) -> int:
    suites = verify.SUITES if args.suite == "all" else (args.suite,)
    if args.models is not None and args.models < 0:
        raise InputError("--models must be nonnegative")
    try:
        results = verify.run(suites, args.models, args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out.append(verify.report(results).rstrip("\n"))
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAIL


# --- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="randhorizon", description="Super-hedging with a random horizon.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="load a model file and print its Azema pair and deflator")
    s.add_argument("model")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("aip", help="AIP verdicts per (t, atom)")
    s.add_argument("model")
    s.add_argument("--model", dest="which", choices=("stopped", "tilde", "bar"), default="stopped",
                   help="stopped = (S^tau,G,P), tilde = (S-tilde,F,Q-tilde), bar = (S-bar,F,P)")
    s.set_defaults(func=cmd_aip)

    for name, func, helptext in (("price", cmd_price, "price the model's claim"),
                                 ("decompose", cmd_decompose, "risk decomposition of the claim's G-price")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("model")
        s.add_argument("--class", dest="cls", choices=CLASSES + ("all",), default=None,
                       help="claim class (default: the one in the file)")
        s.add_argument("--literal", action="store_true", help="use the formulas exactly as displayed")
        s.set_defaults(func=func)

    s = sub.add_parser("gen", help="generate a random model file")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--regime", choices=REGIMES, default="correlated")
    s.add_argument("--max-outcomes", type=int, default=16)
    s.add_argument("--max-T", type=int, default=3)
    s.add_argument("--max-d", type=int, default=2)
    s.add_argument("--denom-bound", type=int, default=12)
    s.add_argument("--any-prices", action="store_true", help="do not force AIP at each node")
    s.add_argument("--quiet-deadzone", action="store_true", help="freeze prices on dead-zone children")
    s.add_argument("--class", dest="cls", choices=CLASSES, default=None)
    s.add_argument("--nonneg", action="store_true", help="nonnegative g and K")
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("verify", help="run verification suites")
    s.add_argument("--suite", choices=verify.SUITES + ("all",), default="all")
    s.add_argument("--models", type=int, default=None, help="models per suite (default: suite size)")
    s.add_argument("--seed", type=int, default=0, help="base seed")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    out: list = []
    try:
        code = args.func(args, out)
    except InputError as exc:
        print(f"error={exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DomainError, ConsistencyError) as exc:
        print(f"error={exc}", file=sys.stderr)
        return EXIT_INPUT
    print("\n".join(out))
    return code


__all__ = ["main", "build_parser"]
