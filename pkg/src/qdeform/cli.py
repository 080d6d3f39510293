"""Command-line front end: ``qdeform <command> [options]``.

Exit status is 0 when the report has no failures, 1 for a mathematical
failure and 2 for usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from .cleft import CleftError, compare_deformation
from .datum import DatumError, cartan_checks, datum_from_json
from .freealg import (PresentationError, build_presentation, check_overlaps, hilbert_ranks,
                      oracle_ranks, serre_relations)
from .freealg.parse import ParseError, parse_element
from .hopf import HopfError, verify_hopf
from .scalars import Q
from .uq import (PRESETS, UqError, UqInput, build_borel, build_uq, build_uq_flavor, cq_condition,
                 order_condition, classify_uq_pairs, whitehead_samples, uq_datum, uq_gcm)

COMMANDS = ("datum-check", "nf", "overlaps", "hilbert", "hopf", "deform", "classify", "whitehead")


class UsageError(Exception):
    pass


@dataclass
class Outcome:
    ok: bool
    report: dict
    text: str
    csv: str | None = None


# ---- input resolution -------------------------------------------------------------

def _q0(text: str | None):
    if text is None or text == "formal":
        return None
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"--q must be 'formal' or a rational number, not {text!r}") from exc


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc}") from exc


def _uq_from_doc(doc, q0_flag) -> UqInput:
    if isinstance(doc, str):
        return UqInput.preset(doc, _q0(q0_flag))
    if q0_flag is not None:
        doc = dict(doc, q=q0_flag)
    try:
        return UqInput.from_json(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed U_q input: {exc}") from exc


def resolve_input(args):
    """A UqInput, or a DatumDocument for general data."""
    if args.preset and args.input:
        raise UsageError("give --preset or --input, not both")
    if args.preset:
        return UqInput.preset(args.preset, _q0(args.q))
    if not args.input:
        raise UsageError("an input is required: --preset NAME or --input PATH")
    doc = _load_json(args.input)
    if isinstance(doc, dict) and "cartan_matrix" in doc:
        return _uq_from_doc(doc, args.q)
    if isinstance(doc, dict) and "uq" in doc:
        return _uq_from_doc(doc["uq"], args.q)
    try:
        return datum_from_json(doc)
    except (DatumError, KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed datum document: {exc}") from exc


def _general_presentation(dd):
    rels = serre_relations(dd.datum, dd.gcm) if dd.gcm is not None else []
    flavor = "Hlam" if dd.lam else "H0"
    return build_presentation(dd.datum, flavor, lam=dd.lam or None, block_rules=rels)


def _presentation(inp, which: str):
    if isinstance(inp, UqInput):
        if which == "borel":
            return build_borel(inp)[1]
        return build_uq(inp, "zero" if which == "uq0" else "standard")[1]
    return _general_presentation(inp)


# ---- commands -----------------------------------------------------------------------

def cmd_datum_check(args, inp) -> Outcome:
    if isinstance(inp, UqInput):
        rep = cartan_checks(uq_datum(inp), uq_gcm(inp))
        order = [{"i": i, "pass": ok} for i, ok in order_condition(inp)]
        cq = [{"pair": list(ij), "pass": ok, "value": str(v)} for ij, ok, v in cq_condition(inp)]
        ok = rep.passed and all(o["pass"] for o in order) and all(c["pass"] for c in cq)
        report = {"cartan": rep.to_json(), "order": order, "cq": cq, "pass": ok}
    else:
        if inp.gcm is None:
            report = {"partition": "valid", "cartan": None, "pass": True}
            ok = True
        else:
            rep = cartan_checks(inp.datum, inp.gcm)
            ok = rep.passed
            report = {"partition": "valid", "cartan": rep.to_json(), "pass": ok}
    bad = []
    if report.get("cartan"):
        bad = [f"{e['condition']} at {tuple(e['indices'])}: {e['value']}"
               for e in report["cartan"]["entries"] if not e["pass"]]
    bad += [f"order condition at i = {o['i']}" for o in report.get("order", []) if not o["pass"]]
    bad += [f"(C_q) at {tuple(c['pair'])}" for c in report.get("cq", []) if not c["pass"]]
    text = "all conditions pass" if ok else "failures:\n" + "\n".join(bad)
    return Outcome(ok, report, text)


def cmd_nf(args, inp) -> Outcome:
    if not args.expr:
        raise UsageError("nf needs --expr")
    p = _presentation(inp, args.algebra or "uq")
    try:
        el = parse_element(args.expr, p)
    except ParseError as exc:
        raise UsageError(str(exc)) from exc
    out = p.format(el)
    return Outcome(True, {"input": args.expr, "algebra": p.name, "normal_form": out}, out)


def cmd_overlaps(args, inp) -> Outcome:
    p = _presentation(inp, args.algebra or "uq")
    rep = check_overlaps(p, max_len=args.degree, box=args.box)
    js = rep.to_json(p)
    text = f"{js['checked']} ambiguities checked, {len(js['failures'])} unresolved"
    for f in js["failures"][:20]:
        text += f"\n  {f['kind']} {f['ambiguity']}: {f['residual']}"
    return Outcome(rep.ok, js, text)


def cmd_hilbert(args, inp) -> Outcome:
    p = _presentation(inp, args.algebra or "borel")
    ranks = hilbert_ranks(p, args.degree)
    report = {"algebra": p.name, "ranks": ranks}
    ok = True
    if args.oracle:
        orc = oracle_ranks(p, args.degree)
        report["oracle"] = orc
        ok = orc == ranks
    lines = ["degree,rank" + (",oracle" if args.oracle else "")]
    for k, r in enumerate(ranks):
        lines.append(f"{k},{r}" + (f",{report['oracle'][k]}" if args.oracle else ""))
    csv = "\n".join(lines)
    return Outcome(ok, report, csv, csv)


def cmd_hopf(args, inp) -> Outcome:
    if isinstance(inp, UqInput):
        targets = [build_uq(inp, "zero")[1], build_uq(inp, "standard")[1]]
    else:
        targets = [_general_presentation(inp)]
    report = {}
    ok = True
    lines = []
    for p in targets:
        rep = verify_hopf(p, args.degree)
        counts = {k: {"checked": t, "failed": b} for k, (t, b) in rep.counts().items()}
        report[p.name] = {"pass": rep.passed, "counts": counts,
                          "failures": [f.to_json() for f in rep.failures[:20]]}
        ok = ok and rep.passed
        lines.append(f"{p.name}: {len(rep.checks)} identities, {len(rep.failures)} failures")
    return Outcome(ok, report, "\n".join(lines))


def _need_uq(inp, cmd: str) -> UqInput:
    if not isinstance(inp, UqInput):
        raise UsageError(f"{cmd} needs U_q input (a preset or a cartan_matrix document)")
    return inp


def cmd_deform(args, inp) -> Outcome:
    u = _need_uq(inp, "deform")
    _, h0 = build_uq(u, "zero")
    _, hl = build_uq(u, "standard")
    A = build_uq_flavor(u, "Alam")
    rep = compare_deformation(h0, hl, A, args.degree)
    n = len(rep.mismatches) + len(rep.coaction_failures)
    text = f"{rep.pairs} basis pairs compared, {n} mismatches"
    for line in rep.mismatches[:20]:
        text += f"\n  {line}"
    return Outcome(rep.passed, rep.to_json(), text)


def _default_pairs(u: UqInput) -> list:
    """u = 1 with diagonal mu in {0, 1, q, q^2} on the first index."""
    return [({}, {}), ({}, {(1, 1): 1}), ({}, {(1, 1): Q}), ({}, {(1, 1): Q ** 2})]


def _pairs_from_doc(doc) -> list:
    from .scalars import parse_scalar
    out = []
    for item in doc:
        umat = {tuple(int(x) for x in k.split(",")): parse_scalar(str(v))
                for k, v in item.get("u", {}).items()}
        mu = {tuple(int(x) for x in k.split(",")): parse_scalar(str(v))
              for k, v in item.get("mu", {}).items()}
        out.append((umat, mu))
    return out


def cmd_classify(args, inp) -> Outcome:
    u = _need_uq(inp, "classify")
    pairs = _default_pairs(u)
    if args.input:
        doc = _load_json(args.input)
        if isinstance(doc, dict) and "pairs" in doc:
            try:
                pairs = _pairs_from_doc(doc["pairs"])
            except (ValueError, AttributeError, TypeError) as exc:
                raise UsageError(f"malformed pair list: {exc}") from exc
    report = classify_uq_pairs(u, pairs)
    lines = [f"{len(pairs)} pairs, {len(report['orbits'])} orbits"]
    for orb in report["orbits"]:
        lines.append(f"  orbit {orb['orbit_id']}: members {orb['members']}")
    return Outcome(True, report, "\n".join(lines))


def cmd_whitehead(args, inp) -> Outcome:
    u = _need_uq(inp, "whitehead")
    rep = whitehead_samples(u, dim=2, samples=args.samples, seed=args.seed)
    text = f"{rep.reduced}/{rep.samples} samples reduced to (0, 0) with verified witnesses"
    for f in rep.failures:
        text += f"\n  {f}"
    return Outcome(rep.passed, rep.to_json(), text)


HANDLERS = {
    "datum-check": cmd_datum_check, "nf": cmd_nf, "overlaps": cmd_overlaps,
    "hilbert": cmd_hilbert, "hopf": cmd_hopf, "deform": cmd_deform,
    "classify": cmd_classify, "whitehead": cmd_whitehead,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qdeform", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--preset", choices=sorted(PRESETS))
    ap.add_argument("--input", help="JSON document: U_q input, datum, or classify pair list")
    ap.add_argument("--degree", type=int, default=4, help="x-degree bound D (default 4)")
    ap.add_argument("--box", type=int, default=4, help="group exponent box E (default 4)")
    ap.add_argument("--samples", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--q", default=None, help="'formal' (default) or a rational value")
    ap.add_argument("--out", help="write the report here instead of stdout")
    ap.add_argument("--format", choices=("json", "csv", "text"), default=None)
    ap.add_argument("--expr", help="element for nf, e.g. 'x[1]x[-1]'")
    ap.add_argument("--algebra", choices=("borel", "uq", "uq0"), default=None,
                    help="which U_q-family algebra nf/overlaps/hilbert use")
    ap.add_argument("--oracle", action="store_true", help="hilbert: recompute ranks by linear algebra")
    return ap


def _render(out: Outcome, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(out.report, indent=2, default=str)
    if fmt == "csv":
        if out.csv is None:
            raise UsageError("csv output is only available for hilbert")
        return out.csv
    return out.text


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) if exc.code in (0, None) else 2
    try:
        if args.degree < 1 or args.box < 1:
            raise UsageError("--degree and --box must be at least 1")
        inp = resolve_input(args)
        out = HANDLERS[args.command](args, inp)
        fmt = args.format or ("csv" if args.command == "hilbert" else "text")
        text = _render(out, fmt)
    except UsageError as exc:
        print(f"qdeform: error: {exc}", file=sys.stderr)
        return 2
    except (UqError, CleftError, HopfError, PresentationError, DatumError, ValueError) as exc:
        print(f"qdeform: {args.command} failed: {exc}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if out.ok else 1


if __name__ == "__main__":
    sys.exit(main())
