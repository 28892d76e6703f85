"""Command-line front end.

One-line summaries go to standard output; certificates, transcripts and
drawings go to files.  Exit status is 0 on success, 1 when the input is
invalid or a certificate does not check out, and 2 when an internal
verification or audit fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .curves import CurveDiagram
from .distance import (AuditFailure, VerificationError, audit_lower_bound, distance, path_vertices,
                       verify_certificate)
from .oracle import BudgetExceeded, bfs_distance, cache_dir, load_or_enumerate
from .plat import (PlatError, below_interesting_range, bridge_distance_formula, is_highly_twisted, parse_plat,
                   uniqueness_threshold)
from .render import render_curve, render_plat, render_track
from .tracks import build_plat_track

OK, INVALID, INTERNAL = 0, 1, 2


class UsageError(Exception):
    """Bad input or options; reported with exit status 1."""


def _read_plat(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_plat(text)
    except PlatError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: not valid JSON ({exc.msg})") from None


def _write(path, text: str):
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _emit(args, text: str, data: dict):
    if args.format == "json":
        print(json.dumps(data, sort_keys=True))
    else:
        print(text)


def _theorem_ready(P):
    if P.m < 3:
        raise UsageError(f"the distance formula needs m >= 3 (got m={P.m})")
    if not is_highly_twisted(P):
        raise UsageError("plat is not highly twisted; every coefficient needs |a| >= 3")


# -- subcommands ------------------------------------------------------------------

def cmd_check(args) -> int:
    P = _read_plat(args.plat)
    twisted = is_highly_twisted(P)
    data = {"m": P.m, "n": P.n, "highly_twisted": twisted}
    text = f"ok: m={P.m} n={P.n}, highly twisted: {'yes' if twisted else 'no'}"
    if twisted and P.m >= 3:
        data["formula_value"] = bridge_distance_formula(P)
        data["unique_minimal_sphere"] = uniqueness_threshold(P)
        text += f", d = {data['formula_value']}"
        if below_interesting_range(P):
            text += " (short plat, below the theorem's interesting range)"
    _emit(args, text, data)
    return OK


def cmd_distance(args) -> int:
    P = _read_plat(args.plat)
    _theorem_ready(P)
    cert = distance(P, audit=args.audit, budget=args.budget, seed=args.seed, disk_bound=args.bound)
    out = args.out or str(Path(args.plat).with_suffix(".cert.json"))
    _write(out, json.dumps(cert.to_json(), indent=1) + "\n")
    text = f"d = {cert.formula_value}"
    if cert.uniqueness_flag:
        text += " (unique minimal bridge sphere)"
    _emit(args, text, {"distance": cert.formula_value, "length": cert.length, "certificate": out,
                       "uniqueness_flag": cert.uniqueness_flag})
    return OK


def cmd_path(args) -> int:
    P = _read_plat(args.plat)
    if P.m < 3:
        raise UsageError(f"the path construction needs m >= 3 (got m={P.m})")
    r, verts = path_vertices(P)
    if args.format == "json":
        print(json.dumps({"r": r, "path": [v.to_json() for v in verts]}, sort_keys=True))
    else:
        for k, v in enumerate(verts):
            print(f"{k}: {v.label} in plane {v.frame}: {' '.join(map(str, v.curve.word))}")
    if args.out:
        _write(args.out, json.dumps({"r": r, "path": [v.to_json() for v in verts]}, indent=1) + "\n")
    return OK


def cmd_verify(args) -> int:
    data = _read_json(args.certificate)
    try:
        rep = verify_certificate(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{args.certificate}: malformed certificate ({exc})") from None
    if rep.ok:
        _emit(args, f"ok: path of length {rep.length} verified", {"ok": True, "length": rep.length})
        return OK
    _emit(args, "FAILED: " + "; ".join(rep.failures), {"ok": False, "failures": rep.failures})
    return INVALID


def cmd_audit(args) -> int:
    P = _read_plat(args.plat)
    _theorem_ready(P)
    try:
        tr = audit_lower_bound(P, budget=args.budget, seed=args.seed, disk_bound=args.bound)
    except AuditFailure as exc:
        if args.out:
            _write(args.out, json.dumps({"failure": exc.instance}, indent=1, default=str) + "\n")
        print(f"audit FAILED: {exc}", file=sys.stderr)
        return INTERNAL
    if args.out:
        _write(args.out, json.dumps(tr.to_json(), indent=1) + "\n")
    counts = tr.counts()
    text = "audit passed: " + ", ".join(f"{k} x{v}" for k, v in sorted(counts.items()))
    if tr.observations():
        text += f" ({len(tr.observations())} non-gating observations)"
    _emit(args, text, {"passed": True, "counts": counts, "observed": len(tr.observations())})
    return OK


def cmd_enumerate(args) -> int:
    if args.m < 2:
        raise UsageError("--m must be at least 2")
    if args.bound < 0 or args.bound % 2:
        raise UsageError("--bound must be a non-negative even integer")
    M = 2 * args.m
    directory = cache_dir(args.cache_dir)
    inv = load_or_enumerate(M, args.bound, directory, args.budget)
    below = sum(inv.below)
    data = {"punctures": M, "bound": args.bound, "curves": len(inv.curves), "below": below,
            "digest": inv.digest()}
    lines = [f"inventory: {len(inv.curves)} curves on {M} punctures with at most {args.bound} crossings "
             f"({below} bound a disk below)"]
    if args.bfs:
        P = _read_plat(args.bfs)
        if P.strand_count != M:
            raise UsageError(f"{args.bfs} has {P.strand_count} strands, the inventory has {M}")
        res = bfs_distance(P, args.bound, inventory=inv)
        d = "inf" if res.distance == float("inf") else str(int(res.distance))
        lines.append(f"bfs = {d} (within-bound: {'yes' if res.within_bound else 'no'})")
        data["bfs"] = res.to_json()
        if args.out:
            _write(args.out, json.dumps(res.to_json(), indent=1) + "\n")
    _emit(args, "\n".join(lines), data)
    return OK


def cmd_render(args) -> int:
    src = args.input
    if src.endswith(".json"):
        data = _read_json(src)
        try:
            c = CurveDiagram.from_json(data)
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"{src}: not a curve diagram ({exc})") from None
        svg = render_curve(c)
        what = "curve"
    else:
        P = _read_plat(src)
        if args.track is not None:
            try:
                svg = render_track(build_plat_track(P, args.track))
            except IndexError as exc:
                raise UsageError(str(exc)) from None
            what = f"track {args.track}"
        else:
            svg = render_plat(P)
            what = "plat"
    out = args.out or str(Path(src).with_suffix(".svg"))
    _write(out, svg)
    _emit(args, f"wrote {what} to {out}", {"output": out, "kind": what})
    return OK


# -- argument parsing -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text", help="stdout format")
    common.add_argument("--out", help="output file")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled audit instances")
    common.add_argument("--budget", type=int, default=None, help="sample or enumeration budget")
    common.add_argument("--bound", type=int, default=None, help="crossing bound for enumerated curves")
    common.add_argument("--cache-dir", help="inventory cache (default $PLATDIST_CACHE or ~/.cache/platdist)")

    ap = argparse.ArgumentParser(prog="platdist", description="Bridge distance of highly twisted plats.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="validate a plat file")
    p.add_argument("plat")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("distance", parents=[common], help="formula value and certificate")
    p.add_argument("plat")
    p.add_argument("--audit", action="store_true", help="attach the lower-bound audit transcript")
    p.set_defaults(run=cmd_distance)

    p = sub.add_parser("path", parents=[common], help="print the upper-bound path")
    p.add_argument("plat")
    p.set_defaults(run=cmd_path)

    p = sub.add_parser("verify", parents=[common], help="re-check a certificate file")
    p.add_argument("certificate")
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("audit", parents=[common], help="run the lower-bound audit")
    p.add_argument("plat")
    p.set_defaults(run=cmd_audit)

    p = sub.add_parser("enumerate", parents=[common], help="build a curve inventory")
    p.add_argument("--m", type=int, required=True, help="plat width")
    p.add_argument("--bfs", metavar="PLAT", help="also run breadth-first distance for this plat")
    p.set_defaults(run=cmd_enumerate)

    p = sub.add_parser("render", parents=[common], help="SVG of a plat, a track or a curve")
    p.add_argument("input", help="plat file, or curve JSON")
    p.add_argument("--track", type=int, metavar="ROW", help="draw the track of this row instead of the plat")
    p.set_defaults(run=cmd_render)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.budget is None:
        args.budget = 20 if args.command in ("distance", "audit") else None
    if args.command == "enumerate" and args.bound is None:
        args.bound = 8
    try:
        return args.run(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INVALID
    except (VerificationError, AuditFailure) as exc:
        print(f"internal verification failed: {exc}", file=sys.stderr)
        return INTERNAL
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INVALID


if __name__ == "__main__":
    sys.exit(main())
