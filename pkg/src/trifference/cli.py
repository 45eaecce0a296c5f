"""Command-line entry point.

Subcommands mirror the library modules: census and distance tables, canonical
forms, extension searches, bounds, linear codes over GF(3), strong blocking
sets, and the embedded catalog.  Exit status is 0 on success, 1 when a
verification fails, 2 on usage or input errors.  Reporting commands take
``--format {text,json,tsv}``; runs can append a manifest record with
``--manifest``.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from pathlib import Path

from . import __version__
from .core import Code, is_trifferent, read_code_file, write_code_file


def _stable_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with path.open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _append_manifest(args: argparse.Namespace, t0: float, outputs: list[Path]) -> None:
    if not getattr(args, "manifest", None):
        return
    record = {
        "command": args.subcommand,
        "parameters": {
            k: v
            for k, v in sorted(vars(args).items())
            if k not in ("func", "manifest") and not callable(v)
        },
        "seed": getattr(args, "seed", None),
        "wall_seconds": round(time.time() - t0, 3),
        "outputs": {str(p): _sha256(p) for p in outputs if p.exists()},
        "version": __version__,
    }
    with open(args.manifest, "a") as fh:
        fh.write(_stable_json(record) + "\n")


def _read_codes(path: str) -> tuple[int, list[Code]]:
    with open(path) as fh:
        return read_code_file(fh)


def _checkpoint_dir(args: argparse.Namespace) -> str | None:
    return getattr(args, "checkpoint", None) or os.environ.get("TRIF_CHECKPOINT_DIR")


def _emit_table(fmt: str, header: list[str], rows: list[list], json_obj) -> None:
    if fmt == "json":
        print(_stable_json(json_obj))
    elif fmt == "tsv":
        print("\t".join(header))
        for row in rows:
            print("\t".join(str(x) for x in row))
    else:
        widths = [
            max(len(str(h)), max((len(str(r[i])) for r in rows), default=0))
            for i, h in enumerate(header)
        ]
        print("  ".join(str(h).rjust(w) for h, w in zip(header, widths)))
        for row in rows:
            print("  ".join(str(x).rjust(w) for x, w in zip(row, widths)))


# --- subcommands -------------------------------------------------------------


def _cmd_enumerate(args: argparse.Namespace) -> int:
    from .enumeration import orderly_generate

    t0 = time.time()
    sink_codes: list[Code] = []
    sink = None if (args.count_only or not args.out) else sink_codes.append
    table = orderly_generate(
        args.length,
        min_card=args.min_card,
        max_card=args.max_card,
        sink=sink,
        jobs=args.jobs,
        checkpoint_dir=_checkpoint_dir(args),
    )
    row = table.row()
    header = ["n"] + [f"l={l}" for l in range(1, len(row) + 1)]
    _emit_table(
        args.format,
        header,
        [[args.length] + list(row)],
        {"n": args.length, "counts": {str(l): c for l, c in sorted(table.counts.items())}},
    )
    outputs = []
    if sink is not None:
        out = Path(args.out)
        with out.open("w") as fh:
            write_code_file(fh, args.length, sink_codes)
        outputs.append(out)
    _append_manifest(args, t0, outputs)
    return 0


def _cmd_distance_table(args: argparse.Namespace) -> int:
    from .enumeration import distance_classify, orderly_generate

    t0 = time.time()
    table = orderly_generate(args.length, checkpoint_dir=_checkpoint_dir(args))
    dist = distance_classify(args.length, table)
    row = dist.row()
    header = ["n"] + [f"d={d}" for d in range(1, len(row) + 1)]
    _emit_table(
        args.format,
        header,
        [[args.length] + list(row)],
        {"n": args.length, "T": {str(d): v for d, v in enumerate(row, start=1)}},
    )
    _append_manifest(args, t0, [])
    return 0


def _cmd_canon(args: argparse.Namespace) -> int:
    from .equivalence import canonical_form, is_canonical

    t0 = time.time()
    n, codes = _read_codes(args.input)
    outputs = []
    if args.check_only:
        for idx, code in enumerate(codes):
            print(f"{idx}\t{'canonical' if is_canonical(code) else 'not-canonical'}")
    else:
        results = [canonical_form(code) for code in codes]
        if args.stabilizer:
            for idx, res in enumerate(results):
                print(f"{idx}\t{res.stabilizer_order}")
        target = open(args.out, "w") if args.out else sys.stdout
        try:
            write_code_file(target, n, [r.canonical for r in results])
        finally:
            if args.out:
                target.close()
                outputs.append(Path(args.out))
    _append_manifest(args, t0, outputs)
    return 0


def _cmd_extend(args: argparse.Namespace) -> int:
    from .extension import extend_all

    t0 = time.time()
    n, bases = _read_codes(args.bases)
    if args.target_length is not None and args.target_length != n + 1:
        print(f"error: bases have length {n}, target length must be {n + 1}", file=sys.stderr)
        return 2
    codes = extend_all(
        bases,
        args.target_card,
        prune=not args.no_prune,
        checkpoint=_checkpoint_dir(args) and Path(_checkpoint_dir(args)) / "extend.jsonl",
        canonical=not args.raw,
    )
    outputs = []
    if args.out:
        out = Path(args.out)
        with out.open("w") as fh:
            write_code_file(fh, n + 1, codes)
        outputs.append(out)
    print(
        _stable_json(
            {
                "length": n + 1,
                "target": args.target_card,
                "classes_found": len(codes),
                "wall_seconds": round(time.time() - t0, 3),
            }
        )
    )
    _append_manifest(args, t0, outputs)
    return 0


def _cmd_pipeline(args: argparse.Namespace) -> int:
    from .extension import staged_pipeline

    t0 = time.time()
    thresholds = [int(tok) for tok in args.thresholds.split(",")]
    if len(thresholds) < 2:
        print("error: need a base threshold and at least one stage", file=sys.stderr)
        return 2
    stages = [
        (args.from_length + 1 + k, card) for k, card in enumerate(thresholds[1:])
    ]
    results = staged_pipeline(
        args.from_length,
        thresholds[0],
        stages,
        prune=not args.no_prune,
        checkpoint_dir=_checkpoint_dir(args),
    )
    outputs = []
    for res in results:
        print(
            _stable_json(
                {
                    "length": res.n,
                    "target": res.target_card,
                    "classes_found": len(res.codes),
                    "counts": {str(l): c for l, c in sorted(res.counts.items())},
                    "wall_seconds": round(time.time() - t0, 3),
                }
            )
        )
    if args.out and results:
        out = Path(args.out)
        with out.open("w") as fh:
            write_code_file(fh, results[-1].n, results[-1].codes)
        outputs.append(out)
    _append_manifest(args, t0, outputs)
    return 0


def _cmd_bounds(args: argparse.Namespace) -> int:
    from .bounds import BoundLedger

    t0 = time.time()
    ledger = BoundLedger()
    if args.seed_known:
        with open(args.seed_known) as fh:
            ledger.known.update({int(k): int(v) for k, v in json.load(fh).items()})
    rows = []
    for n in range(1, args.max_length + 1):
        bound, tag = ledger.upper_bound(n)
        rows.append([n, bound, tag])
    _emit_table(
        args.format,
        ["n", "bound", "provenance"],
        rows,
        {str(r[0]): {"bound": r[1], "provenance": r[2]} for r in rows},
    )
    _append_manifest(args, t0, [])
    return 0 if ledger.consistent(args.max_length) else 1


def _cmd_linear(args: argparse.Namespace) -> int:
    from . import lineargf3 as lg

    t0 = time.time()
    with open(args.gen) as fh:
        g = lg.read_generator_file(fh)
    status = 0
    if args.action == "weights":
        print(lg.weight_enumerator(g))
    elif args.action == "minimal":
        flag, witness = lg.is_minimal_code(g)
        print("minimal" if flag else f"not-minimal witness={witness}")
        status = 0 if flag else 1
    elif args.action == "trifferent":
        flag = is_trifferent(lg.expand(g))
        print("trifferent" if flag else "not-trifferent")
        status = 0 if flag else 1
    elif args.action == "dual":
        d3 = lg.dual_distance_at_least(g, 3)
        d2 = lg.dual_distance_at_least(g, 2)
        print("dual-distance>=3" if d3 else ("dual-distance>=2" if d2 else "dual-distance<2"))
        status = 0 if d3 else 1
    else:  # expand
        code = lg.expand(g)
        target = open(args.out, "w") if args.out else sys.stdout
        try:
            write_code_file(target, g.n, [code])
        finally:
            if args.out:
                target.close()
    _append_manifest(args, t0, [Path(args.out)] if getattr(args, "out", None) else [])
    return status


def _cmd_blocking(args: argparse.Namespace) -> int:
    from . import lineargf3 as lg

    t0 = time.time()
    with open(args.points) as fh:
        m = lg.read_point_file(fh, args.dim)
    if args.action == "check":
        flag = lg.is_strong_blocking(m)
        print("strong-blocking" if flag else "not-strong-blocking")
        _append_manifest(args, t0, [])
        return 0 if flag else 1
    reduced = lg.greedy_point_removal(m, args.seed)
    outputs = []
    target = open(args.out, "w") if args.out else sys.stdout
    try:
        lg.write_point_file(target, reduced)
    finally:
        if args.out:
            target.close()
            outputs.append(Path(args.out))
    print(f"# size {m.size()} -> {reduced.size()}", file=sys.stderr)
    _append_manifest(args, t0, outputs)
    return 0


def _cmd_catalog(args: argparse.Namespace) -> int:
    from .catalog import BUCKET_SIZES, catalog_codes, verify_catalog

    t0 = time.time()
    if args.action == "show":
        if args.length is None or args.card is None:
            print("error: show needs --length and --card", file=sys.stderr)
            return 2
        if (args.length, args.card) not in BUCKET_SIZES:
            print(f"error: no bucket ({args.length},{args.card})", file=sys.stderr)
            return 2
        write_code_file(sys.stdout, args.length, catalog_codes(args.length, args.card))
        _append_manifest(args, t0, [])
        return 0
    reports = verify_catalog()
    ok = True
    for rep in reports:
        line = f"({rep.n},{rep.l})\t{rep.entries} entries\t{'PASS' if rep.passed else 'FAIL'}"
        print(line)
        for failure in rep.failures:
            print(f"  {failure}")
        ok = ok and rep.passed
    _append_manifest(args, t0, [])
    return 0 if ok else 1


def _cmd_verify(args: argparse.Namespace) -> int:
    args.action = "verify"
    args.length = None
    args.card = None
    return _cmd_catalog(args)


# --- parser ------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, fmt: bool = False) -> None:
    p.add_argument("--manifest", help="append a run record to this JSONL file")
    if fmt:
        p.add_argument("--format", choices=("text", "json", "tsv"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trif", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("enumerate", help="census of equivalence classes by cardinality")
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--min-card", type=int, default=1)
    p.add_argument("--max-card", type=int, default=None)
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--out", help="write codes in [min-card, max-card] to this file")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--checkpoint", help="directory for resumable subtree tallies")
    _add_common(p, fmt=True)
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("distance-table", help="maximum cardinality by minimum distance")
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--checkpoint")
    _add_common(p, fmt=True)
    p.set_defaults(func=_cmd_distance_table)

    p = sub.add_parser("canon", help="canonical forms or canonicity verdicts")
    p.add_argument("--input", required=True)
    p.add_argument("--check-only", action="store_true")
    p.add_argument("--stabilizer", action="store_true")
    p.add_argument("--out")
    _add_common(p)
    p.set_defaults(func=_cmd_canon)

    p = sub.add_parser("extend", help="one-coordinate extension search over base codes")
    p.add_argument("--bases", required=True)
    p.add_argument("--target-card", type=int, required=True)
    p.add_argument("--target-length", type=int, default=None)
    p.add_argument("--out")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("--raw", action="store_true", help="skip canonicalising the class representatives")
    p.add_argument("--checkpoint")
    _add_common(p)
    p.set_defaults(func=_cmd_extend)

    p = sub.add_parser("pipeline", help="chained census + extension stages")
    p.add_argument("--from-length", type=int, required=True)
    p.add_argument(
        "--thresholds",
        required=True,
        help="comma list: base cardinality, then one threshold per stage",
    )
    p.add_argument("--out")
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("--checkpoint")
    _add_common(p)
    p.set_defaults(func=_cmd_pipeline)

    p = sub.add_parser("bounds", help="upper-bound ledger")
    p.add_argument("--max-length", type=int, required=True)
    p.add_argument("--seed-known", help="JSON file of extra exact values {n: T(n)}")
    _add_common(p, fmt=True)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("linear", help="linear codes over GF(3)")
    p.add_argument("action", choices=("weights", "minimal", "trifferent", "dual", "expand"))
    p.add_argument("--gen", required=True)
    p.add_argument("--out")
    _add_common(p)
    p.set_defaults(func=_cmd_linear)

    p = sub.add_parser("blocking", help="strong blocking sets in PG(k-1,3)")
    p.add_argument("action", choices=("check", "reduce"))
    p.add_argument("--points", required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    _add_common(p)
    p.set_defaults(func=_cmd_blocking)

    p = sub.add_parser("catalog", help="embedded code catalog")
    p.add_argument("action", choices=("verify", "show"))
    p.add_argument("--length", type=int, default=None)
    p.add_argument("--card", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=_cmd_catalog)

    p = sub.add_parser("verify", help="alias for 'catalog verify'")
    _add_common(p)
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
