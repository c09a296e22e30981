"""Command line interface.

Subcommands: ``projections`` (enumerate and classify projection classes),
``diagrams`` (crossing assignments, filters, invariants, new-at-n counts),
``verify`` (diff dataset statistics against the embedded reference tables),
``show`` (pretty-print one dataset record).  ``--seed-check`` runs the
seeded property suites instead of, or before, a subcommand.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .canonical import CanonicalEncoding
from .enumeration import EnumConfig
from .errors import TorustabError
from .maps import Perm, cycles
from .pipeline import (
    KeyLibrary,
    PipelineConfig,
    diagram_file,
    projection_file,
    stage_diagrams,
    stage_projections,
    stats_from_files,
    verify,
)
from .reference import REFERENCE

__all__ = ["main"]


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="torustab",
        description="Enumerate, canonicalize and classify knot and link "
        "diagrams on the thickened torus in the permutation model.",
    )
    p.add_argument(
        "--seed-check",
        action="store_true",
        help="run the seeded property suites (exit nonzero on failure)",
    )
    sub = p.add_subparsers(dest="command")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, required=True, help="crossing number")
    common.add_argument(
        "--out",
        type=Path,
        default=None,
        help="dataset directory (projections print to stdout when omitted)",
    )
    common.add_argument(
        "--allow-loops", action="store_true", help="permit loop edges (default: off)"
    )
    common.add_argument(
        "--keep-monogons",
        action="store_true",
        help="permit monogon faces (default: off)",
    )
    common.add_argument(
        "--threads",
        type=int,
        default=1,
        help="worker processes for the diagram stage "
        "(the TORUSTAB_THREADS environment variable overrides this)",
    )

    sub.add_parser(
        "projections",
        parents=[common],
        help="enumerate unsensed candidate projection classes",
    )

    d = sub.add_parser(
        "diagrams",
        parents=[common],
        help="classify crossing assignments on the prime projections",
    )
    d.add_argument(
        "--library-dir",
        type=Path,
        required=True,
        help="key library directory (one file per crossing number)",
    )
    d.add_argument(
        "--global-switch",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="quotient assignments by the all-crossing switch",
    )
    d.add_argument(
        "--bigon-rule",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="discard assignments with a reducible bigon",
    )
    d.add_argument(
        "--participation",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="links: require every component over and under somewhere",
    )

    v = sub.add_parser(
        "verify",
        help="recompute dataset statistics and diff them against the "
        "embedded reference tables",
    )
    v.add_argument("--n", type=int, nargs="+", required=True)
    v.add_argument("--out", type=Path, required=True)

    s = sub.add_parser("show", help="pretty-print one record of a dataset file")
    s.add_argument("file", type=Path)
    s.add_argument("--index", type=int, default=0, help="0-based record index")
    s.add_argument("--id", dest="record_id", default=None, help="record id prefix")
    return p


def _config(args: argparse.Namespace) -> PipelineConfig:
    threads = args.threads
    env = os.environ.get("TORUSTAB_THREADS")
    if env is not None:
        try:
            threads = int(env)
        except ValueError:
            raise TorustabError(f"TORUSTAB_THREADS must be an integer, got {env!r}")
    return PipelineConfig(
        enum=EnumConfig(
            allow_loops=args.allow_loops,
            forbid_monogons=not args.keep_monogons,
        ),
        global_switch=getattr(args, "global_switch", True),
        bigon_rule=getattr(args, "bigon_rule", True),
        participation=getattr(args, "participation", True),
        threads=max(1, threads),
    )


def _cmd_projections(args: argparse.Namespace) -> int:
    config = _config(args)
    if args.out is None:
        # stream to stdout: header line, then one record per class
        import tempfile

        with tempfile.TemporaryDirectory() as td:
            path, stats = stage_projections(args.n, Path(td), config)
            sys.stdout.write(path.read_text(encoding="ascii"))
    else:
        path, stats = stage_projections(args.n, args.out, config)
        print(f"wrote {path}", file=sys.stderr)
    print(
        f"n={stats.n}: unsensed={stats.unsensed} removed_comp={stats.removed_comp} "
        f"removed_split={stats.removed_split} prime={stats.prime_total} "
        f"knots={stats.prime_knots} links={stats.prime_links} "
        f"link_components={stats.link_components}",
        file=sys.stderr,
    )
    return 0


def _cmd_diagrams(args: argparse.Namespace) -> int:
    config = _config(args)
    out = args.out if args.out is not None else Path(".")
    if not projection_file(out, args.n).exists():
        stage_projections(args.n, out, config)
    library = KeyLibrary(args.library_dir)
    path, stats = stage_diagrams(args.n, out, library, config)
    print(f"wrote {path}", file=sys.stderr)
    print(
        f"n={stats.n}: projections={stats.prime_projections} "
        f"assignments={stats.assignments_enumerated} "
        f"surviving={stats.surviving_knots}/{stats.surviving_links} "
        f"new={stats.new_knots}/{stats.new_links} (knots/links)",
        file=sys.stderr,
    )
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    proj_stats = []
    diag_stats = []
    for n in args.n:
        ps, ds = stats_from_files(args.out, n)
        if ps is not None:
            proj_stats.append(ps)
        if ds is not None:
            diag_stats.append(ds)
        if ps is None and ds is None:
            print(f"no datasets for n={n} under {args.out}", file=sys.stderr)
    report = verify(proj_stats, diag_stats, REFERENCE)
    print(report.format())
    return 0 if report.ok else 1


def _pretty_record(rec: dict) -> str:
    lines = []
    if "alpha" in rec:  # projection record
        n = rec["n"]
        alpha = Perm(rec["alpha"])
        sigma = Perm(rec["sigma"])
        lines.append(f"projection {rec['id']} (n={n})")
        lines.append(f"  alpha  = {_cycles_str(alpha)}")
        lines.append(f"  sigma  = {_cycles_str(sigma)}")
        lines.append(f"  components = {rec['components']}, genus = {rec['genus']}")
        lines.append(f"  prime = {rec['prime']}, witness = {rec['witness']}")
    else:  # diagram record
        lines.append(f"diagram on projection {rec['projection_id']}")
        lines.append(f"  bits = {rec['bits']}")
        lines.append(f"  filters = {rec['filters']}")
        lines.append(f"  writhe = {rec['writhe']}")
        if rec.get("bracket") is not None:
            from .bracket import BracketPoly

            lines.append(f"  bracket = {BracketPoly.from_json_dict(rec['bracket'])}")
        lines.append(f"  key = {rec['key']}")
        lines.append(f"  new_at_n = {rec['new_at_n']}")
    return "\n".join(lines)


def _cycles_str(p: Perm) -> str:
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles(p))


def _cmd_show(args: argparse.Namespace) -> int:
    with args.file.open("r", encoding="ascii") as f:
        header = json.loads(f.readline())
        records = [json.loads(line) for line in f if line.strip()]
    print(f"file format {header.get('format')} v{header.get('format_version')}, n={header.get('n')}")
    if args.record_id is not None:
        matches = [
            r
            for r in records
            if str(r.get("id", r.get("projection_id", ""))).startswith(args.record_id)
        ]
        if not matches:
            print(f"no record with id prefix {args.record_id!r}", file=sys.stderr)
            return 1
        for r in matches:
            print(_pretty_record(r))
        return 0
    if not 0 <= args.index < len(records):
        print(f"index {args.index} outside 0..{len(records) - 1}", file=sys.stderr)
        return 1
    print(_pretty_record(records[args.index]))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)

    rc = 0
    if args.seed_check:
        from .selfcheck import run_property_checks

        rc = 0 if run_property_checks(verbose=True) else 1
        if args.command is None or rc != 0:
            return rc
    elif args.command is None:
        parser.print_help()
        return 2

    try:
        if args.command == "projections":
            return _cmd_projections(args)
        if args.command == "diagrams":
            return _cmd_diagrams(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "show":
            return _cmd_show(args)
    except TorustabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return rc


if __name__ == "__main__":
    sys.exit(main())
