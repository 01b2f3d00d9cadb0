"""Command-line front end.

Subcommands: orbits, classify, beauville-dim, candidates, verify-paper.
JSON output is the stable machine interface; text output is for humans.
Exit codes: 0 success, 1 verification failure, 2 resource or input error.
The BEAUVILLE_MAX_ORDER environment variable overrides the default group
order bound of 2000.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .braid import orbit_classes
from .catalog import build
from .classify import beauville_dimension
from .errors import InputError, ResourceLimitError
from .invariants import candidate_tuples
from .reports import OracleMismatchError, classify_ub
from .verification import run_checks

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_RESOURCE = 2


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _parse_type(raw: str) -> tuple[int, int, int]:
    try:
        parts = tuple(int(v) for v in raw.split(","))
    except ValueError as exc:
        raise InputError(f"bad type {raw!r}; expected like 5,5,5") from exc
    if len(parts) != 3:
        raise InputError(f"a type needs three entries, got {raw!r}")
    return parts  # type: ignore[return-value]


def cmd_orbits(args: argparse.Namespace) -> int:
    G = build(args.group)
    type_filter = _parse_type(args.type) if args.type else None
    classification = orbit_classes(G, type_filter=type_filter)
    blocks = []
    for cls in classification.classes:
        blocks.append(
            {
                "group": args.group,
                "type": list(cls.type),
                "genus": cls.genus,
                "orbit_size": cls.class_size,
                "representative": list(cls.representative.words()),
            }
        )
    payload = {"group": args.group, "classes": blocks, "count": len(blocks)}
    if args.format == "json":
        _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", args.output)
    else:
        lines = [f"{len(blocks)} orbit class(es) for {args.group}"]
        for b in blocks:
            lines.append(
                f"  type {b['type']} genus {b['genus']} size {b['orbit_size']}"
                f" rep {b['representative']}"
            )
        _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    G = build(args.group)
    types = [_parse_type(t) for t in args.type] if args.type else None
    report = classify_ub(
        G,
        args.n,
        chi=args.chi,
        types=types,
        kernel_policy=args.kernels,
        oracle=args.oracle,
        jobs=args.jobs,
        group_spec=args.group,
    )
    if args.format == "json":
        _emit(report.to_json(), args.output)
    elif args.format == "csv":
        rows = ["kernel_orders,types,genera,chi,canonical_key"]
        for block in report.kernel_orbits:
            for c in block.classes:
                rows.append(
                    ";".join(str(o) for o in block.kernel_orders)
                    + ","
                    + ";".join("".join(map(str, t)) for t in c.type_tuple)
                    + ","
                    + ";".join(str(g) for g in c.genera)
                    + f",{c.chi},"
                    + "-".join(str(k) for k in c.canonical_key)
                )
        _emit("\n".join(rows) + "\n", args.output)
    else:
        lines = [f"{report.total_count} class(es) for {args.group}, n = {args.n}"]
        for block in report.kernel_orbits:
            if not block.classes and len(report.kernel_orbits) > 1:
                continue
            lines.append(f"  kernel orders {list(block.kernel_orders)}: {block.total_count}")
            for types_, chi, count in block.cells():
                lines.append(f"    cell types {[list(t) for t in types_]} chi {chi}: {count}")
        _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_beauville_dim(args: argparse.Namespace) -> int:
    G = build(args.group)
    got = beauville_dimension(G, args.nmax)
    if got is None:
        text = f"d({args.group}) not found for n <= {args.nmax}; >= {args.nmax + 1} not ruled out\n"
    else:
        text = f"d({args.group}) = {got}\n"
    _emit(text, args.output)
    return EXIT_OK


def cmd_candidates(args: argparse.Namespace) -> int:
    rows = ["N,g1,g2,g3,T1,T2,T3"]
    for cand in candidate_tuples(args.chi):
        t1, t2, t3 = cand.types
        rows.append(
            f"{cand.group_order},{cand.genera[0]},{cand.genera[1]},{cand.genera[2]},"
            f"{'-'.join(map(str, t1))},{'-'.join(map(str, t2))},{'-'.join(map(str, t3))}"
        )
    _emit("\n".join(rows) + "\n", args.output)
    return EXIT_OK


def cmd_verify_paper(args: argparse.Namespace) -> int:
    n_values = tuple(int(v) for v in args.nvalues.split(",")) if args.nvalues else None
    results = run_checks(
        names=args.checks or None,
        include=args.include or (),
        n_values=n_values,
        groupfiles=Path(args.groupfiles) if args.groupfiles else None,
    )
    if args.format == "json":
        payload = [
            {"name": r.name, "status": r.status, "detail": r.detail, "seconds": round(r.seconds, 2)}
            for r in results
        ]
        _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", args.output)
    else:
        lines = []
        for r in results:
            lines.append(f"[{r.status.upper():7s}] {r.name} ({r.seconds:.1f}s)")
            for piece in r.detail.split("; "):
                lines.append(f"    {piece}")
        failed = sum(1 for r in results if r.status == "fail")
        lines.append(
            f"{len(results)} checks: "
            f"{sum(1 for r in results if r.status == 'pass')} passed, {failed} failed, "
            f"{sum(1 for r in results if r.status == 'partial')} partial, "
            f"{sum(1 for r in results if r.status == 'skip')} skipped"
        )
        _emit("\n".join(lines) + "\n", args.output)
    return EXIT_VERIFICATION if any(r.status == "fail" for r in results) else EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="beauville",
        description="Classify unmixed Beauville n-folds of a finite group.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("orbits", help="Aut x B3 orbit classes of hyperbolic generating triples")
    p.add_argument("--group", required=True, help="group spec, e.g. \"C5^2\" or 'File(\"g.gf\")'")
    p.add_argument("--type", help="type filter as a multiset, e.g. 5,5,5")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--output", "-o", help="write the report to a file")
    p.set_defaults(fn=cmd_orbits)

    p = sub.add_parser("classify", help="biholomorphism classes of unmixed Beauville n-folds")
    p.add_argument("--group", required=True)
    p.add_argument("--n", type=int, required=True, help="number of curve factors, >= 2")
    p.add_argument("--chi", type=int, help="restrict to this holomorphic Euler number")
    p.add_argument(
        "--type",
        action="append",
        help="type of one factor, e.g. 2,5,4; give n times to fix the whole tuple",
    )
    p.add_argument(
        "--kernels",
        choices=("all", "trivial"),
        default="all",
        help="'trivial' restricts to absolutely faithful actions",
    )
    p.add_argument("--oracle", action="store_true", help="cross-check against brute force")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")
    p.add_argument("--output", "-o")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("beauville-dim", help="least n with a structure, up to --nmax")
    p.add_argument("--group", required=True)
    p.add_argument("--nmax", type=int, default=3)
    p.add_argument("--output", "-o")
    p.set_defaults(fn=cmd_beauville_dim)

    p = sub.add_parser("candidates", help="arithmetic candidate tuples for a chi, as CSV")
    p.add_argument("--chi", type=int, required=True)
    p.add_argument("--output", "-o")
    p.set_defaults(fn=cmd_candidates)

    p = sub.add_parser("verify-paper", help="recompute the published classification tables")
    p.add_argument("--checks", nargs="*", help="subset of checks to run")
    p.add_argument(
        "--include",
        action="append",
        default=[],
        help="enable gated extras: z5cubed, znconstruction",
    )
    p.add_argument("--nvalues", help="n values for the explicit Z_n^3 construction, e.g. 5,7")
    p.add_argument("--groupfiles", help="directory of .gf exports extending the sweeps")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--output", "-o")
    p.set_defaults(fn=cmd_verify_paper)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except OracleMismatchError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    except (InputError, ResourceLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
