"""Command-line entry points.

Subcommands:
  check-hopf <cfg>                       axiom report for every algebra in a model file
  verify <cfg> --suite NAME [...]        run named check suites, optionally write a report
  protected-dim <cfg>                    rank of the protected projector
  transport <cfg> --path "..." ...       build a transport operator, optionally dump it
  remove-defect <cfg> --defect ID ...    remove a transparent defect line
  write-models <dir>                     write the built-in model library as JSON

Exit codes: 0 ok, 1 check failed, 2 usage/config error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import HopflatError, UsageError
from .graphs import Site, ThickPath
from .hopf import check_hopf
from .library import load_model, write_library
from .linalg import rank
from .model import remove_transparent_defect, transport_operator
from .scalars import EPS_TOL, FIELDS
from .suites import SUITE_NAMES, report_to_json, run_suite


def _parse_site(text):
    try:
        vertex, gap = text.rsplit(":", 1)
        return Site(vertex, int(gap))
    except ValueError:
        raise UsageError(f"bad site {text!r}; expected like 'v1:0'") from None


def _dump_operator(op, path):
    entries = []
    for j in range(op.domain.dim):
        for i, c in sorted(op.col(j).items()):
            z = complex(c)
            entries.append([i, j, z.real, z.imag])
    doc = {"rows": op.codomain.dim, "cols": op.domain.dim, "entries": entries}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def cmd_check_hopf(args):
    model = load_model(args.config, field=FIELDS[args.scalars] if args.scalars else None)
    failed = False
    names = set()
    def algebras():
        for b in sorted(model.bulk_algebras):
            yield model.bulk_algebras[b]
            yield model.bulk_algebras[b].dual()
            yield model.doubles[b]
            yield model.dh_duals[b]
        for d in sorted(model.defect_algebras):
            yield model.defect_algebras[d]
    for A in algebras():
        if A.name in names:
            continue
        names.add(A.name)
        rep = check_hopf(A, args.tol)
        status = "ok" if rep.ok else "FAIL"
        print(f"{A.name:24s} dim {A.dim:4d}  max deviation {rep.max_deviation:.3e}  {status}")
        if not rep.ok:
            failed = True
            for name, dev in rep.failures():
                print(f"    {name}: {dev:.3e}")
    return 1 if failed else 0


def cmd_verify(args):
    model = load_model(args.config, field=FIELDS[args.scalars] if args.scalars else None)
    report = run_suite(model, args.suite, tol=args.tol, seed=args.seed,
                       timings=args.timings)
    for check in report["checks"]:
        dev = check.get("max_deviation")
        dev_s = "-" if dev is None else f"{dev:.3e}"
        print(f"{check['status']:13s} {dev_s:>10s}  {check['check_id']}")
    print(f"{len(report['checks'])} checks, {report['failed']} failed "
          f"(model {report['model']}, suites: {', '.join(report['suites'])})")
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(report_to_json(report))
    return 1 if report["failed"] else 0


def cmd_protected_dim(args):
    model = load_model(args.config, field=FIELDS[args.scalars] if args.scalars else None)
    print(model.protected_dim(args.tol))
    return 0


def cmd_transport(args):
    model = load_model(args.config, field=FIELDS[args.scalars] if args.scalars else None)
    path = ThickPath.from_text(model.graph, args.path)
    if args.src and path.start != _parse_site(args.src):
        raise UsageError(f"path starts at {path.start}, not {args.src}")
    if args.dst and path.end != _parse_site(args.dst):
        raise UsageError(f"path ends at {path.end}, not {args.dst}")
    op = transport_operator(model, path)
    print(f"transport along {args.path}: {path.start} -> {path.end} "
          f"({'right' if path.ends_right else 'left'}-ending) on dim "
          f"{model.space.dim}")
    if args.dump:
        _dump_operator(op, args.dump)
        print(f"wrote {args.dump}")
    return 0


def cmd_remove_defect(args):
    from .library import model_to_json

    model = load_model(args.config, field=FIELDS[args.scalars] if args.scalars else None)
    model2, _, site_map = remove_transparent_defect(model, args.defect)
    for v, s in sorted(site_map.items()):
        print(f"defect vertex {v}: merged site {s}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(model_to_json(model2), fh, indent=1, sort_keys=True)
            fh.write("\n")
        print(f"wrote {args.out} (dim {model2.space.dim})")
    return 0


def cmd_write_models(args):
    for path in write_library(args.directory,
                              FIELDS[args.scalars] if args.scalars else FIELDS["exact"]):
        print(path)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hopflat",
        description="Lattice models from Hopf-algebra data: build and verify")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("config", help="model JSON file")
        p.add_argument("--tol", type=float, default=EPS_TOL)
        p.add_argument("--scalars", choices=sorted(FIELDS),
                       help="override the scalar field of the file")

    p = sub.add_parser("check-hopf", help="axiom report for all algebras")
    common(p)
    p.set_defaults(fn=cmd_check_hopf)

    p = sub.add_parser("verify", help="run verification suites")
    common(p)
    p.add_argument("--suite", action="append", required=True,
                   help=f"one of {', '.join(SUITE_NAMES)}, or 'all'; repeatable")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--report", help="write the JSON report here")
    p.add_argument("--timings", action="store_true",
                   help="include wall times in the report (breaks "
                        "bit-reproducibility)")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("protected-dim", help="rank of the protected projector")
    common(p)
    p.set_defaults(fn=cmd_protected_dim)

    p = sub.add_parser("transport", help="build a transport operator")
    common(p)
    p.add_argument("--path", required=True,
                   help="letters in composition order, e.g. 'e3^-L e2^t e1^R'")
    p.add_argument("--from", dest="src", help="expected start site, like v1:0")
    p.add_argument("--to", dest="dst", help="expected end site")
    p.add_argument("--dump", help="write the operator as sparse-matrix JSON")
    p.set_defaults(fn=cmd_transport)

    p = sub.add_parser("remove-defect", help="remove a transparent defect line")
    common(p)
    p.add_argument("--defect", required=True, help="defect line id")
    p.add_argument("--out", help="write the merged model here")
    p.set_defaults(fn=cmd_remove_defect)

    p = sub.add_parser("write-models", help="write the built-in model library")
    p.add_argument("directory")
    p.add_argument("--scalars", choices=sorted(FIELDS))
    p.set_defaults(fn=cmd_write_models)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except HopflatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
