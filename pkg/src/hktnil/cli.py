"""``hktnil`` command line.

Exit codes: 0 success, 1 a mathematical check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .constructors import CATALOG_NAMES, catalog, family_t, family_ts, to_jmap
from .errors import HktError, PreconditionError
from .exactlin import fmt_scalar, to_scalar
from .expcoords import metric_at, parse_point
from .fileformat import AlgebraFile, AlgebraFileError, dump_algebra, parse_algebra_file
from .invariants import compare
from .liealg import validate
from .report import build_report, to_human, to_json

OK, CHECK_FAILED, BAD_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _read(path: str, *, check_jacobi: bool = True) -> AlgebraFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_algebra_file(text, check_jacobi=check_jacobi)
    except AlgebraFileError as exc:
        raise InputError(f"{path}: {exc}") from None
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _scalar(text: str):
    try:
        return to_scalar(text)
    except (ValueError, TypeError, ZeroDivisionError):
        raise InputError(f"{text!r} is not a rational") from None


def cmd_validate(args) -> int:
    f = _read(args.file, check_jacobi=False)
    report = validate(f.algebra)
    print(report.summary())
    return OK if report.ok else CHECK_FAILED


def cmd_classify(args) -> int:
    f = _read(args.file)
    if f.structure is None:
        raise InputError(f"{args.file}: no hypercomplex structure (\"J\") given")
    rep = build_report(f.algebra, f.structure)
    print(rep["classification"])
    return OK if rep["hkt"]["hkt"] else CHECK_FAILED


def cmd_report(args) -> int:
    f = _read(args.file)
    rep = build_report(f.algebra, f.structure)
    sys.stdout.write(to_json(rep) if args.format == "json" else to_human(rep))
    if "hkt" in rep and not rep["hkt"]["hkt"]:
        return CHECK_FAILED
    return OK


def cmd_catalog(args) -> int:
    L, H = catalog(args.name)
    _emit(dump_algebra(L, H, args.name), args.out)
    return OK


def cmd_family(args) -> int:
    t = _scalar(args.t)
    try:
        if args.kind == "t":
            L, H = family_t(args.l, t)
            name = f"N_t l={args.l} t={fmt_scalar(t)}"
        else:
            if args.s is None:
                raise InputError("family ts needs --s")
            s = _scalar(args.s)
            L, H = family_ts(args.l, t, s)
            name = f"N_ts l={args.l} t={fmt_scalar(t)} s={fmt_scalar(s)}"
    except PreconditionError as exc:
        raise InputError(str(exc)) from None
    _emit(dump_algebra(L, H, name), args.out)
    return OK


def cmd_invariants(args) -> int:
    files = [_read(p) for p in (args.file1, args.file2)]
    jmaps = []
    for path, f in zip((args.file1, args.file2), files):
        if f.structure is None:
            raise InputError(f"{path}: no hypercomplex structure (\"J\") given")
        try:
            jmaps.append(to_jmap(f.algebra, f.structure))
        except PreconditionError as exc:
            print(f"{path}: {exc}", file=sys.stderr)
            return CHECK_FAILED
    print(compare(*jmaps))
    return OK


def cmd_coords(args) -> int:
    if args.name in CATALOG_NAMES:
        L, _ = catalog(args.name)
    else:
        L = _read(args.name).algebra
    try:
        p = parse_point(L, args.point)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"bad point: {exc}") from None
    G = metric_at(L, None, p)
    for row in G:
        print(" ".join(fmt_scalar(x) for x in row))
    return OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hktnil", description="Exact HKT geometry of nilpotent Lie algebras.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the Jacobi identity and the metric")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("classify", help="one-line nilpotency / hypercomplex / HKT summary")
    p.add_argument("file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("report", help="full report")
    p.add_argument("file")
    p.add_argument("--format", choices=("human", "json"), default="human")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("catalog", help="write a catalog algebra file")
    p.add_argument("name", choices=CATALOG_NAMES)
    p.add_argument("--out")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("family", help="write a member of a deformation family")
    p.add_argument("kind", choices=("t", "ts"))
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--t", required=True)
    p.add_argument("--s")
    p.add_argument("--out")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("invariants", help="non-isometry certificate for two j-map algebras")
    p.add_argument("file1")
    p.add_argument("file2")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("coords", help="metric matrix at a point in exponential coordinates")
    p.add_argument("name", help="catalog name or algebra file")
    p.add_argument("--point", required=True, help="x1,..,x_p,y1,..,y_q")
    p.set_defaults(func=cmd_coords)
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except HktError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
