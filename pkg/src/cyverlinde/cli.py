"""Command-line front end.

Exit status: 0 when every requested check passes, 1 when a check fails,
2 for usage errors (bad arguments, unknown categories, unparsable words).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

from . import builtins, verlinde
from .category import CategoryData, CategoryError, DEFAULT_TOL, from_dict, transparent_objects, validate
from .dsl import DSLError, evaluate, matrix_to_csv, proposition_suite
from .genus import MissingFRData, NotMultiplicityFree, builtin_fr, validate_fr, verify_handlebody_verlinde

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
TOLERANCE_ENV = "MTC_TOLERANCE"


class UsageError(Exception):
    pass


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def _fmt(z) -> str:
    """Six significant digits; the imaginary part only when it matters."""
    z = complex(z)
    scale = max(abs(z), 1.0)
    if abs(z.imag) <= 1e-12 * scale:
        return f"{z.real:.6g}"
    if abs(z.real) <= 1e-12 * scale:
        return f"{z.imag:.6g}j"
    return f"{z.real:.6g}{z.imag:+.6g}j"


def default_tolerance() -> float:
    raw = os.environ.get(TOLERANCE_ENV)
    if raw is None:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise UsageError(f"{TOLERANCE_ENV}={raw!r} is not a number") from None
    if not tol > 0 or math.isinf(tol):
        raise UsageError(f"{TOLERANCE_ENV} must be a positive finite number")
    return tol


def _is_file_source(source: str) -> bool:
    return source.endswith(".json") or Path(source).is_file()


def load_category(source: str, check: bool = True) -> CategoryData:
    """A builtin name (``fibonacci``, ``su2(3)``, ``fibonacci*ising``) or a JSON file."""
    path = Path(source)
    if _is_file_source(source):
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise UsageError(f"cannot read {source}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise UsageError(f"{source}: invalid JSON ({exc})") from None
        try:
            cat = from_dict(doc)
        except (CategoryError, KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"{source}: {exc}") from None
        if check:
            report = validate(cat)
            if not report.passed:
                names = ", ".join(c.name for c in report.failures())
                raise UsageError(f"{source}: category fails validation ({names}); run 'validate' for details")
        return cat
    try:
        return builtins.make(source)
    except CategoryError as exc:
        raise UsageError(str(exc)) from None


def _labels(cat: CategoryData, text: str | None) -> list[int]:
    if not text:
        return []
    out = []
    for item in text.split(","):
        item = item.strip()
        lab = item if item in cat.labels or not item.isdigit() else int(item)
        try:
            out.append(cat.index(lab))
        except CategoryError as exc:
            raise UsageError(str(exc)) from None
    return out


# -- output -------------------------------------------------------------------
class Output:
    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def write(self, text: str):
        self.stream.write(text if text.endswith("\n") else text + "\n")

    def table(self, rows: list[dict], summary: dict, text_lines: list[str]):
        if self.fmt == "json":
            self.write(json.dumps({**summary, "checks": rows}))
        elif self.fmt == "csv":
            buf = io.StringIO()
            if rows:
                w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
                w.writeheader()
                w.writerows(rows)
            self.write(buf.getvalue())
        else:
            self.write("\n".join(text_lines))

    def record(self, doc: dict, text: str):
        if self.fmt == "json":
            self.write(json.dumps(doc))
        elif self.fmt == "csv":
            buf = io.StringIO()
            w = csv.DictWriter(buf, fieldnames=list(doc), lineterminator="\n")
            w.writeheader()
            w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in doc.items()})
            self.write(buf.getvalue())
        else:
            self.write(text)


# -- commands -------------------------------------------------------------------
def cmd_list(args, out: Output) -> int:
    rows = [{"name": n} for n in builtins.NAMES]
    out.table(rows, {"builtins": list(builtins.NAMES)}, list(builtins.NAMES))
    return EXIT_OK


def _check_rows(report, prefix: str = "") -> list[dict]:
    return [{"check": prefix + c.name, "status": _status(c.passed), "max_residual": c.max_residual}
            for c in report.checks]


def cmd_validate(args, out: Output) -> int:
    cat = load_category(args.category, check=False)
    report = validate(cat, args.tolerance)
    rows = _check_rows(report)
    notes = []
    if not report.fatal and not _is_file_source(args.category):
        try:
            rows += _check_rows(validate_fr(builtin_fr(cat), args.tolerance), "fr_")
        except (MissingFRData, NotMultiplicityFree) as exc:
            notes.append(f"F/R checks skipped: {exc}")
    ok = not report.fatal and all(r["status"] == "pass" for r in rows)
    lines = [f"{r['check']:<28} {r['status']}  max_residual={_fmt(r['max_residual'])}" for r in rows]
    lines += notes + [f"{cat.name}: {_status(ok)}"]
    out.table(rows, {"category": cat.name, "status": _status(ok)}, lines)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verlinde(args, out: Output) -> int:
    cat = load_category(args.category)
    fwd = verlinde.verify_verlinde(cat, args.tolerance)
    rev = verlinde.verify_reverse(cat, args.tolerance)
    res = max(fwd.max_residual, rev.max_residual)
    ok = fwd.passed and rev.passed
    transparent = [cat.labels[j] for j in transparent_objects(cat, args.tolerance)]
    doc = {"verlinde": _status(fwd.passed), "reverse": _status(rev.passed), "max_residual": res,
           "transparent": transparent}
    text = "\n".join([
        f"verlinde  {_status(fwd.passed)}  max_residual={_fmt(fwd.max_residual)}",
        f"reverse   {_status(rev.passed)}  max_residual={_fmt(rev.max_residual)}",
        f"transparent objects: {', '.join(transparent)}",
    ])
    out.record(doc, text)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_genus(args, out: Output) -> int:
    cat = load_category(args.category)
    if args.genus < 0:
        raise UsageError("genus must be non-negative")
    ins = _labels(cat, args.insert)
    tol = args.tolerance if args.tolerance_given else verlinde.INTEGER_TOL
    try:
        formula = verlinde.genus_dim_formula(cat, args.genus, ins)
        brute = verlinde.genus_dim_bruteforce(cat, args.genus, ins)
    except (verlinde.ZeroSEntry, verlinde.SizeGuardExceeded, ValueError) as exc:
        raise UsageError(str(exc)) from None
    ok = abs(formula - brute) < tol
    doc = {"genus": args.genus, "insertions": [cat.labels[i] for i in ins],
           "formula": formula.real, "formula_imag": formula.imag, "bruteforce": brute, "status": _status(ok)}
    out.record(doc, f"formula {formula.real:.6f}, bruteforce {brute}, {_status(ok)}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_eval(args, out: Output) -> int:
    cat = load_category(args.category)
    try:
        emap = evaluate(args.expr, cat)
    except DSLError as exc:
        raise UsageError(f"{exc}\n  {args.expr}\n  {' ' * (exc.pos or 0)}^") from None
    if args.apply is not None:
        labels = _labels(cat, args.apply)
        try:
            mat = emap.apply(labels).reshape(-1, 1)
        except DSLError as exc:
            raise UsageError(str(exc)) from None
    else:
        mat = emap.matrix
    if out.fmt == "json":
        doc = {"expr": args.expr, "signature": list(emap.signature), "shape": list(mat.shape),
               "data": [[[float(z.real), float(z.imag)] for z in row] for row in mat]}
        out.write(json.dumps(doc))
    elif out.fmt == "csv":
        out.write(matrix_to_csv(mat))
    else:
        width = max((len(_fmt(z)) for z in mat.flat), default=1)
        out.write("\n".join("  ".join(_fmt(z).rjust(width) for z in row) for row in mat))
    return EXIT_OK


def cmd_props(args, out: Output) -> int:
    cat = load_category(args.category)
    suite = proposition_suite(cat, args.tolerance)
    rows = [{"identity": name, "lhs": r.lhs, "rhs": r.rhs, "status": _status(r.passed),
             "max_residual": r.max_residual} for name, r in suite.results]
    lines = [f"{r['identity']:<24} {r['status']}  max_residual={_fmt(r['max_residual'])}" for r in rows]
    lines.append(f"{cat.name}: {_status(suite.passed)}")
    out.table(rows, {"category": cat.name, "status": _status(suite.passed),
                     "max_residual": suite.max_residual}, lines)
    return EXIT_OK if suite.passed else EXIT_FAIL


def cmd_handlebody(args, out: Output) -> int:
    cat = load_category(args.category)
    if args.genus < 1:
        raise UsageError("genus must be at least 1")
    try:
        rep = verify_handlebody_verlinde(cat, args.genus, args.tolerance)
    except (MissingFRData, NotMultiplicityFree) as exc:
        raise UsageError(str(exc)) from None
    doc = {"genus": rep.g, "status": _status(rep.passed), "max_residual": rep.max_residual,
           "sbar_residual": rep.residuals["sbar"], "s_residual": rep.residuals["s"],
           "basis_size": rep.basis_size, "seconds": rep.seconds}
    text = (f"genus {rep.g}: {_status(rep.passed)}  max_residual={_fmt(rep.max_residual)}  "
            f"basis={rep.basis_size}  time={rep.seconds:.3g}s")
    out.record(doc, text)
    return EXIT_OK if rep.passed else EXIT_FAIL


# -- parser -------------------------------------------------------------------
class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not v > 0 or math.isinf(v):
        raise argparse.ArgumentTypeError("tolerance must be positive and finite")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--tolerance", type=_positive, default=None,
                        help=f"check tolerance (default: ${TOLERANCE_ENV} or {DEFAULT_TOL:g})")

    parser = _Parser(prog="mtc", description="Verlinde algebra checks for finite (pre)modular categories.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help, cat=True):
        p = sub.add_parser(name, parents=[common], help=help)
        if cat:
            p.add_argument("category", help="builtin name, e.g. fibonacci or su2(3), or a JSON file")
        p.set_defaults(func=func)
        return p

    add("list", cmd_list, "list builtin categories", cat=False)
    add("validate", cmd_validate, "check category axioms and F/R coherence")
    add("verlinde", cmd_verlinde, "check the Verlinde formula and its reverse")
    p = add("genus", cmd_genus, "genus-g state space dimension, formula against brute force")
    p.add_argument("-g", "--genus", type=int, required=True)
    p.add_argument("-i", "--insert", default=None, help="comma-separated insertion labels")
    p = add("eval", cmd_eval, "evaluate a cobordism word")
    p.add_argument("expr")
    p.add_argument("--apply", default=None, help="comma-separated input labels")
    add("props", cmd_props, "run the cobordism identity suite")
    p = add("handlebody", cmd_handlebody, "check the genus-g Verlinde morphism property")
    p.add_argument("-g", "--genus", type=int, required=True)
    return parser


def main(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.tolerance_given = args.tolerance is not None
        if args.tolerance is None:
            args.tolerance = default_tolerance()
        return args.func(args, Output(args.format, stdout))
    except UsageError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
