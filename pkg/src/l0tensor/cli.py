"""Command-line front end.

    l0tensor check DOC
    l0tensor norm DOC REF
    l0tensor tensor {pi,eps,hs} DOC REF
    l0tensor verify THEOREM-ID [--seed S] [--cases N] [--tol Q]
    l0tensor report [--seed S] [--cases N]

Exit status: 0 when every check passes, 1 on a property failure, 2 on an
input error (parse error, unresolved reference, unsupported norm kinds).
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Sequence

from .checks import evaluate, format_value, norm_values
from .document import WorkDocument, load_document
from .errors import DocumentError, InconsistentFamily, UnsupportedKinds
from .rational import parse_rational
from .theorems import THEOREMS, verify

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
REPORT_CASES = 20


class InputError(Exception):
    pass


def _load(path: str) -> WorkDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    return load_document(text)


def _assertion_lines(doc: WorkDocument, keep, out) -> bool:
    """Evaluate the selected assertions; True iff all pass."""
    ok = True
    for i, a in enumerate(doc.assertions):
        if not keep(a):
            continue
        passed, detail = evaluate(doc, a, f"assertions[{i}]")
        name = a.get("name", a.get("check"))
        print(f"CASE {i}: {'PASS' if passed else 'FAIL'} {name}: {detail}", file=out)
        ok = ok and passed
    return ok


def cmd_check(args, out) -> int:
    doc = _load(args.doc)
    if not doc.assertions:
        print("no assertions", file=out)
    return EXIT_PASS if _assertion_lines(doc, lambda a: True, out) else EXIT_FAIL


def _print_values(doc: WorkDocument, check: str, ref: str, space, values, out):
    for atom, v in zip(space.ids, values):
        print(f"{check}({ref}) at {atom}: {format_value(v)}", file=out)


def cmd_norm(args, out) -> int:
    doc = _load(args.doc)
    section, obj = doc.find(args.ref)
    check = {"elements": "norm", "homs": "hom_norm", "bilinears": "bilinear_norm"}.get(section)
    if check is None:
        raise InputError(f"{args.ref!r} is in {section}; norm takes an element, homomorphism or bilinear form")
    space = obj.module.space if section == "elements" else (obj.source.space if section == "homs" else obj.left.space)
    _print_values(doc, check, args.ref, space, norm_values(doc, check, args.ref), out)
    ok = _assertion_lines(doc, lambda a: a.get("check") == check and a.get("ref") == args.ref, out)
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_tensor(args, out) -> int:
    doc = _load(args.doc)
    alpha = doc.get("tensors", args.ref, "ref")
    _print_values(doc, args.flavor, args.ref, alpha.left.space, norm_values(doc, args.flavor, args.ref), out)
    ok = _assertion_lines(doc, lambda a: a.get("check") == args.flavor and a.get("ref") == args.ref, out)
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_verify(args, out) -> int:
    if args.theorem not in THEOREMS:
        raise InputError(f"unknown theorem id {args.theorem!r}; known: {', '.join(THEOREMS)}")
    if args.cases < 1:
        raise InputError("--cases must be at least 1")
    results = verify(args.theorem, args.seed, args.cases, args.tol)
    passed = 0
    for r in results:
        print(f"CASE {r.index}: {'PASS' if r.ok else 'FAIL'} {r.detail}", file=out)
        if r.ok:
            passed += 1
        else:
            print(f"COUNTEREXAMPLE {r.index}: {r.document}", file=out)
    print(f"{args.theorem}: {passed}/{len(results)} passed", file=out)
    return EXIT_PASS if passed == len(results) else EXIT_FAIL


def cmd_report(args, out) -> int:
    ok = True
    for tid, th in THEOREMS.items():
        results = verify(tid, args.seed, args.cases)
        passed = sum(r.ok for r in results)
        status = "PASS" if passed == len(results) else "FAIL"
        print(f"{tid}: {status} {passed}/{len(results)} {th.summary}", file=out)
        ok = ok and passed == len(results)
    return EXIT_PASS if ok else EXIT_FAIL


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="l0tensor", description="Pointwise norms on tensor products of L0-modules.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="evaluate every assertion in a document")
    c.add_argument("doc")
    c.set_defaults(func=cmd_check)

    n = sub.add_parser("norm", help="pointwise norm of an element, homomorphism or bilinear form")
    n.add_argument("doc")
    n.add_argument("ref")
    n.set_defaults(func=cmd_norm)

    t = sub.add_parser("tensor", help="projective, injective or Hilbert-Schmidt norm of a tensor")
    t.add_argument("flavor", choices=("pi", "eps", "hs"))
    t.add_argument("doc")
    t.add_argument("ref")
    t.set_defaults(func=cmd_tensor)

    v = sub.add_parser("verify", help="run a theorem's randomized property suite")
    v.add_argument("theorem")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--cases", type=int, default=50)
    v.add_argument("--tol", type=_rational_arg, default=None,
                   help="tolerance for suites with float or certified-sum comparisons")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("report", help="run every theorem suite")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--cases", type=int, default=REPORT_CASES)
    r.set_defaults(func=cmd_report)
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_PASS
    try:
        return args.func(args, out)
    except (DocumentError, InputError, UnsupportedKinds, InconsistentFamily) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
