"""Command line entry point: ``kernel check|eval|harness``."""

from __future__ import annotations

import argparse
import json
import sys

from .driver import EXIT_CHECK, EXIT_OK, EXIT_RESOURCE, Options, emit, run_file
from .reduction import DEFAULT_FUEL


def _common(p):
    p.add_argument("--fuel", type=int, default=DEFAULT_FUEL,
                   help="reduction step budget per declaration (default %(default)s)")
    p.add_argument("--trace", action="store_true", help="print every reduction step")
    p.add_argument("--json", action="store_true", help="emit diagnostics as JSON lines")
    p.add_argument("--keep-going", action="store_true",
                   help="continue after the first failing declaration")


def build_parser():
    ap = argparse.ArgumentParser(prog="kernel", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    chk = sub.add_parser("check", help="check definitions and directives")
    chk.add_argument("files", nargs="+")
    _common(chk)

    ev = sub.add_parser("eval", help="check a file and print the value of each #eval")
    ev.add_argument("file")
    ev.add_argument("--deep", action="store_true",
                    help="print full normal forms instead of weak head normal forms")
    _common(ev)

    hs = sub.add_parser("harness", help="run the property suites on generated terms")
    hs.add_argument("--seed", type=int, default=0)
    hs.add_argument("--count", type=int, default=100)
    hs.add_argument("--suite", action="append", default=None,
                    help="restrict to a suite (repeatable)")
    _common(hs)
    return ap


def _files(args, files, show_values):
    opts = Options(fuel=args.fuel, trace=args.trace, keep_going=args.keep_going,
                   deep=getattr(args, "deep", False))
    code = EXIT_OK
    for path in files:
        result, text = run_file(path, opts)
        if not show_values:
            result.diagnostics = [d for d in result.diagnostics if d.severity != "info"]
        emit(result, text, args.json)
        code = max(code, result.exit_code)
        if code and not args.keep_going:
            break
    if code == EXIT_OK and not args.json and not show_values:
        print(f"ok: {len(files)} file(s) checked")
    return code


def _harness(args):
    from .harness import SUITES, harness

    suites = args.suite or list(SUITES)
    unknown = [s for s in suites if s not in SUITES]
    if unknown:
        print(f"unknown suite {unknown[0]!r}; choose from {', '.join(SUITES)}",
              file=sys.stderr)
        return EXIT_RESOURCE
    results = harness(args.seed, args.count, suites)
    failed = False
    for r in results:
        # the mutant is expected to be caught by the eta suite
        expect_fail = r.name == "eta-mutant"
        good = (not r.ok) if expect_fail else r.ok
        if expect_fail and r.total == 0:
            good = True
        failed |= not good
        if args.json:
            out = r.to_json()
            out["expected_failure"] = expect_fail
            out["status"] = "pass" if good else "fail"
            print(json.dumps(out))
            continue
        status = "PASS" if good else "FAIL"
        note = " (mutant caught)" if expect_fail and good and r.total else ""
        print(f"{status} {r.name}: {r.passed}/{r.total} passed, {r.skipped} skipped, "
              f"{len(r.failures)} failed, {r.seconds:.2f}s{note}")
        if not expect_fail:
            for f in r.failures[:5]:
                print(f"  #{f.index}: {f.message}\n    witness: {f.witness}")
    if not results and not args.json:
        print("no cases run")
    return EXIT_CHECK if failed else EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))
    try:
        if args.command == "check":
            return _files(args, args.files, show_values=False)
        if args.command == "eval":
            return _files(args, [args.file], show_values=True)
        return _harness(args)
    except KeyboardInterrupt:
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
