"""``septool`` command line."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .dsl import parse_document, rational_arg
from .errors import DSLSyntaxError, SeptoolError
from .report import COMMANDS, StageError, dumps, run_pipeline


def _positive_int(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="septool",
                                description="Separatrix and saddle-node computations on formal vector fields.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("file", nargs="?", help="field document (optional for paper-example)")
    p.add_argument("--trunc", type=_positive_int, help="truncation order (default 24; 40 for paper-example)")
    p.add_argument("--json", metavar="OUT", help="write the report here instead of stdout")
    p.add_argument("--csv", metavar="OUT", help="CSV dump (index: circle samples, diverge: fit data)")
    p.add_argument("--alpha", help="series in z, e.g. 'z^2 + z^3'")
    p.add_argument("--delta", help="scale of alpha, p/q (default 1/10)")
    p.add_argument("--radius", help="initial circle radius for index, p/q (default 1/4)")
    p.add_argument("--function", help="function for check-integral, overrides the document")
    p.add_argument("--max-depth", type=_positive_int, default=8)
    p.add_argument("--pursue-weak", type=int, default=0,
                   help="extra blow-ups along saddle-node weak directions")
    p.add_argument("--version", action="version", version=f"septool {__import__('septool').__version__}")
    return p


def _error(exc: Exception, code: int) -> int:
    body = {"error": {"type": type(getattr(exc, "cause", exc)).__name__,
                      "message": str(exc), "exit_code": code}}
    if isinstance(exc, StageError):
        body["error"]["stage"] = exc.stage
    if isinstance(exc, DSLSyntaxError):
        body["error"]["line"] = exc.line
        body["error"]["column"] = exc.column
    sys.stderr.write(json.dumps(body, sort_keys=True) + "\n")
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        flags = {"trunc": args.trunc, "alpha": args.alpha, "csv": args.csv,
                 "function": args.function, "max_depth": args.max_depth,
                 "pursue_weak": args.pursue_weak}
        if args.delta is not None:
            flags["delta"] = rational_arg(args.delta)
        if args.radius is not None:
            flags["radius"] = rational_arg(args.radius)
        doc = None
        if args.file is None:
            if args.command != "paper-example":
                raise DSLSyntaxError(f"{args.command} needs a field document")
        else:
            try:
                source = Path(args.file).read_text()
            except OSError as exc:
                raise DSLSyntaxError(f"cannot read {args.file}: {exc.strerror}")
            doc = parse_document(source, args.trunc)
        report = run_pipeline(args.command, doc, flags)
    except SeptoolError as exc:
        return _error(exc, exc.exit_code)
    text = dumps(report)
    if args.json:
        Path(args.json).write_text(text)
    else:
        sys.stdout.write(text)
    if args.command == "paper-example" and not report["stages"].get("golden_all_match", True):
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
