"""Command-line front end.

    canaug classify --q 3 --n 12 --k 4 --dmin 6 --dual-min 2 --so euclidean --mode row
    canaug oracle classify --q 2 --n 3 --k 2 --dual-min 2
    canaug oracle equiv A.txt B.txt

Exit codes: 0 success, 1 invalid arguments or configuration, 2 I/O or
parse error, 3 computation refused for exceeding a budget.
"""

from __future__ import annotations

import argparse
import logging
import re
import sys
from pathlib import Path

import numpy as np

from .augment import RunContext, generate
from .code import BudgetExceeded, LinearCode
from .constraints import ValidationError
from .gf import field_make

EXIT_OK, EXIT_INVALID, EXIT_IO, EXIT_BUDGET = 0, 1, 2, 3

_HEADER = re.compile(r"q=(\d+) n=(\d+) k=(\d+)")
_CODE = re.compile(r"code (\d+)")


class UsageError(Exception):
    """Bad command line; reported with exit code 1."""


class CodeFileError(Exception):
    """Malformed code file; the message names the offending line."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# code files

def format_codes(q: int, n: int, k: int, codes) -> str:
    out = [f"q={q} n={n} k={k}"]
    for i, C in enumerate(codes):
        if (C.q, C.n, C.k) != (q, n, k):
            raise ValueError(f"code {i} is a [{C.n},{C.k}]_{C.q} code, file holds [{n},{k}]_{q}")
        out.append(f"code {i}")
        out += ["".join(map(str, row)) for row in C.gen.tolist()]
        out.append("")
    return "\n".join(out) + "\n"


def write_codes(path, codes, q: int | None = None, n: int | None = None,
                k: int | None = None) -> None:
    """Write codes in the line format; parameters default to the first code's."""
    codes = list(codes)
    if q is None or n is None or k is None:
        if not codes:
            raise ValueError("parameters are required when writing an empty file")
        q, n, k = codes[0].q, codes[0].n, codes[0].k
    Path(path).write_text(format_codes(q, n, k, codes))


def parse_codes(text: str, source: str = "<string>") -> list[LinearCode]:
    lines = text.splitlines()

    def fail(lineno: int, msg: str):
        raise CodeFileError(f"{source}:{lineno}: {msg}")

    if not lines:
        fail(1, "empty file, expected header 'q=<q> n=<n> k=<k>'")
    m = _HEADER.fullmatch(lines[0].strip())
    if not m:
        fail(1, f"bad header {lines[0]!r}, expected 'q=<q> n=<n> k=<k>'")
    q, n, k = map(int, m.groups())
    if q not in (2, 3, 4):
        fail(1, f"unsupported field order {q}")
    if k > n:
        fail(1, f"dimension {k} exceeds length {n}")
    F = field_make(q)
    codes = []
    i = 1
    while i < len(lines):
        if not lines[i].strip():
            i += 1
            continue
        m = _CODE.fullmatch(lines[i].strip())
        if not m:
            fail(i + 1, f"expected 'code <index>', got {lines[i]!r}")
        if int(m.group(1)) != len(codes):
            fail(i + 1, f"code index {m.group(1)} out of sequence, expected {len(codes)}")
        rows = []
        for r in range(k):
            ln = i + 2 + r
            if ln > len(lines):
                fail(ln, f"file ends inside code {len(codes)}")
            row = lines[ln - 1].strip()
            if len(row) != n:
                fail(ln, f"row has length {len(row)}, expected {n}")
            bad = [ch for ch in row if ch not in "0123"[:q]]
            if bad:
                fail(ln, f"symbol {bad[0]!r} is not an element of GF({q})")
            rows.append([int(ch) for ch in row])
        ln = i + 1 + k + 1
        if ln <= len(lines) and lines[ln - 1].strip():
            fail(ln, "expected a blank line after the generator rows")
        C = LinearCode(F, np.array(rows, dtype=np.uint8).reshape(k, n), n)
        if len(C.pivots) < k:
            fail(i + 1, f"code {len(codes)} has dependent generator rows")
        codes.append(C)
        i = ln
    return codes


def read_codes(path) -> list[LinearCode]:
    return parse_codes(Path(path).read_text(), str(path))


# ---------------------------------------------------------------------------
# argument parsing

def _add_run_flags(p: argparse.ArgumentParser, full: bool) -> None:
    p.add_argument("--q", type=int, required=True, choices=(2, 3, 4))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--dmin", type=int, default=1)
    p.add_argument("--dual-min", type=int, default=1)
    p.add_argument("--so", choices=("none", "euclidean", "hermitian"), default="none")
    p.add_argument("--divisible", type=int, default=None, metavar="DELTA")
    if full:
        p.add_argument("--mode", choices=("column", "row"), default="column")
        p.add_argument("--seed-file", default=None)
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=("gen", "count"), default="count")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--stats", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="canaug", description="Classify linear codes up to equivalence.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add_run_flags(sub.add_parser("classify", help="run the canonical augmentation search"),
                   full=True)
    o = sub.add_parser("oracle", help="brute-force reference computations for tiny cases")
    osub = o.add_subparsers(dest="oracle_command", required=True, parser_class=_Parser)
    _add_run_flags(osub.add_parser("classify", help="exhaustive classification"), full=False)
    e = osub.add_parser("equiv", help="test two single-code files for equivalence")
    e.add_argument("file_a")
    e.add_argument("file_b")
    return p


# ---------------------------------------------------------------------------
# commands

def run_classify(args, out=sys.stdout, err=sys.stderr) -> int:
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    seeds = read_codes(args.seed_file) if args.seed_file else None
    ctx = RunContext(args.q, args.n, args.k, d=args.dmin, d_dual=args.dual_min, mode=args.mode,
                     so=args.so, divisor=args.divisible, seeds=seeds, jobs=args.jobs)
    result = generate(ctx)
    for w in result.warnings:
        print(f"warning: {w}", file=err)
    if args.format == "gen":
        text = format_codes(args.q, args.n, args.k, result.codes)
        if args.out:
            Path(args.out).write_text(text)
        else:
            out.write(text)
    elif args.out:
        Path(args.out).write_text(f"{result.count}\n")
    if args.stats:
        for line in result.stats.lines():
            print(line, file=err)
    print(f"classified {result.count} codes", file=out)
    return EXIT_OK


def run_oracle(args, out=sys.stdout, err=sys.stderr) -> int:
    from . import oracle

    if args.oracle_command == "classify":
        if not 0 <= args.k <= args.n:
            raise ValidationError(f"need 0 <= k <= n, got n={args.n}, k={args.k}")
        req = oracle.Requirements(args.dmin, args.dual_min, args.so, args.divisible)
        res = oracle.classify_exhaustive(args.q, args.n, args.k, req)
        print(f"classified {res.count} codes", file=out)
        return EXIT_OK
    codes = [read_codes(args.file_a), read_codes(args.file_b)]
    for path, cs in zip((args.file_a, args.file_b), codes):
        if len(cs) != 1:
            raise CodeFileError(f"{path}: expected exactly one code, found {len(cs)}")
    same = oracle.equivalent_bruteforce(codes[0][0], codes[1][0])
    print("equivalent" if same else "not equivalent", file=out)
    return EXIT_OK


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    logging.basicConfig(level=logging.ERROR, format="%(levelname)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
        if args.command == "classify":
            return run_classify(args, out, err)
        return run_oracle(args, out, err)
    except SystemExit as exc:
        # --help
        return int(exc.code or 0)
    except (UsageError, ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INVALID
    except (CodeFileError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_IO
    except BudgetExceeded as exc:
        print(f"refused: {exc}", file=err)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
