"""Command-line front end: ``redsparse {stats,convert,gen,sweep,bench}``.

Exit codes: 0 success, 1 internal error, 2 usage or file error.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from contextlib import contextmanager
from pathlib import Path

from . import bench, io
from .analytics import GIB, SWEEP_COLUMNS, compression_report, size_sweep, sweep_row
from .core import FLOAT32, CooMatrix, Dims, IndexWidthConfig, SparseFormatError, ValueKind
from .csc import csc_from_coo, csc_to_coo
from .ivcsc import IvcscMatrix, ivcsc_from_coo, ivcsc_to_coo
from .matgen import GenSpec, generate
from .vcsc import VcscMatrix, vcsc_from_coo, vcsc_to_coo


class UsageError(Exception):
    """Bad flags, paths or inputs; maps to exit code 2."""


def _color(text: str, code: str) -> str:
    if os.environ.get("IVSK_NO_COLOR") or not sys.stdout.isatty():
        return text
    return f"\033[{code}m{text}\033[0m"


def _detect_format(path: Path, override: str | None) -> str:
    fmt = override or path.suffix.lstrip(".").lower()
    if fmt not in ("mtx", "ivsk"):
        raise UsageError(f"unsupported input format {fmt!r} for {path} (expected .mtx or .ivsk)")
    return fmt


def load_coo(path: Path, fmt_override: str | None = None, kind: ValueKind | None = None) -> CooMatrix:
    fmt = _detect_format(path, fmt_override)
    if not path.is_file():
        raise UsageError(f"no such file: {path}")
    try:
        if fmt == "mtx":
            return io.read_matrix_market(path, kind)
        return to_coo(io.load(path))
    except SparseFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


def to_coo(m) -> CooMatrix:
    if isinstance(m, VcscMatrix):
        return vcsc_to_coo(m)
    if isinstance(m, IvcscMatrix):
        return ivcsc_to_coo(m)
    return csc_to_coo(m)


def build(coo: CooMatrix, fmt: str, idx_size: int = 4):
    cfg = IndexWidthConfig(idx_size)
    if fmt == "csc":
        return csc_from_coo(coo, cfg)
    if fmt == "vcsc":
        return vcsc_from_coo(coo, cfg)
    if fmt == "ivcsc":
        return ivcsc_from_coo(coo)
    raise UsageError(f"unknown target format {fmt!r}")


def write_matrix(coo: CooMatrix, out: Path, to: str | None, idx_size: int = 4) -> None:
    suffix = out.suffix.lower()
    if suffix == ".mtx":
        io.save(out, coo)
    elif suffix == ".ivsk":
        if to is None:
            raise UsageError("--to is required when writing .ivsk")
        io.save(out, build(coo, to, idx_size))
    else:
        raise UsageError(f"unsupported output extension {suffix!r} (expected .mtx or .ivsk)")


def _fmt_bytes(n: int | None) -> str:
    return "-" if n is None else f"{n} B ({n / GIB:.3f} GiB)"


def _fmt_pct(x: float | None) -> str:
    return "-" if x is None else f"{100 * x:.2f}%"


def cmd_stats(args) -> int:
    coo = load_coo(Path(args.input), args.format, _kind(args.value_kind) if args.value_kind else None)
    try:
        rep = compression_report(coo, IndexWidthConfig(args.idx_size))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = [
        ("dims", f"{rep.dims.nrows} x {rep.dims.ncols}"),
        ("nnz", str(rep.nnz)),
        ("sparsity", f"{100 * rep.sparsity:.3f}%"),
        ("MMR", f"{rep.mmr:.6f}"),
        ("value size", f"{rep.val_size} B"),
        ("dense size", _fmt_bytes(rep.dense_bytes)),
        ("CSC size", _fmt_bytes(rep.csc_bytes)),
        ("VCSC size", _fmt_bytes(rep.vcsc_bytes)),
        ("VCSC ratio", _fmt_pct(rep.vcsc_ratio)),
        ("IVCSC size", _fmt_bytes(rep.ivcsc_bytes)),
        ("IVCSC ratio", _fmt_pct(rep.ivcsc_ratio)),
    ]
    width = max(len(k) for k, _ in rows)
    print(_color(f"{'matrix':<{width}}  {args.input}", "1"))
    for k, v in rows:
        print(f"{k:<{width}}  {v}")
    if args.csv:
        row = rep.as_row()
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(row), lineterminator="\n")
            w.writeheader()
            w.writerow(row)
    return 0


def cmd_convert(args) -> int:
    coo = load_coo(Path(args.input), args.format)
    write_matrix(coo, Path(args.out), args.to, args.idx_size)
    return 0


def _kind(name: str) -> ValueKind:
    try:
        return ValueKind.from_name(name)
    except (TypeError, ValueError):
        raise UsageError(f"unknown value kind {name!r}") from None


def _spec(args, n_unique: int) -> GenSpec:
    try:
        return GenSpec(
            Dims(args.rows, args.cols),
            _kind(args.value_kind),
            args.sparsity,
            n_unique,
            args.seed,
            args.position_seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _unique_list(text: str) -> list[int]:
    try:
        out = [int(float(t)) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"bad --unique-list {text!r}") from None
    if not out or min(out) < 1:
        raise UsageError("--unique-list needs positive integers")
    return out


def cmd_gen(args) -> int:
    try:
        coo = generate(_spec(args, args.unique))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    write_matrix(coo, Path(args.out), args.to, args.idx_size)
    return 0


def cmd_sweep(args) -> int:
    spec = _spec(args, 1)
    try:
        points = size_sweep(spec, _unique_list(args.unique_list), IndexWidthConfig(args.idx_size))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    with _open_out(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SWEEP_COLUMNS)
        for p in points:
            w.writerow(sweep_row(p))
    return 0


def cmd_bench(args) -> int:
    ops = [o.strip() for o in args.ops.split(",") if o.strip()]
    formats = [f.strip() for f in args.formats.split(",") if f.strip()]
    unknown = set(ops) - set(bench.OPS) | set(formats) - set(bench.FORMATS)
    if unknown:
        raise UsageError(f"unknown ops/formats: {', '.join(sorted(unknown))}")
    if args.repeats < 1:
        raise UsageError("--repeats must be positive")
    uniques = _unique_list(args.unique_list) if args.unique_list else [args.unique]
    records = bench.run_benchmark(_spec(args, uniques[0]), uniques, ops, formats, repeats=args.repeats)
    with _open_out(args.out) as fh:
        bench.write_csv(records, fh)
    return 0


@contextmanager
def _open_out(path: str):
    if path == "-":
        yield sys.stdout
        return
    with open(path, "w", newline="") as fh:
        yield fh


def _add_gen_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rows", type=int, default=1_000_000)
    p.add_argument("--cols", type=int, default=25)
    p.add_argument("--sparsity", type=float, default=0.9)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--position-seed", type=int, default=0)
    p.add_argument("--value-kind", default=FLOAT32.name, help="numpy dtype name, e.g. float32, uint16")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="redsparse", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="sizes and redundancy of a matrix file")
    p.add_argument("input")
    p.add_argument("--format", choices=("mtx", "ivsk"))
    p.add_argument("--value-kind", help="override the value kind of .mtx input")
    p.add_argument("--idx-size", type=int, default=4, choices=(1, 2, 4, 8))
    p.add_argument("--csv", help="also write the report as a one-row CSV")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("convert", help="convert between .mtx and .ivsk containers")
    p.add_argument("input")
    p.add_argument("--to", choices=("csc", "vcsc", "ivcsc"))
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("mtx", "ivsk"))
    p.add_argument("--idx-size", type=int, default=4, choices=(1, 2, 4, 8))
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("gen", help="generate a random matrix")
    _add_gen_flags(p)
    p.add_argument("--unique", type=int, default=1)
    p.add_argument("--to", choices=("csc", "vcsc", "ivcsc"))
    p.add_argument("--out", required=True)
    p.add_argument("--idx-size", type=int, default=4, choices=(1, 2, 4, 8))
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("sweep", help="sizes over a sweep of unique-value pool sizes")
    _add_gen_flags(p)
    p.add_argument("--unique-list", required=True, help="comma-separated pool sizes")
    p.add_argument("--idx-size", type=int, default=4, choices=(1, 2, 4, 8))
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bench", help="time operations across formats")
    _add_gen_flags(p)
    p.add_argument("--unique", type=int, default=1)
    p.add_argument("--unique-list")
    p.add_argument("--ops", default=",".join(bench.OPS))
    p.add_argument("--formats", default=",".join(bench.FORMATS))
    p.add_argument("--repeats", type=int, default=bench.REPEATS)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
