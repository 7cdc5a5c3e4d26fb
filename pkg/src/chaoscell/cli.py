"""Command-line entry point: ``chaoscell <subcommand> ...``.

Exit codes: 0 success, 2 usage error, 3 invalid key, 4 unsupported image
dimensions, 5 malformed PGM, 6 other I/O failure.
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time
from pathlib import Path

import numpy as np

from . import analysis, automata, chaos, cipher, pgm
from .errors import DimensionError, DomainError, KeyFormatError, PgmError
from .substitution import format_sbox

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_KEY = 3
EXIT_DIMENSION = 4
EXIT_PGM = 5
EXIT_IO = 6


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_key_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--key-file", type=Path, help="file holding 'r=<dec> x0=<dec> I=<int>'")
    g.add_argument("--key", help="inline key 'r,x0,I' (I defaults to %d)" % automata.DEFAULT_ITERATIONS)


def _key(args) -> cipher.MasterKey:
    try:
        if args.key_file is not None:
            return cipher.load_key_file(args.key_file)
        return cipher.parse_key_triplet(args.key)
    except DomainError as exc:
        raise KeyFormatError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chaoscell", description="LSS + Rule 30 gray-image cipher and analysis tools")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name in ("encrypt", "decrypt"):
        p = sub.add_parser(name, help=f"{name} a P5 PGM image")
        p.add_argument("--in", dest="inp", type=Path, required=True)
        p.add_argument("--out", type=Path, required=True)
        _add_key_args(p)
        p.add_argument("--trace-dir", type=Path, help="also write intermediate stage images here")

    p = sub.add_parser("analyze", help="entropy, GLCM, correlation and histogram reports")
    p.add_argument("--in", dest="inp", type=Path, required=True)
    p.add_argument("--against", type=Path, help="plaintext for plaintext/ciphertext correlation")
    p.add_argument("--out-dir", type=Path, required=True)
    p.add_argument("--scatter-n", type=int, default=4096)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("bifurcation", help="CSV of long-run iterates over a grid of r")
    p.add_argument("--r-min", type=float, default=0.01)
    p.add_argument("--r-max", type=float, default=3.99)
    p.add_argument("--steps", type=int, default=400)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--warmup", type=int, default=chaos.DEFAULT_WARMUP)
    p.add_argument("--x0", type=float, default=0.37)
    p.add_argument("--map", dest="map_name", choices=sorted(chaos.MAPS), default="lss")
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("ca-pattern", help="1-D Rule 30 triangle as 0/1 text or PGM (by extension)")
    p.add_argument("--width", type=int, default=101)
    p.add_argument("--steps", type=int, default=50)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("bench", help="encrypt/decrypt throughput on a random image")
    p.add_argument("--size", type=int, default=256)
    p.add_argument("--repeats", type=int, default=20)
    p.add_argument("--key", default="3.99,0.123456789,%d" % automata.DEFAULT_ITERATIONS)

    p = sub.add_parser("sboxes", help="dump the key's three S-boxes as 16x16 hex grids")
    _add_key_args(p)
    p.add_argument("--out", type=Path, help="write here instead of stdout")
    return parser


def _cmd_crypt(args) -> None:
    key = _key(args)
    img = pgm.read_pgm(args.inp)
    fn = cipher.encrypt_traced if args.command == "encrypt" else cipher.decrypt_traced
    out, trace = fn(img, key)
    pgm.write_pgm(out, args.out)
    if args.trace_dir is not None:
        args.trace_dir.mkdir(parents=True, exist_ok=True)
        pgm.write_pgm(trace.shuffled, args.trace_dir / "shuffled.pgm")
        pgm.write_pgm(trace.substituted, args.trace_dir / "substituted.pgm")
        pgm.write_pgm(trace.mask, args.trace_dir / "mask.pgm")
        pgm.write_pgm(trace.ciphertext, args.trace_dir / "ciphertext.pgm")


def _cmd_analyze(args) -> None:
    img = pgm.read_pgm(args.inp)
    against = pgm.read_pgm(args.against) if args.against is not None else None
    metrics = analysis.write_analysis(img, args.out_dir, against=against, scatter_n=args.scatter_n, scatter_seed=args.seed)
    for name, value in metrics.items():
        print(f"{name}\t{value:.17g}")


def _cmd_bifurcation(args) -> None:
    rows = chaos.bifurcation_scan(
        args.r_min, args.r_max, args.steps, args.warmup, args.samples, x0=args.x0, map_name=args.map_name
    )
    chaos.write_xy_csv(rows, args.out)


def _cmd_ca_pattern(args) -> None:
    rows = automata.ca_pattern(args.width, args.steps)
    if args.out.suffix.lower() == ".pgm":
        pgm.write_pgm(np.where(rows == 1, 0, 255).astype(np.uint8), args.out)
    else:
        args.out.write_text(automata.format_pattern(rows))


def _cmd_bench(args) -> None:
    if args.size < 16 or args.size % 16:
        raise DimensionError("--size must be a positive multiple of 16")
    if args.repeats < 1:
        raise ValueError("--repeats must be >= 1")
    key = _key(argparse.Namespace(key_file=None, key=args.key))
    img = np.random.default_rng(0).integers(0, 256, (args.size, args.size), dtype=np.uint8)
    megabytes = img.size / 1e6
    rates = {"encrypt": [], "decrypt": []}
    for _ in range(args.repeats):
        t0 = time.perf_counter()
        ct = cipher.encrypt(img, key)
        t1 = time.perf_counter()
        cipher.decrypt(ct, key)
        t2 = time.perf_counter()
        rates["encrypt"].append(megabytes / (t1 - t0))
        rates["decrypt"].append(megabytes / (t2 - t1))
    for name, r in rates.items():
        sd = statistics.stdev(r) if len(r) > 1 else 0.0
        print(f"{name}: mean {statistics.mean(r):.3f} MB/s, stddev {sd:.3f} MB/s over {len(r)} runs ({args.size}x{args.size})")


def _cmd_sboxes(args) -> None:
    km = cipher.key_material(_key(args), 16, 16)
    text = "".join(f"# sbox{i + 1}\n" + format_sbox(box) for i, box in enumerate(km.triple.boxes))
    if args.out is not None:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)


_COMMANDS = {
    "encrypt": _cmd_crypt,
    "decrypt": _cmd_crypt,
    "analyze": _cmd_analyze,
    "bifurcation": _cmd_bifurcation,
    "ca-pattern": _cmd_ca_pattern,
    "bench": _cmd_bench,
    "sboxes": _cmd_sboxes,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _COMMANDS[args.command](args)
    except KeyFormatError as exc:
        print(f"chaoscell: invalid key: {exc}", file=sys.stderr)
        return EXIT_KEY
    except DimensionError as exc:
        print(f"chaoscell: unsupported dimensions: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except PgmError as exc:
        print(f"chaoscell: bad PGM: {exc}", file=sys.stderr)
        return EXIT_PGM
    except OSError as exc:
        print(f"chaoscell: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"chaoscell: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
