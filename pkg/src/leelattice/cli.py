"""
Command-line interface.

    leelattice decode LATTICE --vector "0 -6" [--method code|sphere|brute]
    leelattice count --k 3 --R 2 [--ball] [--per-depth]
    leelattice volume --max-n 30 [--method exact|recursive|direct]
    leelattice simulate --n 17 --q 5 --k 1:16 --trials 100 --seed 42
    leelattice bench --n 6 --q 5 --k 3 --instances 50

Exit status: 0 success, 1 no lattice point within an explicit radius,
2 input, parse or capacity error.
"""

from __future__ import annotations

import argparse
import csv
import logging
import math
import os
import sys
import time
from typing import Dict, Iterable, List, Optional, Sequence, TextIO

import numpy as np

from . import channel, geometry
from .code_decode import brute_force_cvp, decode_via_code
from .construction import read_lattice_file
from .errors import LeeLatticeError
from .metrics import format_number, parse_vector, parse_vectors
from .sphere import DecodeConfig, exact_node_count, lee_sphere_decode
from .svg import line_chart

EXIT_OK, EXIT_INFEASIBLE, EXIT_INPUT = 0, 1, 2

log = logging.getLogger("leelattice")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# CSV helpers


def _csv_value(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return format_number(float(v)) if math.isfinite(v) else repr(float(v))
    return str(v)


def write_csv(fh: TextIO, columns: Sequence[str], rows: Iterable[Dict[str, object]]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_csv_value(row.get(c)) for c in columns])


def read_csv(fh: TextIO) -> List[Dict[str, object]]:
    """Read a CSV produced by this CLI; numeric cells become int or float."""
    out = []
    for row in csv.DictReader(fh):
        out.append({k: _parse_cell(v) for k, v in row.items()})
    return out


def _parse_cell(v: str):
    if v == "":
        return None
    try:
        return int(v)
    except ValueError:
        pass
    try:
        return float(v)
    except ValueError:
        return v


def _open_out(path: Optional[str], default: TextIO):
    if path in (None, "-"):
        return _NoClose(default)
    return open(path, "w", encoding="utf-8", newline="")


class _NoClose:
    def __init__(self, fh):
        self.fh = fh

    def __enter__(self):
        return self.fh

    def __exit__(self, *exc):
        self.fh.flush()
        return False


# ---------------------------------------------------------------------------
# argument parsing


def _nonneg_int(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        f = float(s)  # accept "1e6"
        if not f.is_integer():
            raise argparse.ArgumentTypeError(f"expected an integer, got {s}") from None
        v = int(f)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {s}")
    return v


def _pos_int(s: str) -> int:
    v = _nonneg_int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def _nonneg_float(s: str) -> float:
    v = float(s)
    if not math.isfinite(v) or v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative number, got {s}")
    return v


def _radius(s: str):
    if s == "babai":
        return s
    return _nonneg_float(s)


def parse_k_range(s: str) -> List[int]:
    """``"3"`` -> [3]; ``"1:16"`` -> [1..16] inclusive; ``"1,4,8"`` -> listed."""
    try:
        if ":" in s:
            a, b = s.split(":", 1)
            ks = list(range(int(a), int(b) + 1))
        else:
            ks = [int(t) for t in s.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad k range {s!r}") from None
    if not ks:
        raise argparse.ArgumentTypeError(f"empty k range {s!r}")
    return ks


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="leelattice", description=__doc__.split("\n\n")[0])
    p.add_argument("--threads", type=_pos_int, default=os.cpu_count() or 1)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decode", help="decode received vectors")
    d.add_argument("lattice", help="lattice file ('code' or 'blocks' kind)")
    src = d.add_mutually_exclusive_group(required=True)
    src.add_argument("--vector", help='received vector, e.g. "0 -6"')
    src.add_argument("--vectors", help="file with one received vector per line")
    d.add_argument("--method", choices=["code", "sphere", "brute"], default="sphere")
    d.add_argument("--radius", type=_radius, default="babai")
    d.add_argument("--no-shrink", action="store_true")
    d.add_argument("--trace-nodes", action="store_true", help="emit depth,count CSV")

    c = sub.add_parser("count", help="Lee-ball and decoding-tree node counts")
    c.add_argument("--k", "--j", dest="k", type=_nonneg_int, required=True)
    c.add_argument("--R", dest="R", type=_nonneg_int, required=True)
    c.add_argument("--ball", action="store_true", help="count Z^k points in the ball only")
    c.add_argument("--per-depth", action="store_true")

    v = sub.add_parser("volume", help="average Lee vs. Euclidean ball volumes")
    v.add_argument("--max-n", type=_pos_int, default=30)
    v.add_argument("--samples", type=_pos_int, default=10**6)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--method", choices=["exact", "recursive", "direct"], default="exact")
    v.add_argument("--out")
    v.add_argument("--svg")

    s = sub.add_parser("simulate", help="Laplacian channel experiment")
    s.add_argument("--n", type=_pos_int, default=17)
    s.add_argument("--q", type=_pos_int, default=5)
    s.add_argument("--k", type=parse_k_range, default=list(range(1, 17)))
    s.add_argument("--trials", type=_pos_int, default=100)
    s.add_argument("--scale", type=_nonneg_float, default=1.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--radius", type=_radius, default="babai")
    s.add_argument("--no-shrink", action="store_true")
    s.add_argument("--out")
    s.add_argument("--trials-out", help="optional per-trial CSV")
    s.add_argument("--svg")

    b = sub.add_parser("bench", help="time code vs. sphere decoding on identical instances")
    b.add_argument("--n", type=_pos_int, default=6)
    b.add_argument("--q", type=_pos_int, default=5)
    b.add_argument("--k", type=_pos_int, default=3)
    b.add_argument("--instances", type=_pos_int, default=50)
    b.add_argument("--scale", type=_nonneg_float, default=1.0)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out")
    return p


# ---------------------------------------------------------------------------
# subcommands


def _fmt_point(z) -> str:
    return "(" + ",".join(str(int(v)) for v in z) + ")"


def cmd_decode(args, out: TextIO) -> int:
    lat, code = read_lattice_file(args.lattice)
    if args.vector is not None:
        vectors = [parse_vector(args.vector)]
    else:
        with open(args.vectors, encoding="utf-8") as fh:
            vectors = parse_vectors(fh)
    status = EXIT_OK
    cfg = DecodeConfig(radius=args.radius, shrink_on_improve=not args.no_shrink)
    for r in vectors:
        if r.shape[0] != lat.n:
            raise UsageError(f"vector has length {r.shape[0]}, lattice has n={lat.n}")
        if args.method == "code":
            res = decode_via_code(code, lat, r)
        elif args.method == "brute":
            res = brute_force_cvp(lat, r)
        else:
            res = lee_sphere_decode(lat, r, cfg)
        if res.found:
            out.write(f"{_fmt_point(res.point)}, distance {format_number(res.distance)}\n")
        else:
            out.write(f"none-in-radius, radius {format_number(res.radius)}\n")
            status = EXIT_INFEASIBLE
        out.write(f"method: {res.method}\n")
        if res.method == "sphere":
            out.write(f"radius: {format_number(res.radius)}\n")
            out.write(f"nodes: {res.total_nodes} leaves: {res.leaves_tested}\n")
            if args.trace_nodes:
                write_csv(out, ["depth", "count"],
                          ({"depth": j, "count": c} for j, c in enumerate(res.nodes_per_depth)))
    return status


def cmd_count(args, out: TextIO) -> int:
    if args.ball:
        if args.per_depth:
            terms = geometry.lee_ball_terms(args.k, args.R)
            write_csv(out, ["i", "term"], ({"i": i, "term": t} for i, t in enumerate(terms)))
        out.write(f"{geometry.lee_ball_cardinality(args.k, args.R)}\n")
        return EXIT_OK
    if args.per_depth:
        depths = exact_node_count(args.k, args.R, per_depth=True)
        write_csv(out, ["depth", "count"], ({"depth": j, "count": c} for j, c in enumerate(depths)))
    out.write(f"{exact_node_count(args.k, args.R)}\n")
    return EXIT_OK


VOLUME_COLUMNS = ["n", "euclid", "avg_lee", "ratio"]


def cmd_volume(args, out: TextIO) -> int:
    if args.max_n < 2:
        raise UsageError("--max-n must be >= 2")
    n_o, table = geometry.crossover_dimension(args.max_n, args.method, args.samples, args.seed)
    rows = [
        {"n": t.n, "euclid": t.euclid_volume, "avg_lee": t.avg_lee_volume, "ratio": t.ratio} for t in table
    ]
    with _open_out(args.out, out) as fh:
        write_csv(fh, VOLUME_COLUMNS, rows)
    log.info("crossover dimension n_o = %s", n_o)
    if args.out not in (None, "-"):
        out.write(f"crossover n_o = {n_o}\n")
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(line_chart(
                [r["n"] for r in rows],
                {"Euclidean (unit)": [r["euclid"] for r in rows], "average Lee": [r["avg_lee"] for r in rows]},
                title="Ball volume vs. dimension", xlabel="n", ylabel="volume", log_y=True,
            ))
    return EXIT_OK


def cmd_simulate(args, out: TextIO) -> int:
    decoder = DecodeConfig(radius=args.radius, shrink_on_improve=not args.no_shrink)
    spec = channel.ExperimentSpec(
        n=args.n, q=args.q, ks=args.k, trials=args.trials, scale=args.scale,
        seed=args.seed, decoder=decoder, threads=args.threads,
    )
    t0 = time.perf_counter()
    rows, records = channel.run_experiment(spec)
    log.info("simulation finished in %.1f s", time.perf_counter() - t0)
    with _open_out(args.out, out) as fh:
        write_csv(fh, channel.AGGREGATE_COLUMNS, rows)
    if args.trials_out:
        with _open_out(args.trials_out, out) as fh:
            write_csv(fh, channel.TRIAL_COLUMNS, (channel.trial_row(r) for r in records))
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(line_chart(
                [r["k"] for r in rows],
                {"mean nodes": [r["mean_nodes"] for r in rows], "median nodes": [r["median_nodes"] for r in rows]},
                title=f"Visited nodes, n={args.n}, q={args.q}", xlabel="k", ylabel="nodes", log_y=True,
            ))
    return EXIT_OK


def cmd_bench(args, out: TextIO) -> int:
    if not 1 <= args.k < args.n:
        raise UsageError("need 1 <= k < n")
    rows = []
    for i in range(args.instances):
        rng = channel.trial_rng(args.seed, args.k, i)
        lat = channel.sample_lattice(args.q, args.n, args.k, rng)
        r = lat.point(rng.integers(0, args.q, size=args.n)) + channel.sample_laplace_noise(args.n, args.scale, rng)
        code = lat.code()
        t0 = time.perf_counter()
        decode_via_code(code, lat, r)
        t1 = time.perf_counter()
        lee_sphere_decode(lat, r)
        t2 = time.perf_counter()
        rows.append({"code_us": (t1 - t0) * 1e6, "sphere_us": (t2 - t1) * 1e6})
    with _open_out(args.out, out) as fh:
        write_csv(fh, ["code_us", "sphere_us"], rows)
    return EXIT_OK


COMMANDS = {
    "decode": cmd_decode,
    "count": cmd_count,
    "volume": cmd_volume,
    "simulate": cmd_simulate,
    "bench": cmd_bench,
}


def main(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    out = out if out is not None else sys.stdout
    try:
        return COMMANDS[args.command](args, out)
    except (LeeLatticeError, UsageError, OSError, ValueError) as exc:
        print(f"leelattice {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
