"""Command-line interface.

Subcommands: ``transform``, ``inverse``, ``verify``, ``count``, ``bench``.
Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import bench as bench_mod
from .counting import CONVENTIONS, format_count_table
from .engine import (
    Image2D,
    SubbandQuad,
    TileConfig,
    compile_scheme,
    deinterleave,
    forward,
    inverse,
    run_reference,
    run_tiled,
)
from .imageio import read_image, write_image
from .schemes import (
    SCHEME_NAMES,
    build_nonseparable_step_matrices,
    build_scheme,
    build_separable_step_matrices,
    fuse,
)
from .wavelets import WAVELETS, get_plan

SCHEME_FLAGS = {
    "conv": "separable-convolution",
    "sep-lift": "separable-lifting",
    "ns-lift": "non-separable-lifting",
    "ns-lift-split": "non-separable-split",
}

SUBBAND_NAMES = ("ll", "hl", "lh", "hh")

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_IO = 3


class UsageError(ValueError):
    pass


def _parse_tile(text: str) -> tuple[int, int] | None:
    if text == "full":
        return None
    try:
        w, _, h = text.partition("x")
        return (int(w), int(h))
    except ValueError:
        raise UsageError(f"invalid tile {text!r}; expected WxH or 'full'") from None


def _parse_sizes(text: str) -> tuple[int, ...]:
    try:
        sizes = tuple(int(s) for s in text.split(",") if s)
    except ValueError:
        raise UsageError(f"invalid size list {text!r}; expected a,b,c") from None
    if not sizes or any(s < 2 or s % 2 for s in sizes):
        raise UsageError("sizes must be even integers >= 2")
    return sizes


def _subband_path(stem: Path, band: str) -> Path:
    return stem.with_name(f"{stem.stem}.{band}{stem.suffix or '.raw'}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="liftfuse",
        description="Single-level 2-D DWT schemes: transform, verify, count and benchmark.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, scheme=True):
        p.add_argument("--wavelet", choices=sorted(WAVELETS), default="cdf53")
        if scheme:
            p.add_argument("--scheme", choices=sorted(SCHEME_FLAGS), default="ns-lift")
        p.add_argument("--precision", choices=("single", "double"), default="double")
        p.add_argument("--tile", type=_parse_tile, default=None, metavar="WxH",
                       help="tile size in quadruple units, or 'full' (default)")
        p.add_argument("--threads", type=int, default=1, metavar="N")

    p_tr = sub.add_parser("transform", help="forward transform an image into four subbands")
    add_common(p_tr)
    p_tr.add_argument("input", help="input image (PGM or raw)")
    p_tr.add_argument("--output", required=True, metavar="PATH",
                      help="output stem; subband files get .ll/.hl/.lh/.hh inserted")
    p_tr.add_argument("--interleaved", action="store_true",
                      help="write one interleaved file instead of four subbands")

    p_inv = sub.add_parser("inverse", help="reconstruct an image from subbands")
    add_common(p_inv)
    p_inv.add_argument("input", help="subband stem (or interleaved file with --interleaved)")
    p_inv.add_argument("--output", required=True, metavar="PATH")
    p_inv.add_argument("--interleaved", action="store_true",
                       help="read one interleaved file instead of four subbands")

    p_ver = sub.add_parser("verify", help="run the cross-scheme verification suite")
    p_ver.add_argument("--wavelet", choices=sorted(WAVELETS) + ["all"], default="all")
    p_ver.add_argument("--precision", choices=("single", "double"), default="double")
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--images", type=int, default=5, help="random images per check")
    p_ver.add_argument("--size", type=int, default=64, help="test image side length")
    p_ver.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)

    p_cnt = sub.add_parser("count", help="print the steps/operations table")
    p_cnt.add_argument("--wavelet", choices=sorted(WAVELETS) + ["all"], default="all")

    p_b = sub.add_parser("bench", help="benchmark forward-transform throughput")
    p_b.add_argument("--wavelet", choices=sorted(WAVELETS), default="cdf53")
    p_b.add_argument("--precision", choices=("single", "double"), default="single")
    p_b.add_argument("--tile", type=_parse_tile, default=None, metavar="WxH")
    p_b.add_argument("--threads", type=int, default=1, metavar="N")
    p_b.add_argument("--seed", type=int, default=0)
    p_b.add_argument("--sizes", type=_parse_sizes, default=bench_mod.DEFAULT_SIZES,
                     metavar="a,b,c",
                     help="square image sizes to sweep (default 64..8192, powers of two)")
    p_b.add_argument("--reps", type=int, default=bench_mod.MIN_REPETITIONS,
                     help="timed repetitions per point (median reported, min 5)")
    p_b.add_argument("--csv", default="bench.csv", metavar="PATH")
    p_b.add_argument("--plot", default=None, metavar="PATH",
                     help="write a vector-graphics throughput figure")
    return parser


# -- transform / inverse -------------------------------------------------------


def cmd_transform(args) -> int:
    image = read_image(args.input).astype(args.precision)
    scheme = build_scheme(SCHEME_FLAGS[args.scheme], get_plan(args.wavelet))
    cfg = TileConfig(tile=args.tile, threads=args.threads)
    quad = forward(image, scheme, cfg)
    out = Path(args.output)
    if args.interleaved:
        write_image(out, quad.interleave())
        print(f"wrote {out}")
    else:
        for band in SUBBAND_NAMES:
            path = _subband_path(out, band)
            write_image(path, getattr(quad, band))
            print(f"wrote {path}")
    return EXIT_OK


def cmd_inverse(args) -> int:
    scheme = build_scheme(SCHEME_FLAGS[args.scheme], get_plan(args.wavelet))
    cfg = TileConfig(tile=args.tile, threads=args.threads)
    if args.interleaved:
        interleaved = read_image(args.input).astype(args.precision)
        comps = deinterleave(interleaved)
        quad = SubbandQuad.from_components(comps)
    else:
        stem = Path(args.input)
        bands = [read_image(_subband_path(stem, b)).astype(args.precision) for b in SUBBAND_NAMES]
        quad = SubbandQuad(*bands)
    image = inverse(quad, scheme, cfg)
    write_image(args.output, image)
    print(f"wrote {args.output}")
    return EXIT_OK


# -- verify ----------------------------------------------------------------------


def _fault_program(program):
    """Negate one stencil coefficient; negative control for the verifier."""
    from dataclasses import replace

    p0 = program.passes[0]
    s0 = p0.substeps[0]
    terms = [list(t) for t in s0.terms]
    for tgt, tl in enumerate(terms):
        if tl:
            src, dm, dn, coeff = tl[0]
            tl[0] = (src, dm, dn, -coeff)
            break
    new_sub = replace(s0, terms=tuple(tuple(tuple(t) for t in tl) for tl in terms))
    new_pass = replace(p0, substeps=(new_sub,) + p0.substeps[1:])
    return replace(program, passes=(new_pass,) + program.passes[1:])


def cmd_verify(args) -> int:
    wavelets = sorted(WAVELETS) if args.wavelet == "all" else [args.wavelet]
    precision = args.precision
    cross_tol = 1e-9 if precision == "double" else 1e-3
    failures: list[str] = []

    def report(name: str, value: float, tol: float):
        ok = value <= tol
        print(f"{'PASS' if ok else 'FAIL'}  {name}: max abs {value:.3e} (tol {tol:.0e})")
        if not ok:
            failures.append(name)

    for wavelet in wavelets:
        plan = get_plan(wavelet)
        exact = plan.mode == "exact"
        sym_tol = 0.0 if exact else 1e-12

        fusion_diff = 0.0
        for pair in plan.pairs:
            th, tv, sh, sv = build_separable_step_matrices(pair)
            t2, s2 = build_nonseparable_step_matrices(pair)
            fusion_diff = max(fusion_diff, fuse(tv, th).max_diff(t2), fuse(sv, sh).max_diff(s2))
        report(f"{wavelet} fusion identity", fusion_diff, sym_tol)

        schemes = {n: build_scheme(n, plan) for n in SCHEME_NAMES}
        transfers = [s.transfer_matrix() for s in schemes.values()]
        transfer_diff = max(
            transfers[0].max_diff(t) for t in transfers[1:]
        )
        report(f"{wavelet} scheme transfer equality", transfer_diff, max(sym_tol, 1e-12))

        programs = {n: compile_scheme(s) for n, s in schemes.items()}
        if args.inject_fault:
            name0 = SCHEME_NAMES[0]
            programs[name0] = _fault_program(programs[name0])

        recon_tol = (
            1e-3
            if precision == "single"
            else (1e-12 if exact else 1e-9)
        )
        cross_worst = 0.0
        cross_pair = ""
        recon_worst = 0.0
        for i in range(args.images):
            image = Image2D.random(args.size, args.size, seed=args.seed + i, precision=precision)
            comps = deinterleave(image)
            outs = {n: run_reference(programs[n], comps) for n in SCHEME_NAMES}
            base = SCHEME_NAMES[0]
            for n in SCHEME_NAMES[1:]:
                d = max(
                    float(np.abs(outs[base][c] - outs[n][c]).max()) for c in range(4)
                )
                if d > cross_worst:
                    cross_worst, cross_pair = d, f"{base} vs {n}"
            for n in SCHEME_NAMES:
                quad = SubbandQuad.from_components(outs[n])
                rec = inverse(quad, schemes[n])
                recon_worst = max(recon_worst, float(np.abs(rec.data - image.data).max()))
        label = f"{wavelet} cross-scheme agreement"
        if cross_worst > cross_tol and cross_pair:
            label += f" ({cross_pair})"
        report(label, cross_worst, cross_tol)
        report(f"{wavelet} perfect reconstruction", recon_worst, recon_tol)

        if precision == "double":
            impulse_diff = _impulse_check(schemes)
            report(f"{wavelet} impulse response vs symbolic", impulse_diff, 1e-12)

        tile_diff = 0.0
        image = Image2D.random(args.size, args.size, seed=args.seed, precision=precision)
        comps = deinterleave(image)
        for n in SCHEME_NAMES:
            ref = run_reference(programs[n], comps)
            tiled = run_tiled(programs[n], comps, TileConfig(tile=(8, 8), threads=2))
            tile_diff = max(
                tile_diff,
                max(float(np.abs(ref[c] - tiled[c]).max()) for c in range(4)),
            )
        report(f"{wavelet} tiling/thread invariance (bit-exact)", tile_diff, 0.0)

    if failures:
        print(f"verification FAILED: {', '.join(failures)}")
        return EXIT_VERIFY
    print("verification passed")
    return EXIT_OK


def _impulse_check(schemes) -> float:
    """Forward transform of centered deltas against the symbolic transfer matrix."""
    size = 32
    center = size // 4  # component-grid center
    transfer = next(iter(schemes.values())).transfer_matrix()
    worst = 0.0
    for scheme in schemes.values():
        for j, (pr, pc) in enumerate(((0, 0), (0, 1), (1, 0), (1, 1))):
            image = Image2D.delta(size, size, 2 * center + pr, 2 * center + pc)
            quad = forward(image, scheme)
            comps = quad.components()
            expected = [np.zeros_like(comps[0]) for _ in range(4)]
            for i in range(4):
                for (km, kn), c in transfer.entries[i][j].terms.items():
                    expected[i][center + kn, center + km] = float(c)
            worst = max(
                worst,
                max(float(np.abs(comps[i] - expected[i]).max()) for i in range(4)),
            )
    return worst


# -- count / bench ----------------------------------------------------------------


def cmd_count(args) -> int:
    wavelets = sorted(WAVELETS) if args.wavelet == "all" else [args.wavelet]
    blocks = []
    for wavelet in wavelets:
        plan = get_plan(wavelet)
        schemes = [build_scheme(n, plan) for n in SCHEME_NAMES]
        blocks.append(format_count_table(wavelet, schemes, CONVENTIONS))
    print("\n\n".join(blocks))
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.threads < 1:
        raise UsageError("thread count must be positive")

    def progress(rec):
        print(
            f"{rec.wavelet} {rec.scheme:24s} {rec.width:5d}x{rec.height:<5d} "
            f"median {rec.median_seconds:.6f}s  {rec.gbps:8.3f} GB/s"
        )

    records = bench_mod.run_sweep(
        wavelet=args.wavelet,
        sizes=args.sizes,
        precision=args.precision,
        threads=args.threads,
        tile=args.tile,
        reps=args.reps,
        seed=args.seed,
        progress=progress,
    )
    bench_mod.write_csv(args.csv, records)
    print(f"wrote {args.csv}")
    if args.plot:
        from .plotting import plot_throughput

        plot_throughput(records, args.plot)
        print(f"wrote {args.plot}")
    return EXIT_OK


_COMMANDS = {
    "transform": cmd_transform,
    "inverse": cmd_inverse,
    "verify": cmd_verify,
    "count": cmd_count,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:  # raised by argument type converters
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
