"""Forward-transform throughput benchmarking.

Timing covers the transform only: image synthesis, compilation of the
scheme and file I/O happen outside the timed region.  Throughput is input
bytes (width * height * bytes per sample) divided by the median wall time
of the timed repetitions; one untimed warm-up run precedes them.
"""

from __future__ import annotations

import csv
import statistics
import time
from dataclasses import dataclass

from .engine import Image2D, PRECISION_DTYPES, TileConfig, compile_scheme, deinterleave, run_tiled
from .schemes import SCHEME_NAMES, build_scheme
from .wavelets import get_plan

__all__ = ["BenchRecord", "CSV_HEADER", "DEFAULT_SIZES", "run_sweep", "write_csv"]

CSV_HEADER = (
    "wavelet",
    "scheme",
    "width",
    "height",
    "precision",
    "threads",
    "tile",
    "reps",
    "median_seconds",
    "gbps",
)

DEFAULT_SIZES = tuple(2**k for k in range(6, 14))  # 64 .. 8192
MIN_REPETITIONS = 5


@dataclass(frozen=True)
class BenchRecord:
    wavelet: str
    scheme: str
    width: int
    height: int
    precision: str
    threads: int
    tile: tuple[int, int] | None
    reps: int
    median_seconds: float
    gbps: float

    @property
    def tile_text(self) -> str:
        return "full" if self.tile is None else f"{self.tile[0]}x{self.tile[1]}"

    def csv_row(self) -> tuple:
        return (
            self.wavelet,
            self.scheme,
            self.width,
            self.height,
            self.precision,
            self.threads,
            self.tile_text,
            self.reps,
            f"{self.median_seconds:.9f}",
            f"{self.gbps:.6f}",
        )


def _time_forward(program, comps, cfg: TileConfig, reps: int) -> float:
    run_tiled(program, comps, cfg)  # warm-up, excluded
    times = []
    for _ in range(reps):
        t0 = time.perf_counter()
        run_tiled(program, comps, cfg)
        t1 = time.perf_counter()
        times.append(t1 - t0)
    return statistics.median(times)


def run_sweep(
    wavelet: str = "cdf53",
    schemes=SCHEME_NAMES,
    sizes=DEFAULT_SIZES,
    precision: str = "single",
    threads: int = 1,
    tile: tuple[int, int] | None = None,
    reps: int = MIN_REPETITIONS,
    seed: int = 0,
    progress=None,
) -> list[BenchRecord]:
    """Benchmark every (scheme, size) combination on seeded random images."""
    if reps < MIN_REPETITIONS:
        raise ValueError(f"repetitions must be >= {MIN_REPETITIONS}")
    plan = get_plan(wavelet)
    cfg = TileConfig(tile=tile, threads=threads)
    bytes_per_sample = PRECISION_DTYPES[precision]().itemsize
    records = []
    for size in sizes:
        image = Image2D.random(size, size, seed=seed, precision=precision)
        comps = deinterleave(image)
        for scheme_name in schemes:
            program = compile_scheme(build_scheme(scheme_name, plan))
            median = _time_forward(program, comps, cfg, reps)
            gbps = size * size * bytes_per_sample / median / 1e9
            rec = BenchRecord(
                wavelet=wavelet,
                scheme=scheme_name,
                width=size,
                height=size,
                precision=precision,
                threads=threads,
                tile=tile,
                reps=reps,
                median_seconds=median,
                gbps=gbps,
            )
            records.append(rec)
            if progress is not None:
                progress(rec)
    return records


def write_csv(path, records) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for rec in records:
            writer.writerow(rec.csv_row())
