import csv
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from liftfuse.cli import main
from liftfuse.counting import CONVENTIONS, count_operations
from liftfuse.engine import Image2D
from liftfuse.imageio import read_image, write_pgm, write_raw
from liftfuse.schemes import SCHEME_NAMES, build_scheme
from liftfuse.wavelets import CDF53


@pytest.fixture
def pgm_image(tmp_path):
    path = tmp_path / "input.pgm"
    rng = np.random.default_rng(42)
    write_pgm(path, Image2D(np.rint(rng.random((64, 64)) * 255) / 255.0))
    return path


def run(*argv):
    return main([str(a) for a in argv])


# -- transform ---------------------------------------------------------------


def test_transform_writes_four_half_size_subbands(tmp_path, pgm_image):
    out = tmp_path / "out.raw"
    assert run("transform", pgm_image, "--wavelet", "cdf53", "--scheme", "ns-lift",
               "--output", out) == 0
    for band in ("ll", "hl", "lh", "hh"):
        sub = read_image(tmp_path / f"out.{band}.raw")
        assert (sub.width, sub.height) == (32, 32)
        assert sub.precision == "double"


def test_transform_schemes_agree_on_disk(tmp_path, pgm_image):
    results = {}
    for flag in ("conv", "sep-lift", "ns-lift", "ns-lift-split"):
        out = tmp_path / f"{flag}.raw"
        assert run("transform", pgm_image, "--scheme", flag, "--output", out) == 0
        results[flag] = [read_image(tmp_path / f"{flag}.{b}.raw").data for b in ("ll", "hl", "lh", "hh")]
    base = results["conv"]
    for flag, bands in results.items():
        for a, b in zip(base, bands):
            assert np.abs(a - b).max() <= 1e-9


def test_transform_interleaved_flag(tmp_path, pgm_image):
    out = tmp_path / "inter.raw"
    assert run("transform", pgm_image, "--interleaved", "--output", out) == 0
    img = read_image(out)
    assert (img.width, img.height) == (64, 64)


def test_transform_rejects_odd_dimensions(tmp_path, capsys):
    path = tmp_path / "odd.pgm"
    write_pgm(path, Image2D(np.zeros((512, 511))))
    code = run("transform", path, "--output", tmp_path / "x.raw")
    assert code == 2
    assert "dimensions must be even" in capsys.readouterr().err


def test_transform_missing_input_is_io_error(tmp_path, capsys):
    code = run("transform", tmp_path / "nope.pgm", "--output", tmp_path / "x.raw")
    assert code == 3
    assert "I/O error" in capsys.readouterr().err


def test_transform_tile_smaller_than_halo(tmp_path, pgm_image, capsys):
    code = run("transform", pgm_image, "--wavelet", "cdf97", "--scheme", "conv",
               "--tile", "1x1", "--output", tmp_path / "x.raw")
    assert code == 2
    assert "halo" in capsys.readouterr().err


# -- inverse ------------------------------------------------------------------


def test_transform_inverse_round_trip(tmp_path, pgm_image):
    quad_stem = tmp_path / "q.raw"
    back = tmp_path / "back.raw"
    assert run("transform", pgm_image, "--scheme", "ns-lift-split", "--wavelet", "cdf97",
               "--tile", "8x8", "--threads", "2", "--output", quad_stem) == 0
    assert run("inverse", quad_stem, "--scheme", "ns-lift-split", "--wavelet", "cdf97",
               "--output", back) == 0
    original = read_image(pgm_image)
    rec = read_image(back)
    assert np.abs(rec.data - original.data).max() <= 1e-9


def test_inverse_interleaved_round_trip(tmp_path, pgm_image):
    inter = tmp_path / "i.raw"
    back = tmp_path / "b.raw"
    assert run("transform", pgm_image, "--interleaved", "--output", inter) == 0
    assert run("inverse", inter, "--interleaved", "--output", back) == 0
    assert np.abs(read_image(back).data - read_image(pgm_image).data).max() <= 1e-12


# -- verify --------------------------------------------------------------------


def test_verify_passes_by_default(capsys):
    assert run("verify", "--size", "32", "--images", "2") == 0
    out = capsys.readouterr().out
    assert "verification passed" in out
    assert "FAIL" not in out


def test_verify_reports_single_precision(capsys):
    assert run("verify", "--wavelet", "cdf97", "--precision", "single",
               "--size", "32", "--images", "2") == 0
    out = capsys.readouterr().out
    assert "(tol 1e-03)" in out


def test_verify_inject_fault_fails(capsys):
    code = run("verify", "--inject-fault", "--wavelet", "cdf53", "--size", "32", "--images", "1")
    assert code == 1
    out = capsys.readouterr().out
    assert "verification FAILED" in out
    assert "vs" in out  # names the failing pair


# -- count ----------------------------------------------------------------------


def test_count_output_matches_library_reports(capsys):
    assert run("count") == 0
    out = capsys.readouterr().out
    assert "wavelet: cdf53" in out and "wavelet: cdf97" in out
    # every table row reproduces count_operations exactly, conventions labelled
    lines = out.splitlines()
    header_rows = [i for i, l in enumerate(lines) if l.startswith("scheme")]
    for header_idx, plan in zip(header_rows, (CDF53,)):
        header = lines[header_idx].split()
        assert header[2:] == [f"ops[{c}]" for c in CONVENTIONS]
        for offset, scheme_name in enumerate(SCHEME_NAMES):
            cells = lines[header_idx + 1 + offset].split()
            scheme = build_scheme(scheme_name, plan)
            assert cells[0] == scheme_name
            assert int(cells[1]) == scheme.steps
            for conv, cell in zip(CONVENTIONS, cells[2:]):
                assert int(cell) == count_operations(scheme, conv).ops


def test_count_single_wavelet(capsys):
    assert run("count", "--wavelet", "cdf97") == 0
    out = capsys.readouterr().out
    assert "cdf53" not in out
    assert "separable-lifting" in out


# -- bench ----------------------------------------------------------------------


def test_bench_csv_and_plot(tmp_path, capsys):
    csv_path = tmp_path / "bench.csv"
    svg_path = tmp_path / "bench.svg"
    assert run("bench", "--sizes", "16,32", "--csv", csv_path, "--plot", svg_path,
               "--seed", "7") == 0
    with open(csv_path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == list(
        ("wavelet", "scheme", "width", "height", "precision", "threads", "tile",
         "reps", "median_seconds", "gbps")
    )
    assert len(rows) == 1 + 2 * len(SCHEME_NAMES)
    assert all(float(r[9]) > 0 for r in rows[1:])

    root = ET.parse(svg_path).getroot()
    assert root.tag.endswith("svg")
    gids = {
        el.get("id")
        for el in root.iter()
        if el.get("id", "").startswith("series-")
    }
    assert gids == {f"series-{name}" for name in SCHEME_NAMES}


def test_bench_deterministic_except_timing(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    for path in (a, b):
        assert run("bench", "--sizes", "16", "--csv", path, "--seed", "3") == 0
    timing_columns = {8, 9}  # median_seconds, gbps

    def strip(path):
        with open(path, newline="") as fh:
            return [
                [c for i, c in enumerate(row) if i not in timing_columns]
                for row in csv.reader(fh)
            ]

    assert strip(a) == strip(b)


def test_bench_rejects_low_reps(tmp_path, capsys):
    code = run("bench", "--sizes", "16", "--reps", "2", "--csv", tmp_path / "x.csv")
    assert code == 2
    assert "repetitions" in capsys.readouterr().err


# -- argument handling -------------------------------------------------------------


def test_unknown_scheme_flag_exits_2():
    with pytest.raises(SystemExit) as exc:
        run("transform", "x.pgm", "--scheme", "bogus", "--output", "y")
    assert exc.value.code == 2


def test_bad_tile_syntax_exits_2():
    with pytest.raises(SystemExit) as exc:
        run("transform", "x.pgm", "--tile", "8by8", "--output", "y")
    assert exc.value.code == 2


def test_bad_sizes_exit_2():
    with pytest.raises(SystemExit) as exc:
        run("bench", "--sizes", "15,31")
    assert exc.value.code == 2


def test_help_mentions_default_sweep(capsys):
    with pytest.raises(SystemExit) as exc:
        run("bench", "--help")
    assert exc.value.code == 0
    assert "default 64..8192" in capsys.readouterr().out


def test_transform_single_precision_writes_float32(tmp_path, pgm_image):
    out = tmp_path / "s.raw"
    assert run("transform", pgm_image, "--precision", "single", "--output", out) == 0
    sub = read_image(tmp_path / "s.ll.raw")
    assert sub.precision == "single"


def test_console_script_entry_point():
    import subprocess
    import sys

    proc = subprocess.run(
        [sys.executable, "-m", "liftfuse", "--help"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert "transform" in proc.stdout and "bench" in proc.stdout
