"""Execution of transform schemes on 2-D images.

A scheme is lowered to a :class:`StencilProgram`: per pass, per fused
sub-step, a list of multiply-accumulate terms ``(target, source, dm, dn,
coeff)`` meaning "component ``target`` at quadruple position ``(n, m)``
accumulates ``coeff`` times component ``source`` at ``(n + dn, m + dm)``".
Offsets are the negated stored exponents of the matrix entry polynomials.

Execution is gather-style: every pass reads a consistent snapshot of its
input and writes a fresh buffer, which is exactly the barrier semantics of
the schemes (no work item may observe a neighbour's in-pass result).  Fused
sub-steps inside one pass are chained without a global barrier; the tiled
executor gives each tile a halo wide enough to chain them locally.

Determinism contract: for a fixed input and scheme, the output is bit-exact
regardless of tile size and thread count.  Terms are accumulated per output
sample in a fixed order (sorted by ``(dm, dn, source)``), and tiles always
read boundary samples through the same global symmetric-extension mapping,
so every output sample sees the identical sequence of floating-point
operations.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .schemes import Scheme, StepMatrix, invert_scheme

__all__ = [
    "PRECISION_DTYPES",
    "Image2D",
    "SubbandQuad",
    "TileConfig",
    "StencilProgram",
    "extend",
    "compile_scheme",
    "forward",
    "inverse",
    "run_tiled",
    "run_reference",
    "run_without_barriers",
    "deinterleave",
    "interleave_quad",
]

PRECISION_DTYPES = {"single": np.float32, "double": np.float64}

# Quadruple component parities: (row, column), 0 = even pixel phase.
_PARITIES = ((0, 0), (0, 1), (1, 0), (1, 1))


def extend(index: int, size: int) -> int:
    """Whole-sample symmetric extension of a sample index into ``[0, size)``.

    Reflects about the first and last sample without repeating them:
    ``extend(-1, 8) == 1`` and ``extend(8, 8) == 6``.  The extension is
    periodic with period ``2*size - 2``, so arbitrarily distant indices fold
    back correctly.  A single-sample signal extends to its only value.
    """
    if size < 1:
        raise ValueError("size must be >= 1")
    if size == 1:
        return 0
    period = 2 * size - 2
    i = index % period
    if i >= size:
        i = period - i
    return i


def _extend_indices(idx: np.ndarray, size: int) -> np.ndarray:
    if size == 1:
        return np.zeros_like(idx)
    period = 2 * size - 2
    i = np.mod(idx, period)
    return np.where(i >= size, period - i, i)


def _component_read_indices(start: int, stop: int, offset: int, parity: int, comp_size: int) -> np.ndarray:
    """Global component indices read by a window ``[start, stop)`` at ``offset``.

    Out-of-range reads are mapped through the pixel-domain symmetric
    extension; reflection preserves pixel parity, so reads stay within the
    source component.
    """
    idx = np.arange(start + offset, stop + offset)
    pix = 2 * idx + parity
    pix = _extend_indices(pix, 2 * comp_size)
    return (pix - parity) >> 1


@dataclass(frozen=True)
class Image2D:
    """Row-major real-valued raster.

    Transforms require even dimensions (one quadruple per 2x2 block);
    :func:`forward` rejects odd sizes.  Subband rasters may be any shape.
    """

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("image data must be a non-empty 2-D array")
        if arr.dtype not in (np.float32, np.float64):
            arr = arr.astype(np.float64)
        object.__setattr__(self, "data", arr)

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def precision(self) -> str:
        return "single" if self.data.dtype == np.float32 else "double"

    @classmethod
    def random(cls, width: int, height: int, seed: int, precision: str = "double") -> "Image2D":
        rng = np.random.default_rng(seed)
        dtype = PRECISION_DTYPES[precision]
        return cls(rng.random((height, width), dtype=np.float64).astype(dtype))

    @classmethod
    def constant(cls, width: int, height: int, value: float = 1.0, precision: str = "double") -> "Image2D":
        dtype = PRECISION_DTYPES[precision]
        return cls(np.full((height, width), value, dtype=dtype))

    @classmethod
    def delta(cls, width: int, height: int, row: int, col: int, precision: str = "double") -> "Image2D":
        dtype = PRECISION_DTYPES[precision]
        data = np.zeros((height, width), dtype=dtype)
        data[row, col] = 1.0
        return cls(data)

    def astype(self, precision: str) -> "Image2D":
        return Image2D(self.data.astype(PRECISION_DTYPES[precision]))


@dataclass(frozen=True)
class SubbandQuad:
    """The four polyphase subbands of a single-level transform.

    ``ll`` is the even-row/even-column component; ``hl`` is high-pass along
    the horizontal axis (odd column), ``lh`` along the vertical one (odd
    row), and ``hh`` along both.
    """

    ll: Image2D
    hl: Image2D
    lh: Image2D
    hh: Image2D

    def __post_init__(self):
        shape = self.ll.data.shape
        for band in (self.hl, self.lh, self.hh):
            if band.data.shape != shape:
                raise ValueError("all four subbands must share dimensions")

    def components(self) -> list[np.ndarray]:
        return [self.ll.data, self.hl.data, self.lh.data, self.hh.data]

    def interleave(self) -> Image2D:
        return Image2D(interleave_quad(self.components()))

    @classmethod
    def from_components(cls, comps) -> "SubbandQuad":
        ll, hl, lh, hh = (Image2D(c) for c in comps)
        return cls(ll, hl, lh, hh)


@dataclass(frozen=True)
class TileConfig:
    """Tiling and worker configuration; sizes are in quadruple units.

    ``tile=None`` runs one tile covering the whole image.  The halo each
    tile reads from its neighbours is derived from the scheme, never set by
    hand.
    """

    tile: tuple[int, int] | None = None
    threads: int = 1

    def __post_init__(self):
        if self.tile is not None:
            tw, th = self.tile
            if tw < 1 or th < 1:
                raise ValueError("tile dimensions must be positive")
        if self.threads < 1:
            raise ValueError("thread count must be positive")


def deinterleave(image: Image2D) -> list[np.ndarray]:
    a = image.data
    if a.shape[0] % 2 or a.shape[1] % 2:
        raise ValueError(
            f"dimensions must be even, got {a.shape[1]}x{a.shape[0]}"
        )
    return [
        np.ascontiguousarray(a[0::2, 0::2]),
        np.ascontiguousarray(a[0::2, 1::2]),
        np.ascontiguousarray(a[1::2, 0::2]),
        np.ascontiguousarray(a[1::2, 1::2]),
    ]


def interleave_quad(comps) -> np.ndarray:
    rows, cols = comps[0].shape
    out = np.empty((2 * rows, 2 * cols), dtype=comps[0].dtype)
    out[0::2, 0::2] = comps[0]
    out[0::2, 1::2] = comps[1]
    out[1::2, 0::2] = comps[2]
    out[1::2, 1::2] = comps[3]
    return out


# -- stencil compilation -------------------------------------------------------


@dataclass(frozen=True)
class SubStepProgram:
    """One matrix lowered to per-target term lists."""

    label: str
    terms: tuple[tuple[tuple[int, int, int, float], ...], ...]  # per target: (src, dm, dn, coeff)
    reach: int


@dataclass(frozen=True)
class PassProgram:
    label: str
    kind: str
    barrier_before: bool
    substeps: tuple[SubStepProgram, ...]

    @property
    def reach(self) -> int:
        return sum(s.reach for s in self.substeps)


@dataclass(frozen=True)
class StencilProgram:
    scheme_name: str
    wavelet: str
    passes: tuple[PassProgram, ...]

    @property
    def halo(self) -> int:
        return max(p.reach for p in self.passes)


def _compile_matrix(m: StepMatrix) -> SubStepProgram:
    per_target = []
    for i in range(4):
        terms = []
        for j in range(4):
            for (km, kn), c in m.entries[i][j].terms.items():
                terms.append((j, -km, -kn, float(c)))
        # Fixed accumulation order keeps tiled/threaded runs bit-exact.
        terms.sort(key=lambda t: (t[1], t[2], t[0]))
        per_target.append(tuple(terms))
    return SubStepProgram(m.label, tuple(per_target), m.reach())


def compile_scheme(scheme: Scheme) -> StencilProgram:
    passes = tuple(
        PassProgram(
            label=p.label,
            kind=p.kind,
            barrier_before=p.barrier_before,
            substeps=tuple(_compile_matrix(m) for m in p.matrices),
        )
        for p in scheme.passes
    )
    return StencilProgram(scheme.name, scheme.wavelet, passes)


# -- executors -----------------------------------------------------------------


def _apply_substep(
    sub: SubStepProgram,
    state,  # list of 4 arrays covering window `win_in`
    win_in,  # (r0, r1, c0, c1) global component coords of `state`
    win_out,
    comp_shape,
    dtype,
):
    """Gather one sub-step from ``state`` onto the output window.

    Each source component is materialized once as the output window expanded
    by the sub-step reach, with image-edge overhang filled through the
    symmetric-extension index map; every term read is then a plain slice of
    that padded window.
    """
    r0o, r1o, c0o, c1o = win_out
    r0i, r1i, c0i, c1i = win_in
    rows_n, cols_n = r1o - r0o, c1o - c0o
    reach = sub.reach
    pr0, pr1 = r0o - reach, r1o + reach
    pc0, pc1 = c0o - reach, c1o + reach

    padded: dict[int, np.ndarray] = {}

    def padded_source(src: int) -> np.ndarray:
        arr = padded.get(src)
        if arr is None:
            if pr0 >= r0i and pr1 <= r1i and pc0 >= c0i and pc1 <= c1i:
                arr = state[src][pr0 - r0i : pr1 - r0i, pc0 - c0i : pc1 - c0i]
            else:
                # Interior block is a straight copy; only the image-edge
                # overhang strips go through the reflection index map.
                src_arr = state[src]
                prow, pcol = _PARITIES[src]
                rows_total, cols_total = pr1 - pr0, pc1 - pc0
                ir0, ir1 = max(pr0, 0), min(pr1, comp_shape[0])
                ic0, ic1 = max(pc0, 0), min(pc1, comp_shape[1])
                arr = np.empty((rows_total, cols_total), dtype=dtype)
                arr[ir0 - pr0 : ir1 - pr0, ic0 - pc0 : ic1 - pc0] = src_arr[
                    ir0 - r0i : ir1 - r0i, ic0 - c0i : ic1 - c0i
                ]
                n_top, n_bot = ir0 - pr0, pr1 - ir1
                n_left, n_right = ic0 - pc0, pc1 - ic1
                if n_left or n_right:
                    cidx = _component_read_indices(pc0, pc1, 0, pcol, comp_shape[1]) - c0i
                    mid = slice(ir0 - pr0, rows_total - n_bot)
                    row_block = src_arr[ir0 - r0i : ir1 - r0i]
                    if n_left:
                        arr[mid, :n_left] = row_block[:, cidx[:n_left]]
                    if n_right:
                        arr[mid, cols_total - n_right :] = row_block[:, cidx[cols_total - n_right :]]
                if n_top or n_bot:
                    ridx = _component_read_indices(pr0, pr1, 0, prow, comp_shape[0]) - r0i
                    cidx = _component_read_indices(pc0, pc1, 0, pcol, comp_shape[1]) - c0i
                    if n_top:
                        arr[:n_top] = src_arr[ridx[:n_top]][:, cidx]
                    if n_bot:
                        arr[rows_total - n_bot :] = src_arr[ridx[rows_total - n_bot :]][:, cidx]
            padded[src] = arr
        return arr

    out = []
    for tgt in range(4):
        acc = None
        for src, dm, dn, coeff in sub.terms[tgt]:
            a = padded_source(src)
            view = a[reach + dn : reach + dn + rows_n, reach + dm : reach + dm + cols_n]
            k = dtype.type(coeff)
            if acc is None:
                acc = view * k
            else:
                acc += view * k
        if acc is None:
            acc = np.zeros((rows_n, cols_n), dtype=dtype)
        out.append(acc)
    return out


def _clip_window(tile, reach, comp_shape):
    r0, r1, c0, c1 = tile
    return (
        max(0, r0 - reach),
        min(comp_shape[0], r1 + reach),
        max(0, c0 - reach),
        min(comp_shape[1], c1 + reach),
    )


def _run_pass_on_tile(pass_prog: PassProgram, comps, new_comps, tile, comp_shape, dtype):
    # Shrinking windows: start from the tile expanded by the whole fused
    # reach, lose one sub-step's reach per application, finish on the tile.
    remaining = pass_prog.reach
    win = _clip_window(tile, remaining, comp_shape)
    state = [c[win[0] : win[1], win[2] : win[3]] for c in comps]
    for sub in pass_prog.substeps:
        remaining -= sub.reach
        win_out = _clip_window(tile, remaining, comp_shape)
        state = _apply_substep(sub, state, win, win_out, comp_shape, dtype)
        win = win_out
    r0, r1, c0, c1 = tile
    for tgt in range(4):
        new_comps[tgt][r0:r1, c0:c1] = state[tgt]


def _tiles(comp_shape, cfg: TileConfig):
    rows, cols = comp_shape
    if cfg.tile is None:
        return [(0, rows, 0, cols)]
    tw, th = cfg.tile
    return [
        (r, min(r + th, rows), c, min(c + tw, cols))
        for r in range(0, rows, th)
        for c in range(0, cols, tw)
    ]


def run_tiled(program: StencilProgram, comps, cfg: TileConfig):
    """Run a compiled program over component arrays, tile by tile.

    The waits between passes realize the barriers: no tile starts pass
    ``k+1`` until every tile finished pass ``k``.
    """
    comp_shape = comps[0].shape
    if cfg.tile is not None:
        tw, th = cfg.tile
        halo = program.halo
        if tw < halo or th < halo:
            raise ValueError(
                f"tile {tw}x{th} is smaller than the scheme halo {halo}"
            )
    dtype = np.dtype(comps[0].dtype)
    tiles = _tiles(comp_shape, cfg)
    state = comps
    pool = ThreadPoolExecutor(max_workers=cfg.threads) if cfg.threads > 1 else None
    try:
        for pass_prog in program.passes:
            new_state = [np.empty_like(c) for c in state]
            if pool is None or len(tiles) == 1:
                for t in tiles:
                    _run_pass_on_tile(pass_prog, state, new_state, t, comp_shape, dtype)
            else:
                futures = [
                    pool.submit(_run_pass_on_tile, pass_prog, state, new_state, t, comp_shape, dtype)
                    for t in tiles
                ]
                for f in futures:
                    f.result()
            state = new_state
    finally:
        if pool is not None:
            pool.shutdown()
    return state


def run_reference(program: StencilProgram, comps):
    """Plain full-grid executor used as the tiling oracle."""
    comp_shape = comps[0].shape
    dtype = np.dtype(comps[0].dtype)
    full = (0, comp_shape[0], 0, comp_shape[1])
    state = list(comps)
    for pass_prog in program.passes:
        for sub in pass_prog.substeps:
            state = _apply_substep(sub, state, full, full, comp_shape, dtype)
    return state


def run_without_barriers(program: StencilProgram, comps, cfg: TileConfig):
    """Fault model: drop the inter-pass barriers.

    Each tile runs the entire program to completion before the next tile
    starts, updating the shared buffers in place.  Later tiles therefore
    read a mix of fresh and stale neighbour values -- the race a barrier
    prevents, made deterministic for use as a regression witness.
    """
    comp_shape = comps[0].shape
    dtype = np.dtype(comps[0].dtype)
    state = [c.copy() for c in comps]
    for tile in _tiles(comp_shape, cfg):
        r0, r1, c0, c1 = tile
        for pass_prog in program.passes:
            for sub in pass_prog.substeps:
                win = (r0, r1, c0, c1)
                out = _apply_substep(
                    sub, state, (0, comp_shape[0], 0, comp_shape[1]), win, comp_shape, dtype
                )
                for tgt in range(4):
                    state[tgt][r0:r1, c0:c1] = out[tgt]
    return state


# -- public transform API --------------------------------------------------------


def forward(image: Image2D, scheme: Scheme, cfg: TileConfig | None = None) -> SubbandQuad:
    """Single-level forward transform of an even-dimensioned image."""
    cfg = cfg or TileConfig()
    program = compile_scheme(scheme)
    comps = deinterleave(image)
    comps = run_tiled(program, comps, cfg)
    return SubbandQuad.from_components(comps)


def inverse(quad: SubbandQuad, scheme: Scheme, cfg: TileConfig | None = None) -> Image2D:
    """Invert :func:`forward`; ``scheme`` is the forward scheme."""
    cfg = cfg or TileConfig()
    program = compile_scheme(invert_scheme(scheme))
    comps = run_tiled(program, quad.components(), cfg)
    return Image2D(interleave_quad(comps))
