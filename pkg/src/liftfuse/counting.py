"""Step and arithmetic-operation accounting for schemes.

Counts are per output quadruple (one 2x2 input block).  The step count is
the number of barrier-delimited passes; the elementwise scale pass of the
9/7 wavelet needs no synchronization and is therefore not a step.

Several counting conventions are provided because published tables rarely
state theirs.  A term is *self-referential* when it reads the destination
sample itself (same component, zero offset).

``mac``
    One op per multiply-accumulate arrow between distinct operands.  In the
    in-place lifting passes the self term is the accumulation destination,
    not an arrow; in an out-of-place convolution pass every tap is an arrow.
    The elementwise scale pass has no arrows.  Under this convention the
    separable lifting costs 16 (5/3) and 32 (9/7) ops per quadruple and the
    split non-separable scheme 18 and 36.

``mac-no-scale``
    ``mac`` with scale passes removed before counting.  Coincides with
    ``mac`` for the built-in wavelets; kept so reports can state explicitly
    that scaling was excluded.

``mul-folded``
    Real multiplies assuming taps with an identical coefficient are summed
    first and multiplied once (the usual symmetric-filter folding).  Unit
    self terms of in-place passes stay free; everything in a convolution
    pass counts, including unit taps.  Gives 20 for the 5/3 separable
    convolution.
"""

from __future__ import annotations

from dataclasses import dataclass

from .schemes import Pass, Scheme, StepMatrix

__all__ = ["CONVENTIONS", "OpCountReport", "count_operations", "format_count_table"]

CONVENTIONS = ("mac", "mac-no-scale", "mul-folded")


@dataclass(frozen=True)
class OpCountReport:
    scheme: str
    wavelet: str
    steps: int
    ops: int
    convention: str
    per_pass: tuple[tuple[str, int], ...]


def _is_self(tgt: int, src: int, offsets: tuple[int, int]) -> bool:
    return tgt == src and offsets == (0, 0)


def _count_matrix_mac(m: StepMatrix, kind: str) -> int:
    count = 0
    for i in range(4):
        for j in range(4):
            for (km, kn), c in m.entries[i][j].terms.items():
                if kind != "conv" and _is_self(i, j, (km, kn)):
                    continue
                count += 1
    return count


def _count_matrix_folded(m: StepMatrix, kind: str) -> int:
    count = 0
    for i in range(4):
        for j in range(4):
            groups = set()
            for (km, kn), c in m.entries[i][j].terms.items():
                if kind != "conv" and _is_self(i, j, (km, kn)) and c == 1:
                    continue
                groups.add(c)
            count += len(groups)
    return count


def _count_pass(p: Pass, convention: str) -> int:
    if convention == "mac-no-scale" and p.kind == "scale":
        return 0
    if convention in ("mac", "mac-no-scale"):
        return sum(_count_matrix_mac(m, p.kind) for m in p.matrices)
    if convention == "mul-folded":
        return sum(_count_matrix_folded(m, p.kind) for m in p.matrices)
    raise ValueError(f"unknown counting convention {convention!r}")


def count_operations(scheme: Scheme, convention: str = "mac") -> OpCountReport:
    """Count steps and per-quadruple arithmetic ops under a named convention."""
    if convention not in CONVENTIONS:
        raise ValueError(
            f"unknown counting convention {convention!r}; expected one of {CONVENTIONS}"
        )
    per_pass = tuple((p.label, _count_pass(p, convention)) for p in scheme.passes)
    return OpCountReport(
        scheme=scheme.name,
        wavelet=scheme.wavelet,
        steps=scheme.steps,
        ops=sum(n for _, n in per_pass),
        convention=convention,
        per_pass=per_pass,
    )


def format_count_table(wavelet: str, schemes, conventions=CONVENTIONS) -> str:
    """Render a steps/ops table, one scheme per row and one ops column per convention."""
    headers = ["scheme", "steps"] + [f"ops[{c}]" for c in conventions]
    rows = []
    for scheme in schemes:
        reports = [count_operations(scheme, c) for c in conventions]
        rows.append([scheme.name, str(scheme.steps)] + [str(r.ops) for r in reports])
    widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(headers)]
    lines = [f"wavelet: {wavelet}  (ops per output quadruple)"]
    lines.append("  ".join(h.ljust(w) if i == 0 else h.rjust(w) for i, (h, w) in enumerate(zip(headers, widths))))
    for r in rows:
        lines.append(
            "  ".join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(r, widths)))
        )
    return "\n".join(lines)
