"""Construction of 2-D transform schemes from 1-D lifting plans.

A single-level 2-D DWT maps each 2x2 input block to a quadruple of wavelet
coefficients.  Throughout the package the quadruple is ordered

    1: even row, even column      3: odd row, even column
    2: even row, odd column       4: odd row, odd column

so that a horizontal predict lifts components 2 and 4 from 1 and 3, and a
vertical predict lifts 3 and 4 from 1 and 2.  Every scheme is an ordered list
of passes over that quadruple grid; each pass applies one or more 4x4
matrices of bivariate Laurent polynomials, and a barrier (a full
synchronization point) precedes each pass that reads its neighbours' results
from the previous pass.

Four schemes are built from the same lifting plan:

* ``separable-convolution``   -- two passes, one full filter bank per axis;
* ``separable-lifting``       -- four passes per predict/update pair;
* ``non-separable-lifting``   -- the horizontal and vertical steps of each
  pair fused into one spatial predict and one spatial update;
* ``non-separable-split``     -- the non-separable scheme with the constant
  parts of the lifting polynomials peeled off into barrier-free separable
  sub-steps, which lowers the arithmetic cost of the fused steps.

All four are symbolically equal: the product of their pass matrices is the
same 2-D polyphase transfer matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .laurent import (
    EXACT,
    FLOAT,
    LaurentPoly1,
    LaurentPoly2,
    PolyphaseComponents,
    embed_horizontal,
    embed_vertical,
    format_poly2,
    interleave,
    polyphase_split,
)

__all__ = [
    "LiftingPlan",
    "StepMatrix",
    "Pass",
    "Scheme",
    "SplitPolynomials",
    "SchemeConsistencyError",
    "SCHEME_NAMES",
    "build_separable_step_matrices",
    "build_nonseparable_step_matrices",
    "fuse",
    "polyphase_matrix_1d",
    "filters_from_plan",
    "polyphase_matrix_from_filters",
    "build_convolution_matrices",
    "split_constants",
    "build_scheme",
    "build_convolution_scheme",
    "build_separable_lifting_scheme",
    "build_nonseparable_scheme",
    "build_split_scheme",
    "invert_scheme",
    "apply_plan_1d",
    "invert_plan_1d",
    "format_scheme",
]

SCHEME_NAMES = (
    "separable-convolution",
    "separable-lifting",
    "non-separable-lifting",
    "non-separable-split",
)


class SchemeConsistencyError(ValueError):
    """A scheme failed an internal consistency check during construction."""


@dataclass(frozen=True)
class LiftingPlan:
    """A 1-D wavelet as an ordered list of predict/update lifting pairs.

    ``pairs[k] = (P, U)``: the predict filter estimates each odd sample from
    its even neighbours and the update filter corrects the even samples from
    the new odd ones.  ``scale``, when set, is the final ``(low_gain,
    high_gain)`` pair applied elementwise after all lifting pairs.
    """

    name: str
    pairs: tuple[tuple[LaurentPoly1, LaurentPoly1], ...]
    scale: tuple[float, float] | None = None
    mode: str = EXACT

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(tuple(pu) for pu in self.pairs))
        if len(self.pairs) < 1:
            raise ValueError("a lifting plan needs at least one predict/update pair")
        for p, u in self.pairs:
            if p.mode != self.mode or u.mode != self.mode:
                raise ValueError("lifting filters must match the plan's coefficient mode")


@dataclass(frozen=True)
class StepMatrix:
    """A 4x4 matrix of bivariate Laurent polynomials acting on the quadruple."""

    entries: tuple[tuple[LaurentPoly2, ...], ...]
    label: str

    def __post_init__(self):
        if len(self.entries) != 4 or any(len(r) != 4 for r in self.entries):
            raise ValueError("step matrices are 4x4")

    @property
    def mode(self) -> str:
        return self.entries[0][0].mode

    @classmethod
    def identity(cls, mode: str = EXACT, label: str = "identity") -> "StepMatrix":
        one = LaurentPoly2.one(mode)
        zero = LaurentPoly2.zero(mode)
        return cls(
            tuple(tuple(one if i == j else zero for j in range(4)) for i in range(4)),
            label,
        )

    @classmethod
    def diagonal(cls, gains, mode: str, label: str) -> "StepMatrix":
        zero = LaurentPoly2.zero(mode)
        return cls(
            tuple(
                tuple(
                    LaurentPoly2.constant(gains[i], mode) if i == j else zero
                    for j in range(4)
                )
                for i in range(4)
            ),
            label,
        )

    def __matmul__(self, other: "StepMatrix") -> "StepMatrix":
        zero = LaurentPoly2.zero(self.mode)
        rows = []
        for i in range(4):
            row = []
            for j in range(4):
                acc = zero
                for k in range(4):
                    a = self.entries[i][k]
                    b = other.entries[k][j]
                    if a.is_zero() or b.is_zero():
                        continue
                    acc = acc + a * b
                row.append(acc)
            rows.append(tuple(row))
        return StepMatrix(tuple(rows), f"{self.label}*{other.label}")

    def relabel(self, label: str) -> "StepMatrix":
        return StepMatrix(self.entries, label)

    def to_float(self) -> "StepMatrix":
        return StepMatrix(
            tuple(tuple(e.to_float() for e in row) for row in self.entries), self.label
        )

    def max_diff(self, other: "StepMatrix") -> float:
        return max(
            self.entries[i][j].max_diff(other.entries[i][j])
            for i in range(4)
            for j in range(4)
        )

    def equals(self, other: "StepMatrix", tol: float = 0.0) -> bool:
        if tol == 0.0 and self.mode == EXACT and other.mode == EXACT:
            return all(
                self.entries[i][j] == other.entries[i][j]
                for i in range(4)
                for j in range(4)
            )
        return self.max_diff(other) <= tol

    def is_unit_lower_triangular(self) -> bool:
        return all(self.entries[i][i].is_one() for i in range(4)) and all(
            self.entries[i][j].is_zero() for i in range(4) for j in range(i + 1, 4)
        )

    def is_unit_upper_triangular(self) -> bool:
        return all(self.entries[i][i].is_one() for i in range(4)) and all(
            self.entries[i][j].is_zero() for i in range(4) for j in range(i)
        )

    def is_diagonal(self) -> bool:
        return all(
            self.entries[i][j].is_zero() for i in range(4) for j in range(4) if i != j
        )

    def reach(self) -> int:
        return max(e.reach() for row in self.entries for e in row)

    def inverse(self) -> "StepMatrix":
        """Invert a unit-triangular or diagonal-of-constants step matrix.

        Unit-triangular matrices are inverted by symbolic back-substitution,
        which stays inside the Laurent ring.  Anything else has no guaranteed
        polynomial inverse and is rejected.
        """
        mode = self.mode
        if self.is_diagonal():
            gains = []
            for i in range(4):
                e = self.entries[i][i]
                if set(e.terms) != {(0, 0)}:
                    raise SchemeConsistencyError(
                        f"cannot invert non-constant diagonal pass {self.label!r}"
                    )
                c = e.terms[(0, 0)]
                gains.append(Fraction(1, 1) / c if mode == EXACT else 1.0 / c)
            return StepMatrix.diagonal(gains, mode, f"inv({self.label})")
        if self.is_unit_lower_triangular():
            order = range(4)
        elif self.is_unit_upper_triangular():
            order = range(3, -1, -1)
        else:
            raise SchemeConsistencyError(
                f"pass {self.label!r} is not unit triangular; no symbolic inverse"
            )
        zero = LaurentPoly2.zero(mode)
        one = LaurentPoly2.one(mode)
        inv = [[one if i == j else zero for j in range(4)] for i in range(4)]
        # Solve self @ inv = I column by column; the unit diagonal makes each
        # row a pure back-substitution.
        for j in range(4):
            for i in order:
                acc = one if i == j else zero
                for k in range(4):
                    if k == i:
                        continue
                    a = self.entries[i][k]
                    if a.is_zero() or inv[k][j].is_zero():
                        continue
                    acc = acc - a * inv[k][j]
                inv[i][j] = acc
        return StepMatrix(tuple(tuple(r) for r in inv), f"inv({self.label})")


@dataclass(frozen=True)
class Pass:
    """One barrier-delimited pass: an ordered chain of fused sub-steps.

    ``matrices`` are applied left to right with no synchronization in
    between; a plain lifting pass holds a single matrix.  ``kind`` tags how
    the pass is treated by op counting and inversion: ``lift`` (unit
    triangular, in-place accumulation), ``conv`` (full filter bank, written
    out of place) or ``scale`` (elementwise gains, needs no barrier).
    """

    matrices: tuple[StepMatrix, ...]
    barrier_before: bool = True
    kind: str = "lift"

    @property
    def label(self) -> str:
        return "+".join(m.label for m in self.matrices)

    def product(self) -> StepMatrix:
        acc = self.matrices[0]
        for m in self.matrices[1:]:
            acc = m @ acc
        return acc.relabel(self.label)

    def reach(self) -> int:
        return sum(m.reach() for m in self.matrices)


@dataclass(frozen=True)
class Scheme:
    """An ordered list of passes realizing one 2-D transform schedule."""

    name: str
    wavelet: str
    passes: tuple[Pass, ...]
    plan: LiftingPlan
    inverted: bool = False

    @property
    def mode(self) -> str:
        return self.plan.mode

    @property
    def steps(self) -> int:
        """Number of barrier-delimited passes (the synchronization count)."""
        return sum(1 for p in self.passes if p.barrier_before)

    def transfer_matrix(self) -> StepMatrix:
        """Symbolic product of all pass matrices in application order."""
        acc = None
        for p in self.passes:
            m = p.product()
            acc = m if acc is None else m @ acc
        return acc.relabel(f"{self.name}({self.wavelet})")


@dataclass(frozen=True)
class SplitPolynomials:
    """Constant/remainder split of one predict/update pair: P = p0 + p1, U = u0 + u1."""

    p0: object
    u0: object
    p1: LaurentPoly1
    u1: LaurentPoly1


# -- step matrix builders ----------------------------------------------------


def _as2(p: LaurentPoly1, axis: str) -> LaurentPoly2:
    return embed_horizontal(p) if axis == "h" else embed_vertical(p)


def build_separable_step_matrices(
    pair: tuple[LaurentPoly1, LaurentPoly1],
) -> tuple[StepMatrix, StepMatrix, StepMatrix, StepMatrix]:
    """The four 1-axis lifting step matrices of one predict/update pair.

    Returns ``(predict_h, predict_v, update_h, update_v)``.  The horizontal
    predict carries the predict filter at entries (2,1) and (4,3); the
    vertical variants carry the transposed filter at (3,1)/(4,2) and the
    updates mirror this above the diagonal.
    """
    p, u = pair
    mode = p.mode
    zero = LaurentPoly2.zero(mode)
    one = LaurentPoly2.one(mode)
    ph = _as2(p, "h")
    pv = _as2(p, "h").transpose()
    uh = _as2(u, "h")
    uv = _as2(u, "h").transpose()

    predict_h = StepMatrix(
        (
            (one, zero, zero, zero),
            (ph, one, zero, zero),
            (zero, zero, one, zero),
            (zero, zero, ph, one),
        ),
        "predict-h",
    )
    predict_v = StepMatrix(
        (
            (one, zero, zero, zero),
            (zero, one, zero, zero),
            (pv, zero, one, zero),
            (zero, pv, zero, one),
        ),
        "predict-v",
    )
    update_h = StepMatrix(
        (
            (one, uh, zero, zero),
            (zero, one, zero, zero),
            (zero, zero, one, uh),
            (zero, zero, zero, one),
        ),
        "update-h",
    )
    update_v = StepMatrix(
        (
            (one, zero, uv, zero),
            (zero, one, zero, uv),
            (zero, zero, one, zero),
            (zero, zero, zero, one),
        ),
        "update-v",
    )
    return predict_h, predict_v, update_h, update_v


def build_nonseparable_step_matrices(
    pair: tuple[LaurentPoly1, LaurentPoly1],
) -> tuple[StepMatrix, StepMatrix]:
    """The fused spatial predict and spatial update matrices of one pair.

    The spatial predict mixes both axes: component 4 receives the cross term
    ``P P*`` from component 1 in addition to the two 1-axis contributions.
    """
    p, u = pair
    mode = p.mode
    zero = LaurentPoly2.zero(mode)
    one = LaurentPoly2.one(mode)
    ph, uh = _as2(p, "h"), _as2(u, "h")
    pv, uv = ph.transpose(), uh.transpose()
    ppt = ph * pv
    uut = uh * uv

    predict = StepMatrix(
        (
            (one, zero, zero, zero),
            (ph, one, zero, zero),
            (pv, zero, one, zero),
            (ppt, pv, ph, one),
        ),
        "predict-2d",
    )
    update = StepMatrix(
        (
            (one, uh, uv, uut),
            (zero, one, zero, uv),
            (zero, zero, one, uh),
            (zero, zero, zero, one),
        ),
        "update-2d",
    )
    return predict, update


def fuse(a: StepMatrix, b: StepMatrix) -> StepMatrix:
    """Symbolic product ``a @ b`` of two step matrices, ``b`` applied first."""
    return a @ b


# -- 1-D polyphase algebra ---------------------------------------------------

Mat2 = tuple[tuple[LaurentPoly1, LaurentPoly1], tuple[LaurentPoly1, LaurentPoly1]]


def _mat2_mul(a: Mat2, b: Mat2) -> Mat2:
    return tuple(
        tuple(
            a[i][0] * b[0][j] + a[i][1] * b[1][j]
            for j in range(2)
        )
        for i in range(2)
    )


def polyphase_matrix_1d(plan: LiftingPlan, inverse: bool = False) -> Mat2:
    """Multiply out the lifting factorization into one 2x2 polyphase matrix.

    The matrix acts on the column ``[even; odd]`` of input phases and yields
    ``[low; high]``; the inverse variant multiplies the per-step inverses in
    reverse order.
    """
    mode = plan.mode
    zero = LaurentPoly1.zero(mode)
    one = LaurentPoly1.one(mode)

    def predict_mat(p):
        return ((one, zero), (p, one))

    def update_mat(u):
        return ((one, u), (zero, one))

    def scale_mat(lo, hi):
        return (
            (LaurentPoly1({0: lo}, mode), zero),
            (zero, LaurentPoly1({0: hi}, mode)),
        )

    steps: list[tuple[str, object]] = []
    for p, u in plan.pairs:
        steps.append(("predict", p))
        steps.append(("update", u))
    if plan.scale is not None:
        steps.append(("scale", plan.scale))

    if inverse:
        inverted: list[tuple[str, object]] = []
        for kind, arg in reversed(steps):
            if kind == "scale":
                lo, hi = arg
                if mode == EXACT:
                    inverted.append(("scale", (Fraction(1, 1) / lo, Fraction(1, 1) / hi)))
                else:
                    inverted.append(("scale", (1.0 / lo, 1.0 / hi)))
            else:
                inverted.append((kind, -arg))
        steps = inverted

    acc: Mat2 = ((one, zero), (zero, one))
    for kind, arg in steps:
        if kind == "predict":
            f = predict_mat(arg)
        elif kind == "update":
            f = update_mat(arg)
        else:
            f = scale_mat(*arg)
        acc = _mat2_mul(f, acc)
    return acc


def filters_from_plan(plan: LiftingPlan) -> tuple[LaurentPoly1, LaurentPoly1]:
    """Recover the equivalent low/high analysis filters from the lifting plan.

    Row ``[A, B]`` of the polyphase matrix interleaves back to the filter
    ``G(z) = A(z^2) + z * B(z^2)`` (the odd input phase carries the unit
    delay, so its column is advanced by one on reassembly).
    """
    m = polyphase_matrix_1d(plan)

    def row_to_filter(a: LaurentPoly1, b: LaurentPoly1) -> LaurentPoly1:
        out = {2 * k: c for k, c in a.terms.items()}
        for k, c in b.terms.items():
            out[2 * k - 1] = c
        return LaurentPoly1(out, plan.mode)

    g0 = row_to_filter(m[0][0], m[0][1])
    g1 = row_to_filter(m[1][0], m[1][1])
    return g0, g1


def polyphase_matrix_from_filters(
    g0: LaurentPoly1, g1: LaurentPoly1
) -> Mat2:
    """Assemble the polyphase matrix directly from filter taps via phase split."""

    def row(g: LaurentPoly1):
        pc: PolyphaseComponents = polyphase_split(g)
        return (pc.even, pc.odd.shift(1))  # odd column carries z^{-1}

    return (row(g0), row(g1))


def _mat2_max_diff(a: Mat2, b: Mat2) -> float:
    diff = 0.0
    for i in range(2):
        for j in range(2):
            keys = set(a[i][j].terms) | set(b[i][j].terms)
            for k in keys:
                diff = max(
                    diff,
                    abs(float(a[i][j].terms.get(k, 0)) - float(b[i][j].terms.get(k, 0))),
                )
    return diff


def build_convolution_matrices(
    plan: LiftingPlan, tol: float = 1e-10
) -> tuple[StepMatrix, StepMatrix]:
    """Build the horizontal and vertical 2-D convolution pass matrices.

    The 1-D polyphase matrix is built twice -- once by multiplying out the
    lifting factorization and once from the recovered filter taps via phase
    splitting -- and the two must agree before either is embedded into 2-D.
    A disagreement means the plan's filters and its lifting product are
    inconsistent.
    """
    from_lifting = polyphase_matrix_1d(plan)
    g0, g1 = filters_from_plan(plan)
    from_filters = polyphase_matrix_from_filters(g0, g1)
    if plan.mode == EXACT:
        if from_filters != from_lifting:
            raise SchemeConsistencyError(
                f"plan {plan.name!r}: filter polyphase matrix disagrees with lifting product"
            )
    elif _mat2_max_diff(from_filters, from_lifting) > tol:
        raise SchemeConsistencyError(
            f"plan {plan.name!r}: filter polyphase matrix disagrees with lifting product "
            f"beyond {tol}"
        )

    (a, b), (c, d) = from_lifting
    zero = LaurentPoly2.zero(plan.mode)
    ah, bh, ch, dh = (embed_horizontal(f) for f in (a, b, c, d))
    av, bv, cv, dv = (embed_vertical(f) for f in (a, b, c, d))
    conv_h = StepMatrix(
        (
            (ah, bh, zero, zero),
            (ch, dh, zero, zero),
            (zero, zero, ah, bh),
            (zero, zero, ch, dh),
        ),
        "conv-h",
    )
    conv_v = StepMatrix(
        (
            (av, zero, bv, zero),
            (zero, av, zero, bv),
            (cv, zero, dv, zero),
            (zero, cv, zero, dv),
        ),
        "conv-v",
    )
    return conv_h, conv_v


# -- constant split ----------------------------------------------------------


def split_constants(
    pair: tuple[LaurentPoly1, LaurentPoly1],
) -> SplitPolynomials:
    """Split each lifting polynomial into its constant term and the remainder."""
    p, u = pair
    p0 = p.constant_term()
    u0 = u.constant_term()
    p1 = LaurentPoly1({k: c for k, c in p.terms.items() if k != 0}, p.mode)
    u1 = LaurentPoly1({k: c for k, c in u.terms.items() if k != 0}, u.mode)
    return SplitPolynomials(p0=p0, u0=u0, p1=p1, u1=u1)


# -- scheme builders ---------------------------------------------------------


def _scale_pass(plan: LiftingPlan) -> Pass | None:
    if plan.scale is None:
        return None
    lo, hi = plan.scale
    if plan.mode == EXACT:
        gains = (
            Fraction(lo) * Fraction(lo),
            Fraction(1, 1),
            Fraction(1, 1),
            Fraction(hi) * Fraction(hi),
        )
    else:
        gains = (lo * lo, 1.0, 1.0, hi * hi)
    m = StepMatrix.diagonal(gains, plan.mode, "scale")
    # Elementwise, touches no neighbours: no barrier, not a counted step.
    return Pass(matrices=(m,), barrier_before=False, kind="scale")


def build_separable_lifting_scheme(plan: LiftingPlan) -> Scheme:
    passes: list[Pass] = []
    for k, pair in enumerate(plan.pairs):
        th, tv, sh, sv = build_separable_step_matrices(pair)
        suffix = f"#{k + 1}" if len(plan.pairs) > 1 else ""
        for m in (th, tv, sh, sv):
            passes.append(Pass(matrices=(m.relabel(m.label + suffix),)))
    sp = _scale_pass(plan)
    if sp is not None:
        passes.append(sp)
    return Scheme("separable-lifting", plan.name, tuple(passes), plan)


def build_nonseparable_scheme(plan: LiftingPlan) -> Scheme:
    passes: list[Pass] = []
    for k, pair in enumerate(plan.pairs):
        t, s = build_nonseparable_step_matrices(pair)
        suffix = f"#{k + 1}" if len(plan.pairs) > 1 else ""
        passes.append(Pass(matrices=(t.relabel(t.label + suffix),)))
        passes.append(Pass(matrices=(s.relabel(s.label + suffix),)))
    sp = _scale_pass(plan)
    if sp is not None:
        passes.append(sp)
    return Scheme("non-separable-lifting", plan.name, tuple(passes), plan)


def build_split_scheme(plan: LiftingPlan) -> Scheme:
    """Non-separable scheme with the constant split applied.

    Each spatial step becomes a barrier-free chain: the non-separable
    remainder (whose polynomials lost their constant terms) runs first and
    reads only the pass input; the constant parts then run as two separable
    sub-steps that touch nothing outside their own quadruple.  The chain's
    product equals the unsplit spatial step exactly, because the spatial
    predict (and update) matrices compose additively in their parameter.
    """
    mode = plan.mode
    passes: list[Pass] = []
    for k, pair in enumerate(plan.pairs):
        sp = split_constants(pair)
        suffix = f"#{k + 1}" if len(plan.pairs) > 1 else ""
        p0 = LaurentPoly1({0: sp.p0}, mode)
        u0 = LaurentPoly1({0: sp.u0}, mode)
        t_rem, s_rem = build_nonseparable_step_matrices((sp.p1, sp.u1))
        th0, tv0, sh0, sv0 = build_separable_step_matrices((p0, u0))
        passes.append(
            Pass(
                matrices=(
                    t_rem.relabel("predict-rest" + suffix),
                    th0.relabel("predict-const-h" + suffix),
                    tv0.relabel("predict-const-v" + suffix),
                )
            )
        )
        passes.append(
            Pass(
                matrices=(
                    s_rem.relabel("update-rest" + suffix),
                    sh0.relabel("update-const-h" + suffix),
                    sv0.relabel("update-const-v" + suffix),
                )
            )
        )
    scale = _scale_pass(plan)
    if scale is not None:
        passes.append(scale)
    scheme = Scheme("non-separable-split", plan.name, tuple(passes), plan)

    # The split is an identity rewrite; verify it against the unsplit scheme.
    unsplit = build_nonseparable_scheme(plan)
    tol = 0.0 if mode == EXACT else 1e-12
    if not scheme.transfer_matrix().equals(unsplit.transfer_matrix(), tol):
        raise SchemeConsistencyError(
            f"constant split changed the transfer matrix for plan {plan.name!r}"
        )
    return scheme


def build_convolution_scheme(plan: LiftingPlan) -> Scheme:
    conv_h, conv_v = build_convolution_matrices(plan)
    passes = (
        Pass(matrices=(conv_h,), kind="conv"),
        Pass(matrices=(conv_v,), kind="conv"),
    )
    return Scheme("separable-convolution", plan.name, passes, plan)


_BUILDERS = {
    "separable-convolution": build_convolution_scheme,
    "separable-lifting": build_separable_lifting_scheme,
    "non-separable-lifting": build_nonseparable_scheme,
    "non-separable-split": build_split_scheme,
}


def build_scheme(name: str, plan: LiftingPlan) -> Scheme:
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise ValueError(
            f"unknown scheme {name!r}; expected one of {', '.join(SCHEME_NAMES)}"
        ) from None
    return builder(plan)


# -- inversion ----------------------------------------------------------------


def invert_scheme(scheme: Scheme) -> Scheme:
    """Scheme computing the inverse transform.

    Passes are reversed, fused chains are reversed internally, and every
    matrix is replaced by its symbolic inverse.  Convolution passes are
    rebuilt from the inverted lifting factorization instead, since the full
    filter-bank matrix is not triangular.
    """
    if any(p.kind == "conv" for p in scheme.passes):
        now_inverted = not scheme.inverted
        (a, b), (c, d) = polyphase_matrix_1d(scheme.plan, inverse=now_inverted)
        zero = LaurentPoly2.zero(scheme.mode)
        ah, bh, ch, dh = (embed_horizontal(f) for f in (a, b, c, d))
        av, bv, cv, dv = (embed_vertical(f) for f in (a, b, c, d))
        m_h = StepMatrix(
            (
                (ah, bh, zero, zero),
                (ch, dh, zero, zero),
                (zero, zero, ah, bh),
                (zero, zero, ch, dh),
            ),
            "conv-h",
        )
        m_v = StepMatrix(
            (
                (av, zero, bv, zero),
                (zero, av, zero, bv),
                (cv, zero, dv, zero),
                (zero, cv, zero, dv),
            ),
            "conv-v",
        )
        # Forward order is horizontal then vertical; the inverse unwinds it.
        ordered = (m_v, m_h) if now_inverted else (m_h, m_v)
        passes = tuple(Pass(matrices=(m,), kind="conv") for m in ordered)
        return Scheme(scheme.name, scheme.wavelet, passes, scheme.plan, inverted=now_inverted)

    inv_passes = []
    for p in reversed(scheme.passes):
        inv_matrices = tuple(m.inverse() for m in reversed(p.matrices))
        inv_passes.append(
            Pass(matrices=inv_matrices, barrier_before=p.barrier_before, kind=p.kind)
        )
    return Scheme(
        scheme.name,
        scheme.wavelet,
        tuple(inv_passes),
        scheme.plan,
        inverted=not scheme.inverted,
    )


# -- reference 1-D executor ----------------------------------------------------
#
# Small, slow, and kept independent of the 2-D engine: used as an oracle to
# pin down the phase and delay conventions.


def _conv_apply(target, source, filt: LaurentPoly1, extend_src):
    n = len(target)
    for i in range(n):
        acc = target[i]
        for k, c in sorted(filt.terms.items()):
            acc += float(c) * source[extend_src(i - k)]
        target[i] = acc
    return target


def apply_plan_1d(plan: LiftingPlan, samples: list[float]) -> tuple[list[float], list[float]]:
    """Forward 1-D transform of an even-length signal; returns (low, high)."""
    if len(samples) % 2:
        raise ValueError("signal length must be even")
    from .engine import extend  # local import; engine depends on schemes

    size = len(samples)
    even = [float(samples[2 * i]) for i in range(size // 2)]
    odd = [float(samples[2 * i + 1]) for i in range(size // 2)]

    def ext_even(i):
        return extend(2 * i, size) // 2

    def ext_odd(i):
        return (extend(2 * i + 1, size) - 1) // 2

    for p, u in plan.pairs:
        odd = _conv_apply(odd, even, p, ext_even)
        even = _conv_apply(even, odd, u, ext_odd)
    if plan.scale is not None:
        lo, hi = plan.scale
        even = [lo * v for v in even]
        odd = [hi * v for v in odd]
    return even, odd


def invert_plan_1d(plan: LiftingPlan, low: list[float], high: list[float]) -> list[float]:
    """Inverse of :func:`apply_plan_1d`."""
    from .engine import extend

    even = [float(v) for v in low]
    odd = [float(v) for v in high]
    size = 2 * len(even)

    def ext_even(i):
        return extend(2 * i, size) // 2

    def ext_odd(i):
        return (extend(2 * i + 1, size) - 1) // 2

    if plan.scale is not None:
        lo, hi = plan.scale
        even = [v / lo for v in even]
        odd = [v / hi for v in odd]
    for p, u in reversed(plan.pairs):
        even = _conv_apply(even, odd, -u, ext_odd)
        odd = _conv_apply(odd, even, -p, ext_even)
    out = [0.0] * size
    out[0::2] = even
    out[1::2] = odd
    return out


# -- serialization -------------------------------------------------------------


def format_step_matrix(m: StepMatrix) -> str:
    cells = [[format_poly2(e) for e in row] for row in m.entries]
    widths = [max(len(cells[i][j]) for i in range(4)) for j in range(4)]
    lines = [f"{m.label}:"]
    for row in cells:
        padded = "   ".join(c.rjust(w) for c, w in zip(row, widths))
        lines.append(f"  [ {padded} ]")
    return "\n".join(lines)


def format_scheme(scheme: Scheme) -> str:
    """Human-readable rendering of a scheme, one pass per block."""
    lines = [
        f"scheme {scheme.name} wavelet={scheme.wavelet} "
        f"steps={scheme.steps} passes={len(scheme.passes)}"
    ]
    for idx, p in enumerate(scheme.passes, start=1):
        barrier = "barrier" if p.barrier_before else "no barrier"
        lines.append(f"pass {idx} ({barrier}, kind={p.kind}):")
        for m in p.matrices:
            lines.append(format_step_matrix(m))
    return "\n".join(lines)
