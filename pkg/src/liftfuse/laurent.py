"""Laurent polynomial arithmetic for wavelet filter algebra.

Polynomials are stored as sparse term maps ``{exponent: coefficient}`` where
the key ``k`` stands for the monomial ``z^{-k}`` (the z-transform convention:
a filter tap at delay ``k`` contributes ``g_k * z^{-k}``).  Bivariate
polynomials use ``(k_m, k_n)`` keys, ``m`` being the horizontal image axis and
``n`` the vertical one.

Coefficients live in one of two modes:

* ``exact``  -- ``fractions.Fraction``, always in lowest terms.  Used for
  wavelets with rational lifting steps so that algebraic identities can be
  proved bit-exactly.
* ``float``  -- IEEE doubles, for wavelets with irrational constants.

Mixing modes in one operation is an error; promotion to float is explicit
via :meth:`LaurentPoly1.to_float` / :meth:`LaurentPoly2.to_float`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

__all__ = [
    "EXACT",
    "FLOAT",
    "CoefficientModeError",
    "LaurentPoly1",
    "LaurentPoly2",
    "PolyphaseComponents",
    "polyphase_split",
    "interleave",
    "embed_horizontal",
    "embed_vertical",
    "format_poly1",
    "format_poly2",
]

EXACT = "exact"
FLOAT = "float"


class CoefficientModeError(TypeError):
    """Raised when exact-rational and float operands are mixed implicitly."""


def _check_mode(mode: str) -> str:
    if mode not in (EXACT, FLOAT):
        raise ValueError(f"unknown coefficient mode: {mode!r}")
    return mode


def _coerce(value, mode: str):
    if mode == EXACT:
        if isinstance(value, float):
            raise CoefficientModeError(
                "float coefficient in exact mode; promote explicitly with to_float()"
            )
        return value if isinstance(value, Fraction) else Fraction(value)
    return float(value)


def _require_same_mode(a, b, op: str) -> None:
    if a.mode != b.mode:
        raise CoefficientModeError(
            f"cannot {op} {a.mode} and {b.mode} polynomials; promotion is explicit"
        )


@dataclass(frozen=True)
class LaurentPoly1:
    """Finite univariate Laurent polynomial ``G(z) = sum_k g_k z^{-k}``."""

    terms: Mapping[int, object]
    mode: str = EXACT

    def __post_init__(self):
        _check_mode(self.mode)
        clean = {
            int(k): _coerce(c, self.mode)
            for k, c in self.terms.items()
            if c != 0
        }
        object.__setattr__(self, "terms", clean)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, mode: str = EXACT) -> "LaurentPoly1":
        return cls({}, mode)

    @classmethod
    def one(cls, mode: str = EXACT) -> "LaurentPoly1":
        return cls({0: 1}, mode)

    @classmethod
    def monomial(cls, k: int, coeff=1, mode: str = EXACT) -> "LaurentPoly1":
        """The single term ``coeff * z^{-k}``."""
        return cls({k: coeff}, mode)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "LaurentPoly1") -> "LaurentPoly1":
        _require_same_mode(self, other, "add")
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return LaurentPoly1(out, self.mode)

    def __neg__(self) -> "LaurentPoly1":
        return LaurentPoly1({k: -c for k, c in self.terms.items()}, self.mode)

    def __sub__(self, other: "LaurentPoly1") -> "LaurentPoly1":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly1") -> "LaurentPoly1":
        _require_same_mode(self, other, "multiply")
        out: dict[int, object] = {}
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                k = ka + kb
                out[k] = out.get(k, 0) + ca * cb
        return LaurentPoly1(out, self.mode)

    def scale(self, c) -> "LaurentPoly1":
        return LaurentPoly1({k: v * _coerce(c, self.mode) for k, v in self.terms.items()}, self.mode)

    def shift(self, dk: int) -> "LaurentPoly1":
        """Multiply by ``z^{-dk}`` (add ``dk`` to every stored exponent)."""
        return LaurentPoly1({k + dk: c for k, c in self.terms.items()}, self.mode)

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self):
        return self.terms.get(0, _coerce(0, self.mode))

    def support(self) -> set[int]:
        return set(self.terms)

    def reach(self) -> int:
        """Largest |exponent| appearing in the polynomial (0 for constants)."""
        return max((abs(k) for k in self.terms), default=0)

    def tap_count(self) -> int:
        return len(self.terms)

    def to_float(self) -> "LaurentPoly1":
        return LaurentPoly1({k: float(c) for k, c in self.terms.items()}, FLOAT)

    def eval(self, z: complex) -> complex:
        """Evaluate ``sum_k g_k z^{-k}`` at a nonzero point."""
        return sum(complex(c) * z ** (-k) for k, c in self.terms.items())

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly1):
            return NotImplemented
        return self.mode == other.mode and self.terms == other.terms

    def __hash__(self):
        return hash((self.mode, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"LaurentPoly1({format_poly1(self)!r}, mode={self.mode})"


@dataclass(frozen=True)
class LaurentPoly2:
    """Finite bivariate Laurent polynomial in ``z_m`` (horizontal) and ``z_n`` (vertical).

    ``G(z_m, z_n) = sum g_{k_m,k_n} z_m^{-k_m} z_n^{-k_n}``; keys are
    ``(k_m, k_n)`` pairs.
    """

    terms: Mapping[tuple[int, int], object]
    mode: str = EXACT

    def __post_init__(self):
        _check_mode(self.mode)
        clean = {
            (int(k[0]), int(k[1])): _coerce(c, self.mode)
            for k, c in self.terms.items()
            if c != 0
        }
        object.__setattr__(self, "terms", clean)

    @classmethod
    def zero(cls, mode: str = EXACT) -> "LaurentPoly2":
        return cls({}, mode)

    @classmethod
    def one(cls, mode: str = EXACT) -> "LaurentPoly2":
        return cls({(0, 0): 1}, mode)

    @classmethod
    def constant(cls, c, mode: str = EXACT) -> "LaurentPoly2":
        return cls({(0, 0): c}, mode)

    def __add__(self, other: "LaurentPoly2") -> "LaurentPoly2":
        _require_same_mode(self, other, "add")
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return LaurentPoly2(out, self.mode)

    def __neg__(self) -> "LaurentPoly2":
        return LaurentPoly2({k: -c for k, c in self.terms.items()}, self.mode)

    def __sub__(self, other: "LaurentPoly2") -> "LaurentPoly2":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly2") -> "LaurentPoly2":
        _require_same_mode(self, other, "multiply")
        out: dict[tuple[int, int], object] = {}
        for (ma, na), ca in self.terms.items():
            for (mb, nb), cb in other.terms.items():
                k = (ma + mb, na + nb)
                out[k] = out.get(k, 0) + ca * cb
        return LaurentPoly2(out, self.mode)

    def scale(self, c) -> "LaurentPoly2":
        return LaurentPoly2({k: v * _coerce(c, self.mode) for k, v in self.terms.items()}, self.mode)

    def transpose(self) -> "LaurentPoly2":
        """Swap the two variables: ``G*(z_m, z_n) = G(z_n, z_m)``.

        Reorients a filter from one image axis to the other; an involution
        and a ring homomorphism.
        """
        return LaurentPoly2({(kn, km): c for (km, kn), c in self.terms.items()}, self.mode)

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {(0, 0): _coerce(1, self.mode)}

    def support(self) -> set[tuple[int, int]]:
        return set(self.terms)

    def reach(self) -> int:
        return max((max(abs(km), abs(kn)) for km, kn in self.terms), default=0)

    def tap_count(self) -> int:
        return len(self.terms)

    def to_float(self) -> "LaurentPoly2":
        return LaurentPoly2({k: float(c) for k, c in self.terms.items()}, FLOAT)

    def eval(self, zm: complex, zn: complex) -> complex:
        return sum(
            complex(c) * zm ** (-km) * zn ** (-kn)
            for (km, kn), c in self.terms.items()
        )

    def max_diff(self, other: "LaurentPoly2") -> float:
        """Largest absolute coefficient difference between two polynomials."""
        keys = set(self.terms) | set(other.terms)
        return max(
            (abs(float(self.terms.get(k, 0)) - float(other.terms.get(k, 0))) for k in keys),
            default=0.0,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly2):
            return NotImplemented
        return self.mode == other.mode and self.terms == other.terms

    def __hash__(self):
        return hash((self.mode, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"LaurentPoly2({format_poly2(self)!r}, mode={self.mode})"


@dataclass(frozen=True)
class PolyphaseComponents:
    """Even/odd phase split of a univariate polynomial.

    The split satisfies ``G(z) = even(z^2) + z^{-1} * odd(z^2)``: the even
    component collects taps at exponents ``k = 0 (mod 2)``, the odd component
    the taps at ``k = 1 (mod 2)`` and carries the unit delay.
    """

    even: LaurentPoly1
    odd: LaurentPoly1


def polyphase_split(g: LaurentPoly1) -> PolyphaseComponents:
    """Split a polynomial into its even and odd phase components."""
    even: dict[int, object] = {}
    odd: dict[int, object] = {}
    for k, c in g.terms.items():
        if k % 2 == 0:
            even[k // 2] = c
        else:
            odd[(k - 1) // 2] = c
    return PolyphaseComponents(
        LaurentPoly1(even, g.mode), LaurentPoly1(odd, g.mode)
    )


def interleave(components: PolyphaseComponents) -> LaurentPoly1:
    """Inverse of :func:`polyphase_split`: rebuild ``even(z^2) + z^{-1} odd(z^2)``."""
    even, odd = components.even, components.odd
    _require_same_mode(even, odd, "interleave")
    out: dict[int, object] = {2 * k: c for k, c in even.terms.items()}
    for k, c in odd.terms.items():
        out[2 * k + 1] = c
    return LaurentPoly1(out, even.mode)


def embed_horizontal(g: LaurentPoly1) -> LaurentPoly2:
    """View a 1-D filter as a 2-D one acting along the horizontal axis."""
    return LaurentPoly2({(k, 0): c for k, c in g.terms.items()}, g.mode)


def embed_vertical(g: LaurentPoly1) -> LaurentPoly2:
    """View a 1-D filter as a 2-D one acting along the vertical axis."""
    return LaurentPoly2({(0, k): c for k, c in g.terms.items()}, g.mode)


# -- pretty printing --------------------------------------------------------
#
# Terms are rendered in z-notation with the displayed exponent being the
# negative of the stored one, e.g. the stored term {1: Fraction(1, 4)} prints
# as "1/4*z^-1".


def _fmt_coeff(c) -> str:
    if isinstance(c, Fraction):
        return str(c)
    return repr(c)


def _fmt_monomial(pairs: Iterable[tuple[str, int]]) -> str:
    parts = []
    for name, k in pairs:
        if k == 0:
            continue
        e = -k  # displayed exponent of z^{-k}
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def _format_terms(items, var_names) -> str:
    if not items:
        return "0"
    chunks = []
    for key, c in items:
        mono = _fmt_monomial(zip(var_names, key))
        coeff = _fmt_coeff(abs(c) if not isinstance(c, complex) else c)
        if mono and (c == 1 or c == -1):
            body = mono
        elif mono:
            body = f"{coeff}*{mono}"
        else:
            body = coeff
        sign = "-" if (not isinstance(c, complex) and c < 0) else "+"
        chunks.append((sign, body))
    first_sign, first_body = chunks[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in chunks[1:]:
        text += f" {sign} {body}"
    return text


def format_poly1(p: LaurentPoly1, var: str = "z") -> str:
    items = sorted(p.terms.items())  # descending displayed exponent
    return _format_terms([((k,), c) for k, c in items], (var,))


def format_poly2(p: LaurentPoly2) -> str:
    items = sorted(p.terms.items())
    return _format_terms(items, ("z_m", "z_n"))
