"""Built-in lifting plans.

The constants below are configuration data, not trusted ground truth: each
plan is validated by the perfect-reconstruction and filter-shape tests
rather than against published tap tables.  Custom wavelets can be supplied
as :class:`~liftfuse.schemes.LiftingPlan` instances directly.
"""

from __future__ import annotations

from fractions import Fraction

from .laurent import EXACT, FLOAT, LaurentPoly1
from .schemes import LiftingPlan

__all__ = ["CDF53", "CDF97", "WAVELETS", "get_plan"]


def _poly(terms, mode):
    return LaurentPoly1(terms, mode)


# 5/3: one pair of two-tap dyadic steps; fully rational, so the whole scheme
# algebra stays exact.  Predict reads the even neighbours at offsets 0 and +1
# (stored exponents 0 and -1), update at offsets 0 and -1.
CDF53 = LiftingPlan(
    name="cdf53",
    pairs=(
        (
            _poly({0: Fraction(-1, 2), -1: Fraction(-1, 2)}, EXACT),
            _poly({0: Fraction(1, 4), 1: Fraction(1, 4)}, EXACT),
        ),
    ),
    scale=None,
    mode=EXACT,
)

# 9/7: two pairs with irrational constants, plus the final low/high gains.
# The gains normalize the equivalent low-pass filter to unit DC gain.
_ALPHA = -1.586134342059924
_BETA = -0.052980118572961
_GAMMA = 0.882911075530934
_DELTA = 0.443506852043971
_KAPPA = 1.230174104914001

CDF97 = LiftingPlan(
    name="cdf97",
    pairs=(
        (
            _poly({0: _ALPHA, -1: _ALPHA}, FLOAT),
            _poly({0: _BETA, 1: _BETA}, FLOAT),
        ),
        (
            _poly({0: _GAMMA, -1: _GAMMA}, FLOAT),
            _poly({0: _DELTA, 1: _DELTA}, FLOAT),
        ),
    ),
    scale=(1.0 / _KAPPA, _KAPPA),
    mode=FLOAT,
)

WAVELETS = {"cdf53": CDF53, "cdf97": CDF97}


def get_plan(name: str) -> LiftingPlan:
    try:
        return WAVELETS[name]
    except KeyError:
        raise ValueError(
            f"unknown wavelet {name!r}; expected one of {', '.join(sorted(WAVELETS))}"
        ) from None
