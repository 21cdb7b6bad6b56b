"""Single-level 2-D discrete wavelet transform schemes and benchmark tools."""

from .laurent import (
    EXACT,
    FLOAT,
    CoefficientModeError,
    LaurentPoly1,
    LaurentPoly2,
    PolyphaseComponents,
    embed_horizontal,
    embed_vertical,
    interleave,
    polyphase_split,
)
from .schemes import (
    LiftingPlan,
    Pass,
    Scheme,
    SchemeConsistencyError,
    SCHEME_NAMES,
    SplitPolynomials,
    StepMatrix,
    build_convolution_scheme,
    build_nonseparable_scheme,
    build_nonseparable_step_matrices,
    build_scheme,
    build_separable_lifting_scheme,
    build_separable_step_matrices,
    build_split_scheme,
    filters_from_plan,
    fuse,
    invert_scheme,
    split_constants,
)
from .wavelets import CDF53, CDF97, WAVELETS, get_plan

__version__ = "0.1.0"
