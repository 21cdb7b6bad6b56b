import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from liftfuse.laurent import (
    EXACT,
    FLOAT,
    CoefficientModeError,
    LaurentPoly1,
    LaurentPoly2,
    embed_horizontal,
    embed_vertical,
    format_poly1,
    format_poly2,
    interleave,
    polyphase_split,
)

F = Fraction


def p1(terms, mode=EXACT):
    return LaurentPoly1(terms, mode)


def p2(terms, mode=EXACT):
    return LaurentPoly2(terms, mode)


def brute_mul2(a: LaurentPoly2, b: LaurentPoly2) -> dict:
    """Independent term-map convolution used as the multiplication oracle."""
    out = {}
    for (ka, kb), (la, lb) in itertools.product(a.terms, b.terms):
        key = (ka + la, kb + lb)
        out[key] = out.get(key, 0) + a.terms[(ka, kb)] * b.terms[(la, lb)]
    return {k: v for k, v in out.items() if v != 0}


# -- strategies ---------------------------------------------------------------

exact_coeffs = st.fractions(min_value=-4, max_value=4, max_denominator=8)
float_coeffs = st.floats(min_value=-4, max_value=4, allow_nan=False).filter(lambda x: x != 0)
exps = st.integers(min_value=-5, max_value=5)

poly1_exact = st.dictionaries(exps, exact_coeffs, max_size=6).map(lambda d: p1(d))
poly2_exact = st.dictionaries(st.tuples(exps, exps), exact_coeffs, max_size=6).map(lambda d: p2(d))
poly2_float = st.dictionaries(st.tuples(exps, exps), float_coeffs, max_size=6).map(
    lambda d: p2(d, FLOAT)
)


# -- add ------------------------------------------------------------------------


def test_add_cancellation():
    assert p2({(0, 0): 1, (-1, 0): 1}) + p2({(-1, 0): -1}) == p2({(0, 0): 1})


def test_add_identity():
    p = p2({(0, 0): F(-1, 2), (-1, 0): F(-1, 2)})
    assert p + LaurentPoly2.zero() == p


def test_add_recombines_cdf53_predict_split():
    # Constant/remainder parts of the 5/3 predict sum back to the full filter.
    p0 = p2({(0, 0): F(-1, 2)})
    p1_rest = p2({(-1, 0): F(-1, 2)})
    full = p2({(0, 0): F(-1, 2), (-1, 0): F(-1, 2)})
    assert p0 + p1_rest == full


def test_add_mode_mismatch():
    with pytest.raises(CoefficientModeError):
        p2({(0, 0): 1}) + p2({(0, 0): 1.0}, FLOAT)


# -- mul ------------------------------------------------------------------------


def test_mul_identity():
    p = p2({(0, 0): F(-1, 2), (-1, 0): F(-1, 2)})
    assert LaurentPoly2.one() * p == p


def test_mul_cdf53_predict_times_transpose():
    p = p2({(0, 0): F(-1, 2), (-1, 0): F(-1, 2)})
    prod = p * p.transpose()
    expected = {
        (0, 0): F(1, 4),
        (-1, 0): F(1, 4),
        (0, -1): F(1, 4),
        (-1, -1): F(1, 4),
    }
    assert prod.terms == expected
    assert prod.terms == brute_mul2(p, p.transpose())


def test_mul_monomials():
    zm = p2({(-1, 0): 1})
    zn = p2({(0, -1): 1})
    assert (zm * zn).terms == {(-1, -1): F(1)}


@given(poly2_exact, poly2_exact)
def test_mul_matches_brute_force(a, b):
    assert (a * b).terms == brute_mul2(a, b)


# -- ring axioms -----------------------------------------------------------------


@given(poly2_exact, poly2_exact, poly2_exact)
def test_ring_axioms_exact(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(poly2_float, poly2_float, poly2_float)
def test_ring_axioms_float(a, b, c):
    assert (a * b).max_diff(b * a) <= 1e-12
    assert ((a * b) * c).max_diff(a * (b * c)) <= 1e-12
    assert (a * (b + c)).max_diff(a * b + a * c) <= 1e-12


# -- transpose ---------------------------------------------------------------------


def test_transpose_moves_horizontal_filter_to_vertical():
    p = p2({(0, 0): F(-1, 2), (-1, 0): F(-1, 2)})
    assert p.transpose().terms == {(0, 0): F(-1, 2), (0, -1): F(-1, 2)}


def test_transpose_termwise_swap():
    p = p2({(0, 0): 1, (-1, 0): 1, (-1, -1): 1})
    assert p.transpose().terms == {(0, 0): F(1), (0, -1): F(1), (-1, -1): F(1)}


@given(poly2_exact)
def test_transpose_involution(a):
    assert a.transpose().transpose() == a


@given(poly2_exact, poly2_exact)
def test_transpose_ring_homomorphism(a, b):
    assert (a * b).transpose() == a.transpose() * b.transpose()
    assert (a + b).transpose() == a.transpose() + b.transpose()


# -- polyphase split ----------------------------------------------------------------


def test_split_constant():
    pc = polyphase_split(p1({0: 1}))
    assert pc.even.terms == {0: F(1)}
    assert pc.odd.is_zero()


def test_split_cdf53_predict():
    # -(1/2)(1 + z): the advance term has odd stored exponent -1.
    pc = polyphase_split(p1({0: F(-1, 2), -1: F(-1, 2)}))
    assert pc.even.terms == {0: F(-1, 2)}
    assert pc.odd.terms == {-1: F(-1, 2)}


def test_split_pure_even_power():
    pc = polyphase_split(p1({-2: 1}))  # z^2
    assert pc.even.terms == {-1: F(1)}
    assert pc.odd.is_zero()


@given(poly1_exact)
def test_split_interleave_roundtrip(g):
    assert interleave(polyphase_split(g)) == g


@given(st.dictionaries(exps, exact_coeffs, max_size=4), st.dictionaries(exps, exact_coeffs, max_size=4))
def test_interleave_split_roundtrip(even_terms, odd_terms):
    from liftfuse.laurent import PolyphaseComponents

    pc = PolyphaseComponents(p1(even_terms), p1(odd_terms))
    back = polyphase_split(interleave(pc))
    assert back.even == pc.even
    assert back.odd == pc.odd


# -- embeddings ----------------------------------------------------------------------


def test_embed_horizontal():
    assert embed_horizontal(p1({0: 1, -1: 1})).terms == {(0, 0): F(1), (-1, 0): F(1)}


def test_embed_vertical():
    assert embed_vertical(p1({0: 1, -1: 1})).terms == {(0, 0): F(1), (0, -1): F(1)}


@given(poly1_exact)
def test_embed_transpose_relation(g):
    assert embed_horizontal(g).transpose() == embed_vertical(g)


# -- evaluation consistency -------------------------------------------------------------


@given(poly2_float, poly2_float, st.integers(0, 7))
def test_eval_commutes_with_ring_ops(a, b, k):
    import cmath

    zm = cmath.exp(2j * cmath.pi * k / 8.0)
    zn = cmath.exp(2j * cmath.pi * (k + 3) / 8.0)
    lhs = (a * b).eval(zm, zn)
    rhs = a.eval(zm, zn) * b.eval(zm, zn)
    scale = max(1.0, abs(lhs), abs(rhs))
    assert abs(lhs - rhs) / scale <= 1e-10
    lhs = (a + b).eval(zm, zn)
    rhs = a.eval(zm, zn) + b.eval(zm, zn)
    scale = max(1.0, abs(lhs), abs(rhs))
    assert abs(lhs - rhs) / scale <= 1e-10
    assert abs(a.transpose().eval(zm, zn) - a.eval(zn, zm)) <= 1e-10 * max(1.0, abs(a.eval(zn, zm)))


# -- invariants & hygiene ------------------------------------------------------------------


def test_no_stored_zero_coefficients():
    p = p2({(0, 0): 1, (1, 1): 0})
    assert (0, 0) in p.terms and (1, 1) not in p.terms
    q = p + p2({(0, 0): -1})
    assert q.is_zero()


def test_exact_coefficients_in_lowest_terms():
    p = p1({0: F(2, 4)})
    assert p.terms[0] == F(1, 2)
    assert p.terms[0].denominator == 2


def test_float_promotion_is_explicit():
    p = p1({0: F(1, 2)})
    q = p.to_float()
    assert q.mode == FLOAT and q.terms[0] == 0.5
    with pytest.raises(CoefficientModeError):
        p1({0: 0.5})  # float literal in exact mode


def test_pretty_printer_z_notation():
    p = p1({0: F(3, 4), 2: F(-1, 8), -2: F(-1, 8)})
    assert format_poly1(p) == "-1/8*z^2 + 3/4 - 1/8*z^-2"
    q = p2({(0, 0): F(1, 4), (-1, -1): F(1, 4)})
    assert format_poly2(q) == "1/4*z_m*z_n + 1/4"
