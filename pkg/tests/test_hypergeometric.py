import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from gl4bessel.errors import DivergenceError, PoleError
from gl4bessel.hypergeometric import (DegenerateDaggerWarning, HypSpec, hyp,
                                      nonpositive_int, pfq, verify_contiguous)
from gl4bessel.special import complex_gamma, rgamma

small = st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False)


def test_two_term_sum():
    b, c = 0.3 + 0.2j, 1.1
    assert abs(hyp((-1, b), (c,)) - (1 - b / c)) < 1e-15


@given(small, small, st.floats(1.5, 4))
def test_first_parameter_zero_gives_one(a, b, c):
    assert hyp((0, a, b), (c, c + 0.5)) == 1


def test_gauss_star_closed_form():
    a, b, c = 0.2, 0.3j, 2
    expected = complex_gamma(c - a - b) * rgamma(c - a) * rgamma(c - b)
    assert abs(hyp((a, b), (c,), 1.0, "star") - expected) < 1e-10


@pytest.mark.parametrize("seed", range(5))
def test_terminating_4f3_matches_mpmath(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(0, 9))
    a = [complex(*rng.uniform(-1, 1, 2)) for _ in range(3)]
    b = [complex(*rng.uniform(1, 3, 2)) for _ in range(3)]
    ref = complex(mpmath.hyper([-n, *a], b, 1))
    assert abs(hyp((-n, *a), b) - ref) < 1e-12 * max(1, abs(ref))


def test_convergent_3f2_at_unit_argument_matches_mpmath():
    a, b = (0.3 + 0.1j, 0.5, -0.2j), (1.7, 2.1 + 0.3j)
    ref = complex(mpmath.hyper(a, b, 1))
    assert abs(hyp(a, b) - ref) < 1e-10 * abs(ref)


def test_inside_unit_disk():
    a, b, z = (0.4, 1.3), (2.2,), 0.6 - 0.3j
    assert abs(hyp(a, b, z) - complex(mpmath.hyp2f1(*a, *b, z))) < 1e-13


def test_divergent_series_raise():
    with pytest.raises(DivergenceError):
        hyp((0.5, 0.5, 0.5), (0.7,))
    with pytest.raises(DivergenceError):
        hyp((1.0, 1.0), (1.5,))  # excess 1.5 - 2 < 0 at z = 1


def test_plain_mode_pole_only_before_termination():
    with pytest.raises(PoleError):
        hyp((-3, 0.5), (-1,))
    # terminates at k = 1, before the pole at k = 2 of (b)_k with b = -2
    assert abs(hyp((-1, 0.5), (-2,)) - (1 + 0.25)) < 1e-15


def test_star_mode_is_pole_free_and_continuous():
    a, b, c, d, e, f = 0.3 + 0.1j, 0.2, 0.1 - 0.3j, 0.4, 5.1, 4.8 + 0.2j
    value = hyp((a, b, c, d), (-1, e, f), 1.0, "star")
    assert np.isfinite(value)
    for h in (1e-4, 1e-5):
        avg = sum(hyp((a, b, c, d), (-1 + h * u, e, f), 1.0, "star") for u in (1, 1j, -1, -1j)) / 4
        assert abs(avg - value) < 1e-6 * abs(value)


def test_dagger_with_terminating_numerator_is_finite():
    value = hyp((-2, 0.3, 0.4), (1.5, 2.5), 1.0, "dagger")
    # Gamma(0.3) Gamma(0.4) times the Pochhammer sum over k = 0..2
    terms = sum(complex(mpmath.rf(-2, k) * mpmath.rf(0.3, k) * mpmath.rf(0.4, k)
                        / (mpmath.gamma(1.5 + k) * mpmath.gamma(2.5 + k) * mpmath.factorial(k)))
                for k in range(3))
    expected = complex(mpmath.gamma(0.3) * mpmath.gamma(0.4)) * terms
    assert abs(value - expected) < 1e-13 * abs(expected)


def test_doubly_degenerate_dagger_is_flagged():
    with pytest.warns(DegenerateDaggerWarning):
        hyp((-2, -3, 0.4), (1.5, 2.5), 1.0, "dagger")


def test_termination_tolerance():
    assert nonpositive_int(-3 + 1e-11) == 3
    assert nonpositive_int(-3 + 1e-8) is None
    assert HypSpec((-2, 0.5), (1.5,)).termination == 2
    assert HypSpec((0.2, 0.3, -2), (1.5, -2.0)).saalschutzian


def test_3f2recur2_example():
    rng = np.random.default_rng(3)
    p = dict(a1=complex(*rng.uniform(-1, 1, 2)), a2=complex(*rng.uniform(-1, 1, 2)),
             a3=-3, b1=complex(*rng.uniform(1, 2, 2)), b2=complex(*rng.uniform(1, 2, 2)))
    assert verify_contiguous("3F2recur2", p) < 1e-9


def test_4f3denom2_vanishes():
    value = hyp((-2, 0.3 + 0.1j, 0.7, -0.4j), (-3, 1.2, 0.9 + 0.5j), 1.0, "star")
    assert abs(value) < 1e-12


@pytest.mark.parametrize("n", [-1, 0, 1, 2])
def test_4f3denom1_reindexing(n):
    p = dict(a=0.31 + 0.1j, b=0.22, c=0.15 - 0.2j, d=0.41, e=5.1 + 0.2j, f=4.8, n=n)
    assert verify_contiguous("4F3Denom1", p) < 1e-9


def test_wlrecurrel3_with_a4_terminating():
    a1, a2, a3, a4 = 0.3 + 0.2j, -0.4 + 0.1j, 0.8, -2
    b1, b2 = 1.4 + 0.3j, 2.1
    b3 = 1 + a1 + a2 + a3 + a4 - b1 - b2
    p = dict(a1=a1, a2=a2, a3=a3, a4=a4, b1=b1, b2=b2, b3=b3)
    assert verify_contiguous("wlRecurRel3", p) < 1e-9


def test_wlrecurrel3_as_displayed_fails():
    # negative control: the quoted sign of the (a1, 1+a2) term is wrong
    a1, a2, a3, a4 = 0.3 + 0.2j, -0.4 + 0.1j, 0.8, -2
    b1, b2 = 1.4 + 0.3j, 2.1
    b3 = 1 + a1 + a2 + a3 + a4 - b1 - b2
    p = dict(a1=a1, a2=a2, a3=a3, a4=a4, b1=b1, b2=b2, b3=b3)
    assert verify_contiguous("wlRecurRel3-as-printed", p) > 1e-3


def test_normalized_general_relation():
    p = dict(a1=0.3 + 0.1j, a2=0.5, a3=0.2 - 0.2j, a4=0.6, b1=1.7, b2=2.2 + 0.4j, b3=1.9, z=0.4)
    assert verify_contiguous("4F3normalizedgenrel", p) < 1e-9


def test_unknown_relation():
    with pytest.raises(ValueError):
        verify_contiguous("nope", {})
