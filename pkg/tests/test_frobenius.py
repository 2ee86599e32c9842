import csv
import itertools
import math
import warnings

import mpmath
import numpy as np
import pytest

from gl4bessel.errors import DegenerateParameters, DomainError, TruncationWarning
from gl4bessel.frobenius import (FORMS, FrobeniusSeries, j_series, leading_exponents,
                                 recurrence_oracle_wl, recurrence_residual, series_coefficient,
                                 star_coefficient)
from gl4bessel.weyl import SpectralParams, WeylElement, YPoint, sample_tempered

W = {n: WeylElement.from_name(n) for n in ("4", "31", "22", "121", "211", "1111")}


def tempered(seed, delta=(0, 0, 0, 0)):
    return sample_tempered(np.random.default_rng(seed), delta=delta)


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b))


@pytest.mark.parametrize("form", FORMS["211"])
def test_w211_star_coefficient_origin(form):
    assert abs(star_coefficient(W["211"], tempered(0).mu, (0, 0), form) - 1) < 1e-14


def test_w31_leading_coefficient_against_mpmath():
    mu = tempered(1).mu
    m = [mpmath.mpc(z.real, z.imag) for z in mu]
    expected = (16 * mpmath.pi ** 4) ** (-m[3])
    for j in range(3):
        expected /= mpmath.gamma(1 + m[j] - m[3])
    assert rel(series_coefficient(W["31"], mu, (0,)), complex(expected)) < 1e-12


def test_w211_forms_agree_at_a_point():
    mu = tempered(2).mu
    values = [star_coefficient(W["211"], mu, (3, 2), f) for f in FORMS["211"]]
    assert max(rel(values[0], v) for v in values[1:]) < 1e-10


def test_negative_indices_vanish():
    mu = tempered(3).mu
    assert star_coefficient(W["211"], mu, (-1, 2)) == 0
    assert series_coefficient(W["1111"], mu, (1, -1, 0)) == 0


def test_degenerate_parameters_raise():
    with pytest.raises(DegenerateParameters):
        star_coefficient(W["31"], (0.5, -0.5, 0.25j, -0.25j), (1,))


def test_identity_element_series_is_one():
    assert j_series(W["4"], YPoint((0.3, 0.2, 0.1)), tempered(4)) == (1, 0.0)


def test_w31_small_y_limit():
    params = tempered(5)
    (alpha,) = leading_exponents(W["31"], params.mu)
    a0 = series_coefficient(W["31"], params.mu, (0,))
    a1 = series_coefficient(W["31"], params.mu, (1,))
    for y3 in (1e-3, 1e-5, -1e-7):
        value, _ = j_series(W["31"], YPoint.on(W["31"], [y3]), params, order=4)
        # the first omitted term bounds the gap
        assert abs(value / abs(y3) ** alpha - a0) < 1.1 * abs(a1 * y3)


def test_w211_truncation_orders_14_and_18():
    params = tempered(6)
    y = YPoint((1.0, 0.1, 0.1))
    low, _ = j_series(W["211"], y, params, order=14)
    high, _ = j_series(W["211"], y, params, order=18)
    assert rel(low, high) < 1e-10


def test_w211_truncation_self_consistency():
    # stated target: orders 10 and 14 agree to 1e-10 at this point; with
    # |t1| = 8 pi^3 * 0.1 ~ 25 order 10 is off by ~1e-7, so this stays red
    params = tempered(6)
    y = YPoint((1.0, 0.1, 0.1))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        low, _ = j_series(W["211"], y, params, order=10)
    high, _ = j_series(W["211"], y, params, order=14)
    assert rel(low, high) < 1e-10


def test_truncation_warning_and_domain_guard():
    params = tempered(7)
    with pytest.warns(TruncationWarning):
        j_series(W["31"], YPoint.on(W["31"], [0.5]), params, order=1)
    with pytest.raises(DomainError):
        j_series(W["31"], YPoint.on(W["31"], [0.9]), params)
    with pytest.raises(DomainError):
        j_series(W["31"], YPoint((0.5, 1.0, 0.1)), params)


@pytest.mark.parametrize("name", ["31", "22"])
def test_conjugation_symmetry(name):
    # tempered mu: conj(mu) = -mu, and the coefficients are real-analytic in mu
    params = tempered(8, delta=(1, 0, 1, 0))
    flipped = SpectralParams(tuple(m.conjugate() for m in params.mu), params.delta)
    y = YPoint.on(W[name], [-0.03])
    a, _ = j_series(W[name], y, params)
    b, _ = j_series(W[name], y, flipped)
    assert rel(a, b.conjugate()) < 1e-12


def test_w31_recurrence_range():
    mu = tempered(9).mu
    assert max(recurrence_residual(W["31"], mu, (m,)) for m in range(1, 9)) < 1e-10


def test_w211_second_recurrence_example():
    assert recurrence_residual(W["211"], tempered(10).mu, (2, 3), "211-second") < 1e-9


def test_wl_recurrence_example():
    assert recurrence_residual(W["1111"], tempered(11).mu, (2, 1, 1)) < 1e-9


def test_w211_companion_as_displayed_fails():
    mu = tempered(12).mu
    worst = max(recurrence_residual(W["211"], mu, m, "211-companion-as-printed")
                for m in itertools.product(range(1, 4), repeat=2))
    assert worst > 1e-3


def test_recurrence_oracle_examples():
    mu = tempered(13).mu
    g = recurrence_oracle_wl(mu, 3)
    assert g[0, 0, 0] == 1
    assert rel(g[1, 0, 0], 1 / (1 + mu[0] - mu[1])) < 1e-14
    for form in FORMS["1111"]:
        assert rel(g[2, 2, 1], star_coefficient(W["1111"], mu, (2, 2, 1), form)) < 1e-10


def test_series_build_and_csv(tmp_path):
    series = FrobeniusSeries.build(W["121"], tempered(14).mu, 3)
    assert series.coeffs.shape == (4, 4)
    path = tmp_path / "c.csv"
    series.dump_csv(path)
    rows = list(csv.DictReader(open(path)))
    assert len(rows) == 16
    first = rows[5]
    m = (int(first["m1"]), int(first["m2"]))
    assert complex(float(first["re"]), float(first["im"])) == series.coeffs[m]


def test_series_evaluate_matches_direct_sum():
    series = FrobeniusSeries.build(W["22"], tempered(15).mu, 6)
    y = -0.04
    (alpha,) = series.leading
    direct = abs(y) ** alpha * sum(series.coeffs[k] * y ** k for k in range(7))
    value, _ = series.evaluate([y])
    assert rel(value, direct) < 1e-14
