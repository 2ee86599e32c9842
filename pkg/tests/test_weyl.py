import cmath
import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gl4bessel.errors import DegenerateParameters, DomainError, PoleError
from gl4bessel.special import complex_gamma
from gl4bessel.weyl import (KERNEL_NAMES, LONG, RHO, SpectralParams, WeylElement, YPoint,
                            all_perms, c_w, chi, coset_reps, free_coordinates, iota_transform,
                            lambda_eigen, lambda_w, perm_compose, perm_from_cycles,
                            power_I, relevant_weyl_list, s_pairs, sample_tempered, stabilizer,
                            v_tilde, weyl_action, y_iota)

perms = st.permutations(range(4)).map(tuple)
nonzero = st.floats(0.05, 20) | st.floats(-20, -0.05)
exponent = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)


def tempered(seed):
    return sample_tempered(np.random.default_rng(seed))


def test_chi_examples():
    assert chi(2, 0, -3) == pytest.approx(9)
    assert chi(1, 1, -2) == pytest.approx(-2)
    with pytest.raises(DomainError):
        chi(1, 0, 0)


@given(exponent, exponent, st.integers(-3, 3), st.integers(-3, 3), nonzero)
def test_chi_is_multiplicative_in_the_exponent(s, t, l1, l2, a):
    lhs = chi(s, l1, a) * chi(t, l2, a)
    rhs = chi(s + t, l1 + l2, a)
    assert abs(lhs - rhs) <= 1e-9 * max(1, abs(rhs))


@given(st.tuples(nonzero, nonzero, nonzero, nonzero))
def test_power_function_at_zero_parameters(a):
    value = power_I(SpectralParams((0, 0, 0, 0)), a)
    expected = math.prod(abs(x) ** r for x, r in zip(a, RHO))
    assert abs(value - expected) <= 1e-10 * expected


@given(st.tuples(nonzero, nonzero, nonzero, nonzero))
def test_unnormalized_power_function(a):
    # exponents rho + mu vanish at mu = -rho; unnormalized means I_{mu - rho}
    assert abs(power_I(SpectralParams(tuple(-r for r in RHO)), a) - 1) < 1e-12
    params = tempered(9)
    shifted = SpectralParams(tuple(m - r for m, r in zip(params.mu, RHO)))
    assert abs(power_I(params, a, "unnormalized") - power_I(shifted, a)) <= \
        1e-9 * abs(power_I(shifted, a))


def test_iota_dual_power_function_exponents():
    params = tempered(2)
    mu = params.mu
    y = (0.4, -1.7, 2.3)
    d = YPoint(y).diag()
    # I_{-mu,0}(y^iota) has exponents 3/2 - mu1 - mu2 - mu3, 2 - mu1 - mu2, 3/2 - mu1
    value = power_I(params.negated(), d, "iota-dual")
    expected = abs(y[0]) ** (1.5 - mu[0] - mu[1] - mu[2]) * abs(y[1]) ** (2 - mu[0] - mu[1]) \
        * abs(y[2]) ** (1.5 - mu[0])
    assert abs(value - expected) < 1e-12 * abs(expected)


def test_spectral_params_validation():
    with pytest.raises(DomainError):
        SpectralParams((1j, 0, 0, 0))
    with pytest.raises(DegenerateParameters):
        SpectralParams((0.5, -0.5, 0.5j, -0.5j)).require_distinct()
    p = tempered(0)
    assert p.is_distinct()
    assert SpectralParams.from_json(p.to_json()) == p


def test_weyl_action_examples():
    p = tempered(1)
    assert weyl_action(p, (0, 1, 2, 3)) == p
    swapped = weyl_action(p, perm_from_cycles("(1 2)"))
    assert swapped.mu == (p.mu[1], p.mu[0], p.mu[2], p.mu[3])


@given(perms, perms)
def test_weyl_action_composition(w1, w2):
    p = SpectralParams(tempered(5).mu, (1, 0, 1, 1))
    twice = weyl_action(weyl_action(p, w1), w2)
    assert twice == weyl_action(p, perm_compose(w2, w1))


def test_relevant_list():
    names = sorted(w.name for w in relevant_weyl_list())
    assert names == sorted(["4", "13", "31", "22", "112", "121", "211", "1111"])
    assert WeylElement.from_name("4").permutation == (0, 1, 2, 3)


def test_weyl_matrix_block_form():
    m = WeylElement.from_name("31").matrix
    expected = np.zeros((4, 4))
    expected[0:3, 1:4] = np.eye(3)
    expected[3, 0] = 1
    assert np.array_equal(m, expected)


@pytest.mark.parametrize("name, size", [("31", 4), ("22", 6), ("121", 12), ("211", 12), ("1111", 24)])
def test_coset_reps_tile_the_group(name, size):
    w = WeylElement.from_name(name)
    reps = coset_reps(w)
    assert len(reps) == size
    # mu^{s r} = (mu^r)^s, so the classes are the orbits s . r
    products = {perm_compose(s, r) for r in reps for s in stabilizer(w)}
    assert products == set(all_perms())


def test_w22_transversal_is_the_listed_one():
    reps = coset_reps(WeylElement.from_name("22"))
    listed = ["", "(1 3)", "(2 3)", "(1 4)", "(2 4)", "(1 3)(2 4)"]
    assert reps == [perm_from_cycles(c) for c in listed]


def test_lambda_w_examples():
    mu = tempered(3).mu
    assert lambda_w(mu, WeylElement.from_name("4")) == 1
    assert abs(lambda_w((0, 0, 0, 0), LONG) - 1) < 1e-14
    expected = 1
    for j in range(3):
        d = mu[j] - mu[3]
        expected *= (2 * math.pi) ** (-d) * complex_gamma(1 + d)
    assert abs(lambda_w(mu, WeylElement.from_name("31")) - expected) < 1e-12 * abs(expected)


@pytest.mark.parametrize("name, size", [("31", 3), ("22", 4), ("121", 5), ("211", 5), ("1111", 6)])
def test_s_w_sizes(name, size):
    assert len(s_pairs(WeylElement.from_name(name))) == size


def test_c_w_examples():
    with pytest.raises(PoleError):
        c_w(SpectralParams((0, 0, 0, 0)), WeylElement.from_name("31"))
    p = tempered(4)
    expected = 1
    for j in range(3):
        expected *= math.pi / cmath.cos(math.pi * (1 + p.mu[j] - p.mu[3]) / 2)
    assert abs(c_w(p, WeylElement.from_name("31")) - expected) < 1e-12 * abs(expected)


def test_lambda_eigen_examples():
    assert lambda_eigen((0, 0, 0, 0)) == (0, 2.5, 0, 41 / 16)
    t, s = 0.7, 1.3
    lam = lambda_eigen((1j * t, -1j * t, 1j * s, -1j * s))
    assert abs(lam[1] - (2.5 + t * t + s * s)) < 1e-14


@given(perms)
def test_lambda_eigen_weyl_invariant(w):
    p = tempered(6)
    a = lambda_eigen(p.mu)
    b = lambda_eigen(weyl_action(p, w).mu)
    assert max(abs(x - y) for x, y in zip(a, b)) < 1e-12


def test_iota_of_weyl_elements():
    assert LONG.iota() == LONG
    assert WeylElement.from_name("211").iota() == WeylElement.from_name("112")
    for w in relevant_weyl_list():
        lhs = LONG.matrix @ np.linalg.inv(w.matrix).T @ LONG.matrix
        assert np.array_equal(lhs, w.iota().matrix)


def test_v_tilde_entries_are_signs():
    for mode in ("Y", "central"):
        assert set(v_tilde(LONG, mode)) <= {1.0, -1.0}
    assert v_tilde(LONG, "central") == (1.0, 1.0, 1.0, 1.0)


@pytest.mark.parametrize("name", KERNEL_NAMES)
def test_conjugation_reverses_y(name):
    w = WeylElement.from_name(name)
    rng = np.random.default_rng(7)
    for _ in range(10):
        free = rng.uniform(-3, 3, size=len(free_coordinates(w)))
        y = YPoint.on(w, free).matrix()
        lhs = np.linalg.inv(w.matrix) @ y @ w.matrix
        inverse_iota = np.linalg.inv(LONG.matrix @ np.linalg.inv(y) @ LONG.matrix)
        assert np.allclose(lhs, inverse_iota, rtol=1e-14)


@given(st.tuples(nonzero, nonzero, nonzero))
def test_trivial_power_function_iota_invariant(y):
    point = YPoint(y)
    zero = SpectralParams((0, 0, 0, 0))
    a = power_I(zero, point.diag())
    b = power_I(zero, y_iota(point).diag())
    assert abs(a - b) <= 1e-9 * abs(a)


def test_iota_transform_keeps_self_dual_points_in_y():
    p = tempered(8)
    for name in ("22", "121", "1111"):
        w = WeylElement.from_name(name)
        y = YPoint.on(w, [0.1, -0.2, 0.05][:len(free_coordinates(w))])
        y2, p2, w2 = iota_transform(y, p, w)
        assert w2 == w and y2.in_Y(w)
        assert abs(sum(p2.mu)) < 1e-14


@given(st.tuples(nonzero, nonzero, nonzero, nonzero))
def test_unnormalized_power_function_trivial_at_zero(a):
    assert abs(power_I(SpectralParams((0, 0, 0, 0)), a, "unnormalized") - 1) < 1e-12
