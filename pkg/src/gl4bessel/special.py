"""Complex gamma, Pochhammer symbols, the G/R gamma-type functions and the
classical GL(2) Bessel function Z^eta_s.

Everything accepts Python scalars; the ``log_*`` and ``*_array`` helpers are
vectorised over numpy arrays and skip pole checks, for use in quadrature.
"""

import cmath
import math

import numpy as np

from .errors import DomainError, NotAPole, PoleError

POLE_TOL = 1e-12

# Godfrey's Lanczos coefficients, g = 607/128, 15 terms.
LANCZOS_G = 607 / 128
LANCZOS_COEFFS = np.array([
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
])
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)
_LOG_PI = math.log(math.pi)

# i**k for k mod 4, exact.
_I_POW = (1, 1j, -1, -1j)


def i_pow(k):
    """Exact integer power of the imaginary unit."""
    return _I_POW[int(k) % 4]


def parity(eta):
    """Reduce an integer index to {0, 1}."""
    return int(eta) % 2


def _nearest_nonpositive_int(z):
    n = round(z.real)
    return n if n <= 0 else None


def _check_gamma_pole(z):
    n = _nearest_nonpositive_int(z)
    if n is not None and abs(z - n) < POLE_TOL:
        raise PoleError(f"gamma has a pole at {n}")


def _lanczos_log_right(z):
    """log Gamma(z) for Re z >= 1/2 (array)."""
    x = z - 1.0
    series = np.full_like(x, LANCZOS_COEFFS[0])
    for k in range(1, len(LANCZOS_COEFFS)):
        series = series + LANCZOS_COEFFS[k] / (x + k)
    t = x + LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (x + 0.5) * np.log(t) - t + np.log(series)


def log_sin_pi(z):
    """log sin(pi z) computed without overflow for large |Im z| (array)."""
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    upper = z.imag >= 0
    zu = z[upper]
    out[upper] = -1j * np.pi * zu + np.log((np.exp(2j * np.pi * zu) - 1) / 2j)
    zl = z[~upper]
    out[~upper] = 1j * np.pi * zl + np.log((1 - np.exp(-2j * np.pi * zl)) / 2j)
    return out


def log_gamma_array(z):
    """A logarithm of Gamma(z), elementwise; exp() of it is Gamma(z).

    The imaginary part is not the principal branch of log-gamma, only some
    branch, which is all the callers need.
    """
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    right = z.real >= 0.5
    out[right] = _lanczos_log_right(z[right])
    zl = z[~right]
    out[~right] = _LOG_PI - log_sin_pi(zl) - _lanczos_log_right(1.0 - zl)
    return out


def complex_gamma(z):
    """Gamma(z) for complex z; PoleError near non-positive integers."""
    z = complex(z)
    _check_gamma_pole(z)
    if z.real >= 0.5:
        return complex(np.exp(_lanczos_log_right(np.array([z]))[0]))
    # reflection keeps the Lanczos sum in its accurate half-plane
    return cmath.pi / (cmath.sin(cmath.pi * z) * complex_gamma(1.0 - z))


def log_gamma(z):
    z = complex(z)
    _check_gamma_pole(z)
    return complex(log_gamma_array(np.array([z]))[0])


def rgamma(z):
    """1/Gamma(z), exactly zero at the poles of Gamma."""
    z = complex(z)
    n = _nearest_nonpositive_int(z)
    if n is not None and abs(z - n) < POLE_TOL:
        return 0j
    return 1.0 / complex_gamma(z)


def pochhammer(s, j):
    """Rising factorial s(s+1)...(s+j-1), as a plain product."""
    if j < 0:
        raise DomainError("Pochhammer index must be non-negative")
    out = 1 + 0j
    s = complex(s)
    for k in range(j):
        out *= s + k
    return out


def g_eta(eta, s):
    s = complex(s)
    e = parity(eta)
    n = round(-s.real)
    if n >= 0 and n % 2 == e and abs(s + n) < POLE_TOL:
        raise PoleError(f"G_{e} has a pole at s=-{n}")
    num = complex_gamma((e + s) / 2)
    den_r = rgamma((1 + e - s) / 2)
    return cmath.exp((0.5 - s) * _LOG_PI) * i_pow(e) * num * den_r


def log_g_eta_array(eta, s):
    """log G_eta(s) elementwise (array, no pole checks)."""
    e = parity(eta)
    s = np.asarray(s, dtype=complex)
    return ((0.5 - s) * _LOG_PI + 0.5j * np.pi * e
            + log_gamma_array((e + s) / 2) - log_gamma_array((1 + e - s) / 2))


def r_eta(eta, s):
    e = parity(eta)
    return i_pow(e) * cmath.cos(cmath.pi * (complex(s) - e) / 2)


def g_vec(ell, s, t, eta):
    """Product of G_{ell+eta_j}(s+t_j)."""
    if len(t) != len(eta):
        raise ValueError("t and eta must have equal length")
    out = 1 + 0j
    for j, (tj, ej) in enumerate(zip(t, eta)):
        try:
            out *= g_eta(ell + ej, complex(s) + complex(tj))
        except PoleError as exc:
            raise PoleError(f"factor {j}: {exc}") from None
    return out


def residue_g(eta, n):
    """Residue of G_eta at s=-n.  Raises NotAPole on a parity mismatch."""
    if n < 0 or n % 2 != parity(eta):
        raise NotAPole(f"G_{parity(eta)} has no pole at s=-{n}")
    return 2 * (2j * math.pi) ** n / math.factorial(n)


def residue_inv_r(eta, n):
    """Residue of 1/R_eta at the integer n (zero off the pole lattice)."""
    e = parity(eta)
    if (n - e - 1) % 2:
        return 0j
    return 2j / math.pi * (-1) ** e * i_pow(n)


def stirling_magnitude(sigma, t):
    """Stirling's main term for |Gamma(sigma+it)|, sigma > 0."""
    return (math.gamma(sigma) * abs(1 + 1j * t / sigma) ** (sigma - 0.5)
            * math.exp(-abs(t) * math.atan(abs(t) / sigma)))


# ---------------------------------------------------------------- Bessel


def _bessel_series(nu, x, sign, terms=200):
    """sum_k sign^k (x/2)^(2k+nu) / (k! Gamma(k+nu+1)): J for sign=-1, I for +1."""
    half = x / 2
    quarter = half * half * sign
    term = cmath.exp(nu * cmath.log(half)) * rgamma(nu + 1)
    total = term
    # start the recursion at the first k with nonzero 1/Gamma(k+nu+1)
    k0 = 0
    while term == 0 and k0 < 50:
        k0 += 1
        term = (cmath.exp((2 * k0 + nu) * cmath.log(half)) * sign ** k0
                * rgamma(k0 + nu + 1) / math.factorial(k0))
        total = term
    for k in range(k0 + 1, terms):
        term *= quarter / (k * (k + nu))
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
    return total


def _bessel_k_integral(nu, x):
    """K_nu(x) = int_0^inf exp(-x cosh u) cosh(nu u) du by Gauss-Legendre."""
    upper = math.acosh(1 + 50.0 / x) + 1.0
    nodes, weights = np.polynomial.legendre.leggauss(80)
    total = 0j
    edges = np.linspace(0.0, upper, 9)
    for a, b in zip(edges[:-1], edges[1:]):
        u = 0.5 * (b - a) * nodes + 0.5 * (a + b)
        vals = np.exp(-x * np.cosh(u)) * np.cosh(nu * u)
        total += 0.5 * (b - a) * np.dot(weights, vals)
    return complex(total)


def bessel_k(nu, x):
    """K_nu(x) for complex order, x > 0."""
    nu = complex(nu)
    if abs(nu - round(nu.real)) < 1e-3 or x > 2:
        # the I-series difference cancels near integer order and for larger x
        return _bessel_k_integral(nu, x)
    i_minus = _bessel_series(-nu, x, +1)
    i_plus = _bessel_series(nu, x, +1)
    return math.pi / 2 * (i_minus - i_plus) / cmath.sin(math.pi * nu)


def bessel_j(nu, x):
    return _bessel_series(complex(nu), x, -1)


def classical_z(s, eta, a):
    """The GL(2) Bessel function Z^eta_s(a) for real a != 0."""
    s = complex(s)
    if a == 0:
        raise DomainError("Z is undefined at a = 0")
    if abs(s.real) >= 2:
        raise DomainError("series evaluation needs |Re s| < 2")
    # the full integer eta enters i^eta and the trig factors; the two sign
    # flips under eta -> eta+2 cancel
    sign_eta = i_pow(eta)
    x = 4 * math.pi * math.sqrt(abs(a))
    if a < 0:
        return 4 * sign_eta * bessel_k(s, x) * cmath.cos(math.pi * (s - eta) / 2)
    denom = cmath.sin(math.pi * (s + eta) / 2)
    if abs(denom) < POLE_TOL:
        raise PoleError("sin(pi(s+eta)/2) vanishes")
    combo = bessel_j(-s, x) - (-1) ** eta * bessel_j(s, x)
    return math.pi * sign_eta * combo / denom
