"""Euler-operator encodings of the differential operators satisfied by J_w.

Each operator is read from ``data/operators.txt`` as a normal-ordered
polynomial in y_i and d/dy_i. A monomial y^a D^k with a >= k becomes a
falling-factorial polynomial in the Euler operators theta_i = y_i d/dy_i
times the monomial shift y^(a-k). Acting on |y|^alpha sum c_m y^m this gives
a linear map on coefficient lattices, which is what :func:`apply_operator`
computes.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from importlib import resources

import numpy as np
import sympy

from .errors import DomainError, OrderError
from .frobenius import FrobeniusSeries
from .weyl import WeylElement, free_coordinates, lambda_eigen

Y_SYMBOLS = sympy.symbols("y1 y2 y3")
D_SYMBOLS = sympy.symbols("D1 D2 D3")
THETA_SYMBOLS = sympy.symbols("theta1 theta2 theta3")
LAMBDA_SYMBOLS = sympy.symbols("lam2 lam3 lam4")

_PARSE_LOCALS = {str(s): s for s in (*Y_SYMBOLS, *D_SYMBOLS, *LAMBDA_SYMBOLS)}
_PARSE_LOCALS.update(pi=sympy.pi, I=sympy.I)


# The operator displays are consistent with each other and with the Frobenius
# recurrences only when lambda_4 enters with the opposite sign to the
# eigenvalue formula in lambda_eigen (checked symbolically for w31).
LAMBDA4_SIGN = -1


def operator_eigenvalues(mu, as_printed=False):
    """lambda_eigen(mu) with lambda_4 in the sign the operators use."""
    lam = lambda_eigen(mu)
    if as_printed:
        return lam
    return (lam[0], lam[1], lam[2], LAMBDA4_SIGN * lam[3])


def falling(x, k):
    out = 1
    for j in range(k):
        out = out * (x - j)
    return out


@dataclass(frozen=True)
class EulerOperator:
    """Sum over shifts s of y^s * P_s(theta).

    ``terms`` maps a shift (over the free coordinates only) to a dict from
    derivative orders k to a sympy coefficient in lam2..lam4; the theta
    polynomial is sum_k coeff_k prod_i falling(theta_i, k_i).
    """

    label: str
    weyl: str
    coordinates: tuple
    terms: dict
    source: str

    @property
    def dim(self):
        return len(self.coordinates)

    @property
    def max_shift(self):
        return max((max(s) for s in self.terms if s), default=0)

    @property
    def theta_order(self):
        return max(sum(k) for block in self.terms.values() for k in block)

    def theta_polynomials(self):
        """Shift -> expanded sympy polynomial in theta_i (i over free coordinates)."""
        thetas = [THETA_SYMBOLS[c] for c in self.coordinates]
        out = {}
        for shift, block in self.terms.items():
            poly = sum(coeff * sympy.Mul(*[falling(t, k) for t, k in zip(thetas, ks)])
                       for ks, coeff in block.items())
            out[shift] = sympy.expand(poly)
        return out

    def to_derivative_form(self):
        """Re-expand into the normal-ordered y / D polynomial."""
        total = 0
        for shift, block in self.terms.items():
            for ks, coeff in block.items():
                mono = 1
                for c, s, k in zip(self.coordinates, shift, ks):
                    mono *= Y_SYMBOLS[c] ** (s + k) * D_SYMBOLS[c] ** k
                total += coeff * mono
        return sympy.expand(total)

    def numeric(self, lam):
        """Terms with lam2..lam4 substituted: list of (shift, [(k, complex)])."""
        subs = dict(zip(LAMBDA_SYMBOLS, lam[1:]))
        return [(shift, [(ks, complex(sympy.N(coeff.subs(subs), 20)))
                         for ks, coeff in block.items()])
                for shift, block in self.terms.items()]


def euler_from_expression(label, weyl, expr):
    """Convert a normal-ordered y/D expression into an :class:`EulerOperator`.

    Raises DomainError if any monomial carries a derivative not matched by an
    equal power of the same y, or involves a non-free coordinate.
    """
    w = WeylElement.from_name(weyl)
    coords = free_coordinates(w)
    expanded = sympy.expand(expr)
    poly = sympy.Poly(expanded, *Y_SYMBOLS, *D_SYMBOLS)
    terms: dict = {}
    for monom, coeff in poly.terms():
        ys, ds = monom[:3], monom[3:]
        for i in range(3):
            if i not in coords and (ys[i] or ds[i]):
                raise DomainError(f"operator {label} involves fixed coordinate y{i + 1}")
            if ys[i] < ds[i]:
                raise DomainError(
                    f"operator {label}: y{i + 1}^{ys[i]} D{i + 1}^{ds[i]} is not of Euler type")
        shift = tuple(ys[i] - ds[i] for i in coords)
        ks = tuple(ds[i] for i in coords)
        block = terms.setdefault(shift, {})
        block[ks] = block.get(ks, 0) + coeff
    return EulerOperator(label, weyl, tuple(coords), terms, str(expr))


def parse_operator_table(text):
    """Parse the operator data file into a list of (label, weyl, sympy expr)."""
    entries = []
    header = None
    body: list[str] = []

    def flush():
        if header is not None:
            expr = sympy.sympify(" ".join(body), locals=_PARSE_LOCALS)
            entries.append((header[0], header[1], expr))

    for raw in text.splitlines() + [""]:
        line = raw.strip()
        if line.startswith("#"):
            continue
        if line.startswith("operator "):
            flush()
            _, label, weyl = line.split()
            header, body = (label, weyl), []
        elif not line:
            flush()
            header, body = None, []
        elif header is not None:
            body.append(line)
    return entries


@functools.lru_cache(maxsize=None)
def operator_table():
    text = resources.files("gl4bessel").joinpath("data/operators.txt").read_text()
    return tuple(euler_from_expression(label, weyl, expr)
                 for label, weyl, expr in parse_operator_table(text))


def operators_for(w: WeylElement):
    return [op for op in operator_table() if op.weyl == w.name]


def _check_series(op: EulerOperator, series: FrobeniusSeries):
    if series.weyl.name != op.weyl:
        raise DomainError(f"operator {op.label} is for w{op.weyl}, series is w{series.weyl.name}")


def apply_operator(op: EulerOperator, series: FrobeniusSeries, order=None,
                   with_scale=False, as_printed=False):
    """Output lattice c'_m for 0 <= m_i <= order.

    ``order`` defaults to the largest one the input supports. With
    ``with_scale`` a second lattice is returned holding, per point, the
    cancellation-free magnitude sum_s |c_{m-s}| sum_k |coeff_k falling_k|.
    """
    _check_series(op, series)
    supported = series.order
    if order is None:
        order = supported
    if order > supported or order < 0:
        raise OrderError(f"output order {order} exceeds the input lattice order {supported}")
    lam = operator_eigenvalues(series.mu, as_printed)
    alpha = series.leading
    coeffs = series.coeffs
    shape = (order + 1,) * op.dim
    out = np.zeros(shape, dtype=complex)
    scale = np.zeros(shape)
    grids = np.meshgrid(*[np.arange(order + 1)] * op.dim, indexing="ij")
    for shift, block in op.numeric(lam):
        src = [g - s for g, s in zip(grids, shift)]
        valid = np.ones(shape, dtype=bool)
        for s in src:
            valid &= s >= 0
        if not valid.any():
            continue
        idx = tuple(np.where(valid, s, 0) for s in src)
        c = np.where(valid, coeffs[idx], 0)
        poly = np.zeros(shape, dtype=complex)
        weight = np.zeros(shape)
        for ks, coeff in block:
            val = np.full(shape, coeff, dtype=complex)
            for a, s, k in zip(alpha, src, ks):
                val = val * falling(a + s, k)
            poly += val
            weight += np.abs(val)
        out += poly * c
        scale += weight * np.abs(c)
    if with_scale:
        return out, scale
    return out


def lattice_residual(op: EulerOperator, series: FrobeniusSeries, order=None,
                     as_printed=False):
    """max_m |c'_m| / (cancellation-free magnitude at m)."""
    out, scale = apply_operator(op, series, order, with_scale=True, as_printed=as_printed)
    mask = scale > 0
    if not mask.any():
        return 0.0
    return float(np.max(np.abs(out[mask]) / scale[mask]))


def annihilation_residual(w: WeylElement, mu, order, form="a", as_printed=False):
    """Worst normalized residual over all operators listed for ``w``."""
    ops = operators_for(w)
    if not ops:
        raise DomainError(f"no operators recorded for w{w.name}")
    series = FrobeniusSeries.build(w, mu, order, form)
    return max(lattice_residual(op, series, as_printed=as_printed) for op in ops)


def leading_exponent_matrix(w: WeylElement, mu):
    """Leading exponents of the |W/W_w| coset series, one row per coset."""
    from .weyl import SpectralParams, coset_reps, weyl_action
    from .frobenius import leading_exponents
    rows = []
    for rep in coset_reps(w):
        moved = weyl_action(SpectralParams(tuple(mu), (0, 0, 0, 0)), rep).mu
        rows.append(leading_exponents(w, moved))
    return np.array(rows, dtype=complex)


def indicial_roots_distinct(w: WeylElement, mu, tol=1e-9):
    """True when the coset leading exponents are pairwise distinct mod nothing.

    A Vandermonde in the exponents is non-singular exactly in that case, which
    makes the coset series linearly independent.
    """
    rows = leading_exponent_matrix(w, mu)
    for a, b in itertools.combinations(range(len(rows)), 2):
        if np.max(np.abs(rows[a] - rows[b])) < tol:
            return False
    return True
