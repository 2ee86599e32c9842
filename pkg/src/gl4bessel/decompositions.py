"""Closed-form Iwasawa and Bruhat decompositions of w x, checked numerically.

For each relevant w (other than the identity and the two non-kernel
elements) the unipotent x runs over the subgroup U_w-bar, whose pattern of
free entries is listed in ``U_BAR_PATTERN``. Each decomposition is a pair of
4x4 matrix products; the deviation functions return the largest entrywise
difference relative to the largest entry.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularCell
from .weyl import WeylElement

DENOMINATOR_TOL = 1e-6
SAMPLING_TOL = 1e-3

# Which of x1..x6 are free in U_w-bar (1-based); the rest are zero.
U_BAR_PATTERN = {
    "31": (1, 2, 4),
    "22": (2, 3, 4, 5),
    "121": (1, 2, 4, 5, 6),
    "211": (1, 2, 3, 4, 5),
    "1111": (1, 2, 3, 4, 5, 6),
}


@dataclass(frozen=True)
class UnipotentCoords:
    """x1..x6 in the upper-triangular layout; unused entries must be zero."""

    x: tuple

    def __post_init__(self):
        if len(self.x) != 6:
            raise DomainError("unipotent coordinates need six entries")
        if not all(np.isfinite(v) for v in self.x):
            raise DomainError("unipotent coordinates must be finite")

    def __getitem__(self, i):
        """1-based access, matching the coordinate names."""
        return self.x[i - 1]

    @classmethod
    def sample(cls, rng, w: WeylElement, low=-2.0, high=2.0):
        free = U_BAR_PATTERN[w.name]
        vals = [0.0] * 6
        for i in free:
            vals[i - 1] = float(rng.uniform(low, high))
        return cls(tuple(vals))

    def matrix(self):
        return unipotent(*self.x)


def unipotent(x1, x2, x3, x4, x5, x6):
    return np.array([[1, x1, x2, x4],
                     [0, 1, x3, x5],
                     [0, 0, 1, x6],
                     [0, 0, 0, 1]], dtype=float)


def y_matrix(y1, y2, y3, y4):
    return np.diag([y1 * y2 * y3 * y4, y2 * y3 * y4, y3 * y4, y4])


def a_matrix(a1, a2, a3, a4):
    return np.diag([a1 / a2, a2 / a3, a3 / a4, a4])


def rotation(i, j, x):
    """K_ij(x): a rotation in the (i, j) coordinate plane (1-based)."""
    k = np.eye(4)
    r = np.sqrt(1 + x * x)
    k[i - 1, i - 1] = k[j - 1, j - 1] = 1 / r
    k[i - 1, j - 1] = -x / r
    k[j - 1, i - 1] = x / r
    return k


def xi(x: UnipotentCoords, *indices):
    """prod over the given indices of sqrt(1 + x_i^2)."""
    out = 1.0
    for i in indices:
        out *= np.sqrt(1 + x[i] ** 2)
    return out


def _product(*mats):
    out = np.eye(4)
    for m in mats:
        out = out @ m
    return out


def _check_pattern(w: WeylElement, x: UnipotentCoords):
    if w.name not in U_BAR_PATTERN:
        raise DomainError(f"no decomposition recorded for w{w.name}")
    free = U_BAR_PATTERN[w.name]
    for i in range(1, 7):
        if i not in free and x[i] != 0:
            raise DomainError(f"x{i} must vanish for w{w.name}")


# ------------------------------------------------------------------ Iwasawa


def _iwasawa31(x):
    x1, x2, x4 = x[1], x[2], x[4]
    s = lambda *i: xi(x, *i)  # noqa: E731
    lhs = unipotent(x1, x2 * s(1), 0, x4 * s(1, 2), 0, 0)
    right = (
        unipotent(-x1 * x2 / s(1), -x1 * x4 / s(1, 2), -x2 * x4 / s(2),
                  x1 / s(1, 2, 4) ** 2, x2 / (s(1) * s(2, 4) ** 2),
                  x4 / (s(1, 2) * s(4) ** 2)),
        y_matrix(s(2) / s(1), s(4) / s(2), 1 / (s(1, 2) * s(4) ** 2), s(1, 2, 4)),
        rotation(3, 4, x4), rotation(2, 4, x2), rotation(1, 4, x1),
    )
    return lhs, right


def _iwasawa22(x):
    x2, x3, x4, x5 = x[2], x[3], x[4], x[5]
    s = lambda *i: xi(x, *i)  # noqa: E731
    lhs = unipotent(0, x2 * s(3), x3, x2 * x3 * x5 + x4 * s(2, 5), x5 * s(3), 0)
    right = (
        unipotent(-x3 * x5 / s(3) - x2 * x4 * s(5) / s(2, 3),
                  -x3 * x4 * x5 / (s(2, 3, 5) * s(4) ** 2) + x2 / (s(3) * s(2, 4) ** 2),
                  x4 / (s(2, 5) * s(4) ** 2),
                  x3 / s(3, 5) ** 2,
                  x5 / (s(3) * s(5) ** 2),
                  x2 * x3 / s(3) + x4 * x5 * s(2) / s(3, 5)),
        y_matrix(s(4, 5) / s(2, 3), 1 / (s(2, 5) * s(4) ** 2), s(2, 4) / s(3, 5), s(3, 5)),
        rotation(2, 3, x4), rotation(1, 3, x2), rotation(2, 4, x5), rotation(1, 4, x3),
    )
    return lhs, right


def _iwasawa121(x):
    x1, x2, x4, x5, x6 = x[1], x[2], x[4], x[5], x[6]
    s = lambda *i: xi(x, *i)  # noqa: E731
    lhs = unipotent(
        x1, x2 * s(1), 0, x4 * s(1, 2),
        (x1 * x4 - x1 * x2 * x6 * s(4)) / s(1, 2) + x5 * s(4, 6) / s(1),
        (x2 * x4 + x6 * s(4)) / s(2))
    right = (
        unipotent(x5 * s(1) / (s(4, 6) * s(5) ** 2),
                  x6 * s(2) / (s(4) * s(6) ** 2),
                  x5 * x6 * s(2) / s(1, 6) - x1 * x2 / s(1),
                  x4 / (s(1, 2) * s(4) ** 2),
                  x1 / s(1, 2) ** 2 - x1 * x2 * x4 * x6 / (s(4) * s(1, 2) ** 2)
                  + x4 * x5 * s(6) / (s(2, 4) * s(1) ** 2),
                  x2 / (s(1) * s(2) ** 2) + x4 * x6 / (s(1, 4) * s(2) ** 2)),
        y_matrix(s(1) / (s(4, 6) * s(5) ** 2), s(2, 5) / s(1, 6),
                 s(6) / (s(1, 4) * s(2) ** 2), s(1, 2, 4)),
        rotation(1, 2, x5), rotation(1, 3, x6), rotation(1, 4, x4),
        rotation(3, 4, x2), rotation(2, 4, x1),
    )
    return lhs, right


def _iwasawa211(x):
    x1, x2, x3, x4, x5 = x[1], x[2], x[3], x[4], x[5]
    s = lambda *i: xi(x, *i)  # noqa: E731
    lhs = unipotent(
        x1, x2 * s(1), (x1 * x2 + x3 * s(2)) / s(1), x4 * s(1, 2),
        (x2 * x3 * x4 + x1 * x4 * s(2) + x5 * s(3, 4)) / s(1), 0)
    right = (
        unipotent(-x2 * x4 / s(2) - x3 * x5 * s(4) / s(2, 3),
                  x3 * s(1) / (s(2) * s(3, 5) ** 2) - x2 * x4 * x5 * s(1) / (s(2, 3, 4) * s(5) ** 2),
                  x5 * s(1) / (s(3, 4) * s(5) ** 2),
                  # printed as x2 / (xi_14 xi_2^2); the top-right entry of the
                  # Iwasawa factor is x2 / (xi_1 xi_24^2)
                  x2 / (s(1) * s(2, 4) ** 2),
                  x4 / (s(1, 2) * s(4) ** 2),
                  x1 / s(1) ** 2 + x2 * x3 / (s(2) * s(1) ** 2)
                  + x4 * x5 * s(3) / (s(2, 4) * s(1) ** 2)),
        y_matrix(s(4, 5) / s(2, 3), s(1) / (s(3, 4) * s(5) ** 2),
                 s(3, 5) / (s(2, 4) * s(1) ** 2), s(1, 2, 4)),
        rotation(2, 3, x5), rotation(1, 3, x3), rotation(2, 4, x4),
        rotation(1, 4, x2), rotation(3, 4, x1),
    )
    return lhs, right


def _iwasawa1111(x):
    x1, x2, x3, x4, x5, x6 = (x[i] for i in range(1, 7))
    s = lambda *i: xi(x, *i)  # noqa: E731
    lhs = unipotent(
        x1, x2 * s(1), (x1 * x2 + x3 * s(2)) / s(1), x4 * s(1, 2),
        (x2 * x3 * x4 + x1 * x4 * s(2) + x5 * s(3, 4)) / s(1),
        (x2 * x4 * s(3) + x3 * x5 * s(4) + x6 * s(4, 5)) / s(2, 3))
    right = (
        unipotent(x6 * s(2, 3) / (s(4, 5) * s(6) ** 2),
                  x5 * s(1) / (s(3, 4) * s(5) ** 2),
                  (x3 * s(1, 5) + x5 * x6 * s(1)) / (s(2, 5) * s(3) ** 2),
                  x4 / (s(1, 2) * s(4) ** 2),
                  (x3 * x4 * x5 + x2 * s(3, 4) + x4 * x6 * s(5)) / (s(1, 3, 4) * s(2) ** 2),
                  (x1 * s(2, 4) + x2 * x3 * s(4) + x4 * x5 * s(3)) / (s(2, 4) * s(1) ** 2)),
        y_matrix(s(2, 3) / (s(4, 5) * s(6) ** 2), s(1, 6) / (s(2, 5) * s(3) ** 2),
                 s(3, 5) / (s(2, 4) * s(1) ** 2), s(1, 2, 4)),
        rotation(1, 2, x6), rotation(1, 3, x5), rotation(2, 3, x3),
        rotation(1, 4, x4), rotation(2, 4, x2), rotation(3, 4, x1),
    )
    return lhs, right


IWASAWA = {"31": _iwasawa31, "22": _iwasawa22, "121": _iwasawa121,
           "211": _iwasawa211, "1111": _iwasawa1111}


def iwasawa_sides(w: WeylElement, x: UnipotentCoords):
    """(w X(...), X(...) Y(...) K...K w) as 4x4 arrays."""
    _check_pattern(w, x)
    lhs_x, right = IWASAWA[w.name](x)
    wm = w.matrix.astype(float)
    return wm @ lhs_x, _product(*right, wm)


def _relative_gap(lhs, rhs):
    scale = max(np.max(np.abs(lhs)), np.max(np.abs(rhs)), 1.0)
    return float(np.max(np.abs(lhs - rhs)) / scale)


def iwasawa_deviation(w: WeylElement, x: UnipotentCoords):
    return _relative_gap(*iwasawa_sides(w, x))


def rotations_orthogonal(x_values=(-2.0, -0.3, 0.0, 0.7, 5.0)):
    """Largest |K^T K - I| over all planes and the given parameters."""
    worst = 0.0
    for i in range(1, 5):
        for j in range(i + 1, 5):
            for v in x_values:
                k = rotation(i, j, v)
                worst = max(worst, float(np.max(np.abs(k.T @ k - np.eye(4)))))
    return worst


# ------------------------------------------------------------------- Bruhat


def zetas(x: UnipotentCoords):
    x1, x2, x3, x4, x5, x6 = (x[i] for i in range(1, 7))
    return {
        1: x3 * x4 - x2 * x5,
        2: x4 - x2 * x6,
        3: x4 - x1 * x5 - x2 * x6,
        4: x4 - x1 * x5,
        5: x2 - x1 * x3,
        6: x4 - x1 * x5 - x2 * x6 + x1 * x3 * x6,
        7: x5 - x3 * x6,
    }


# Denominators each Bruhat display divides by: ("x", i) or ("zeta", j).
BRUHAT_DENOMINATORS = {
    "31": (("x", 1), ("x", 2), ("x", 4)),
    "22": (("x", 2), ("x", 5), ("zeta", 1)),
    "121": (("x", 4), ("zeta", 2), ("zeta", 3)),
    "211": (("x", 4), ("zeta", 1), ("zeta", 5)),
    "1111": (("x", 4), ("zeta", 1), ("zeta", 6)),
}


def denominators(w: WeylElement, x: UnipotentCoords):
    z = zetas(x)
    return {f"{kind}{i}": (x[i] if kind == "x" else z[i])
            for kind, i in BRUHAT_DENOMINATORS[w.name]}


def admissible(w: WeylElement, x: UnipotentCoords, tol=DENOMINATOR_TOL):
    return all(abs(v) >= tol for v in denominators(w, x).values())


def _bruhat31(x, z):
    x1, x2, x4 = x[1], x[2], x[4]
    # A takes four arguments; the three-argument display reads as A(-1, x1, -x2, x4)
    return (unipotent(-x2 / x1, 0, -x4 / x2, 0, 0, 1 / x4),
            a_matrix(-1, x1, -x2, x4),
            unipotent(1 / x1, 1 / x2, x1 / x2, 1 / x4, x1 / x4, x2 / x4))


def _bruhat22(x, z):
    x2, x3, x4, x5 = x[2], x[3], x[4], x[5]
    return (unipotent(-x4 / x2, -x5 / z[1], x3 / z[1], 0, 1 / x5, x4 / x5),
            a_matrix(1, -x2, -z[1], x5),
            unipotent(-x3 / x2, -x5 / z[1], x4 / z[1], 0, 1 / x5, x3 / x5))


def _bruhat121(x, z):
    x1, x2, x4, x5, x6 = x[1], x[2], x[4], x[5], x[6]
    return (unipotent(-x1 / z[3], -x2 / z[2], -x2 * x5 / z[2], 1 / x4, x5 / x4, x6 / x4),
            a_matrix(-1, z[3], z[2], x4),
            unipotent(-x5 / z[3], -x6 / z[2], -x1 * x6 / z[2], 1 / x4, x1 / x4, x2 / x4))


def _bruhat211(x, z):
    x1, x2, x3, x4, x5 = x[1], x[2], x[3], x[4], x[5]
    return (unipotent(-z[4] / z[5], x4 / z[1], -x2 / z[1], 0, 1 / x4, x5 / x4),
            a_matrix(-1, z[5], z[1], x4),
            unipotent(-x3 / z[5], -x5 / z[1], z[4] / z[1], 1 / x4, x1 / x4, x2 / x4))


def _bruhat1111(x, z):
    x1, x2, x4, x5, x6 = x[1], x[2], x[4], x[5], x[6]
    return (unipotent(-z[5] / z[6], -x2 / z[1], z[2] / z[1], 1 / x4, x6 / x4, x5 / x4),
            a_matrix(1, -z[6], z[1], x4),
            unipotent(-z[7] / z[6], -x5 / z[1], z[4] / z[1], 1 / x4, x1 / x4, x2 / x4))


BRUHAT = {"31": _bruhat31, "22": _bruhat22, "121": _bruhat121,
          "211": _bruhat211, "1111": _bruhat1111}


def bruhat_sides(w: WeylElement, x: UnipotentCoords, tol=DENOMINATOR_TOL):
    """(w x, X(...) A(...) X(...)^T); SingularCell near a vanishing denominator."""
    _check_pattern(w, x)
    for name, value in denominators(w, x).items():
        if abs(value) < tol:
            raise SingularCell(f"w{w.name}: denominator {name} = {value:.3g} below {tol:g}")
    left, diag, right = BRUHAT[w.name](x, zetas(x))
    return w.matrix.astype(float) @ x.matrix(), left @ diag @ right.T


def bruhat_deviation(w: WeylElement, x: UnipotentCoords, tol=DENOMINATOR_TOL):
    return _relative_gap(*bruhat_sides(w, x, tol))


def bruhat_determinant_gap(w: WeylElement, x: UnipotentCoords):
    """|det(w x) - det(RHS)|; both sides are +-1 whenever defined."""
    lhs, rhs = bruhat_sides(w, x, tol=0.0)
    return abs(np.linalg.det(lhs) - np.linalg.det(rhs))


def sample_admissible(rng, w: WeylElement, tol=SAMPLING_TOL, max_tries=1000):
    for _ in range(max_tries):
        x = UnipotentCoords.sample(rng, w)
        if admissible(w, x, tol):
            return x
    raise SingularCell(f"could not sample an admissible point for w{w.name}")


def sweep(w: WeylElement, samples=1000, seed=0):
    """Worst (iwasawa, bruhat) deviation over random admissible samples."""
    rng = np.random.default_rng(seed)
    worst_iw = worst_br = 0.0
    for _ in range(samples):
        x = sample_admissible(rng, w)
        worst_iw = max(worst_iw, iwasawa_deviation(w, x))
        worst_br = max(worst_br, bruhat_deviation(w, x))
    return worst_iw, worst_br
