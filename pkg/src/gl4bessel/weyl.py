"""Spectral parameters, power functions and GL(4) Weyl group combinatorics.

Permutations are stored as 0-based image tuples ``p`` with ``p[j] = sigma(j)``;
the matching permutation matrix sends e_j to e_sigma(j), so its column j has
its 1 in row sigma(j).  Public helpers that take cycle strings use 1-based
labels, e.g. ``perm_from_cycles("(1 4 2 3)")``.
"""

from __future__ import annotations

import cmath
import itertools
import json
import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateParameters, DomainError, PoleError
from .special import complex_gamma, g_eta, r_eta

RHO = (1.5, 0.5, -0.5, -1.5)
SUM_TOL = 1e-12
DISTINCT_TOL = 1e-9
N = 4


# ------------------------------------------------------------ parameters


@dataclass(frozen=True)
class SpectralParams:
    mu: tuple
    delta: tuple = (0, 0, 0, 0)

    def __post_init__(self):
        mu = tuple(complex(m) for m in self.mu)
        delta = tuple(int(d) for d in self.delta)
        if len(mu) != N or len(delta) != N:
            raise DomainError("mu and delta need four entries")
        if abs(sum(mu)) > SUM_TOL:
            raise DomainError(f"mu must sum to zero, got {sum(mu)}")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "delta", delta)

    @property
    def total_delta(self):
        return sum(self.delta)

    def is_distinct(self, tol=DISTINCT_TOL):
        """True when no difference mu_i - mu_j lies within tol of an integer."""
        for i, j in itertools.combinations(range(N), 2):
            d = self.mu[i] - self.mu[j]
            if abs(d.imag) < tol and abs(d.real - round(d.real)) < tol:
                return False
        return True

    def require_distinct(self):
        if not self.is_distinct():
            raise DegenerateParameters(f"mu coordinates collide mod Z: {self.mu}")

    def negated(self):
        return SpectralParams(tuple(-m for m in self.mu), self.delta)

    def to_dict(self):
        return {"mu": [[m.real, m.imag] for m in self.mu], "delta": list(self.delta)}

    @classmethod
    def from_dict(cls, d):
        return cls(tuple(complex(re_, im) for re_, im in d["mu"]), tuple(d["delta"]))

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def sample_tempered(rng: np.random.Generator, delta=(0, 0, 0, 0), spread=2.0,
                    margin=1e-3) -> SpectralParams:
    """Purely imaginary mu with i*t_i, t_i uniform on [-spread, spread].

    Redraws until every mu_i - mu_j is at least ``margin`` away from Z.
    """
    while True:
        t = rng.uniform(-spread, spread, size=3)
        mu = tuple(1j * x for x in (*t, -t.sum()))
        ok = all(abs(mu[i] - mu[j]) >= margin
                 for i, j in itertools.combinations(range(N), 2))
        if ok:
            return SpectralParams(mu, delta)


# ------------------------------------------------------------ characters


def chi(s, ell, a):
    """sgn(a)^ell |a|^s."""
    if a == 0:
        raise DomainError("chi is undefined at 0")
    sign = -1 if (a < 0 and ell % 2) else 1
    return sign * cmath.exp(complex(s) * math.log(abs(a)))


def y_to_diag(y, y4=1.0):
    """Diagonal entries of Y(y1,y2,y3,y4)."""
    y1, y2, y3 = y
    return (y1 * y2 * y3 * y4, y2 * y3 * y4, y3 * y4, y4)


def diag_to_y(d):
    """Inverse of y_to_diag: returns ((y1,y2,y3), y4)."""
    if any(x == 0 for x in d):
        raise DomainError("singular diagonal matrix")
    return (d[0] / d[1], d[1] / d[2], d[2] / d[3]), d[3]


def power_I(params: SpectralParams, a, variant="standard"):
    """Power function on a diagonal matrix diag(a) (three entries for 'tilde').

    variants: 'standard' I_{mu,delta}, 'unnormalized' I_{mu-rho,delta},
    'tilde' the three-argument form, 'iota-dual' I_{mu,delta}(a^iota) where
    a^iota = w_l a^{-1} w_l.
    """
    mu, delta = params.mu, params.delta
    if any(x == 0 for x in a):
        raise DomainError("power function needs nonzero coordinates")
    if variant == "tilde":
        if len(a) != 3:
            raise DomainError("tilde power function takes three arguments")
        out = 1 + 0j
        for i in range(3):
            out *= chi(-1 + mu[i + 1] - mu[i], delta[i] + delta[i + 1], a[i])
        return out
    if len(a) != N:
        raise DomainError("power function takes four diagonal entries")
    if variant == "iota-dual":
        a = tuple(1.0 / x for x in reversed(a))
        shift = RHO
    elif variant == "standard":
        shift = RHO
    elif variant == "unnormalized":
        shift = (0, 0, 0, 0)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    out = 1 + 0j
    for ai, mi, di, ri in zip(a, mu, delta, shift):
        out *= chi(ri + mi, di, ai)
    return out


def lambda_eigen(mu):
    """Casimir eigenvalues (lambda_1..lambda_4) of the power function."""
    mu = [complex(m) for m in mu]
    sq = sum(m * m for m in mu)
    quart = sum(m ** 4 for m in mu)
    cubic = sum(mu[i] * mu[j] * mu[k]
                for i, j, k in itertools.combinations(range(N), 3))
    return (0j, 2.5 - sq / 2, cubic, 41 / 16 - quart / 4)


# ------------------------------------------------------------ permutations


IDENTITY = (0, 1, 2, 3)


def perm_compose(p, q):
    """p o q (apply q first); matches the matrix product P @ Q."""
    return tuple(p[q[j]] for j in range(len(q)))


def perm_inverse(p):
    inv = [0] * len(p)
    for j, pj in enumerate(p):
        inv[pj] = j
    return tuple(inv)


def perm_matrix(p):
    m = np.zeros((len(p), len(p)), dtype=int)
    for j, pj in enumerate(p):
        m[pj, j] = 1
    return m


def perm_from_matrix(m):
    m = np.asarray(m)
    return tuple(int(np.argmax(m[:, j])) for j in range(m.shape[1]))


def perm_from_cycles(text, n=N):
    """Parse 1-based cycle notation such as '(1 3)(2 4)' or '(1 4 2 3)'."""
    images = list(range(n))
    for cycle in re.findall(r"\(([^)]*)\)", text):
        pts = [int(x) - 1 for x in cycle.replace(",", " ").split()]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            images[a] = b
    if sorted(images) != list(range(n)):
        raise ValueError(f"not a permutation: {text}")
    return tuple(images)


def perm_to_cycles(p):
    seen, parts = set(), []
    for start in range(len(p)):
        if start in seen or p[start] == start:
            continue
        cyc, j = [], start
        while j not in seen:
            seen.add(j)
            cyc.append(str(j + 1))
            j = p[j]
        parts.append("(" + " ".join(cyc) + ")")
    return "".join(parts) or "I"


def all_perms():
    return [tuple(p) for p in itertools.permutations(range(N))]


# ------------------------------------------------------------ Weyl elements


@dataclass(frozen=True)
class WeylElement:
    """Reverse-block permutation w_{r1,...,rl}: I_{r1} top right, ..., I_{rl} bottom left."""

    composition: tuple
    permutation: tuple = field(init=False, compare=False)

    def __post_init__(self):
        comp = tuple(int(r) for r in self.composition)
        if any(r <= 0 for r in comp) or sum(comp) != N:
            raise DomainError(f"bad composition {comp}")
        object.__setattr__(self, "composition", comp)
        # block b occupies rows starting at row_start and columns counted
        # from the right
        images = [0] * N
        row = 0
        col_end = N
        for r in comp:
            col_start = col_end - r
            for k in range(r):
                images[col_start + k] = row + k
            row += r
            col_end = col_start
        object.__setattr__(self, "permutation", tuple(images))

    @property
    def name(self):
        return "".join(str(r) for r in self.composition)

    @property
    def matrix(self):
        return perm_matrix(self.permutation)

    @classmethod
    def from_name(cls, name):
        name = str(name).lstrip("w").replace(",", "")
        return cls(tuple(int(c) for c in name))

    def blocks(self):
        """Index blocks (0-based) permuted by the stabilizer W_w."""
        out, start = [], 0
        for r in self.composition:
            out.append(tuple(range(start, start + r)))
            start += r
        return out

    def iota(self):
        """w^iota = w_l (w^{-1})^T w_l, again a reverse-block element."""
        return WeylElement(tuple(reversed(self.composition)))

    def __str__(self):
        return "w" + self.name


LONG = WeylElement((1, 1, 1, 1))
RELEVANT_NAMES = ("4", "13", "31", "22", "112", "121", "211", "1111")
KERNEL_NAMES = ("31", "22", "121", "211", "1111")


def relevant_weyl_list():
    return [WeylElement.from_name(n) for n in RELEVANT_NAMES]


def weyl_action(params: SpectralParams, w) -> SpectralParams:
    """(mu^w, delta^w) with mu^w_i = mu_{w^{-1}(i)}.

    As a map on parameters this is a left action: applying w and then w2
    equals applying perm_compose(w2, w).
    """
    p = w.permutation if isinstance(w, WeylElement) else tuple(w)
    inv = perm_inverse(p)
    mu = tuple(params.mu[inv[i]] for i in range(N))
    delta = tuple(params.delta[inv[i]] for i in range(N))
    return SpectralParams(mu, delta)


def stabilizer(w: WeylElement):
    """W_w: the permutations preserving each block of w."""
    blocks = w.blocks()
    return [p for p in all_perms()
            if all(set(p[i] for i in b) == set(b) for b in blocks)]


def _coset_key(w: WeylElement, p):
    inv = perm_inverse(p)
    return tuple(frozenset(inv[i] for i in b) for b in w.blocks())


_W22_TRANSVERSAL = ("", "(1 3)", "(2 3)", "(1 4)", "(2 4)", "(1 3)(2 4)")


def _simplicity(p):
    moved = sum(1 for j, pj in enumerate(p) if j != pj)
    return (moved, perm_to_cycles(p))


def coset_reps(w: WeylElement):
    """A transversal {w'} such that mu^{w'} runs once over each W_w-orbit.

    Two permutations are equivalent when mu^{w'} places the same set of mu
    indices in every block of w, so a W_w-invariant function of mu takes one
    value per class.  Ties are broken towards permutations moving the fewest
    points.
    """
    if w.composition == (2, 2):
        return [perm_from_cycles(c) for c in _W22_TRANSVERSAL]
    reps, seen = [], set()
    for p in sorted(all_perms(), key=_simplicity):
        key = _coset_key(w, p)
        if key not in seen:
            seen.add(key)
            reps.append(p)
    return reps


# ------------------------------------------------------------ Lambda_w, C_w


def inversion_pairs(w: WeylElement):
    """Pairs (j,k), j<k (0-based) with the images of k and j under w reversed."""
    p = w.permutation
    return [(j, k) for j, k in itertools.combinations(range(N), 2) if p[k] < p[j]]


def s_pairs(w: WeylElement):
    """Index set S_w: inversion pairs pulled back through mu -> mu^{w_l}."""
    return sorted((N - 1 - k, N - 1 - j) for j, k in inversion_pairs(w))


def lambda_w(mu, w: WeylElement):
    """Lambda_w(mu) = prod over S_w of (2 pi)^{mu_k-mu_j} Gamma(1+mu_j-mu_k)."""
    out = 1 + 0j
    for j, k in s_pairs(w):
        d = complex(mu[j]) - complex(mu[k])
        out *= cmath.exp(-d * math.log(2 * math.pi)) * complex_gamma(1 + d)
    return out


def c_w_star(params: SpectralParams, w: WeylElement):
    """C*_w(mu, delta): the product of G-functions over S_w."""
    mu, delta = params.mu, params.delta
    out = 1 + 0j
    for j, k in s_pairs(w):
        out *= (-1) ** delta[j] * g_eta(delta[j] + delta[k], mu[k] - mu[j])
    return out


def c_w(params: SpectralParams, w: WeylElement):
    """C_w(mu, delta) = prod over S_w of (-1)^{delta_j} pi / R_{delta_j+delta_k}(1+mu_j-mu_k)."""
    mu, delta = params.mu, params.delta
    out = 1 + 0j
    for j, k in s_pairs(w):
        r = r_eta(delta[j] + delta[k], 1 + mu[j] - mu[k])
        if abs(r) < 1e-12:
            raise PoleError(f"R factor for pair ({j + 1},{k + 1}) vanishes")
        out *= (-1) ** delta[j] * math.pi / r
    return out


# ------------------------------------------------------------ Y points, iota


_FIXED = {"31": (0, 1), "22": (0, 2), "121": (1,), "211": (0,),
          "1111": (), "13": (1, 2), "112": (2,), "4": (0, 1, 2)}


def free_coordinates(w: WeylElement):
    """0-based indices of the y-coordinates not fixed to 1 on Y_w."""
    fixed = _FIXED[w.name]
    return tuple(i for i in range(3) if i not in fixed)


@dataclass(frozen=True)
class YPoint:
    """Y(y1,y2,y3,y4) modulo positive scalars; only the sign of y4 survives."""

    y: tuple
    y4_sign: int = 1

    def __post_init__(self):
        y = tuple(float(v) for v in self.y)
        if len(y) != 3:
            raise DomainError("YPoint needs three coordinates")
        if any(v == 0 for v in y):
            raise DomainError("Y coordinates must be nonzero")
        if self.y4_sign not in (1, -1):
            raise DomainError("y4 sign must be +1 or -1")
        object.__setattr__(self, "y", y)

    @classmethod
    def on(cls, w: WeylElement, free_values):
        """Build the point of Y_w with the given free coordinates."""
        y = [1.0, 1.0, 1.0]
        idx = free_coordinates(w)
        if len(free_values) != len(idx):
            raise DomainError(f"{w} has {len(idx)} free coordinates")
        for i, v in zip(idx, free_values):
            y[i] = v
        return cls(tuple(y))

    def in_Y(self, w: WeylElement):
        return all(self.y[i] == 1.0 for i in _FIXED[w.name])

    def diag(self):
        return y_to_diag(self.y, float(self.y4_sign))

    def matrix(self):
        return np.diag(self.diag())

    @classmethod
    def from_diag(cls, d):
        y, y4 = diag_to_y(d)
        # the positive part of y4 is central and dropped
        return cls(y, 1 if y4 > 0 else -1)


def sign_vector(mode="Y"):
    """Diagonal of v: 'Y' means v = Y(-1,-1,-1,-1), 'central' means v = -I."""
    if mode == "Y":
        return y_to_diag((-1.0, -1.0, -1.0), -1.0)
    if mode == "central":
        return (-1.0,) * N
    raise ValueError(f"unknown sign mode {mode!r}")


def v_tilde(w: WeylElement, mode="Y"):
    """Diagonal of v w v w^{-1}."""
    v = sign_vector(mode)
    p = w.permutation
    conj = [0.0] * N
    for j in range(N):
        conj[p[j]] = v[j]  # w diag(v) w^{-1} puts v_j at position w(j)
    return tuple(a * b for a, b in zip(v, conj))


def y_iota(y: YPoint) -> YPoint:
    """y^iota = w_l y^{-1} w_l, i.e. Y(y3, y2, y1, .) up to positive scalars."""
    d = y.diag()
    return YPoint.from_diag(tuple(1.0 / x for x in reversed(d)))


def iota_transform(y: YPoint, params: SpectralParams, w: WeylElement, mode="Y"):
    """(v~ y^iota, (-mu^{w_l}, delta^{w_l}), w^iota) for K_w = K_{w^iota}(...)."""
    yi = y_iota(y).diag()
    vt = v_tilde(w, mode)
    moved = YPoint.from_diag(tuple(a * b for a, b in zip(vt, yi)))
    flipped = weyl_action(params, LONG)
    new_params = SpectralParams(tuple(-m for m in flipped.mu), flipped.delta)
    return moved, new_params, w.iota()
