"""Mellin-Barnes integrals for K_w(y, mu, delta) and the Frobenius-series kernel.

Contours: each variable runs up a vertical line.  For the one- and
two-variable integrals (w31, w22, w121) every pole has |Im s| below the bend
height T0, so beyond +-T0 the line is moved left to ``tail_abscissa``; that
turns the |t|^(4 sigma - 2)-type polynomial decay into something fast enough
for plain Gauss-Legendre panels.  The three- and four-variable integrals have
poles in differences s_i - s_j, so bending is unsafe there and they stay on
straight lines truncated at ``t_max``.
"""

from __future__ import annotations

import csv
import itertools
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import BudgetExceeded, ContourError, DomainError
from .frobenius import j_series
from .special import log_g_eta_array
from .weyl import (SpectralParams, WeylElement, YPoint, c_w, coset_reps,
                   free_coordinates, weyl_action)

GL_NODES = 16
DEFAULT_BUDGET = 10_000_000
EPSILON_1111 = 1 / 20

BASE_ABSCISSAE = {
    "31": (1 / 5,),
    "22": (1 / 4,),
    "121": (1 / 7, 1 / 7),
    # the s2 line sits at 1/14, not 1/7: with Re s1 = Re s2 the line would run
    # through the poles of G(s1 - s2 - mu4)
    "211": (1 / 7, 1 / 14, 1 / 7),
    "1111": (2 * EPSILON_1111,) * 3 + (EPSILON_1111,),
}
BENDABLE = ("31", "22", "121")


@dataclass
class ContourConfig:
    abscissae: tuple
    T0: float | None = None
    tail_abscissa: float = -2.5
    panels_per_decade: int = 8
    max_panel: float = 1.0
    t_max: float | None = None
    rtol: float = 1e-10
    budget: int = DEFAULT_BUDGET
    bend: bool = True
    nodes: int = GL_NODES

    @classmethod
    def default(cls, w: WeylElement, **kw):
        if w.name not in BASE_ABSCISSAE:
            raise DomainError(f"no Mellin-Barnes integral for {w}")
        kw.setdefault("bend", w.name in BENDABLE)
        if w.name not in BENDABLE:
            kw.setdefault("t_max", 10.0 if w.name == "211" else 3.0)
            kw.setdefault("nodes", 8 if w.name == "211" else 6)
            kw.setdefault("rtol", 1e-4)
        return cls(BASE_ABSCISSAE[w.name], **kw)

    def to_json(self):
        return json.dumps(asdict(self))

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        d["abscissae"] = tuple(d["abscissae"])
        return cls(**d)


@dataclass
class MBResult:
    value: complex
    error: float
    evaluations: int
    trace: list = field(default_factory=list)

    def __iter__(self):
        yield self.value
        yield self.error

    def dump_trace_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["level", "nodes", "re", "im", "error"])
            for row in self.trace:
                writer.writerow(row)


# ------------------------------------------------------------ integrands


def _log_chi(a, ell_unused, s, y):
    # |y|^(a - s); the sign part is applied separately per parity
    return (a - s) * math.log(abs(y))


def _lg(eta, s):
    return log_g_eta_array(eta, s)


def _sgn(y, ell):
    return -1.0 if (y < 0 and ell % 2) else 1.0


def _integrand31(s, y, params):
    mu, delta = params.mu, params.delta
    big = params.total_delta
    y3 = -y.y[2]
    out = np.zeros(np.broadcast(*s).shape, dtype=complex)
    (s1,) = s
    for ell in (0, 1):
        lg = _log_chi(1.5, ell, s1, y3)
        for mj, dj in zip(mu, delta):
            lg = lg + _lg(ell + big - dj, s1 - mj)
        out += _sgn(y3, ell) * np.exp(lg)
    return (-1) ** big / 4 * out


def _integrand22(s, y, params):
    mu, delta = params.mu, params.delta
    big = params.total_delta
    y2 = y.y[1]
    (s1,) = s
    out = np.zeros(s1.shape, dtype=complex)
    base = -_lg(big, 2 * s1)
    for ell in (0, 1):
        lg = base + _log_chi(2.0, ell, s1, y2)
        for i, j in itertools.combinations(range(4), 2):
            lg = lg + _lg(ell + delta[i] + delta[j], s1 + mu[i] + mu[j])
        out += _sgn(y2, ell) * np.exp(lg)
    return out / 4


def _integrand121(s, y, params):
    mu, delta = params.mu, params.delta
    big = params.total_delta
    s1, s2 = s
    y1, y3 = -y.y[0], y.y[2]
    shape = np.broadcast(s1, s2).shape
    out = np.zeros(shape, dtype=complex)
    parts1 = {}
    parts2 = {}
    for ell in (0, 1):
        a = _log_chi(1.5, ell, s1, y1)
        b = _log_chi(1.5, ell, s2, y3)
        for mj, dj in zip(mu, delta):
            a = a + _lg(ell + dj, s1 + mj)
            b = b + _lg(ell + big - dj, s2 - mj)
        parts1[ell], parts2[ell] = a, b
    for l1, l2 in itertools.product((0, 1), repeat=2):
        lg = parts1[l1] + parts2[l2] - _lg(l1 + l2 + big, s1 + s2)
        out += _sgn(y1, l1) * _sgn(y3, l2) * np.exp(lg)
    return (-1) ** big / 4 * out


def _integrand211(s, y, params):
    mu, delta = params.mu, params.delta
    big = params.total_delta
    s1, s2, s3 = s
    y2, y3 = y.y[1], y.y[2]
    pairs = ((0, 1), (0, 2), (1, 2))
    shape = np.broadcast(s1, s2, s3).shape
    out = np.zeros(shape, dtype=complex)
    for l1, l2, l3 in itertools.product((0, 1), repeat=3):
        lg = _log_chi(2.0, l1, s1, y2) + _log_chi(1.5, l3, s3, y3)
        for i, j in pairs:
            lg = lg + _lg(l1 + big - delta[i] - delta[j], s1 - mu[i] - mu[j])
        lg = lg + _lg(l3 + big - delta[3], s3 - mu[3])
        lg = lg + _lg(l1 + l2 + delta[3], s1 - s2 - mu[3])
        lg = lg + _lg(l2 + l3, s3 - s2)
        for j in range(3):
            lg = lg + _lg(l2 + big - delta[j], s2 - mu[j])
        lg = lg - _lg(l1 + l2 + big - delta[3], s1 + s2 + mu[3])
        out += _sgn(y2, l1) * _sgn(y3, l3) * np.exp(lg)
    return (-1) ** big / 8 * out


def _integrand1111(s, y, params):
    mu, delta = params.mu, params.delta
    big = params.total_delta
    s1, s2, s3, s4 = s
    y1, y2, y3 = (-v for v in y.y)
    d12 = delta[0] + delta[1]
    m12 = mu[0] + mu[1]
    shape = np.broadcast(s1, s2, s3, s4).shape
    out = np.zeros(shape, dtype=complex)
    for l1, l2, l3, l4 in itertools.product((0, 1), repeat=4):
        lg = (_log_chi(1.5, l1, s1, y1) + _log_chi(2.0, l2, s2, y2)
              + _log_chi(1.5, l3, s3, y3))
        for j in (0, 1):
            lg = lg + _lg(l1 + delta[j], s1 + mu[j])
            lg = lg + _lg(l3 + big - delta[j], s3 - mu[j])
            lg = lg + _lg(l4 + delta[j + 2], s4 + mu[j + 2])
            lg = lg + _lg(l2 + l4 + delta[j], s2 - s4 + mu[j])
        lg = lg + _lg(l2 + d12, s2 + m12)
        lg = lg + _lg(l2 + delta[2] + delta[3], s2 + mu[2] + mu[3])
        lg = lg + _lg(l1 + l4, s1 - s4)
        lg = lg + _lg(l3 + l4 + d12, s3 - s4 + m12)
        lg = lg - _lg(l1 + l2 + l4 + d12, s1 + s2 - s4 + m12)
        lg = lg - _lg(l2 + l3 + l4 + big, s2 + s3 - s4)
        out += _sgn(y1, l1) * _sgn(y2, l2) * _sgn(y3, l3) * np.exp(lg)
    return (-1) ** big / 16 * out


INTEGRANDS = {"31": _integrand31, "22": _integrand22, "121": _integrand121,
              "211": _integrand211, "1111": _integrand1111}


def pole_offsets(w: WeylElement, params: SpectralParams):
    """Per variable, the shifts p such that poles sit at p - n, n >= 0.

    Only the uncoupled factors are listed; coupled ones are handled by the
    straight-line contours.
    """
    mu = params.mu
    if w.name == "31":
        return [list(mu)]
    if w.name == "22":
        return [[-(mu[i] + mu[j]) for i, j in itertools.combinations(range(4), 2)]]
    if w.name == "121":
        return [[-m for m in mu], list(mu)]
    if w.name == "211":
        return [[mu[i] + mu[j] for i, j in ((0, 1), (0, 2), (1, 2))],
                list(mu[:3]), [mu[3]]]
    if w.name == "1111":
        return [[-mu[0], -mu[1]], [-mu[0] - mu[1], -mu[2] - mu[3]],
                [mu[0], mu[1]], [-mu[2], -mu[3]]]
    raise DomainError(f"no Mellin-Barnes integral for {w}")


# ------------------------------------------------------------ contours


def _panels_for(sigma0, cfg: ContourConfig, T0, t_max):
    """Oriented straight panels (z0, z1) making up one bent contour."""
    width = cfg.max_panel
    panels = []

    def segment(z0, z1, max_len):
        n = max(1, math.ceil(abs(z1 - z0) / max_len))
        pts = [z0 + (z1 - z0) * k / n for k in range(n + 1)]
        panels.extend(zip(pts[:-1], pts[1:]))

    def tail(sigma, t0, t1):
        # upward panels on Re s = sigma from t0 to t1 with geometric growth
        out, t = [], t0
        ratio = 10 ** (1 / cfg.panels_per_decade)
        while t < t1 - 1e-12:
            nxt = min(t1, max(t * ratio, t + width), t + 4 * width)
            out.append((complex(sigma, t), complex(sigma, nxt)))
            t = nxt
        return out

    def lower(upper):
        # mirror image, traversed upwards
        return [(b.conjugate(), a.conjugate()) for a, b in reversed(upper)]

    if cfg.bend:
        sl = cfg.tail_abscissa
        top = tail(sl, T0, t_max)
        panels.extend(lower(top))
        segment(complex(sl, -T0), complex(sigma0, -T0), width)
        segment(complex(sigma0, -T0), complex(sigma0, T0), width)
        segment(complex(sigma0, T0), complex(sl, T0), width)
        panels.extend(top)
    else:
        mid = min(T0, t_max)
        top = tail(sigma0, mid, t_max)
        panels.extend(lower(top))
        segment(complex(sigma0, -mid), complex(sigma0, mid), width)
        panels.extend(top)
    return panels


def _nodes(panels, n=GL_NODES, split=1):
    """Nodes, weights (for ds / 2 pi i) and a mask of the outermost tail panels."""
    x, wts = np.polynomial.legendre.leggauss(n)
    zs, ws, outer = [], [], []
    last = len(panels) - 1
    for p, (z0, z1) in enumerate(panels):
        for k in range(split):
            a = z0 + (z1 - z0) * k / split
            b = z0 + (z1 - z0) * (k + 1) / split
            half = (b - a) / 2
            zs.append(a + half * (x + 1))
            ws.append(wts * half)
            outer.append(np.full(n, p in (0, last)))
    return np.concatenate(zs), np.concatenate(ws) / (2j * math.pi), np.concatenate(outer)


def check_contour(w: WeylElement, params: SpectralParams, cfg: ContourConfig):
    """Validate the contour against the pole lattice; returns the bend height."""
    offsets = pole_offsets(w, params)
    if len(cfg.abscissae) != len(offsets):
        raise ContourError(f"{w} needs {len(offsets)} abscissae")
    max_im = 0.0
    for sigma, offs in zip(cfg.abscissae, offsets):
        for p in offs:
            if sigma <= p.real + 1e-9:
                raise ContourError(f"abscissa {sigma} is not right of the pole at {p}")
            max_im = max(max_im, abs(p.imag))
            if cfg.bend:
                frac = (cfg.tail_abscissa - p.real) % 1.0
                if min(frac, 1 - frac) < 1e-6:
                    raise ContourError("tail abscissa coincides with a pole column")
    T0 = cfg.T0 if cfg.T0 is not None else max_im + 2.0
    if cfg.bend and T0 <= max_im + 1.0:
        raise ContourError(f"T0={T0} must exceed max |Im pole| + 1 = {max_im + 1}")
    return T0


# ------------------------------------------------------------ quadrature


def _tensor_sum(func, nodes, weights, outer, y, params, budget_left, chunk=400_000):
    """Sum of func over the tensor grid.

    Returns (value, evaluations, tail mass), the last being sum |w f| over grid
    points lying on an outermost tail panel in some coordinate.
    """
    dim = len(nodes)
    sizes = [len(z) for z in nodes]
    total_pts = int(np.prod(sizes))
    if total_pts > budget_left:
        raise BudgetExceeded(f"grid of {total_pts} points exceeds the budget")
    if dim == 1:
        terms = weights[0] * func((nodes[0],), y, params)
        return complex(np.sum(terms)), total_pts, float(np.sum(np.abs(terms[outer[0]])))
    inner = int(np.prod(sizes[1:]))
    step = max(1, chunk // inner)
    grids = np.meshgrid(*nodes[1:], indexing="ij")
    wgrid = weights[1]
    for wv in weights[2:]:
        wgrid = np.multiply.outer(wgrid, wv)
    ogrid = np.zeros(wgrid.shape, dtype=bool)
    for axis, mask in enumerate(outer[1:]):
        shape = [1] * (dim - 1)
        shape[axis] = -1
        ogrid = ogrid | mask.reshape(shape)
    total, tail = 0j, 0.0
    for start in range(0, sizes[0], step):
        z0 = nodes[0][start:start + step]
        w0 = weights[0][start:start + step]
        o0 = outer[0][start:start + step]
        shape = (len(z0),) + (1,) * (dim - 1)
        args = (z0.reshape(shape),) + tuple(g[None, ...] for g in grids)
        terms = func(args, y, params) * wgrid[None, ...] * w0.reshape(shape)
        total += np.sum(terms)
        tail += float(np.sum(np.abs(terms)[o0.reshape(shape) | ogrid[None, ...]]))
    return complex(total), total_pts, tail


def mb_eval(w: WeylElement, y: YPoint, params: SpectralParams,
            cfg: ContourConfig | None = None) -> MBResult:
    """K_w(y, mu, delta) by its Mellin-Barnes integral.

    The error estimate is |I(h) - I(h/2)| for the panel widths of the last
    two levels plus a truncation term for the tails cut at ``t_max``; panels
    are halved until the first part falls below ``cfg.rtol`` |I|.
    """
    if w.name == "4":
        return MBResult(1 + 0j, 0.0, 0)
    cfg = cfg or ContourConfig.default(w)
    if not y.in_Y(w):
        raise DomainError(f"{y} is not in Y_{w.name}")
    T0 = check_contour(w, params, cfg)
    func = INTEGRANDS[w.name]
    dim = len(cfg.abscissae)
    t_max = cfg.t_max
    if t_max is None:
        t_max = max(3 * T0, 30.0)
    panel_sets = [_panels_for(sig, cfg, T0, t_max) for sig in cfg.abscissae]
    # remainder past t_max ~ (outer panel mass) * t_max / (outer panel length)
    reach = max(t_max / abs(ps[-1][1] - ps[-1][0]) for ps in panel_sets)
    used = 0
    trace = []
    prev = None
    split = 1
    while True:
        nodes, weights, outer = [], [], []
        for panels in panel_sets:
            z, wt, o = _nodes(panels, n=cfg.nodes, split=split)
            nodes.append(z)
            weights.append(wt)
            outer.append(o)
        try:
            value, n, tail = _tensor_sum(func, nodes, weights, outer, y, params,
                                         cfg.budget - used)
        except BudgetExceeded as exc:
            partial = MBResult(prev if prev is not None else 0j, math.inf, used, trace)
            raise BudgetExceeded(str(exc), partial) from None
        used += n
        err = abs(value - prev) if prev is not None else math.inf
        truncation = tail * reach
        trace.append((split, n, value.real, value.imag, err + truncation))
        if prev is not None and err <= cfg.rtol * abs(value):
            return MBResult(value, err + truncation, used, trace)
        prev = value
        split *= 2
        if split > 64:
            # out of refinement levels; report what we have
            return MBResult(value, err + truncation, used, trace)


# ------------------------------------------------------------ series kernel


def kernel_K(w: WeylElement, y: YPoint, params: SpectralParams, order=12,
             character="sign", max_free=0.5):
    """K_w as the coset sum of C_w(mu^{w'}, delta^{w'}) J_w(y, mu^{w'}, delta^{w'})."""
    if w.name == "4":
        return 1 + 0j
    total = 0j
    for rep in coset_reps(w):
        moved = weyl_action(params, rep)
        j, _ = j_series(w, y, moved, order, character=character, max_free=max_free)
        total += c_w(moved, w) * j
    return total


def free_values(w: WeylElement, y: YPoint):
    return tuple(y.y[i] for i in free_coordinates(w))
