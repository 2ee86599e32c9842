"""Seeded verification suites shared by ``gl4bessel verify`` and the test suite.

Every suite returns a list of :class:`Check` records: a name, the worst
observed residual, the tolerance it is held to and the number of samples.
Random draws come from ``numpy.random.default_rng(seed)`` so reports are
reproducible.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import special as sp
from .hypergeometric import verify_contiguous
from .weyl import WeylElement, sample_tempered


@dataclass(frozen=True)
class Check:
    name: str
    worst: float
    tol: float
    samples: int
    # "upper": worst must be <= tol; "lower": worst must be >= tol
    bound: str = "upper"

    @property
    def passed(self):
        if math.isnan(self.worst):
            return False
        if self.bound == "lower":
            return self.worst >= self.tol
        return self.worst <= self.tol

    def line(self):
        verdict = "PASS" if self.passed else "FAIL"
        op = ">=" if self.bound == "lower" else "<="
        return f"{verdict} {self.name}: worst {self.worst:.3e} (need {op} {self.tol:g}, n={self.samples})"

    def to_dict(self):
        return {"name": self.name, "worst": self.worst, "tol": self.tol,
                "samples": self.samples, "bound": self.bound, "passed": self.passed}


def _rel(a, b):
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale else 0.0


def _disk(rng, center, radius):
    """Uniform point of the disk |z - center| <= radius."""
    r = radius * math.sqrt(rng.uniform())
    theta = rng.uniform(0, 2 * math.pi)
    return complex(center) + r * cmath.exp(1j * theta)


# ---------------------------------------------------------------- gamma


def _circle_integral(func, center, radius=0.25, nodes=64):
    """(1/2 pi i) times the trapezoid rule on a circle; spectrally accurate."""
    total = 0j
    for k in range(nodes):
        z = cmath.exp(2j * math.pi * k / nodes)
        total += func(center + radius * z) * radius * z
    return total / nodes


def gamma_suite(seed=0, samples=200):
    rng = np.random.default_rng(seed)
    worst = dict.fromkeys(
        ("G as R times Gamma", "G vector shift invariance", "G reflection", "R integer shift", "R reflection",
         "R sine product", "R Gamma to Pochhammer"), 0.0)
    for _ in range(samples):
        s = complex(rng.uniform(0.05, 0.95), rng.uniform(-30, 30))
        eta = int(rng.integers(0, 2))
        g = sp.g_eta(eta, s)
        r = sp.r_eta(eta, s)
        rhs = 2 * cmath.exp(-s * math.log(2 * math.pi)) * r * sp.complex_gamma(s)
        worst["G as R times Gamma"] = max(worst["G as R times Gamma"], _rel(g, rhs))

        # four-factor G vector, shifted by a random u; keep every argument in
        # the same strip so no factor overflows
        ell = int(rng.integers(0, 4))
        t = [complex(rng.uniform(-0.2, 0.2), rng.uniform(-3, 3)) for _ in range(4)]
        etas = [int(x) for x in rng.integers(0, 2, size=4)]
        u = complex(rng.uniform(-0.2, 0.2), rng.uniform(-3, 3))
        base = complex(0.5, rng.uniform(-5, 5))
        lhs = sp.g_vec(ell, base, t, etas)
        shifted = sp.g_vec(ell, base + u, [x - u for x in t], etas)
        worst["G vector shift invariance"] = max(worst["G vector shift invariance"], _rel(lhs, shifted))

        refl = g * sp.g_eta(eta, 1 - s)
        worst["G reflection"] = max(worst["G reflection"], abs(refl - (-1) ** eta))

        for n in range(-3, 4):
            a = sp.r_eta(eta, s + n)
            b = sp.i_pow(n) * sp.r_eta(eta + n, s)
            worst["R integer shift"] = max(worst["R integer shift"], _rel(a, b))

        worst["R reflection"] = max(worst["R reflection"], _rel(r, (-1) ** eta * sp.r_eta(eta, -s)))
        prod = r * sp.r_eta(eta, 1 - s)
        worst["R sine product"] = max(worst["R sine product"],
                                      _rel(prod, 0.5 * (-1) ** eta * cmath.sin(math.pi * s)))

        j = int(rng.integers(0, 7))
        a = r * sp.complex_gamma(s + j)
        b = 0.5 * cmath.exp(s * math.log(2 * math.pi)) * g * sp.pochhammer(s, j)
        worst["R Gamma to Pochhammer"] = max(worst["R Gamma to Pochhammer"], _rel(a, b))

    checks = [Check(name, val, 1e-10, samples) for name, val in worst.items()]

    res_worst = 0.0
    for n in range(7):
        eta = n % 2
        got = _circle_integral(lambda z: sp.g_eta(eta, z), -n)
        res_worst = max(res_worst, _rel(got, sp.residue_g(eta, n)))
    checks.append(Check("G residues n<=6 (contour)", res_worst, 1e-8, 7))

    inv_worst = 0.0
    for n in range(-3, 4):
        for eta in (0, 1):
            got = _circle_integral(lambda z: 1 / sp.r_eta(eta, z), n)
            inv_worst = max(inv_worst, abs(got - sp.residue_inv_r(eta, n)))
    checks.append(Check("1/R residues (contour)", inv_worst, 1e-8, 14))

    # Stirling main term within a factor 2 of |Gamma|
    ratio_worst = 0.0
    for _ in range(samples):
        sigma = rng.uniform(0.1, 5)
        t = rng.uniform(-50, 50)
        exact = abs(sp.complex_gamma(complex(sigma, t)))
        ratio = exact / sp.stirling_magnitude(sigma, t)
        ratio_worst = max(ratio_worst, abs(math.log2(ratio)))
    checks.append(Check("Stirling sandwich |log2 ratio|", ratio_worst, 1.0, samples))
    return checks


# ------------------------------------------------------- hypergeometric


def _hyp_draw(rng, relation):
    """Random admissible parameters for one relation."""
    def near(center, radius=2.0):
        return _disk(rng, center, radius)

    n = int(rng.integers(1, 9))
    if relation == "Gauss2F1":
        return dict(a1=near(0.3, 0.5), a2=near(0.3, 0.5), b1=near(3.0, 0.5))
    if relation == "3F2recur1":
        return dict(a1=-n, a2=near(0.5), a3=near(0.5), b1=near(1.5), b2=near(1.5))
    if relation == "3F2recur2":
        return dict(a1=near(0.5), a2=near(0.5), a3=-n, b1=near(1.5), b2=near(1.5))
    if relation == "4F3genrel":
        return dict(a1=-n, a2=near(0.5), a3=near(0.5), a4=near(0.5),
                    b1=near(1.5), b2=near(1.5), b3=near(1.5))
    if relation.startswith("wlRecurRel"):
        a = [near(0.5) for _ in range(4)]
        slot = 0 if relation.endswith("a1") else 3
        a[slot] = -n
        b1, b2 = near(1.5), near(1.5)
        b3 = 1 + sum(a) - b1 - b2
        return dict(a1=a[0], a2=a[1], a3=a[2], a4=a[3], b1=b1, b2=b2, b3=b3)
    if relation == "4F3Denom1":
        p = {k: near(0.3, 0.5) for k in "abcd"}
        p.update(e=near(5.0, 0.5), f=near(5.0, 0.5), n=int(rng.integers(-1, 3)))
        return p
    if relation == "4F3Denom2":
        m = int(rng.integers(1, 5))
        return dict(m=m, n=int(rng.integers(1, 4)), a=near(0.3, 0.5), b=near(0.3, 0.5),
                    c=near(0.3, 0.5), d=near(0.3, 0.5), e=near(0.3, 0.5))
    raise ValueError(relation)


# (label, relation id with termination variant)
HYP_CHECKS = (
    ("Gauss 2F1 at unit argument", "Gauss2F1"),
    ("4F3 with denominator -n shifted by n+1", "4F3Denom1"),
    ("4F3 vanishing for deeper denominator", "4F3Denom2"),
    ("3F2 contiguous, first", "3F2recur1"),
    ("3F2 contiguous, second", "3F2recur2"),
    ("4F3 general contiguous", "4F3genrel"),
    ("Saalschutz 4F3 four-term (a1 terminating)", "wlRecurRel2-a1"),
    ("Saalschutz 4F3 four-term (a4 terminating)", "wlRecurRel2-a4"),
    ("Saalschutz 4F3 three-term (a1 terminating)", "wlRecurRel3-a1"),
    ("Saalschutz 4F3 three-term (a4 terminating)", "wlRecurRel3-a4"),
)


def hyp_suite(seed=0, samples=100):
    rng = np.random.default_rng(seed)
    checks = []
    for label, draw_key in HYP_CHECKS:
        relation = draw_key.rsplit("-a", 1)[0] if draw_key.startswith("wl") else draw_key
        worst = 0.0
        for _ in range(samples):
            worst = max(worst, verify_contiguous(relation, _hyp_draw(rng, draw_key)))
        checks.append(Check(label, worst, 1e-9, samples))
    return checks


# --------------------------------------------------------------- series


def form_table_1111(mu, order=4):
    """Pairwise worst relative gap between the six w1111 closed forms."""
    from .frobenius import FORMS, star_coefficient
    w = WeylElement.from_name("1111")
    lattice = list(itertools.product(range(order + 1), repeat=3))
    values = {f: [star_coefficient(w, mu, m, f) for m in lattice] for f in FORMS["1111"]}
    table = {}
    for f, g in itertools.combinations(FORMS["1111"], 2):
        table[(f, g)] = max(_rel(x, y) for x, y in zip(values[f], values[g]))
    return table


def series_suite(seed=0, samples=50):
    from .frobenius import (FORMS, RECURRENCES, recurrence_oracle_wl,
                            recurrence_residual, star_coefficient)
    rng = np.random.default_rng(seed)
    w211 = WeylElement.from_name("211")
    w1111 = WeylElement.from_name("1111")
    gap211 = 0.0
    table = dict.fromkeys(itertools.combinations(FORMS["1111"], 2), 0.0)
    oracle_gap = 0.0
    for _ in range(samples):
        mu = sample_tempered(rng).mu
        for m in itertools.product(range(7), repeat=2):
            vals = [star_coefficient(w211, mu, m, f) for f in FORMS["211"]]
            gap211 = max(gap211, max(_rel(vals[0], v) for v in vals[1:]))
        for key, val in form_table_1111(mu).items():
            table[key] = max(table[key], val)
        oracle = recurrence_oracle_wl(mu, 4)
        for m in itertools.product(range(5), repeat=3):
            for f in FORMS["1111"]:
                oracle_gap = max(oracle_gap, _rel(oracle[m], star_coefficient(w1111, mu, m, f)))
    checks = [Check("w211 forms a=b=c on [0,6]^2", gap211, 1e-8, samples)]
    checks += [Check(f"w1111 forms {f}={g} on [0,4]^3", v, 1e-8, samples)
               for (f, g), v in table.items()]
    checks.append(Check("w1111 recurrence oracle vs all forms", oracle_gap, 1e-8, samples))

    lattices = {"31": [(m,) for m in range(1, 9)],
                "22": [(m,) for m in range(1, 9)],
                "121": list(itertools.product(range(7), repeat=2)),
                "211": list(itertools.product(range(7), repeat=2)),
                "1111": list(itertools.product(range(5), repeat=3))}
    draws = max(1, samples // 5)
    for name, families in RECURRENCES.items():
        w = WeylElement.from_name(name)
        for relation in families:
            worst = 0.0
            for _ in range(draws):
                mu = sample_tempered(rng).mu
                for m in lattices[name]:
                    worst = max(worst, recurrence_residual(w, mu, m, relation))
            checks.append(Check(f"recurrence {relation}", worst, 1e-9, draws))
    return checks


# -------------------------------------------------------------- diffops


DIFFOP_ORDERS = {"31": 6, "22": 6, "121": 6, "211": 6, "1111": 4}


def diffops_suite(seed=0, samples=20):
    from .diffops import lattice_residual, operators_for
    from .frobenius import FrobeniusSeries
    rng = np.random.default_rng(seed)
    worst: dict = {}
    for name, order in DIFFOP_ORDERS.items():
        w = WeylElement.from_name(name)
        ops = operators_for(w)
        for _ in range(samples):
            mu = sample_tempered(rng).mu
            series = FrobeniusSeries.build(w, mu, order)
            for op in ops:
                worst[op.label] = max(worst.get(op.label, 0.0), lattice_residual(op, series))
    checks = [Check(f"operator {label} annihilates J", val, 1e-9, samples)
              for label, val in worst.items()]
    checks.append(Check("perturbed J31 is not annihilated",
                        perturbation_control(rng), 1e-5, 1, bound="lower"))
    return checks


def perturbation_control(rng, delta=1e-3, order=8):
    """Residual after scaling one J31 coefficient by (1 + delta)."""
    from dataclasses import replace
    from .diffops import lattice_residual, operators_for
    from .frobenius import FrobeniusSeries
    w = WeylElement.from_name("31")
    series = FrobeniusSeries.build(w, sample_tempered(rng).mu, order)
    coeffs = series.coeffs.copy()
    coeffs[3] *= 1 + delta
    bumped = replace(series, coeffs=coeffs)
    return max(lattice_residual(op, bumped) for op in operators_for(w))


# --------------------------------------------------------- decompositions


def decomp_suite(seed=0, samples=1000):
    from .decompositions import sweep
    from .weyl import KERNEL_NAMES
    checks = []
    for name in KERNEL_NAMES:
        iw, br = sweep(WeylElement.from_name(name), samples=samples, seed=seed)
        checks.append(Check(f"w{name} Iwasawa", iw, 1e-11, samples))
        checks.append(Check(f"w{name} Bruhat", br, 1e-10, samples))
    return checks


SUITES = {
    "gamma": gamma_suite,
    "hyp": hyp_suite,
    "series": series_suite,
    "diffops": diffops_suite,
    "decomp": decomp_suite,
}

DEFAULT_SAMPLES = {"gamma": 200, "hyp": 100, "series": 50, "diffops": 20, "decomp": 1000}


def run_suite(name, seed=0, samples=None):
    if samples is None:
        samples = DEFAULT_SAMPLES[name]
    return SUITES[name](seed=seed, samples=samples)


# ------------------------------------------------------------ interchange


# Case families as conjunctions over log C_j; a coordinate whose C_j is
# "small" has log C_j = 0, since each C_j >= 1.
INTERCHANGE_TARGETS = {
    "121": [],
    "41": [],
    "211": ["logC1 = 0 && logC2 = 0 && logC5 = 0 && logC4 = logC3 && 0 < logC3"],
    "22": ["logC2 = logC4 && logC4 = logC3 && logC3 = logC5 && 0 < logC2",
           "logC4 = 0 && logC3 = 0 && logC2 = logC5 && 0 < logC2"],
    "1111": ["logC1 = 0 && logC2 = 0 && logC5 = 0 && logC6 = 0 && logC4 = logC3 && 0 < logC3",
             "logC2 = 0 && logC4 = 0 && logC3 = 0 && logC6 = 0 && logC1 = logC5 && 0 < logC1"],
}


def match_families(report, targets):
    """(matched target indices, unmatched targets, unmatched families)."""
    from .interchange import case_families, region_from_text, regions_equivalent
    n = report.phase.size
    regions = [region for region, _ in case_families(report)]
    wanted = [region_from_text(t, report.log_names) for t in targets]
    free = list(range(len(regions)))
    matched, missing = [], []
    for k, target in enumerate(wanted):
        hit = next((i for i in free if regions_equivalent(regions[i], target, n)), None)
        if hit is None:
            missing.append(targets[k])
        else:
            free.remove(hit)
            matched.append(k)
    return matched, missing, [regions[i] for i in free]


def interchange_checks(names=("121", "41", "211", "22", "1111"), workers=1):
    """One check per (Weyl element, target family) plus a family-count check."""
    from .interchange import builtin_phase, enumerate_cases
    checks = []
    for name in names:
        report = enumerate_cases(builtin_phase(name), workers=workers)
        targets = INTERCHANGE_TARGETS[name]
        matched, missing, extra = match_families(report, targets)
        for k, text in enumerate(targets):
            checks.append(Check(f"w{name} family {text}", 0.0 if k in matched else 1.0, 0.0, 1))
        checks.append(Check(f"w{name} unmatched families (want 0 beyond {len(targets)})",
                            float(len(extra)), 0.0, 1))
    return checks


# ---------------------------------------------------------- Mellin-Barnes


def mb_agreement(name, free, params, order=20, cfg=None):
    """(relative gap, MB result, series value) at one point."""
    import warnings
    from .errors import TruncationWarning
    from .mellin_barnes import mb_eval, kernel_K
    from .weyl import YPoint
    w = WeylElement.from_name(name)
    y = YPoint.on(w, free)
    result = mb_eval(w, y, params, cfg)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        series = kernel_K(w, y, params, order=order)
    return abs(result.value - series) / abs(series), result, series


def _delta_draw(rng):
    return tuple(int(d) for d in rng.integers(0, 2, size=4))


def mb_checks(seed=0, draws=10, draws_121=4, include_121=True):
    """Cross-representation checks; the 2 x MB lines are informational."""
    from .mellin_barnes import ContourConfig
    rng = np.random.default_rng(seed)
    checks = []
    frees = {"31": [(-0.05,), (0.05,), (-0.02,), (0.02,)],
             "22": [(-0.05,), (0.05,), (-0.02,), (0.02,)]}
    for name, points in frees.items():
        worst = worst_doubled = 0.0
        for k in range(draws):
            params = sample_tempered(rng, delta=_delta_draw(rng))
            gap, result, series = mb_agreement(name, points[k % len(points)], params)
            worst = max(worst, gap)
            worst_doubled = max(worst_doubled, abs(2 * result.value - series) / abs(series))
        checks.append(Check(f"w{name} MB vs series", worst, 1e-6, draws))
        checks.append(Check(f"w{name} 2 x MB vs series (informational)", worst_doubled, 1e-6, draws))
    if include_121:
        w = WeylElement.from_name("121")
        points = [(0.05, -0.05), (-0.02, 0.05), (0.02, 0.02), (-0.05, -0.02)]
        worst = 0.0
        for k in range(draws_121):
            params = sample_tempered(rng, delta=_delta_draw(rng))
            cfg = ContourConfig.default(w, rtol=1e-5, t_max=25.0)
            gap, _, _ = mb_agreement("121", points[k % len(points)], params, cfg=cfg)
            worst = max(worst, gap)
        checks.append(Check("w121 MB vs series", worst, 1e-3, draws_121))
    return checks


# ------------------------------------------------------------ iota duality


def iota_gap(name, free, params, order=10, mode="Y"):
    import warnings
    from .errors import TruncationWarning
    from .mellin_barnes import kernel_K
    from .weyl import YPoint, iota_transform
    w = WeylElement.from_name(name)
    y = YPoint.on(w, free)
    y2, params2, w2 = iota_transform(y, params, w, mode)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        lhs = kernel_K(w, y, params, order=order)
        rhs = kernel_K(w2, y2, params2, order=order)
    return abs(lhs - rhs) / abs(lhs)


def iota_checks(seed=0, draws=6, order=10, amplitude=0.03):
    rng = np.random.default_rng(seed)
    checks = []
    for name, dim in (("22", 1), ("121", 2), ("1111", 3)):
        worst = 0.0
        for _ in range(draws):
            params = sample_tempered(rng, delta=_delta_draw(rng))
            free = tuple(amplitude * rng.choice((-1, 1)) * rng.uniform(0.5, 1)
                         for _ in range(dim))
            worst = max(worst, iota_gap(name, free, params, order))
        checks.append(Check(f"w{name} kernel invariant under iota", worst, 1e-8, draws))
    return checks
