"""Case enumeration for the interchange-of-integrals argument.

A phase is a list of terms, each a product of one factor per coordinate x_j
drawn from seven shapes (``FORMS``). Assuming x_j ~ C_j, every term and every
C_j-scaled partial derivative has a size C^v for an integer vector v, so the
BKY dichotomy turns into a Boolean combination of homogeneous linear
constraints on log C. Those are reduced exactly: disjunctive normal form,
per-conjunct feasibility by integer Fourier-Motzkin elimination, and removal
of implied atoms and subsumed conjuncts.
"""

from __future__ import annotations

import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .errors import DomainError, SizeBlowup

FORMS = ("x/(1+x^2)", "1/(1+x^2)", "sqrt(1+x^2)", "1/sqrt(1+x^2)",
         "x/sqrt(1+x^2)", "x", "1")
ABSENT = 7
LOG_COEFS = (-1, -2, 1, -1, 0, 1, 0)
DERIVATIVE_LOG_COEFS = tuple(c + 1 for c in (-2, -3, 0, -2, -3, 0, 0))
SMALL_FORMS = frozenset({1, 5, 6})
SMALL_DERIVATIVE_FORMS = frozenset({1, 2, 3, 4})
MAX_CONJUNCTS = 10 ** 6


# ---------------------------------------------------------------- phases


@dataclass(frozen=True)
class PhaseTerm:
    """One form index (1..7) per variable; 7 means the variable is absent."""

    forms: tuple

    def __post_init__(self):
        if any(f not in range(1, 8) for f in self.forms):
            raise DomainError(f"form indices must lie in 1..7, got {self.forms}")


@dataclass(frozen=True)
class Phase:
    name: str
    variables: tuple
    terms: tuple
    ystar_exponents: tuple

    def __post_init__(self):
        n = len(self.variables)
        for t in self.terms:
            if len(t.forms) != n:
                raise DomainError("phase term length does not match the variables")
        for v in self.ystar_exponents:
            if len(v) != n or any(e not in (-2, -1, 0, 1) for e in v):
                raise DomainError(f"bad y* exponent vector {v}")

    @property
    def size(self):
        return len(self.variables)

    @classmethod
    def from_dict(cls, data):
        return cls(data.get("name", "custom"), tuple(data["variables"]),
                   tuple(PhaseTerm(tuple(t)) for t in data["terms"]),
                   tuple(tuple(v) for v in data["ystar"]))

    def to_dict(self):
        return {"name": self.name, "variables": list(self.variables),
                "terms": [list(t.forms) for t in self.terms],
                "ystar": [list(v) for v in self.ystar_exponents]}

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def index_frequencies(self):
        return [sum(1 for t in self.terms if t.forms[i] != ABSENT) for i in range(self.size)]


def _phase(name, variables, terms, ystar):
    return Phase(name, tuple(variables), tuple(PhaseTerm(tuple(t)) for t in terms),
                 tuple(tuple(v) for v in ystar))


# Terms after the y* factors are multiplied in; the single term each case
# moves into the weight function is left out.
BUILTIN_PHASES = {
    "22": _phase("22", ("x2", "x3", "x4", "x5"), [
        (7, 6, 7, 7),   # t2 x3
        (7, 5, 7, 6),   # x3 x5 / xi3
        (6, 5, 7, 7),   # x2 x3 / xi3
        (5, 4, 6, 3),   # y1* x2 x4 / xi4
        (3, 4, 6, 5),   # y3* x4 x5 / xi4
    ], [(-1, -1, 1, 1), (-1, 0, -2, -1), (1, -1, 1, -1)]),
    "121": _phase("121", ("x1", "x2", "x4", "x5", "x6"), [
        (6, 7, 7, 7, 7),   # t1 x1
        (7, 5, 6, 7, 7),   # t3 x2 x4 / xi2
        (7, 4, 3, 7, 6),   # t3 xi4 x6 / xi2
        (5, 6, 7, 7, 7),   # x1 x2 / xi1
        (3, 7, 4, 1, 4),   # y1* x5
        (4, 3, 7, 6, 5),   # y2* x5 x6 / xi5
        (4, 2, 5, 7, 6),   # y3* x6 x4 / xi6
    ], [(1, 0, -1, -2, -1), (-1, 1, 0, 1, -1), (-1, -2, -1, 0, 1)]),
    "211": _phase("211", ("x1", "x2", "x3", "x4", "x5"), [
        (6, 7, 7, 7, 7),   # t1 x1
        (5, 6, 7, 7, 7),   # t2 x1 x2 / xi1
        (4, 3, 6, 7, 7),   # t2 xi2 x3 / xi1
        (7, 5, 7, 6, 7),   # x2 x4 / xi2
        (2, 5, 6, 7, 7),   # y3 x2 x3 / (xi1^2 xi2)
        (7, 4, 5, 3, 6),   # y1* x3 x5 / xi5
        (3, 7, 4, 4, 1),   # y2* x5
        (2, 4, 3, 5, 6),   # y3* x5 x4 / xi5
    ], [(0, -1, -1, 1, 1), (1, 0, -1, -1, -2), (-2, -1, 1, -1, 1)]),
    "1111": _phase("1111", ("x1", "x2", "x3", "x4", "x5", "x6"), [
        (6, 7, 7, 7, 7, 7),   # t1 x1
        (5, 6, 7, 7, 7, 7),   # t2 x1 x2 / xi1
        (4, 3, 6, 7, 7, 7),   # t2 xi2 x3 / xi1
        (7, 5, 7, 6, 7, 7),   # t3 x2 x4 / xi2
        (7, 4, 5, 3, 6, 7),   # t3 xi4 x3 x5 / (xi2 xi3)
        (7, 4, 4, 3, 3, 6),   # t3 xi4 xi5 x6 / (xi2 xi3)
        (7, 3, 3, 4, 4, 1),   # y1* x6
        (3, 4, 2, 7, 5, 6),   # y2* x6 x5 / xi6
        (2, 4, 3, 5, 6, 7),   # y3* x5 x4 / xi5
        (3, 4, 1, 7, 7, 7),   # y2 xi1 x3 / (xi2 xi3^2)
        (2, 5, 6, 7, 7, 7),   # y3 x2 x3 / (xi1^2 xi2)
    ], [(0, 1, 1, -1, -1, -2), (1, -1, -2, 0, -1, 1), (-2, -1, 1, -1, 1, 0)]),
    # w_{n,1} at n = 4: coordinates x_i at position (1, i+1)
    "41": _phase("41", ("x1", "x2", "x3", "x4"), [
        (6, 7, 7, 7),   # t1 x1
        (5, 6, 7, 7),   # y1 x1 x2 / xi1
        (7, 5, 6, 7),   # y2 x2 x3 / xi2
        (7, 7, 5, 6),   # y3 x3 x4 / xi3
    ], [(-1, 1, 0, 0), (0, -1, 1, 0), (0, 0, -1, 1), (0, -1, -1, -2)]),
}


def builtin_phase(name):
    try:
        return BUILTIN_PHASES[name]
    except KeyError:
        raise DomainError(f"no built-in phase for w{name}") from None


# ------------------------------------------------------------------ atoms


LE, LT, EQ = "<=", "<", "=="


@dataclass(frozen=True, order=True)
class Atom:
    """coeffs . logC  rel  0, integer coefficients in lowest terms."""

    coeffs: tuple
    rel: str

    @classmethod
    def make(cls, coeffs, rel):
        coeffs = tuple(int(c) for c in coeffs)
        g = 0
        for c in coeffs:
            g = math.gcd(g, abs(c))
        if g > 1:
            coeffs = tuple(c // g for c in coeffs)
        if rel == EQ:
            first = next((c for c in coeffs if c), 0)
            if first < 0:
                coeffs = tuple(-c for c in coeffs)
        return cls(coeffs, rel)

    @property
    def is_constant(self):
        return not any(self.coeffs)

    def truth(self):
        """Truth value of a constant atom (0 rel 0)."""
        return self.rel != LT

    def negations(self):
        """Atoms whose disjunction is the negation of this one."""
        neg = tuple(-c for c in self.coeffs)
        if self.rel == LE:
            return [Atom.make(neg, LT)]
        if self.rel == LT:
            return [Atom.make(neg, LE)]
        return [Atom.make(self.coeffs, LT), Atom.make(neg, LT)]

    def format(self, names):
        pos = [(c, n) for c, n in zip(self.coeffs, names) if c > 0]
        neg = [(-c, n) for c, n in zip(self.coeffs, names) if c < 0]

        def side(parts):
            if not parts:
                return "0"
            return " + ".join(n if c == 1 else f"{c}*{n}" for c, n in parts)

        rel = {"<=": "<=", "<": "<", "==": "="}[self.rel]
        if not neg and self.rel != EQ:
            # a <= 0 reads better as 0 >= a
            return f"{side(pos)} {rel} 0"
        return f"{side(pos)} {rel} {side(neg)}"


def le(a, b):
    return Atom.make([x - y for x, y in zip(a, b)], LE)


def lt(a, b):
    return Atom.make([x - y for x, y in zip(a, b)], LT)


def eq(a, b):
    return Atom.make([x - y for x, y in zip(a, b)], EQ)


# Boolean trees: ("and", [...]), ("or", [...]), Atom, True, False.


def conj(*items):
    return ("and", list(items))


def disj(*items):
    return ("or", list(items))


# ----------------------------------------------------------- feasibility


def _combine(p, n, k):
    """Eliminate variable k from p (coef > 0) and n (coef < 0)."""
    a, b = p.coeffs[k], -n.coeffs[k]
    coeffs = [b * x + a * y for x, y in zip(p.coeffs, n.coeffs)]
    rel = LT if LT in (p.rel, n.rel) else LE
    return Atom.make(coeffs, rel)


def _prune(atoms):
    """Drop duplicates and non-strict atoms shadowed by their strict twin."""
    strict = {a.coeffs for a in atoms if a.rel == LT}
    out = set()
    for a in atoms:
        if a.rel == LE and a.coeffs in strict:
            continue
        out.add(a)
    return out


def feasible(atoms, nvars, nonnegative=True):
    """Exact feasibility of a conjunction of homogeneous atoms over R^n."""
    system = set(atoms)
    if nonnegative:
        for i in range(nvars):
            system.add(Atom.make([-1 if j == i else 0 for j in range(nvars)], LE))
    eqs = [a for a in system if a.rel == EQ]
    ineqs = [a for a in system if a.rel != EQ]
    # substitute away equalities
    while eqs:
        e = eqs.pop()
        k = next((i for i, c in enumerate(e.coeffs) if c), None)
        if k is None:
            continue
        ek = e.coeffs[k]

        def sub(a, e=e, k=k, ek=ek):
            ak = a.coeffs[k]
            if not ak:
                return a
            sign = 1 if ek > 0 else -1
            coeffs = [abs(ek) * x - sign * ak * y for x, y in zip(a.coeffs, e.coeffs)]
            return Atom.make(coeffs, a.rel)

        eqs = [sub(a) for a in eqs]
        ineqs = [sub(a) for a in ineqs]
    system = _prune(ineqs)
    while True:
        for a in system:
            if a.is_constant and not a.truth():
                return False
        system = {a for a in system if not a.is_constant}
        if not system:
            return True
        best, best_cost = None, None
        for k in range(nvars):
            pos = sum(1 for a in system if a.coeffs[k] > 0)
            neg = sum(1 for a in system if a.coeffs[k] < 0)
            if pos + neg == 0:
                continue
            cost = pos * neg - pos - neg
            if best_cost is None or cost < best_cost:
                best, best_cost = k, cost
        k = best
        pos = [a for a in system if a.coeffs[k] > 0]
        neg = [a for a in system if a.coeffs[k] < 0]
        rest = {a for a in system if a.coeffs[k] == 0}
        for p in pos:
            for n in neg:
                rest.add(_combine(p, n, k))
        system = _prune(rest)


# ------------------------------------------------------------- reduction


def _normalize_conjunct(atoms, nvars):
    """Simplify a feasible conjunction; None if infeasible."""
    items = set()
    for a in atoms:
        if a.is_constant:
            if not a.truth():
                return None
            continue
        items.add(a)
    # a <= 0 together with -a <= 0 is a = 0
    les = {a.coeffs for a in items if a.rel == LE}
    for c in list(les):
        negc = tuple(-x for x in c)
        if negc in les:
            items.discard(Atom(c, LE))
            items.discard(Atom(negc, LE))
            items.add(Atom.make(c, EQ))
    items = _prune(items)
    if not feasible(items, nvars):
        return None
    # drop atoms implied by the others
    for a in sorted(items, key=lambda t: (t.rel == EQ, t)):
        others = items - {a}
        if all(not feasible(others | {n}, nvars) for n in a.negations()):
            items = others
    return frozenset(items)


def forced_zeros(conjunct, nvars):
    """Indices j with log C_j = 0 on the whole region (given log C >= 0)."""
    out = []
    for j in range(nvars):
        unit = tuple(-1 if i == j else 0 for i in range(nvars))
        if not feasible(set(conjunct) | {Atom.make(unit, LT)}, nvars):
            out.append(j)
    return out


def canonical_conjunct(conjunct, nvars):
    """Same region, with forced-zero coordinates written as log C_j = 0."""
    zeros = forced_zeros(conjunct, nvars)
    if not zeros:
        return conjunct
    atoms = [Atom.make(tuple(0 if i in zeros else c for i, c in enumerate(a.coeffs)), a.rel)
             for a in conjunct]
    atoms += [Atom.make(tuple(1 if i == j else 0 for i in range(nvars)), EQ) for j in zeros]
    return _normalize_conjunct(atoms, nvars)


def _implies(a, b, nvars):
    """Conjunct a implies conjunct b."""
    return all(not feasible(set(a) | {n}, nvars) for atom in b for n in atom.negations())


def _drop_subsumed(conjuncts, nvars):
    ordered = sorted(set(conjuncts), key=lambda c: (len(c), sorted(c)))
    kept = []
    for c in ordered:
        if any(_implies(c, k, nvars) for k in kept):
            continue
        kept = [k for k in kept if not _implies(k, c, nvars)]
        kept.append(c)
    return sorted(kept, key=lambda c: sorted(c))


def to_dnf(tree, nvars, limit=MAX_CONJUNCTS, prune=True):
    """List of feasible conjuncts (frozensets of atoms) equivalent to tree."""
    if tree is True:
        return [frozenset()]
    if tree is False:
        return []
    if isinstance(tree, Atom):
        c = _normalize_conjunct([tree], nvars) if prune else frozenset([tree])
        return [] if c is None else [c]
    op, items = tree
    if op == "or":
        out = []
        for item in items:
            out.extend(to_dnf(item, nvars, limit, prune))
            if len(out) > limit:
                raise SizeBlowup(f"DNF exceeds {limit} conjuncts", partial=out)
        return _drop_subsumed(out, nvars) if prune else out
    current = [frozenset()]
    for item in items:
        current = conjoin_dnf(current, to_dnf(item, nvars, limit, prune), nvars, limit)
        if not current:
            return []
    return current


def conjoin_dnf(left, right, nvars, limit=MAX_CONJUNCTS):
    out = []
    for a in left:
        for b in right:
            c = _normalize_conjunct(a | b, nvars)
            if c is not None:
                out.append(c)
                if len(out) > limit:
                    raise SizeBlowup(f"DNF exceeds {limit} conjuncts", partial=out)
    return _drop_subsumed(out, nvars)


def reduce(tree, nvars):
    """Reduced DNF (list of frozensets of atoms); [] means false.

    Coordinates pinned to zero by log C >= 0 are written as equalities.
    """
    dnf = to_dnf(tree, nvars)
    return sorted({canonical_conjunct(c, nvars) for c in dnf}, key=lambda c: sorted(c))


def dnf_to_tree(dnf):
    return disj(*[conj(*sorted(c)) for c in dnf]) if dnf else False


def equivalent(dnf_a, dnf_b, nvars):
    """Mutual implication of two DNFs, decided exactly."""
    return _dnf_implies(dnf_a, dnf_b, nvars) and _dnf_implies(dnf_b, dnf_a, nvars)


def _dnf_implies(a, b, nvars):
    for conj_a in a:
        # conj_a and not(b) must be infeasible; not(b) is a conjunction of
        # disjunctions of negated atoms, searched depth-first with pruning
        if _satisfiable_with_negations(set(conj_a), list(b), nvars):
            return False
    return True


def _satisfiable_with_negations(base, remaining, nvars):
    if not feasible(base, nvars):
        return False
    if not remaining:
        return True
    head, tail = remaining[0], remaining[1:]
    for atom in sorted(head):
        for n in atom.negations():
            if _satisfiable_with_negations(base | {n}, tail, nvars):
                return True
    return False


def format_dnf(dnf, names):
    if not dnf:
        return "False"
    parts = []
    for c in dnf:
        atoms = sorted(c, key=lambda a: (a.rel != EQ, a.rel, [-x for x in a.coeffs]))
        parts.append(" && ".join(a.format(names) for a in atoms) or "True")
    return " || ".join(f"({p})" if len(dnf) > 1 else p for p in parts)


# ------------------------------------------------------------ BKY cases


def potential_size_log(term: PhaseTerm, derivative=None):
    """Exponent vector of the potential size; None when the derivative vanishes."""
    if derivative is not None and term.forms[derivative] == ABSENT:
        return None
    return tuple(
        (DERIVATIVE_LOG_COEFS if i == derivative else LOG_COEFS)[f - 1]
        for i, f in enumerate(term.forms))


def might_be_small(term: PhaseTerm, smalls, derivative):
    others = [i for i in smalls if i != derivative]
    if any(term.forms[i] in SMALL_FORMS for i in others):
        return True
    return derivative in smalls and term.forms[derivative] in SMALL_DERIVATIVE_FORMS


def _substitute_smalls(vec, smalls):
    return tuple(0 if i in smalls else c for i, c in enumerate(vec))


def apply_bky(phase: Phase, var, smalls=frozenset()):
    """Boolean tree of the BKY alternatives for the var-derivative."""
    smalls = frozenset(smalls)
    n = phase.size
    zero = (0,) * n
    large, small = [], []
    for term in phase.terms:
        v = potential_size_log(term, var)
        if v is None or not any(v):
            continue
        (small if might_be_small(term, smalls, var) else large).append(v)
    large = [_substitute_smalls(v, smalls) for v in large]
    small = [_substitute_smalls(v, smalls) for v in small]
    options = []
    for i, j in itertools.combinations(range(len(large)), 2):
        others = [le(large[k], large[i]) for k in range(len(large)) if k not in (i, j)]
        options.append(conj(eq(large[i], large[j]), *others, lt(zero, large[i])))
    for s in small:
        options.append(conj(*[le(v, s) for v in large], lt(zero, s)))
    options.append(conj(*[le(v, zero) for v in large + small]))
    return disj(*options)


def initial_case(phase: Phase, smalls=frozenset()):
    n = phase.size
    zero = (0,) * n
    atoms = [le(_substitute_smalls(v, smalls), zero) for v in phase.ystar_exponents]
    for i in range(n):
        unit = tuple(1 if j == i else 0 for j in range(n))
        atoms.append(le(zero, _substitute_smalls(unit, smalls)))
    return conj(*atoms)


def derivative_order(phase: Phase):
    """Variables by ascending number of terms they occur in (stable)."""
    freq = phase.index_frequencies()
    return sorted(range(phase.size), key=lambda i: (freq[i], i))


def cases_for_subset(phase: Phase, smalls, limit=MAX_CONJUNCTS):
    """Reduced DNF of every non-negligible case with C_j = 1 for j in smalls."""
    smalls = frozenset(smalls)
    n = phase.size
    current = to_dnf(initial_case(phase, smalls), n, limit)
    for var in derivative_order(phase):
        current = conjoin_dnf(current, to_dnf(apply_bky(phase, var, smalls), n, limit),
                              n, limit)
        if not current:
            return []
    zero = (0,) * n
    nontrivial = disj(*[lt(zero, tuple(1 if j == i else 0 for j in range(n)))
                        for i in range(n) if i not in smalls])
    final = conjoin_dnf(current, to_dnf(nontrivial, n, limit), n, limit)
    return sorted({canonical_conjunct(c, n) for c in final}, key=lambda c: sorted(c))


@dataclass
class CaseReport:
    phase: Phase
    entries: list = field(default_factory=list)   # (smalls tuple, dnf)

    @property
    def log_names(self):
        return tuple("logC" + v[1:] if v.startswith("x") else "log" + v
                     for v in self.phase.variables)

    def smalls_names(self, smalls):
        return [self.phase.variables[i] for i in smalls]

    def lines(self):
        out = []
        for smalls, dnf in self.entries:
            names = ",".join(self.smalls_names(smalls)) or "-"
            out.append(f"C=1 for {{{names}}}: {format_dnf(dnf, self.log_names)}")
        return out

    def family_lines(self):
        out = []
        for region, subsets in case_families(self):
            names = "; ".join("{" + ",".join(self.smalls_names(s)) + "}" for s in subsets)
            out.append(f"{format_dnf([region], self.log_names)}   [from C=1 sets {names}]")
        return out

    def to_dict(self):
        return {"phase": self.phase.name,
                "cases": [{"smalls": self.smalls_names(s),
                           "expression": format_dnf(d, self.log_names)}
                          for s, d in self.entries]}


def embed_smalls(conjunct, smalls, nvars):
    """The conjunct as a region of the full log C space (log C_j = 0 on smalls)."""
    atoms = set(conjunct)
    atoms |= {Atom.make(tuple(1 if i == j else 0 for i in range(nvars)), EQ) for j in smalls}
    return _normalize_conjunct(atoms, nvars)


def case_families(report: "CaseReport"):
    """Group every reported conjunct by the region it describes.

    Returns a list of (region, [smalls, ...]) with regions pairwise
    inequivalent; the order follows first appearance.
    """
    n = report.phase.size
    families = []
    for smalls, dnf in report.entries:
        for c in dnf:
            region = embed_smalls(c, smalls, n)
            for fam in families:
                if _implies(fam[0], region, n) and _implies(region, fam[0], n):
                    if smalls not in fam[1]:
                        fam[1].append(smalls)
                    break
            else:
                families.append((region, [smalls]))
    return families


def region_from_text(text, names):
    """Parse 'a = b && 0 < a' style conjunctions over the given log names."""
    import sympy
    symbols = sympy.symbols(list(names))
    local = dict(zip(names, symbols))
    atoms = []
    for part in text.split("&&"):
        part = part.strip()
        for op, rel, flip in (("<=", LE, False), (">=", LE, True), ("<", LT, False),
                              (">", LT, True), ("=", EQ, False)):
            if op in part:
                lhs, rhs = (sympy.sympify(x, locals=local) for x in part.split(op, 1))
                expr = (rhs - lhs) if flip else (lhs - rhs)
                coeffs = [int(expr.coeff(sym)) for sym in symbols]
                atoms.append(Atom.make(coeffs, rel))
                break
        else:
            raise DomainError(f"cannot parse constraint {part!r}")
    region = _normalize_conjunct(atoms, len(names))
    if region is None:
        raise DomainError(f"target {text!r} is infeasible")
    return region


def regions_equivalent(a, b, nvars):
    return _implies(a, b, nvars) and _implies(b, a, nvars)


def _subset_job(args):
    phase, smalls, limit = args
    return smalls, cases_for_subset(phase, smalls, limit)


def proper_subsets(n):
    for r in range(n):
        for s in itertools.combinations(range(n), r):
            yield s


def enumerate_cases(phase: Phase, workers=1, limit=MAX_CONJUNCTS):
    """Non-false reduced cases over every proper subset of small coordinates."""
    jobs = [(phase, s, limit) for s in proper_subsets(phase.size)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_subset_job, jobs))
    else:
        results = [_subset_job(j) for j in jobs]
    report = CaseReport(phase)
    for smalls, dnf in results:
        if dnf:
            report.entries.append((smalls, dnf))
    return report
