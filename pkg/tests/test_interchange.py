import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gl4bessel.errors import DomainError, SizeBlowup
from gl4bessel.interchange import (DERIVATIVE_LOG_COEFS, EQ, LE, LOG_COEFS, LT, Atom, Phase,
                                   PhaseTerm, apply_bky, builtin_phase, case_families,
                                   cases_for_subset, conj, disj, enumerate_cases, equivalent,
                                   feasible, might_be_small, potential_size_log, reduce,
                                   region_from_text, regions_equivalent, to_dnf)
from gl4bessel.suites import INTERCHANGE_TARGETS, match_families


def atom(coeffs, rel):
    return Atom.make(coeffs, rel)


def holds(a, point):
    value = sum(Fraction(c) * x for c, x in zip(a.coeffs, point))
    return {LE: value <= 0, LT: value < 0, EQ: value == 0}[a.rel]


def test_size_coefficient_tables():
    assert LOG_COEFS == (-1, -2, 1, -1, 0, 1, 0)
    assert DERIVATIVE_LOG_COEFS == (-1, -2, 1, -1, -2, 1, 1)


def test_potential_size_examples():
    assert potential_size_log(PhaseTerm((7, 7, 7)), derivative=1) is None
    assert potential_size_log(PhaseTerm((6,)), derivative=0) == (1,)
    assert potential_size_log(PhaseTerm((3, 6)), derivative=1) == (1, 1)


def test_might_be_small_examples():
    assert not might_be_small(PhaseTerm((6, 3)), frozenset(), 0)
    assert might_be_small(PhaseTerm((6, 3)), frozenset({0}), 1)
    assert might_be_small(PhaseTerm((3, 6)), frozenset({0}), 0)
    assert not might_be_small(PhaseTerm((5, 6)), frozenset({0}), 0)


def test_single_large_term_reduces_to_nonpositive():
    phase = Phase("one", ("x1", "x2"), (PhaseTerm((3, 6)),), ())
    dnf = reduce(apply_bky(phase, 1), 2)
    assert equivalent(dnf, [frozenset({atom((1, 1), LE)})], 2)


def test_absent_derivative_is_trivially_true():
    phase = Phase("absent", ("x1", "x2"), (PhaseTerm((3, 7)),), ())
    assert reduce(apply_bky(phase, 1), 2) == [frozenset()]


def test_reduce_collapses_to_equality():
    a_le = atom((1, 0), LE)
    a_ge = atom((-1, 0), LE)
    assert reduce(conj(a_le, a_ge), 2) == [frozenset({atom((1, 0), EQ)})]


def test_reduce_detects_contradiction():
    assert reduce(conj(atom((-1, 0), LT), atom((1, 0), LE)), 2) == []


coeff = st.integers(-3, 3)
atoms = st.builds(atom, st.tuples(coeff, coeff, coeff), st.sampled_from([LE, LT, EQ]))
points = st.tuples(*[st.integers(0, 4)] * 3)


@given(st.lists(st.lists(atoms, min_size=1, max_size=3), min_size=1, max_size=3),
       st.lists(points, min_size=1, max_size=20))
def test_reduced_dnf_agrees_pointwise(groups, samples):
    tree = disj(*[conj(*g) for g in groups])
    dnf = to_dnf(tree, 3)
    for p in samples:
        expected = any(all(holds(a, p) for a in g) for g in groups)
        got = any(all(holds(a, p) for a in c) for c in dnf)
        assert expected == got


@given(st.lists(atoms, min_size=1, max_size=4), points)
def test_feasible_when_a_witness_exists(system, point):
    if all(holds(a, point) for a in system):
        assert feasible(system, 3)


def test_reduce_is_equivalent_to_input():
    tree = disj(conj(atom((1, -1, 0), LE), atom((-1, 1, 0), LE), atom((-1, 0, 0), LT)),
                conj(atom((0, 1, -1), EQ), atom((0, -1, 0), LT)))
    dnf = reduce(tree, 3)
    raw = [frozenset(c[1]) for c in tree[1]]
    assert equivalent(dnf, raw, 3)


def test_phase_json_round_trip():
    phase = builtin_phase("211")
    assert Phase.from_json(json.dumps(phase.to_dict())) == phase


def test_bad_phase_rejected():
    with pytest.raises(DomainError):
        PhaseTerm((0, 3))
    with pytest.raises(DomainError):
        Phase("bad", ("x1",), (PhaseTerm((3, 3)),), ())
    with pytest.raises(DomainError):
        builtin_phase("13")


def test_dnf_limit_raises_with_partial():
    tree = conj(*[disj(atom((1, 0, 0), LT), atom((0, 1, 0), LT), atom((0, 0, 1), LT))
                  for _ in range(4)])
    with pytest.raises(SizeBlowup) as info:
        to_dnf(tree, 3, limit=2, prune=False)
    assert info.value.partial is not None


@pytest.mark.parametrize("name", ["121", "41"])
def test_no_nontrivial_cases(name):
    assert enumerate_cases(builtin_phase(name)).entries == []


def test_w211_single_family():
    report = enumerate_cases(builtin_phase("211"))
    families = case_families(report)
    assert len(families) == 1
    region, subsets = families[0]
    assert (0, 1, 4) in subsets
    target = region_from_text("logC3 = logC4 && logC3 > 0 && logC1 = 0 && logC2 = 0 && logC5 = 0",
                              report.log_names)
    assert regions_equivalent(region, target, 5)


def test_family_matching_against_targets():
    report = enumerate_cases(builtin_phase("211"))
    matched, missing, extra = match_families(report, INTERCHANGE_TARGETS["211"])
    assert matched == [0] and not missing and not extra


def test_report_deterministic_across_workers():
    phase = builtin_phase("211")
    assert enumerate_cases(phase).entries == enumerate_cases(phase, workers=2).entries


def test_subset_without_cases_is_empty():
    assert cases_for_subset(builtin_phase("121"), ()) == []
