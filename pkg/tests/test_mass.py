import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import m3, mass_functions
from possfuse import Frame, MassFunction
from possfuse.mass import (
    InvalidMassError,
    PreconditionError,
    b,
    bel,
    belief_vector,
    betp,
    betp_unnormalized,
    commonality_vector,
    ignorance,
    implicability_vector,
    mass_from_sigma,
    mass_from_v,
    pignistic_entropy,
    pl,
    plausibility_vector,
    possibility_from_pignistic,
    q,
    simple_sigma,
    simple_v,
    validate,
    weight_sigma,
    weight_v,
)

M1 = [0.02, 0.10, 0.10, 0.25, 0.06, 0.27, 0.02, 0.18]
SRC1 = [0, 0.1, 0.12, 0.25, 0.06, 0.27, 0.02, 0.18]


def test_validate_reports():
    f = Frame.of_size(3)
    assert validate(MassFunction.vacuous(f))
    report = validate(np.array([0, 0.5, 0.4, 0, 0, 0, 0, 0]))
    assert not report and "0.9" in report.describe(f)
    report = validate(np.array([0, 0.6, 0.5, -0.1, 0, 0, 0, 0]))
    assert not report and "{1,2}" in report.describe(f)
    assert validate(np.array(M1))


def test_construction_errors_and_clipping():
    f = Frame.of_size(2)
    with pytest.raises(InvalidMassError):
        MassFunction(f, [0.5, 0.5, 0.5, 0])
    with pytest.raises(InvalidMassError):
        MassFunction(f, [1.0, 0.0])
    m = MassFunction(f, [0.0, -1e-13, 0.5, 0.5 + 1e-13])
    assert m.masses[1] == 0.0
    with pytest.raises(AttributeError):
        m.frame = f
    with pytest.raises(ValueError):
        m.masses[0] = 1.0


def test_constructors_and_predicates():
    f = Frame(["a", "b", "c"])
    m = MassFunction.from_dict(f, {("a",): 0.2, ("a", "b"): 0.3, ("a", "b", "c"): 0.5})
    assert m[("a", "b")] == 0.3 and m.is_consonant()
    assert MassFunction.vacuous(f).is_vacuous()
    assert MassFunction.empty(f).is_empty()
    assert MassFunction.bayesian(f, [0.2, 0.5, 0.3]).is_bayesian()
    assert MassFunction.bayesian(f, [0.2, 0.5, 0.3]).is_dogmatic()
    assert not m3(SRC1).is_consonant()


def test_set_functions_on_example():
    m = m3(M1)
    assert bel(m, ["1", "2"]) == pytest.approx(0.45)
    assert b(m, ["1", "2"]) == pytest.approx(0.47)
    assert pl(m, ["1"]) == pytest.approx(0.80)
    assert q(m, ["1"]) == pytest.approx(0.80)
    vac = MassFunction.vacuous(Frame.of_size(3))
    assert np.allclose(commonality_vector(vac), 1.0)


@given(mass_functions())
def test_set_functions_match_brute_force(m):
    n = m.frame.n
    subs = oracles.all_subsets(n)
    for vec, fn in (
        (belief_vector(m), oracles.bel),
        (implicability_vector(m), oracles.implicability),
        (plausibility_vector(m), oracles.pl),
        (commonality_vector(m), oracles.commonality),
    ):
        expected = oracles.to_vec({a: fn(m.masses, n, a) for a in subs}, n)
        np.testing.assert_allclose(vec, expected, atol=1e-12)
    assert commonality_vector(m)[0] == pytest.approx(1.0)
    assert implicability_vector(m)[-1] == pytest.approx(1.0)


@given(mass_functions())
def test_plausibility_belief_duality(m):
    f = m.frame
    bel_v = belief_vector(m)
    comp = f.full ^ np.arange(f.size)
    np.testing.assert_allclose(plausibility_vector(m), 1.0 - m.empty_mass - bel_v[comp], atol=1e-12)


def test_betp_example_and_errors():
    p = betp(m3(M1))
    np.testing.assert_allclose(p.p, [0.428571, 0.301020, 0.270408], atol=1e-6)
    assert p.e == 0.02 and p["2"] == pytest.approx(0.301020, abs=1e-6)
    np.testing.assert_allclose(betp_unnormalized(m3(M1)), 0.98 * p.p)
    with pytest.raises(PreconditionError):
        betp(MassFunction.empty(Frame.of_size(3)))


@given(mass_functions())
def test_betp_matches_brute_force(m):
    if m.empty_mass >= 1.0:
        return
    np.testing.assert_allclose(betp(m).p, oracles.betp(m.masses, m.frame.n), atol=1e-12)
    assert betp(m).p.sum() == pytest.approx(1.0)


def test_possibility_examples():
    np.testing.assert_allclose(possibility_from_pignistic(betp(m3(SRC1))), [1, 0.895, 0.795], atol=1e-3)
    np.testing.assert_allclose(possibility_from_pignistic([0.2, 0.5, 0.3]), [0.6, 1, 0.8], atol=1e-12)
    assert np.all(possibility_from_pignistic(np.full(4, 0.25)) == 1.0)


@given(st.integers(1, 8).flatmap(lambda n: st.lists(st.floats(0.01, 1.0), min_size=n, max_size=n)))
def test_possibility_is_normal_and_order_isomorphic(weights):
    p = np.array(weights) / np.sum(weights)
    poss = possibility_from_pignistic(p)
    np.testing.assert_allclose(poss, oracles.possibility(p), atol=1e-12)
    assert poss.max() == 1.0
    for i in range(p.size):
        for j in range(p.size):
            assert (p[i] >= p[j]) == (poss[i] >= poss[j] - 1e-12) or abs(p[i] - p[j]) < 1e-12


def test_ignorance_and_entropy():
    f = Frame.of_size(3)
    assert ignorance(MassFunction.vacuous(f)) == 3
    assert ignorance(m3([0.2, 0.3, 0.5, 0, 0, 0, 0, 0])) == pytest.approx(0.8)
    assert pignistic_entropy(MassFunction.bayesian(f, [1 / 3] * 3)) == pytest.approx(np.log2(3))
    assert pignistic_entropy(MassFunction.bayesian(f, [1, 0, 0])) == 0.0
    with pytest.raises(PreconditionError):
        pignistic_entropy(MassFunction.empty(f))


def test_weights_of_simple_and_vacuous():
    f = Frame.of_size(3)
    w = weight_sigma(simple_sigma(f, ["1", "2"], 0.3))
    expected = np.ones(8)
    expected[3] = 0.3
    np.testing.assert_allclose(w.weights, expected, atol=1e-12)
    np.testing.assert_allclose(weight_sigma(MassFunction.vacuous(f)).weights, 1.0)
    with pytest.raises(PreconditionError, match="m\\(Ω\\)"):
        weight_sigma(MassFunction.bayesian(f, [0.2, 0.3, 0.5]))
    with pytest.raises(PreconditionError, match="m\\(∅\\)"):
        weight_v(m3(SRC1))


def _simple_vector(n, focal, weight, anchor):
    v = np.zeros(1 << n)
    v[focal] += 1.0 - weight
    v[anchor] += weight
    return v


@given(mass_functions(dogmatic=False, n=3))
def test_sigma_round_trip_by_explicit_conjunction(m):
    # conjunctive combination of every F^σ(F), brute-force on raw vectors
    n = m.frame.n
    w = weight_sigma(m).weights
    acc = _simple_vector(n, 0, 1.0, m.frame.full)
    for F in range(m.frame.full):
        acc = oracles.convolve(acc, _simple_vector(n, F, w[F], m.frame.full), n, lambda a, b: a & b)
    np.testing.assert_allclose(acc, m.masses, atol=1e-8)


@given(mass_functions(n=3))
def test_v_round_trip_by_explicit_disjunction(m):
    if m.empty_mass <= 1e-6:
        return
    n = m.frame.n
    w = weight_v(m).weights
    acc = _simple_vector(n, 0, 1.0, 0)
    for F in range(1, m.frame.size):
        acc = oracles.convolve(acc, _simple_vector(n, F, w[F], 0), n, lambda a, b: a | b)
    np.testing.assert_allclose(acc, m.masses, atol=1e-8)


def test_simple_mass_functions():
    f = Frame.of_size(3)
    s = simple_sigma(f, ["1"], 0.3)
    assert s[["1"]] == pytest.approx(0.7) and s[f.full] == pytest.approx(0.3)
    d = simple_v(f, ["1"], 0.4)
    assert d[["1"]] == pytest.approx(0.6) and d.empty_mass == pytest.approx(0.4)


@given(mass_functions(dogmatic=False, n=3))
def test_sigma_round_trip(m):
    np.testing.assert_allclose(mass_from_sigma(weight_sigma(m)).masses, m.masses, atol=1e-8)


@given(mass_functions(n=3))
def test_v_round_trip(m):
    if m.empty_mass <= 1e-6:
        return
    np.testing.assert_allclose(mass_from_v(weight_v(m)).masses, m.masses, atol=1e-8)


@given(mass_functions())
def test_commonality_mobius_round_trip(m):
    from possfuse.mass import mass_from_commonality

    np.testing.assert_allclose(mass_from_commonality(m.frame, commonality_vector(m)).masses, m.masses, atol=1e-10)
