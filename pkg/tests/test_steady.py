import random
from fractions import Fraction

import numpy as np
import pytest

from crntrans import linalg
from crntrans.corpus import load_example
from crntrans.errors import CapExceededError, ConvergenceError, HypothesisError
from crntrans.model import GeneralizedNetwork, mass_action_rhs
from crntrans.poly import Polynomial
from crntrans.steady import (
    binomial_generators,
    check_complex_balanced,
    check_multistationarity_condition,
    check_uniqueness_condition,
    multistationarity_hypothesis,
    parametrization,
    sign_vectors,
    solve_steady_state,
    translated_tree_constants,
    uniqueness_hypothesis,
    verify_steady_state,
)
from crntrans.translation import find_translations, translated_rate_constants, translation_from_shifts

P = Polynomial.parse


def draw_rates(net, rng, lo=0.5, hi=2.0):
    return {s: rng.uniform(lo, hi) for s in net.rate_symbols}


def signed_terms(b):
    return {(b.coeff_pos, b.expon_pos), (b.coeff_neg, b.expon_neg)}


def test_futile_cycle_binomials_match_up_to_sign(fc_translation):
    K1, K2, K3, K4 = (P("(k1m + k2)*k3p*k4"), P("k1p*k3p*k4"), P("k1p*k2*(k3m + k4)"), P("k1p*k2*k3p"))
    x12, x3, x45, x6 = (1, 1, 0, 0, 0, 0), (0, 0, 1, 0, 0, 0), (0, 0, 0, 1, 1, 0), (0, 0, 0, 0, 0, 1)
    ref = [((K2, x12), (K1, x3)), ((K3, x12), (K1, x45)), ((K4, x12), (K1, x6))]
    ours = binomial_generators(fc_translation)
    assert len(ours) == 3
    for b, (pos, neg) in zip(ours, ref):
        # ours is K1 x^{y_j} - K_j x^{y_1}, the reference list has the negatives
        assert (b.coeff_pos, b.expon_pos) == (neg[0], neg[1])
        assert (b.coeff_neg, b.expon_neg) == (pos[0], pos[1])


def test_binomial_evaluation(fc_translation):
    b = binomial_generators(fc_translation)[0]
    ones = {s: 1 for s in fc_translation.source.rate_symbols}
    assert b.evaluate([1, 1, 2, 1, 1, 1], ones) == 2 * 2 - 1


def test_hypothesis_errors(fc, lv):
    t, cls = translation_from_shifts(fc, [(0,) * 6] * 6)
    assert not cls.strong
    with pytest.raises(HypothesisError, match="strong"):
        binomial_generators(t)


def test_anchor_override_validation(fc_translation):
    with pytest.raises(ValueError):
        binomial_generators(fc_translation, anchors=[0, 1])
    b = binomial_generators(fc_translation, anchors=[2])
    assert all(x.complexes[1] == 2 for x in b)


def test_parametrization(fc, lv, fc_translation):
    par = parametrization(fc_translation)
    y = fc.complexes
    expected = linalg.span([tuple(a - b for a, b in zip(y[j], y[0])) for j in (1, 3, 4)], 6)
    assert par.S_tilde.same_span(expected)
    assert par.S_tilde_perp.dim == 3
    t = find_translations(lv)[0].translation
    par = parametrization(t)
    assert par.S_tilde.dim == 2 and par.S_tilde_perp.dim == 0


def test_sign_vectors_examples():
    line = linalg.span([(-1, -1, 1)], 3)
    assert sign_vectors(line) == {(-1, -1, 1), (0, 0, 0), (1, 1, -1)}
    assert sign_vectors(linalg.SubspaceBasis(3, ())) == {(0, 0, 0)}
    plane = linalg.span([(1, 0), (0, 1)], 2)
    assert len(sign_vectors(plane)) == 9
    with pytest.raises(CapExceededError):
        sign_vectors(line, cap=2)


def test_futile_cycle_sign_conditions(fc_translation):
    u = check_uniqueness_condition(fc_translation)
    assert not u.holds and not u.sign_compatible
    assert u.positive_conservation
    assert u.witness == (0, 1, -1, 1, 0, 0)
    m = check_multistationarity_condition(fc_translation)
    assert not m.holds and m.witness is None


def test_identity_translation_is_sign_compatible():
    net = load_example("network39")
    t = find_translations(net)[0].translation
    assert check_uniqueness_condition(t).sign_compatible


def test_multistationarity_trivial_cases(lv):
    t = find_translations(lv)[0].translation
    assert not check_multistationarity_condition(t).holds
    R1 = linalg.span([(1,)], 1)
    assert multistationarity_hypothesis(R1, R1).holds


def test_uniqueness_hypothesis_on_subspaces():
    S = linalg.span([(1, -1)], 2)
    rep = uniqueness_hypothesis(S, S)
    assert rep.holds and rep.witness is None
    rep = uniqueness_hypothesis(S, linalg.span([(1, 1)], 2))
    assert not rep.sign_compatible and rep.witness is not None


def test_complex_balance_checks():
    net = load_example("two_cycle")
    g = GeneralizedNetwork.mass_action(net)
    assert check_complex_balanced(g, {"k1": 1, "k2": 1}, [Fraction(3), Fraction(3)])
    assert not check_complex_balanced(g, {"k1": 1, "k2": 1}, [Fraction(1), Fraction(2)])


def test_solve_futile_cycle_all_ones(fc, fc_translation):
    ones = {s: 1 for s in fc.rate_symbols}
    sol = solve_steady_state(fc_translation, ones, [1] * 6)
    assert max(abs(v) for v in mass_action_rhs(fc, ones, list(sol.x))) < 1e-9
    kt = {k: float(v) for k, v in translated_rate_constants(fc_translation, ones).items()}
    assert check_complex_balanced(fc_translation.translated, kt, list(sol.x))
    rep = verify_steady_state(fc, ones, sol.x)
    assert rep.residual_inf < 1e-9
    assert rep.decomposes and rep.weights[2] > 0
    # conservation laws are kept
    W = np.array(parametrization(fc_translation).S_perp.basis, dtype=float)
    assert np.allclose(W @ sol.x, W @ np.ones(6), rtol=1e-12)


def test_solve_two_cycle_and_lotka_volterra(lv):
    net = load_example("two_cycle")
    t = find_translations(net)[0].translation
    sol = solve_steady_state(t, {"k1": 1, "k2": 1}, [Fraction(3, 2), Fraction(1, 2)])
    assert np.allclose(sol.x, [1, 1], atol=1e-12)
    t = find_translations(lv)[0].translation
    sol = solve_steady_state(t, {"k1": 1, "k2": 1, "k3": 1}, [3, 0.2])
    assert np.allclose(sol.x, [1, 1], atol=1e-12)


def test_solve_rejects_bad_start(fc_translation):
    ones = {s: 1 for s in fc_translation.source.rate_symbols}
    with pytest.raises(ValueError):
        solve_steady_state(fc_translation, ones, [1, 1, 0, 1, 1, 1])
    with pytest.raises(ConvergenceError):
        solve_steady_state(fc_translation, ones, [1e6, 1e-6, 1, 1, 1e6, 1], max_iter=0, restarts=0)


def test_verify_detects_non_steady_state(fc):
    rates = {s: Fraction(i + 1) for i, s in enumerate(fc.rate_symbols)}
    rep = verify_steady_state(fc, rates, [1] * 6)
    assert rep.residual_inf > 0.1
    assert len(rep.per_species) == 6


def test_translated_tree_constants_numeric(sf_translation):
    ones = {f"k{i}": Fraction(1) for i in range(1, 15)}
    num = translated_tree_constants(sf_translation, ones)
    sym = translated_tree_constants(sf_translation)
    assert [s.evaluate(ones) for s in sym] == num


def _solve_x(t, rates, x0, anchors=None):
    return solve_steady_state(t, rates, x0, anchors).x


@pytest.mark.parametrize("which", ["fc", "sf"])
def test_anchor_invariance(which, fc_translation, sf_translation):
    t = fc_translation if which == "fc" else sf_translation
    n = t.network.n
    rng = random.Random(5)
    for _ in range(10):
        rates = draw_rates(t.source, rng)
        x0 = [rng.uniform(0.5, 2) for _ in range(t.source.m)]
        a = _solve_x(t, rates, x0)
        other = [n - 1] if which == "sf" else [3]
        b = _solve_x(t, rates, x0, other)
        assert np.allclose(a, b, rtol=1e-9)


def test_shinar_feinberg_robust_species(sf, sf_translation):
    # the binomial K3 x3 x7 - K6 x3 pins x7 = [Yp] independently of the class
    rng = random.Random(17)
    rates = draw_rates(sf, rng)
    yp = sf.species.index("Yp")
    values = []
    for _ in range(5):
        x0 = [rng.uniform(0.2, 5) for _ in range(sf.m)]
        values.append(_solve_x(sf_translation, rates, x0)[yp])
    assert max(values) - min(values) < 1e-8 * max(values)
    b = [b for b in binomial_generators(sf_translation, anchors=[2]) if b.complexes[0] == 5][0]
    assert b.expon_pos == (0, 0, 1, 0, 0, 0, 1, 0, 0) and b.expon_neg == (0, 0, 1, 0, 0, 0, 0, 0, 0)


def test_steady_state_of_improper_translation_solves_source(sf, sf_translation):
    rng = random.Random(23)
    for _ in range(5):
        rates = draw_rates(sf, rng)
        x = _solve_x(sf_translation, rates, [rng.uniform(0.5, 2) for _ in range(sf.m)])
        assert verify_steady_state(sf, rates, x).relative_residual < 1e-8
