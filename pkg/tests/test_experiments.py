import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mlab import experiments as ex
from mlab.errors import InvalidArgumentError
from mlab.lattice import (
    Bump,
    Cone,
    Gaussian,
    Polynomial,
    average,
    ball,
    ball_family,
    indicator,
    make_grid,
    sample,
)
from mlab.weights import PowerWeight, scaled_weight

G2 = make_grid(2, 1.0, 48)
B2 = ball((0.0, 0.0), 1.0)


def test_fit_power_law_recovers_exponent():
    x = np.array([1.0, 2.0, 4.0, 8.0])
    s, a, resid = ex.fit_power_law(x, 3.0 * x**0.4)
    assert s == pytest.approx(0.4) and a == pytest.approx(3.0) and resid < 1e-12
    with pytest.raises(InvalidArgumentError):
        ex.fit_power_law(x[:3], x[:3])


@pytest.mark.parametrize("q,expected,tol", [(6.0, 0.0, 0.02), (8.0, 0.125, 0.0125)])
def test_sharpness_slopes(q, expected, tol):
    rep = ex.sharpness_sweep(2, 2.0, 3.0, q=q)
    assert rep.predicted_slope == pytest.approx(expected)
    assert rep.fitted_slope == pytest.approx(expected, abs=tol)
    assert not rep.inconclusive


def test_sharpness_below_critical_exponent_is_negative():
    assert ex.sharpness_sweep(2, 2.0, 3.0, q=5.0).fitted_slope < 0


def test_sharpness_gamma_and_q_agree():
    a = ex.sharpness_sweep(2, 2.0, 3.0, gamma=1 / 6)
    assert a.params["q"] == pytest.approx(8.0)


def test_sharpness_rejects_bad_parameters():
    with pytest.raises(InvalidArgumentError):
        ex.sharpness_sweep(2, 2.0, 4.5, q=8.0)
    with pytest.raises(InvalidArgumentError):
        ex.sharpness_sweep(2, 2.0, 3.0, gamma=1.5)
    with pytest.raises(InvalidArgumentError):
        ex.sharpness_sweep(2, 2.0, 3.0, q=8.0, eps_ladder=(0.1, 0.05, 0.02))


@given(st.floats(0.01, 0.2), st.floats(2.5, 10.0))
def test_plateau_lhs_lower_bound(eps, q):
    # |f - f_B| >= 1 - f_B on B(0, eps), whose normalized mass is eps^delta
    delta = 3.0
    lhs, _ = ex.bump_oscillation_ratio(2, 2.0, delta, q, eps)
    mean = 7 * eps**2 / 3
    assert lhs >= (1 - mean) * eps ** (delta / q) * (1 - 1e-9)


def test_plateau_mean_matches_grid_average():
    # Lebesgue mean over B(0,1) in R^2 of the plateau is 7 eps^2 / 3
    eps = 0.2
    g = make_grid(2, 1.0, 512)
    assert average(sample(Bump(eps), g), B2) == pytest.approx(7 * eps**2 / 3, rel=0.01)


def test_beta_sweep_reaches_reciprocal_exponent():
    rep = ex.beta_sweep(2, 2.0, 2.0, q=2.0)
    assert rep.fitted_slope >= 0.5 - 0.05
    control = ex.beta_sweep(2, 2.0, 2.0, q=2.0, weight_exponent=0.25)
    assert control.params["growth"] >= 3.0


def test_hedberg_dilation_and_scaling():
    w = PowerWeight(1.0, 2)
    rep = ex.hedberg_check(Cone(1.0), w, 1.25, 1.0, 1.5, B2, G2)
    assert math.isfinite(rep.implied_constant) and rep.implied_constant > 0
    assert rep.extras["dilation_deviation"] < 1e-6
    other = ex.hedberg_check(Cone(1.0), scaled_weight(w, 7.0), 1.25, 1.0, 1.5, B2, G2,
                             dilation=None)
    assert other.implied_constant == pytest.approx(rep.implied_constant, rel=1e-10)


def test_hedberg_preconditions():
    with pytest.raises(InvalidArgumentError):
        ex.hedberg_check(Cone(1.0), None, 1.0, 1.0, 1.5, B2, G2)
    with pytest.raises(InvalidArgumentError):
        ex.hedberg_check(Cone(1.0), None, 1.25, 1.0, 2.5, B2, G2)


def test_riesz_strong_refuses_p_one():
    with pytest.raises(InvalidArgumentError):
        ex.riesz_strong_check(Cone(1.0), None, 1.0, 1.0, 1.0, B2, G2)


def test_riesz_strong_and_weak_unweighted():
    fam = ball_family(G2, center_stride=2)
    strong = ex.riesz_strong_check(Cone(1.0), None, 1.0, 1.0, 1.5, B2, G2, fam)
    weak = ex.riesz_weak_check(Cone(1.0), None, 1.0, 1.0, 1.5, B2, G2, fam)
    assert strong.params["q"] == pytest.approx(6.0)
    assert weak.lhs <= weak.extras["strong_lhs_same_q"] * (1 + 1e-12)
    assert 0 < strong.implied_constant < 10 and 0 < weak.implied_constant < 10


def test_riesz_negative_control_grows():
    # along delta -> n r the A_r model grows, so lowering the exponent must inflate C
    ratios = []
    for delta in (1.0, 0.1, 0.01):
        model = ex.power_weight_ap_model(delta, 2, 1.25)
        full = ex.riesz_strong_check(Cone(1.0), None, 1.25, 1.0, 1.5, B2, G2,
                                     ar_constant=model, ainf_dual=1.0)
        low = ex.riesz_strong_check(Cone(1.0), None, 1.25, 1.0, 1.5, B2, G2,
                                    ar_constant=model, ainf_dual=1.0,
                                    weight_exponent=1 / 3.0)
        ratios.append(low.implied_constant / full.implied_constant)
    assert ratios[-1] / ratios[0] >= 3.0


def test_poincare_modes_are_ordered():
    kw = dict(q=2.0, ar_constant=1.0)
    strong = ex.poincare_check(Bump(0.2), None, 1.0, 1.0, B2, G2, "strong", **kw)
    weak = ex.poincare_check(Bump(0.2), None, 1.0, 1.0, B2, G2, "weak", **kw)
    lor = ex.poincare_check(Bump(0.2), None, 1.0, 1.0, B2, G2, "lorentz", **kw)
    assert weak.implied_constant <= strong.implied_constant
    assert lor.lhs >= strong.lhs * (1 - 1e-12)


@pytest.mark.parametrize("lam", [0.5, 2.0])
def test_poincare_dilation_invariance(lam):
    w = PowerWeight(1.0, 2)
    fam = ball_family(G2, center_stride=4)
    base = ex.poincare_check(Bump(0.2), w, 1.0, 1.0, B2, G2, family=fam, q=2.0)
    g2 = G2.dilate(lam)
    other = ex.poincare_check(ex.dilate_spec(Bump(0.2), lam), ex.dilate_weight(w, lam),
                              1.0, 1.0, B2.dilate(lam), g2, family=ex.dilate_family(fam, lam),
                              q=2.0)
    assert other.implied_constant == pytest.approx(base.implied_constant, rel=1e-6)


def test_poincare_constant_function_is_trivial():
    rep = ex.poincare_check(Polynomial(((((0, 0)), 2.0),), 0), None, 1.0, 1.0, B2, G2, q=2.0)
    assert rep.implied_constant == 0.0 and rep.notes


def test_poincare_improved_exponent_uses_dual_ainf():
    rep = ex.poincare_check(Bump(0.2), None, 1.5, 1.5, B2, G2, ar_constant=1.0, ainf_dual=1.0)
    t = 8.0
    assert 1 / 1.5 - 1 / rep.params["q"] == pytest.approx(0.5 * t / (1 + 1.5 * (t - 1)))


@pytest.mark.parametrize("delta", [0.5, 0.9])
def test_fractional_bbm_oracle(delta):
    g = make_grid(1, 1.0, 4096)
    rep = ex.fractional_poincare_check(Polynomial.from_1d([0, 1]), None, 1.0, delta,
                                       ball((0.5,), 0.5), g)
    assert rep.extras["bbm_implied_constant"] == pytest.approx((2 - delta) * 2 ** (delta - 3),
                                                               rel=0.05)


def test_fractional_representation_ratio_is_finite():
    g = make_grid(1, 1.0, 512)
    rep = ex.fractional_poincare_check(Polynomial.from_1d([0, 1]), None, 1.0, 0.5,
                                       ball((0.5,), 0.5), g, representation=True)
    assert 0 < rep.extras["representation_ratio"] < 10


def test_subrepresentation_stable_under_refinement():
    vals = [ex.subrepresentation_check(Cone(1.0), B2, make_grid(2, 1.0, n)).implied_constant
            for n in (64, 128)]
    assert vals[1] == pytest.approx(vals[0], rel=0.05)


def test_subrepresentation_needs_m_below_dimension():
    with pytest.raises(InvalidArgumentError):
        ex.subrepresentation_check(Gaussian(0.5), B2, G2, m=2)


def test_highorder_first_order_matches_poincare():
    f = Polynomial(((((1, 0)), 1.0), ((2, 0), 0.5)), 2)  # depends on x only
    hi = ex.highorder_check(f, None, 1.0, 1.0, 1, B2, G2, mode="weak")
    ps = ex.poincare_check(f, None, 1.0, 1.0, B2, G2, mode="weak", ar_constant=1.0)
    assert hi.implied_constant == pytest.approx(ps.implied_constant, rel=1e-10)


def test_highorder_second_order_dilation():
    g = make_grid(3, 1.0, 16)
    b = ball((0.0, 0.0, 0.0), 1.0)
    base = ex.highorder_check(Gaussian(0.5), None, 1.0, 1.0, 2, b, g, mode="weak")
    other = ex.highorder_check(Gaussian(1.0), None, 1.0, 1.0, 2, b.dilate(2.0), g.dilate(2.0),
                               mode="weak")
    assert math.isfinite(base.implied_constant)
    assert other.implied_constant == pytest.approx(base.implied_constant, rel=0.05)
    with pytest.raises(InvalidArgumentError):
        ex.highorder_check(Gaussian(0.5), None, 1.0, 1.0, 2, b, g, mode="strong")


def test_vanishing_lemma_examples():
    mu = np.array([1.0, 1.0])
    e = np.array([True, False])
    rep = ex.vanishing_lemma_check(np.array([0.0, 2.0]), e, 2.0, mu, constants=[1.0])
    # normalized atoms: ||a|| = sqrt 2 * 1, ||f - a|| = sqrt(1 + 1)
    assert rep.lhs == pytest.approx(math.sqrt(2))
    assert rep.rhs_core == pytest.approx(math.sqrt(2) * math.sqrt(2))
    assert rep.extras["tight_holds"] and rep.extras["printed_holds"]
    full = ex.vanishing_lemma_check(np.zeros(3), np.ones(3, bool), 2.0, np.ones(3), lam=0.99,
                                    constants=[1.0])
    assert full.extras["tight_holds"]
    with pytest.raises(InvalidArgumentError):
        ex.vanishing_lemma_check(np.zeros(3), np.ones(3, bool), 2.0, np.ones(3))


def test_vanishing_lemma_suite_has_no_violations():
    res = ex.vanishing_lemma_suite(300, seed=5)
    assert res["tight_violations"] == 0 and res["printed_violations"] == 0


def test_maximal_probe():
    g = make_grid(1, 1.0, 256)
    fam = ball_family(g)
    f = indicator(g, ball((0.1,), 0.05))
    unit = ex.maximal_norm_probe(None, 1.0, 2.0, fam, [f])
    assert unit.implied_constant * math.sqrt(2.0) >= 1 - 1e-12
    rep = ex.maximal_norm_probe(PowerWeight(0.5, 1), 1.0, 2.0, fam, [f])
    scaled = ex.maximal_norm_probe(PowerWeight(0.5, 1), 1.0, 2.0, fam, [f * 13.0])
    assert math.isfinite(rep.implied_constant)
    assert scaled.implied_constant == pytest.approx(rep.implied_constant, rel=1e-10)
    with pytest.raises(InvalidArgumentError):
        ex.maximal_norm_probe(None, 2.0, 2.0, fam, [f])


def test_reports_serialize():
    rep = ex.vanishing_lemma_check(np.array([0.0, 1.0]), np.array([True, False]), 1.0,
                                   np.ones(2), constants=[0.5])
    d = rep.to_dict()
    assert set(d) >= {"experiment_id", "lhs", "rhs_core", "implied_constant", "notes"}
