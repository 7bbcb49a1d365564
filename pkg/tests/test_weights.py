import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mlab.errors import InvalidArgumentError
from mlab.lattice import GridFunction, ball, ball_family, make_grid
from mlab.weights import (
    ExponentContext,
    PowerWeight,
    SampledWeight,
    a1_check,
    a1_constant,
    ainf_constant,
    ap_ball_values,
    ap_constant,
    conjugate,
    dual_weight,
    ell_w,
    exponent_qr_improved,
    exponent_qr_plain,
    open_property,
    power_weight_ap_model,
    reverse_holder_margin,
    scaled_weight,
    sobolev_exponent_pstar_w,
    sphere_area,
    unit_weight,
    weight_mass,
)


def interval_a2_sweep(exponent=0.5, samples=200001):
    """sup of avg(w) avg(1/w) for |x|^exponent over intervals [-s, 1], 0 <= s <= 1.

    Intervals on one side of the origin give at most the s = 0 value, and the
    quantity is invariant under dilation and reflection, so this covers all intervals.
    """
    s = np.linspace(0.0, 1.0, samples)
    a = exponent
    avg_w = (1 + s ** (1 + a)) / ((1 + a) * (1 + s))
    avg_d = (1 + s ** (1 - a)) / ((1 - a) * (1 + s))
    return float(np.max(avg_w * avg_d))


def test_sphere_area_closed_forms():
    assert sphere_area(1) == pytest.approx(2.0)
    assert sphere_area(2) == pytest.approx(2 * math.pi)
    assert sphere_area(3) == pytest.approx(4 * math.pi)


def test_conjugate():
    assert conjugate(2.0) == 2.0
    assert conjugate(1.0) == math.inf
    assert conjugate(3.0) == pytest.approx(1.5)


def test_power_weight_mass_closed_form_and_quadrature():
    w = PowerWeight(1.0, 2)
    assert weight_mass(w, ball((0, 0), 2.0)) == pytest.approx(2 * math.pi * 2.0)
    g = make_grid(1, 1.0, 4096)
    w1 = PowerWeight(2.0, 1)  # |x|, mass 1 on (-1, 1)
    assert weight_mass(w1, ball((0.5,), 0.5), g) == pytest.approx(0.5, rel=1e-6)


def test_power_weight_rejects_origin_cell():
    with pytest.raises(InvalidArgumentError):
        PowerWeight(0.5, 1).evaluate(np.zeros((1, 1)))


def test_unit_weight_is_in_every_class_with_constant_one():
    g = make_grid(2, 1.0, 32)
    fam = ball_family(g, center_stride=2)
    u = unit_weight(g)
    for p in (1.5, 2.0, 3.0):
        assert ap_constant(u, p, fam) == pytest.approx(1.0, abs=1e-12)
    assert a1_constant(u, fam) == pytest.approx(1.0, abs=1e-12)


def test_a2_of_root_weight_approaches_interval_sweep():
    oracle = interval_a2_sweep()
    assert oracle == pytest.approx(1.5, abs=1e-6)
    prev = 0.0
    for n_cells in (256, 1024, 4096):
        g = make_grid(1, 1.0, n_cells)
        val = ap_constant(PowerWeight(1.5, 1), 2.0, ball_family(g))
        assert prev < val < oracle
        prev = val
    assert val == pytest.approx(oracle, rel=0.02)


def test_a1_of_inverse_root_approaches_uncentred_closed_form():
    # sup over intervals [-t, 1] of avg |x|^(-1/2) is 1 + sqrt 2 at t = 3 - 2 sqrt 2
    g = make_grid(1, 1.0, 4096)
    val = a1_constant(PowerWeight(0.5, 1), ball_family(g))
    assert val == pytest.approx(1 + math.sqrt(2), rel=0.02)
    assert val < 1 + math.sqrt(2)


def test_a1_check_flags_cap():
    g = make_grid(1, 1.0, 256)
    est = a1_check(PowerWeight(0.5, 1), ball_family(g), cap=2.0)
    assert est.exceeds_cap


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_duality_identity_per_ball(p):
    g = make_grid(1, 1.0, 512)
    fam = ball_family(g, center_stride=3)
    w = PowerWeight(0.7, 1)
    pp = conjugate(p)
    lhs = ap_ball_values(dual_weight(w, p), pp, fam)
    rhs = ap_ball_values(w, p, fam) ** (pp - 1)
    assert np.allclose(lhs, rhs, rtol=1e-8)


def test_dual_weight_of_power_weight_is_power_weight():
    g = make_grid(2, 1.0, 16)
    w = PowerWeight(1.2, 2, scale=3.0)
    s = dual_weight(w, 3.0)
    expected = w.evaluate(g.centers) ** (1 - conjugate(3.0))
    assert np.allclose(s.evaluate(g.centers), expected)


@given(st.floats(0.2, 1.8), st.floats(0.1, 100.0))
def test_constants_invariant_under_scaling(delta, c):
    g = make_grid(1, 1.0, 128)
    fam = ball_family(g, center_stride=4)
    w = PowerWeight(delta, 1)
    assert ap_constant(scaled_weight(w, c), 2.0, fam) == pytest.approx(
        ap_constant(w, 2.0, fam), rel=1e-10)


def test_ainf_bounds():
    g = make_grid(1, 1.0, 128)
    fam = ball_family(g, ratio=2.0, center_stride=4)
    assert ainf_constant(unit_weight(g), fam) == pytest.approx(1.0)
    w = PowerWeight(0.5, 1)
    ainf = ainf_constant(w, fam)
    assert 1.0 < ainf <= a1_constant(w, fam) + 1e-12


def test_ell_exact_for_power_weights():
    assert ell_w(PowerWeight(3.0, 2)).value == 1.5
    assert ell_w(PowerWeight(1.0, 2)).value == 1.0
    assert not ell_w(PowerWeight(3.0, 2)).approximate


def test_ell_sampled_constant_weight_is_one():
    g = make_grid(1, 1.0, 128)
    est = ell_w(SampledWeight(GridFunction(g, np.ones(g.n_cells))))
    assert est.value == 1.0 and est.approximate


def test_exponents():
    assert sobolev_exponent_pstar_w(2.0, 1.5, 2) == pytest.approx(6.0)
    ctx = ExponentContext(2, 1.0, 1.5, 1.25)
    assert 1 / 1.5 - 1 / exponent_qr_plain(ctx) == pytest.approx(1 / (2 * 1.25))
    improved = exponent_qr_improved(ExponentContext(2, 1.0, 1.5, 1.25, 2.0))
    t = 8 * 2.0
    assert 1 / 1.5 - 1 / improved == pytest.approx(0.5 * t / (1 + 1.25 * (t - 1)))
    with pytest.raises(InvalidArgumentError):
        ExponentContext(2, 1.0, 2.5, 1.0)


def test_power_weight_model_grows_like_inverse_delta():
    vals = [power_weight_ap_model(d, 2, 2.0) * d for d in (1e-2, 1e-3, 1e-4)]
    assert vals[-1] == pytest.approx(4 * (1 / 4), rel=1e-3)


@pytest.mark.parametrize("delta", [0.5, 1.5])
def test_reverse_holder_and_open_property(delta):
    g = make_grid(1, 1.0, 256)
    fam = ball_family(g, ratio=2.0, center_stride=4)
    w = PowerWeight(delta, 1)
    rh = reverse_holder_margin(w, fam, inflate=2.0)
    assert rh.passed and rh.max_ratio <= 2.0
    op = open_property(w, 2.0, fam, inflate=2.0)
    assert op.holds


def test_reverse_holder_inadmissible_exponent_fails():
    g = make_grid(1, 1.0, 256)
    fam = ball_family(g, ratio=2.0, center_stride=4)
    assert not reverse_holder_margin(PowerWeight(0.5, 1), fam, eps_override=10.0).passed
