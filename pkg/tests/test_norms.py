import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mlab.errors import InvalidArgumentError
from mlab.lattice import GridFunction, ball, indicator, make_grid
from mlab.norms import distribution, lorentz, lorentz_weak, weighted_lp
from mlab.weights import PowerWeight

GRID = make_grid(1, 1.0, 64)
REGION = ball((0.0,), 1.0)


def piecewise(seed, levels=5):
    rng = np.random.default_rng(seed)
    vals = rng.choice(rng.uniform(0.1, 3.0, levels), GRID.n_cells)
    return GridFunction(GRID, vals)


def test_lp_of_constant_and_weight_normalization():
    f = GridFunction(GRID, np.full(GRID.n_cells, 2.0))
    assert weighted_lp(f, 3.0, REGION) == pytest.approx(2.0)
    assert weighted_lp(f, 3.0, REGION, PowerWeight(0.5, 1)) == pytest.approx(2.0)


def test_lp_rejects_small_exponent():
    with pytest.raises(InvalidArgumentError):
        weighted_lp(piecewise(0), 0.5, REGION)


@pytest.mark.parametrize("seed", range(20))
def test_lorentz_diagonal_is_lebesgue(seed):
    f = piecewise(seed)
    for a in (1.0, 2.0, 3.5):
        assert lorentz(f, a, a, REGION) == pytest.approx(weighted_lp(f, a, REGION), rel=1e-10)


@given(st.integers(0, 10_000), st.floats(1.0, 5.0), st.floats(1.0, 6.0))
def test_weak_norm_below_lorentz(seed, a, b):
    f = piecewise(seed)
    assert lorentz_weak(f, a, REGION) <= (b / a) ** (1 / b) * lorentz(f, a, b, REGION) * (1 + 1e-12)


@given(st.floats(1.0, 5.0), st.floats(1.0, 6.0), st.floats(0.1, 0.9))
def test_indicator_closed_form(a, b, radius):
    f = indicator(GRID, ball((0.0,), radius))
    mu = float(np.mean(f.values))
    assert lorentz(f, a, b, REGION) == pytest.approx((a / b) ** (1 / b) * mu ** (1 / a), rel=1e-10)
    assert lorentz_weak(f, a, REGION) == pytest.approx(mu ** (1 / a), rel=1e-12)


def test_distribution_function_steps():
    f = GridFunction(make_grid(1, 1.0, 4), [0.0, 1.0, 1.0, 2.0])
    d = distribution(f, ball((0.0,), 1.0))
    assert d.mass(0.5) == pytest.approx(0.75)
    assert d.mass(1.0) == pytest.approx(0.25)
    assert d.mass(2.0) == 0.0


def test_lorentz_monotone_in_fineness():
    f = piecewise(3)
    vals = [lorentz(f, 2.0, b, REGION) for b in (1.0, 2.0, 4.0)]
    assert vals[0] >= vals[1] >= vals[2]
