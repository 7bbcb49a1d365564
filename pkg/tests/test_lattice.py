import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mlab.errors import EmptyRegionError, InvalidArgumentError
from mlab.lattice import (
    Bump,
    Cone,
    Gaussian,
    GridFunction,
    Polynomial,
    average,
    ball,
    ball_family,
    cell_indices,
    centred_ball_counts,
    centred_ball_sums,
    constant,
    family_maximal,
    indicator,
    integrate,
    load_binary,
    load_csv,
    make_grid,
    measure,
    sample,
    save_binary,
    save_csv,
    spread_max,
)


def test_grid_geometry():
    g = make_grid(2, 1.0, 8)
    assert g.spacing == 0.25
    assert g.cell_volume == 0.0625
    assert g.centers.shape == (64, 2)
    assert np.isclose(g.centers[:, 0].min(), -0.875)
    assert g == make_grid(2, 1.0, 8) and hash(g) == hash(make_grid(2, 1.0, 8))


def test_grid_rejects_bad_arguments():
    with pytest.raises(InvalidArgumentError):
        make_grid(0, 1.0, 8)
    with pytest.raises(InvalidArgumentError):
        make_grid(1, -1.0, 8)


def test_ball_owns_cells_strictly_inside():
    g = make_grid(1, 1.0, 4)  # centers -0.75, -0.25, 0.25, 0.75
    assert list(cell_indices(g, ball((0.0,), 0.75))) == [1, 2]
    with pytest.raises(EmptyRegionError):
        cell_indices(g, ball((0.0,), 0.1))


def test_constant_average_is_exact():
    g = make_grid(2, 1.0, 32)
    assert average(constant(g, 3.5), ball((0.1, -0.2), 0.5)) == pytest.approx(3.5, abs=1e-15)


def test_disc_area_converges():
    g = make_grid(2, 1.0, 512)
    assert measure(g, ball((0, 0), 1.0)) == pytest.approx(np.pi, rel=2e-3)


def test_integrate_linear_function_on_symmetric_ball():
    g = make_grid(1, 1.0, 64)
    f = sample(Polynomial.from_1d([0.0, 1.0]), g)
    assert integrate(f, ball((0.0,), 1.0)) == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("metric", ["euclidean", "sup"])
def test_centred_sums_match_brute_force(metric):
    g = make_grid(2, 1.0, 12)
    rng = np.random.default_rng(0)
    vals = rng.random(g.n_cells)
    r = 0.41
    sums = centred_ball_sums(g, vals, r, metric)
    counts = centred_ball_counts(g, r, metric)
    for c in range(0, g.n_cells, 7):
        d = g.centers - g.centers[c]
        dist = np.max(np.abs(d), axis=1) if metric == "sup" else np.sqrt(np.sum(d * d, axis=1))
        inside = dist < r
        assert sums[c] == pytest.approx(vals[inside].sum(), rel=1e-12)
        assert counts[c] == inside.sum()


def test_spread_max_matches_brute_force():
    g = make_grid(2, 1.0, 10)
    rng = np.random.default_rng(1)
    vals = rng.random(g.n_cells)
    out = spread_max(g, vals, 0.33)
    for c in range(g.n_cells):
        d = np.sqrt(np.sum((g.centers - g.centers[c]) ** 2, axis=1))
        assert out[c] == vals[d < 0.33].max()


def test_family_maximal_dominates_function_and_is_bounded():
    g = make_grid(1, 1.0, 64)
    f = sample(Cone(2.0), g)
    fam = ball_family(g)
    mf = family_maximal(f.values, fam)
    r0 = fam.radii[0]
    smallest = centred_ball_sums(g, f.values, r0) / centred_ball_counts(g, r0)
    assert np.all(mf >= smallest - 1e-12)
    assert mf.max() <= f.values.max() + 1e-12


def test_family_validation():
    g = make_grid(1, 1.0, 16)
    with pytest.raises(InvalidArgumentError):
        ball_family(g, ratio=1.0)
    with pytest.raises(InvalidArgumentError):
        ball_family(g, r_max=5.0)


def test_indicator_and_function_specs():
    g = make_grid(2, 1.0, 16)
    assert indicator(g, ball((0, 0), 0.5)).values.sum() == cell_indices(g, ball((0, 0), 0.5)).size
    pts = np.array([[0.0, 0.0], [0.15, 0.0], [0.5, 0.0]])
    assert np.allclose(Bump(0.1).evaluate(pts), [1.0, 0.5, 0.0])
    assert np.allclose(Bump(0.1).gradient_magnitude(pts), [0.0, 10.0, 0.0])
    assert np.allclose(Cone(1.0).evaluate(pts), [1.0, 0.85, 0.5])
    assert np.allclose(Gaussian(1.0).evaluate(pts)[0], 1.0)


def test_polynomial_derivatives():
    p = Polynomial(((((2, 0)), 1.0), ((1, 1), 3.0)), 2)
    pts = np.array([[1.0, 2.0]])
    # f = x^2 + 3xy, grad = (2x + 3y, 3x) = (8, 3)
    assert p.gradient_magnitude(pts)[0] == pytest.approx(np.hypot(8, 3))
    # |f_xx| + |f_xy| + |f_yy| = 2 + 3 + 0
    assert p.highorder(pts, 2)[0] == pytest.approx(5.0)


@given(st.floats(0.1, 3.0), st.floats(-2.0, 2.0))
def test_gaussian_second_order_matches_closed_form(width, x):
    s2 = width**2
    expected = abs(x * x / s2**2 - 1 / s2) * np.exp(-x * x / (2 * s2))
    assert Gaussian(width).highorder(np.array([[x]]), 2)[0] == pytest.approx(expected, rel=1e-12)


def test_grid_function_arithmetic_and_lookup():
    g = make_grid(1, 1.0, 4)
    f = GridFunction(g, [1.0, 2.0, 3.0, 4.0])
    assert np.allclose((f - f * 2.0).values, [-1, -2, -3, -4])
    assert f.at((0.3,)) == 3.0
    with pytest.raises(ValueError):
        f.values[0] = 5.0


def test_serialization_round_trips(tmp_path):
    g = make_grid(2, 1.5, 6)
    f = GridFunction(g, np.random.default_rng(2).normal(size=g.n_cells))
    save_csv(f, tmp_path / "f.csv")
    save_binary(f, tmp_path / "f.bin")
    for h in (load_csv(tmp_path / "f.csv"), load_binary(tmp_path / "f.bin")):
        assert h.grid == g
        assert np.array_equal(h.values, f.values)


def test_binary_rejects_foreign_file(tmp_path):
    (tmp_path / "x.bin").write_bytes(b"nope")
    with pytest.raises(InvalidArgumentError):
        load_binary(tmp_path / "x.bin")
