"""Orthonormal polynomial bases on balls and the projection onto them.

The inner product is ``<f, g>_B = (1/|B|) int_B f g`` with midpoint quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateBasisError, InvalidArgumentError
from .lattice import Ball, Grid, GridFunction, cell_indices, multi_indices, sample


@dataclass(frozen=True, eq=False)
class Basis:
    """Orthonormalized monomials of degree at most ``m - 1`` on ``ball``."""

    ball: Ball
    m: int
    grid: Grid
    cells: np.ndarray
    functions: np.ndarray  # shape (dim P_{m-1}, len(cells)), values on the ball cells
    exponents: tuple[tuple[int, ...], ...]
    transform: np.ndarray  # functions = transform @ scaled monomials
    gram_residual: float

    def __len__(self) -> int:
        return len(self.functions)

    def as_grid_functions(self) -> list[GridFunction]:
        out = []
        for phi in self.functions:
            full = np.zeros(self.grid.n_cells)
            full[self.cells] = phi
            out.append(GridFunction(self.grid, full))
        return out


def graded_monomials(dim: int, max_degree: int) -> list[tuple[int, ...]]:
    out = []
    for d in range(max_degree + 1):
        out += multi_indices(dim, d)
    return out


def _inner(u: np.ndarray, v: np.ndarray) -> float:
    return float(np.dot(u, v) / u.size)


def _scaled_monomials(points: np.ndarray, region: Ball, exps) -> np.ndarray:
    # centre and scale the coordinates for conditioning; the span is unchanged
    pts = (points - np.asarray(region.center)) / region.radius
    return np.array([np.prod(pts ** np.asarray(e), axis=1) for e in exps])


def orthonormal_basis(region: Ball, m: int, grid: Grid) -> Basis:
    """Modified Gram-Schmidt with one reorthogonalization pass over graded monomials."""
    if m not in (1, 2, 3):
        raise InvalidArgumentError(f"m must be 1, 2 or 3, got {m}")
    cells = cell_indices(grid, region)
    exps = graded_monomials(grid.dim, m - 1)
    if cells.size < len(exps):
        raise DegenerateBasisError(
            f"{cells.size} cells cannot carry {len(exps)} independent polynomials"
        )
    raw = _scaled_monomials(grid.centers[cells], region, exps)
    k = len(exps)
    basis: list[np.ndarray] = []
    transform = np.zeros((k, k))
    for i, v in enumerate(raw):
        u = v.copy()
        t = np.zeros(k)
        t[i] = 1.0
        norm0 = np.sqrt(_inner(u, u))
        for _ in range(2):
            for j, q in enumerate(basis):
                c = _inner(q, u)
                u -= c * q
                t -= c * transform[j]
        norm = np.sqrt(_inner(u, u))
        if norm <= 1e-10 * max(norm0, 1.0):
            raise DegenerateBasisError(
                f"monomial {exps[i]} is numerically dependent on the ball cells"
            )
        basis.append(u / norm)
        transform[i] = t / norm
    funcs = np.array(basis)
    gram = funcs @ funcs.T / cells.size
    resid = float(np.max(np.abs(gram - np.eye(k))))
    return Basis(region, m, grid, cells, funcs, tuple(exps), transform, resid)


def coefficients(f: GridFunction, basis: Basis) -> np.ndarray:
    if f.grid != basis.grid:
        raise InvalidArgumentError("function and basis live on different grids")
    vals = f.values[basis.cells]
    return basis.functions @ vals / basis.cells.size


def evaluate_basis(basis: Basis, points: np.ndarray) -> np.ndarray:
    """Basis polynomials evaluated at arbitrary points, shape (len(basis), len(points))."""
    return basis.transform @ _scaled_monomials(points, basis.ball, basis.exponents)


def project(f: GridFunction, basis: Basis) -> GridFunction:
    """``sum_r <f, phi_r>_B phi_r`` on the whole grid (the polynomial extends past the ball)."""
    coef = coefficients(f, basis)
    return GridFunction(f.grid, coef @ evaluate_basis(basis, f.grid.centers))


def ball_inner(f: GridFunction, g: GridFunction, region: Ball) -> float:
    idx = cell_indices(f.grid, region)
    return float(np.dot(f.values[idx], g.values[idx]) / idx.size)


def _lp_on_cells(vals: np.ndarray, p: float) -> float:
    return float(np.mean(np.abs(vals) ** p) ** (1.0 / p))


@dataclass(frozen=True)
class BestApproxReport:
    error: float
    competitors: int
    min_competitor_error: float
    optimal: bool
    ratio: float


def best_approx_error(f, region: Ball, m: int, p: float, grid: Grid,
                      n_competitors: int = 50, seed: int = 0,
                      perturbation: float = 0.1) -> BestApproxReport:
    """Normalized ``L^p(B)`` error of ``f - P f`` against random competitor polynomials.

    For ``p = 2`` the projection must beat every competitor (``optimal``); for
    other ``p`` the ratio of the projection error to the best competitor error
    is reported only.
    """
    if not p >= 1:
        raise InvalidArgumentError(f"need p >= 1, got {p}")
    fg = f if isinstance(f, GridFunction) else sample(f, grid)
    basis = orthonormal_basis(region, m, grid)
    coef = coefficients(fg, basis)
    vals = fg.values[basis.cells]
    resid = vals - coef @ basis.functions
    err = _lp_on_cells(resid, p)
    rng = np.random.default_rng(seed)
    scale = perturbation * max(float(np.max(np.abs(coef))), 1.0)
    best = np.inf
    for _ in range(n_competitors):
        c = coef + scale * rng.standard_normal(coef.size)
        best = min(best, _lp_on_cells(vals - c @ basis.functions, p))
    optimal = err <= best * (1 + 1e-12) + 1e-14 if p == 2 else True
    ratio = err / best if best > 0 else (0.0 if err == 0 else np.inf)
    return BestApproxReport(err, n_competitors, float(best), bool(optimal), float(ratio))
