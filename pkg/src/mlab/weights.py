"""Muckenhoupt constants, dual weights and the weighted Sobolev exponents.

Every constant is a maximum over a finite :class:`BallFamily`, hence a lower
bound for the supremum over all balls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CoverageError, InvalidArgumentError
from .lattice import (
    Ball,
    BallFamily,
    Grid,
    GridFunction,
    ball_family,
    cell_indices,
    centred_ball_counts,
    centred_ball_sums,
    family_averages,
    family_maximal,
    spread_max,
)

A1_CAP = 1e6


def sphere_area(n: int) -> float:
    """Surface measure of the unit sphere in R^n (2, 2 pi, 4 pi for n = 1, 2, 3)."""
    return 2.0 * math.pi ** (n / 2) / math.gamma(n / 2)


def unit_ball_volume(n: int) -> float:
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


def conjugate(p: float) -> float:
    if p == 1:
        return math.inf
    return p / (p - 1.0)


@dataclass(frozen=True)
class PowerWeight:
    """``scale * |x|**(delta - dim)``."""

    delta: float
    dim: int
    scale: float = 1.0

    def __post_init__(self) -> None:
        if not self.delta > 0:
            raise InvalidArgumentError(f"power weight needs delta > 0, got {self.delta}")
        if self.dim not in (1, 2, 3):
            raise InvalidArgumentError(f"dim must be 1, 2 or 3, got {self.dim}")
        if not self.scale > 0:
            raise InvalidArgumentError(f"weight scale must be positive, got {self.scale}")

    @property
    def exponent(self) -> float:
        return self.delta - self.dim

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        r = np.sqrt(np.sum(np.atleast_2d(points) ** 2, axis=1))
        if self.exponent == 0:
            return np.full(len(r), self.scale)
        if self.exponent < 0 and np.any(r == 0):
            raise InvalidArgumentError("power weight is singular at a sample point at the origin")
        return self.scale * r**self.exponent


@dataclass(frozen=True)
class SampledWeight:
    """Strictly positive weight stored on a grid."""

    function: GridFunction

    def __post_init__(self) -> None:
        if not np.all(self.function.values > 0):
            raise InvalidArgumentError("sampled weight must be strictly positive")

    @property
    def dim(self) -> int:
        return self.function.grid.dim


Weight = PowerWeight | SampledWeight


def unit_weight(grid: Grid) -> SampledWeight:
    return SampledWeight(GridFunction(grid, np.ones(grid.n_cells)))


def sampled_weight(grid: Grid, values) -> SampledWeight:
    return SampledWeight(GridFunction(grid, values))


def weight_values(w: Weight, grid: Grid) -> np.ndarray:
    """Weight sampled at the cell centers of ``grid``."""
    if isinstance(w, PowerWeight):
        if w.dim != grid.dim:
            raise InvalidArgumentError(f"weight dimension {w.dim} vs grid dimension {grid.dim}")
        return w.evaluate(grid.centers)
    if w.function.grid != grid:
        raise InvalidArgumentError("sampled weight lives on a different grid")
    return np.asarray(w.function.values)


def scaled_weight(w: Weight, c: float) -> Weight:
    if isinstance(w, PowerWeight):
        return PowerWeight(w.delta, w.dim, w.scale * c)
    return SampledWeight(w.function * c)


def _positive_values(w: Weight, grid: Grid) -> np.ndarray:
    vals = weight_values(w, grid)
    if not np.all(vals > 0):
        raise InvalidArgumentError("weight must be strictly positive on the grid")
    return vals


def weight_mass(w: Weight, region: Ball, grid: Grid | None = None) -> float:
    """``w(B)``; closed form for origin-centred balls and power weights."""
    if isinstance(w, PowerWeight) and region.metric == "euclidean" and not any(region.center):
        return w.scale * sphere_area(w.dim) * region.radius**w.delta / w.delta
    if grid is None:
        if isinstance(w, SampledWeight):
            grid = w.function.grid
        else:
            raise InvalidArgumentError("off-origin power-weight masses need a grid")
    idx = cell_indices(grid, region)
    return float(np.sum(weight_values(w, grid)[idx]) * grid.cell_volume)


def _grid_of(w: Weight, family: BallFamily) -> Grid:
    if isinstance(w, SampledWeight) and w.function.grid != family.grid:
        raise InvalidArgumentError("weight and family live on different grids")
    return family.grid


def ap_ball_values(w: Weight, p: float, family: BallFamily) -> np.ndarray:
    """Per-ball A_p quantities ``avg(w) * avg(w**(1-p'))**(p-1)``, shape (radii, centers)."""
    if not p > 1:
        raise InvalidArgumentError(f"A_p needs p > 1 (use a1_constant for p = 1), got {p}")
    grid = _grid_of(w, family)
    vals = _positive_values(w, grid)
    # normalise by the maximum; the per-ball quantity is scale invariant
    vals = vals / np.max(vals)
    dual = vals ** (1.0 - conjugate(p))
    centers = family.center_indices
    out = np.empty((len(family.radii), len(centers)))
    for k, r in enumerate(family.radii):
        counts = centred_ball_counts(grid, r, family.metric)[centers]
        aw = centred_ball_sums(grid, vals, r, family.metric)[centers] / counts
        ad = centred_ball_sums(grid, dual, r, family.metric)[centers] / counts
        out[k] = aw * ad ** (p - 1.0)
    return out


def ap_constant(w: Weight, p: float, family: BallFamily) -> float:
    """``[w]_{A_p}`` over the family."""
    return float(np.max(ap_ball_values(w, p, family)))


def a1_ratio(w: Weight, family: BallFamily) -> np.ndarray:
    grid = _grid_of(w, family)
    vals = _positive_values(w, grid)
    mw = family_maximal(vals, family)
    if np.any(np.isinf(mw)):
        cell = grid.unravel(int(np.flatnonzero(np.isinf(mw))[0]))
        raise CoverageError(f"cell {cell} is contained in no family ball")
    return mw / vals


def a1_constant(w: Weight, family: BallFamily) -> float:
    """``max_x Mw(x) / w(x)`` with M taken over the family."""
    return float(np.max(a1_ratio(w, family)))


@dataclass(frozen=True)
class A1Estimate:
    value: float
    cap: float
    exceeds_cap: bool


def a1_check(w: Weight, family: BallFamily, cap: float = A1_CAP) -> A1Estimate:
    """A_1 estimate flagged when it exceeds ``cap`` (the weight is then treated as non-A_1)."""
    value = a1_constant(w, family)
    return A1Estimate(value, cap, value > cap)


def ainf_ball_values(w: Weight, family: BallFamily) -> np.ndarray:
    """Per-ball Fujii-Wilson quantities ``(1/w(B)) sum_B M_B(w 1_B)``.

    ``M_B`` maximizes over the family balls contained in ``B``, so it includes
    ``B`` itself and every value is at least 1.
    """
    grid = _grid_of(w, family)
    vals = _positive_values(w, grid)
    vals = vals / np.max(vals)
    metric = family.metric
    radii = family.radii
    centers = family.center_indices
    pts = grid.centers
    avgs = {r: a for r, a in family_averages(vals, family)}
    center_mask = np.zeros(grid.n_cells, dtype=bool)
    center_mask[centers] = True
    out = np.empty((len(radii), len(centers)))
    n = grid.cells_per_axis
    h = grid.spacing
    for j, c in enumerate(centers):
        cpos = pts[c]
        cmulti = np.asarray(np.unravel_index(c, grid.shape))
        for k, big in enumerate(radii):
            # work on the bounding box of B
            span = int(math.ceil(big / h))
            lo = np.maximum(cmulti - span, 0)
            hi = np.minimum(cmulti + span + 1, n)
            box = tuple(slice(a, b) for a, b in zip(lo, hi))
            sub_shape = tuple(b - a for a, b in zip(lo, hi))
            sub_grid_pts = pts.reshape(grid.shape + (grid.dim,))[box].reshape(-1, grid.dim)
            d = sub_grid_pts - cpos
            dist = np.max(np.abs(d), axis=1) if metric == "sup" else np.sqrt(np.sum(d * d, axis=1))
            in_big = dist < big
            box_vals = vals.reshape(grid.shape)[box].reshape(-1)
            box_centers = center_mask.reshape(grid.shape)[box].reshape(-1)
            best = np.full(in_big.size, -np.inf)
            sub = _SubGrid(grid.dim, sub_shape, h)
            for small in radii[: k + 1]:
                # contained balls: |c' - c| + r' <= R
                allowed = box_centers & (dist + small <= big * (1 + 1e-12))
                if not np.any(allowed):
                    continue
                a = avgs[small].reshape(grid.shape)[box].reshape(-1)
                cand = np.where(allowed, a, -np.inf)
                np.maximum(best, spread_max(sub, cand, small, metric), out=best)
            # B itself
            avg_big = avgs[big][c]
            best = np.maximum(best, avg_big)
            out[k, j] = np.sum(best[in_big]) / np.sum(box_vals[in_big])
    return out


@dataclass(frozen=True)
class _SubGrid:
    """Duck-typed grid for a rectangular box of cells (square boxes only in shape checks)."""

    dim: int
    box_shape: tuple[int, ...]
    spacing: float

    @property
    def shape(self) -> tuple[int, ...]:
        return self.box_shape


def ainf_constant(w: Weight, family: BallFamily) -> float:
    """Fujii-Wilson ``[w]_{A_inf}`` over the family."""
    return float(np.max(ainf_ball_values(w, family)))


def dual_weight(w: Weight, r: float) -> Weight:
    """``sigma = w**(1 - r')``."""
    if not r > 1:
        raise InvalidArgumentError(f"dual weight needs r > 1, got {r}")
    e = 1.0 - conjugate(r)
    if isinstance(w, PowerWeight):
        n = w.dim
        return PowerWeight(n + (w.delta - n) * e, n, w.scale**e)
    return SampledWeight(w.function.with_values(w.function.values**e))


# ---------------------------------------------------------------------------
# exponents


@dataclass(frozen=True)
class EllEstimate:
    value: float
    approximate: bool
    trace: tuple = field(default_factory=tuple)


def ell_w(w: Weight, family: BallFamily | None = None, cap: float = 1e3,
          growth_tol: float = 0.5, r_hi: float = 8.0, steps: int = 20) -> EllEstimate:
    """``inf {r >= 1 : w in A_r}``.

    Exact for power weights.  For sampled weights the A_r constant is computed
    on the family and on the family with its smallest radius removed; ``r`` is
    declared admissible when the fine value stays under ``cap`` and exceeds the
    coarse one by at most ``growth_tol`` (relative).  Bisection then locates
    the threshold; the result is flagged approximate and carries the trace.
    """
    if isinstance(w, PowerWeight):
        return EllEstimate(max(w.delta / w.dim, 1.0), False)
    grid = w.function.grid
    if family is None:
        family = ball_family(grid)
    if len(family.radii) < 2:
        raise InvalidArgumentError("ell_w estimation needs at least two radii")
    coarse = BallFamily(family.grid, family.radii[1:], family.center_stride, family.ratio,
                        family.radii[1], family.r_max, family.metric, family.explicit_centers)
    trace = []

    def admissible(r: float) -> bool:
        if r == 1.0:
            fine, crude = a1_constant(w, family), a1_constant(w, coarse)
        else:
            fine, crude = ap_constant(w, r, family), ap_constant(w, r, coarse)
        ok = fine <= cap and fine <= (1 + growth_tol) * crude
        trace.append((r, fine, crude, ok))
        return ok

    lo, hi = 1.0, r_hi
    if admissible(1.0):
        return EllEstimate(1.0, True, tuple(trace))
    if not admissible(hi):
        return EllEstimate(math.inf, True, tuple(trace))
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if admissible(mid):
            hi = mid
        else:
            lo = mid
    return EllEstimate(hi, True, tuple(trace))


@dataclass(frozen=True)
class ExponentContext:
    """Dimension, fractional order and exponents shared by the Riesz estimates."""

    n: int
    alpha: float
    p: float
    r: float
    ainf_sigma: float = 1.0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidArgumentError(f"dimension must be positive, got {self.n}")
        if not 0 < self.alpha < self.n:
            raise InvalidArgumentError(f"alpha must lie in (0, n), got {self.alpha}")
        if not 1 <= self.r <= self.p:
            raise InvalidArgumentError(f"need 1 <= r <= p, got r={self.r}, p={self.p}")
        if not self.p < self.n / self.alpha:
            raise InvalidArgumentError(
                f"need p < n/alpha = {self.n / self.alpha}, got p={self.p}"
            )
        if not self.ainf_sigma >= 1:
            raise InvalidArgumentError(f"A_inf constant must be >= 1, got {self.ainf_sigma}")

    @property
    def tau(self) -> float:
        return float(2 ** (self.n + 1))


def sobolev_exponent_pstar_w(p: float, ell: float, n: int) -> float:
    """``p*_w`` with ``1/p - 1/p*_w = 1/(n ell)``."""
    if not p >= 1:
        raise InvalidArgumentError(f"need p >= 1, got {p}")
    if not p < n * ell:
        raise InvalidArgumentError(f"need p < n * ell = {n * ell}, got {p}")
    return 1.0 / (1.0 / p - 1.0 / (n * ell))


def fractional_sobolev_exponent(n: int, alpha: float, p: float) -> float:
    """``n p / (n - alpha p)``."""
    if not alpha * p < n:
        raise InvalidArgumentError(f"need alpha * p < n, got {alpha * p}")
    return n * p / (n - alpha * p)


def exponent_qr_plain(ctx: ExponentContext) -> float:
    """``q`` with ``1/p - 1/q = (alpha/n) / r``."""
    inv = 1.0 / ctx.p - ctx.alpha / (ctx.n * ctx.r)
    if not inv > 0:
        raise InvalidArgumentError(f"exponent relation gives 1/q = {inv} <= 0")
    return 1.0 / inv


def improved_fraction(ctx: ExponentContext) -> float:
    t = ctx.tau * ctx.ainf_sigma
    return (ctx.alpha / ctx.n) * t / (1.0 + ctx.r * (t - 1.0))


def exponent_qr_improved(ctx: ExponentContext) -> float:
    """``q`` with ``1/p - 1/q = (alpha/n) t / (1 + r (t - 1))``, ``t = tau [sigma]_{A_inf}``."""
    if ctx.r == 1:
        raise InvalidArgumentError("r = 1 has no dual weight; use the fractional Sobolev exponent")
    inv = 1.0 / ctx.p - improved_fraction(ctx)
    if not inv > 0:
        raise InvalidArgumentError(f"exponent relation gives 1/q = {inv} <= 0")
    return 1.0 / inv


def power_weight_ap_model(delta: float, n: int, r: float) -> float:
    """Growth model ``(n^r / delta) ((r-1)/(n r - delta))^(r-1)`` of ``[|x|^(delta-n)]_{A_r}``."""
    if not 0 < delta < n * r:
        raise InvalidArgumentError(f"need 0 < delta < n r, got delta={delta}")
    return n**r / delta * ((r - 1.0) / (n * r - delta)) ** (r - 1.0)


# ---------------------------------------------------------------------------
# reverse Hoelder and the open property


@dataclass(frozen=True)
class ReverseHolderReport:
    eps: float
    ainf_estimate: float
    inflate: float
    max_ratio: float
    passed: bool


def reverse_holder_margin(w: Weight, family: BallFamily, eps_override: float | None = None,
                          inflate: float = 2.0,
                          ainf_estimate: float | None = None) -> ReverseHolderReport:
    """Max over cubes of ``avg(w**(1+eps)) / avg(w)**(1+eps)``; passes iff <= 2."""
    cubes = family.as_cubes()
    grid = _grid_of(w, cubes)
    vals = _positive_values(w, grid)
    vals = vals / np.max(vals)
    if ainf_estimate is None:
        ainf_estimate = ainf_constant(w, cubes)
    if eps_override is None:
        eps = 1.0 / (2 ** (grid.dim + 1) * inflate * ainf_estimate - 1.0)
    else:
        eps = float(eps_override)
    if not eps > 0:
        raise InvalidArgumentError(f"reverse Hoelder exponent must be positive, got {eps}")
    powered = vals ** (1.0 + eps)
    worst = 0.0
    centers = cubes.center_indices
    for r in cubes.radii:
        counts = centred_ball_counts(grid, r, "sup")[centers]
        a1 = centred_ball_sums(grid, vals, r, "sup")[centers] / counts
        a2 = centred_ball_sums(grid, powered, r, "sup")[centers] / counts
        worst = max(worst, float(np.max(a2 / a1 ** (1.0 + eps))))
    return ReverseHolderReport(eps, float(ainf_estimate), float(inflate), worst, worst <= 2.0)


@dataclass(frozen=True)
class OpenPropertyReport:
    eps: float
    ainf_dual: float
    lhs_constant: float
    rhs_bound: float
    holds: bool


def open_property(w: Weight, p: float, family: BallFamily, inflate: float = 2.0,
                  ainf_dual: float | None = None) -> OpenPropertyReport:
    """Check ``[w]_{A_{p-eps}} <= 2^(p-1) [w]_{A_p}`` for ``eps = (p-1)/(tau [sigma]_{A_inf})``."""
    if not p > 1:
        raise InvalidArgumentError(f"open property needs p > 1, got {p}")
    sigma = dual_weight(w, p)
    if ainf_dual is None:
        ainf_dual = ainf_constant(sigma, family)
    tau = 2.0 ** (family.grid.dim + 1)
    eps = (p - 1.0) / (tau * inflate * ainf_dual)
    lhs = ap_constant(w, p - eps, family)
    rhs = 2.0 ** (p - 1.0) * ap_constant(w, p, family)
    return OpenPropertyReport(eps, float(ainf_dual), lhs, rhs, lhs <= rhs)
