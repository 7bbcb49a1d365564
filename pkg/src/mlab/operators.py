"""Maximal functions, Riesz potentials, derivative magnitudes and Gagliardo seminorms."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import signal

from .errors import CoverageError, InvalidArgumentError
from .lattice import (
    Ball,
    BallFamily,
    Grid,
    GridFunction,
    Sampled,
    cell_indices,
    family_maximal,
    multi_indices,
    sample,
)
from .weights import Weight, sphere_area, unit_ball_volume, weight_values


@dataclass(frozen=True)
class KernelQuadrature:
    """Quadrature of the kernel ``|x - y|**(alpha - n)``.

    The self cell is replaced by the ball of equal volume, where the kernel
    integrates in closed form.  Source cells within ``2h`` of the target are
    split into ``near_diagonal_refine**n`` sub-cells.
    """

    alpha: float
    near_diagonal_refine: int = 4
    diagonal_rule: str = "equal-volume-ball"

    def __post_init__(self) -> None:
        if not self.alpha > 0:
            raise InvalidArgumentError(f"alpha must be positive, got {self.alpha}")
        if self.near_diagonal_refine < 1:
            raise InvalidArgumentError("near_diagonal_refine must be >= 1")
        if self.diagonal_rule != "equal-volume-ball":
            raise InvalidArgumentError(f"unknown diagonal rule {self.diagonal_rule!r}")


def equal_volume_radius(h: float, n: int) -> float:
    """Radius of the ball whose volume is ``h**n``."""
    return (h**n / unit_ball_volume(n)) ** (1.0 / n)


def _sub_offsets(n: int, s: int, h: float) -> np.ndarray:
    ax = ((np.arange(s) + 0.5) / s - 0.5) * h
    mesh = np.meshgrid(*([ax] * n), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _check_coverage(grid: Grid, values: np.ndarray) -> None:
    bad = np.flatnonzero(np.isinf(values))
    if bad.size:
        cell = grid.unravel(int(bad[0]))
        raise CoverageError(
            f"cell {cell} at {grid.centers[bad[0]].tolist()} is contained in no family ball"
        )


def maximal(f: GridFunction, family: BallFamily) -> GridFunction:
    """Hardy-Littlewood maximal function over the family."""
    if f.grid != family.grid:
        raise InvalidArgumentError("function and family live on different grids")
    out = family_maximal(np.abs(f.values), family)
    _check_coverage(f.grid, out)
    return f.with_values(out)


def fractional_maximal(f: GridFunction, alpha: float, family: BallFamily) -> GridFunction:
    """``M_alpha f(x) = max r(B)**alpha * avg_B |f|`` over family balls containing x."""
    if not 0 <= alpha < f.grid.dim:
        raise InvalidArgumentError(f"alpha must lie in (0, n), got {alpha}")
    if f.grid != family.grid:
        raise InvalidArgumentError("function and family live on different grids")
    out = family_maximal(np.abs(f.values), family, alpha)
    _check_coverage(f.grid, out)
    return f.with_values(out)


@lru_cache(maxsize=16)
def _riesz_kernel(dim: int, n_cells: int, h: float, alpha: float, refine: int) -> np.ndarray:
    """Kernel weights on integer offsets ``-(N-1)..N-1`` per axis."""
    ax = np.arange(-(n_cells - 1), n_cells) * h
    mesh = np.meshgrid(*([ax] * dim), indexing="ij")
    dist = np.sqrt(sum(m * m for m in mesh))
    with np.errstate(divide="ignore"):
        kern = h**dim * dist ** (alpha - dim)
    centre = (n_cells - 1,) * dim
    if refine > 1:
        sub = _sub_offsets(dim, refine, h)
        for off in itertools.product(range(-2, 3), repeat=dim):
            if 0 < sum(o * o for o in off) <= 4:
                y = np.asarray(off, dtype=float) * h + sub
                r = np.sqrt(np.sum(y * y, axis=1))
                kern[tuple(c + o for c, o in zip(centre, off))] = np.sum(
                    r ** (alpha - dim)
                ) * (h / refine) ** dim
    rho = equal_volume_radius(h, dim)
    kern[centre] = sphere_area(dim) * rho**alpha / alpha
    kern.flags.writeable = False
    return kern


# above this many multiply-adds the kernel sum goes through a zero-padded FFT;
# the padding makes it the same linear convolution, only rounding differs
DIRECT_LIMIT = 2e8


def riesz(f: GridFunction, alpha: float, quad: KernelQuadrature | None = None,
          targets: np.ndarray | None = None, method: str = "auto") -> GridFunction | np.ndarray:
    """Riesz potential ``I_alpha f`` by summation against the cell kernel (f extended by zero).

    With ``targets`` (flat cell indices) only those values are returned.
    ``method`` is "direct", "fft" or "auto" (by cost).
    """
    if method not in ("auto", "direct", "fft"):
        raise InvalidArgumentError(f"unknown method {method!r}")
    grid = f.grid
    n = grid.dim
    if not 0 < alpha < n:
        raise InvalidArgumentError(f"alpha must lie in (0, {n}), got {alpha}")
    if quad is None:
        quad = KernelQuadrature(alpha)
    elif quad.alpha != alpha:
        raise InvalidArgumentError("quadrature built for a different alpha")
    kern = _riesz_kernel(n, grid.cells_per_axis, grid.spacing, alpha, quad.near_diagonal_refine)
    vals = f.values.reshape(grid.shape)
    big = grid.cells_per_axis - 1
    cost = float(grid.n_cells) * (2 * big + 1) ** n
    if method == "auto":
        n_t = grid.n_cells if targets is None else len(targets)
        method = "direct" if cost * n_t / grid.n_cells <= DIRECT_LIMIT else "fft"
    if method == "fft":
        full = signal.fftconvolve(vals, kern, mode="full")
        sl = tuple(slice(big, big + grid.cells_per_axis) for _ in range(n))
        out = full[sl].reshape(-1)
        return f.with_values(out) if targets is None else out[np.asarray(targets, dtype=int)]
    if targets is not None:
        out = np.empty(len(targets))
        for k, t in enumerate(np.asarray(targets, dtype=int)):
            mi = np.unravel_index(t, grid.shape)
            window = tuple(slice(big - i, big - i + grid.cells_per_axis) for i in mi)
            out[k] = np.sum(kern[window] * vals)
        return out
    full = signal.convolve(vals, kern, mode="full", method="direct")
    sl = tuple(slice(big, big + grid.cells_per_axis) for _ in range(n))
    return f.with_values(full[sl].reshape(-1))


# ---------------------------------------------------------------------------
# derivatives


def _finite_gradient(f: GridFunction) -> list[np.ndarray]:
    g = f.grid
    arr = f.values.reshape(g.shape)
    grads = np.gradient(arr, g.spacing, edge_order=1)
    if g.dim == 1:
        grads = [grads]
    return list(grads)


def gradient_magnitude(spec, grid: Grid) -> GridFunction:
    """Euclidean ``|grad f|`` at the cell centers."""
    if isinstance(spec, (Sampled, GridFunction)):
        f = sample(spec, grid)
        grads = _finite_gradient(f)
        return f.with_values(np.sqrt(sum(d * d for d in grads)).reshape(-1))
    return GridFunction(grid, spec.gradient_magnitude(grid.centers))


def highorder_magnitude(spec, m: int, grid: Grid) -> GridFunction:
    """``sum over |a| = m of |D^a f|`` at the cell centers."""
    if m not in (1, 2):
        raise InvalidArgumentError(f"derivative order must be 1 or 2, got {m}")
    if isinstance(spec, (Sampled, GridFunction)):
        f = sample(spec, grid)
        first = _finite_gradient(f)
        if m == 1:
            return f.with_values(sum(np.abs(d) for d in first).reshape(-1))
        total = np.zeros(grid.shape)
        for a in multi_indices(grid.dim, 2):
            i, j = [k for k, e in enumerate(a) for _ in range(e)]
            second = np.gradient(first[i], grid.spacing, axis=j, edge_order=1)
            total += np.abs(second)
        return f.with_values(total.reshape(-1))
    return GridFunction(grid, spec.highorder(grid.centers, m))


# ---------------------------------------------------------------------------
# Gagliardo seminorms


def angular_cos_moment(p: float, n: int) -> float:
    """Mean of ``|cos theta|**p`` over the unit sphere of R^n."""
    if n == 1:
        return 1.0
    return math.exp(
        math.lgamma(n / 2) + math.lgamma((p + 1) / 2) - 0.5 * math.log(math.pi)
        - math.lgamma((n + p) / 2)
    )


def _point_evaluator(spec, grid: Grid):
    if isinstance(spec, (Sampled, GridFunction)):
        f = sample(spec, grid)

        def lookup(points: np.ndarray) -> np.ndarray:
            k = np.floor((points + grid.half_extent) / grid.spacing).astype(int)
            k = np.clip(k, 0, grid.cells_per_axis - 1)
            return f.values[np.ravel_multi_index(tuple(k.T), grid.shape)]

        return lookup
    return spec.evaluate


def gagliardo_rows(spec, p: float, delta: float, region: Ball, grid: Grid,
                   refine: int = 4, chunk: int = 2**22) -> tuple[np.ndarray, np.ndarray]:
    """Per outer cell ``x`` in ``region``: ``h^n * sum_y |f(x)-f(y)|^p / |x-y|^(n+delta p) h^n``.

    Returns ``(cell_indices, row_sums)``.  Pairs within ``2h`` are split into
    ``refine**n`` sub-cells each; the self pair uses the linearization of ``f``
    at the cell center integrated over the equal-volume ball.
    """
    if not 0 < delta < 1:
        raise InvalidArgumentError(f"delta must lie in (0, 1), got {delta}")
    if not p >= 1:
        raise InvalidArgumentError(f"need p >= 1, got {p}")
    n = grid.dim
    h = grid.spacing
    vol = grid.cell_volume
    idx = cell_indices(grid, region)
    pts = grid.centers[idx]
    vals = sample(spec, grid).values[idx]
    m = len(idx)
    power = n + delta * p
    rows = np.zeros(m)
    cutoff = 2.0 * h * (1 + 1e-9)
    step = max(1, chunk // max(m, 1))
    for start in range(0, m, step):
        stop = min(m, start + step)
        d = pts[start:stop, None, :] - pts[None, :, :]
        dist = np.sqrt(np.sum(d * d, axis=2))
        diff = np.abs(vals[start:stop, None] - vals[None, :])
        far = dist > cutoff
        safe = np.where(far, dist, 1.0)
        term = np.where(far, diff**p / safe**power, 0.0)
        rows[start:stop] = term.sum(axis=1)
    rows *= vol * vol

    # near pairs on the sub-cell grid
    pos = np.full(grid.n_cells, -1)
    pos[idx] = np.arange(m)
    multi = np.stack(np.unravel_index(idx, grid.shape), axis=1)
    evaluate = _point_evaluator(spec, grid)
    s = max(int(refine), 1)
    sub = _sub_offsets(n, s, h)
    sub_vol = (h / s) ** n
    fx = evaluate((pts[:, None, :] + sub[None, :, :]).reshape(-1, n)).reshape(m, -1)
    for off in itertools.product(range(-2, 3), repeat=n):
        if not 0 < sum(o * o for o in off) <= 4:
            continue
        nb = multi + np.asarray(off)
        ok = np.all((nb >= 0) & (nb < grid.cells_per_axis), axis=1)
        src = np.flatnonzero(ok)
        tgt = pos[np.ravel_multi_index(tuple(nb[ok].T), grid.shape)]
        keep = tgt >= 0
        src, tgt = src[keep], tgt[keep]
        if src.size == 0:
            continue
        shift = np.asarray(off, dtype=float) * h
        # displacement between sub-points a of x and b of y
        disp = shift[None, None, :] + sub[None, :, :] - sub[:, None, :]
        dist = np.sqrt(np.sum(disp * disp, axis=2))
        kern = dist ** (-power)
        diff = np.abs(fx[src][:, :, None] - fx[tgt][:, None, :]) ** p
        rows[src] += np.einsum("kab,ab->k", diff, kern) * sub_vol * sub_vol

    # self pairs
    grad = _cell_gradient(spec, grid)[idx]
    rho = equal_volume_radius(h, n)
    a = p * (1.0 - delta)
    self_term = angular_cos_moment(p, n) * sphere_area(n) * rho**a / a
    rows += vol * grad**p * self_term
    return idx, rows


def _cell_gradient(spec, grid: Grid) -> np.ndarray:
    return gradient_magnitude(spec, grid).values


def gagliardo(spec, p: float, delta: float, region: Ball, grid: Grid, refine: int = 4) -> float:
    """``int_B int_B |f(x)-f(y)|^p / |x-y|^(n + delta p) dy dx`` (unnormalized)."""
    _, rows = gagliardo_rows(spec, p, delta, region, grid, refine)
    return float(np.sum(rows))


def weighted_gagliardo(spec, p: float, delta: float, region: Ball, w: Weight, grid: Grid,
                       refine: int = 4) -> float:
    """Gagliardo double integral with outer weight ``w(x)``, divided by ``w(B)``."""
    idx, rows = gagliardo_rows(spec, p, delta, region, grid, refine)
    wv = weight_values(w, grid)[idx]
    return float(np.sum(wv * rows) / (np.sum(wv) * grid.cell_volume))
