"""Cell-centered lattices, balls and midpoint quadrature.

Every integral in the package is a midpoint sum over the cells of a uniform
grid on ``[-L, L]^dim``.  A ball owns the cells whose centers lie strictly
inside it.
"""

from __future__ import annotations

import itertools
import math
import struct
from dataclasses import dataclass, replace
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.ndimage import maximum_filter1d

from .errors import EmptyRegionError, InvalidArgumentError


@dataclass(frozen=True, eq=False)
class Grid:
    """Uniform cell-centered lattice over ``[-half_extent, half_extent]^dim``."""

    dim: int
    half_extent: float
    cells_per_axis: int

    def __post_init__(self) -> None:
        if self.dim not in (1, 2, 3):
            raise InvalidArgumentError(f"dim must be 1, 2 or 3, got {self.dim}")
        if not self.half_extent > 0:
            raise InvalidArgumentError(f"half_extent must be positive, got {self.half_extent}")
        if int(self.cells_per_axis) != self.cells_per_axis or self.cells_per_axis < 2:
            raise InvalidArgumentError(
                f"cells_per_axis must be an integer >= 2, got {self.cells_per_axis}"
            )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Grid):
            return NotImplemented
        return (self.dim, self.half_extent, self.cells_per_axis) == (
            other.dim,
            other.half_extent,
            other.cells_per_axis,
        )

    def __hash__(self) -> int:
        return hash((self.dim, self.half_extent, self.cells_per_axis))

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_extent / self.cells_per_axis

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dim

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.cells_per_axis,) * self.dim

    @property
    def n_cells(self) -> int:
        return self.cells_per_axis**self.dim

    @cached_property
    def axis_centers(self) -> np.ndarray:
        k = np.arange(self.cells_per_axis, dtype=float)
        return -self.half_extent + (k + 0.5) * self.spacing

    @cached_property
    def centers(self) -> np.ndarray:
        """Cell centers, shape ``(n_cells, dim)``, lexicographic order."""
        axes = [self.axis_centers] * self.dim
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    @cached_property
    def radii(self) -> np.ndarray:
        """Distance of each cell center to the origin."""
        return np.sqrt(np.sum(self.centers**2, axis=1))

    def unravel(self, flat_index: int) -> tuple[int, ...]:
        return tuple(int(i) for i in np.unravel_index(flat_index, self.shape))

    def refine(self, factor: int = 2) -> "Grid":
        return Grid(self.dim, self.half_extent, self.cells_per_axis * factor)

    def dilate(self, lam: float) -> "Grid":
        return Grid(self.dim, self.half_extent * lam, self.cells_per_axis)


def make_grid(dim: int, half_extent: float, cells_per_axis: int) -> Grid:
    return Grid(int(dim), float(half_extent), int(cells_per_axis))


@dataclass(frozen=True)
class Ball:
    """Euclidean ball; ``metric="sup"`` turns it into an axis-aligned cube."""

    center: tuple[float, ...]
    radius: float
    metric: str = "euclidean"

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", tuple(float(c) for c in np.atleast_1d(self.center)))
        if not self.radius > 0:
            raise InvalidArgumentError(f"ball radius must be positive, got {self.radius}")
        if self.metric not in ("euclidean", "sup"):
            raise InvalidArgumentError(f"unknown metric {self.metric!r}")

    @property
    def dim(self) -> int:
        return len(self.center)

    def dilate(self, lam: float) -> "Ball":
        return Ball(tuple(lam * c for c in self.center), lam * self.radius, self.metric)


def ball(center, radius: float, metric: str = "euclidean") -> Ball:
    return Ball(tuple(np.atleast_1d(np.asarray(center, dtype=float))), float(radius), metric)


def _distances(points: np.ndarray, center: np.ndarray, metric: str) -> np.ndarray:
    d = points - center
    if metric == "sup":
        return np.max(np.abs(d), axis=1)
    return np.sqrt(np.sum(d * d, axis=1))


def cell_mask(grid: Grid, region: Ball) -> np.ndarray:
    """Boolean mask of cells whose centers lie strictly inside ``region``."""
    if region.dim != grid.dim:
        raise InvalidArgumentError(
            f"ball dimension {region.dim} does not match grid dimension {grid.dim}"
        )
    dist = _distances(grid.centers, np.asarray(region.center), region.metric)
    return dist < region.radius


def cell_indices(grid: Grid, region: Ball) -> np.ndarray:
    idx = np.flatnonzero(cell_mask(grid, region))
    if idx.size == 0:
        raise EmptyRegionError(f"no cell center lies inside {region}")
    return idx


@dataclass(frozen=True, eq=False)
class GridFunction:
    """One real value per cell of ``grid`` in lexicographic order."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float).reshape(-1)
        if vals.size != self.grid.n_cells:
            raise InvalidArgumentError(
                f"expected {self.grid.n_cells} values, got {vals.size}"
            )
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def with_values(self, values) -> "GridFunction":
        return GridFunction(self.grid, values)

    def __add__(self, other: "GridFunction") -> "GridFunction":
        _same_grid(self.grid, other.grid)
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        _same_grid(self.grid, other.grid)
        return self.with_values(self.values - other.values)

    def __mul__(self, c: float) -> "GridFunction":
        return self.with_values(c * self.values)

    __rmul__ = __mul__

    def __abs__(self) -> "GridFunction":
        return self.with_values(np.abs(self.values))

    def at(self, point) -> float:
        """Value of the cell containing ``point``."""
        g = self.grid
        pt = np.atleast_1d(np.asarray(point, dtype=float))
        k = np.floor((pt + g.half_extent) / g.spacing).astype(int)
        if np.any(k < 0) or np.any(k >= g.cells_per_axis):
            raise InvalidArgumentError(f"point {point} lies outside the grid")
        return float(self.values[np.ravel_multi_index(tuple(k), g.shape)])


def _same_grid(a: Grid, b: Grid) -> None:
    if a != b:
        raise InvalidArgumentError(f"grid mismatch: {a} vs {b}")


def integrate(f: GridFunction, region: Ball, grid: Grid | None = None) -> float:
    if grid is not None:
        _same_grid(f.grid, grid)
    idx = cell_indices(f.grid, region)
    return float(np.sum(f.values[idx]) * f.grid.cell_volume)


def measure(grid: Grid, region: Ball) -> float:
    """Discretized Lebesgue measure of ``region``."""
    return cell_indices(grid, region).size * grid.cell_volume


def average(f: GridFunction, region: Ball) -> float:
    vals = f.values[cell_indices(f.grid, region)]
    if np.all(vals == vals[0]):
        return float(vals[0])
    return float(np.mean(vals))


# ---------------------------------------------------------------------------
# ball families


@dataclass(frozen=True)
class BallFamily:
    """Finite family of balls centred at every ``stride``-th cell center."""

    grid: Grid
    radii: tuple[float, ...]
    center_stride: int
    ratio: float
    r_min: float
    r_max: float
    metric: str = "euclidean"
    explicit_centers: tuple[int, ...] | None = None

    @cached_property
    def center_indices(self) -> np.ndarray:
        if self.explicit_centers is not None:
            return np.asarray(self.explicit_centers, dtype=int)
        axis = np.arange(0, self.grid.cells_per_axis, self.center_stride)
        mesh = np.meshgrid(*([axis] * self.grid.dim), indexing="ij")
        multi = tuple(m.ravel() for m in mesh)
        return np.ravel_multi_index(multi, self.grid.shape)

    @property
    def center_mask(self) -> np.ndarray:
        mask = np.zeros(self.grid.n_cells, dtype=bool)
        mask[self.center_indices] = True
        return mask

    @property
    def balls(self) -> list[Ball]:
        centers = self.grid.centers[self.center_indices]
        return [Ball(tuple(c), r, self.metric) for c in centers for r in self.radii]

    def __len__(self) -> int:
        return len(self.center_indices) * len(self.radii)

    def provenance(self) -> dict:
        return {
            "center_stride": self.center_stride,
            "ratio": self.ratio,
            "r_min": self.r_min,
            "r_max": self.r_max,
            "n_radii": len(self.radii),
            "metric": self.metric,
        }

    def as_cubes(self) -> "BallFamily":
        return replace(self, metric="sup")

    def on_grid(self, grid: Grid) -> "BallFamily":
        """Same ladder on another grid (centers recomputed from the stride)."""
        return replace(self, grid=grid, explicit_centers=None)


def single_ball_family(grid: Grid, center_index: int, radius: float,
                       metric: str = "euclidean") -> BallFamily:
    """Family holding one ball centred at the cell ``center_index``."""
    return BallFamily(grid, (float(radius),), 1, 2.0, float(radius), float(radius), metric,
                      (int(center_index),))


def ball_family(
    grid: Grid,
    ratio: float = 2.0**0.25,
    r_min: float | None = None,
    r_max: float | None = None,
    center_stride: int = 1,
    metric: str = "euclidean",
) -> BallFamily:
    """Balls centred at every ``center_stride``-th cell with radii ``r_min * ratio**k``."""
    if r_min is None:
        r_min = 2.0 * grid.spacing
    if r_max is None:
        r_max = 2.0 * grid.half_extent
    if not ratio > 1:
        raise InvalidArgumentError(f"ladder ratio must exceed 1, got {ratio}")
    if not 0 < r_min <= r_max:
        raise InvalidArgumentError(f"need 0 < r_min <= r_max, got {r_min}, {r_max}")
    if r_max > 2.0 * grid.half_extent * (1 + 1e-12):
        raise InvalidArgumentError(f"r_max {r_max} exceeds the grid diameter")
    if int(center_stride) != center_stride or center_stride < 1:
        raise InvalidArgumentError(f"center_stride must be a positive integer, got {center_stride}")
    radii = []
    r = float(r_min)
    while r <= r_max * (1 + 1e-12):
        radii.append(r)
        r *= ratio
    return BallFamily(grid, tuple(radii), int(center_stride), float(ratio), float(r_min),
                      float(r_max), metric)


def _row_half_widths(grid: Grid, radius: float, metric: str):
    """Decompose a cell-centred ball into rows along the last axis.

    Yields ``(offset, k)`` where ``offset`` is an integer offset in the leading
    axes and the row covers last-axis offsets ``-k..k``.
    """
    h = grid.spacing
    kmax = int(math.ceil(radius / h))
    lead = grid.dim - 1
    for off in itertools.product(range(-kmax, kmax + 1), repeat=lead):
        o = np.asarray(off, dtype=float) * h
        if metric == "sup":
            if lead and np.max(np.abs(o)) >= radius:
                continue
            rest = radius
        else:
            rest2 = radius * radius - float(np.sum(o * o))
            if rest2 <= 0:
                continue
            rest = math.sqrt(rest2)
        # largest k with k*h < rest
        k = int(math.ceil(rest / h)) - 1
        while (k + 1) * h < rest:
            k += 1
        while k >= 0 and k * h >= rest:
            k -= 1
        if k < 0:
            continue
        yield off, k


def _shift(arr: np.ndarray, off: tuple[int, ...]) -> np.ndarray:
    """``out[i] = arr[i + off]`` on the leading axes, zero outside."""
    out = np.zeros_like(arr)
    src, dst = [], []
    for o, n in zip(off, arr.shape):
        if o >= 0:
            src.append(slice(o, n))
            dst.append(slice(0, n - o))
        else:
            src.append(slice(0, n + o))
            dst.append(slice(-o, n))
    src.append(slice(None))
    dst.append(slice(None))
    out[tuple(dst)] = arr[tuple(src)]
    return out


def centred_ball_sums(grid: Grid, values: np.ndarray, radius: float,
                      metric: str = "euclidean") -> np.ndarray:
    """Sum of ``values`` over the ball of ``radius`` around every cell center.

    Balls are truncated to the grid.  Rows of the ball are summed with
    extended-precision prefix sums, so the cost is independent of the number
    of cells per row.  Returns a flat array aligned with the cell order.
    """
    n = grid.cells_per_axis
    arr = np.asarray(values, dtype=np.longdouble).reshape(grid.shape)
    prefix = np.concatenate(
        [np.zeros(arr.shape[:-1] + (1,), dtype=np.longdouble), np.cumsum(arr, axis=-1)], axis=-1
    )
    idx = np.arange(n)
    total = np.zeros(grid.shape, dtype=np.longdouble)
    row_cache: dict[int, np.ndarray] = {}
    for off, k in _row_half_widths(grid, radius, metric):
        if k not in row_cache:
            lo = np.clip(idx - k, 0, n)
            hi = np.clip(idx + k + 1, 0, n)
            row_cache[k] = prefix[..., hi] - prefix[..., lo]
        total += _shift(row_cache[k], off) if off else row_cache[k]
    return np.asarray(total, dtype=float).reshape(-1)


def centred_ball_counts(grid: Grid, radius: float, metric: str = "euclidean") -> np.ndarray:
    return centred_ball_sums(grid, np.ones(grid.n_cells), radius, metric)


def ball_stencil(grid: Grid, radius: float, metric: str = "euclidean") -> np.ndarray:
    """Boolean footprint of integer offsets ``o`` with ``|o h| < radius``."""
    h = grid.spacing
    kmax = int(math.ceil(radius / h))
    ax = np.arange(-kmax, kmax + 1) * h
    mesh = np.meshgrid(*([ax] * grid.dim), indexing="ij")
    if metric == "sup":
        dist = np.max(np.abs(np.stack(mesh)), axis=0)
    else:
        dist = np.sqrt(sum(m * m for m in mesh))
    return dist < radius


def _running_max_rows(arr: np.ndarray, k: int) -> np.ndarray:
    return maximum_filter1d(arr, size=2 * k + 1, axis=-1, mode="constant", cval=-np.inf)


def _shift_fill(arr: np.ndarray, off: tuple[int, ...], fill: float) -> np.ndarray:
    out = np.full_like(arr, fill)
    src, dst = [], []
    for o, n in zip(off, arr.shape):
        if o >= 0:
            src.append(slice(o, n))
            dst.append(slice(0, n - o))
        else:
            src.append(slice(0, n + o))
            dst.append(slice(-o, n))
    out[tuple(dst)] = arr[tuple(src)]
    return out


def spread_max(grid: Grid, values: np.ndarray, radius: float,
               metric: str = "euclidean") -> np.ndarray:
    """``out[x] = max{values[c] : |x - c| < radius}`` over cell centers ``c``.

    Entries equal to ``-inf`` act as absent centers.
    """
    arr = np.asarray(values, dtype=float).reshape(grid.shape)
    out = np.full(grid.shape, -np.inf)
    row_cache: dict[int, np.ndarray] = {}
    for off, k in _row_half_widths(grid, radius, metric):
        if k not in row_cache:
            row_cache[k] = _running_max_rows(arr, k)
        shifted = _shift_fill(row_cache[k], off, -np.inf) if off else row_cache[k]
        np.maximum(out, shifted, out=out)
    return out.reshape(-1)


def family_averages(values: np.ndarray, family: BallFamily):
    """Yield ``(radius, averages)`` with averages over every family ball of that radius.

    ``averages`` is a full-grid array, ``nan`` away from the family centers.
    """
    grid = family.grid
    centers = family.center_indices
    for r in family.radii:
        sums = centred_ball_sums(grid, values, r, family.metric)
        counts = centred_ball_counts(grid, r, family.metric)
        avg = np.full(grid.n_cells, np.nan)
        avg[centers] = sums[centers] / counts[centers]
        yield r, avg


def family_maximal(values: np.ndarray, family: BallFamily, alpha: float = 0.0) -> np.ndarray:
    """Per cell, max over family balls containing it of ``r**alpha * average``.

    Cells covered by no ball are returned as ``-inf``.
    """
    grid = family.grid
    best = np.full(grid.n_cells, -np.inf)
    for r, avg in family_averages(values, family):
        scaled = np.where(np.isnan(avg), -np.inf, avg * r**alpha)
        np.maximum(best, spread_max(grid, scaled, r, family.metric), out=best)
    return best


# ---------------------------------------------------------------------------
# analytic function specifications


def _radius(points: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(np.atleast_2d(points) ** 2, axis=1))


@dataclass(frozen=True)
class Bump:
    """Radial plateau: 1 on ``B(0, eps)``, 0 outside ``B(0, 2 eps)``, affine in between."""

    eps: float

    def __post_init__(self) -> None:
        if not self.eps > 0:
            raise InvalidArgumentError(f"bump width must be positive, got {self.eps}")

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        r = _radius(points)
        return np.clip(2.0 - r / self.eps, 0.0, 1.0)

    def gradient_magnitude(self, points: np.ndarray) -> np.ndarray:
        r = _radius(points)
        return np.where((r > self.eps) & (r < 2 * self.eps), 1.0 / self.eps, 0.0)

    def highorder(self, points: np.ndarray, m: int) -> np.ndarray:
        if m == 1:
            return _l1_gradient(self, points)
        raise InvalidArgumentError("Bump has no classical second derivatives")


@dataclass(frozen=True)
class Cone:
    """``max(0, 1 - slope |x|)``."""

    slope: float

    def __post_init__(self) -> None:
        if not self.slope > 0:
            raise InvalidArgumentError(f"cone slope must be positive, got {self.slope}")

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        return np.maximum(0.0, 1.0 - self.slope * _radius(points))

    def gradient_magnitude(self, points: np.ndarray) -> np.ndarray:
        r = _radius(points)
        return np.where(r < 1.0 / self.slope, self.slope, 0.0)

    def highorder(self, points: np.ndarray, m: int) -> np.ndarray:
        if m == 1:
            return _l1_gradient(self, points)
        raise InvalidArgumentError("Cone has no classical second derivatives")


def _radial_unit(points: np.ndarray) -> np.ndarray:
    pts = np.atleast_2d(points)
    r = _radius(pts)
    safe = np.where(r > 0, r, 1.0)
    return pts / safe[:, None]


def _l1_gradient(spec, points: np.ndarray) -> np.ndarray:
    """Sum of |partial_i f| for a radial profile with known |grad f|."""
    u = _radial_unit(points)
    return spec.gradient_magnitude(points) * np.sum(np.abs(u), axis=1)


@dataclass(frozen=True)
class Gaussian:
    """``exp(-|x|^2 / (2 width^2))`` with peak value 1."""

    width: float

    def __post_init__(self) -> None:
        if not self.width > 0:
            raise InvalidArgumentError(f"gaussian width must be positive, got {self.width}")

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(points)
        return np.exp(-np.sum(pts**2, axis=1) / (2 * self.width**2))

    def gradient_magnitude(self, points: np.ndarray) -> np.ndarray:
        return _radius(points) / self.width**2 * self.evaluate(points)

    def highorder(self, points: np.ndarray, m: int) -> np.ndarray:
        pts = np.atleast_2d(points)
        s2 = self.width**2
        g = self.evaluate(pts)
        if m == 1:
            return np.sum(np.abs(pts), axis=1) / s2 * g
        if m == 2:
            total = np.zeros(len(pts))
            for a in multi_indices(pts.shape[1], 2):
                i, j = [k for k, e in enumerate(a) for _ in range(e)]
                d = pts[:, i] * pts[:, j] / s2**2 - (1.0 / s2 if i == j else 0.0)
                total += np.abs(d * g)
            return total
        raise InvalidArgumentError(f"unsupported derivative order {m}")


def multi_indices(dim: int, order: int) -> list[tuple[int, ...]]:
    """Multi-indices of total degree ``order``, graded lexicographic (descending)."""
    out = [a for a in itertools.product(range(order, -1, -1), repeat=dim) if sum(a) == order]
    return out


@dataclass(frozen=True)
class Polynomial:
    """Polynomial given by ``((multi_index, coefficient), ...)``."""

    coeffs: tuple[tuple[tuple[int, ...], float], ...]
    degree: int

    def __post_init__(self) -> None:
        terms = tuple((tuple(int(a) for a in idx), float(c)) for idx, c in self.coeffs)
        object.__setattr__(self, "coeffs", terms)
        dims = {len(idx) for idx, _ in terms}
        if len(dims) > 1:
            raise InvalidArgumentError("polynomial terms disagree on dimension")
        actual = max((sum(idx) for idx, c in terms if c != 0), default=0)
        if actual > self.degree:
            raise InvalidArgumentError(
                f"term of degree {actual} exceeds declared degree {self.degree}"
            )

    @classmethod
    def from_1d(cls, coeffs: Sequence[float]) -> "Polynomial":
        terms = tuple(((k,), float(c)) for k, c in enumerate(coeffs))
        return cls(terms, max(len(coeffs) - 1, 0))

    @classmethod
    def monomial(cls, exponents: Sequence[int], coeff: float = 1.0) -> "Polynomial":
        return cls(((tuple(exponents), coeff),), int(sum(exponents)))

    def _check_dim(self, pts: np.ndarray) -> None:
        for idx, _ in self.coeffs:
            if len(idx) != pts.shape[1]:
                raise InvalidArgumentError(
                    f"polynomial of dimension {len(idx)} evaluated in dimension {pts.shape[1]}"
                )

    def derivative(self, direction: Sequence[int]) -> "Polynomial":
        terms = []
        for idx, c in self.coeffs:
            coef = c
            new = []
            for a, d in zip(idx, direction):
                if a < d:
                    coef = 0.0
                    break
                coef *= math.perm(a, d)
                new.append(a - d)
            if coef != 0.0:
                terms.append((tuple(new), coef))
        return Polynomial(tuple(terms), self.degree)

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(points)
        self._check_dim(pts)
        out = np.zeros(len(pts))
        for idx, c in self.coeffs:
            out += c * np.prod(pts ** np.asarray(idx), axis=1)
        return out

    def gradient_magnitude(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(points)
        dim = pts.shape[1]
        sq = np.zeros(len(pts))
        for e in np.eye(dim, dtype=int):
            sq += self.derivative(tuple(e)).evaluate(pts) ** 2
        return np.sqrt(sq)

    def highorder(self, points: np.ndarray, m: int) -> np.ndarray:
        pts = np.atleast_2d(points)
        if m not in (1, 2):
            raise InvalidArgumentError(f"unsupported derivative order {m}")
        return sum(np.abs(self.derivative(a).evaluate(pts)) for a in multi_indices(pts.shape[1], m))


@dataclass(frozen=True)
class Sampled:
    """Wrapper turning stored grid values into a function specification."""

    function: GridFunction


FunctionSpec = Bump | Cone | Gaussian | Polynomial | Sampled


def sample(spec: FunctionSpec, grid: Grid) -> GridFunction:
    """Evaluate ``spec`` at the cell centers of ``grid``."""
    if isinstance(spec, Sampled):
        _same_grid(spec.function.grid, grid)
        return spec.function
    if isinstance(spec, GridFunction):
        _same_grid(spec.grid, grid)
        return spec
    return GridFunction(grid, spec.evaluate(grid.centers))


def constant(grid: Grid, c: float) -> GridFunction:
    return GridFunction(grid, np.full(grid.n_cells, float(c)))


def indicator(grid: Grid, region: Ball) -> GridFunction:
    return GridFunction(grid, cell_mask(grid, region).astype(float))


# ---------------------------------------------------------------------------
# serialization

_MAGIC = b"MLGF"


def save_csv(f: GridFunction, path: str | Path) -> None:
    g = f.grid
    lines = [f"# dim={g.dim},N={g.cells_per_axis},L={g.half_extent!r}"]
    lines += [repr(float(v)) for v in f.values]
    Path(path).write_text("\n".join(lines) + "\n")


def load_csv(path: str | Path) -> GridFunction:
    text = Path(path).read_text().splitlines()
    header = dict(kv.split("=") for kv in text[0].lstrip("# ").split(","))
    grid = make_grid(int(header["dim"]), float(header["L"]), int(header["N"]))
    return GridFunction(grid, np.array([float(v) for v in text[1:] if v.strip()]))


def save_binary(f: GridFunction, path: str | Path) -> None:
    g = f.grid
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<iqd", g.dim, g.cells_per_axis, g.half_extent))
        fh.write(np.asarray(f.values, dtype="<f8").tobytes())


def load_binary(path: str | Path) -> GridFunction:
    raw = Path(path).read_bytes()
    if raw[:4] != _MAGIC:
        raise InvalidArgumentError(f"{path} is not a grid function file")
    dim, n, half = struct.unpack_from("<iqd", raw, 4)
    offset = 4 + struct.calcsize("<iqd")
    values = np.frombuffer(raw[offset:], dtype="<f8")
    return GridFunction(make_grid(dim, half, n), values)
