"""Weighted L^p averages and Lorentz norms over a ball.

All norms are taken with respect to the probability measure
``w(x) dx / w(B)`` on the cells of ``B``.  ``w=None`` means Lebesgue measure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .lattice import Ball, GridFunction, cell_indices
from .weights import Weight, weight_values


def _ball_measure(f: GridFunction, region: Ball, w: Weight | None):
    idx = cell_indices(f.grid, region)
    vals = np.abs(f.values[idx])
    if w is None:
        mu = np.ones(idx.size)
    else:
        mu = np.asarray(weight_values(w, f.grid)[idx], dtype=float)
    return vals, mu / np.sum(mu)


def weighted_lp(f: GridFunction, p: float, region: Ball, w: Weight | None = None) -> float:
    """``((1/w(B)) int_B |f|^p w)^(1/p)``."""
    if not p >= 1:
        raise InvalidArgumentError(f"need p >= 1, got {p}")
    vals, mu = _ball_measure(f, region, w)
    top = np.max(vals)
    if top == 0:
        return 0.0
    # factor out the maximum to keep large exponents finite
    return float(top * np.sum(mu * (vals / top) ** p) ** (1.0 / p))


@dataclass(frozen=True)
class DistributionFunction:
    """Step distribution ``t -> mu{|f| > t}`` of a sampled function.

    ``thresholds`` are the distinct sample values in increasing order,
    ``masses[k] = mu{|f| > thresholds[k]}`` and ``left_masses[k] = mu{|f| >= thresholds[k]}``
    (the value of the step function just below the threshold).
    """

    thresholds: np.ndarray
    masses: np.ndarray
    left_masses: np.ndarray

    def mass(self, t: float) -> float:
        k = np.searchsorted(self.thresholds, t, side="right")
        if k == 0:
            return float(self.left_masses[0]) if len(self.left_masses) else 0.0
        return float(self.masses[k - 1])


def distribution(f: GridFunction, region: Ball, w: Weight | None = None) -> DistributionFunction:
    vals, mu = _ball_measure(f, region, w)
    thresholds, inverse = np.unique(vals, return_inverse=True)
    level_mass = np.bincount(inverse, weights=mu, minlength=thresholds.size)
    tail = np.cumsum(level_mass[::-1])[::-1]
    left = np.minimum(tail, 1.0)
    strict = np.append(left[1:], 0.0)
    zero_level = thresholds == 0
    # |f| >= 0 has full measure but contributes nothing to the norms
    left = np.where(zero_level, strict, left)
    return DistributionFunction(thresholds, strict, left)


def lorentz_weak(f: GridFunction, q: float, region: Ball, w: Weight | None = None) -> float:
    """``sup_t t mu{|f| > t}^(1/q)``, attained as ``t`` increases to a sample value."""
    if not q >= 1:
        raise InvalidArgumentError(f"need q >= 1, got {q}")
    dist = distribution(f, region, w)
    if dist.thresholds.size == 0:
        return 0.0
    return float(np.max(dist.thresholds * dist.left_masses ** (1.0 / q)))


def lorentz(f: GridFunction, integrability: float, fineness: float, region: Ball,
            w: Weight | None = None) -> float:
    """``L^{a,b}`` norm ``(a int_0^inf t^(b-1) mu{|f|>t}^(b/a) dt)^(1/b)``.

    ``a`` is the integrability index and ``b`` the fineness index.  The layer
    integral is evaluated exactly on the step distribution.
    """
    a, b = float(integrability), float(fineness)
    if not (a >= 1 and b >= 1):
        raise InvalidArgumentError(f"need integrability, fineness >= 1, got {a}, {b}")
    dist = distribution(f, region, w)
    t = dist.thresholds
    if t.size == 0 or t[-1] == 0:
        return 0.0
    scale = t[-1]
    t = t / scale
    lower = np.concatenate([[0.0], t[:-1]])
    layers = dist.left_masses ** (b / a) * (t**b - lower**b)
    return float(scale * (a / b * np.sum(layers)) ** (1.0 / b))
