"""Coordinate and rank transformations feeding the tail diagnostics.

Two generalized polar decompositions are provided, one per deleted cone:

* relative to the origin, a point maps to (L1 norm, first-coordinate
  share) — the natural coordinates for regular variation on the full
  quadrant;
* relative to the axes, a point maps to (min coordinate, max coordinate
  ratio) — the coordinates in which hidden regular variation on the
  interior becomes a one-dimensional tail plus an angular ratio.

Rank utilities use the literal counting conventions output[i] =
#{j : x[i] >= x[j]} and N_j^k = #{l <= k : eta*_l <= eta*_j}, so tied
values share the maximal count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .core import DomainError, UsageError

__all__ = [
    "PolarPointOrigin",
    "PolarPointAxes",
    "ConcomitantTable",
    "gpolar_origin",
    "gpolar_axes",
    "gpolar_axes_batch",
    "rank_transform",
    "pareto_standardize",
    "concomitant_table",
]


@dataclass(frozen=True)
class PolarPointOrigin:
    """GPOLAR coordinates relative to the deleted origin.

    radius is the L1 norm z1+z2; angle_w = z1/(z1+z2) locates the point
    on the L1 unit sphere as (angle_w, 1-angle_w).
    """

    radius: float
    angle_w: float

    def reconstruct(self) -> tuple[float, float]:
        return (self.radius * self.angle_w, self.radius * (1.0 - self.angle_w))


@dataclass(frozen=True)
class PolarPointAxes:
    """GPOLAR coordinates relative to the deleted axes.

    radius is the min coordinate, theta >= 1 the larger-over-smaller
    ratio, and which_larger records the branch of the two-piece sphere.
    """

    radius: float
    theta: float
    which_larger: str  # "first" | "second" | "tie"

    def reconstruct(self) -> tuple[float, float]:
        if self.which_larger == "first":
            return (self.radius * self.theta, self.radius)
        if self.which_larger == "second":
            return (self.radius, self.radius * self.theta)
        return (self.radius, self.radius)


def gpolar_origin(pair: tuple[float, float]) -> PolarPointOrigin:
    """Polar decomposition relative to the origin; undefined at (0,0)."""
    z1, z2 = float(pair[0]), float(pair[1])
    if z1 < 0.0 or z2 < 0.0:
        raise DomainError(f"coordinates must be nonnegative, got ({z1}, {z2})")
    r = z1 + z2
    if r == 0.0:
        raise DomainError("gpolar_origin undefined at (0, 0) (the deleted cone)")
    return PolarPointOrigin(radius=r, angle_w=z1 / r)


def gpolar_axes(pair: tuple[float, float]) -> PolarPointAxes:
    """Polar decomposition relative to the axes; needs both coordinates > 0."""
    z1, z2 = float(pair[0]), float(pair[1])
    if z1 <= 0.0 or z2 <= 0.0:
        raise DomainError(
            f"gpolar_axes needs strictly positive coordinates, got ({z1}, {z2})"
        )
    if z1 > z2:
        return PolarPointAxes(radius=z2, theta=z1 / z2, which_larger="first")
    if z2 > z1:
        return PolarPointAxes(radius=z1, theta=z2 / z1, which_larger="second")
    return PolarPointAxes(radius=z1, theta=1.0, which_larger="tie")


def gpolar_axes_batch(z1: np.ndarray, z2: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized gpolar_axes.

    Returns (radius, theta, which) where which is -1/0/+1 for
    second-larger / tie / first-larger. Same domain requirement as the
    scalar version: every coordinate strictly positive.
    """
    z1 = np.asarray(z1, dtype=np.float64)
    z2 = np.asarray(z2, dtype=np.float64)
    if z1.shape != z2.shape:
        raise UsageError("coordinate vectors must have equal length")
    if z1.size and (np.min(z1) <= 0.0 or np.min(z2) <= 0.0):
        raise DomainError("gpolar_axes needs strictly positive coordinates")
    radius = np.minimum(z1, z2)
    big = np.maximum(z1, z2)
    theta = big / radius
    which = np.sign(z1 - z2).astype(np.int64)
    return radius, theta, which


def rank_transform(x: np.ndarray) -> np.ndarray:
    """Ascending ranks out[i] = #{j : x[i] >= x[j]}; ties share the max count."""
    x = np.asarray(x)
    if x.size == 0:
        raise UsageError("rank_transform needs a nonempty vector")
    return rankdata(x, method="max").astype(np.int64)


def pareto_standardize(x: np.ndarray) -> np.ndarray:
    """Map data to standard Pareto(1) scale via ranks: (n+1)/(n+1-rank)."""
    r = rank_transform(x).astype(np.float64)
    n = x.size
    return (n + 1.0) / (n + 1.0 - r)


@dataclass(frozen=True)
class ConcomitantTable:
    """xi sorted decreasing with the paired eta values (concomitants).

    Ties in xi are broken by original index, lower index treated as
    larger, so the table is a deterministic function of the input.
    """

    xi_desc: np.ndarray
    eta_star: np.ndarray

    @property
    def n(self) -> int:
        return int(self.xi_desc.size)

    def rank_fn(self, j: int, k: int) -> int:
        """N_j^k = #{l <= k : eta*_l <= eta*_j}, 1-indexed, for j <= k."""
        if not (1 <= j <= k <= self.n):
            raise UsageError(f"need 1 <= j <= k <= n, got j={j}, k={k}, n={self.n}")
        return int(np.count_nonzero(self.eta_star[:k] <= self.eta_star[j - 1]))

    def ranks_for_k(self, k: int) -> np.ndarray:
        """Vector (N_1^k, ..., N_k^k) of within-top-k concomitant ranks."""
        if not (1 <= k <= self.n):
            raise UsageError(f"need 1 <= k <= n, got k={k}, n={self.n}")
        return rankdata(self.eta_star[:k], method="max").astype(np.int64)


def concomitant_table(xi: np.ndarray, eta: np.ndarray) -> ConcomitantTable:
    """Sort xi decreasing (stable in the original index) and carry eta along."""
    xi = np.asarray(xi, dtype=np.float64)
    eta = np.asarray(eta, dtype=np.float64)
    if xi.shape != eta.shape or xi.ndim != 1:
        raise UsageError(
            f"xi and eta must be 1-d vectors of equal length, got {xi.shape} and {eta.shape}"
        )
    if xi.size == 0:
        raise UsageError("concomitant_table needs nonempty input")
    order = np.argsort(-xi, kind="stable")
    return ConcomitantTable(xi_desc=xi[order], eta_star=eta[order])
