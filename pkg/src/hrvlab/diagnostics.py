"""Estimator kernels and the detection-report orchestrator.

The kernels are the tail-diagnostic statistics traced against k, the
number of upper order statistics used:

* ``hill_series`` — reciprocal mean log-excess, reported on the
  tail-index scale (alpha-hat).
* ``hillish`` — double-log rank average over concomitants; converges to 1
  (in both the positive and negated variant) exactly when the joint limit
  is a product measure.
* ``pickandsish`` — ratio of differences of ordered concomitants;
  converges to 0 under a product limit.
* ``qhat_series`` — fraction of the top-k points by A = min(z1, z2) whose
  first coordinate exceeds the second: estimates the angular branch mass.
* ``thresholded_ratios`` / ``qq_exponential`` / ``kde`` /
  ``angular_density`` — the ratio-tail and density views.

``detect_report`` runs the whole battery on one bivariate batch and
returns a DetectionReport, serializable to a single JSON document plus a
directory of per-series CSV files. Detection contains no randomness: a
report is a pure function of (pairs, config).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from scipy.stats import rankdata

from .core import DomainError, UsageError
from .generators import SampleBatch
from .transforms import (
    ConcomitantTable,
    concomitant_table,
    gpolar_axes_batch,
    pareto_standardize,
    rank_transform,
)

__all__ = [
    "DiagnosticSeries",
    "DensityEstimate",
    "ThresholdedRatios",
    "DetectConfig",
    "DetectionReport",
    "hill_series",
    "hillish",
    "hillish_series",
    "pickandsish",
    "pickandsish_series",
    "qhat_series",
    "thresholded_ratios",
    "qq_exponential",
    "kde",
    "angular_density",
    "detect_report",
    "report_to_json",
]

RANK_MODES = ("none", "literal", "pareto")
REPORT_SCHEMA_VERSION = 1

_SQRT_2PI = math.sqrt(2.0 * math.pi)


# ---------------------------------------------------------------------------
# Result containers


@dataclass
class DiagnosticSeries:
    """(k, value) pairs traced over the number of order statistics used."""

    ks: np.ndarray
    values: np.ndarray
    label: str

    def __post_init__(self) -> None:
        self.ks = np.asarray(self.ks, dtype=np.int64)
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.ks.shape != self.values.shape:
            raise UsageError("ks and values must align")
        if self.ks.size:
            if self.ks[0] < 2:
                raise UsageError(f"series {self.label!r}: k must be >= 2, got {self.ks[0]}")
            if self.ks.size > 1 and not np.all(np.diff(self.ks) > 0):
                raise UsageError(f"series {self.label!r}: k grid must be strictly increasing")

    @property
    def points(self) -> list[tuple[int, float]]:
        return [(int(k), float(v)) for k, v in zip(self.ks, self.values)]

    def value_at(self, k: int) -> float:
        idx = np.nonzero(self.ks == int(k))[0]
        if idx.size == 0:
            raise UsageError(f"series {self.label!r} has no point at k={k}")
        return float(self.values[idx[0]])

    def __len__(self) -> int:
        return int(self.ks.size)


@dataclass
class DensityEstimate:
    """A kernel density evaluated on a fixed grid."""

    grid: np.ndarray
    density: np.ndarray
    bandwidth: float


@dataclass
class ThresholdedRatios:
    """Ratio samples among the k points with largest A = min(z1, z2)."""

    k: int
    theta_first: np.ndarray  # z1/z2 on the first-larger branch
    theta_second: np.ndarray  # z2/z1 on the second-larger branch
    theta_max: np.ndarray  # max ratio over all k selected points


# ---------------------------------------------------------------------------
# Grid helpers


def _as_k_grid(k_grid: Sequence[int], n: int, *, k_max_allowed: int, k_min_allowed: int = 2) -> np.ndarray:
    ks = np.unique(np.asarray(list(k_grid), dtype=np.int64))
    if ks.size == 0:
        raise UsageError("empty k grid")
    if ks[0] < k_min_allowed:
        raise UsageError(f"k must be >= {k_min_allowed}, got {int(ks[0])}")
    if ks[-1] > k_max_allowed:
        raise UsageError(f"k must be <= {k_max_allowed} for n={n}, got {int(ks[-1])}")
    return ks


def _empty_series(label: str) -> DiagnosticSeries:
    return DiagnosticSeries(np.empty(0, dtype=np.int64), np.empty(0, dtype=np.float64), label)


# ---------------------------------------------------------------------------
# Hill


def hill_series(x: np.ndarray, k_grid: Sequence[int], label: str = "hill") -> DiagnosticSeries:
    """Tail-index estimates 1 / mean(log x_(i) - log x_(k+1), i <= k).

    The series stores alpha-hat (the reciprocal of the mean log-excess),
    matching tail-index read-offs. Grid points where the estimate is
    undefined (top k+1 values all equal) are omitted.
    """
    x = np.asarray(x, dtype=np.float64)
    n = x.size
    if n == 0 or not np.all(np.isfinite(x)) or np.min(x) <= 0.0:
        raise DomainError(f"{label}: data must be positive finite reals")
    ks = _as_k_grid(k_grid, n, k_max_allowed=n - 1)
    x_desc = np.sort(x)[::-1]
    logs = np.log(x_desc)
    csum = np.cumsum(logs)
    mean_log_excess = csum[ks - 1] / ks - logs[ks]
    # x_(1) == x_(k+1) means every log-excess is exactly zero; the cumsum
    # route can leave rounding residue there, so mask those ks explicitly
    defined = (mean_log_excess > 0.0) & (x_desc[0] > x_desc[ks])
    with np.errstate(divide="ignore"):
        values = np.where(defined, 1.0 / np.where(defined, mean_log_excess, 1.0), np.inf)
    return DiagnosticSeries(ks[defined], values[defined], label)


# ---------------------------------------------------------------------------
# Hillish


def _hillish_from_table(table: ConcomitantTable, ks: np.ndarray, label: str) -> DiagnosticSeries:
    values = np.empty(ks.size, dtype=np.float64)
    for i, k in enumerate(ks):
        k = int(k)
        ranks = rankdata(table.eta_star[:k], method="max")
        j = np.arange(1, k + 1, dtype=np.float64)
        values[i] = float(np.mean(np.log(k / j) * np.log(k / ranks)))
    return DiagnosticSeries(ks, values, label)


def hillish_series(
    xi: np.ndarray, eta: np.ndarray, k_grid: Sequence[int], label: str = "hillish"
) -> DiagnosticSeries:
    """Hillish statistic (1/k) sum_j log(k/j) log(k/N_j^k) over a k grid.

    N_j^k is the rank (with ties counted by <=) of the j-th concomitant
    among the top-k concomitants. The negated variant is obtained by
    passing -eta.
    """
    table = concomitant_table(xi, eta)
    ks = _as_k_grid(k_grid, table.n, k_max_allowed=table.n)
    return _hillish_from_table(table, ks, label)


def hillish(xi: np.ndarray, eta: np.ndarray, k: int) -> float:
    """Hillish at a single k (2 <= k <= n)."""
    return float(hillish_series(xi, eta, [int(k)]).values[0])


# ---------------------------------------------------------------------------
# Pickandsish


def _ceil_index(v: float) -> int:
    """Ceiling with 1e-9 relative slack so decimal-intended products like
    0.8*1000 do not ceil to 801; clamped to >= 1."""
    return max(1, int(math.ceil(v - 1e-9 * max(1.0, abs(v)))))


def _pickandsish_from_table(table: ConcomitantTable, k: int, q: float, label: str) -> float:
    k_half = _ceil_index(k / 2.0)
    a_full = _ceil_index(q * k)
    a_half = _ceil_index(q * k / 2.0)
    top_k = np.sort(table.eta_star[:k])
    top_half = np.sort(table.eta_star[:k_half])
    anchor = top_k[a_full - 1]
    num = anchor - top_half[a_half - 1]
    den = anchor - top_k[a_half - 1]
    if den == 0.0:
        raise DomainError(
            f"{label}: degenerate quantile spread at k={k}, q={q} "
            "(identical ordered concomitants; limit quantiles must differ)"
        )
    return float(num / den)


def pickandsish(xi: np.ndarray, eta: np.ndarray, k: int, q: float) -> float:
    """Pickandsish statistic at a single k (4 <= k <= n), q in (0, 1).

    (eta*_{ceil(qk):k} - eta*_{ceil(qk/2):ceil(k/2)}) /
    (eta*_{ceil(qk):k} - eta*_{ceil(qk/2):k}), where eta*_{a:b} is the
    a-th smallest among the concomitants of the top-b xi order statistics.
    """
    q = float(q)
    if not 0.0 < q < 1.0:
        raise UsageError(f"q must lie in (0, 1), got {q}")
    table = concomitant_table(xi, eta)
    k = int(k)
    if not 4 <= k <= table.n:
        raise UsageError(f"need 4 <= k <= n={table.n}, got k={k}")
    return _pickandsish_from_table(table, k, q, "pickandsish")


def pickandsish_series(
    xi: np.ndarray,
    eta: np.ndarray,
    k_grid: Sequence[int],
    q: float,
    label: str = "pickandsish",
) -> DiagnosticSeries:
    """Pickandsish over a k grid (every k >= 4)."""
    q = float(q)
    if not 0.0 < q < 1.0:
        raise UsageError(f"q must lie in (0, 1), got {q}")
    table = concomitant_table(xi, eta)
    ks = _as_k_grid(k_grid, table.n, k_max_allowed=table.n, k_min_allowed=4)
    values = np.array([_pickandsish_from_table(table, int(k), q, label) for k in ks])
    return DiagnosticSeries(ks, values, label)


# ---------------------------------------------------------------------------
# q-hat


def qhat_series(
    first_star: np.ndarray,
    second_star: np.ndarray,
    k_grid: Sequence[int],
    label: str = "qhat",
) -> DiagnosticSeries:
    """Fraction of the top-k points by A = min(first, second) with
    first > second, traced over k."""
    first = np.asarray(first_star, dtype=np.float64)
    second = np.asarray(second_star, dtype=np.float64)
    if first.shape != second.shape or first.ndim != 1:
        raise UsageError("first_star and second_star must be 1-d vectors of equal length")
    n = first.size
    ks = _as_k_grid(k_grid, n, k_max_allowed=n)
    a = np.minimum(first, second)
    order = np.argsort(-a, kind="stable")
    wins = (first > second)[order].astype(np.float64)
    cum = np.cumsum(wins)
    values = cum[ks - 1] / ks
    return DiagnosticSeries(ks, values, label)


# ---------------------------------------------------------------------------
# Thresholded ratios


def _pairs_array(pairs: Union[SampleBatch, np.ndarray]) -> np.ndarray:
    arr = pairs.pairs if isinstance(pairs, SampleBatch) else np.asarray(pairs, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise UsageError(f"expected an (n, 2) array of pairs, got shape {arr.shape}")
    return arr


def thresholded_ratios(pairs: Union[SampleBatch, np.ndarray], k: int) -> ThresholdedRatios:
    """Ratio samples among the k points with largest A = min(z1, z2).

    Ties in A are broken by original index. Points with z1 > z2
    contribute z1/z2 to theta_first, points with z2 > z1 contribute z2/z1
    to theta_second, and every selected point contributes its max ratio
    (ties contribute 1) to theta_max.
    """
    arr = _pairs_array(pairs)
    n = arr.shape[0]
    k = int(k)
    if not 1 <= k <= n:
        raise UsageError(f"need 1 <= k <= n={n}, got k={k}")
    if n == 0 or not np.all(np.isfinite(arr)) or np.min(arr) <= 0.0:
        raise DomainError("thresholded_ratios needs strictly positive finite coordinates")
    z1, z2 = arr[:, 0], arr[:, 1]
    a = np.minimum(z1, z2)
    sel = np.argsort(-a, kind="stable")[:k]
    s1, s2 = z1[sel], z2[sel]
    first = s1 > s2
    second = s2 > s1
    return ThresholdedRatios(
        k=k,
        theta_first=s1[first] / s2[first],
        theta_second=s2[second] / s1[second],
        theta_max=np.maximum(s1, s2) / np.minimum(s1, s2),
    )


# ---------------------------------------------------------------------------
# QQ and densities


def qq_exponential(x: np.ndarray) -> np.ndarray:
    """Exponential QQ points: column 0 the theoretical quantiles
    -log(1 - i/(m+1)), column 1 the ascending sorted data."""
    x = np.asarray(x, dtype=np.float64)
    m = x.size
    if m == 0:
        raise UsageError("qq_exponential needs nonempty data")
    if not np.all(np.isfinite(x)):
        raise DomainError("qq_exponential needs finite data")
    i = np.arange(1, m + 1, dtype=np.float64)
    theoretical = -np.log(1.0 - i / (m + 1.0))
    return np.column_stack([theoretical, np.sort(x)])


def _gaussian_density_on_grid(x: np.ndarray, grid: np.ndarray, h: float) -> np.ndarray:
    density = np.zeros(grid.size, dtype=np.float64)
    norm = 1.0 / (x.size * h * _SQRT_2PI)
    # Chunk the grid so the (grid, n) broadcast stays modest for large n.
    step = max(1, int(4_000_000 // max(1, x.size)))
    for start in range(0, grid.size, step):
        g = grid[start : start + step, None]
        density[start : start + step] = np.exp(-0.5 * ((g - x[None, :]) / h) ** 2).sum(axis=1)
    return density * norm


def kde(
    x: np.ndarray, grid_size: int = 256, bandwidth: Optional[float] = None
) -> DensityEstimate:
    """Gaussian kernel density on a regular grid.

    Default bandwidth is Silverman's rule 0.9 * min(sd, IQR/1.34) *
    n^(-1/5); the grid spans [min - 3h, max + 3h]. Degenerate data (zero
    spread, hence zero bandwidth) is an error.
    """
    x = np.asarray(x, dtype=np.float64)
    n = x.size
    if n < 2:
        raise UsageError(f"kde needs at least 2 observations, got {n}")
    if not np.all(np.isfinite(x)):
        raise DomainError("kde needs finite data")
    if int(grid_size) < 2:
        raise UsageError(f"grid_size must be >= 2, got {grid_size}")
    if bandwidth is None:
        sd = float(np.std(x, ddof=1))
        q75, q25 = np.percentile(x, [75.0, 25.0])
        spread = min(sd, (q75 - q25) / 1.34)
        h = 0.9 * spread * n ** (-0.2)
        if not (h > 0.0 and np.isfinite(h)):
            raise DomainError("kde: degenerate data (zero variance or zero IQR-spread)")
    else:
        h = float(bandwidth)
        if not (h > 0.0 and np.isfinite(h)):
            raise UsageError(f"bandwidth must be a positive real, got {bandwidth}")
    grid = np.linspace(np.min(x) - 3.0 * h, np.max(x) + 3.0 * h, int(grid_size))
    return DensityEstimate(grid=grid, density=_gaussian_density_on_grid(x, grid, h), bandwidth=h)


_ANGULAR_FALLBACK_BANDWIDTH = 0.01  # on the [0, 1] angle scale


def angular_density(
    pairs: Union[SampleBatch, np.ndarray], k: int, grid_size: int = 256
) -> DensityEstimate:
    """KDE of the normalized angles (2/pi) * atan2(z2, z1) of the top-k
    points by L1 norm.

    Degenerate angle samples (e.g. every selected point on one axis) fall
    back to a fixed 0.01 bandwidth instead of erroring, so axis-
    concentrated data still renders as mass near the corresponding
    endpoint.
    """
    arr = _pairs_array(pairs)
    n = arr.shape[0]
    k = int(k)
    if not 1 <= k <= n:
        raise UsageError(f"need 1 <= k <= n={n}, got k={k}")
    if n == 0 or not np.all(np.isfinite(arr)) or np.min(arr) < 0.0:
        raise DomainError("angular_density needs finite nonnegative coordinates")
    norms = arr[:, 0] + arr[:, 1]
    if np.min(norms) == 0.0:
        raise DomainError("angular_density: input contains a (0, 0) point")
    sel = np.argsort(-norms, kind="stable")[:k]
    angles = (2.0 / math.pi) * np.arctan2(arr[sel, 1], arr[sel, 0])
    try:
        return kde(angles, grid_size=grid_size)
    except DomainError:
        h = _ANGULAR_FALLBACK_BANDWIDTH
        grid = np.linspace(np.min(angles) - 3.0 * h, np.max(angles) + 3.0 * h, int(grid_size))
        return DensityEstimate(
            grid=grid, density=_gaussian_density_on_grid(angles, grid, h), bandwidth=h
        )


# ---------------------------------------------------------------------------
# Detection config and report


@dataclass(frozen=True)
class DetectConfig:
    """Configuration for detect_report.

    The main k grid runs from k_min to k_max (default n/10) stepping by
    k_step (default max(1, n/1000)); ratio-sample Hill grids are dense
    (step 1) since those samples are small. thresholds=None means the
    default {100, 400} clipped to the available interior sample;
    explicitly configured thresholds must fit the data.
    """

    k_min: int = 10
    k_max: Optional[int] = None
    k_step: Optional[int] = None
    q_list: tuple[float, ...] = (0.8,)
    thresholds: Optional[tuple[int, ...]] = None
    rank_mode: str = "none"
    angular_k: Optional[int] = None
    kde_grid_size: int = 256

    def __post_init__(self) -> None:
        if self.rank_mode not in RANK_MODES:
            raise UsageError(
                f"rank_mode must be one of {RANK_MODES}, got {self.rank_mode!r}"
            )
        object.__setattr__(self, "q_list", tuple(float(q) for q in self.q_list))
        for q in self.q_list:
            if not 0.0 < q < 1.0:
                raise UsageError(f"q must lie in (0, 1), got {q}")
        if self.thresholds is not None:
            ts = tuple(int(t) for t in self.thresholds)
            if any(t < 2 for t in ts):
                raise UsageError(f"thresholds must be >= 2, got {ts}")
            object.__setattr__(self, "thresholds", ts)
        if self.k_min < 2:
            raise UsageError(f"k_min must be >= 2, got {self.k_min}")
        for name in ("k_max", "k_step", "angular_k"):
            v = getattr(self, name)
            if v is not None and int(v) < 1:
                raise UsageError(f"{name} must be positive, got {v}")
        if self.kde_grid_size < 2:
            raise UsageError(f"kde_grid_size must be >= 2, got {self.kde_grid_size}")

    def main_grid(self, n: int) -> np.ndarray:
        k_max = self.k_max if self.k_max is not None else n // 10
        if self.k_max is not None and self.k_max >= n:
            raise UsageError(f"k_max={self.k_max} must be < n={n}")
        step = self.k_step if self.k_step is not None else max(1, n // 1000)
        ks = np.arange(self.k_min, k_max + 1, step, dtype=np.int64)
        ks = ks[(ks >= 2) & (ks < n)]
        if ks.size == 0:
            raise UsageError(
                f"sample too small for the configured k grid (n={n}, k_min={self.k_min})"
            )
        return ks


@dataclass
class DetectionReport:
    """Every diagnostic series, QQ point set, and density from one run.

    ``series`` maps label -> DiagnosticSeries, ``qq`` maps label -> (m, 2)
    arrays of (theoretical, empirical) points, ``densities`` maps label ->
    DensityEstimate. The named accessors expose the canonical fields (the
    ratio statistics resolve at the primary — first configured —
    threshold).
    """

    series: dict
    qq: dict
    densities: dict
    meta: dict

    def _primary_suffix(self) -> str:
        ts = self.meta.get("thresholds", [])
        if not ts:
            raise UsageError("report has no ratio thresholds")
        return f"@k{ts[0]}"

    @property
    def marginal_hill_1(self) -> DiagnosticSeries:
        return self.series["marginal_hill_1"]

    @property
    def marginal_hill_2(self) -> DiagnosticSeries:
        return self.series["marginal_hill_2"]

    @property
    def min_hill(self) -> DiagnosticSeries:
        return self.series["min_hill"]

    @property
    def qhat(self) -> DiagnosticSeries:
        return self.series["qhat"]

    def hillish(self, direction: int, sign: str = "pos") -> DiagnosticSeries:
        return self.series[f"hillish_{sign}_{direction}"]

    def pickandsish(self, direction: int, q: float) -> DiagnosticSeries:
        return self.series[f"pickandsish_{direction}@q{q:g}"]

    @property
    def ratio_tail_hill_1(self) -> DiagnosticSeries:
        return self.series["ratio_tail_hill_1" + self._primary_suffix()]

    @property
    def ratio_tail_hill_2(self) -> DiagnosticSeries:
        return self.series["ratio_tail_hill_2" + self._primary_suffix()]

    @property
    def qq_points(self) -> np.ndarray:
        return self.qq["qq_log_ratio_max" + self._primary_suffix()]

    @property
    def ratio_kde_1(self) -> DensityEstimate:
        return self.densities["ratio_kde_1" + self._primary_suffix()]

    @property
    def ratio_kde_2(self) -> DensityEstimate:
        return self.densities["ratio_kde_2" + self._primary_suffix()]

    @property
    def angular_density(self) -> DensityEstimate:
        return self.densities["angular_density"]


def _with_context(stat: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (DomainError, UsageError) as exc:
        raise type(exc)(f"{stat}: {exc}") from exc


def _transform_coordinates(arr: np.ndarray, rank_mode: str) -> tuple[np.ndarray, np.ndarray]:
    if rank_mode == "none":
        return arr[:, 0], arr[:, 1]
    if rank_mode == "literal":
        return (
            rank_transform(arr[:, 0]).astype(np.float64),
            rank_transform(arr[:, 1]).astype(np.float64),
        )
    if rank_mode == "pareto":
        return pareto_standardize(arr[:, 0]), pareto_standardize(arr[:, 1])
    raise UsageError(f"rank_mode must be one of {RANK_MODES}, got {rank_mode!r}")


def detect_report(
    pairs: Union[SampleBatch, np.ndarray], config: Optional[DetectConfig] = None
) -> DetectionReport:
    """Run the full diagnostic battery on one bivariate batch.

    Marginal Hill series are computed on the raw coordinates; everything
    else (min-Hill, q-hat, the gpolar-axes branch Hillish/Pickandsish,
    thresholded ratio statistics, angular density) runs on the
    rank_mode-transformed coordinates. Points off the interior cone (any
    zero coordinate) are excluded from the axes-based statistics and the
    dropped counts are recorded in meta. Component errors propagate with
    the failed statistic named.
    """
    config = config or DetectConfig()
    arr = _pairs_array(pairs)
    n = arr.shape[0]
    if n == 0:
        raise UsageError("detect_report needs a nonempty batch")
    if not np.all(np.isfinite(arr)):
        raise DomainError("detect_report: coordinates must be finite")
    if np.min(arr) < 0.0:
        raise DomainError("detect_report: coordinates must be nonnegative")

    grid = config.main_grid(n)
    series: dict = {}
    qq: dict = {}
    densities: dict = {}
    dropped: dict = {}
    skipped_pickandsish: dict = {}

    # Marginal Hill plots always read the raw data; zeros sit at the
    # bottom of the order statistics so dropping them leaves the top-k
    # estimates untouched.
    for col, label in ((arr[:, 0], "marginal_hill_1"), (arr[:, 1], "marginal_hill_2")):
        pos = col[col > 0.0]
        dropped[f"{label}_nonpositive"] = int(n - pos.size)
        g = grid[grid < pos.size]
        series[label] = (
            _with_context(label, hill_series, pos, g, label) if g.size else _empty_series(label)
        )

    t1, t2 = _transform_coordinates(arr, config.rank_mode)
    interior = (t1 > 0.0) & (t2 > 0.0)
    dropped["off_interior"] = int(n - int(interior.sum()))
    it1, it2 = t1[interior], t2[interior]
    m_int = int(it1.size)
    if m_int < 3:
        raise DomainError(
            f"detect_report: only {m_int} points have both coordinates positive; "
            "the interior-cone diagnostics need at least 3"
        )
    radius, theta, which = gpolar_axes_batch(it1, it2)

    g_int = grid[grid < m_int]
    series["min_hill"] = (
        _with_context("min_hill", hill_series, radius, g_int, "min_hill")
        if g_int.size
        else _empty_series("min_hill")
    )
    g_q = grid[grid <= m_int]
    series["qhat"] = (
        _with_context("qhat", qhat_series, it1, it2, g_q, "qhat")
        if g_q.size
        else _empty_series("qhat")
    )

    # CEV diagnostics per gpolar branch: (A, theta_1) on first-larger
    # points, (A, theta_2) on second-larger points, each with the
    # positive and negated concomitant variant.
    for direction, mask in ((1, which > 0), (2, which < 0)):
        xi_b = radius[mask]
        eta_b = theta[mask]
        m_b = int(xi_b.size)
        g_b = grid[grid <= m_b]
        pos_label = f"hillish_pos_{direction}"
        neg_label = f"hillish_neg_{direction}"
        if g_b.size == 0:
            table = None
            series[pos_label] = _empty_series(pos_label)
            series[neg_label] = _empty_series(neg_label)
        else:
            table = concomitant_table(xi_b, eta_b)
            neg_table = ConcomitantTable(table.xi_desc, -table.eta_star)
            series[pos_label] = _with_context(
                pos_label, _hillish_from_table, table, g_b, pos_label
            )
            series[neg_label] = _with_context(
                neg_label, _hillish_from_table, neg_table, g_b, neg_label
            )
        for q in config.q_list:
            label = f"pickandsish_{direction}@q{q:g}"
            g_p = g_b[g_b >= 4] if g_b.size else g_b
            if g_p.size == 0 or table is None:
                series[label] = _empty_series(label)
                continue
            kept_ks, kept_vals, skipped = [], [], []
            for k in g_p:
                try:
                    kept_vals.append(_pickandsish_from_table(table, int(k), q, label))
                    kept_ks.append(int(k))
                except DomainError:
                    skipped.append(int(k))
            if skipped and not kept_ks:
                raise DomainError(
                    f"{label}: degenerate quantile spread at every k in the grid"
                )
            if skipped:
                skipped_pickandsish[label] = skipped
            series[label] = DiagnosticSeries(np.array(kept_ks), np.array(kept_vals), label)

    # Thresholded ratio statistics.
    if config.thresholds is None:
        thresholds = [t for t in (100, 400) if t <= m_int]
    else:
        bad = [t for t in config.thresholds if t > m_int]
        if bad:
            raise UsageError(
                f"thresholds {bad} exceed the interior sample size {m_int}"
            )
        thresholds = list(config.thresholds)
    interior_pairs = np.column_stack([it1, it2])
    for t in thresholds:
        suffix = f"@k{t}"
        tr = _with_context(f"thresholded_ratios{suffix}", thresholded_ratios, interior_pairs, t)
        for name, vec in (
            ("ratio_tail_hill_1", tr.theta_first),
            ("ratio_tail_hill_2", tr.theta_second),
            ("ratio_tail_hill_max", tr.theta_max),
        ):
            label = name + suffix
            m = vec.size
            if m >= 3:
                series[label] = _with_context(
                    label, hill_series, vec, np.arange(2, m, dtype=np.int64), label
                )
            else:
                series[label] = _empty_series(label)
        for name, vec in (
            ("qq_log_ratio_1", tr.theta_first),
            ("qq_log_ratio_2", tr.theta_second),
            ("qq_log_ratio_max", tr.theta_max),
        ):
            label = name + suffix
            if vec.size:
                qq[label] = _with_context(label, qq_exponential, np.log(vec))
            else:
                qq[label] = np.empty((0, 2), dtype=np.float64)
        for name, vec in (
            ("ratio_kde_1", tr.theta_first),
            ("ratio_kde_2", tr.theta_second),
        ):
            label = name + suffix
            if vec.size >= 2:
                densities[label] = _with_context(
                    label, kde, vec, config.kde_grid_size
                )
            else:
                dropped[f"{label}_insufficient"] = int(vec.size)

    # Angular density over the transformed sample (both-zero points cannot
    # occur after the nonnegativity check unless the raw data had them).
    t_norms = t1 + t2
    angular_mask = t_norms > 0.0
    dropped["angular_both_zero"] = int(n - int(angular_mask.sum()))
    ang_pairs = np.column_stack([t1[angular_mask], t2[angular_mask]])
    k_ang = config.angular_k if config.angular_k is not None else ang_pairs.shape[0]
    if k_ang > ang_pairs.shape[0]:
        raise UsageError(
            f"angular_k={k_ang} exceeds the {ang_pairs.shape[0]} usable points"
        )
    densities["angular_density"] = _with_context(
        "angular_density", angular_density, ang_pairs, k_ang, config.kde_grid_size
    )

    meta = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "n": n,
        "n_interior": m_int,
        "rank_mode": config.rank_mode,
        "thresholds": [int(t) for t in thresholds],
        "q_list": [float(q) for q in config.q_list],
        "k_grid": {
            "min": int(grid[0]),
            "max": int(grid[-1]),
            "step": int(config.k_step if config.k_step is not None else max(1, n // 1000)),
        },
        "angular_k": int(k_ang),
        "kde_grid_size": int(config.kde_grid_size),
        "dropped": dropped,
    }
    if skipped_pickandsish:
        meta["pickandsish_skipped"] = skipped_pickandsish
    if isinstance(pairs, SampleBatch):
        meta["source"] = dict(pairs.meta)
    return DetectionReport(series=series, qq=qq, densities=densities, meta=meta)


# ---------------------------------------------------------------------------
# Serialization


def report_to_json(report: DetectionReport) -> dict:
    """The single-document JSON form: meta / series / qq / densities."""
    return {
        "meta": report.meta,
        "series": {
            label: [[int(k), float(v)] for k, v in zip(s.ks, s.values)]
            for label, s in sorted(report.series.items())
        },
        "qq": {
            label: [[float(t), float(e)] for t, e in points]
            for label, points in sorted(report.qq.items())
        },
        "densities": {
            label: {
                "x": [float(v) for v in d.grid],
                "density": [float(v) for v in d.density],
                "bandwidth": float(d.bandwidth),
            }
            for label, d in sorted(report.densities.items())
        },
    }
