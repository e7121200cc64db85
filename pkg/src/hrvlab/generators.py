"""Bivariate sample constructions with prescribed tail structure.

Four schemes cover the full menu of asymptotic behaviors:

* ``gen_radial_angular_E`` — Z = R * Theta with R Pareto(alpha) and Theta
  on the L1 unit sphere: regular variation on the whole quadrant.
* ``gen_hidden_E0`` — Z = R0 * Theta0 with Theta0 = B(theta1, 1) +
  (1-B)(1, theta2): hidden regular variation on the interior cone, with
  min(z1, z2) = R0 and the max ratio equal to the angular draw exactly.
* ``gen_axes_Y`` — a single Bernoulli switch puts a Pareto(alpha) mass on
  one of the two axes: pure asymptotic independence, no interior mass.
* ``gen_mixture`` / ``gen_additive`` — combine an axes component Y with an
  interior component V as Z = BY + (1-B)V or Z = Y + V; the additive form
  realizes the three competition regimes between alpha + alpha_star and
  alpha0 (tagged case1/case2/case3 in batch metadata).

All generators are pure functions of (spec, n, rng) and are bit-stable
for a fixed seed. Internal components draw from fixed substreams of the
caller's stream (the layout is part of the determinism contract and is
documented on each function).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .core import (
    Pareto,
    PointMass,
    RngStream,
    ScalarLaw,
    ShiftedUnitExponential,
    TailIndex,
    UnitExponential,
    UsageError,
    bernoulli_vector,
    law_from_json,
    law_to_json,
    sample_scalar,
)

__all__ = [
    "Uniform01",
    "AngularPointMass",
    "AngularTwoPoint",
    "AngularLawE",
    "HiddenAngularSpec",
    "RadialAngularE",
    "HiddenE0",
    "AxesY",
    "IidParetoPair",
    "RadialRatio",
    "Mixture",
    "Additive",
    "GeneratorSpec",
    "SampleBatch",
    "sample_angular",
    "gen_radial_angular_E",
    "gen_hidden_E0",
    "gen_axes_Y",
    "gen_mixture",
    "gen_additive",
    "generate",
    "additive_regime",
    "spec_to_json",
    "spec_from_json",
    "spec_fingerprint",
]


# ---------------------------------------------------------------------------
# Angular laws on the L1 sphere (the law of W with angle (W, 1-W))


@dataclass(frozen=True)
class Uniform01:
    """W uniform on [0, 1]."""


@dataclass(frozen=True)
class AngularPointMass:
    """W identically w."""

    w: float

    def __post_init__(self) -> None:
        w = float(self.w)
        if not 0.0 <= w <= 1.0:
            raise UsageError(f"angular point mass must lie in [0, 1], got {w}")
        object.__setattr__(self, "w", w)


@dataclass(frozen=True)
class AngularTwoPoint:
    """W = w_high with probability p_high, else w_low (a two-point mixture)."""

    w_low: float
    w_high: float
    p_high: float

    def __post_init__(self) -> None:
        for name in ("w_low", "w_high"):
            v = float(getattr(self, name))
            if not 0.0 <= v <= 1.0:
                raise UsageError(f"{name} must lie in [0, 1], got {v}")
            object.__setattr__(self, name, v)
        p = float(self.p_high)
        if not 0.0 <= p <= 1.0:
            raise UsageError(f"p_high must lie in [0, 1], got {p}")
        object.__setattr__(self, "p_high", p)


AngularLawE = Union[Uniform01, AngularPointMass, AngularTwoPoint]


def sample_angular(law: AngularLawE, n: int, rng: RngStream) -> np.ndarray:
    """Draw n values of W in [0, 1] under the angular law."""
    if isinstance(law, Uniform01):
        return rng.uniform_open(n)
    if isinstance(law, AngularPointMass):
        return np.full(int(n), law.w, dtype=np.float64)
    if isinstance(law, AngularTwoPoint):
        b = bernoulli_vector(law.p_high, n, rng)
        return np.where(b == 1, law.w_high, law.w_low).astype(np.float64)
    raise UsageError(f"unknown angular law: {law!r}")


def _require_ratio_law(law: ScalarLaw, name: str) -> None:
    """Angular ratio laws must be supported inside [1, inf)."""
    if isinstance(law, (Pareto, ShiftedUnitExponential)):
        return
    if isinstance(law, PointMass):
        if law.c < 1.0:
            raise UsageError(f"{name}: point mass for a ratio law must be >= 1, got {law.c}")
        return
    if isinstance(law, UnitExponential):
        raise UsageError(f"{name}: UnitExponential is supported on [0, inf), not [1, inf)")
    raise UsageError(f"{name}: unknown scalar law {law!r}")


@dataclass(frozen=True)
class HiddenAngularSpec:
    """Angular structure on the two-piece sphere: branch probability p and
    the ratio laws g1 (first coordinate larger) / g2 (second larger)."""

    p: float
    g1: ScalarLaw
    g2: ScalarLaw

    def __post_init__(self) -> None:
        p = float(self.p)
        if not 0.0 <= p <= 1.0:
            raise UsageError(f"branch probability must lie in [0, 1], got {p}")
        object.__setattr__(self, "p", p)
        _require_ratio_law(self.g1, "g1")
        _require_ratio_law(self.g2, "g2")


# ---------------------------------------------------------------------------
# Generator specs (tagged union)


@dataclass(frozen=True)
class RadialAngularE:
    alpha: TailIndex
    angular: AngularLawE

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", _coerce_index(self.alpha))


@dataclass(frozen=True)
class HiddenE0:
    alpha0: TailIndex
    angular: HiddenAngularSpec

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha0", _coerce_index(self.alpha0))


@dataclass(frozen=True)
class AxesY:
    """Axes-supported component: the single switch puts (xi, 0) with
    probability axis_prob, else (0, xi). ``xi_law`` overrides the
    Pareto(alpha) magnitude law (degenerate laws allowed, for structural
    tests)."""

    alpha: TailIndex
    axis_prob: float
    xi_law: Optional[ScalarLaw] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", _coerce_index(self.alpha))
        p = float(self.axis_prob)
        if not 0.0 <= p <= 1.0:
            raise UsageError(f"axis_prob must lie in [0, 1], got {p}")
        object.__setattr__(self, "axis_prob", p)
        if isinstance(self.xi_law, PointMass) and self.xi_law.c < 0:
            raise UsageError(
                f"point mass for a magnitude law must be >= 0, got {self.xi_law.c}"
            )

    @property
    def magnitude_law(self) -> ScalarLaw:
        return self.xi_law if self.xi_law is not None else Pareto(self.alpha)


@dataclass(frozen=True)
class IidParetoPair:
    """Two independent Pareto(alpha) coordinates."""

    alpha: TailIndex

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", _coerce_index(self.alpha))


@dataclass(frozen=True)
class RadialRatio:
    """V = B R(theta, 1) + (1-B) R(1, theta) with R Pareto(alpha0) and
    theta Pareto(alpha_star): a hidden-E0 construction whose angular ratio
    law is itself heavy tailed."""

    alpha0: TailIndex
    alpha_star: TailIndex
    p: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha0", _coerce_index(self.alpha0))
        object.__setattr__(self, "alpha_star", _coerce_index(self.alpha_star))
        p = float(self.p)
        if not 0.0 <= p <= 1.0:
            raise UsageError(f"p must lie in [0, 1], got {p}")
        object.__setattr__(self, "p", p)

    def as_hidden(self) -> HiddenE0:
        g = Pareto(self.alpha_star)
        return HiddenE0(self.alpha0, HiddenAngularSpec(self.p, g, g))


@dataclass(frozen=True)
class Mixture:
    mix_prob: float
    y: AxesY
    v: HiddenE0

    def __post_init__(self) -> None:
        p = float(self.mix_prob)
        if not 0.0 <= p <= 1.0:
            raise UsageError(f"mix_prob must lie in [0, 1], got {p}")
        object.__setattr__(self, "mix_prob", p)


AdditiveY = Union[AxesY, IidParetoPair]
AdditiveV = Union[IidParetoPair, HiddenE0, RadialRatio]


@dataclass(frozen=True)
class Additive:
    y: AdditiveY
    v: AdditiveV

    def __post_init__(self) -> None:
        if not isinstance(self.y, (AxesY, IidParetoPair)):
            raise UsageError(f"additive y must be AxesY or IidParetoPair, got {self.y!r}")
        if not isinstance(self.v, (IidParetoPair, HiddenE0, RadialRatio)):
            raise UsageError(
                f"additive v must be IidParetoPair, HiddenE0 or RadialRatio, got {self.v!r}"
            )


GeneratorSpec = Union[RadialAngularE, HiddenE0, AxesY, IidParetoPair, RadialRatio, Mixture, Additive]


def _coerce_index(alpha) -> TailIndex:
    return alpha if isinstance(alpha, TailIndex) else TailIndex(float(alpha))


# ---------------------------------------------------------------------------
# Batches


@dataclass
class SampleBatch:
    """n bivariate nonnegative observations plus provenance metadata."""

    pairs: np.ndarray  # shape (n, 2), float64
    meta: dict

    @property
    def n(self) -> int:
        return int(self.pairs.shape[0])

    @property
    def z1(self) -> np.ndarray:
        return self.pairs[:, 0]

    @property
    def z2(self) -> np.ndarray:
        return self.pairs[:, 1]


def _make_batch(pairs: np.ndarray, spec: GeneratorSpec, rng: RngStream, extra: dict | None = None) -> SampleBatch:
    meta = {
        "spec": spec_to_json(spec),
        "spec_fingerprint": spec_fingerprint(spec),
        "seed": rng.seed,
        "stream_path": list(rng.path),
        "n": int(pairs.shape[0]),
        "rng": rng.describe()["algorithm"],
        "partitions": 1,
    }
    if extra:
        meta.update(extra)
    return SampleBatch(pairs=pairs, meta=meta)


# ---------------------------------------------------------------------------
# Generators


def gen_radial_angular_E(
    alpha: TailIndex | float, angular: AngularLawE, n: int, rng: RngStream
) -> SampleBatch:
    """Z = R * (W, 1-W) with R Pareto(alpha), W from the angular law.

    Substreams: 0 = radii, 1 = angles. The larger coordinate is computed
    first as fl(r * max(w, 1-w)) in [r/2, r]; the smaller one is the exact
    difference r - z_big (Sterbenz), so z1 + z2 == r holds exactly on
    every sample.
    """
    spec = RadialAngularE(_coerce_index(alpha), angular)
    r = sample_scalar(Pareto(spec.alpha), n, rng.substream(0))
    w = sample_angular(angular, n, rng.substream(1))
    big_share = np.maximum(w, 1.0 - w)
    z_big = r * big_share
    z_small = r - z_big
    first_is_big = w >= 0.5
    z1 = np.where(first_is_big, z_big, z_small)
    z2 = np.where(first_is_big, z_small, z_big)
    return _make_batch(np.column_stack([z1, z2]), spec, rng)


def _hidden_components(
    alpha0: TailIndex, angular: HiddenAngularSpec, n: int, rng: RngStream
) -> dict:
    """Shared kernel for hidden-E0 style generation.

    Substreams: 0 = radii, 1 = branch switch, 2 = g1 draws, 3 = g2 draws.
    Returns the emitted coordinates together with the internal draws;
    ``theta`` is the effective angular component fl(z_big / r0) actually
    present in the output (within 1 ulp of the raw g draw).
    """
    r0 = sample_scalar(Pareto(alpha0), n, rng.substream(0))
    b = bernoulli_vector(angular.p, n, rng.substream(1))
    t1 = sample_scalar(angular.g1, n, rng.substream(2))
    t2 = sample_scalar(angular.g2, n, rng.substream(3))
    theta_draw = np.where(b == 1, t1, t2)
    z_big = r0 * theta_draw
    first_larger = b == 1
    z1 = np.where(first_larger, z_big, r0)
    z2 = np.where(first_larger, r0, z_big)
    theta_eff = z_big / r0
    return {"z1": z1, "z2": z2, "r0": r0, "theta": theta_eff, "branch": b}


def gen_hidden_E0(
    alpha0: TailIndex | float, angular: HiddenAngularSpec, n: int, rng: RngStream
) -> SampleBatch:
    """Z = R0 * Theta0, Theta0 = B(theta1, 1) + (1-B)(1, theta2).

    min(z1, z2) == r0 exactly (theta >= 1 and rounding is monotone), and
    the max ratio recovered by gpolar_axes equals the recorded angular
    component exactly (see _hidden_components).
    """
    spec = HiddenE0(_coerce_index(alpha0), angular)
    c = _hidden_components(spec.alpha0, angular, n, rng)
    return _make_batch(np.column_stack([c["z1"], c["z2"]]), spec, rng)


def gen_axes_Y(
    alpha: TailIndex | float,
    axis_prob: float,
    n: int,
    rng: RngStream,
    xi_law: ScalarLaw | None = None,
) -> SampleBatch:
    """Axes-supported Y: (xi, 0) with probability axis_prob, else (0, xi).

    Substreams: 0 = magnitudes, 1 = axis switch. One switching variable
    places every point on exactly one axis, so min(z1, z2) == 0 always.
    """
    spec = AxesY(_coerce_index(alpha), axis_prob, xi_law)
    xi = sample_scalar(spec.magnitude_law, n, rng.substream(0))
    b = bernoulli_vector(spec.axis_prob, n, rng.substream(1))
    horizontal = b == 1
    z1 = np.where(horizontal, xi, 0.0)
    z2 = np.where(horizontal, 0.0, xi)
    return _make_batch(np.column_stack([z1, z2]), spec, rng)


def gen_mixture(
    mix_prob: float, y: AxesY, v: HiddenE0, n: int, rng: RngStream
) -> SampleBatch:
    """Z = BY + (1-B)V: per point, a Y draw with probability mix_prob.

    Substreams: 0 = mixture switch, 1 = Y component, 2 = V component.
    """
    spec = Mixture(mix_prob, y, v)
    b = bernoulli_vector(spec.mix_prob, n, rng.substream(0))
    y_batch = gen_axes_Y(y.alpha, y.axis_prob, n, rng.substream(1), xi_law=y.xi_law)
    v_batch = gen_hidden_E0(v.alpha0, v.angular, n, rng.substream(2))
    take_y = (b == 1)[:, None]
    pairs = np.where(take_y, y_batch.pairs, v_batch.pairs)
    return _make_batch(pairs, spec, rng)


def _gen_component_pairs(spec: AdditiveY | AdditiveV, n: int, rng: RngStream) -> np.ndarray:
    if isinstance(spec, AxesY):
        return gen_axes_Y(spec.alpha, spec.axis_prob, n, rng, xi_law=spec.xi_law).pairs
    if isinstance(spec, IidParetoPair):
        z1 = sample_scalar(Pareto(spec.alpha), n, rng.substream(0))
        z2 = sample_scalar(Pareto(spec.alpha), n, rng.substream(1))
        return np.column_stack([z1, z2])
    if isinstance(spec, RadialRatio):
        hidden = spec.as_hidden()
        return gen_hidden_E0(hidden.alpha0, hidden.angular, n, rng).pairs
    if isinstance(spec, HiddenE0):
        return gen_hidden_E0(spec.alpha0, spec.angular, n, rng).pairs
    raise UsageError(f"unknown additive component: {spec!r}")


def gen_additive(y_spec: AdditiveY, v_spec: AdditiveV, n: int, rng: RngStream) -> SampleBatch:
    """Z = Y + V with independent components.

    Substreams: 0 = Y component, 1 = V component. Batch metadata records
    the competition regime tag (case1/case2/case3) when it is derivable
    from the component configuration; see additive_regime.
    """
    spec = Additive(y_spec, v_spec)
    y_pairs = _gen_component_pairs(y_spec, n, rng.substream(0))
    v_pairs = _gen_component_pairs(v_spec, n, rng.substream(1))
    extra = {}
    regime = additive_regime(spec)
    if regime is not None:
        extra["regime"] = regime
    return _make_batch(y_pairs + v_pairs, spec, rng, extra=extra)


def generate(spec: GeneratorSpec, n: int, rng: RngStream | int) -> SampleBatch:
    """Dispatch a GeneratorSpec; rng may be a stream or a bare seed."""
    if not isinstance(rng, RngStream):
        rng = RngStream(int(rng))
    if isinstance(spec, RadialAngularE):
        return gen_radial_angular_E(spec.alpha, spec.angular, n, rng)
    if isinstance(spec, HiddenE0):
        return gen_hidden_E0(spec.alpha0, spec.angular, n, rng)
    if isinstance(spec, AxesY):
        return gen_axes_Y(spec.alpha, spec.axis_prob, n, rng, xi_law=spec.xi_law)
    if isinstance(spec, IidParetoPair):
        return _make_batch(_gen_component_pairs(spec, n, rng), spec, rng)
    if isinstance(spec, RadialRatio):
        hidden = spec.as_hidden()
        return _make_batch(
            gen_hidden_E0(hidden.alpha0, hidden.angular, n, rng).pairs, spec, rng
        )
    if isinstance(spec, Mixture):
        return gen_mixture(spec.mix_prob, spec.y, spec.v, n, rng)
    if isinstance(spec, Additive):
        return gen_additive(spec.y, spec.v, n, rng)
    raise UsageError(f"unknown generator spec: {spec!r}")


# ---------------------------------------------------------------------------
# Regime tagging for additive constructions


def _marginal_index_of_v(v: AdditiveV) -> tuple[float, float] | None:
    """(alpha_star_eff, alpha0_eff) for an additive V component.

    alpha_star_eff is the marginal tail index of V (for product radii,
    Breiman: the heavier of the radial and ratio tails); alpha0_eff its
    hidden/interior index.
    """
    if isinstance(v, IidParetoPair):
        a = v.alpha.value
        return a, 2.0 * a
    if isinstance(v, RadialRatio):
        return min(v.alpha_star.value, v.alpha0.value), v.alpha0.value
    if isinstance(v, HiddenE0):
        a0 = v.alpha0.value
        heavy = [
            g.alpha.value for g in (v.angular.g1, v.angular.g2) if isinstance(g, Pareto)
        ]
        return min([a0] + heavy), a0
    return None


def additive_regime(spec: Additive) -> str | None:
    """case1/case2/case3 from the sign of alpha_star - (alpha0 - alpha).

    case1: the cross term dominates (hidden index alpha + alpha_star);
    case2: V's own interior tail dominates (hidden index alpha0);
    case3: exact balance (mixed limit measure). None when the tag is not
    derivable (e.g. a degenerate magnitude-law override on Y).
    """
    y = spec.y
    if isinstance(y, AxesY):
        if y.xi_law is not None and not isinstance(y.xi_law, Pareto):
            return None
        alpha = y.xi_law.alpha.value if isinstance(y.xi_law, Pareto) else y.alpha.value
    else:
        alpha = y.alpha.value
    idx = _marginal_index_of_v(spec.v)
    if idx is None:
        return None
    alpha_star, alpha0 = idx
    gap = alpha_star - (alpha0 - alpha)
    if gap < 0.0:
        return "case1"
    if gap > 0.0:
        return "case2"
    return "case3"


# ---------------------------------------------------------------------------
# JSON serialization


def _angular_to_json(law: AngularLawE) -> dict:
    if isinstance(law, Uniform01):
        return {"kind": "uniform01"}
    if isinstance(law, AngularPointMass):
        return {"kind": "point_mass", "w": law.w}
    if isinstance(law, AngularTwoPoint):
        return {"kind": "two_point", "w_low": law.w_low, "w_high": law.w_high, "p_high": law.p_high}
    raise UsageError(f"unknown angular law: {law!r}")


def _angular_from_json(doc: dict) -> AngularLawE:
    kind = doc.get("kind")
    if kind == "uniform01":
        return Uniform01()
    if kind == "point_mass":
        return AngularPointMass(doc["w"])
    if kind == "two_point":
        return AngularTwoPoint(doc["w_low"], doc["w_high"], doc["p_high"])
    raise UsageError(f"unknown angular law kind {kind!r}")


def spec_to_json(spec: GeneratorSpec) -> dict:
    if isinstance(spec, RadialAngularE):
        return {
            "kind": "radial_angular_e",
            "alpha": spec.alpha.value,
            "angular": _angular_to_json(spec.angular),
        }
    if isinstance(spec, HiddenE0):
        return {
            "kind": "hidden_e0",
            "alpha0": spec.alpha0.value,
            "p": spec.angular.p,
            "g1": law_to_json(spec.angular.g1),
            "g2": law_to_json(spec.angular.g2),
        }
    if isinstance(spec, AxesY):
        doc = {"kind": "axes_y", "alpha": spec.alpha.value, "axis_prob": spec.axis_prob}
        if spec.xi_law is not None:
            doc["xi_law"] = law_to_json(spec.xi_law)
        return doc
    if isinstance(spec, IidParetoPair):
        return {"kind": "iid_pareto_pair", "alpha": spec.alpha.value}
    if isinstance(spec, RadialRatio):
        return {
            "kind": "radial_ratio",
            "alpha0": spec.alpha0.value,
            "alpha_star": spec.alpha_star.value,
            "p": spec.p,
        }
    if isinstance(spec, Mixture):
        return {
            "kind": "mixture",
            "mix_prob": spec.mix_prob,
            "y": spec_to_json(spec.y),
            "v": spec_to_json(spec.v),
        }
    if isinstance(spec, Additive):
        return {"kind": "additive", "y": spec_to_json(spec.y), "v": spec_to_json(spec.v)}
    raise UsageError(f"unknown generator spec: {spec!r}")


def spec_from_json(doc: dict) -> GeneratorSpec:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise UsageError(f"generator spec document must be an object with a 'kind', got {doc!r}")
    kind = doc["kind"]
    try:
        if kind == "radial_angular_e":
            return RadialAngularE(TailIndex(doc["alpha"]), _angular_from_json(doc["angular"]))
        if kind == "hidden_e0":
            return HiddenE0(
                TailIndex(doc["alpha0"]),
                HiddenAngularSpec(doc["p"], law_from_json(doc["g1"]), law_from_json(doc["g2"])),
            )
        if kind == "axes_y":
            xi_law = law_from_json(doc["xi_law"]) if "xi_law" in doc else None
            return AxesY(TailIndex(doc["alpha"]), doc["axis_prob"], xi_law)
        if kind == "iid_pareto_pair":
            return IidParetoPair(TailIndex(doc["alpha"]))
        if kind == "radial_ratio":
            return RadialRatio(TailIndex(doc["alpha0"]), TailIndex(doc["alpha_star"]), doc["p"])
        if kind == "mixture":
            y = spec_from_json(doc["y"])
            v = spec_from_json(doc["v"])
            if not isinstance(y, AxesY) or not isinstance(v, HiddenE0):
                raise UsageError("mixture needs y of kind axes_y and v of kind hidden_e0")
            return Mixture(doc["mix_prob"], y, v)
        if kind == "additive":
            return Additive(spec_from_json(doc["y"]), spec_from_json(doc["v"]))
    except KeyError as exc:
        raise UsageError(f"generator spec of kind {kind!r} is missing field {exc}") from exc
    raise UsageError(f"unknown generator spec kind {kind!r}")


def spec_fingerprint(spec: GeneratorSpec) -> str:
    """Stable hex digest of the canonical spec JSON."""
    canonical = json.dumps(spec_to_json(spec), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]
