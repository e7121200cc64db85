"""Scalar distribution sampling and the reproducible RNG contract.

Everything downstream (generators, diagnostics, pipeline) builds on the
pieces here: validated tail indices, the small family of scalar laws the
bivariate constructions need, and counter-based random streams that are
bit-reproducible across platforms and library versions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "TOOL_VERSION",
    "RNG_ALGORITHM",
    "UsageError",
    "DomainError",
    "TailIndex",
    "Pareto",
    "UnitExponential",
    "ShiftedUnitExponential",
    "PointMass",
    "ScalarLaw",
    "RngStream",
    "sample_scalar",
    "bernoulli",
    "bernoulli_vector",
    "law_to_json",
    "law_from_json",
]

#: Package version, recorded in report and experiment provenance.
TOOL_VERSION = "0.1.0"

#: Identity of the underlying bit generator, recorded in all metadata.
RNG_ALGORITHM = "philox4x64"

# Uniform variates are built from 52-bit integers as u = (i + 0.5) * 2**-52.
# Both i + 0.5 and the product are exactly representable, so u is strictly
# inside (0, 1) by construction and identical on every IEEE-754 platform.
_UNIFORM_BITS = 52
_UNIFORM_SCALE = 2.0**-_UNIFORM_BITS


class UsageError(ValueError):
    """Bad invocation or configuration (CLI exit code 1)."""


class DomainError(ValueError):
    """Data violates a mathematical domain requirement (CLI exit code 2)."""


@dataclass(frozen=True)
class TailIndex:
    """A positive tail exponent (alpha, alpha0, alpha_star, ...)."""

    value: float

    def __post_init__(self) -> None:
        v = float(self.value)
        if not np.isfinite(v) or v <= 0.0:
            raise UsageError(f"tail index must be a positive finite real, got {self.value!r}")
        object.__setattr__(self, "value", v)


def _as_tail_index(alpha: "TailIndex | float") -> TailIndex:
    return alpha if isinstance(alpha, TailIndex) else TailIndex(float(alpha))


@dataclass(frozen=True)
class Pareto:
    """Standard Pareto on [1, inf) with survival x**(-alpha)."""

    alpha: TailIndex

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", _as_tail_index(self.alpha))


@dataclass(frozen=True)
class UnitExponential:
    """Exp(1) on [0, inf)."""


@dataclass(frozen=True)
class ShiftedUnitExponential:
    """1 + Exp(1), supported on [1, inf)."""


@dataclass(frozen=True)
class PointMass:
    """Degenerate law returning the constant c."""

    c: float

    def __post_init__(self) -> None:
        c = float(self.c)
        if not np.isfinite(c):
            raise UsageError(f"point mass must be finite, got {self.c!r}")
        object.__setattr__(self, "c", c)


ScalarLaw = Union[Pareto, UnitExponential, ShiftedUnitExponential, PointMass]


class RngStream:
    """A named, splittable random stream.

    A stream is identified by (seed, path): the root stream has an empty
    path and ``substream(i)`` appends ``i``. Each identity maps to its own
    Philox counter sequence via ``SeedSequence([seed, *path])``, so
    replications and generator components can draw from provably
    independent streams that are reproducible from the seed alone.
    """

    def __init__(self, seed: int, path: tuple[int, ...] = ()):
        seed = int(seed)
        if seed < 0 or seed >= 2**64:
            raise UsageError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = seed
        self.path = tuple(int(p) for p in path)
        self._gen: np.random.Generator | None = None

    def substream(self, index: int) -> "RngStream":
        return RngStream(self.seed, self.path + (int(index),))

    def _generator(self) -> np.random.Generator:
        if self._gen is None:
            seq = np.random.SeedSequence([self.seed, *self.path])
            self._gen = np.random.Generator(np.random.Philox(seed=seq))
        return self._gen

    def uniform_open(self, n: int) -> np.ndarray:
        """n uniforms strictly inside (0, 1); see _UNIFORM_BITS above."""
        if n < 0:
            raise UsageError(f"n must be >= 0, got {n}")
        bits = self._generator().integers(0, 1 << _UNIFORM_BITS, size=int(n), dtype=np.uint64)
        return (bits.astype(np.float64) + 0.5) * _UNIFORM_SCALE

    def describe(self) -> dict:
        return {"algorithm": RNG_ALGORITHM, "seed": self.seed, "path": list(self.path)}

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"RngStream(seed={self.seed}, path={self.path})"


def sample_scalar(law: ScalarLaw, n: int, rng: RngStream) -> np.ndarray:
    """Draw n values from a scalar law by inverse transform.

    Pareto uses U**(-1/alpha) and the shifted exponential 1 - log(U), with
    U open-(0,1) uniforms, so every draw from a [1, inf)-supported law is
    >= 1 exactly.
    """
    if n < 0:
        raise UsageError(f"n must be >= 0, got {n}")
    n = int(n)
    if isinstance(law, PointMass):
        return np.full(n, law.c, dtype=np.float64)
    u = rng.uniform_open(n)
    if isinstance(law, Pareto):
        return u ** (-1.0 / law.alpha.value)
    if isinstance(law, UnitExponential):
        return -np.log(u)
    if isinstance(law, ShiftedUnitExponential):
        return 1.0 - np.log(u)
    raise UsageError(f"unknown scalar law: {law!r}")


def bernoulli(p: float, rng: RngStream) -> int:
    """One Bernoulli(p) draw as 0 or 1."""
    return int(bernoulli_vector(p, 1, rng)[0])


def bernoulli_vector(p: float, n: int, rng: RngStream) -> np.ndarray:
    """n iid Bernoulli(p) draws as a uint8 0/1 vector."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise UsageError(f"probability must lie in [0, 1], got {p}")
    return (rng.uniform_open(n) < p).astype(np.uint8)


_LAW_KINDS = {
    "pareto": Pareto,
    "unit_exponential": UnitExponential,
    "shifted_unit_exponential": ShiftedUnitExponential,
    "point_mass": PointMass,
}


def law_to_json(law: ScalarLaw) -> dict:
    if isinstance(law, Pareto):
        return {"kind": "pareto", "alpha": law.alpha.value}
    if isinstance(law, UnitExponential):
        return {"kind": "unit_exponential"}
    if isinstance(law, ShiftedUnitExponential):
        return {"kind": "shifted_unit_exponential"}
    if isinstance(law, PointMass):
        return {"kind": "point_mass", "c": law.c}
    raise UsageError(f"unknown scalar law: {law!r}")


def law_from_json(doc: dict) -> ScalarLaw:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise UsageError(f"scalar law document must be an object with a 'kind', got {doc!r}")
    kind = doc["kind"]
    if kind == "pareto":
        return Pareto(TailIndex(doc["alpha"]))
    if kind == "unit_exponential":
        return UnitExponential()
    if kind == "shifted_unit_exponential":
        return ShiftedUnitExponential()
    if kind == "point_mass":
        return PointMass(doc["c"])
    raise UsageError(f"unknown scalar law kind {kind!r}; expected one of {sorted(_LAW_KINDS)}")
