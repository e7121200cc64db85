"""File formats, run configuration, and the experiment registry/runner.

External interfaces:

* pairs CSV — header ``z1,z2``, one observation per line, LF endings,
  UTF-8, floats written with shortest round-trip ``repr``. A generated
  CSV gets a ``<name>.meta.json`` sidecar carrying the full provenance
  (spec JSON, seed, stream path, RNG identity).
* report directory — ``report.json`` (single document: meta / series /
  qq / densities) plus one small CSV per series, QQ point set, and
  density, named by the series label.
* experiment summary — ``summary.json`` with per-replication read-offs,
  their medians, reference values, and provenance.

Everything written here is byte-deterministic: no timestamps, no
environment-dependent content, keys sorted.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .core import (
    DomainError,
    RNG_ALGORITHM,
    RngStream,
    ShiftedUnitExponential,
    TOOL_VERSION,
    UsageError,
)
from .diagnostics import (
    DetectConfig,
    DetectionReport,
    detect_report,
    report_to_json,
)
from .generators import (
    Additive,
    AxesY,
    GeneratorSpec,
    HiddenAngularSpec,
    HiddenE0,
    IidParetoPair,
    RadialRatio,
    SampleBatch,
    additive_regime,
    generate,
    spec_from_json,
    spec_to_json,
)

__all__ = [
    "PAIRS_HEADER",
    "write_pairs_csv",
    "read_pairs_csv",
    "write_report_files",
    "RunConfig",
    "ExperimentDef",
    "ExperimentSummary",
    "EXPERIMENTS",
    "get_experiment",
    "run_generate",
    "run_detect",
    "run_experiment",
    "write_experiment_summary",
]

PAIRS_HEADER = "z1,z2"


# ---------------------------------------------------------------------------
# Pairs CSV


def _as_pairs_array(pairs: Union[SampleBatch, np.ndarray]) -> np.ndarray:
    arr = pairs.pairs if isinstance(pairs, SampleBatch) else np.asarray(pairs, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise UsageError(f"expected an (n, 2) array of pairs, got shape {arr.shape}")
    return arr


def write_pairs_csv(pairs: Union[SampleBatch, np.ndarray], path: Union[str, Path]) -> Path:
    """Write observations as ``z1,z2`` CSV (LF, UTF-8, repr floats)."""
    arr = _as_pairs_array(pairs)
    if not np.all(np.isfinite(arr)):
        raise DomainError("refusing to write non-finite coordinates")
    path = Path(path)
    lines = [PAIRS_HEADER]
    lines.extend(f"{float(a)!r},{float(b)!r}" for a, b in arr)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    return path


def read_pairs_csv(path: Union[str, Path]) -> np.ndarray:
    """Read a ``z1,z2`` CSV; malformed content reports its physical
    1-based line number (the header is line 1)."""
    path = Path(path)
    if not path.is_file():
        raise UsageError(f"input file not found: {path}")
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise DomainError(f"{path}: not valid UTF-8 ({exc})") from exc
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0].strip().rstrip("\r") != PAIRS_HEADER:
        got = lines[0].strip() if lines else ""
        raise DomainError(f"{path}: line 1: expected header {PAIRS_HEADER!r}, got {got!r}")
    rows = np.empty((len(lines) - 1, 2), dtype=np.float64)
    for i, line in enumerate(lines[1:]):
        lineno = i + 2
        parts = line.rstrip("\r").split(",")
        if len(parts) != 2:
            raise DomainError(
                f"{path}: line {lineno}: expected 2 comma-separated values, got {len(parts)}"
            )
        for j, part in enumerate(parts):
            try:
                v = float(part)
            except ValueError:
                raise DomainError(
                    f"{path}: line {lineno}: could not parse {part.strip()!r} as a number"
                ) from None
            if not math.isfinite(v):
                raise DomainError(f"{path}: line {lineno}: non-finite value {part.strip()!r}")
            rows[i, j] = v
    if rows.shape[0] == 0:
        raise DomainError(f"{path}: no data rows")
    return rows


# ---------------------------------------------------------------------------
# Report directory


def _write_csv(path: Path, header: str, rows) -> None:
    lines = [header]
    lines.extend(rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _dump_json(doc: dict, path: Path) -> None:
    path.write_text(
        json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8", newline="\n"
    )


def write_report_files(report: DetectionReport, outdir: Union[str, Path]) -> Path:
    """Write report.json plus one CSV per series/qq/density; returns the
    path of report.json."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    _dump_json(report_to_json(report), out / "report.json")
    for label, s in sorted(report.series.items()):
        _write_csv(
            out / f"{label}.csv",
            "k,value",
            (f"{int(k)},{float(v)!r}" for k, v in zip(s.ks, s.values)),
        )
    for label, pts in sorted(report.qq.items()):
        _write_csv(
            out / f"{label}.csv",
            "theoretical,empirical",
            (f"{float(t)!r},{float(e)!r}" for t, e in pts),
        )
    for label, d in sorted(report.densities.items()):
        _write_csv(
            out / f"{label}.csv",
            "x,density",
            (f"{float(x)!r},{float(y)!r}" for x, y in zip(d.grid, d.density)),
        )
    return out / "report.json"


# ---------------------------------------------------------------------------
# Run configuration


@dataclass(frozen=True)
class RunConfig:
    """Optional knobs shared by the CLI and the runners; None means
    'use the default'. A JSON config file fills fields, command-line
    flags override them."""

    n: Optional[int] = None
    seed: Optional[int] = None
    experiment: Optional[str] = None
    replications: Optional[int] = None
    q_list: Optional[tuple] = None
    thresholds: Optional[tuple] = None
    rank_mode: Optional[str] = None
    k_min: Optional[int] = None
    k_max: Optional[int] = None
    k_step: Optional[int] = None
    angular_k: Optional[int] = None
    kde_grid_size: Optional[int] = None
    spec: Optional[GeneratorSpec] = None

    @classmethod
    def from_json_file(cls, path: Union[str, Path]) -> "RunConfig":
        path = Path(path)
        if not path.is_file():
            raise UsageError(f"config file not found: {path}")
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise UsageError(f"{path}: invalid JSON config ({exc})") from exc
        if not isinstance(data, dict):
            raise UsageError(f"{path}: config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise UsageError(f"{path}: unknown config keys {unknown}; known keys: {sorted(known)}")
        kwargs = dict(data)
        if "spec" in kwargs and kwargs["spec"] is not None:
            kwargs["spec"] = spec_from_json(kwargs["spec"])
        for key in ("q_list", "thresholds"):
            if kwargs.get(key) is not None:
                kwargs[key] = tuple(kwargs[key])
        return cls(**kwargs)

    def merged_with(self, overrides: "RunConfig") -> "RunConfig":
        """Field-wise merge; non-None fields of ``overrides`` win."""
        merged = {}
        for f in fields(self):
            ov = getattr(overrides, f.name)
            merged[f.name] = ov if ov is not None else getattr(self, f.name)
        return RunConfig(**merged)

    def detect_config(self) -> DetectConfig:
        kwargs = {}
        for name in (
            "q_list",
            "thresholds",
            "rank_mode",
            "k_min",
            "k_max",
            "k_step",
            "angular_k",
            "kde_grid_size",
        ):
            v = getattr(self, name)
            if v is not None:
                kwargs[name] = v
        return DetectConfig(**kwargs)


# ---------------------------------------------------------------------------
# Experiment registry


@dataclass(frozen=True)
class ExperimentDef:
    """A registered synthetic study: generator spec, sample size, detect
    thresholds, and the k values at which the summary reads each series."""

    name: str
    spec: GeneratorSpec
    n: int
    thresholds: tuple
    marginal_k: int
    min_k: int
    cev_k: int
    qhat_k: int
    ratio_threshold: int
    ratio_hill_k: int
    refs: dict

    def detect_config(self) -> DetectConfig:
        return DetectConfig(thresholds=self.thresholds)


def _ex31(case: int, alpha: float) -> ExperimentDef:
    spec = Additive(
        y=AxesY(alpha, 0.5),
        v=HiddenE0(
            2.0,
            HiddenAngularSpec(0.5, ShiftedUnitExponential(), ShiftedUnitExponential()),
        ),
    )
    return ExperimentDef(
        name=f"ex31-case{case}",
        spec=spec,
        n=10_000,
        thresholds=(100, 400),
        marginal_k=500,
        min_k=500,
        cev_k=1000,
        qhat_k=100,
        ratio_threshold=100,
        ratio_hill_k=50,
        refs={
            "marginal_index": alpha,
            "hidden_index": 2.0,
            "ratio_index": None,  # light-tailed angular ratio law
            "regime": additive_regime(spec),
            "branch_fraction": 0.5,
        },
    )


def _ex32(case: int, v, hidden_index: float, ratio_index: float, ratio_hill_k: int) -> ExperimentDef:
    spec = Additive(y=AxesY(0.5, 0.5), v=v)
    return ExperimentDef(
        name=f"ex32-case{case}",
        spec=spec,
        n=10_000,
        thresholds=(100, 200, 400),
        marginal_k=500,
        min_k=200,
        cev_k=1000,
        qhat_k=100,
        ratio_threshold=200,
        ratio_hill_k=ratio_hill_k,
        refs={
            "marginal_index": 0.5,
            "hidden_index": hidden_index,
            "ratio_index": ratio_index,
            "regime": additive_regime(spec),
            "branch_fraction": 0.5,
        },
    )


EXPERIMENTS = {
    "ex31-case1": _ex31(1, 1.0),
    "ex31-case2": _ex31(2, 1.5),
    "ex31-case3": _ex31(3, 0.5),
    # ratio_hill_k is read off a stable stretch of each case's ratio Hill
    # plot: the additive axes part contaminates the far tail of the ratio
    # sample in cases 1/3 (read low k) and the bulk in case 2 (read high k).
    "ex32-case1": _ex32(1, IidParetoPair(1.0), 1.5, 0.5, ratio_hill_k=50),
    "ex32-case2": _ex32(2, RadialRatio(1.25, 1.0, 0.5), 1.25, 1.0, ratio_hill_k=199),
    "ex32-case3": _ex32(3, RadialRatio(1.5, 1.0, 0.5), 1.5, 0.5, ratio_hill_k=50),
}


def get_experiment(name: str) -> ExperimentDef:
    try:
        return EXPERIMENTS[name]
    except KeyError:
        raise UsageError(
            f"unknown experiment {name!r}; available: {sorted(EXPERIMENTS)}"
        ) from None


# ---------------------------------------------------------------------------
# Runners


def run_generate(
    spec: GeneratorSpec, n: int, seed: int, out_path: Union[str, Path]
) -> tuple[Path, Path]:
    """Generate a batch and write ``out_path`` CSV plus its
    ``<out_path>.meta.json`` provenance sidecar."""
    batch = generate(spec, n, RngStream(seed))
    csv_path = write_pairs_csv(batch, out_path)
    meta_path = Path(str(csv_path) + ".meta.json")
    _dump_json({**batch.meta, "tool_version": TOOL_VERSION}, meta_path)
    return csv_path, meta_path


def run_detect(
    source: Union[str, Path, SampleBatch, np.ndarray],
    config: Optional[DetectConfig] = None,
    out_dir: Optional[Union[str, Path]] = None,
) -> DetectionReport:
    """Run the diagnostic battery on a CSV file, SampleBatch, or array;
    optionally write the report directory."""
    if isinstance(source, (str, Path)):
        arr = read_pairs_csv(source)
        report = detect_report(arr, config)
        src_meta: dict = {
            "path": str(source),
            "sha256": hashlib.sha256(Path(source).read_bytes()).hexdigest(),
        }
        sidecar = Path(str(source) + ".meta.json")
        if sidecar.is_file():
            try:
                src_meta["generator"] = json.loads(sidecar.read_text(encoding="utf-8"))
            except (json.JSONDecodeError, UnicodeDecodeError) as exc:
                raise DomainError(f"{sidecar}: invalid provenance sidecar ({exc})") from exc
        report.meta["source"] = src_meta
    else:
        report = detect_report(source, config)
    if out_dir is not None:
        write_report_files(report, out_dir)
    return report


def _read_offs(exp: ExperimentDef, report: DetectionReport) -> dict:
    q0 = report.meta["q_list"][0]
    series = report.series
    out = {
        "marginal_hill_1": series["marginal_hill_1"].value_at(exp.marginal_k),
        "marginal_hill_2": series["marginal_hill_2"].value_at(exp.marginal_k),
        "min_hill": series["min_hill"].value_at(exp.min_k),
        "hillish_pos_1": series["hillish_pos_1"].value_at(exp.cev_k),
        "hillish_neg_1": series["hillish_neg_1"].value_at(exp.cev_k),
        "hillish_pos_2": series["hillish_pos_2"].value_at(exp.cev_k),
        "hillish_neg_2": series["hillish_neg_2"].value_at(exp.cev_k),
        "pickandsish_1": series[f"pickandsish_1@q{q0:g}"].value_at(exp.cev_k),
        "pickandsish_2": series[f"pickandsish_2@q{q0:g}"].value_at(exp.cev_k),
        "qhat": series["qhat"].value_at(exp.qhat_k),
        "ratio_tail_hill_max": series[
            f"ratio_tail_hill_max@k{exp.ratio_threshold}"
        ].value_at(exp.ratio_hill_k),
    }
    return out


@dataclass
class ExperimentSummary:
    """Per-replication read-offs, their medians, and provenance."""

    experiment: str
    n: int
    replications: int
    base_seed: int
    read_offs: list
    medians: dict
    refs: dict
    provenance: dict

    def to_json(self) -> dict:
        return {
            "experiment": self.experiment,
            "n": self.n,
            "replications": self.replications,
            "base_seed": self.base_seed,
            "read_offs": self.read_offs,
            "medians": self.medians,
            "refs": self.refs,
            "provenance": self.provenance,
        }


def run_experiment(
    name: str,
    seed: int,
    replications: int = 1,
    n: Optional[int] = None,
    out_dir: Optional[Union[str, Path]] = None,
) -> ExperimentSummary:
    """Run a registered experiment: ``replications`` independent batches
    (seeds base, base+1, ...), full detection on each, and the registered
    read-offs summarized by their medians. With ``out_dir``, writes
    summary.json plus a rep-### report directory per replication."""
    exp = get_experiment(name)
    replications = int(replications)
    if replications < 1:
        raise UsageError(f"replications must be >= 1, got {replications}")
    n = int(n) if n is not None else exp.n
    cfg = exp.detect_config()
    seeds = [(int(seed) + i) % 2**64 for i in range(replications)]
    read_offs = []
    for i, s in enumerate(seeds):
        batch = generate(exp.spec, n, RngStream(s))
        report = detect_report(batch, cfg)
        read_offs.append(_read_offs(exp, report))
        if out_dir is not None:
            write_report_files(report, Path(out_dir) / f"rep-{i:03d}")
    medians = {
        key: float(np.median([r[key] for r in read_offs])) for key in read_offs[0]
    }
    summary = ExperimentSummary(
        experiment=name,
        n=n,
        replications=replications,
        base_seed=int(seed),
        read_offs=read_offs,
        medians=medians,
        refs=dict(exp.refs),
        provenance={
            "spec": spec_to_json(exp.spec),
            "seeds": seeds,
            "rng": RNG_ALGORITHM,
            "tool_version": TOOL_VERSION,
            "detect": {
                "thresholds": list(exp.thresholds),
                "rank_mode": cfg.rank_mode,
            },
            "read_off_ks": {
                "marginal_k": exp.marginal_k,
                "min_k": exp.min_k,
                "cev_k": exp.cev_k,
                "qhat_k": exp.qhat_k,
                "ratio_threshold": exp.ratio_threshold,
                "ratio_hill_k": exp.ratio_hill_k,
            },
        },
    )
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        _dump_json(summary.to_json(), out / "summary.json")
    return summary


def write_experiment_summary(summary: ExperimentSummary, path: Union[str, Path]) -> Path:
    path = Path(path)
    _dump_json(summary.to_json(), path)
    return path
