"""hrvlab: simulation and detection diagnostics for bivariate heavy tails.

Generators produce batches with prescribed joint tail behavior on the
full quadrant and on its interior (hidden) cone; the diagnostics side
estimates marginal and minimum tail indices, branch-conditional limit
structure (Hillish / Pickandsish on generalized polar coordinates),
angular mass, and ratio tails, bundled into a reproducible report.
"""

from .core import (
    DomainError,
    Pareto,
    PointMass,
    RNG_ALGORITHM,
    RngStream,
    ScalarLaw,
    ShiftedUnitExponential,
    TOOL_VERSION,
    TailIndex,
    UnitExponential,
    UsageError,
    bernoulli,
    bernoulli_vector,
    law_from_json,
    law_to_json,
    sample_scalar,
)
from .diagnostics import (
    DensityEstimate,
    DetectConfig,
    DetectionReport,
    DiagnosticSeries,
    ThresholdedRatios,
    angular_density,
    detect_report,
    hill_series,
    hillish,
    hillish_series,
    kde,
    pickandsish,
    pickandsish_series,
    qhat_series,
    qq_exponential,
    report_to_json,
    thresholded_ratios,
)
from .generators import (
    Additive,
    AngularPointMass,
    AngularTwoPoint,
    AxesY,
    GeneratorSpec,
    HiddenAngularSpec,
    HiddenE0,
    IidParetoPair,
    Mixture,
    RadialAngularE,
    RadialRatio,
    SampleBatch,
    Uniform01,
    additive_regime,
    gen_additive,
    gen_axes_Y,
    gen_hidden_E0,
    gen_mixture,
    gen_radial_angular_E,
    generate,
    sample_angular,
    spec_fingerprint,
    spec_from_json,
    spec_to_json,
)
from .pipeline import (
    EXPERIMENTS,
    ExperimentDef,
    ExperimentSummary,
    RunConfig,
    get_experiment,
    read_pairs_csv,
    run_detect,
    run_experiment,
    run_generate,
    write_experiment_summary,
    write_pairs_csv,
    write_report_files,
)
from .transforms import (
    ConcomitantTable,
    PolarPointAxes,
    PolarPointOrigin,
    concomitant_table,
    gpolar_axes,
    gpolar_axes_batch,
    gpolar_origin,
    pareto_standardize,
    rank_transform,
)

__version__ = TOOL_VERSION

__all__ = [
    "__version__",
    # core
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
    # transforms
    "PolarPointOrigin",
    "PolarPointAxes",
    "ConcomitantTable",
    "gpolar_origin",
    "gpolar_axes",
    "gpolar_axes_batch",
    "rank_transform",
    "pareto_standardize",
    "concomitant_table",
    # generators
    "Uniform01",
    "AngularPointMass",
    "AngularTwoPoint",
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
    # diagnostics
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
    # pipeline
    "RunConfig",
    "ExperimentDef",
    "ExperimentSummary",
    "EXPERIMENTS",
    "get_experiment",
    "read_pairs_csv",
    "write_pairs_csv",
    "write_report_files",
    "run_generate",
    "run_detect",
    "run_experiment",
    "write_experiment_summary",
]
