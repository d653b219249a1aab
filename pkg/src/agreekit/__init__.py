"""Toolkit for measuring rater-human concordance under rubric variants.

The package turns raw rating logs into tie-aware rank-correlation tables:
probability-weighted scoring of token distributions, aggregation of
sub-criterion ratings into pairwise preferences, Kendall tau-b with exact
pair decomposition, paired-bootstrap significance with rank-based
intervals, agreement-level stratification, and deterministic experiment
pipelines built on a counter-based RNG.
"""

from .aggregation import (
    AVERAGE_ALL,
    MAJORITY_VOTE,
    ConsolidationPolicy,
    PolicyKind,
    Preference,
    consolidate,
    follow_ratio,
    pareto_compare,
    scalar_compare,
    single_rater,
)
from .concordance import (
    IncomparablePolicy,
    TauResult,
    TauStatistic,
    preference_codes,
    scalar_codes,
    tau_preference,
    tau_scalar,
)
from .errors import AgreekitError, ConfigError, DataError
from .inference import (
    BootstrapInterval,
    Correction,
    Direction,
    TripleResult,
    bootstrap_tau_diff,
    compare_triple,
    rank_interval,
)
from .model import (
    OVERALL,
    CallStrategy,
    ComparisonKind,
    ComparisonVariant,
    Decomposition,
    ExampleRegime,
    RaterKind,
    RatingRecord,
    RubricCondition,
    ScoreFamily,
    ScoreScale,
    validate_record,
)
from .pipeline import anchor_holistic_score, run_experiment, write_report
from .promptkit import Example, RubricBundle, assemble_prompts, select_examples
from .providers import (
    Provider,
    ProviderRequest,
    ProviderResponse,
    ReplayProvider,
    ReplayStore,
    prompt_hash,
    query,
)
from .records import Dataset, Domain, ScaleMap, ingest, write_records
from .report import Marker, Report, ReportCell, annotate_significance, render_markers
from .rng import SplitMix64Stream, derive_seed, mix64
from .scoring import ScoreDistribution, parse_answer_tokens, weighted_score
from .stratify import AgreementLevel, partition_by_agreement

__version__ = "0.1.0"

__all__ = [
    "AVERAGE_ALL",
    "MAJORITY_VOTE",
    "AgreekitError",
    "AgreementLevel",
    "BootstrapInterval",
    "CallStrategy",
    "ComparisonKind",
    "ComparisonVariant",
    "ConfigError",
    "ConsolidationPolicy",
    "Correction",
    "DataError",
    "Dataset",
    "Decomposition",
    "Direction",
    "Domain",
    "Example",
    "ExampleRegime",
    "IncomparablePolicy",
    "Marker",
    "OVERALL",
    "PolicyKind",
    "Preference",
    "Provider",
    "ProviderRequest",
    "ProviderResponse",
    "RaterKind",
    "RatingRecord",
    "ReplayProvider",
    "ReplayStore",
    "Report",
    "ReportCell",
    "RubricBundle",
    "RubricCondition",
    "ScaleMap",
    "ScoreDistribution",
    "ScoreFamily",
    "ScoreScale",
    "SplitMix64Stream",
    "TauResult",
    "TauStatistic",
    "TripleResult",
    "anchor_holistic_score",
    "annotate_significance",
    "assemble_prompts",
    "bootstrap_tau_diff",
    "compare_triple",
    "consolidate",
    "derive_seed",
    "follow_ratio",
    "ingest",
    "mix64",
    "pareto_compare",
    "parse_answer_tokens",
    "partition_by_agreement",
    "preference_codes",
    "prompt_hash",
    "query",
    "rank_interval",
    "render_markers",
    "run_experiment",
    "scalar_codes",
    "scalar_compare",
    "select_examples",
    "single_rater",
    "tau_preference",
    "tau_scalar",
    "validate_record",
    "weighted_score",
    "write_records",
    "write_report",
]
