"""Hardy-constant estimation and finite negative tests for (weak-)Hardy means"""

from hardylab.hardy_analysis.main import (
    EstimateVerdict,
    HardyEstimate,
    HardyRatio,
    Holds,
    TestVerdict,
    WeakHardyReport,
    combine_divergence,
    condition_iii_scan,
    export_series_csv,
    hardy_constant_estimate,
    hardy_divergence_test,
    hardy_ratio,
    log_growth_check,
    nearly_increasing_epsilon,
    prefix_ratios,
    ratio_divergence,
    ratio_sequence,
    sum_divergence,
    weak_hardy_test,
)
from hardylab.hardy_analysis.sequences import (
    SeqRule,
    SeqSpec,
    SeriesBuffer,
    seq_from_text,
)

__version__ = "1.0.0"

__all__ = [
    "EstimateVerdict",
    "HardyEstimate",
    "HardyRatio",
    "Holds",
    "SeqRule",
    "SeqSpec",
    "SeriesBuffer",
    "TestVerdict",
    "WeakHardyReport",
    "combine_divergence",
    "condition_iii_scan",
    "export_series_csv",
    "hardy_constant_estimate",
    "hardy_divergence_test",
    "hardy_ratio",
    "log_growth_check",
    "nearly_increasing_epsilon",
    "prefix_ratios",
    "ratio_divergence",
    "ratio_sequence",
    "seq_from_text",
    "sum_divergence",
    "weak_hardy_test",
]
