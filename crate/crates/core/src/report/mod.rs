//! Tables, figure data and run manifests assembled from persisted
//! per-agent evaluations.

mod compare;
mod frequency;
mod output;
mod prompts;

pub use compare::{
    delta_rows, ensure_paired, macro_avg, metric_keys, micro, paired_test, pretraining_comparison, scores_for,
    significance_grid, size_difference_table, BestPairRow, DeltaRow, GridRow, MetricKey, PairCountRow,
};
pub use frequency::{frequency_correlations, CorrelationRow, FrequencyTable};
pub use output::{
    curve_csv, emit_figures, entropy_mann_whitney, matrix_csv, write_metric_reports, write_reports, EntropyTestRow,
    Manifest, ManifestInput,
};
pub use prompts::{per_prompt_breakdown, PromptBreakdown, PromptValue};
