//! Two-sided significance tests and rank correlation.
//!
//! Small samples use exact null distributions (binomial, signed-rank and
//! rank-sum enumeration over doubled midranks, full permutation for
//! Spearman); larger ones fall back to the usual asymptotic forms.

mod correlation;
mod levene;
mod paired;
mod rank;
mod rank_sum;

use serde::{Deserialize, Serialize};

pub use correlation::{spearman, CorrelationResult, SPEARMAN_EXACT_MAX};
pub use levene::levene;
pub use paired::{mcnemar, mcnemar_counts, wilcoxon_signed_rank, MCNEMAR_EXACT_BELOW, WILCOXON_EXACT_MAX};
pub use rank::midranks;
pub use rank_sum::{mann_whitney_u, MANN_WHITNEY_EXACT_MAX};

pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestKind {
    McNemar,
    Wilcoxon,
    MannWhitney,
    Levene,
}

impl TestKind {
    pub fn name(self) -> &'static str {
        match self {
            TestKind::McNemar => "mcnemar",
            TestKind::Wilcoxon => "wilcoxon",
            TestKind::MannWhitney => "mann-whitney",
            TestKind::Levene => "levene",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    ChiSquare,
    Normal,
    FDistribution,
    StudentT,
    /// No variation to test; p is fixed at 1.
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub test: TestKind,
    pub method: Method,
    pub statistic: f64,
    pub p_value: f64,
    pub alpha: f64,
    pub significant: bool,
    pub sample_sizes: Vec<usize>,
    pub degenerate: bool,
}

impl TestResult {
    pub(crate) fn new(test: TestKind, method: Method, statistic: f64, p_value: f64, alpha: f64, sample_sizes: Vec<usize>) -> Self {
        let p_value = p_value.clamp(0.0, 1.0);
        TestResult {
            test,
            method,
            statistic,
            p_value,
            alpha,
            significant: p_value < alpha,
            sample_sizes,
            degenerate: method == Method::Degenerate,
        }
    }

    pub(crate) fn degenerate(test: TestKind, statistic: f64, alpha: f64, sample_sizes: Vec<usize>) -> Self {
        Self::new(test, Method::Degenerate, statistic, 1.0, alpha, sample_sizes)
    }
}

/// Exact two-sided tail of a null given as counts per index: the mass of
/// indices at least as far from the centre as `observed`. The centre is
/// passed doubled so half-integer centres stay exact.
pub(crate) fn two_sided_tail(counts: &[f64], observed: usize, center2: i64) -> f64 {
    let dist = (2 * observed as i64 - center2).abs();
    let total: f64 = counts.iter().sum();
    let tail: f64 = counts
        .iter()
        .enumerate()
        .filter(|(s, _)| (2 * *s as i64 - center2).abs() >= dist)
        .map(|(_, c)| c)
        .sum();
    tail / total
}

pub(crate) fn check_alpha(alpha: f64) -> crate::Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(crate::Error::InvalidArgument(format!("significance level {alpha} outside (0, 1)")))
    }
}
