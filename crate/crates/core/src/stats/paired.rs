use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use super::rank::{midranks, tie_term};
use super::{check_alpha, two_sided_tail, Method, TestKind, TestResult};
use crate::error::{Error, Result};

/// Discordant totals below this use the exact binomial test.
pub const MCNEMAR_EXACT_BELOW: u64 = 25;
/// Largest number of non-zero differences with exact signed-rank p.
pub const WILCOXON_EXACT_MAX: usize = 25;

fn binomial_half_cdf(k: u64, n: u64) -> f64 {
    // C(n, i) / 2^n accumulated in floats; n stays below 25 here.
    let mut c = 1.0_f64;
    let mut sum = 0.0;
    for i in 0..=k {
        if i > 0 {
            c = c * (n - i + 1) as f64 / i as f64;
        }
        sum += c;
    }
    sum / 2f64.powi(n as i32)
}

/// McNemar on discordant counts: `b` pairs where only the first agent
/// succeeds, `c` where only the second does. The statistic is always the
/// continuity-corrected chi-square.
pub fn mcnemar_counts(b: u64, c: u64, alpha: f64) -> Result<TestResult> {
    check_alpha(alpha)?;
    let n = b + c;
    let sizes = vec![n as usize];
    if n == 0 {
        return Ok(TestResult::degenerate(TestKind::McNemar, 0.0, alpha, sizes));
    }
    let diff = b.abs_diff(c) as f64;
    let stat = (diff - 1.0).powi(2) / n as f64;
    if n < MCNEMAR_EXACT_BELOW {
        let p = (2.0 * binomial_half_cdf(b.min(c), n)).min(1.0);
        Ok(TestResult::new(TestKind::McNemar, Method::Exact, stat, p, alpha, sizes))
    } else {
        let p = ChiSquared::new(1.0).expect("df 1").sf(stat);
        Ok(TestResult::new(TestKind::McNemar, Method::ChiSquare, stat, p, alpha, sizes))
    }
}

pub fn mcnemar(a: &[bool], b: &[bool], alpha: f64) -> Result<TestResult> {
    if a.len() != b.len() {
        return Err(Error::InvalidArgument(format!("paired outcomes of length {} and {}", a.len(), b.len())));
    }
    let only_a = a.iter().zip(b).filter(|(x, y)| **x && !**y).count() as u64;
    let only_b = a.iter().zip(b).filter(|(x, y)| !**x && **y).count() as u64;
    let mut r = mcnemar_counts(only_a, only_b, alpha)?;
    r.sample_sizes = vec![a.len()];
    Ok(r)
}

/// Wilcoxon signed-rank on `x − y`. Zero differences are dropped, ties get
/// midranks, and the statistic is the positive rank sum T+.
pub fn wilcoxon_signed_rank(x: &[f64], y: &[f64], alpha: f64) -> Result<TestResult> {
    check_alpha(alpha)?;
    if x.len() != y.len() {
        return Err(Error::InvalidArgument(format!("paired samples of length {} and {}", x.len(), y.len())));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite score in paired sample".into()));
    }
    let d: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).filter(|d| *d != 0.0).collect();
    let n = d.len();
    if n == 0 {
        return Ok(TestResult::degenerate(TestKind::Wilcoxon, 0.0, alpha, vec![x.len()]));
    }
    let abs: Vec<f64> = d.iter().map(|v| v.abs()).collect();
    let (ranks, ties) = midranks(&abs);
    let t_plus: f64 = d.iter().zip(&ranks).filter(|(v, _)| **v > 0.0).map(|(_, r)| r).sum();
    let sizes = vec![n];

    if n <= WILCOXON_EXACT_MAX {
        // Doubled ranks are integers; count sign assignments per doubled sum.
        let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
        let max: usize = doubled.iter().sum();
        let mut counts = vec![0.0_f64; max + 1];
        counts[0] = 1.0;
        for &r in &doubled {
            for s in (r..=max).rev() {
                counts[s] += counts[s - r];
            }
        }
        let observed = (2.0 * t_plus).round() as usize;
        let p = two_sided_tail(&counts, observed, max as i64);
        return Ok(TestResult::new(TestKind::Wilcoxon, Method::Exact, t_plus, p, alpha, sizes));
    }
    let nf = n as f64;
    let mean = nf * (nf + 1.0) / 4.0;
    let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term(&ties) / 48.0;
    if var <= 0.0 {
        return Ok(TestResult::degenerate(TestKind::Wilcoxon, t_plus, alpha, sizes));
    }
    let z = (t_plus - mean) / var.sqrt();
    let p = 2.0 * Normal::standard().sf(z.abs());
    Ok(TestResult::new(TestKind::Wilcoxon, Method::Normal, t_plus, p, alpha, sizes))
}
