use statrs::distribution::{ContinuousCDF, Normal};

use super::rank::{midranks, tie_term};
use super::{check_alpha, two_sided_tail, Method, TestKind, TestResult};
use crate::error::{Error, Result};

/// Largest combined size with an exact permutation p.
pub const MANN_WHITNEY_EXACT_MAX: usize = 30;

/// Mann-Whitney U for independent samples. The reported statistic is
/// min(U1, U2); exact p comes from enumerating all splits of the doubled
/// midranks, so ties are handled without approximation.
pub fn mann_whitney_u(x: &[f64], y: &[f64], alpha: f64) -> Result<TestResult> {
    check_alpha(alpha)?;
    if x.is_empty() || y.is_empty() {
        return Err(Error::InvalidArgument("Mann-Whitney needs two non-empty samples".into()));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite value in sample".into()));
    }
    let (n1, n2) = (x.len(), y.len());
    let n = n1 + n2;
    let pooled: Vec<f64> = x.iter().chain(y).copied().collect();
    let (ranks, ties) = midranks(&pooled);
    let r1: f64 = ranks[..n1].iter().sum();
    let u1 = r1 - (n1 * (n1 + 1)) as f64 / 2.0;
    let u2 = (n1 * n2) as f64 - u1;
    let stat = u1.min(u2);
    let sizes = vec![n1, n2];
    if ties.len() == 1 && ties[0] == n {
        return Ok(TestResult::degenerate(TestKind::MannWhitney, stat, alpha, sizes));
    }

    if n <= MANN_WHITNEY_EXACT_MAX {
        let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
        let max: usize = doubled.iter().sum();
        // ways[j][s]: subsets of size j with doubled rank sum s
        let mut ways = vec![vec![0.0_f64; max + 1]; n1 + 1];
        ways[0][0] = 1.0;
        for &r in &doubled {
            for j in (1..=n1).rev() {
                for s in (r..=max).rev() {
                    let add = ways[j - 1][s - r];
                    if add != 0.0 {
                        ways[j][s] += add;
                    }
                }
            }
        }
        let observed = (2.0 * r1).round() as usize;
        let center2 = 2 * (n1 * (n + 1)) as i64;
        let p = two_sided_tail(&ways[n1], observed, center2);
        return Ok(TestResult::new(TestKind::MannWhitney, Method::Exact, stat, p, alpha, sizes));
    }
    let (f1, f2, nf) = (n1 as f64, n2 as f64, n as f64);
    let var = f1 * f2 / 12.0 * ((nf + 1.0) - tie_term(&ties) / (nf * (nf - 1.0)));
    let z = (u1 - f1 * f2 / 2.0) / var.sqrt();
    let p = 2.0 * Normal::standard().sf(z.abs());
    Ok(TestResult::new(TestKind::MannWhitney, Method::Normal, stat, p, alpha, sizes))
}
