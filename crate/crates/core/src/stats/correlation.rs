use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::rank::midranks;
use super::{check_alpha, Method};
use crate::error::{Error, Result};

/// Largest n with an exact permutation p (n! orderings).
pub const SPEARMAN_EXACT_MAX: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    /// `None` when either variable is constant.
    pub rho: Option<f64>,
    pub p_value: f64,
    pub n: usize,
    pub method: Method,
    pub alpha: f64,
    pub significant: bool,
    pub degenerate: bool,
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Spearman's rho as the Pearson correlation of midranks, two-sided.
pub fn spearman(x: &[f64], y: &[f64], alpha: f64) -> Result<CorrelationResult> {
    check_alpha(alpha)?;
    if x.len() != y.len() {
        return Err(Error::InvalidArgument(format!("paired samples of length {} and {}", x.len(), y.len())));
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::InvalidArgument(format!("Spearman needs at least 3 pairs, got {n}")));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite value in sample".into()));
    }
    let (rx, _) = midranks(x);
    let (ry, _) = midranks(y);
    let Some(rho) = pearson(&rx, &ry) else {
        return Ok(CorrelationResult {
            rho: None,
            p_value: 1.0,
            n,
            method: Method::Degenerate,
            alpha,
            significant: false,
            degenerate: true,
        });
    };
    let (p, method) = if n <= SPEARMAN_EXACT_MAX {
        (permutation_p(&rx, &ry), Method::Exact)
    } else if rho.abs() >= 1.0 {
        (0.0, Method::StudentT)
    } else {
        let df = (n - 2) as f64;
        let t = rho * (df / (1.0 - rho * rho)).sqrt();
        let dist = StudentsT::new(0.0, 1.0, df).expect("positive df");
        (2.0 * dist.sf(t.abs()), Method::StudentT)
    };
    let p = p.clamp(0.0, 1.0);
    Ok(CorrelationResult {
        rho: Some(rho),
        p_value: p,
        n,
        method,
        alpha,
        significant: p < alpha,
        degenerate: false,
    })
}

/// Share of all orderings of `ry` with |rho| at least the observed one.
/// Both rank vectors are doubled and centred so the co-moment is an integer;
/// |rho| is monotone in |co-moment| since the variances do not change under
/// permutation. Heap's algorithm swaps two entries per step, so the
/// co-moment is updated in constant time.
fn permutation_p(rx: &[f64], ry: &[f64]) -> f64 {
    let n = ry.len();
    let centre = |r: &[f64]| -> Vec<i64> { r.iter().map(|v| (2.0 * v).round() as i64 - (n as i64 + 1)).collect() };
    let cx = centre(rx);
    let mut cy = centre(ry);
    let mut s: i64 = cx.iter().zip(&cy).map(|(a, b)| a * b).sum();
    let observed = s.abs();
    let mut count = 1u64;
    let mut total = 1u64;
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            let j = if i % 2 == 0 { 0 } else { c[i] };
            s += (cx[i] - cx[j]) * (cy[j] - cy[i]);
            cy.swap(i, j);
            count += (s.abs() >= observed) as u64;
            total += 1;
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    count as f64 / total as f64
}
