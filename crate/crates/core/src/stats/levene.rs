use statrs::distribution::{ContinuousCDF, FisherSnedecor};

use super::{check_alpha, Method, TestKind, TestResult};
use crate::error::{Error, Result};

/// Levene's test with group means as centres: one-way ANOVA on the
/// absolute deviations.
pub fn levene(groups: &[Vec<f64>], alpha: f64) -> Result<TestResult> {
    check_alpha(alpha)?;
    if groups.len() < 2 || groups.iter().any(|g| g.len() < 2) {
        return Err(Error::InvalidArgument("Levene needs at least two groups of at least two values".into()));
    }
    let k = groups.len();
    let n: usize = groups.iter().map(Vec::len).sum();
    let dev: Vec<Vec<f64>> = groups
        .iter()
        .map(|g| {
            let m = g.iter().sum::<f64>() / g.len() as f64;
            g.iter().map(|x| (x - m).abs()).collect()
        })
        .collect();
    let means: Vec<f64> = dev.iter().map(|z| z.iter().sum::<f64>() / z.len() as f64).collect();
    let grand = dev.iter().flatten().sum::<f64>() / n as f64;
    let between: f64 = dev.iter().zip(&means).map(|(z, m)| z.len() as f64 * (m - grand).powi(2)).sum();
    let within: f64 = dev.iter().zip(&means).map(|(z, m)| z.iter().map(|x| (x - m).powi(2)).sum::<f64>()).sum();
    let sizes = groups.iter().map(Vec::len).collect();
    let (d1, d2) = ((k - 1) as f64, (n - k) as f64);
    if within <= f64::EPSILON * between.max(1.0) {
        if between <= f64::EPSILON {
            return Ok(TestResult::degenerate(TestKind::Levene, 0.0, alpha, sizes));
        }
        // Spread differs between groups but is constant within each.
        return Ok(TestResult::new(TestKind::Levene, Method::FDistribution, f64::INFINITY, 0.0, alpha, sizes));
    }
    let w = (d2 / d1) * between / within;
    let p = FisherSnedecor::new(d1, d2).expect("positive df").sf(w);
    Ok(TestResult::new(TestKind::Levene, Method::FDistribution, w, p, alpha, sizes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_groups() {
        let g = vec![1.0, 2.0, 4.0, 8.0];
        let r = levene(&[g.clone(), g], 0.05).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!((r.p_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn needs_two_values_per_group() {
        assert!(levene(&[vec![1.0], vec![1.0, 2.0]], 0.05).is_err());
    }
}
