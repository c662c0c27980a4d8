//! Statistical checks for sampled output: NIST-style frequency (monobit)
//! and runs tests, chi-square uniformity and lag-1 serial correlation.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use statrs::function::erf::erfc;

use crate::{Error, Result};

/// A test statistic with its p-value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
}

impl TestResult {
    pub fn passes(&self, significance: f64) -> bool {
        self.p_value >= significance
    }
}

/// Frequency (monobit) test: `p = erfc(|Σ(2b−1)| / √(2n))`.
pub fn frequency_test(bits: &[bool]) -> Result<TestResult> {
    if bits.is_empty() {
        return Err(Error::InvalidArgument("frequency test needs at least one bit".into()));
    }
    let n = bits.len() as f64;
    let sum: i64 = bits.iter().map(|&b| if b { 1 } else { -1 }).sum();
    let s_obs = (sum as f64).abs() / n.sqrt();
    Ok(TestResult {
        statistic: s_obs,
        p_value: erfc(s_obs / std::f64::consts::SQRT_2),
    })
}

/// Runs test. The statistic is the total number of runs; when the ones
/// proportion fails the `|π − ½| < 2/√n` prerequisite the p-value is 0.
pub fn runs_test(bits: &[bool]) -> Result<TestResult> {
    if bits.len() < 2 {
        return Err(Error::InvalidArgument("runs test needs at least two bits".into()));
    }
    let n = bits.len() as f64;
    let pi = bits.iter().filter(|&&b| b).count() as f64 / n;
    let runs = 1 + bits.windows(2).filter(|w| w[0] != w[1]).count();
    let v = runs as f64;
    if (pi - 0.5).abs() >= 2.0 / n.sqrt() {
        return Ok(TestResult {
            statistic: v,
            p_value: 0.0,
        });
    }
    let spread = pi * (1.0 - pi);
    let p_value = erfc((v - 2.0 * n * spread).abs() / (2.0 * (2.0 * n).sqrt() * spread));
    Ok(TestResult {
        statistic: v,
        p_value,
    })
}

/// Pearson chi-square against equal cell probabilities.
pub fn chi_square_uniform(counts: &[u64]) -> Result<TestResult> {
    let k = counts.len();
    let total: u64 = counts.iter().sum();
    if k < 2 || total == 0 {
        return Err(Error::InvalidArgument(
            "chi-square needs at least two cells and one observation".into(),
        ));
    }
    let expected = total as f64 / k as f64;
    let statistic: f64 = counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum();
    let dist = ChiSquared::new((k - 1) as f64).expect("positive degrees of freedom");
    Ok(TestResult {
        statistic,
        p_value: 1.0 - dist.cdf(statistic),
    })
}

/// Pearson correlation between consecutive bits; about `N(0, 1/n)` for
/// independent fair bits.
pub fn lag1_correlation(bits: &[bool]) -> Result<f64> {
    if bits.len() < 3 {
        return Err(Error::InvalidArgument("serial correlation needs at least three bits".into()));
    }
    let xs: Vec<f64> = bits.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
    let (a, b) = (&xs[..xs.len() - 1], &xs[1..]);
    let m = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / m, b.iter().sum::<f64>() / m);
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma) * (x - ma)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb) * (y - mb)).sum();
    if va == 0.0 || vb == 0.0 {
        return Ok(0.0);
    }
    Ok(cov / (va * vb).sqrt())
}

/// Binomial standard error `√(p(1−p)/n)`.
pub fn binomial_std_error(p: f64, n: u64) -> f64 {
    if n == 0 {
        return f64::NAN;
    }
    (p * (1.0 - p) / n as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    // Worked examples from NIST SP 800-22 rev 1a, sections 2.1.8 and 2.3.8.
    #[test]
    fn nist_frequency_example() {
        let r = frequency_test(&bits("1011010101")).unwrap();
        assert!((r.statistic - 0.632_455_532).abs() < 1e-8);
        assert!((r.p_value - 0.527_089).abs() < 1e-6);
    }

    #[test]
    fn nist_runs_example() {
        let r = runs_test(&bits("1001101011")).unwrap();
        assert_eq!(r.statistic, 7.0);
        assert!((r.p_value - 0.147_232).abs() < 1e-6);
    }

    #[test]
    fn runs_prerequisite_failure() {
        let lopsided: Vec<bool> = (0..100).map(|k| k % 10 != 0).collect();
        let r = runs_test(&lopsided).unwrap();
        assert_eq!(r.p_value, 0.0);
    }

    #[test]
    fn chi_square_known_values() {
        let r = chi_square_uniform(&[25, 25, 25, 25]).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!((r.p_value - 1.0).abs() < 1e-12);
        let r = chi_square_uniform(&[100, 100, 100, 100]).unwrap();
        assert!(r.passes(0.01));
        let skewed = chi_square_uniform(&[400, 100, 100, 100]).unwrap();
        assert!((skewed.statistic - 2700.0 / 7.0).abs() < 1e-9);
        assert!(!skewed.passes(0.01));
    }

    #[test]
    fn lag1_extremes() {
        let alt = bits("0101010101010101");
        assert!((lag1_correlation(&alt).unwrap() + 1.0).abs() < 1e-12);
        let blocks = bits("0000000011111111");
        assert!(lag1_correlation(&blocks).unwrap() > 0.8);
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        assert!(frequency_test(&[]).is_err());
        assert!(runs_test(&[true]).is_err());
        assert!(chi_square_uniform(&[3]).is_err());
        assert!(lag1_correlation(&[true, false]).is_err());
    }
}
