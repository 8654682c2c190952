use crate::error::{Error, Result};
use crate::math::{mean, sample_variance, sqrt};

use super::special::t_two_tailed;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestResult {
    /// `t` or `chi^2`.
    pub statistic: f64,
    pub df: u32,
    pub p_two_tailed: f64,
    /// Paired Cohen's d where applicable.
    pub effect_size: Option<f64>,
}

/// Paired t-test on `x - y`. `effect_size` is the paired Cohen's d,
/// `mean(d) / sd(d)`, so `d = t / sqrt(n)` holds exactly.
///
/// Differences that are all zero give `t = 0, p = 1, d = 0`; differences
/// that are constant but non-zero have no finite t and yield
/// [`Error::ZeroVariance`].
pub fn paired_t(x: &[f64], y: &[f64]) -> Result<TestResult> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let n = x.len();
    if n < 2 {
        return Err(Error::TooFewSamples { required: 2, got: n });
    }
    let diffs: alloc::vec::Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let df = (n - 1) as u32;
    if diffs.iter().all(|&d| d == 0.0) {
        return Ok(TestResult {
            statistic: 0.0,
            df,
            p_two_tailed: 1.0,
            effect_size: Some(0.0),
        });
    }
    let m = mean(&diffs);
    let sd = sqrt(sample_variance(&diffs));
    if sd == 0.0 {
        return Err(Error::ZeroVariance);
    }
    let t = m / (sd / sqrt(n as f64));
    Ok(TestResult {
        statistic: t,
        df,
        p_two_tailed: t_two_tailed(t, df),
        effect_size: Some(m / sd),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Stream;
    use alloc::vec::Vec;

    #[test]
    fn identical_samples() {
        let x: Vec<f64> = (0..10).map(|i| i as f64 * 1.5).collect();
        let r = paired_t(&x, &x).unwrap();
        assert_eq!((r.statistic, r.p_two_tailed, r.effect_size), (0.0, 1.0, Some(0.0)));
        assert_eq!(r.df, 9);
    }

    #[test]
    fn errors() {
        assert!(matches!(paired_t(&[1.0, 2.0], &[1.0]), Err(Error::LengthMismatch { .. })));
        assert!(matches!(paired_t(&[1.0], &[1.0]), Err(Error::TooFewSamples { .. })));
        assert_eq!(paired_t(&[2.0, 3.0], &[1.0, 2.0]), Err(Error::ZeroVariance));
    }

    #[test]
    fn reported_pairs_are_consistent() {
        // (t, d) pairs for ten participants, both rounded to two decimals:
        // some t inside t's rounding interval must map to a d inside d's.
        for (t, d) in [(3.51, 1.11), (1.59, 0.50), (1.06, 0.34), (2.64, 0.84), (2.28, 0.72), (2.31, 0.73)] {
            let lo = (t - 0.005) / 10f64.sqrt();
            let hi = (t + 0.005) / 10f64.sqrt();
            assert!(hi >= d - 0.005 && lo <= d + 0.005, "t={t}");
        }
        for (t, p, tol) in [(3.51, 0.0066, 0.0005), (2.64, 0.027, 0.002), (2.28, 0.049, 0.002), (2.31, 0.046, 0.002)] {
            let got = t_two_tailed(t, 9);
            assert!((got - p).abs() <= tol, "t={t}: {got}");
        }
    }

    #[test]
    fn random_vectors_match_quadrature() {
        let mut s = Stream::new(6, 0, 0);
        for _ in 0..10 {
            let x: Vec<f64> = (0..6).map(|_| s.normal() + 0.5).collect();
            let y: Vec<f64> = (0..6).map(|_| s.normal()).collect();
            let r = paired_t(&x, &y).unwrap();
            let d: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
            let m = d.iter().sum::<f64>() / 6.0;
            let sd = (d.iter().map(|v| (v - m).powi(2)).sum::<f64>() / 5.0).sqrt();
            let t = m / (sd / 6f64.sqrt());
            assert!((r.statistic - t).abs() < 1e-12);
            let p = 2.0 * super::super::special::tests_support::t_sf_quadrature(t.abs(), 5);
            assert!((r.p_two_tailed - p).abs() < 1e-6);
        }
    }

    proptest::proptest! {
        #[test]
        fn shift_invariance_and_swap_antisymmetry(
            xs in proptest::collection::vec(-50.0f64..50.0, 3..15),
            noise in proptest::collection::vec(-5.0f64..5.0, 15),
            shift in -100.0f64..100.0,
        ) {
            let x = xs.clone();
            let y: Vec<f64> = xs.iter().zip(&noise).map(|(a, n)| a + n).collect();
            let base = paired_t(&x, &y).unwrap();
            let xs2: Vec<f64> = x.iter().map(|v| v + shift).collect();
            let ys2: Vec<f64> = y.iter().map(|v| v + shift).collect();
            let shifted = paired_t(&xs2, &ys2).unwrap();
            proptest::prop_assert!((base.statistic - shifted.statistic).abs() < 1e-6 * (1.0 + base.statistic.abs()));
            let swapped = paired_t(&y, &x).unwrap();
            proptest::prop_assert!((base.statistic + swapped.statistic).abs() < 1e-12);
            proptest::prop_assert!((base.p_two_tailed - swapped.p_two_tailed).abs() < 1e-12);
            let n = x.len() as f64;
            proptest::prop_assert!((base.effect_size.unwrap() - base.statistic / n.sqrt()).abs() < 1e-12);
        }
    }
}
