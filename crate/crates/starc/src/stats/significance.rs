//! Paired and unpaired significance tests for accuracy comparisons.
//!
//! The two-proportion z-test stands in for t-tests over Bernoulli outcomes:
//! identical data shapes, near-identical p-values at these sample sizes.

use serde::{Deserialize, Serialize};
use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, DiscreteCDF, Normal};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum McNemarMethod {
    /// `(b - c)^2 / (b + c)` against chi-square with 1 df.
    ChiSquare,
    /// Exact two-sided binomial on the discordant pairs.
    ExactBinomial,
}

/// McNemar's test over paired correctness outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McNemarResult {
    /// Pairs where the first source is correct and the second is not.
    pub b: usize,
    /// Pairs where the second source is correct and the first is not.
    pub c: usize,
    /// Chi-square statistic `(b - c)^2 / (b + c)`; 0 when no discordance.
    pub statistic: f64,
    pub p_value: f64,
    pub method: McNemarMethod,
    /// Set when there are no discordant pairs at all (p is defined as 1).
    pub degenerate: bool,
}

/// Run McNemar's test, choosing the exact binomial variant when the
/// discordant count is small (`b + c < 25`) and chi-square otherwise.
pub fn mcnemar(paired: &[(bool, bool)]) -> McNemarResult {
    let b = paired.iter().filter(|(a, bb)| *a && !*bb).count();
    let c = paired.iter().filter(|(a, bb)| !*a && *bb).count();
    let method = if b + c < 25 {
        McNemarMethod::ExactBinomial
    } else {
        McNemarMethod::ChiSquare
    };
    mcnemar_counts(b, c, method)
}

/// Run McNemar's test with an explicit method.
pub fn mcnemar_with_method(paired: &[(bool, bool)], method: McNemarMethod) -> McNemarResult {
    let b = paired.iter().filter(|(a, bb)| *a && !*bb).count();
    let c = paired.iter().filter(|(a, bb)| !*a && *bb).count();
    mcnemar_counts(b, c, method)
}

/// McNemar's test straight from the discordant counts.
pub fn mcnemar_counts(b: usize, c: usize, method: McNemarMethod) -> McNemarResult {
    let n = b + c;
    if n == 0 {
        return McNemarResult {
            b,
            c,
            statistic: 0.0,
            p_value: 1.0,
            method,
            degenerate: true,
        };
    }
    let diff = b as f64 - c as f64;
    let statistic = diff * diff / n as f64;
    let p_value = match method {
        McNemarMethod::ChiSquare => {
            let chi = ChiSquared::new(1.0).expect("1 df is valid");
            1.0 - chi.cdf(statistic)
        }
        McNemarMethod::ExactBinomial => {
            let dist = Binomial::new(0.5, n as u64).expect("p=0.5 is valid");
            let k = b.min(c) as u64;
            (2.0 * dist.cdf(k)).min(1.0)
        }
    };
    McNemarResult {
        b,
        c,
        statistic,
        p_value,
        method,
        degenerate: false,
    }
}

/// Two-sided two-sample z-test on Bernoulli means (pooled variance).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProportionTest {
    pub p1: f64,
    pub p2: f64,
    pub z: f64,
    pub p_value: f64,
}

pub fn proportion_test(k1: usize, n1: usize, k2: usize, n2: usize) -> Result<ProportionTest> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::Parameter("both samples must be non-empty".into()));
    }
    if k1 > n1 || k2 > n2 {
        return Err(Error::Parameter("successes cannot exceed sample size".into()));
    }
    let p1 = k1 as f64 / n1 as f64;
    let p2 = k2 as f64 / n2 as f64;
    let pooled = (k1 + k2) as f64 / (n1 + n2) as f64;
    let se = (pooled * (1.0 - pooled) * (1.0 / n1 as f64 + 1.0 / n2 as f64)).sqrt();
    let (z, p_value) = if se == 0.0 {
        (0.0, 1.0)
    } else {
        let z = (p1 - p2) / se;
        let normal = Normal::new(0.0, 1.0).expect("standard normal is valid");
        (z, 2.0 * (1.0 - normal.cdf(z.abs())))
    };
    Ok(ProportionTest { p1, p2, z, p_value })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_discordance_is_null() {
        let pairs: Vec<(bool, bool)> = (0..20)
            .map(|i| if i % 2 == 0 { (true, false) } else { (false, true) })
            .collect();
        let r = mcnemar_with_method(&pairs, McNemarMethod::ChiSquare);
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
        let r = mcnemar_with_method(&pairs, McNemarMethod::ExactBinomial);
        assert_eq!(r.p_value, 1.0);
    }

    // Chi-square table oracle: b=10, c=2 gives 64/12 ~ 5.333 and p ~ 0.021.
    #[test]
    fn ten_two_split_matches_table() {
        let r = mcnemar_counts(10, 2, McNemarMethod::ChiSquare);
        assert!((r.statistic - 64.0 / 12.0).abs() < 5e-4, "{}", r.statistic);
        assert!((r.p_value - 0.021).abs() < 5e-3, "{}", r.p_value);
    }

    #[test]
    fn no_discordance_is_degenerate() {
        let pairs = vec![(true, true), (false, false)];
        let r = mcnemar(&pairs);
        assert!(r.degenerate);
        assert_eq!(r.p_value, 1.0);
        assert_eq!(r.statistic, 0.0);
    }

    #[test]
    fn auto_method_switches_on_discordant_count() {
        let mut pairs = vec![(true, false); 10];
        pairs.extend(vec![(false, true); 10]);
        assert_eq!(mcnemar(&pairs).method, McNemarMethod::ExactBinomial);
        let mut pairs = vec![(true, false); 20];
        pairs.extend(vec![(false, true); 10]);
        assert_eq!(mcnemar(&pairs).method, McNemarMethod::ChiSquare);
    }

    #[test]
    fn statistic_is_symmetric_under_b_c_swap() {
        let a = mcnemar_counts(10, 2, McNemarMethod::ChiSquare);
        let b = mcnemar_counts(2, 10, McNemarMethod::ChiSquare);
        assert_eq!(a.statistic, b.statistic);
        assert_eq!(a.p_value, b.p_value);
    }

    #[test]
    fn identical_proportions_give_p_one() {
        let r = proportion_test(30, 100, 30, 100).unwrap();
        assert_eq!(r.z, 0.0);
        assert_eq!(r.p_value, 1.0);
        let r = proportion_test(0, 5, 0, 5).unwrap();
        assert_eq!(r.p_value, 1.0);
    }

    // Normal-table oracle: 428/1000 vs 343/1000 pools to 0.3855,
    // z = 0.085 / sqrt(0.3855 * 0.6145 * 0.002) ~ 3.905, p well under 0.001.
    #[test]
    fn large_gap_is_highly_significant()  {
        let r = proportion_test(428, 1000, 343, 1000).unwrap();
        assert!((r.z - 3.905).abs() < 5e-3, "{}", r.z);
        assert!(r.p_value < 0.001, "{}", r.p_value);
    }

    // z oracle: 5/5 vs 0/5 pools to 0.5, z = 1 / sqrt(0.1) ~ 3.162.
    #[test]
    fn extreme_small_samples_clear_one_percent() {
        let r = proportion_test(5, 5, 0, 5).unwrap();
        assert!((r.z - 3.1623).abs() < 5e-4, "{}", r.z);
        assert!(r.p_value < 0.01, "{}", r.p_value);
    }

    #[test]
    fn empty_samples_are_parameter_errors() {
        assert!(proportion_test(0, 0, 1, 2).is_err());
        assert!(proportion_test(3, 2, 1, 2).is_err());
    }
}
