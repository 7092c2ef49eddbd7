//! Exact binomial confidence bounds.

use statrs::function::beta::beta_reg;

use crate::error::{Error, Result};

/// Upper end of the one-sided Clopper–Pearson interval: the p at which
/// P(Bin(trials, p) ≤ events) = 1 − confidence.
pub fn clopper_pearson_upper(events: u64, trials: u64, confidence: f64) -> Result<f64> {
    check(events, trials, confidence)?;
    if events == trials {
        return Ok(1.0);
    }
    let alpha = 1.0 - confidence;
    if events == 0 {
        return Ok(1.0 - alpha.powf(1.0 / trials as f64));
    }
    // P(Bin ≤ k) = 1 − I_p(k+1, T−k), decreasing in p
    let (a, b) = ((events + 1) as f64, (trials - events) as f64);
    Ok(bisect(|p| 1.0 - beta_reg(a, b, p) - alpha))
}

/// Lower end of the one-sided Clopper–Pearson interval.
pub fn clopper_pearson_lower(events: u64, trials: u64, confidence: f64) -> Result<f64> {
    check(events, trials, confidence)?;
    if events == 0 {
        return Ok(0.0);
    }
    let alpha = 1.0 - confidence;
    if events == trials {
        return Ok(alpha.powf(1.0 / trials as f64));
    }
    // P(Bin ≥ k) = I_p(k, T−k+1), increasing in p
    let (a, b) = (events as f64, (trials - events + 1) as f64);
    Ok(bisect(|p| alpha - beta_reg(a, b, p)))
}

fn check(events: u64, trials: u64, confidence: f64) -> Result<()> {
    if trials == 0 || events > trials {
        return Err(Error::usage(format!("{events} events in {trials} trials")));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::usage(format!("confidence {confidence} outside (0, 1)")));
    }
    Ok(())
}

/// Root of a function decreasing on [0, 1] from positive to negative.
/// Returns the right end of the final bracket so the bound stays conservative.
fn bisect(f: impl Fn(f64) -> f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Oracle: binomial CDF by direct summation in log space.
    fn binom_cdf(k: u64, n: u64, p: f64) -> f64 {
        let mut log_c = 0.0f64;
        let mut total = 0.0;
        for i in 0..=k {
            if i > 0 {
                log_c += ((n - i + 1) as f64).ln() - (i as f64).ln();
            }
            total += (log_c + i as f64 * p.ln() + (n - i) as f64 * (1.0 - p).ln()).exp();
        }
        total
    }

    #[test]
    fn zero_events_closed_form() {
        let u = clopper_pearson_upper(0, 1000, 0.99).unwrap();
        assert!((u - (1.0 - 0.01f64.powf(1e-3))).abs() < 1e-15);
        assert!((u - 0.004594).abs() < 1e-6);
    }

    #[test]
    fn upper_bound_solves_the_tail_equation() {
        for &(k, n) in &[(1u64, 10u64), (5, 100), (37, 10_000), (400, 2000), (99, 100)] {
            let u = clopper_pearson_upper(k, n, 0.99).unwrap();
            assert!(u > k as f64 / n as f64);
            assert!((binom_cdf(k, n, u) - 0.01).abs() < 1e-9, "k={k} n={n}");
            let l = clopper_pearson_lower(k, n, 0.99).unwrap();
            assert!(l < k as f64 / n as f64);
            assert!((1.0 - binom_cdf(k - 1, n, l) - 0.01).abs() < 1e-9);
        }
    }

    #[test]
    fn edge_cases() {
        assert_eq!(clopper_pearson_upper(7, 7, 0.99).unwrap(), 1.0);
        assert_eq!(clopper_pearson_lower(0, 7, 0.99).unwrap(), 0.0);
        assert!(clopper_pearson_upper(1, 0, 0.99).is_err());
        assert!(clopper_pearson_upper(3, 2, 0.99).is_err());
        assert!(clopper_pearson_upper(0, 2, 1.0).is_err());
    }
}
