use serde::{Deserialize, Serialize};

use super::word::{first_disagreement, Disagreement, Word};
use crate::error::{Error, Result};

/// Relative inflation applied to closed-form tail sums so they stay upper
/// bounds after floating-point rounding.
const ROUNDING_ALLOWANCE: f64 = 1e-12;

/// The sequence a = {a_n} defining the metric d_a on the full shift.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DecayModel {
    /// a_n = A·θ^{n(n+1)/2}, so a_{n+1}/a_n = θ^{n+1}.
    ThetaSuperexponential {
        #[serde(rename = "A")]
        amplitude: f64,
        theta: f64,
    },
    /// a_0 > a_1 > ... > a_{K-1} given explicitly; beyond the table
    /// a_k = a_{K-1}·r^{k-K+1} with the geometric extension ratio r.
    ExplicitTable { table: Vec<f64>, ext_ratio: f64 },
}

impl DecayModel {
    pub fn theta(amplitude: f64, theta: f64) -> Result<Self> {
        let m = DecayModel::ThetaSuperexponential { amplitude, theta };
        m.validate()?;
        Ok(m)
    }

    pub fn explicit(table: Vec<f64>, ext_ratio: f64) -> Result<Self> {
        let m = DecayModel::ExplicitTable { table, ext_ratio };
        m.validate()?;
        Ok(m)
    }

    /// a_n = 2^{-n}, written as the one-entry table (1) with ratio 1/2.
    pub fn dyadic() -> Self {
        DecayModel::ExplicitTable {
            table: vec![1.0],
            ext_ratio: 0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DecayModel::ThetaSuperexponential { amplitude, theta } => {
                if !(amplitude.is_finite() && *amplitude > 0.0) {
                    return Err(Error::InvalidModel(format!("amplitude {amplitude} must be positive")));
                }
                if !(*theta > 0.0 && *theta < 1.0) {
                    return Err(Error::InvalidModel(format!("theta {theta} must lie in (0, 1)")));
                }
            }
            DecayModel::ExplicitTable { table, ext_ratio } => {
                if table.is_empty() {
                    return Err(Error::InvalidModel("explicit table is empty".into()));
                }
                if table.iter().any(|&a| !(a.is_finite() && a > 0.0)) {
                    return Err(Error::InvalidModel("table entries must be positive".into()));
                }
                if table.windows(2).any(|p| p[1] >= p[0]) {
                    return Err(Error::InvalidModel("table must be strictly decreasing".into()));
                }
                if !(*ext_ratio > 0.0 && *ext_ratio < 1.0) {
                    return Err(Error::InvalidModel(format!(
                        "extension ratio {ext_ratio} must lie in (0, 1)"
                    )));
                }
            }
        }
        Ok(())
    }

    /// θ for the superexponential model, `None` for tables.
    pub fn theta_value(&self) -> Option<f64> {
        match self {
            DecayModel::ThetaSuperexponential { theta, .. } => Some(*theta),
            DecayModel::ExplicitTable { .. } => None,
        }
    }

    /// a_n. Underflows to 0 once the true value leaves the f64 range.
    pub fn a(&self, n: usize) -> f64 {
        match self {
            DecayModel::ThetaSuperexponential { amplitude, theta } => {
                let exponent = (n as f64) * (n as f64 + 1.0) / 2.0;
                (amplitude.ln() + exponent * theta.ln()).exp()
            }
            DecayModel::ExplicitTable { table, ext_ratio } => {
                let k = table.len();
                if n < k {
                    table[n]
                } else {
                    table[k - 1] * ext_ratio.powi((n - k + 1) as i32)
                }
            }
        }
    }

    /// Certified upper bound on Σ_{k≥n} (k−n+1)·a_k.
    pub fn tail_sum_bound(&self, n: usize) -> Result<f64> {
        self.validate()?;
        if n == 0 {
            return Err(Error::usage("tail_sum_bound needs n ≥ 1"));
        }
        Ok(self.raw_weighted_tail(n))
    }

    fn raw_weighted_tail(&self, n: usize) -> f64 {
        let exact = match self {
            DecayModel::ThetaSuperexponential { theta, .. } => {
                // a_{k+1} ≤ θ^{n+1} a_k for all k ≥ n
                let q = theta.powi(n as i32 + 1);
                self.a(n) / ((1.0 - q) * (1.0 - q))
            }
            DecayModel::ExplicitTable { table, ext_ratio } => {
                let r = *ext_ratio;
                let last = table.len() - 1;
                if n >= last {
                    self.a(n) / ((1.0 - r) * (1.0 - r))
                } else {
                    let head: f64 = (n..last).map(|k| (k - n + 1) as f64 * table[k]).sum();
                    // Σ_{j≥0} (j + last − n + 1)·a_last·r^j
                    let offset = (last - n + 1) as f64;
                    head + table[last] * (r / ((1.0 - r) * (1.0 - r)) + offset / (1.0 - r))
                }
            }
        };
        exact * (1.0 + ROUNDING_ALLOWANCE)
    }

    /// Certified upper bound on Σ_{k≥start} a_k.
    pub fn plain_tail_bound(&self, start: usize) -> f64 {
        let exact = match self {
            DecayModel::ThetaSuperexponential { theta, .. } => {
                self.a(start) / (1.0 - theta.powi(start as i32 + 1))
            }
            DecayModel::ExplicitTable { table, ext_ratio } => {
                let last = table.len() - 1;
                if start >= last {
                    self.a(start) / (1.0 - ext_ratio)
                } else {
                    table[start..last].iter().sum::<f64>() + table[last] / (1.0 - ext_ratio)
                }
            }
        };
        exact * (1.0 + ROUNDING_ALLOWANCE)
    }

    /// Certified upper bound on Σ_{k≥start} (k−n+1)·a_k for start ≥ n ≥ 1.
    pub fn weighted_tail_from(&self, n: usize, start: usize) -> f64 {
        assert!(n >= 1 && start >= n, "weighted tail needs 1 ≤ n ≤ start");
        // (k−n+1) = (k−start+1) + (start−n)
        self.raw_weighted_tail(start) + (start - n) as f64 * self.plain_tail_bound(start)
    }
}

/// Value of d_a between two infinite words known through equal-length prefixes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricValue {
    pub value: f64,
    /// Set when the prefixes agree entirely; `value` is then a_{m+1}, an
    /// upper bound on the true distance.
    pub upper_bound_only: bool,
}

pub fn metric_d_a(model: &DecayModel, x: &Word, y: &Word) -> Result<MetricValue> {
    Ok(match first_disagreement(x, y)? {
        Disagreement::At(m) => MetricValue {
            value: model.a(m),
            upper_bound_only: false,
        },
        Disagreement::AgreeThrough(m) => MetricValue {
            value: model.a(m + 1),
            upper_bound_only: true,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    /// Oracle: a_n by repeated multiplication, Σ (k−n+1)a_k by partial sums.
    fn theta_a(amp: f64, theta: f64, n: usize) -> f64 {
        let mut a = amp;
        for k in 1..=n {
            for _ in 0..k {
                a *= theta;
            }
        }
        a
    }

    fn partial_sum(model: &DecayModel, n: usize, terms: usize) -> f64 {
        (n..n + terms).map(|k| (k - n + 1) as f64 * model.a(k)).sum()
    }

    #[test]
    fn metric_examples() {
        let dyadic = DecayModel::dyadic();
        let d = metric_d_a(&dyadic, &w("0111"), &w("0000")).unwrap();
        assert_eq!(d, MetricValue { value: 0.25, upper_bound_only: false });

        let d = metric_d_a(&dyadic, &w("0"), &w("0")).unwrap();
        assert!(d.upper_bound_only);
        assert_eq!(d.value, 0.25);

        let theta = DecayModel::theta(1.0, 0.2).unwrap();
        let d = metric_d_a(&theta, &w("001"), &w("000")).unwrap();
        let oracle = theta_a(1.0, 0.2, 3);
        assert!((oracle - 6.4e-5).abs() < 1e-18);
        assert!((d.value - oracle).abs() <= 1e-15 * oracle);
    }

    #[test]
    fn metric_rejects_mismatch() {
        let m = DecayModel::dyadic();
        assert!(matches!(metric_d_a(&m, &w("01"), &w("0")), Err(Error::Usage(_))));
    }

    #[test]
    fn theta_tail_examples() {
        let m = DecayModel::theta(1.0, 0.2).unwrap();
        let t1 = m.tail_sum_bound(1).unwrap();
        assert!((t1 - 0.2 / (0.96 * 0.96)).abs() < 1e-12);
        assert!((t1 - 0.21701).abs() < 1e-5);
        let truth = partial_sum(&m, 1, 20);
        assert!((truth - 0.216192).abs() < 1e-6);
        assert!(t1 >= truth);

        let t3 = m.tail_sum_bound(3).unwrap();
        let a3 = theta_a(1.0, 0.2, 3);
        assert!(t3 >= partial_sum(&m, 3, 20));
        assert!(t3 >= a3 && t3 <= a3 * 1.01);
    }

    #[test]
    fn explicit_tail_example() {
        let m = DecayModel::explicit(vec![1.0, 0.1], 0.1).unwrap();
        let t = m.tail_sum_bound(2).unwrap();
        let oracle = partial_sum(&m, 2, 30);
        assert!(t >= oracle);
        assert!((t - oracle).abs() < 1e-13);
        assert!((t - 0.01 / 0.81).abs() < 1e-13);
        // bound below the end of the table
        let m = DecayModel::explicit(vec![1.0, 0.5, 0.2, 0.1], 0.3).unwrap();
        for n in 1..6 {
            let oracle = partial_sum(&m, n, 60);
            let t = m.tail_sum_bound(n).unwrap();
            assert!(t >= oracle && t - oracle < 1e-11 * oracle, "n={n}: {t} vs {oracle}");
        }
    }

    #[test]
    fn invalid_models_are_rejected() {
        assert!(DecayModel::theta(1.0, 1.0).is_err());
        assert!(DecayModel::theta(0.0, 0.2).is_err());
        assert!(DecayModel::explicit(vec![1.0, 1.0], 0.5).is_err());
        assert!(DecayModel::explicit(vec![], 0.5).is_err());
        let bad = DecayModel::ThetaSuperexponential { amplitude: -1.0, theta: 0.2 };
        assert!(matches!(bad.tail_sum_bound(1), Err(Error::InvalidModel(_))));
        assert!(DecayModel::dyadic().tail_sum_bound(0).is_err());
    }

    #[test]
    fn tail_dominates_fifty_term_sums() {
        let models = [
            DecayModel::theta(1.0, 0.2).unwrap(),
            DecayModel::theta(3.0, 0.45).unwrap(),
            DecayModel::explicit(vec![1.0, 0.4, 0.1], 0.25).unwrap(),
            DecayModel::dyadic(),
        ];
        for m in &models {
            for n in 1..=20 {
                let t = m.tail_sum_bound(n).unwrap();
                assert!(t >= partial_sum(m, n, 50), "{m:?} n={n}");
                for start in n..n + 4 {
                    let oracle: f64 = (start..start + 60).map(|k| (k - n + 1) as f64 * m.a(k)).sum();
                    assert!(m.weighted_tail_from(n, start) >= oracle);
                }
            }
        }
    }

    #[test]
    fn model_json_shape() {
        let m = DecayModel::theta(1.0, 0.2).unwrap();
        let v = serde_json::to_value(&m).unwrap();
        assert_eq!(v, serde_json::json!({"kind": "theta-superexponential", "A": 1.0, "theta": 0.2}));
        let t: DecayModel =
            serde_json::from_str(r#"{"kind":"explicit-table","table":[1,0.1],"ext_ratio":0.1}"#).unwrap();
        assert_eq!(t, DecayModel::explicit(vec![1.0, 0.1], 0.1).unwrap());
    }
}
