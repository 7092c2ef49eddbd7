use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbolic::{DecayModel, Word};

/// How the level radii b_n follow from the decay sequence a_n.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GaugeRule {
    /// b_0 = a_0, b_n = a_n / n.
    #[default]
    AOverN,
    /// b_0 = a_0, b_n = a_n / n^p with p > 0.
    AOverNPower { exponent: f64 },
}

/// Radii b_w of a Hilbert brick: the coefficient of h_w ranges over [−b_w, b_w].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gauge {
    pub model: DecayModel,
    #[serde(default)]
    pub rule: GaugeRule,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub overrides: BTreeMap<Word, f64>,
}

impl Gauge {
    pub fn new(model: DecayModel) -> Result<Self> {
        let g = Gauge {
            model,
            rule: GaugeRule::AOverN,
            overrides: BTreeMap::new(),
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if let GaugeRule::AOverNPower { exponent } = self.rule {
            // b_n = o(a_n) needs a positive exponent
            if !(exponent.is_finite() && exponent > 0.0) {
                return Err(Error::usage(format!("gauge exponent {exponent} must be positive")));
            }
        }
        for (w, &b) in &self.overrides {
            if !(b.is_finite() && b > 0.0) {
                return Err(Error::usage(format!("override for {w} must be positive, got {b}")));
            }
        }
        Ok(())
    }

    fn exponent(&self) -> f64 {
        match self.rule {
            GaugeRule::AOverN => 1.0,
            GaugeRule::AOverNPower { exponent } => exponent,
        }
    }

    /// Level radius b_k from the rule, ignoring overrides.
    pub fn b(&self, k: usize) -> f64 {
        let a = self.model.a(k);
        if k == 0 {
            a
        } else {
            a / (k as f64).powf(self.exponent())
        }
    }

    pub fn b_word(&self, w: &Word) -> f64 {
        self.overrides.get(w).copied().unwrap_or_else(|| self.b(w.len()))
    }

    /// max_{|w|=k} b_w.
    pub fn b_bar(&self, k: usize) -> f64 {
        self.overrides
            .iter()
            .filter(|(w, _)| w.len() == k)
            .fold(self.b(k), |m, (_, &b)| m.max(b))
    }

    /// Upper bound on Σ_{k≥start} (k−n+1)·b̄_k, for 1 ≤ n ≤ start.
    pub fn weighted_tail_from(&self, n: usize, start: usize) -> f64 {
        // b_k ≤ a_k / start^p once k ≥ start ≥ 1
        let rule = self.model.weighted_tail_from(n, start) / (start as f64).powf(self.exponent());
        let mut excess = BTreeMap::new();
        for (w, &b) in &self.overrides {
            let k = w.len();
            if k >= start {
                let e = excess.entry(k).or_insert(0.0f64);
                *e = e.max(b - self.b(k));
            }
        }
        rule + excess
            .into_iter()
            .map(|(k, e)| (k - n + 1) as f64 * e)
            .sum::<f64>()
    }
}

/// Which hypotheses on θ the experiments run under.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Regime {
    pub theta: Option<f64>,
    pub description: String,
}

impl Regime {
    pub fn of(model: &DecayModel) -> Self {
        let theta = model.theta_value();
        let description = match theta {
            Some(t) if t < 0.25 => "theta < 1/4: prevalence theorem and gap estimate apply",
            Some(t) if t < 0.5 => "1/4 <= theta < 1/2: only the gap estimate applies",
            Some(_) => "theta >= 1/2: outside the hypotheses of both results",
            None => "explicit table: no theta hypothesis is checked",
        };
        Regime {
            theta,
            description: description.into(),
        }
    }

    pub fn supports_prevalence(&self) -> bool {
        self.theta.is_some_and(|t| t < 0.25)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauge() -> Gauge {
        Gauge::new(DecayModel::theta(1.0, 0.2).unwrap()).unwrap()
    }

    #[test]
    fn default_rule_values() {
        let g = gauge();
        assert_eq!(g.b(0), 1.0);
        assert!((g.b(1) - 0.2).abs() < 1e-15);
        assert!((g.b(2) - 0.008 / 2.0).abs() < 1e-17);
        assert!((g.b(3) - 0.2f64.powi(6) / 3.0).abs() < 1e-18);
    }

    #[test]
    fn tail_dominates_partial_sums() {
        let mut g = gauge();
        g.overrides.insert("0101".parse().unwrap(), 0.01);
        g.rule = GaugeRule::AOverNPower { exponent: 2.0 };
        for n in 1..6 {
            for start in n..n + 4 {
                let oracle: f64 = (start..start + 30).map(|k| (k - n + 1) as f64 * g.b_bar(k)).sum();
                let t = g.weighted_tail_from(n, start);
                assert!(t >= oracle, "n={n} start={start}: {t} < {oracle}");
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let g = gauge();
        let v = serde_json::to_value(&g).unwrap();
        assert_eq!(v["rule"], serde_json::json!({"kind": "a-over-n"}));
        let parsed: Gauge = serde_json::from_value(serde_json::json!({
            "model": {"kind": "theta-superexponential", "A": 1.0, "theta": 0.2}
        }))
        .unwrap();
        assert_eq!(parsed, g);
    }

    #[test]
    fn regimes() {
        assert!(Regime::of(&DecayModel::theta(1.0, 0.2).unwrap()).supports_prevalence());
        assert!(!Regime::of(&DecayModel::theta(1.0, 0.3).unwrap()).supports_prevalence());
        assert!(!Regime::of(&DecayModel::dyadic()).supports_prevalence());
    }
}
