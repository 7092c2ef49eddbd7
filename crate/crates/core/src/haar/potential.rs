use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::table::{CylinderValues, HaarTable};
use crate::error::{Error, Result};
use crate::symbolic::{DecayModel, Word};

/// Deepest quadrature or table level accepted for potentials.
pub const MAX_POTENTIAL_LEVEL: usize = 24;

/// Black-box potential with a trusted Lipschitz certificate.
///
/// The function receives a non-empty block `u` and returns f at the
/// periodic point `u u u ...`. `lip` must satisfy var_n(f) ≤ lip·a_n for
/// every n under `model`; it is recorded but never checked.
#[derive(Clone)]
pub struct Evaluator {
    func: Arc<dyn Fn(&Word) -> f64 + Send + Sync>,
    pub quadrature_depth: usize,
    pub lip: f64,
    pub model: DecayModel,
    pub description: String,
}

impl Evaluator {
    pub fn new(
        description: impl Into<String>,
        model: DecayModel,
        lip: f64,
        quadrature_depth: usize,
        func: impl Fn(&Word) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        model.validate()?;
        if !(lip.is_finite() && lip >= 0.0) {
            return Err(Error::usage(format!("Lipschitz constant {lip} must be finite and ≥ 0")));
        }
        if quadrature_depth == 0 || quadrature_depth > MAX_POTENTIAL_LEVEL {
            return Err(Error::resource(format!(
                "quadrature depth {quadrature_depth} outside 1..={MAX_POTENTIAL_LEVEL}"
            )));
        }
        Ok(Evaluator {
            func: Arc::new(func),
            quadrature_depth,
            lip,
            model,
            description: description.into(),
        })
    }

    pub fn eval_periodic(&self, block: &Word) -> f64 {
        (self.func)(block)
    }

    /// Sup-norm error of the depth-q quadrature: var_q(f) ≤ LIP·a_q.
    pub fn quadrature_error(&self) -> f64 {
        self.lip * self.model.a(self.quadrature_depth)
    }
}

impl fmt::Debug for Evaluator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Evaluator")
            .field("description", &self.description)
            .field("quadrature_depth", &self.quadrature_depth)
            .field("lip", &self.lip)
            .field("model", &self.model)
            .finish()
    }
}

/// A potential on the full shift.
#[derive(Clone, Debug)]
pub enum Potential {
    StepTable(HaarTable),
    CylinderValues(CylinderValues),
    Evaluator(Evaluator),
}

/// A_n f as cylinder values plus a bound on |computed − exact| per cylinder.
#[derive(Clone, Debug, PartialEq)]
pub struct Approximation {
    pub values: CylinderValues,
    pub error_bound: f64,
}

impl Potential {
    /// The indicator 1_[w] of a cylinder, as an exact step function.
    pub fn cylinder_indicator(w: &Word) -> Self {
        let mut values = vec![0.0; 1 << w.len()];
        values[w.index() as usize] = 1.0;
        Potential::CylinderValues(CylinderValues {
            level: w.len(),
            values,
        })
    }

    pub fn constant(c: f64) -> Self {
        Potential::StepTable(HaarTable::constant(c))
    }

    /// Level beyond which the potential is known exactly to be constant on
    /// cylinders, if any.
    pub fn step_level(&self) -> Option<usize> {
        match self {
            Potential::StepTable(t) => Some(t.max_level()),
            Potential::CylinderValues(v) => Some(v.level),
            Potential::Evaluator(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.step_level().is_some()
    }

    /// A_n f: cylinder averages at level n.
    ///
    /// Step potentials are exact. Evaluators average the periodic
    /// completions of all depth-q refinements of each level-n cylinder.
    pub fn approximation(&self, n: usize) -> Result<Approximation> {
        if n > MAX_POTENTIAL_LEVEL {
            return Err(Error::resource(format!("level {n} above {MAX_POTENTIAL_LEVEL}")));
        }
        match self {
            Potential::StepTable(t) => Ok(Approximation {
                values: t.cylinder_values(n),
                error_bound: 0.0,
            }),
            Potential::CylinderValues(v) => {
                v.validate()?;
                Ok(Approximation {
                    values: v.at_level(n),
                    error_bound: 0.0,
                })
            }
            Potential::Evaluator(e) => {
                let q = e.quadrature_depth;
                if q < n {
                    return Err(Error::usage(format!(
                        "quadrature depth {q} below requested level {n}"
                    )));
                }
                let fine = CylinderValues {
                    level: q,
                    values: (0..1u64 << q)
                        .map(|i| e.eval_periodic(&Word::from_index(i, q)))
                        .collect(),
                };
                Ok(Approximation {
                    values: fine.at_level(n),
                    error_bound: e.quadrature_error(),
                })
            }
        }
    }

    /// Haar expansion of A_n f (levels < n) and the cylinder-value error bound.
    pub fn haar_table(&self, n: usize) -> Result<(HaarTable, f64)> {
        match self {
            Potential::StepTable(t) => Ok((t.truncated(n), 0.0)),
            _ => {
                let approx = self.approximation(n)?;
                Ok((HaarTable::from_cylinder_values(&approx.values)?, approx.error_bound))
            }
        }
    }

    /// Certified bound on max_{w ∈ Σ_k} |c_w(f)|.
    pub fn coefficient_sup_bound(&self, k: usize) -> Result<f64> {
        Ok(match self {
            Potential::StepTable(t) => t.max_abs_at_level(k),
            Potential::CylinderValues(v) => {
                if k >= v.level {
                    0.0
                } else {
                    HaarTable::from_cylinder_values(v)?.max_abs_at_level(k)
                }
            }
            Potential::Evaluator(e) => e.lip * e.model.a(k),
        })
    }

    /// Exact Haar table for step potentials; `None` for evaluators.
    pub fn exact_table(&self) -> Result<Option<HaarTable>> {
        match self {
            Potential::StepTable(t) => Ok(Some(t.clone())),
            Potential::CylinderValues(v) => Ok(Some(HaarTable::from_cylinder_values(v)?)),
            Potential::Evaluator(_) => Ok(None),
        }
    }

    /// JSON-friendly description for certificate provenance.
    pub fn describe(&self) -> serde_json::Value {
        match self {
            Potential::StepTable(t) => serde_json::json!({"kind": "haar-table", "table": t}),
            Potential::CylinderValues(v) => serde_json::json!({"kind": "cylinder-values", "values": v}),
            Potential::Evaluator(e) => serde_json::json!({
                "kind": "evaluator",
                "description": e.description,
                "lip": e.lip,
                "quadrature_depth": e.quadrature_depth,
                "model": e.model,
            }),
        }
    }
}

/// Serializable potentials (the evaluator variant has no file form).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PotentialSpec {
    HaarTable {
        #[serde(flatten)]
        table: HaarTable,
    },
    CylinderValues {
        #[serde(flatten)]
        values: CylinderValues,
    },
}

impl PotentialSpec {
    pub fn into_potential(self) -> Result<Potential> {
        Ok(match self {
            PotentialSpec::HaarTable { table } => {
                if table.max_level() > MAX_POTENTIAL_LEVEL {
                    return Err(Error::resource("haar table above level 24"));
                }
                Potential::StepTable(table)
            }
            PotentialSpec::CylinderValues { values } => {
                values.validate()?;
                if values.level > MAX_POTENTIAL_LEVEL {
                    return Err(Error::resource("cylinder table above level 24"));
                }
                Potential::CylinderValues(values)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn approximation_of_step_functions_is_exact() {
        let f = Potential::cylinder_indicator(&w("0"));
        assert_eq!(f.approximation(1).unwrap().values.values, vec![1.0, 0.0]);

        let vals: Vec<f64> = (0..8).map(|i| i as f64 * 0.5 - 1.0).collect();
        let g = Potential::CylinderValues(CylinderValues::new(vals.clone()).unwrap());
        let a = g.approximation(3).unwrap();
        assert_eq!(a.values.values, vals);
        assert_eq!(a.error_bound, 0.0);
    }

    /// f(x) = Σ_{i≥1} 2^{-i} x_i has var_n(f) = 2^{-n}, so LIP = 1 for a_n = 2^{-n}.
    fn weighted_digits() -> Evaluator {
        Evaluator::new("sum of 2^-i x_i", DecayModel::dyadic(), 1.0, 6, |u: &Word| {
            let x = u.periodic_prefix(60);
            (0..60).map(|i| x.get(i).unwrap() as f64 * 0.5f64.powi(i as i32 + 1)).sum()
        })
        .unwrap()
    }

    #[test]
    fn evaluator_quadrature_within_certified_error() {
        let e = weighted_digits();
        let f = Potential::Evaluator(e.clone());
        let approx = f.approximation(2).unwrap();
        assert_eq!(approx.error_bound, 1.0 / 64.0);
        // oracle: dense evaluation over all depth-10 prefixes
        for (i, &v) in approx.values.values.iter().enumerate() {
            let dense: f64 = (0..256u64)
                .map(|j| e.eval_periodic(&Word::from_index(((i as u64) << 8) | j, 10)))
                .sum::<f64>()
                / 256.0;
            // exact value: x1/2 + x2/4 + 1/8
            let exact = (i >> 1) as f64 * 0.5 + (i & 1) as f64 * 0.25 + 0.125;
            assert!((dense - exact).abs() <= 1.0 / 1024.0);
            assert!((v - exact).abs() <= approx.error_bound, "{v} vs {exact}");
        }
        assert!(f.approximation(7).is_err());
    }

    #[test]
    fn coefficient_sup_bound_examples() {
        let f = Potential::cylinder_indicator(&w("0"));
        assert_eq!(f.coefficient_sup_bound(1).unwrap(), 0.0);
        assert_eq!(f.coefficient_sup_bound(0).unwrap(), 1.0);

        let e = Evaluator::new("lip3", DecayModel::dyadic(), 3.0, 4, |_| 0.0).unwrap();
        assert_eq!(Potential::Evaluator(e).coefficient_sup_bound(4).unwrap(), 3.0 / 16.0);

        // h_∅ itself: 4∫h_∅² dβ = 1
        let mut t = HaarTable::zero(1);
        t.set_coefficient(&Word::empty(), 1.0);
        let h = Potential::StepTable(t);
        assert_eq!(h.coefficient_sup_bound(0).unwrap(), 1.0);
        let values = h.approximation(1).unwrap().values;
        let recovered = HaarTable::from_cylinder_values(&values).unwrap();
        assert_eq!(recovered.coefficient(&Word::empty()), 1.0);
    }

    #[test]
    fn potential_spec_json() {
        let spec: PotentialSpec =
            serde_json::from_str(r#"{"kind":"cylinder-values","level":1,"values":[1,0]}"#).unwrap();
        let f = spec.clone().into_potential().unwrap();
        assert_eq!(f.approximation(1).unwrap().values.values, vec![1.0, 0.0]);
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<PotentialSpec>(&text).unwrap(), spec);

        let spec: PotentialSpec = serde_json::from_str(
            r#"{"kind":"haar-table","constant":0.5,"coeffs":[{"w":"e","c":1}],"max_level":1}"#,
        )
        .unwrap();
        assert!(matches!(spec.into_potential().unwrap(), Potential::StepTable(_)));

        let bad: PotentialSpec =
            serde_json::from_str(r#"{"kind":"cylinder-values","level":2,"values":[1,0]}"#).unwrap();
        assert!(bad.into_potential().is_err());
    }
}
