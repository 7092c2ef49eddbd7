use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::symbolic::{level_of_table, Word};

/// h_w(x): +1/2 on [w0], −1/2 on [w1], 0 off [w].
///
/// `x` is a prefix of the evaluation point and must be longer than `w`.
pub fn haar_evaluate(w: &Word, x: &Word) -> Result<f64> {
    if x.len() <= w.len() {
        return Err(Error::usage(format!(
            "prefix {x} is too short to evaluate h_{w}"
        )));
    }
    if !w.is_prefix_of(x) {
        return Ok(0.0);
    }
    Ok(match x.get(w.len()) {
        Some(0) => 0.5,
        _ => -0.5,
    })
}

/// Values of a step function on the 2^level cylinders, in lexicographic order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CylinderValues {
    pub level: usize,
    pub values: Vec<f64>,
}

impl CylinderValues {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let level = level_of_table(values.len())?;
        Ok(CylinderValues { level, values })
    }

    pub fn validate(&self) -> Result<()> {
        if level_of_table(self.values.len())? != self.level {
            return Err(Error::usage(format!(
                "level {} needs {} values, got {}",
                self.level,
                1usize << self.level,
                self.values.len()
            )));
        }
        Ok(())
    }

    /// Value on the cylinder containing the point with prefix `x`.
    pub fn value_at(&self, x: &Word) -> Result<f64> {
        if x.len() < self.level {
            return Err(Error::usage(format!(
                "prefix {x} shorter than step level {}",
                self.level
            )));
        }
        Ok(self.values[x.prefix(self.level).index() as usize])
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Averages onto level n ≤ self.level, or repeats values for n > level.
    pub fn at_level(&self, n: usize) -> CylinderValues {
        let values = if n <= self.level {
            let block = 1usize << (self.level - n);
            self.values
                .chunks(block)
                .map(|c| c.iter().sum::<f64>() / block as f64)
                .collect()
        } else {
            let rep = 1usize << (n - self.level);
            self.values
                .iter()
                .flat_map(|&v| std::iter::repeat_n(v, rep))
                .collect()
        };
        CylinderValues { level: n, values }
    }
}

/// Finite Haar expansion f = c_∅ + Σ_{|w|<L} c_w h_w.
///
/// `constant` is the β-average c_∅(f). The coefficient of h_∅ (the empty
/// word) is stored separately in `levels[0][0]`; the two are different
/// numbers that the literature writes with the same symbol.
#[derive(Clone, Debug, PartialEq)]
pub struct HaarTable {
    constant: f64,
    /// levels[k][i] = coefficient of h_w for the i-th word w of length k.
    levels: Vec<Vec<f64>>,
}

impl HaarTable {
    pub fn zero(max_level: usize) -> Self {
        HaarTable {
            constant: 0.0,
            levels: (0..max_level).map(|k| vec![0.0; 1 << k]).collect(),
        }
    }

    pub fn constant(c: f64) -> Self {
        HaarTable {
            constant: c,
            levels: Vec::new(),
        }
    }

    pub fn from_levels(constant: f64, levels: Vec<Vec<f64>>) -> Result<Self> {
        for (k, lvl) in levels.iter().enumerate() {
            if lvl.len() != 1 << k {
                return Err(Error::usage(format!(
                    "level {k} holds {} coefficients, expected {}",
                    lvl.len(),
                    1usize << k
                )));
            }
        }
        Ok(HaarTable { constant, levels })
    }

    /// Exact Haar coefficients of the level-m step function with the given
    /// cylinder values: c_∅ is the mean and c_w = avg_[w0] − avg_[w1].
    pub fn from_cylinder_values(values: &CylinderValues) -> Result<Self> {
        values.validate()?;
        let m = values.level;
        let mut levels = vec![Vec::new(); m];
        let mut avgs = values.values.clone();
        for k in (0..m).rev() {
            let (coeffs, coarse): (Vec<f64>, Vec<f64>) = avgs
                .chunks(2)
                .map(|p| (p[0] - p[1], 0.5 * (p[0] + p[1])))
                .unzip();
            levels[k] = coeffs;
            avgs = coarse;
        }
        Ok(HaarTable {
            constant: avgs[0],
            levels,
        })
    }

    /// Coefficients vanish on levels ≥ max_level.
    pub fn max_level(&self) -> usize {
        self.levels.len()
    }

    pub fn constant_term(&self) -> f64 {
        self.constant
    }

    pub fn set_constant_term(&mut self, c: f64) {
        self.constant = c;
    }

    pub fn coefficient(&self, w: &Word) -> f64 {
        self.levels
            .get(w.len())
            .map(|lvl| lvl[w.index() as usize])
            .unwrap_or(0.0)
    }

    pub fn set_coefficient(&mut self, w: &Word, c: f64) {
        while self.levels.len() <= w.len() {
            let k = self.levels.len();
            self.levels.push(vec![0.0; 1 << k]);
        }
        self.levels[w.len()][w.index() as usize] = c;
    }

    /// Coefficients of level k in lexicographic order (empty beyond max_level).
    pub fn level(&self, k: usize) -> &[f64] {
        self.levels.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn max_abs_at_level(&self, k: usize) -> f64 {
        self.level(k).iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// The expansion of A_n f: coefficients of level ≥ n dropped.
    pub fn truncated(&self, n: usize) -> HaarTable {
        HaarTable {
            constant: self.constant,
            levels: self.levels.iter().take(n).cloned().collect(),
        }
    }

    /// Cylinder values of A_m f at level m (exact; refines past max_level).
    pub fn cylinder_values(&self, m: usize) -> CylinderValues {
        let mut values = vec![self.constant];
        for k in 0..m {
            let coeffs = self.level(k);
            values = values
                .iter()
                .enumerate()
                .flat_map(|(i, &v)| {
                    let c = coeffs.get(i).copied().unwrap_or(0.0);
                    [v + 0.5 * c, v - 0.5 * c]
                })
                .collect();
        }
        CylinderValues { level: m, values }
    }

    /// Value of the represented step function at a point with prefix `x`,
    /// summing the series term by term.
    pub fn evaluate(&self, x: &Word) -> Result<f64> {
        if x.len() < self.max_level() {
            return Err(Error::usage(format!(
                "prefix {x} shorter than step level {}",
                self.max_level()
            )));
        }
        let mut total = self.constant;
        for k in 0..self.max_level() {
            let w = x.prefix(k);
            total += self.coefficient(&w) * haar_evaluate(&w, x)?;
        }
        Ok(total)
    }

    pub fn add(&self, other: &HaarTable) -> HaarTable {
        let l = self.max_level().max(other.max_level());
        let levels = (0..l)
            .map(|k| {
                (0..1usize << k)
                    .map(|i| {
                        self.level(k).get(i).copied().unwrap_or(0.0)
                            + other.level(k).get(i).copied().unwrap_or(0.0)
                    })
                    .collect()
            })
            .collect();
        HaarTable {
            constant: self.constant + other.constant,
            levels,
        }
    }

    pub fn scaled(&self, lambda: f64) -> HaarTable {
        HaarTable {
            constant: lambda * self.constant,
            levels: self
                .levels
                .iter()
                .map(|l| l.iter().map(|c| lambda * c).collect())
                .collect(),
        }
    }

    pub fn shifted(&self, c: f64) -> HaarTable {
        HaarTable {
            constant: self.constant + c,
            levels: self.levels.clone(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffEntry {
    w: Word,
    c: f64,
}

#[derive(Serialize, Deserialize)]
struct HaarTableJson {
    constant: f64,
    coeffs: Vec<CoeffEntry>,
    max_level: usize,
}

impl Serialize for HaarTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs = self
            .levels
            .iter()
            .enumerate()
            .flat_map(|(k, lvl)| {
                lvl.iter().enumerate().filter(|(_, c)| **c != 0.0).map(move |(i, &c)| CoeffEntry {
                    w: Word::from_index(i as u64, k),
                    c,
                })
            })
            .collect();
        HaarTableJson {
            constant: self.constant,
            coeffs,
            max_level: self.max_level(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HaarTable {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = HaarTableJson::deserialize(deserializer)?;
        if raw.max_level > 24 {
            return Err(D::Error::custom("max_level above 24"));
        }
        let mut table = HaarTable::zero(raw.max_level);
        table.constant = raw.constant;
        for e in raw.coeffs {
            if e.w.len() >= raw.max_level {
                return Err(D::Error::custom(format!(
                    "coefficient for {} lies at or beyond max_level {}",
                    e.w, raw.max_level
                )));
            }
            table.set_coefficient(&e.w, e.c);
        }
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn haar_evaluate_examples() {
        assert_eq!(haar_evaluate(&Word::empty(), &w("0")).unwrap(), 0.5);
        assert_eq!(haar_evaluate(&w("0"), &w("01")).unwrap(), -0.5);
        assert_eq!(haar_evaluate(&w("1"), &w("00")).unwrap(), 0.0);
        assert!(haar_evaluate(&w("01"), &w("01")).is_err());
    }

    #[test]
    fn indicator_of_zero_cylinder() {
        // 1_[0] = 1/2 + h_∅
        let t = HaarTable::from_cylinder_values(&CylinderValues::new(vec![1.0, 0.0]).unwrap()).unwrap();
        assert_eq!(t.constant_term(), 0.5);
        assert_eq!(t.coefficient(&Word::empty()), 1.0);
        assert_eq!(t.max_level(), 1);
        assert_eq!(t.evaluate(&w("0")).unwrap(), 1.0);
        assert_eq!(t.evaluate(&w("1")).unwrap(), 0.0);
    }

    #[test]
    fn constants_have_no_haar_coefficients() {
        let t = HaarTable::from_cylinder_values(&CylinderValues::new(vec![2.5; 4]).unwrap()).unwrap();
        assert_eq!(t.constant_term(), 2.5);
        for k in 0..2 {
            assert!(t.level(k).iter().all(|&c| c == 0.0));
        }
    }

    /// Oracle: c_∅ = ∫f dβ and c_w = 2^{|w|+2} ∫ f h_w dβ by summing over the
    /// four cylinders, each of β-mass 1/4.
    #[test]
    fn level_two_example_against_direct_integration() {
        let vals = [1.0, -1.0, 0.0, 0.0];
        let t = HaarTable::from_cylinder_values(&CylinderValues::new(vals.to_vec()).unwrap()).unwrap();
        let integrate = |hw: &Word| -> f64 {
            Word::all_of_length(2)
                .zip(vals)
                .map(|(x, v)| v * haar_evaluate(hw, &x).unwrap() * 0.25)
                .sum()
        };
        assert_eq!(t.constant_term(), vals.iter().sum::<f64>() / 4.0);
        for hw in [Word::empty(), w("0"), w("1")] {
            let oracle = (1u32 << (hw.len() + 2)) as f64 * integrate(&hw);
            assert!((t.coefficient(&hw) - oracle).abs() < 1e-15, "{hw}");
        }
        assert_eq!(t.coefficient(&w("0")), 2.0);
        assert_eq!(t.coefficient(&w("1")), 0.0);
        assert_eq!(t.coefficient(&Word::empty()), 0.0);
    }

    #[test]
    fn round_trip_and_refinement() {
        let vals: Vec<f64> = (0..8).map(|i| (i as f64).sin()).collect();
        let cv = CylinderValues::new(vals.clone()).unwrap();
        let t = HaarTable::from_cylinder_values(&cv).unwrap();
        let back = t.cylinder_values(3);
        for (a, b) in back.values.iter().zip(&vals) {
            assert!((a - b).abs() < 1e-12);
        }
        let coarse = t.cylinder_values(1);
        let avg = cv.at_level(1);
        for (a, b) in coarse.values.iter().zip(&avg.values) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(t.cylinder_values(4).values.len(), 16);
        for x in Word::all_of_length(3) {
            assert!((t.evaluate(&x).unwrap() - vals[x.index() as usize]).abs() < 1e-12);
        }
    }

    #[test]
    fn json_format() {
        let mut t = HaarTable::zero(2);
        t.set_constant_term(0.5);
        t.set_coefficient(&Word::empty(), 1.0);
        t.set_coefficient(&w("1"), -0.25);
        let v = serde_json::to_value(&t).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"constant": 0.5, "coeffs": [{"w": "e", "c": 1.0}, {"w": "1", "c": -0.25}], "max_level": 2})
        );
        let back: HaarTable = serde_json::from_value(v).unwrap();
        assert_eq!(back, t);
        let bad = serde_json::json!({"constant": 0.0, "coeffs": [{"w": "01", "c": 1.0}], "max_level": 2});
        assert!(serde_json::from_value::<HaarTable>(bad).is_err());
    }

    #[test]
    fn cylinder_values_validation() {
        assert!(CylinderValues::new(vec![1.0, 2.0, 3.0]).is_err());
        let bad = CylinderValues { level: 2, values: vec![0.0; 2] };
        assert!(bad.validate().is_err());
    }
}
