use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::gauge::Gauge;
use super::rng::WordDraws;
use crate::certify::HaarSource;
use crate::debruijn::{assign_table_weights, build_graph};
use crate::error::{Error, Result};
use crate::haar::{HaarTable, Potential};
use crate::mean_cycle::{gap, GapResult};
use crate::symbolic::{DecayModel, Word};

pub const MAX_BRICK_LEVEL: usize = 22;

/// Draws of words shorter than `below` come from `seed` instead of the
/// sample's own seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrozenLevels {
    pub seed: u64,
    pub below: usize,
}

/// A random element g = Σ_{|w|<L} b_w·Y_w·h_w of a Hilbert brick.
#[derive(Clone, Debug, PartialEq)]
pub struct BrickSample {
    gauge: Gauge,
    seed: u64,
    frozen: Option<FrozenLevels>,
    /// draws[k][i] = Y_w for the i-th word of length k.
    draws: Vec<Vec<f64>>,
}

impl BrickSample {
    /// Builds a sample from explicit draws, one level per entry.
    pub fn from_draws(gauge: Gauge, seed: u64, draws: Vec<Vec<f64>>) -> Result<Self> {
        gauge.validate()?;
        if draws.is_empty() {
            return Err(Error::usage("a brick sample needs truncation level ≥ 1"));
        }
        if draws.len() > MAX_BRICK_LEVEL {
            return Err(Error::resource(format!("truncation level above {MAX_BRICK_LEVEL}")));
        }
        for (k, level) in draws.iter().enumerate() {
            if level.len() != 1 << k {
                return Err(Error::usage(format!("level {k} holds {} draws", level.len())));
            }
            if let Some(y) = level.iter().find(|y| !(-1.0..=1.0).contains(*y)) {
                return Err(Error::usage(format!("draw {y} outside [-1, 1]")));
            }
        }
        Ok(BrickSample {
            gauge,
            seed,
            frozen: None,
            draws,
        })
    }

    pub fn gauge(&self) -> &Gauge {
        &self.gauge
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn frozen(&self) -> Option<FrozenLevels> {
        self.frozen
    }

    pub fn truncation_level(&self) -> usize {
        self.draws.len()
    }

    pub fn draw(&self, w: &Word) -> f64 {
        self.draws.get(w.len()).map_or(0.0, |l| l[w.index() as usize])
    }

    pub fn coefficient(&self, w: &Word) -> f64 {
        self.gauge.b_word(w) * self.draw(w)
    }

    /// Haar table of g: constant 0, coefficients b_w·Y_w.
    pub fn coefficient_table(&self) -> HaarTable {
        let levels = self
            .draws
            .iter()
            .enumerate()
            .map(|(k, level)| {
                level
                    .iter()
                    .enumerate()
                    .map(|(i, y)| self.gauge.b_word(&Word::from_index(i as u64, k)) * y)
                    .collect()
            })
            .collect();
        HaarTable::from_levels(0.0, levels).expect("levels have dyadic sizes")
    }
}

/// Samples Y_w uniform on [−1, 1] for every |w| < `level`.
pub fn sample_brick(gauge: &Gauge, level: usize, seed: u64) -> Result<BrickSample> {
    sample_with_frozen(gauge, level, seed, None)
}

/// Like [`sample_brick`], with the draws below `frozen.below` taken from
/// `frozen.seed`, so that samples sharing it agree on those levels.
pub fn sample_with_frozen(
    gauge: &Gauge,
    level: usize,
    seed: u64,
    frozen: Option<FrozenLevels>,
) -> Result<BrickSample> {
    gauge.validate()?;
    if level == 0 {
        return Err(Error::usage("a brick sample needs truncation level ≥ 1"));
    }
    if level > MAX_BRICK_LEVEL {
        return Err(Error::resource(format!(
            "{} draws exceed the guard at level {MAX_BRICK_LEVEL}",
            (1u64 << level) - 1
        )));
    }
    let own = WordDraws::new(seed);
    let low = frozen.map(|f| (WordDraws::new(f.seed), f.below));
    let draws = (0..level)
        .map(|k| {
            let source = match &low {
                Some((d, below)) if k < *below => d,
                _ => &own,
            };
            Word::all_of_length(k).map(|w| source.uniform(&w)).collect()
        })
        .collect();
    Ok(BrickSample {
        gauge: gauge.clone(),
        seed,
        frozen,
        draws,
    })
}

#[derive(Serialize, Deserialize)]
struct DrawEntry {
    w: Word,
    y: f64,
}

#[derive(Serialize, Deserialize)]
struct BrickJson {
    gauge: Gauge,
    truncation_level: usize,
    seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    frozen: Option<FrozenLevels>,
    draws: Vec<DrawEntry>,
}

impl Serialize for BrickSample {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let draws = self
            .draws
            .iter()
            .enumerate()
            .flat_map(|(k, l)| {
                l.iter().enumerate().map(move |(i, &y)| DrawEntry {
                    w: Word::from_index(i as u64, k),
                    y,
                })
            })
            .collect();
        BrickJson {
            gauge: self.gauge.clone(),
            truncation_level: self.truncation_level(),
            seed: self.seed,
            frozen: self.frozen,
            draws,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BrickSample {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = BrickJson::deserialize(deserializer)?;
        let level = raw.truncation_level;
        if level == 0 || level > MAX_BRICK_LEVEL {
            return Err(D::Error::custom(format!("truncation level {level} outside 1..={MAX_BRICK_LEVEL}")));
        }
        let mut draws: Vec<Vec<Option<f64>>> = (0..level).map(|k| vec![None; 1 << k]).collect();
        for e in raw.draws {
            let slot = draws
                .get_mut(e.w.len())
                .ok_or_else(|| D::Error::custom(format!("draw for {} beyond truncation level", e.w)))?;
            slot[e.w.index() as usize] = Some(e.y);
        }
        let draws = draws
            .into_iter()
            .map(|l| l.into_iter().collect::<Option<Vec<f64>>>())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| D::Error::custom("missing draws"))?;
        let mut sample = BrickSample::from_draws(raw.gauge, raw.seed, draws).map_err(D::Error::custom)?;
        sample.frozen = raw.frozen;
        Ok(sample)
    }
}

/// f0 + g for a base potential f0 and a brick sample g.
#[derive(Clone, Copy, Debug)]
pub struct PerturbedPotential<'a> {
    pub base: &'a Potential,
    pub sample: &'a BrickSample,
}

impl<'a> PerturbedPotential<'a> {
    pub fn new(base: &'a Potential, sample: &'a BrickSample) -> Self {
        PerturbedPotential { base, sample }
    }
}

impl HaarSource for PerturbedPotential<'_> {
    fn level_table(&self, n: usize) -> Result<(HaarTable, f64)> {
        let l = self.sample.truncation_level();
        if n > l {
            return Err(Error::usage(format!("level {n} above the sample's truncation level {l}")));
        }
        let (table, err) = self.base.haar_table(n)?;
        Ok((table.add(&self.sample.coefficient_table().truncated(n)), err))
    }

    /// Sampled levels contribute their exact maxima; above the truncation
    /// level every brick member obeys |c_w| ≤ b_w.
    fn tail_majorant(&self, model: &DecayModel, n: usize) -> Result<f64> {
        if n == 0 {
            return Err(Error::usage("tail majorant needs n ≥ 1"));
        }
        let l = self.sample.truncation_level();
        let g = self.sample.coefficient_table();
        let gauge = self.sample.gauge();
        let weight = |k: usize| (k - n + 1) as f64;
        match self.base.exact_table()? {
            Some(f0) => {
                let end = l.max(f0.max_level()).max(n);
                let sum = f0.add(&g);
                let head: f64 = (n..end)
                    .map(|k| {
                        let bound = if k < l {
                            sum.max_abs_at_level(k)
                        } else {
                            f0.max_abs_at_level(k) + gauge.b_bar(k)
                        };
                        weight(k) * bound
                    })
                    .sum();
                Ok(head + gauge.weighted_tail_from(n, end))
            }
            None => {
                let end = l.max(n);
                let head: f64 = (n..end).map(|k| weight(k) * g.max_abs_at_level(k)).sum();
                Ok(head + gauge.weighted_tail_from(n, end) + self.base.tail_majorant(model, n)?)
            }
        }
    }

    fn max_level(&self) -> Option<usize> {
        let l = self.sample.truncation_level();
        Some(self.base.max_level().map_or(l, |b| b.min(l)))
    }

    fn describe(&self) -> serde_json::Value {
        serde_json::json!({
            "kind": "perturbed",
            "base": self.base.describe(),
            "brick": {
                "gauge": self.sample.gauge(),
                "truncation_level": self.sample.truncation_level(),
                "seed": self.sample.seed(),
                "frozen": self.sample.frozen(),
            },
        })
    }
}

/// Gap_n of f0 + g on BG_n.
pub fn gap_of_sum(f0: &Potential, g: &BrickSample, n: usize) -> Result<GapResult> {
    let (table, _) = PerturbedPotential::new(f0, g).level_table(n)?;
    gap(&assign_table_weights(&build_graph(n)?, &table)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mean_cycle::gap_by_enumeration;

    fn gauge() -> Gauge {
        Gauge::new(DecayModel::theta(1.0, 0.2).unwrap()).unwrap()
    }

    fn zeros(level: usize) -> Vec<Vec<f64>> {
        (0..level).map(|k| vec![0.0; 1 << k]).collect()
    }

    #[test]
    fn sample_shapes_and_bounds() {
        let g = gauge();
        let one = sample_brick(&g, 1, 5).unwrap();
        assert_eq!(serde_json::to_value(&one).unwrap()["draws"].as_array().unwrap().len(), 1);

        let s = sample_brick(&g, 3, 5).unwrap();
        let radii = [1.0, 0.2, 0.2, 0.004, 0.004, 0.004, 0.004];
        let words: Vec<Word> = (0..3).flat_map(Word::all_of_length).collect();
        assert_eq!(words.len(), 7);
        for (w, r) in words.iter().zip(radii) {
            assert!(s.coefficient(w).abs() <= r * (1.0 + 1e-12), "{w}");
        }
        assert_eq!(s, sample_brick(&g, 3, 5).unwrap());
        assert_ne!(s, sample_brick(&g, 3, 6).unwrap());
        assert!(matches!(sample_brick(&g, 23, 5), Err(Error::Resource(_))));
    }

    #[test]
    fn truncations_are_nested() {
        let g = gauge();
        let small = sample_brick(&g, 3, 9).unwrap();
        let big = sample_brick(&g, 5, 9).unwrap();
        for w in (0..3).flat_map(Word::all_of_length) {
            assert_eq!(small.draw(&w), big.draw(&w));
        }
    }

    #[test]
    fn frozen_levels_are_shared() {
        let g = gauge();
        let frozen = Some(FrozenLevels { seed: 77, below: 2 });
        let a = sample_with_frozen(&g, 3, 1, frozen).unwrap();
        let b = sample_with_frozen(&g, 3, 2, frozen).unwrap();
        for w in (0..2).flat_map(Word::all_of_length) {
            assert_eq!(a.draw(&w), b.draw(&w));
        }
        assert_ne!(a.draw(&"01".parse().unwrap()), b.draw(&"01".parse().unwrap()));
    }

    #[test]
    fn json_round_trip() {
        let s = sample_with_frozen(&gauge(), 4, 3, Some(FrozenLevels { seed: 1, below: 2 })).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        let back: BrickSample = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["draws"][0], serde_json::json!({"w": "e", "y": s.draw(&Word::empty())}));
    }

    #[test]
    fn gap_of_sum_examples() {
        let zero = Potential::constant(0.0);
        let g0 = BrickSample::from_draws(gauge(), 0, zeros(3)).unwrap();
        assert_eq!(gap_of_sum(&zero, &g0, 3).unwrap().gap, 0.0);

        let ind = Potential::cylinder_indicator(&"0".parse().unwrap());
        assert_eq!(gap_of_sum(&ind, &g0, 1).unwrap().gap, 1.0);

        let g = sample_brick(&gauge(), 3, 11).unwrap();
        let r = gap_of_sum(&zero, &g, 3).unwrap();
        assert!(r.gap > 0.0);
        let (t, _) = PerturbedPotential::new(&zero, &g).level_table(3).unwrap();
        let e = gap_by_enumeration(&assign_table_weights(&build_graph(3).unwrap(), &t).unwrap()).unwrap();
        assert!((r.gap - e.gap).abs() < 1e-12);
        assert!(gap_of_sum(&zero, &g, 4).is_err());
    }

    #[test]
    fn tail_majorant_covers_both_parts() {
        let model = DecayModel::theta(1.0, 0.2).unwrap();
        let gauge = gauge();
        let g = sample_brick(&gauge, 3, 4).unwrap();
        let mut t0 = HaarTable::zero(5);
        t0.set_coefficient(&"0110".parse().unwrap(), 0.5);
        let f0 = Potential::StepTable(t0);
        let p = PerturbedPotential::new(&f0, &g);
        let tail = p.tail_majorant(&model, 2).unwrap();
        let sum = t0_plus(&f0, &g);
        // level 2 exact, level 3 and 4 bounded by |c(f0)| + b, and beyond by the gauge
        let oracle = sum.max_abs_at_level(2)
            + 2.0 * (0.0 + gauge.b(3))
            + 3.0 * (0.5 + gauge.b(4))
            + (5..40).map(|k| (k - 1) as f64 * gauge.b(k)).sum::<f64>();
        assert!(tail >= oracle && tail <= oracle * (1.0 + 1e-9), "{tail} vs {oracle}");
    }

    fn t0_plus(f0: &Potential, g: &BrickSample) -> HaarTable {
        f0.exact_table().unwrap().unwrap().add(&g.coefficient_table())
    }
}
