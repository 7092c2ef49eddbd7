//! Arc-weighted directed multigraphs and their simple cycles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbolic::Word;

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedDigraph {
    n_vertices: usize,
    tails: Vec<u32>,
    heads: Vec<u32>,
    weights: Vec<f64>,
    labels: Option<Vec<String>>,
    /// Set for BG_n: arc i is the i-th word of Σ_n in lexicographic order.
    de_bruijn_level: Option<usize>,
}

impl WeightedDigraph {
    pub fn new(n_vertices: usize, arcs: &[(usize, usize, f64)]) -> Result<Self> {
        let mut g = WeightedDigraph {
            n_vertices,
            tails: Vec::with_capacity(arcs.len()),
            heads: Vec::with_capacity(arcs.len()),
            weights: Vec::with_capacity(arcs.len()),
            labels: None,
            de_bruijn_level: None,
        };
        for &(t, h, w) in arcs {
            g.push_arc(t, h, w)?;
        }
        Ok(g)
    }

    fn push_arc(&mut self, tail: usize, head: usize, weight: f64) -> Result<()> {
        if tail >= self.n_vertices || head >= self.n_vertices {
            return Err(Error::usage(format!(
                "arc {tail}->{head} references a vertex outside 0..{}",
                self.n_vertices
            )));
        }
        if !weight.is_finite() {
            return Err(Error::usage(format!("arc {tail}->{head} has non-finite weight")));
        }
        self.tails.push(tail as u32);
        self.heads.push(head as u32);
        self.weights.push(weight);
        Ok(())
    }

    pub(crate) fn from_parts(
        n_vertices: usize,
        tails: Vec<u32>,
        heads: Vec<u32>,
        weights: Vec<f64>,
        de_bruijn_level: Option<usize>,
    ) -> Self {
        WeightedDigraph {
            n_vertices,
            tails,
            heads,
            weights,
            labels: None,
            de_bruijn_level,
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_arcs(&self) -> usize {
        self.tails.len()
    }

    pub fn tail(&self, arc: usize) -> usize {
        self.tails[arc] as usize
    }

    pub fn head(&self, arc: usize) -> usize {
        self.heads[arc] as usize
    }

    pub fn weight(&self, arc: usize) -> f64 {
        self.weights[arc]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn de_bruijn_level(&self) -> Option<usize> {
        self.de_bruijn_level
    }

    /// A copy of the graph with new arc weights.
    pub fn with_weights(&self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.n_arcs() {
            return Err(Error::usage(format!(
                "{} weights for {} arcs",
                weights.len(),
                self.n_arcs()
            )));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::usage("non-finite arc weight"));
        }
        Ok(WeightedDigraph {
            weights,
            ..self.clone()
        })
    }

    pub fn map_weights(&self, f: impl Fn(f64) -> f64) -> Self {
        WeightedDigraph {
            weights: self.weights.iter().map(|&w| f(w)).collect(),
            ..self.clone()
        }
    }

    /// Display label of an arc: its word for de Bruijn graphs, the
    /// user-supplied label or the arc index otherwise.
    pub fn arc_label(&self, arc: usize) -> String {
        if let Some(n) = self.de_bruijn_level {
            return Word::from_index(arc as u64, n).to_string();
        }
        match &self.labels {
            Some(l) => l[arc].clone(),
            None => arc.to_string(),
        }
    }

    /// Incoming arcs of every vertex in compressed form: arcs into `v` are
    /// `arcs[offsets[v]..offsets[v + 1]]`, ascending by arc index.
    pub(crate) fn in_arcs(&self) -> (Vec<usize>, Vec<u32>) {
        csr(self.n_vertices, &self.heads)
    }

    pub(crate) fn out_arcs(&self) -> (Vec<usize>, Vec<u32>) {
        csr(self.n_vertices, &self.tails)
    }

    pub fn to_json(&self) -> DigraphJson {
        DigraphJson {
            n_vertices: self.n_vertices,
            arcs: (0..self.n_arcs())
                .map(|a| ArcJson {
                    tail: self.tail(a),
                    head: self.head(a),
                    weight: self.weight(a),
                    label: if self.de_bruijn_level.is_some() || self.labels.is_some() {
                        Some(self.arc_label(a))
                    } else {
                        None
                    },
                })
                .collect(),
        }
    }

    pub fn from_json(json: &DigraphJson) -> Result<Self> {
        let mut g = WeightedDigraph::new(json.n_vertices, &[])?;
        for a in &json.arcs {
            g.push_arc(a.tail, a.head, a.weight)?;
        }
        if json.arcs.iter().any(|a| a.label.is_some()) {
            g.labels = Some(
                json.arcs
                    .iter()
                    .enumerate()
                    .map(|(i, a)| a.label.clone().unwrap_or_else(|| i.to_string()))
                    .collect(),
            );
        }
        Ok(g)
    }

    /// Builds and validates a cycle from an ordered list of arc indices.
    pub fn cycle(&self, arcs: Vec<usize>) -> Result<DirectedCycle> {
        DirectedCycle::new(self, arcs)
    }
}

fn csr(n_vertices: usize, keys: &[u32]) -> (Vec<usize>, Vec<u32>) {
    let mut offsets = vec![0usize; n_vertices + 1];
    for &k in keys {
        offsets[k as usize + 1] += 1;
    }
    for v in 0..n_vertices {
        offsets[v + 1] += offsets[v];
    }
    let mut fill = offsets.clone();
    let mut arcs = vec![0u32; keys.len()];
    for (a, &k) in keys.iter().enumerate() {
        arcs[fill[k as usize]] = a as u32;
        fill[k as usize] += 1;
    }
    (offsets, arcs)
}

/// Weighted-digraph interchange format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DigraphJson {
    pub n_vertices: usize,
    pub arcs: Vec<ArcJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcJson {
    pub tail: usize,
    pub head: usize,
    pub weight: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// A simple directed cycle, stored as arc indices in traversal order,
/// rotated so that the smallest arc index comes first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectedCycle {
    arcs: Vec<usize>,
}

impl DirectedCycle {
    pub fn new(g: &WeightedDigraph, mut arcs: Vec<usize>) -> Result<Self> {
        if arcs.is_empty() {
            return Err(Error::usage("a cycle needs at least one arc"));
        }
        if let Some(&bad) = arcs.iter().find(|&&a| a >= g.n_arcs()) {
            return Err(Error::usage(format!("arc {bad} does not exist")));
        }
        let len = arcs.len();
        for i in 0..len {
            let (a, b) = (arcs[i], arcs[(i + 1) % len]);
            if g.head(a) != g.tail(b) {
                return Err(Error::usage(format!(
                    "arc {} does not continue from arc {}",
                    g.arc_label(b),
                    g.arc_label(a)
                )));
            }
        }
        let mut seen = vec![false; g.n_vertices()];
        for &a in &arcs {
            let v = g.tail(a);
            if seen[v] {
                return Err(Error::usage("cycle revisits a vertex"));
            }
            seen[v] = true;
        }
        let start = (0..len).min_by_key(|&i| arcs[i]).unwrap_or(0);
        arcs.rotate_left(start);
        Ok(DirectedCycle { arcs })
    }

    pub fn arcs(&self) -> &[usize] {
        &self.arcs
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn mean(&self, g: &WeightedDigraph) -> f64 {
        self.arcs.iter().map(|&a| g.weight(a)).sum::<f64>() / self.arcs.len() as f64
    }

    pub fn labels(&self, g: &WeightedDigraph) -> Vec<String> {
        self.arcs.iter().map(|&a| g.arc_label(a)).collect()
    }

    pub fn contains_arc(&self, arc: usize) -> bool {
        self.arcs.contains(&arc)
    }
}
