//! Karp's maximum mean cycle dynamic program.
//!
//! D_k(v) is the heaviest k-arc walk ending at v (walks may start anywhere,
//! D_0 ≡ 0). The maximum cycle mean is
//!
//! ```text
//! λ* = max_v min_{0≤k<N} (D_N(v) − D_k(v)) / (N − k),   N = |V|.
//! ```
//!
//! Every cycle on the critical N-arc walk into an optimizing vertex has mean
//! λ*, so the witness is the first closed loop met while walking back.

use serde::{Deserialize, Serialize};

use crate::digraph::{DirectedCycle, WeightedDigraph};
use crate::error::{Error, Result};

/// Largest (|V|+1)·|V| table the dynamic program will allocate.
pub const MAX_KARP_CELLS: usize = 1 << 27;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Karp,
    Enumeration,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeanCycleResult {
    /// Mean weight of `witness_cycle`, recomputed from its arcs.
    pub max_mean: f64,
    pub witness_cycle: DirectedCycle,
    pub method: Method,
}

const NONE: u32 = u32::MAX;

pub fn max_mean_cycle_karp(g: &WeightedDigraph) -> Result<MeanCycleResult> {
    max_mean_cycle_excluding(g, None)
}

/// Karp on `g` with one arc removed (used by the arc-deletion gap sweep).
pub fn max_mean_cycle_excluding(g: &WeightedDigraph, excluded: Option<usize>) -> Result<MeanCycleResult> {
    let packed = PackedInArcs::new(g)?;
    let mut ws = Workspace::default();
    packed.solve(g, excluded, &mut ws)
}

/// In-arcs grouped by head vertex, ascending arc index within a group.
pub(crate) struct PackedInArcs {
    n: usize,
    starts: Vec<usize>,
    tails: Vec<u32>,
    weights: Vec<f64>,
    ids: Vec<u32>,
    /// Every vertex has exactly two in-arcs, as in de Bruijn graphs.
    in_degree_two: bool,
}

/// Buffers reused across runs on the same graph.
#[derive(Default)]
pub(crate) struct Workspace {
    prev: Vec<f64>,
    cur: Vec<f64>,
    last: Vec<f64>,
    worst: Vec<f64>,
    pred: Vec<u32>,
    /// Packed weights with the excluded arc set to −∞.
    weights: Vec<f64>,
}

impl PackedInArcs {
    pub(crate) fn new(g: &WeightedDigraph) -> Result<Self> {
        let n = g.n_vertices();
        if n == 0 || g.n_arcs() == 0 {
            return Err(Error::NoCycle);
        }
        if (n + 1).saturating_mul(n) > MAX_KARP_CELLS {
            return Err(Error::resource(format!(
                "Karp table for {n} vertices exceeds {MAX_KARP_CELLS} cells"
            )));
        }
        let (offsets, in_arcs) = g.in_arcs();
        Ok(PackedInArcs {
            n,
            in_degree_two: offsets.windows(2).all(|w| w[1] - w[0] == 2),
            starts: offsets,
            tails: in_arcs.iter().map(|&a| g.tail(a as usize) as u32).collect(),
            weights: in_arcs.iter().map(|&a| g.weight(a as usize)).collect(),
            ids: in_arcs,
        })
    }

    /// One row of the recursion D_k(v) = max_{a=(u,v)} D_{k−1}(u) + w(a).
    /// Unreachable tails and the excluded arc carry −∞ and never win.
    #[inline]
    fn step(&self, weights: &[f64], prev: &[f64], cur: &mut [f64], pred: Option<&mut [u32]>) {
        if self.in_degree_two {
            return self.step_two(weights, prev, cur, pred);
        }
        let mut pred = pred;
        for v in 0..self.n {
            let mut best = f64::NEG_INFINITY;
            let mut best_arc = NONE;
            let range = self.starts[v]..self.starts[v + 1];
            for ((&t, &w), &id) in self.tails[range.clone()].iter().zip(&weights[range.clone()]).zip(&self.ids[range]) {
                let cand = prev[t as usize] + w;
                let better = cand > best;
                best = if better { cand } else { best };
                best_arc = if better { id } else { best_arc };
            }
            cur[v] = best;
            if let Some(p) = pred.as_deref_mut() {
                p[v] = best_arc;
            }
        }
    }

    /// `step` for in-degree two; the second arc wins only when strictly better.
    #[inline]
    fn step_two(&self, weights: &[f64], prev: &[f64], cur: &mut [f64], pred: Option<&mut [u32]>) {
        let tails = self.tails.chunks_exact(2);
        let weights = weights.chunks_exact(2);
        let best = |(t, w): (&[u32], &[f64])| {
            let a = prev[t[0] as usize] + w[0];
            let b = prev[t[1] as usize] + w[1];
            (b > a, if b > a { b } else { a })
        };
        match pred {
            Some(pred) => {
                let ids = self.ids.chunks_exact(2);
                for (((c, p), id), tw) in cur.iter_mut().zip(pred).zip(ids).zip(tails.zip(weights)) {
                    let (second, value) = best(tw);
                    *c = value;
                    // keep "no predecessor" for unreachable vertices
                    *p = if value == f64::NEG_INFINITY { NONE } else { id[usize::from(second)] };
                }
            }
            None => {
                for (c, tw) in cur.iter_mut().zip(tails.zip(weights)) {
                    *c = best(tw).1;
                }
            }
        }
    }

    /// The first pass fills the predecessor table and D_N; the second
    /// recomputes D_k row by row to take the min over k, so only two rows
    /// of distances are ever held.
    pub(crate) fn solve(&self, g: &WeightedDigraph, excluded: Option<usize>, ws: &mut Workspace) -> Result<MeanCycleResult> {
        let n = self.n;
        ws.weights.clone_from(&self.weights);
        if let Some(a) = excluded {
            if let Some(i) = self.ids.iter().position(|&id| id as usize == a) {
                ws.weights[i] = f64::NEG_INFINITY;
            }
        }
        ws.prev.clear();
        ws.prev.resize(n, 0.0);
        ws.cur.resize(n, 0.0);
        ws.pred.resize((n + 1) * n, NONE);
        for k in 1..=n {
            let row = &mut ws.pred[k * n..(k + 1) * n];
            self.step(&ws.weights, &ws.prev, &mut ws.cur, Some(row));
            std::mem::swap(&mut ws.prev, &mut ws.cur);
        }
        ws.last.clone_from(&ws.prev);

        ws.worst.clear();
        ws.worst.resize(n, f64::INFINITY);
        ws.prev.fill(0.0);
        for k in 0..n {
            if k > 0 {
                self.step(&ws.weights, &ws.prev, &mut ws.cur, None);
                std::mem::swap(&mut ws.prev, &mut ws.cur);
            }
            // unreachable D_k gives +∞ and never lowers the minimum
            let steps = (n - k) as f64;
            for ((w, &l), &dk) in ws.worst.iter_mut().zip(&ws.last).zip(&ws.prev) {
                let q = (l - dk) / steps;
                *w = if q < *w { q } else { *w };
            }
        }

        let mut best_vertex = None;
        let mut best_value = f64::NEG_INFINITY;
        for v in 0..n {
            if ws.last[v] == f64::NEG_INFINITY {
                continue;
            }
            if best_vertex.is_none() || ws.worst[v] > best_value {
                best_value = ws.worst[v];
                best_vertex = Some(v);
            }
        }
        let start = best_vertex.ok_or(Error::NoCycle)?;

        // walk back from `start`, remembering the step at which each vertex was seen
        let mut seen_at = vec![usize::MAX; n];
        let mut arcs_back = Vec::with_capacity(n);
        let mut v = start;
        let mut k = n;
        seen_at[v] = 0;
        let cycle_arcs = loop {
            let a = ws.pred[k * n + v];
            debug_assert_ne!(a, NONE);
            arcs_back.push(a as usize);
            v = g.tail(a as usize);
            k -= 1;
            let step = arcs_back.len();
            if seen_at[v] != usize::MAX {
                let mut loop_arcs = arcs_back[seen_at[v]..step].to_vec();
                loop_arcs.reverse();
                break loop_arcs;
            }
            seen_at[v] = step;
        };
        let witness_cycle = g.cycle(cycle_arcs)?;
        Ok(MeanCycleResult {
            max_mean: witness_cycle.mean(g),
            witness_cycle,
            method: Method::Karp,
        })
    }
}
