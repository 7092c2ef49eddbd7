//! De Bruijn–Good digraphs BG_n and the edge weights W_n^f.
//!
//! Vertices of BG_n are the words of length n−1 and arcs are the words of
//! length n; the arc w_1…w_n runs from w_1…w_{n−1} to w_2…w_n. Both are
//! encoded by their lexicographic index, so arc `a` has tail `a >> 1` and
//! head `a mod 2^{n−1}`.

use crate::digraph::{DirectedCycle, WeightedDigraph};
use crate::error::{Error, Result};
use crate::haar::{HaarTable, Potential};
use crate::symbolic::{PeriodicPoint, Word};

pub const MAX_GRAPH_LEVEL: usize = 24;

/// BG_n with all weights zero.
pub fn build_graph(n: usize) -> Result<WeightedDigraph> {
    if n == 0 || n > MAX_GRAPH_LEVEL {
        return Err(Error::resource(format!(
            "de Bruijn level {n} outside 1..={MAX_GRAPH_LEVEL}"
        )));
    }
    let n_arcs = 1u32 << n;
    let vertex_mask = (1u32 << (n - 1)) - 1;
    let tails = (0..n_arcs).map(|a| a >> 1).collect();
    let heads = (0..n_arcs).map(|a| a & vertex_mask).collect();
    Ok(WeightedDigraph::from_parts(
        1 << (n - 1),
        tails,
        heads,
        vec![0.0; n_arcs as usize],
        Some(n),
    ))
}

/// W_n(w_1…w_n) = ½ Σ_{i<n} (−1)^{w_{i+1}} c_{w_1…w_i}, with c_∅ the
/// coefficient of h_∅.
///
/// Built level by level through W_{k+1}(wα) = W_k(w) + ((−1)^α/2)·c_w.
pub fn weights_from_table(n: usize, table: &HaarTable) -> Vec<f64> {
    let mut weights = vec![0.0];
    for k in 0..n {
        let coeffs = table.level(k);
        weights = weights
            .iter()
            .enumerate()
            .flat_map(|(i, &w)| {
                let c = coeffs.get(i).copied().unwrap_or(0.0);
                [w + 0.5 * c, w - 0.5 * c]
            })
            .collect();
    }
    weights
}

/// Assigns W_n from a Haar table (only levels below n are read).
pub fn assign_table_weights(graph: &WeightedDigraph, table: &HaarTable) -> Result<WeightedDigraph> {
    let n = de_bruijn_level(graph)?;
    graph.with_weights(weights_from_table(n, table))
}

/// Assigns W_n^f. Evaluator potentials go through their A_n quadrature.
pub fn assign_weights(graph: &WeightedDigraph, f: &Potential) -> Result<WeightedDigraph> {
    let n = de_bruijn_level(graph)?;
    let (table, _) = f.haar_table(n)?;
    assign_table_weights(graph, &table)
}

fn de_bruijn_level(graph: &WeightedDigraph) -> Result<usize> {
    graph
        .de_bruijn_level()
        .ok_or_else(|| Error::usage("graph is not a de Bruijn-Good digraph"))
}

/// The periodic point whose orbit runs through the cycle's cylinders: the
/// last symbol of each arc, read around the cycle.
pub fn cycle_to_periodic_point(graph: &WeightedDigraph, cycle: &DirectedCycle) -> Result<PeriodicPoint> {
    de_bruijn_level(graph)?;
    let cycle = graph.cycle(cycle.arcs().to_vec())?;
    let symbols: Vec<u8> = cycle.arcs().iter().map(|&a| (a & 1) as u8).collect();
    PeriodicPoint::canonical(Word::from_symbols(&symbols)?)
}
