//! Elementary circuit enumeration (Johnson 1975), arc-aware so that
//! parallel arcs give distinct cycles.

use crate::digraph::{DirectedCycle, WeightedDigraph};
use crate::error::{Error, Result};

pub const MAX_ENUMERATED_CYCLES: usize = 10_000_000;

/// Every simple directed cycle of `g` with its mean weight.
pub fn enumerate_cycles(g: &WeightedDigraph) -> Result<Vec<(DirectedCycle, f64)>> {
    let n = g.n_vertices();
    let (offsets, out) = g.out_arcs();
    let mut search = Search {
        g,
        offsets: &offsets,
        out: &out,
        blocked: vec![false; n],
        block_map: vec![Vec::new(); n],
        path: Vec::new(),
        found: Vec::new(),
        start: 0,
    };
    for s in 0..n {
        search.start = s;
        for v in s..n {
            search.blocked[v] = false;
            search.block_map[v].clear();
        }
        search.circuit(s)?;
    }
    let mut found = search.found;
    found.sort();
    Ok(found
        .into_iter()
        .map(|c| {
            let m = c.mean(g);
            (c, m)
        })
        .collect())
}

struct Search<'a> {
    g: &'a WeightedDigraph,
    offsets: &'a [usize],
    out: &'a [u32],
    blocked: Vec<bool>,
    block_map: Vec<Vec<usize>>,
    /// arcs of the current path from `start`
    path: Vec<usize>,
    found: Vec<DirectedCycle>,
    start: usize,
}

impl Search<'_> {
    fn circuit(&mut self, v: usize) -> Result<bool> {
        let mut closed = false;
        self.blocked[v] = true;
        for i in self.offsets[v]..self.offsets[v + 1] {
            let a = self.out[i] as usize;
            let w = self.g.head(a);
            if w < self.start {
                continue;
            }
            if w == self.start {
                self.path.push(a);
                if self.found.len() >= MAX_ENUMERATED_CYCLES {
                    return Err(Error::resource(format!(
                        "more than {MAX_ENUMERATED_CYCLES} simple cycles"
                    )));
                }
                self.found.push(self.g.cycle(self.path.clone())?);
                self.path.pop();
                closed = true;
            } else if !self.blocked[w] {
                self.path.push(a);
                if self.circuit(w)? {
                    closed = true;
                }
                self.path.pop();
            }
        }
        if closed {
            self.unblock(v);
        } else {
            for i in self.offsets[v]..self.offsets[v + 1] {
                let w = self.g.head(self.out[i] as usize);
                if w >= self.start && !self.block_map[w].contains(&v) {
                    self.block_map[w].push(v);
                }
            }
        }
        Ok(closed)
    }

    fn unblock(&mut self, u: usize) {
        let mut stack = vec![u];
        while let Some(x) = stack.pop() {
            if !self.blocked[x] {
                continue;
            }
            self.blocked[x] = false;
            stack.extend(std::mem::take(&mut self.block_map[x]));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::debruijn::build_graph;

    #[test]
    fn de_bruijn_cycle_counts() {
        assert_eq!(enumerate_cycles(&build_graph(1).unwrap()).unwrap().len(), 2);
        let g2 = build_graph(2).unwrap();
        let c2 = enumerate_cycles(&g2).unwrap();
        let labels: Vec<Vec<String>> = c2.iter().map(|(c, _)| c.labels(&g2)).collect();
        assert_eq!(labels, vec![vec!["00"], vec!["01", "10"], vec!["11"]]);
        assert_eq!(enumerate_cycles(&build_graph(3).unwrap()).unwrap().len(), 6);
        assert_eq!(enumerate_cycles(&build_graph(4).unwrap()).unwrap().len(), 19);
    }

    /// trace(A^L) = 2^L closed walks in BG_n. For L ≤ n−1 the simple cycles
    /// of length L are exactly the primitive necklaces, whose count follows
    /// from the traces by Möbius inversion.
    #[test]
    fn short_cycles_match_trace_identity() {
        fn mobius(mut n: u32) -> i64 {
            let mut result = 1;
            let mut p = 2;
            while p * p <= n {
                if n.is_multiple_of(p) {
                    n /= p;
                    if n.is_multiple_of(p) {
                        return 0;
                    }
                    result = -result;
                }
                p += 1;
            }
            if n > 1 {
                result = -result;
            }
            result
        }
        for n in 2..=6usize {
            let cycles = enumerate_cycles(&build_graph(n).unwrap()).unwrap();
            for len in 1..n {
                let necklaces: i64 = (1..=len as u32)
                    .filter(|d| (len as u32).is_multiple_of(*d))
                    .map(|d| mobius(d) * (1i64 << (len as u32 / d)))
                    .sum::<i64>()
                    / len as i64;
                let count = cycles.iter().filter(|(c, _)| c.len() == len).count() as i64;
                assert_eq!(count, necklaces, "BG_{n}, length {len}");
            }
        }
    }

    #[test]
    fn parallel_arcs_and_loops() {
        let g = WeightedDigraph::new(2, &[(0, 1, 1.0), (0, 1, 2.0), (1, 0, 0.0), (1, 1, 5.0)]).unwrap();
        let cycles = enumerate_cycles(&g).unwrap();
        assert_eq!(cycles.len(), 3);
        let means: Vec<f64> = cycles.iter().map(|(_, m)| *m).collect();
        assert_eq!(means, vec![0.5, 1.0, 5.0]);
    }

    /// Brute force: every simple cycle is a vertex-distinct closed arc
    /// sequence; enumerate them by DFS over all arc sequences.
    fn brute_force(g: &WeightedDigraph) -> Vec<DirectedCycle> {
        fn extend(g: &WeightedDigraph, path: &mut Vec<usize>, out: &mut Vec<DirectedCycle>) {
            let start = g.tail(path[0]);
            let end = g.head(*path.last().unwrap());
            if end == start {
                if let Ok(c) = g.cycle(path.clone()) {
                    if !out.contains(&c) {
                        out.push(c);
                    }
                }
                return;
            }
            if path.iter().any(|&a| g.tail(a) == end) {
                return;
            }
            for a in 0..g.n_arcs() {
                if g.tail(a) == end {
                    path.push(a);
                    extend(g, path, out);
                    path.pop();
                }
            }
        }
        let mut out = Vec::new();
        for a in 0..g.n_arcs() {
            extend(g, &mut vec![a], &mut out);
        }
        out.sort();
        out
    }

    #[test]
    fn agrees_with_brute_force_on_small_graphs() {
        let g = WeightedDigraph::new(
            4,
            &[(0, 1, 0.0), (1, 2, 0.0), (2, 0, 0.0), (2, 3, 0.0), (3, 1, 0.0), (3, 3, 0.0), (1, 0, 0.0), (0, 1, 0.0)],
        )
        .unwrap();
        let got: Vec<DirectedCycle> = enumerate_cycles(&g).unwrap().into_iter().map(|(c, _)| c).collect();
        assert_eq!(got, brute_force(&g));
        let g4 = build_graph(4).unwrap();
        let got: Vec<DirectedCycle> = enumerate_cycles(&g4).unwrap().into_iter().map(|(c, _)| c).collect();
        assert_eq!(got, brute_force(&g4));
    }
}
