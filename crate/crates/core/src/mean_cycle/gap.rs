use rayon::prelude::*;

use super::enumerate::enumerate_cycles;
use super::karp::{MeanCycleResult, Method, PackedInArcs, Workspace};
use crate::digraph::{DirectedCycle, WeightedDigraph};
use crate::error::{Error, Result};

/// The two heaviest cycle means and the gap between them.
#[derive(Clone, Debug, PartialEq)]
pub struct GapResult {
    pub best: MeanCycleResult,
    pub second_mean: f64,
    pub second_witness: DirectedCycle,
    pub gap: f64,
}

/// Gap between the heaviest and second-heaviest simple cycles.
///
/// A simple cycle other than the heaviest one C₁ misses at least one arc of
/// C₁, so the runner-up is the best cycle of `g − a` over the arcs a of C₁.
/// Ties give gap 0.
pub fn gap(g: &WeightedDigraph) -> Result<GapResult> {
    let packed = PackedInArcs::new(g)?;
    let best = packed.solve(g, None, &mut Workspace::default())?;
    let candidates: Vec<Option<MeanCycleResult>> = best
        .witness_cycle
        .arcs()
        .par_iter()
        .map_init(Workspace::default, |ws, &a| match packed.solve(g, Some(a), ws) {
            Ok(r) => Ok(Some(r)),
            Err(Error::NoCycle) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;
    // sequential fold keeps the choice independent of scheduling
    let mut second: Option<MeanCycleResult> = None;
    for c in candidates.into_iter().flatten() {
        if second.as_ref().is_none_or(|s| c.max_mean > s.max_mean) {
            second = Some(c);
        }
    }
    let second = second.ok_or_else(|| Error::Degenerate("graph has a single simple cycle".into()))?;
    Ok(order_pair(best, second))
}

/// Karp's value can trail the true optimum by a rounding error; if the
/// runner-up's recomputed mean is larger, the roles swap.
fn order_pair(best: MeanCycleResult, second: MeanCycleResult) -> GapResult {
    let (best, second) = if second.max_mean > best.max_mean {
        (second, best)
    } else {
        (best, second)
    };
    GapResult {
        gap: best.max_mean - second.max_mean,
        second_mean: second.max_mean,
        second_witness: second.witness_cycle,
        best,
    }
}

/// Gap from the full list of simple cycles.
pub fn gap_by_enumeration(g: &WeightedDigraph) -> Result<GapResult> {
    let mut cycles = enumerate_cycles(g)?;
    if cycles.len() < 2 {
        return Err(Error::Degenerate(format!("{} simple cycle(s)", cycles.len())));
    }
    // descending mean, then ascending arc labels
    cycles.sort_by(|(c1, m1), (c2, m2)| m2.total_cmp(m1).then_with(|| c1.cmp(c2)));
    let mut it = cycles.into_iter();
    let (c1, m1) = it.next().expect("two cycles");
    let (c2, m2) = it.next().expect("two cycles");
    Ok(GapResult {
        best: MeanCycleResult {
            max_mean: m1,
            witness_cycle: c1,
            method: Method::Enumeration,
        },
        second_mean: m2,
        second_witness: c2,
        gap: m1 - m2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::debruijn::build_graph;

    #[test]
    fn examples() {
        let g = build_graph(1).unwrap().with_weights(vec![0.5, -0.5]).unwrap();
        let r = gap(&g).unwrap();
        assert_eq!(r.gap, 1.0);
        assert_eq!((r.best.max_mean, r.second_mean), (0.5, -0.5));

        let g = build_graph(2).unwrap().with_weights(vec![0.5, -0.5, -0.5, 0.5]).unwrap();
        let r = gap(&g).unwrap();
        assert_eq!(r.gap, 0.0);
        assert_eq!(r.best.witness_cycle.labels(&g), ["00"]);
        assert_eq!(r.second_witness.labels(&g), ["11"]);
        assert_ne!(r.best.witness_cycle, r.second_witness);
        let e = gap_by_enumeration(&g).unwrap();
        assert_eq!(e.gap, 0.0);
        assert_eq!(e.best.witness_cycle.labels(&g), ["00"]);

        let g = build_graph(2).unwrap().with_weights(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        let r = gap(&g).unwrap();
        assert_eq!((r.best.max_mean, r.second_mean, r.gap), (1.0, 0.0, 1.0));
    }

    #[test]
    fn single_cycle_is_degenerate() {
        let g = WeightedDigraph::new(2, &[(0, 1, 3.0), (1, 0, 1.0)]).unwrap();
        assert!(matches!(gap(&g), Err(Error::Degenerate(_))));
        assert!(matches!(gap_by_enumeration(&g), Err(Error::Degenerate(_))));
    }

    #[test]
    fn runner_up_may_share_arcs_with_the_best() {
        // best: loop at 0 (weight 5); runner-up 0→1→0 (mean 2) uses neither loop
        let g = WeightedDigraph::new(2, &[(0, 0, 5.0), (0, 1, 3.0), (1, 0, 1.0), (1, 1, -1.0)]).unwrap();
        let r = gap(&g).unwrap();
        assert_eq!((r.best.max_mean, r.second_mean), (5.0, 2.0));
        assert_eq!(gap_by_enumeration(&g).unwrap().gap, r.gap);
    }
}
