use std::sync::Arc;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::index;
use rand::Rng;

use super::recom::{initial_balanced_state, DEFAULT_INIT_ATTEMPTS};
use super::{ChainParams, MoveKind, StepRecord};
use crate::error::{Error, Result};
use crate::forest::{forest_splits, ForestState};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::ust::sample_ust;

/// A removable edge when the added edge joins two components, with the two
/// tree sizes its removal leaves behind (`side` and `total - side`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JoinCandidate {
    pub edge: EdgeId,
    pub side: usize,
    pub total: usize,
}

impl JoinCandidate {
    /// Log of `(side * (total - side) / total)^c`, the candidate's weight
    /// relative to the forest with the added edge.
    pub fn log_weight(&self, c: f64) -> f64 {
        if c == 0.0 {
            return 0.0;
        }
        let (s, t) = (self.side as f64, self.total as f64);
        c * (s.ln() + (t - s).ln() - t.ln())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Removal {
    /// The added edge closes a cycle; its edges (the added edge last) are
    /// equally likely.
    Cycle(Vec<EdgeId>),
    /// The added edge joins two components; every edge of the enlarged
    /// forest is a candidate, the added edge last.
    Join(Vec<JoinCandidate>),
}

/// The removal step's options after adding off-forest edge `x`.
pub fn removal_candidates(state: &mut ForestState, x: EdgeId) -> Result<Removal> {
    if state.contains(x) {
        return Err(Error::InvalidArgument(format!(
            "edge {x} is already in the forest"
        )));
    }
    let g = state.graph().clone();
    let (u, v) = g.edge(x);
    if state.connected(u, v) {
        let mut cycle = state.tree_path(u, v)?;
        cycle.push(x);
        return Ok(Removal::Cycle(cycle));
    }
    let mut out: Vec<JoinCandidate> = forest_splits(&g, |f| f == x || state.contains(f))
        .into_iter()
        .filter(|(s, _)| s.edge != x)
        .map(|(s, total)| JoinCandidate {
            edge: s.edge,
            side: s.root_side,
            total,
        })
        .collect();
    let (su, sv) = (state.component_size_of(u), state.component_size_of(v));
    out.push(JoinCandidate {
        edge: x,
        side: su,
        total: su + sv,
    });
    Ok(Removal::Join(out))
}

/// One step of the down-up walk on forest complements, applied in place:
/// add a uniform off-forest edge, then remove an edge so that the walk is
/// reversible for the size-biased forest weight.
pub fn forest_walk_step<R: Rng + ?Sized>(
    state: &mut ForestState,
    params: &ChainParams,
    rng: &mut R,
) -> StepRecord {
    let off = state.off_forest_edges();
    if off.is_empty() {
        return StepRecord {
            step: 0,
            kind: MoveKind::Idle,
            sizes: Vec::new(),
        };
    }
    let x = off[rng.random_range(0..off.len())];
    let (u, v) = state.graph().edge(x);

    let y = if state.connected(u, v) {
        let len = state.path_len(u, v).expect("endpoints are connected");
        let i = rng.random_range(0..=len);
        if i == len {
            x
        } else {
            state.path_edge_at(u, v, i)
        }
    } else if params.c == 0.0 {
        let forest = state.forest_edges();
        let i = rng.random_range(0..=forest.len());
        forest.get(i).copied().unwrap_or(x)
    } else {
        let Removal::Join(cands) = removal_candidates(state, x).expect("x is off the forest")
        else {
            unreachable!("endpoints are in different components")
        };
        let logs: Vec<f64> = cands.iter().map(|c| c.log_weight(params.c)).collect();
        let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let dist =
            WeightedIndex::new(logs.iter().map(|l| (l - top).exp())).expect("weights are positive");
        cands[dist.sample(rng)].edge
    };

    let lazy = y == x;
    if !lazy {
        state.cut(y).expect("y is a forest edge");
        state.link(x).expect("x joins two trees once y is gone");
    }
    let (xa, xb) = state.graph().edge(x);
    let (ya, yb) = state.graph().edge(y);
    let mut reps: Vec<VertexId> = Vec::with_capacity(4);
    for w in [xa, xb, ya, yb] {
        if !reps.iter().any(|&r| state.connected(r, w)) {
            reps.push(w);
        }
    }
    let sizes = reps
        .into_iter()
        .map(|r| state.component_size_of(r))
        .collect();
    StepRecord {
        step: 0,
        kind: MoveKind::ForestWalk {
            added: x,
            removed: y,
            lazy,
        },
        sizes,
    }
}

/// A starting forest with `k` components: a balanced forest when `k | n`,
/// otherwise a uniform spanning tree with `k - 1` uniformly chosen edges
/// removed.
pub fn initial_forest_state<R: Rng + ?Sized>(
    g: &Arc<Graph>,
    k: usize,
    rng: &mut R,
) -> Result<ForestState> {
    let n = g.n();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "cannot split {n} vertices into {k} parts"
        )));
    }
    if n.is_multiple_of(k) {
        if let Ok(s) = initial_balanced_state(g, k, DEFAULT_INIT_ATTEMPTS, rng) {
            return Ok(s);
        }
    }
    let all: Vec<VertexId> = (0..n).collect();
    let tree = sample_ust(g, &all, rng)?;
    let mut drop: Vec<usize> = index::sample(rng, tree.len(), k - 1).into_vec();
    drop.sort_unstable();
    let keep: Vec<EdgeId> = tree
        .iter()
        .enumerate()
        .filter(|(i, _)| drop.binary_search(i).is_err())
        .map(|(_, &e)| e)
        .collect();
    ForestState::from_edges(g.clone(), &keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::{chain_rng, Chain, Variant};
    use crate::graph;

    fn walk(k: usize, c: f64) -> ChainParams {
        ChainParams {
            k,
            c,
            variant: Variant::ForestWalk,
            ..ChainParams::default()
        }
    }

    #[test]
    fn join_candidates_cover_the_enlarged_forest() {
        // Path 0-1-2-3 split as {0,1} | {2} | {3}; adding 1-2 joins sizes 2 and 1.
        let g = Arc::new(graph::path(4).unwrap());
        let mut s = ForestState::from_edges(g, &[0]).unwrap();
        let Removal::Join(c) = removal_candidates(&mut s, 1).unwrap() else {
            panic!("expected a join");
        };
        let mut got: Vec<_> = c
            .iter()
            .map(|j| (j.edge, j.side.min(j.total - j.side), j.total))
            .collect();
        got.sort_unstable();
        assert_eq!(got, vec![(0, 1, 3), (1, 1, 3)]);
        assert!(removal_candidates(&mut s, 0).is_err());
    }

    #[test]
    fn cycle_candidates() {
        let g = Arc::new(graph::cycle(5).unwrap());
        let mut s = ForestState::from_edges(g, &[0, 1, 2]).unwrap();
        // Edge 3 is (3,4): joins {0..3} and {4}.
        assert!(matches!(
            removal_candidates(&mut s, 3).unwrap(),
            Removal::Join(_)
        ));
        s.link(3).unwrap();
        s.cut(1).unwrap();
        // Forest {0, 2, 3, 4} is a spanning path, so edge 1 closes the 5-cycle.
        s.link(4).unwrap();
        let Removal::Cycle(cyc) = removal_candidates(&mut s, 1).unwrap() else {
            panic!("expected a cycle");
        };
        assert_eq!(cyc.len(), 5);
        assert_eq!(*cyc.last().unwrap(), 1);
    }

    #[test]
    fn component_count_is_invariant() {
        let g = Arc::new(graph::grid(5, 5).unwrap());
        for (k, c) in [(2, 0.0), (3, 1.0), (5, 2.5)] {
            let mut rng = chain_rng(9, 3);
            let s = initial_forest_state(&g, k, &mut rng).unwrap();
            let mut chain = Chain::new(walk(k, c), s).unwrap();
            for i in 0..2000 {
                let rec = chain.step().unwrap();
                assert_eq!(chain.state().k(), k);
                assert!(!rec.sizes.is_empty() && rec.sizes.len() <= 3);
                if i % 100 == 0 {
                    chain.state().clone().validate().unwrap();
                }
            }
        }
    }

    #[test]
    fn cycle_moves_keep_sizes() {
        let g = Arc::new(graph::grid(4, 4).unwrap());
        let mut rng = chain_rng(2, 0);
        let mut s = initial_forest_state(&g, 2, &mut rng).unwrap();
        for _ in 0..500 {
            let before = s.partition();
            let rec = forest_walk_step(&mut s, &walk(2, 1.0), &mut rng);
            let MoveKind::ForestWalk {
                added,
                removed,
                lazy,
            } = rec.kind
            else {
                panic!()
            };
            let (u, v) = g.edge(added);
            let within = before.assignment()[u] == before.assignment()[v];
            if within || lazy {
                assert_eq!(s.partition(), before);
            }
            if !lazy {
                assert!(s.contains(added) && !s.contains(removed));
            }
        }
    }

    #[test]
    fn initial_states_have_k_components() {
        let g = Arc::new(graph::grid(3, 3).unwrap());
        let mut rng = chain_rng(5, 0);
        for k in 2..=9 {
            let s = initial_forest_state(&g, k, &mut rng).unwrap();
            assert_eq!(s.k(), k);
            if 9 % k == 0 {
                assert!(s.comp_sizes().iter().all(|&x| x == 9 / k));
            }
        }
        assert!(initial_forest_state(&g, 10, &mut rng).is_err());
    }
}
