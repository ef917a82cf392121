use std::sync::Arc;

use rand::Rng;

use super::{ChainParams, MoveKind, StepRecord};
use crate::error::{Error, Result};
use crate::forest::{tree_splits, ForestState};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::ust::sample_ust;

pub const DEFAULT_INIT_ATTEMPTS: usize = 1000;

/// Builds a forest of `k` equal-size trees by recursive bisection of
/// uniform spanning trees. Each failed split redraws the tree of that region
/// and counts against `max_attempts`.
pub fn initial_balanced_state<R: Rng + ?Sized>(
    g: &Arc<Graph>,
    k: usize,
    max_attempts: usize,
    rng: &mut R,
) -> Result<ForestState> {
    let n = g.n();
    if k == 0 || k > n || !n.is_multiple_of(k) {
        return Err(Error::InvalidArgument(format!(
            "cannot split {n} vertices into {k} equal parts"
        )));
    }
    let all: Vec<VertexId> = (0..n).collect();
    let tree = sample_ust(g, &all, rng)?;
    let mut in_tree = vec![false; g.m()];
    let mut attempts = 0;
    bisect(
        g,
        &all,
        tree,
        k,
        n / k,
        &mut in_tree,
        &mut attempts,
        max_attempts,
        rng,
    )?;
    let edges: Vec<EdgeId> = (0..g.m()).filter(|&e| in_tree[e]).collect();
    ForestState::from_edges(g.clone(), &edges)
}

#[allow(clippy::too_many_arguments)]
fn bisect<R: Rng + ?Sized>(
    g: &Graph,
    region: &[VertexId],
    mut tree: Vec<EdgeId>,
    parts: usize,
    part_size: usize,
    in_tree: &mut [bool],
    attempts: &mut usize,
    max_attempts: usize,
    rng: &mut R,
) -> Result<()> {
    if parts == 1 {
        for &e in &tree {
            in_tree[e] = true;
        }
        return Ok(());
    }
    let low = parts / 2;
    let targets = [low * part_size, (parts - low) * part_size];
    let root = region[0];
    loop {
        for &e in &tree {
            in_tree[e] = true;
        }
        let splits = tree_splits(g, root, |e| in_tree[e]);
        for &e in &tree {
            in_tree[e] = false;
        }
        let good: Vec<_> = splits
            .iter()
            .filter(|s| targets.contains(&s.far_side))
            .collect();
        if !good.is_empty() {
            let pick = good[rng.random_range(0..good.len())];
            let (far, near) = separate(g, region, &tree, pick.edge);
            let far_parts = if pick.far_side == targets[0] {
                low
            } else {
                parts - low
            };
            let (far_tree, near_tree): (Vec<_>, Vec<_>) = tree
                .iter()
                .copied()
                .filter(|&e| e != pick.edge)
                .partition(|&e| far.binary_search(&g.edge(e).0).is_ok());
            bisect(
                g,
                &far,
                far_tree,
                far_parts,
                part_size,
                in_tree,
                attempts,
                max_attempts,
                rng,
            )?;
            return bisect(
                g,
                &near,
                near_tree,
                parts - far_parts,
                part_size,
                in_tree,
                attempts,
                max_attempts,
                rng,
            );
        }
        *attempts += 1;
        if *attempts > max_attempts {
            return Err(Error::InitializationFailure {
                attempts: *attempts - 1,
            });
        }
        tree = sample_ust(g, region, rng)?;
    }
}

/// Splits `region` by deleting `cut` from `tree`: (side away from the
/// region's first vertex, side containing it), both sorted.
fn separate(
    g: &Graph,
    region: &[VertexId],
    tree: &[EdgeId],
    cut: EdgeId,
) -> (Vec<VertexId>, Vec<VertexId>) {
    let mut on_tree = std::collections::HashSet::with_capacity(tree.len());
    on_tree.extend(tree.iter().copied().filter(|&e| e != cut));
    let mut near = vec![region[0]];
    let mut seen = std::collections::HashSet::from([region[0]]);
    let mut i = 0;
    while i < near.len() {
        let u = near[i];
        i += 1;
        for &(w, e) in g.neighbors(u) {
            if on_tree.contains(&e) && seen.insert(w) {
                near.push(w);
            }
        }
    }
    let far: Vec<_> = region
        .iter()
        .copied()
        .filter(|v| !seen.contains(v))
        .collect();
    near.sort_unstable();
    (far, near)
}

/// One ReCom step, applied in place.
pub fn recom_step<R: Rng + ?Sized>(
    state: &mut ForestState,
    params: &ChainParams,
    rng: &mut R,
) -> Result<StepRecord> {
    let g = state.graph().clone();
    let labels = state.labels().clone();
    let size = labels.comp_size[0];
    if labels.comp_size.iter().any(|&s| s != size) {
        return Err(Error::InvalidArgument(
            "ReCom step needs equal component sizes".into(),
        ));
    }

    // 1. a uniform boundary edge picks the pair to merge
    let boundary: Vec<EdgeId> = (0..g.m())
        .filter(|&e| {
            let (u, v) = g.edge(e);
            labels.comp_of[u] != labels.comp_of[v]
        })
        .collect();
    if boundary.is_empty() {
        return Err(Error::InvalidArgument("no edge joins two parts".into()));
    }
    let e = boundary[rng.random_range(0..boundary.len())];
    let (u, v) = g.edge(e);
    let (a, b) = (labels.comp_of[u], labels.comp_of[v]);

    // 2. balanced edges of T_a + T_b + e, excluding e itself
    let splits = tree_splits(&g, u, |f| f == e || state.contains(f));
    let candidates: Vec<EdgeId> = splits
        .iter()
        .filter(|s| s.far_side == size && s.edge != e)
        .map(|s| s.edge)
        .collect();

    let kind = if !candidates.is_empty() {
        // 3. remove f and keep e
        let f = candidates[rng.random_range(0..candidates.len())];
        state.cut(f)?;
        state.link(e)?;
        MoveKind::Recom {
            merged: (a, b),
            boundary_edge: e,
            cut: vec![f],
            linked: vec![e],
            resamples: 0,
        }
    } else {
        let region: Vec<VertexId> = (0..g.n())
            .filter(|&w| labels.comp_of[w] == a || labels.comp_of[w] == b)
            .collect();
        let mut resamples = 0;
        let (tree, f) = loop {
            if resamples == params.resample_cap {
                return Err(Error::StepFailure { a, b, resamples });
            }
            resamples += 1;
            let tree = sample_ust(&g, &region, rng)?;
            let mut mark = vec![false; g.m()];
            for &t in &tree {
                mark[t] = true;
            }
            let balanced: Vec<EdgeId> = tree_splits(&g, region[0], |t| mark[t])
                .iter()
                .filter(|s| s.far_side == size)
                .map(|s| s.edge)
                .collect();
            if !balanced.is_empty() {
                break (tree, balanced[rng.random_range(0..balanced.len())]);
            }
        };
        let old: Vec<EdgeId> = splits.iter().map(|s| s.edge).filter(|&t| t != e).collect();
        let new: Vec<EdgeId> = tree.into_iter().filter(|&t| t != f).collect();
        for &t in &old {
            state.cut(t)?;
        }
        for &t in &new {
            state.link(t)?;
        }
        MoveKind::Recom {
            merged: (a, b),
            boundary_edge: e,
            cut: old,
            linked: new,
            resamples,
        }
    };
    Ok(StepRecord {
        step: 0,
        kind,
        sizes: vec![state.component_size_of(u), state.component_size_of(v)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::{chain_rng, Chain, Variant};
    use crate::graph;

    fn params(k: usize) -> ChainParams {
        ChainParams {
            k,
            variant: Variant::Recom,
            ..ChainParams::default()
        }
    }

    fn check_balanced(s: &mut ForestState, k: usize) {
        s.validate().unwrap();
        let n = s.n();
        assert_eq!(s.k(), k);
        assert!(s.comp_sizes().iter().all(|&x| x == n / k));
        assert!(s.partition().parts_connected(s.graph()));
    }

    #[test]
    fn initial_states() {
        let mut rng = chain_rng(1, 0);
        for (g, k) in [
            (graph::grid(2, 4).unwrap(), 2),
            (graph::double_cycle(3).unwrap(), 3),
            (graph::grid(4, 4).unwrap(), 2),
            (graph::grid(6, 6).unwrap(), 4),
            (graph::grid(6, 6).unwrap(), 6),
        ] {
            let g = Arc::new(g);
            for _ in 0..10 {
                let mut s = initial_balanced_state(&g, k, DEFAULT_INIT_ATTEMPTS, &mut rng).unwrap();
                check_balanced(&mut s, k);
            }
        }
        let g = Arc::new(graph::grid(3, 3).unwrap());
        assert!(initial_balanced_state(&g, 2, 10, &mut rng).is_err());
    }

    #[test]
    fn impossible_split_reports_failure() {
        // A star on 4 vertices has no split into two pairs.
        let g = Arc::new(Graph::new(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap());
        let mut rng = chain_rng(1, 0);
        let err = initial_balanced_state(&g, 2, 5, &mut rng).unwrap_err();
        assert!(matches!(err, Error::InitializationFailure { attempts: 5 }));
    }

    #[test]
    fn four_cycle_stays_in_pairs() {
        let g = Arc::new(graph::cycle(4).unwrap());
        let s = ForestState::from_edges(g, &[0, 2]).unwrap();
        let mut chain = Chain::new(params(2), s).unwrap();
        let mut resampled = 0;
        for _ in 0..500 {
            let rec = chain.step().unwrap();
            if let MoveKind::Recom { resamples, .. } = rec.kind {
                resampled += (resamples > 0) as usize;
            }
            assert_eq!(chain.state().comp_sizes(), &[2, 2]);
        }
        // The merged tree is always a 4-path with e in the middle, the only
        // balanced edge, so every step falls back to a fresh tree.
        assert_eq!(resampled, 500);
    }

    #[test]
    fn exactly_two_parts_change() {
        let g = Arc::new(graph::double_cycle(3).unwrap());
        let mut rng = chain_rng(4, 1);
        let s = initial_balanced_state(&g, 3, DEFAULT_INIT_ATTEMPTS, &mut rng).unwrap();
        let mut chain = Chain::new(params(3), s).unwrap();
        for _ in 0..300 {
            let before = chain.state().partition();
            chain.step().unwrap();
            let after = chain.state().partition();
            let kept = before
                .parts()
                .iter()
                .filter(|p| after.parts().contains(p))
                .count();
            assert!(kept >= 1);
            let mut st = chain.state().clone();
            check_balanced(&mut st, 3);
        }
    }

    #[test]
    fn resample_cap_is_enforced() {
        // Vertex 0 joined to 1, 2, 3 plus the edge 2-3, split as {0,1} | {2,3}.
        // Every merged tree T_a + T_b + e is a path balanced only at e, so
        // each step resamples; the star tree (one in three) has no 2|2 edge.
        let g = Arc::new(Graph::new(4, vec![(0, 1), (0, 2), (0, 3), (2, 3)]).unwrap());
        let s = ForestState::from_edges(g, &[0, 3]).unwrap();
        let p = ChainParams {
            resample_cap: 1,
            ..params(2)
        };
        let mut chain = Chain::new(p, s).unwrap();
        let mut failure = None;
        for _ in 0..100 {
            match chain.step() {
                Ok(rec) => {
                    assert!(matches!(rec.kind, MoveKind::Recom { resamples: 1, .. }));
                    assert_eq!(chain.state().comp_sizes(), &[2, 2]);
                }
                Err(e) => {
                    failure = Some(e);
                    break;
                }
            }
        }
        assert!(matches!(
            failure,
            Some(Error::StepFailure {
                a: 0,
                b: 1,
                resamples: 1
            })
        ));
    }

    #[test]
    fn unbalanced_start_is_rejected() {
        let g = Arc::new(graph::path(4).unwrap());
        let s = ForestState::from_edges(g, &[0, 1]).unwrap();
        assert!(Chain::new(params(2), s).is_err());
    }
}
