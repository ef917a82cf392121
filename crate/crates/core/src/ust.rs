//! Uniform spanning trees of induced subgraphs by Wilson's algorithm.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};

/// Draws a uniform spanning tree of `g[subset]`, returned as sorted host edge
/// indices. The walk is rooted at the smallest vertex of the subset.
pub fn sample_ust<R: Rng + ?Sized>(
    g: &Graph,
    subset: &[VertexId],
    rng: &mut R,
) -> Result<Vec<EdgeId>> {
    if subset.is_empty() {
        return Err(Error::InvalidArgument("empty vertex subset".into()));
    }
    let mut verts = subset.to_vec();
    verts.sort_unstable();
    verts.dedup();
    let size = verts.len();

    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in verts.iter().enumerate() {
        if v >= g.n() {
            return Err(Error::InvalidArgument(format!("vertex {v} out of range")));
        }
        local[v] = i;
    }
    let adj: Vec<Vec<(usize, EdgeId)>> = verts
        .iter()
        .map(|&v| {
            g.neighbors(v)
                .iter()
                .filter(|&&(w, _)| local[w] != usize::MAX)
                .map(|&(w, e)| (local[w], e))
                .collect()
        })
        .collect();

    if !locally_connected(&adj) {
        return Err(Error::NoSpanningTree { size });
    }

    let mut in_tree = vec![false; size];
    let mut next: Vec<(usize, EdgeId)> = vec![(usize::MAX, usize::MAX); size];
    in_tree[0] = true;
    let mut tree = Vec::with_capacity(size - 1);
    for start in 1..size {
        // Random walk until the tree is hit; overwriting `next` erases loops.
        let mut u = start;
        while !in_tree[u] {
            let nbrs = &adj[u];
            next[u] = nbrs[rng.random_range(0..nbrs.len())];
            u = next[u].0;
        }
        let mut u = start;
        while !in_tree[u] {
            in_tree[u] = true;
            tree.push(next[u].1);
            u = next[u].0;
        }
    }
    tree.sort_unstable();
    Ok(tree)
}

fn locally_connected(adj: &[Vec<(usize, EdgeId)>]) -> bool {
    let mut seen = vec![false; adj.len()];
    seen[0] = true;
    let mut stack = vec![0];
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &(w, _) in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == adj.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;
    use crate::stats::chi_square_gof;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeMap;

    /// Structural oracle: |S|-1 edges inside S, acyclic, hence spanning.
    fn is_spanning_tree(g: &Graph, subset: &[VertexId], tree: &[EdgeId]) -> bool {
        let mut parent: Vec<usize> = (0..g.n()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        if tree.len() + 1 != subset.len() {
            return false;
        }
        tree.iter().all(|&e| {
            let (u, v) = g.edge(e);
            if !subset.contains(&u) || !subset.contains(&v) {
                return false;
            }
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            parent[a] = b;
            a != b
        })
    }

    fn frequencies(
        g: &Graph,
        subset: &[VertexId],
        draws: usize,
        seed: u64,
    ) -> BTreeMap<Vec<EdgeId>, u64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = BTreeMap::new();
        for _ in 0..draws {
            let t = sample_ust(g, subset, &mut rng).unwrap();
            debug_assert!(is_spanning_tree(g, subset, &t));
            *out.entry(t).or_insert(0) += 1;
        }
        out
    }

    #[test]
    fn tree_subset_is_deterministic() {
        let g = graph::grid(3, 3).unwrap();
        // An L-shaped path inside the grid.
        let subset = [0, 1, 2, 5, 8];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let first = sample_ust(&g, &subset, &mut rng).unwrap();
        for _ in 0..50 {
            assert_eq!(sample_ust(&g, &subset, &mut rng).unwrap(), first);
        }
        assert!(is_spanning_tree(&g, &subset, &first));
    }

    #[test]
    fn singleton_and_errors() {
        let g = graph::grid(3, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(sample_ust(&g, &[4], &mut rng).unwrap().is_empty());
        assert!(matches!(
            sample_ust(&g, &[0, 8], &mut rng),
            Err(Error::NoSpanningTree { size: 2 })
        ));
        assert!(sample_ust(&g, &[], &mut rng).is_err());
    }

    #[test]
    fn triangle_is_uniform() {
        let g = graph::cycle(3).unwrap();
        let freq = frequencies(&g, &[0, 1, 2], 100_000, 11);
        assert_eq!(freq.len(), 3);
        for &c in freq.values() {
            assert!((c as f64 / 1e5 - 1.0 / 3.0).abs() < 0.01);
        }
    }

    #[test]
    fn small_graphs_pass_goodness_of_fit() {
        let cases = [
            (graph::grid(2, 3).unwrap(), 15),
            (graph::cycle(5).unwrap(), 5),
            (graph::grid(2, 2).unwrap(), 4),
            (graph::path(4).unwrap(), 1),
        ];
        for (g, trees) in cases {
            let all: Vec<_> = (0..g.n()).collect();
            let freq = frequencies(&g, &all, 30_000, 5);
            assert_eq!(freq.len(), trees);
            if trees > 1 {
                let obs: Vec<u64> = freq.values().copied().collect();
                let test = chi_square_gof(&obs, &vec![1.0 / trees as f64; trees]);
                assert!(test.p_value > 0.01, "p = {}", test.p_value);
            }
        }
    }

    #[test]
    fn every_draw_is_a_spanning_tree() {
        let g = graph::grid(6, 6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let subset: Vec<_> = (0..36).filter(|v| v % 6 < 4).collect();
        for _ in 0..200 {
            let t = sample_ust(&g, &subset, &mut rng).unwrap();
            assert!(is_spanning_tree(&g, &subset, &t));
        }
    }
}
