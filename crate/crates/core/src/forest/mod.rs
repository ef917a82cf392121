//! Spanning forests under edge insertion and deletion.
//!
//! [`ForestState`] is the chain state: a set of forest edges of the host
//! graph together with a dynamic-forest structure answering connectivity,
//! component-size and tree-path queries. Two interchangeable backends exist:
//! a link-cut tree ([`LinkCutForest`], amortized `O(log n)` per operation)
//! and a traversal-based [`NaiveForest`] used as a test oracle.

mod link_cut;
mod naive;
mod state;

pub use link_cut::LinkCutForest;
pub use naive::NaiveForest;
pub use state::{Backend, ComponentLabels, ForestState};

use crate::graph::{EdgeId, Graph, VertexId};

/// Structure-level dynamic forest. Callers guarantee the preconditions:
/// `link` joins two different trees, `cut` removes a present edge, and path
/// queries are only asked for connected endpoints.
pub trait DynamicForest {
    fn link(&mut self, e: EdgeId, u: VertexId, v: VertexId);
    fn cut(&mut self, e: EdgeId, u: VertexId, v: VertexId);
    fn connected(&mut self, u: VertexId, v: VertexId) -> bool;
    fn component_size(&mut self, v: VertexId) -> usize;
    /// Number of edges on the tree path from `u` to `v`.
    fn path_len(&mut self, u: VertexId, v: VertexId) -> usize;
    /// The `idx`-th edge on the path from `u` to `v`.
    fn path_edge_at(&mut self, u: VertexId, v: VertexId, idx: usize) -> EdgeId;
    /// Edges of the tree path, ordered from `u` to `v`.
    fn path_edges(&mut self, u: VertexId, v: VertexId) -> Vec<EdgeId>;
}

/// Side sizes obtained by deleting one tree edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeSplit {
    pub edge: EdgeId,
    /// Vertices on the side containing the root.
    pub root_side: usize,
    /// Vertices on the far side.
    pub far_side: usize,
}

/// Per-edge split sizes of the tree spanned by the edges accepted by
/// `in_tree` around `root`, in depth-first discovery order.
pub fn tree_splits(g: &Graph, root: VertexId, in_tree: impl Fn(EdgeId) -> bool) -> Vec<EdgeSplit> {
    let mut out = Vec::new();
    let mut buf = SplitBuffers::default();
    buf.visit(g, root, &in_tree, &mut out);
    out
}

/// Split sizes of every edge of the forest accepted by `in_tree`, paired with
/// the size of the tree the edge belongs to. Trees are rooted at their
/// smallest vertex.
pub fn forest_splits(g: &Graph, in_tree: impl Fn(EdgeId) -> bool) -> Vec<(EdgeSplit, usize)> {
    let mut seen = vec![false; g.n()];
    let mut out = Vec::new();
    let mut splits = Vec::new();
    let mut buf = SplitBuffers::default();
    for root in 0..g.n() {
        if seen[root] {
            continue;
        }
        splits.clear();
        let total = buf.visit(g, root, &in_tree, &mut splits);
        for &v in &buf.order {
            seen[v] = true;
        }
        out.extend(splits.iter().map(|&s| (s, total)));
    }
    out
}

#[derive(Default)]
struct SplitBuffers {
    order: Vec<VertexId>,
    // (parent position in `order`, edge to parent)
    parent_edge: Vec<(usize, EdgeId)>,
    sub: Vec<usize>,
    stack: Vec<(VertexId, usize, EdgeId)>,
}

impl SplitBuffers {
    /// Appends the splits of `root`'s tree to `out` and returns its size.
    fn visit(
        &mut self,
        g: &Graph,
        root: VertexId,
        in_tree: &impl Fn(EdgeId) -> bool,
        out: &mut Vec<EdgeSplit>,
    ) -> usize {
        self.order.clear();
        self.parent_edge.clear();
        self.stack.push((root, usize::MAX, usize::MAX));
        while let Some((v, parent, e)) = self.stack.pop() {
            let here = self.order.len();
            self.order.push(v);
            self.parent_edge.push((parent, e));
            for &(w, f) in g.neighbors(v) {
                if f != e && in_tree(f) {
                    self.stack.push((w, here, f));
                }
            }
        }
        let total = self.order.len();
        self.sub.clear();
        self.sub.resize(total, 1);
        for i in (1..total).rev() {
            self.sub[self.parent_edge[i].0] += self.sub[i];
        }
        out.extend((1..total).map(|i| EdgeSplit {
            edge: self.parent_edge[i].1,
            root_side: total - self.sub[i],
            far_side: self.sub[i],
        }));
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;

    #[test]
    fn path_splits() {
        let g = graph::path(4).unwrap();
        let s = tree_splits(&g, 0, |_| true);
        let pairs: Vec<_> = s.iter().map(|x| (x.root_side, x.far_side)).collect();
        assert_eq!(pairs, vec![(1, 3), (2, 2), (3, 1)]);
    }

    #[test]
    fn star_splits() {
        let g = Graph::new(5, (1..5).map(|i| (0, i)).collect()).unwrap();
        let s = tree_splits(&g, 0, |_| true);
        assert_eq!(s.len(), 4);
        assert!(s.iter().all(|x| (x.root_side, x.far_side) == (4, 1)));
        let s = tree_splits(&g, 3, |_| true);
        assert!(s
            .iter()
            .all(|x| x.root_side + x.far_side == 5 && x.far_side.min(x.root_side) == 1));
    }

    #[test]
    fn forest_splits_cover_every_tree() {
        // Two paths, 0-1-2 and 3-4, plus an isolated vertex 5.
        let g = Graph::new(6, vec![(0, 1), (1, 2), (3, 4), (2, 3)]).unwrap();
        let s = forest_splits(&g, |e| e != 3);
        let got: Vec<_> = s
            .iter()
            .map(|(x, t)| (x.edge, x.root_side, x.far_side, *t))
            .collect();
        assert_eq!(got, vec![(0, 1, 2, 3), (1, 2, 1, 3), (2, 1, 1, 2)]);
    }
}
