use std::fmt::Write as _;
use std::sync::{Arc, OnceLock};

use super::{tree_splits, DynamicForest, EdgeSplit, LinkCutForest, NaiveForest};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::partition::PartitionView;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Backend {
    #[default]
    LinkCut,
    Naive,
}

#[derive(Clone, Debug)]
enum Structure {
    LinkCut(LinkCutForest),
    Naive(NaiveForest),
}

impl Structure {
    fn get(&mut self) -> &mut dyn DynamicForest {
        match self {
            Structure::LinkCut(f) => f,
            Structure::Naive(f) => f,
        }
    }
}

/// Indexed edge set with O(1) insert, remove and uniform sampling by index.
#[derive(Clone, Debug)]
struct EdgeSet {
    items: Vec<EdgeId>,
    pos: Vec<usize>,
}

impl EdgeSet {
    fn new(m: usize) -> Self {
        EdgeSet {
            items: Vec::new(),
            pos: vec![usize::MAX; m],
        }
    }

    fn contains(&self, e: EdgeId) -> bool {
        self.pos[e] != usize::MAX
    }

    fn insert(&mut self, e: EdgeId) {
        debug_assert!(!self.contains(e));
        self.pos[e] = self.items.len();
        self.items.push(e);
    }

    fn remove(&mut self, e: EdgeId) {
        let i = self.pos[e];
        let last = *self.items.last().unwrap();
        self.items.swap_remove(i);
        if last != e {
            self.pos[last] = i;
        }
        self.pos[e] = usize::MAX;
    }
}

/// Component id per vertex (ids in order of each component's minimum vertex)
/// and vertex count per component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentLabels {
    pub comp_of: Vec<usize>,
    pub comp_size: Vec<usize>,
}

/// A spanning forest of the host graph with `k = n - |edges|` components.
#[derive(Clone, Debug)]
pub struct ForestState {
    graph: Arc<Graph>,
    forest: EdgeSet,
    off_forest: EdgeSet,
    structure: Structure,
    labels: OnceLock<ComponentLabels>,
}

impl ForestState {
    pub fn from_edges(graph: Arc<Graph>, edges: &[EdgeId]) -> Result<Self> {
        Self::from_edges_with(graph, edges, Backend::LinkCut)
    }

    pub fn from_edges_with(graph: Arc<Graph>, edges: &[EdgeId], backend: Backend) -> Result<Self> {
        let (n, m) = (graph.n(), graph.m());
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut forest = EdgeSet::new(m);
        for &e in edges {
            if e >= m {
                return Err(Error::InvalidForest(format!("edge {e} out of range")));
            }
            if forest.contains(e) {
                return Err(Error::InvalidForest(format!("edge {e} listed twice")));
            }
            let (u, v) = graph.edge(e);
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a == b {
                return Err(Error::InvalidForest(format!("edge {e} closes a cycle")));
            }
            parent[a] = b;
            forest.insert(e);
        }
        let mut off_forest = EdgeSet::new(m);
        for e in (0..m).filter(|&e| !forest.contains(e)) {
            off_forest.insert(e);
        }
        let mut structure = match backend {
            Backend::LinkCut => Structure::LinkCut(LinkCutForest::new(n, m)),
            Backend::Naive => Structure::Naive(NaiveForest::new(n)),
        };
        for &e in &forest.items {
            let (u, v) = graph.edge(e);
            structure.get().link(e, u, v);
        }
        Ok(ForestState {
            graph,
            forest,
            off_forest,
            structure,
            labels: OnceLock::new(),
        })
    }

    /// A forest whose trees span the parts of `p`, grown by breadth-first
    /// search inside each part.
    pub fn from_partition(graph: Arc<Graph>, p: &PartitionView) -> Result<Self> {
        if p.n() != graph.n() {
            return Err(Error::InvalidArgument(
                "partition and graph sizes differ".into(),
            ));
        }
        let assign = p.assignment();
        let mut seen = vec![false; graph.n()];
        let mut edges = Vec::with_capacity(graph.n() - p.k());
        let mut queue = std::collections::VecDeque::new();
        for s in 0..graph.n() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &(w, e) in graph.neighbors(u) {
                    if !seen[w] && assign[w] == assign[u] {
                        seen[w] = true;
                        edges.push(e);
                        queue.push_back(w);
                    }
                }
            }
        }
        if edges.len() != graph.n() - p.k() {
            return Err(Error::InvalidArgument(
                "partition has a disconnected part".into(),
            ));
        }
        Self::from_edges(graph, &edges)
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Number of components.
    pub fn k(&self) -> usize {
        self.graph.n() - self.forest.items.len()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.forest.contains(e)
    }

    /// Forest edges in internal (unsorted) order.
    pub fn forest_edges(&self) -> &[EdgeId] {
        &self.forest.items
    }

    /// Host edges not in the forest, in internal order.
    pub fn off_forest_edges(&self) -> &[EdgeId] {
        &self.off_forest.items
    }

    pub fn sorted_edges(&self) -> Vec<EdgeId> {
        let mut out = self.forest.items.clone();
        out.sort_unstable();
        out
    }

    pub fn link(&mut self, e: EdgeId) -> Result<()> {
        if e >= self.graph.m() {
            return Err(Error::InvalidArgument(format!("edge {e} out of range")));
        }
        let (u, v) = self.graph.edge(e);
        if self.forest.contains(e) || self.structure.get().connected(u, v) {
            return Err(Error::Cycle { edge: e });
        }
        self.structure.get().link(e, u, v);
        self.forest.insert(e);
        self.off_forest.remove(e);
        self.labels = OnceLock::new();
        Ok(())
    }

    pub fn cut(&mut self, e: EdgeId) -> Result<()> {
        if e >= self.graph.m() || !self.forest.contains(e) {
            return Err(Error::NotPresent { edge: e });
        }
        let (u, v) = self.graph.edge(e);
        self.structure.get().cut(e, u, v);
        self.forest.remove(e);
        self.off_forest.insert(e);
        self.labels = OnceLock::new();
        Ok(())
    }

    pub fn connected(&mut self, u: VertexId, v: VertexId) -> bool {
        self.structure.get().connected(u, v)
    }

    pub fn component_size_of(&mut self, v: VertexId) -> usize {
        self.structure.get().component_size(v)
    }

    pub fn tree_path(&mut self, u: VertexId, v: VertexId) -> Result<Vec<EdgeId>> {
        if !self.connected(u, v) {
            return Err(Error::NotConnected { u, v });
        }
        Ok(self.structure.get().path_edges(u, v))
    }

    /// Edge count of the tree path between connected vertices.
    pub fn path_len(&mut self, u: VertexId, v: VertexId) -> Result<usize> {
        if !self.connected(u, v) {
            return Err(Error::NotConnected { u, v });
        }
        Ok(self.structure.get().path_len(u, v))
    }

    /// The `idx`-th edge on the tree path from `u` to `v`.
    pub fn path_edge_at(&mut self, u: VertexId, v: VertexId, idx: usize) -> EdgeId {
        self.structure.get().path_edge_at(u, v, idx)
    }

    /// Component labels, recomputed by traversal after any mutation and then
    /// cached until the next one.
    pub fn labels(&self) -> &ComponentLabels {
        self.labels.get_or_init(|| self.compute_labels())
    }

    pub fn comp_of(&self, v: VertexId) -> usize {
        self.labels().comp_of[v]
    }

    pub fn comp_sizes(&self) -> &[usize] {
        &self.labels().comp_size
    }

    fn compute_labels(&self) -> ComponentLabels {
        let n = self.graph.n();
        let mut comp_of = vec![usize::MAX; n];
        let mut comp_size = Vec::with_capacity(self.k());
        let mut stack = Vec::new();
        for s in 0..n {
            if comp_of[s] != usize::MAX {
                continue;
            }
            let id = comp_size.len();
            comp_of[s] = id;
            stack.push(s);
            let mut size = 0;
            while let Some(u) = stack.pop() {
                size += 1;
                for &(w, e) in self.graph.neighbors(u) {
                    if comp_of[w] == usize::MAX && self.forest.contains(e) {
                        comp_of[w] = id;
                        stack.push(w);
                    }
                }
            }
            comp_size.push(size);
        }
        ComponentLabels { comp_of, comp_size }
    }

    /// Vertices of component `comp`, ascending.
    pub fn component_vertices(&self, comp: usize) -> Vec<VertexId> {
        let labels = self.labels();
        (0..self.n())
            .filter(|&v| labels.comp_of[v] == comp)
            .collect()
    }

    pub fn partition(&self) -> PartitionView {
        PartitionView::from_assignment(&self.labels().comp_of)
    }

    /// Split sizes of every edge of component `comp`'s tree, rooted at `root`.
    pub fn subtree_split_sizes(&self, comp: usize, root: VertexId) -> Result<Vec<EdgeSplit>> {
        if root >= self.n() || self.comp_of(root) != comp {
            return Err(Error::InvalidArgument(format!(
                "vertex {root} is not in component {comp}"
            )));
        }
        Ok(tree_splits(&self.graph, root, |e| self.forest.contains(e)))
    }

    /// One-line text form: graph hash followed by the sorted edge indices.
    pub fn to_line(&self) -> String {
        let mut out = self.graph.content_hash();
        for e in self.sorted_edges() {
            write!(out, " {e}").unwrap();
        }
        out
    }

    pub fn from_line(graph: Arc<Graph>, line: &str) -> Result<Self> {
        let mut it = line.split_whitespace();
        let hash = it.next().ok_or_else(|| Error::Parse {
            line: 1,
            msg: "empty forest line".into(),
        })?;
        if hash != graph.content_hash() {
            return Err(Error::InvalidArgument(format!(
                "forest was saved for graph {hash}, not {}",
                graph.content_hash()
            )));
        }
        let edges = it
            .map(|t| {
                t.parse().map_err(|_| Error::Parse {
                    line: 1,
                    msg: format!("bad edge index `{t}`"),
                })
            })
            .collect::<Result<Vec<EdgeId>>>()?;
        Self::from_edges(graph, &edges)
    }

    /// Checks every structural invariant against a from-scratch traversal.
    pub fn validate(&mut self) -> Result<()> {
        let fresh = self.compute_labels();
        if fresh.comp_size.len() != self.k() {
            return Err(Error::InvalidForest(format!(
                "{} components for {} edges on {} vertices",
                fresh.comp_size.len(),
                self.forest.items.len(),
                self.n()
            )));
        }
        if self.labels() != &fresh {
            return Err(Error::InvalidForest("stale component labels".into()));
        }
        for v in 0..self.n() {
            let size = self.component_size_of(v);
            if size != fresh.comp_size[fresh.comp_of[v]] {
                return Err(Error::InvalidForest(format!(
                    "size of {v}'s component is {size}"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn state(g: Graph, edges: &[EdgeId]) -> ForestState {
        ForestState::from_edges(Arc::new(g), edges).unwrap()
    }

    /// Breadth-first distances inside the forest, the oracle for path lengths.
    fn forest_distance(s: &ForestState, u: VertexId, v: VertexId) -> Option<usize> {
        let g = s.graph();
        let mut dist = vec![usize::MAX; g.n()];
        dist[u] = 0;
        let mut q = std::collections::VecDeque::from([u]);
        while let Some(x) = q.pop_front() {
            for &(w, e) in g.neighbors(x) {
                if s.contains(e) && dist[w] == usize::MAX {
                    dist[w] = dist[x] + 1;
                    q.push_back(w);
                }
            }
        }
        (dist[v] != usize::MAX).then_some(dist[v])
    }

    #[test]
    fn components_from_edges() {
        let s = state(graph::cycle(4).unwrap(), &[0, 2]);
        assert_eq!(s.k(), 2);
        assert_eq!(s.comp_sizes(), &[2, 2]);
        let s = state(graph::grid(2, 3).unwrap(), &[]);
        assert_eq!(s.k(), 6);
        assert!(s.comp_sizes().iter().all(|&x| x == 1));
        let s = state(graph::path(5).unwrap(), &[0, 1, 2, 3]);
        assert_eq!(s.k(), 1);
        assert!(matches!(
            ForestState::from_edges(Arc::new(graph::cycle(3).unwrap()), &[0, 1, 2]),
            Err(Error::InvalidForest(_))
        ));
    }

    #[test]
    fn link_cut_errors_and_involution() {
        let mut s = state(graph::cycle(4).unwrap(), &[0, 1]);
        assert_eq!(s.comp_sizes(), &[3, 1]);
        s.cut(0).unwrap();
        let mut sizes = s.comp_sizes().to_vec();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 2]);
        s.link(0).unwrap();
        assert_eq!(s.comp_sizes(), &[3, 1]);
        assert!(matches!(s.cut(3), Err(Error::NotPresent { edge: 3 })));
        s.link(2).unwrap();
        assert!(matches!(s.link(3), Err(Error::Cycle { edge: 3 })));
        assert!(matches!(s.link(0), Err(Error::Cycle { edge: 0 })));
        s.validate().unwrap();
    }

    #[test]
    fn paths() {
        let mut s = state(graph::path(6).unwrap(), &[0, 1, 2, 3, 4]);
        assert_eq!(s.tree_path(3, 3).unwrap(), Vec::<EdgeId>::new());
        assert_eq!(s.tree_path(0, 5).unwrap(), vec![0, 1, 2, 3, 4]);
        assert_eq!(s.tree_path(5, 0).unwrap(), vec![4, 3, 2, 1, 0]);
        assert_eq!(s.path_edge_at(5, 1, 1), 3);
        s.cut(2).unwrap();
        assert!(matches!(s.tree_path(0, 5), Err(Error::NotConnected { .. })));
    }

    #[test]
    fn random_path_lengths_match_bfs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = Arc::new(graph::grid(5, 5).unwrap());
        for _ in 0..20 {
            let tree = crate::ust::sample_ust(&g, &(0..25).collect::<Vec<_>>(), &mut rng).unwrap();
            let keep: Vec<_> = tree.into_iter().filter(|_| rng.random_bool(0.8)).collect();
            let mut s = ForestState::from_edges(g.clone(), &keep).unwrap();
            for _ in 0..30 {
                let (u, v) = (rng.random_range(0..25), rng.random_range(0..25));
                match forest_distance(&s, u, v) {
                    Some(d) => {
                        let p = s.tree_path(u, v).unwrap();
                        assert_eq!(p.len(), d);
                        assert_eq!(s.path_len(u, v).unwrap(), d);
                    }
                    None => assert!(!s.connected(u, v)),
                }
            }
        }
    }

    #[test]
    fn split_sizes_match_cut_and_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = Arc::new(graph::grid(3, 3).unwrap());
        for _ in 0..20 {
            let tree = crate::ust::sample_ust(&g, &(0..9).collect::<Vec<_>>(), &mut rng).unwrap();
            let mut s = ForestState::from_edges(g.clone(), &tree).unwrap();
            let root = rng.random_range(0..9);
            let splits = s.subtree_split_sizes(0, root).unwrap();
            assert_eq!(splits.len(), 8);
            for sp in splits {
                s.cut(sp.edge).unwrap();
                assert_eq!(s.component_size_of(root), sp.root_side);
                assert_eq!(sp.root_side + sp.far_side, 9);
                s.link(sp.edge).unwrap();
            }
        }
        let s = ForestState::from_edges(g, &[0, 1]).unwrap();
        assert!(s.subtree_split_sizes(0, 8).is_err());
    }

    #[test]
    fn forest_from_partition() {
        let g = Arc::new(graph::grid(2, 3).unwrap());
        let p = PartitionView::parse(6, "0,1,3|2,5|4").unwrap();
        let s = ForestState::from_partition(g.clone(), &p).unwrap();
        assert_eq!(s.partition(), p);
        let bad = PartitionView::parse(6, "0,2|1,3,4,5").unwrap();
        assert!(ForestState::from_partition(g, &bad).is_err());
    }

    #[test]
    fn line_round_trip() {
        let g = Arc::new(graph::grid(3, 3).unwrap());
        let s = ForestState::from_edges(g.clone(), &[5, 0, 3]).unwrap();
        let line = s.to_line();
        assert!(line.ends_with(" 0 3 5"));
        let back = ForestState::from_line(g, &line).unwrap();
        assert_eq!(back.sorted_edges(), vec![0, 3, 5]);
        let other = Arc::new(graph::grid(3, 4).unwrap());
        assert!(ForestState::from_line(other, &line).is_err());
    }
}
