//! Adjacency-list forest answering every query by traversal. Slow, obviously
//! correct, and used as the oracle for the link-cut backend.

use std::collections::VecDeque;

use super::DynamicForest;
use crate::graph::{EdgeId, VertexId};

#[derive(Clone, Debug)]
pub struct NaiveForest {
    adj: Vec<Vec<(VertexId, EdgeId)>>,
}

impl NaiveForest {
    pub fn new(n: usize) -> Self {
        NaiveForest {
            adj: vec![Vec::new(); n],
        }
    }

    /// Breadth-first parent pointers from `root`, as `(parent, edge)`.
    fn bfs(&self, root: VertexId) -> Vec<Option<(VertexId, EdgeId)>> {
        let mut parent = vec![None; self.adj.len()];
        let mut seen = vec![false; self.adj.len()];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &(w, e) in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((u, e));
                    queue.push_back(w);
                }
            }
        }
        parent
    }

    fn reach(&self, root: VertexId) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[root] = true;
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            for &(w, _) in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }
}

impl DynamicForest for NaiveForest {
    fn link(&mut self, e: EdgeId, u: VertexId, v: VertexId) {
        self.adj[u].push((v, e));
        self.adj[v].push((u, e));
    }

    fn cut(&mut self, e: EdgeId, u: VertexId, v: VertexId) {
        self.adj[u].retain(|&(_, f)| f != e);
        self.adj[v].retain(|&(_, f)| f != e);
    }

    fn connected(&mut self, u: VertexId, v: VertexId) -> bool {
        self.reach(u)[v]
    }

    fn component_size(&mut self, v: VertexId) -> usize {
        self.reach(v).into_iter().filter(|&b| b).count()
    }

    fn path_len(&mut self, u: VertexId, v: VertexId) -> usize {
        self.path_edges(u, v).len()
    }

    fn path_edge_at(&mut self, u: VertexId, v: VertexId, idx: usize) -> EdgeId {
        self.path_edges(u, v)[idx]
    }

    fn path_edges(&mut self, u: VertexId, v: VertexId) -> Vec<EdgeId> {
        // Walk back from u towards v so the result reads u -> v.
        let parent = self.bfs(v);
        let mut out = Vec::new();
        let mut x = u;
        while x != v {
            let (p, e) = parent[x].expect("vertices are connected");
            out.push(e);
            x = p;
        }
        out
    }
}
