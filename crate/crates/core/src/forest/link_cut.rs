//! Link-cut tree over vertices and edges.
//!
//! Every host edge gets its own node (ids `n..n+m`) so that a path query
//! returns edges rather than vertices. Nodes carry two aggregates: the number
//! of vertex nodes in the represented subtree, including virtual children, and
//! the number of edge nodes on the preferred path.

use super::DynamicForest;
use crate::graph::{EdgeId, VertexId};

const NIL: usize = usize::MAX;

#[derive(Clone, Debug)]
pub struct LinkCutForest {
    n: usize,
    ch: Vec<[usize; 2]>,
    par: Vec<usize>,
    rev: Vec<bool>,
    // vertex nodes in splay subtree plus virtual subtrees
    sum: Vec<u32>,
    // vertex nodes hanging off as virtual (non-preferred) children
    virt: Vec<u32>,
    // edge nodes in splay subtree
    ecnt: Vec<u32>,
}

impl LinkCutForest {
    pub fn new(n: usize, m: usize) -> Self {
        let total = n + m;
        let mut sum = vec![0; total];
        sum[..n].fill(1);
        let mut ecnt = vec![0; total];
        ecnt[n..].fill(1);
        LinkCutForest {
            n,
            ch: vec![[NIL, NIL]; total],
            par: vec![NIL; total],
            rev: vec![false; total],
            sum,
            virt: vec![0; total],
            ecnt,
        }
    }

    #[inline]
    fn is_vertex(&self, x: usize) -> bool {
        x < self.n
    }

    #[inline]
    fn sum_of(&self, x: usize) -> u32 {
        if x == NIL {
            0
        } else {
            self.sum[x]
        }
    }

    #[inline]
    fn ecnt_of(&self, x: usize) -> u32 {
        if x == NIL {
            0
        } else {
            self.ecnt[x]
        }
    }

    #[inline]
    fn update(&mut self, x: usize) {
        let [l, r] = self.ch[x];
        self.sum[x] = self.sum_of(l) + self.sum_of(r) + self.is_vertex(x) as u32 + self.virt[x];
        self.ecnt[x] = self.ecnt_of(l) + self.ecnt_of(r) + (!self.is_vertex(x)) as u32;
    }

    #[inline]
    fn is_splay_root(&self, x: usize) -> bool {
        let p = self.par[x];
        p == NIL || (self.ch[p][0] != x && self.ch[p][1] != x)
    }

    #[inline]
    fn push(&mut self, x: usize) {
        if self.rev[x] {
            self.rev[x] = false;
            self.ch[x].swap(0, 1);
            for c in self.ch[x] {
                if c != NIL {
                    self.rev[c] ^= true;
                }
            }
        }
    }

    fn rotate(&mut self, x: usize) {
        let p = self.par[x];
        let g = self.par[p];
        let dir = (self.ch[p][1] == x) as usize;
        if !self.is_splay_root(p) {
            let gd = (self.ch[g][1] == p) as usize;
            self.ch[g][gd] = x;
        }
        self.par[x] = g;
        let b = self.ch[x][1 - dir];
        self.ch[p][dir] = b;
        if b != NIL {
            self.par[b] = p;
        }
        self.ch[x][1 - dir] = p;
        self.par[p] = x;
        self.update(p);
        self.update(x);
    }

    fn splay(&mut self, x: usize) {
        let mut stack = vec![x];
        let mut y = x;
        while !self.is_splay_root(y) {
            y = self.par[y];
            stack.push(y);
        }
        while let Some(z) = stack.pop() {
            self.push(z);
        }
        while !self.is_splay_root(x) {
            let p = self.par[x];
            if !self.is_splay_root(p) {
                let g = self.par[p];
                let zigzig = (self.ch[g][1] == p) == (self.ch[p][1] == x);
                self.rotate(if zigzig { p } else { x });
            }
            self.rotate(x);
        }
    }

    fn access(&mut self, x: usize) {
        let mut last = NIL;
        let mut y = x;
        while y != NIL {
            self.splay(y);
            let right = self.ch[y][1];
            self.virt[y] = self.virt[y] + self.sum_of(right) - self.sum_of(last);
            self.ch[y][1] = last;
            self.update(y);
            last = y;
            y = self.par[y];
        }
        self.splay(x);
    }

    fn make_root(&mut self, x: usize) {
        self.access(x);
        self.rev[x] ^= true;
        self.push(x);
    }

    fn find_root(&mut self, x: usize) -> usize {
        self.access(x);
        let mut y = x;
        loop {
            self.push(y);
            match self.ch[y][0] {
                NIL => break,
                l => y = l,
            }
        }
        self.splay(y);
        y
    }

    fn link_nodes(&mut self, a: usize, b: usize) {
        self.make_root(a);
        self.access(b);
        self.par[a] = b;
        self.virt[b] += self.sum[a];
        self.update(b);
    }

    fn cut_nodes(&mut self, a: usize, b: usize) {
        self.make_root(a);
        self.access(b);
        // b's splay tree is exactly the path a..b = [a, b].
        debug_assert_eq!(self.ch[b][0], a);
        self.ch[b][0] = NIL;
        self.par[a] = NIL;
        self.update(b);
    }

    /// Exposes the path `u..v` as the splay tree rooted at `v`.
    fn expose_path(&mut self, u: VertexId, v: VertexId) {
        self.make_root(u);
        self.access(v);
    }

    fn collect_edges(&mut self, x: usize, out: &mut Vec<EdgeId>) {
        // In-order traversal with lazy reversal pushed down.
        let mut stack = Vec::new();
        let mut cur = x;
        loop {
            while cur != NIL {
                self.push(cur);
                stack.push(cur);
                cur = self.ch[cur][0];
            }
            match stack.pop() {
                None => break,
                Some(node) => {
                    if !self.is_vertex(node) {
                        out.push(node - self.n);
                    }
                    cur = self.ch[node][1];
                }
            }
        }
    }
}

impl DynamicForest for LinkCutForest {
    fn link(&mut self, e: EdgeId, u: VertexId, v: VertexId) {
        let en = self.n + e;
        self.link_nodes(u, en);
        self.link_nodes(en, v);
    }

    fn cut(&mut self, e: EdgeId, u: VertexId, v: VertexId) {
        let en = self.n + e;
        self.cut_nodes(u, en);
        self.cut_nodes(en, v);
    }

    fn connected(&mut self, u: VertexId, v: VertexId) -> bool {
        u == v || self.find_root(u) == self.find_root(v)
    }

    fn component_size(&mut self, v: VertexId) -> usize {
        self.access(v);
        self.sum[v] as usize
    }

    fn path_len(&mut self, u: VertexId, v: VertexId) -> usize {
        self.expose_path(u, v);
        self.ecnt[v] as usize
    }

    fn path_edge_at(&mut self, u: VertexId, v: VertexId, mut idx: usize) -> EdgeId {
        self.expose_path(u, v);
        let mut x = v;
        loop {
            self.push(x);
            let l = self.ch[x][0];
            let lc = self.ecnt_of(l) as usize;
            if idx < lc {
                x = l;
                continue;
            }
            let own = (!self.is_vertex(x)) as usize;
            if own == 1 && idx == lc {
                break;
            }
            idx -= lc + own;
            x = self.ch[x][1];
            assert!(x != NIL, "path index out of range");
        }
        self.splay(x);
        x - self.n
    }

    fn path_edges(&mut self, u: VertexId, v: VertexId) -> Vec<EdgeId> {
        self.expose_path(u, v);
        let mut out = Vec::with_capacity(self.ecnt[v] as usize);
        self.collect_edges(v, &mut out);
        out
    }
}
