//! Immutable undirected simple graphs and the generators for every graph
//! family the samplers and oracles work on.
//!
//! Vertices are dense ids `0..n`; edges carry stable indices in insertion
//! order. Some generators also attach planar coordinates (for rendering) and
//! per-edge class tags (for the gap statistics on cycle-like graphs).

use std::collections::HashSet;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeClass {
    LeftCycle,
    Rung,
    RightCycle,
    None,
}

impl EdgeClass {
    pub fn is_cycle(self) -> bool {
        matches!(self, EdgeClass::LeftCycle | EdgeClass::RightCycle)
    }

    fn token(self) -> &'static str {
        match self {
            EdgeClass::LeftCycle => "left",
            EdgeClass::Rung => "rung",
            EdgeClass::RightCycle => "right",
            EdgeClass::None => "none",
        }
    }
}

/// Class membership and position label of an edge. A position is present
/// exactly for the two cycle classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EdgeTag {
    class: EdgeClass,
    position: Option<u32>,
}

impl EdgeTag {
    pub fn cycle(class: EdgeClass, position: u32) -> Self {
        assert!(
            class.is_cycle(),
            "position labels only exist on cycle edges"
        );
        EdgeTag {
            class,
            position: Some(position),
        }
    }

    pub const fn rung() -> Self {
        EdgeTag {
            class: EdgeClass::Rung,
            position: None,
        }
    }

    pub const fn none() -> Self {
        EdgeTag {
            class: EdgeClass::None,
            position: None,
        }
    }

    pub fn class(&self) -> EdgeClass {
        self.class
    }

    pub fn position(&self) -> Option<u32> {
        self.position
    }
}

#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    adj: Vec<Vec<(VertexId, EdgeId)>>,
    coords: Option<Vec<(f64, f64)>>,
    tags: Option<Vec<EdgeTag>>,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting loops, parallel edges and
    /// out-of-range endpoints.
    pub fn new(n: usize, edges: Vec<(VertexId, VertexId)>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edges.len());
        let mut adj = vec![Vec::new(); n];
        for (e, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge {e} = ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidArgument(format!("edge {e} is a loop at {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidArgument(format!(
                    "edge {e} = ({u}, {v}) duplicates an earlier edge"
                )));
            }
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        Ok(Graph {
            n,
            edges,
            adj,
            coords: None,
            tags: None,
        })
    }

    pub fn with_coords(mut self, coords: Vec<(f64, f64)>) -> Self {
        assert_eq!(coords.len(), self.n);
        self.coords = Some(coords);
        self
    }

    pub fn with_tags(mut self, tags: Vec<EdgeTag>) -> Self {
        assert_eq!(tags.len(), self.edges.len());
        self.tags = Some(tags);
        self
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edge(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    /// `(neighbor, edge)` pairs incident to `v`.
    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn find_edge(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.adj[u].iter().find(|&&(w, _)| w == v).map(|&(_, e)| e)
    }

    pub fn coords(&self) -> Option<&[(f64, f64)]> {
        self.coords.as_deref()
    }

    pub fn edge_tags(&self) -> Option<&[EdgeTag]> {
        self.tags.as_deref()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &(w, _) in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// Edge set as sorted normalized pairs, for isomorphism-by-relabeling checks.
    pub fn normalized_edge_set(&self) -> Vec<(VertexId, VertexId)> {
        let mut out: Vec<_> = self
            .edges
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        out.sort_unstable();
        out
    }

    /// Edge-list text: header `n m`, then `u v [class [position]]` per edge in
    /// edge-index order. Class and position are written only for tagged graphs.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {}", self.n, self.m()).unwrap();
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            write!(out, "{u} {v}").unwrap();
            if let Some(tag) = self.tags.as_ref().map(|t| t[e]) {
                if tag.class != EdgeClass::None {
                    write!(out, " {}", tag.class.token()).unwrap();
                }
                if let Some(p) = tag.position {
                    write!(out, " {p}").unwrap();
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let parse_num = |line: usize, tok: Option<&str>, what: &str| -> Result<usize> {
            tok.ok_or_else(|| Error::Parse {
                line,
                msg: format!("missing {what}"),
            })?
            .parse()
            .map_err(|_| Error::Parse {
                line,
                msg: format!("bad {what}"),
            })
        };
        let mut it = header.split_whitespace();
        let n = parse_num(hl, it.next(), "vertex count")?;
        let m = parse_num(hl, it.next(), "edge count")?;
        let mut edges = Vec::with_capacity(m);
        let mut tags = Vec::with_capacity(m);
        let mut any_tag = false;
        for (ln, line) in lines {
            let mut it = line.split_whitespace();
            let u = parse_num(ln, it.next(), "endpoint")?;
            let v = parse_num(ln, it.next(), "endpoint")?;
            let tag = match it.next() {
                None => EdgeTag::none(),
                Some(tok) => {
                    any_tag = true;
                    let class = match tok {
                        "left" => EdgeClass::LeftCycle,
                        "right" => EdgeClass::RightCycle,
                        "rung" => EdgeClass::Rung,
                        "none" => EdgeClass::None,
                        other => {
                            return Err(Error::Parse {
                                line: ln,
                                msg: format!("unknown edge class `{other}`"),
                            })
                        }
                    };
                    if class.is_cycle() {
                        let p = parse_num(ln, it.next(), "position")?;
                        EdgeTag::cycle(class, p as u32)
                    } else {
                        EdgeTag {
                            class,
                            position: None,
                        }
                    }
                }
            };
            if it.next().is_some() {
                return Err(Error::Parse {
                    line: ln,
                    msg: "trailing tokens".into(),
                });
            }
            edges.push((u, v));
            tags.push(tag);
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: hl,
                msg: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        let g = Graph::new(n, edges)?;
        Ok(if any_tag { g.with_tags(tags) } else { g })
    }

    /// First 16 hex digits of the SHA-256 of the edge-list text.
    pub fn content_hash(&self) -> String {
        let digest = Sha256::digest(self.to_edge_list().as_bytes());
        digest.iter().take(8).fold(String::new(), |mut s, b| {
            write!(s, "{b:02x}").unwrap();
            s
        })
    }
}

fn check_min(what: &'static str, value: usize, min: usize) -> Result<()> {
    if value < min {
        Err(Error::InvalidSize { what, value })
    } else {
        Ok(())
    }
}

pub fn path(n: usize) -> Result<Graph> {
    check_min("path length", n, 1)?;
    let edges = (1..n).map(|i| (i - 1, i)).collect();
    let coords = (0..n).map(|i| (i as f64, 0.0)).collect();
    Ok(Graph::new(n, edges)?.with_coords(coords))
}

pub fn cycle(n: usize) -> Result<Graph> {
    check_min("cycle length", n, 3)?;
    let edges = (0..n).map(|i| (i, (i + 1) % n)).collect();
    let coords = (0..n)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / n as f64;
            (t.cos(), t.sin())
        })
        .collect();
    Ok(Graph::new(n, edges)?.with_coords(coords))
}

/// `m` rows by `n` columns; vertex `(i, j)` has id `i * n + j` and
/// coordinates `(j, i)`. Horizontal edges come first, row by row.
pub fn grid(m: usize, n: usize) -> Result<Graph> {
    check_min("grid rows", m, 1)?;
    check_min("grid columns", n, 1)?;
    let id = |i: usize, j: usize| i * n + j;
    let mut edges = Vec::with_capacity(m * (n - 1) + n * (m - 1));
    for i in 0..m {
        for j in 0..n - 1 {
            edges.push((id(i, j), id(i, j + 1)));
        }
    }
    for i in 0..m - 1 {
        for j in 0..n {
            edges.push((id(i, j), id(i + 1, j)));
        }
    }
    let coords = (0..m * n)
        .map(|v| ((v % n) as f64, (v / n) as f64))
        .collect();
    Ok(Graph::new(m * n, edges)?.with_coords(coords))
}

/// Two cycles `l_0..l_{len-1}` (ids `0..len`) and `r_0..r_{len-1}` (ids
/// `len..2len`) joined by rungs `{l_i, r_i}`.
///
/// The cycle edge `{l_{j-1 mod len}, l_j}` carries position label `j`, and
/// likewise on the right cycle. Edge order: left cycle by label, right cycle
/// by label, then rungs by `i`.
pub fn double_cycle(len: usize) -> Result<Graph> {
    check_min("double-cycle length", len, 3)?;
    let mut edges = Vec::with_capacity(3 * len);
    let mut tags = Vec::with_capacity(3 * len);
    for (class, base) in [(EdgeClass::LeftCycle, 0), (EdgeClass::RightCycle, len)] {
        for j in 0..len {
            edges.push((base + (j + len - 1) % len, base + j));
            tags.push(EdgeTag::cycle(class, j as u32));
        }
    }
    for i in 0..len {
        edges.push((i, len + i));
        tags.push(EdgeTag::rung());
    }
    let coords = (0..2 * len)
        .map(|v| ((v % len) as f64, (v / len) as f64))
        .collect();
    Ok(Graph::new(2 * len, edges)?
        .with_coords(coords)
        .with_tags(tags))
}

/// `grid(m, n)` with the interior `{(i, j) | 2 <= i <= m-1, 2 <= j <= n-1}`
/// (1-based) removed, leaving the `2(m+n) - 4` boundary vertices.
///
/// Edges are listed clockwise from the top-left corner and tagged as an
/// outer ring: the two edges meeting at a corner share a label, every other
/// step increases the label by one. Labels run over `0..2(m+n) - 8`.
pub fn grid_with_hole(m: usize, n: usize) -> Result<Graph> {
    check_min("grid-with-hole rows", m, 4)?;
    check_min("grid-with-hole columns", n, 4)?;
    // Clockwise walk of the boundary cells.
    let mut ring = Vec::with_capacity(2 * (m + n) - 4);
    ring.extend((0..n).map(|j| (0, j)));
    ring.extend((1..m).map(|i| (i, n - 1)));
    ring.extend((0..n - 1).rev().map(|j| (m - 1, j)));
    ring.extend((1..m - 1).rev().map(|i| (i, 0)));
    let len = ring.len();
    let is_corner = |(i, j): (usize, usize)| (i == 0 || i == m - 1) && (j == 0 || j == n - 1);

    let mut edges = Vec::with_capacity(len);
    let mut tags = Vec::with_capacity(len);
    let mut label = 0u32;
    for q in 0..len {
        let a = ring[q];
        if q > 0 && !is_corner(a) {
            label += 1;
        }
        // The closing edge re-enters the top-left corner and pairs with edge 0.
        let tag_label = if q == len - 1 { 0 } else { label };
        edges.push((q, (q + 1) % len));
        tags.push(EdgeTag::cycle(EdgeClass::LeftCycle, tag_label));
    }
    let coords = ring.iter().map(|&(i, j)| (j as f64, i as f64)).collect();
    Ok(Graph::new(len, edges)?.with_coords(coords).with_tags(tags))
}

/// Cartesian product. Vertex `(u, v)` gets id `u * |V(h)| + v`. Edges of `h`
/// copies come first (grouped by `u`), then edges of `g` copies (grouped by
/// edge of `g`), so `cartesian_product(path(m), path(n))` equals `grid(m, n)`
/// edge for edge.
pub fn cartesian_product(g: &Graph, h: &Graph) -> Result<Graph> {
    check_min("product factor", g.n(), 1)?;
    check_min("product factor", h.n(), 1)?;
    let hn = h.n();
    let id = |u: usize, v: usize| u * hn + v;
    let mut edges = Vec::with_capacity(g.n() * h.m() + g.m() * hn);
    for u in 0..g.n() {
        for &(a, b) in h.edges() {
            edges.push((id(u, a), id(u, b)));
        }
    }
    for &(a, b) in g.edges() {
        for v in 0..hn {
            edges.push((id(a, v), id(b, v)));
        }
    }
    let out = Graph::new(g.n() * hn, edges)?;
    Ok(match (g.coords(), h.coords()) {
        (Some(gc), Some(hc)) => {
            let coords = (0..g.n() * hn)
                .map(|x| {
                    let (u, v) = (x / hn, x % hn);
                    (hc[v].0 + gc[u].1, hc[v].1 + gc[u].0)
                })
                .collect();
            out.with_coords(coords)
        }
        _ => out,
    })
}

/// Subgraph induced by `subset`, relabeled `0..|subset|` in increasing order
/// of the original ids. Returns the graph and the new-to-old vertex map.
pub fn induced_subgraph(g: &Graph, subset: &[VertexId]) -> Result<(Graph, Vec<VertexId>)> {
    if subset.is_empty() {
        return Err(Error::InvalidArgument("empty vertex subset".into()));
    }
    let mut map: Vec<VertexId> = subset.to_vec();
    map.sort_unstable();
    map.dedup();
    if let Some(&bad) = map.iter().find(|&&v| v >= g.n()) {
        return Err(Error::InvalidArgument(format!("vertex {bad} not in graph")));
    }
    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in map.iter().enumerate() {
        local[v] = i;
    }
    let mut edges = Vec::new();
    let mut tags = Vec::new();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if local[u] != usize::MAX && local[v] != usize::MAX {
            edges.push((local[u], local[v]));
            if let Some(t) = g.edge_tags() {
                tags.push(t[e]);
            }
        }
    }
    let mut out = Graph::new(map.len(), edges)?;
    if let Some(c) = g.coords() {
        out = out.with_coords(map.iter().map(|&v| c[v]).collect());
    }
    if g.edge_tags().is_some() {
        out = out.with_tags(tags);
    }
    Ok((out, map))
}

/// Parses generator shorthands such as `grid:30,30`, `cycle:6` or
/// `double_cycle:9`.
pub fn from_generator(name: &str, params: &[usize]) -> Result<Graph> {
    let want = |k: usize| -> Result<()> {
        if params.len() == k {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "generator `{name}` takes {k} parameter(s), got {}",
                params.len()
            )))
        }
    };
    match name {
        "path" => want(1).and_then(|_| path(params[0])),
        "cycle" => want(1).and_then(|_| cycle(params[0])),
        "grid" => want(2).and_then(|_| grid(params[0], params[1])),
        "double_cycle" => want(1).and_then(|_| double_cycle(params[0])),
        "grid_with_hole" => want(2).and_then(|_| grid_with_hole(params[0], params[1])),
        "cylinder" => {
            want(2).and_then(|_| cartesian_product(&path(params[0])?, &cycle(params[1])?))
        }
        other => Err(Error::InvalidArgument(format!(
            "unknown generator `{other}`"
        ))),
    }
}
