use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::chains::{removal_candidates, Removal};
use crate::error::{Error, Result};
use crate::forest::ForestState;
use crate::graph::{EdgeId, Graph};

/// Edge count above which forest enumeration refuses to run.
pub const FOREST_EDGE_GUARD: usize = 24;

/// All acyclic edge sets of `g` with exactly `size` edges, each sorted, in
/// lexicographic order.
pub fn enumerate_forests(g: &Graph, size: usize) -> Result<Vec<Vec<EdgeId>>> {
    if g.m() > FOREST_EDGE_GUARD {
        return Err(Error::SizeGuard {
            n: g.m(),
            limit: FOREST_EDGE_GUARD,
        });
    }
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(size);
    let parent: Vec<usize> = (0..g.n()).collect();
    extend(g, 0, size, &mut chosen, parent, &mut out);
    Ok(out)
}

fn find(p: &[usize], mut x: usize) -> usize {
    while p[x] != x {
        x = p[x];
    }
    x
}

fn extend(
    g: &Graph,
    next: EdgeId,
    size: usize,
    chosen: &mut Vec<EdgeId>,
    parent: Vec<usize>,
    out: &mut Vec<Vec<EdgeId>>,
) {
    if chosen.len() == size {
        out.push(chosen.clone());
        return;
    }
    for e in next..g.m() {
        if g.m() - e < size - chosen.len() {
            break;
        }
        let (u, v) = g.edge(e);
        let (a, b) = (find(&parent, u), find(&parent, v));
        if a == b {
            continue;
        }
        let mut p = parent.clone();
        p[a] = b;
        chosen.push(e);
        extend(g, e + 1, size, chosen, p, out);
        chosen.pop();
    }
}

/// The forest walk's one-step transition matrix over all forests with
/// `n - k` edges, built from the chain's own removal rule.
#[derive(Clone, Debug)]
pub struct ForestKernel {
    pub forests: Vec<Vec<EdgeId>>,
    /// Sparse rows, targets ascending.
    pub rows: Vec<Vec<(usize, f64)>>,
    /// Exact rows, present for integer exponents.
    pub exact_rows: Option<Vec<Vec<(usize, BigRational)>>>,
}

impl ForestKernel {
    pub fn index_of(&self, forest: &[EdgeId]) -> Option<usize> {
        self.forests
            .binary_search_by(|f| f.as_slice().cmp(forest))
            .ok()
    }

    /// Every forest reaches every other with positive probability.
    pub fn is_irreducible(&self) -> bool {
        let n = self.rows.len();
        let reach = |forward: bool| {
            let mut adj = vec![Vec::new(); n];
            for (i, row) in self.rows.iter().enumerate() {
                for &(j, p) in row {
                    if p > 0.0 {
                        if forward {
                            adj[i].push(j);
                        } else {
                            adj[j].push(i);
                        }
                    }
                }
            }
            let mut seen = vec![false; n];
            seen[0] = true;
            let mut stack = vec![0];
            while let Some(u) = stack.pop() {
                for &w in &adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            seen.into_iter().all(|s| s)
        };
        n > 0 && reach(true) && reach(false)
    }
}

fn exact_exponent(c: f64) -> Option<u32> {
    (c >= 0.0 && c.fract() == 0.0 && c <= 64.0).then_some(c as u32)
}

pub fn forest_walk_kernel(g: &Arc<Graph>, k: usize, c: f64) -> Result<ForestKernel> {
    let n = g.n();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "cannot split {n} vertices into {k} parts"
        )));
    }
    let forests = enumerate_forests(g, n - k)?;
    let index: HashMap<&[EdgeId], usize> = forests
        .iter()
        .enumerate()
        .map(|(i, f)| (f.as_slice(), i))
        .collect();
    let exact_c = exact_exponent(c);
    let mut rows = Vec::with_capacity(forests.len());
    let mut exact_rows = exact_c.map(|_| Vec::with_capacity(forests.len()));

    for f in &forests {
        let mut state = ForestState::from_edges(g.clone(), f)?;
        let mut off: Vec<EdgeId> = state.off_forest_edges().to_vec();
        off.sort_unstable();
        if off.is_empty() {
            let me = index[f.as_slice()];
            rows.push(vec![(me, 1.0)]);
            if let Some(er) = exact_rows.as_mut() {
                er.push(vec![(me, BigRational::one())]);
            }
            continue;
        }
        let per_x = BigRational::new(BigInt::one(), BigInt::from(off.len()));
        let mut row: BTreeMap<usize, f64> = BTreeMap::new();
        let mut exact_row: BTreeMap<usize, BigRational> = BTreeMap::new();
        let target = |y: EdgeId, x: EdgeId| -> usize {
            if y == x {
                return index[f.as_slice()];
            }
            let mut t: Vec<EdgeId> = f.iter().copied().filter(|&e| e != y).collect();
            let pos = t.partition_point(|&e| e < x);
            t.insert(pos, x);
            index[t.as_slice()]
        };
        for &x in &off {
            match removal_candidates(&mut state, x)? {
                Removal::Cycle(cycle) => {
                    let p = 1.0 / (off.len() * cycle.len()) as f64;
                    let pe = &per_x / BigInt::from(cycle.len());
                    for &y in &cycle {
                        let t = target(y, x);
                        *row.entry(t).or_insert(0.0) += p;
                        if exact_c.is_some() {
                            *exact_row.entry(t).or_insert_with(BigRational::zero) += &pe;
                        }
                    }
                }
                Removal::Join(cands) => {
                    let logs: Vec<f64> = cands.iter().map(|j| j.log_weight(c)).collect();
                    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    let w: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
                    let total: f64 = w.iter().sum();
                    for (j, wj) in cands.iter().zip(&w) {
                        *row.entry(target(j.edge, x)).or_insert(0.0) +=
                            wj / total / off.len() as f64;
                    }
                    if let Some(ci) = exact_c {
                        let ew: Vec<BigRational> = cands
                            .iter()
                            .map(|j| {
                                let num = BigInt::from(j.side * (j.total - j.side)).pow(ci);
                                BigRational::new(num, BigInt::from(j.total).pow(ci))
                            })
                            .collect();
                        let et: BigRational = ew.iter().sum();
                        for (j, wj) in cands.iter().zip(&ew) {
                            *exact_row
                                .entry(target(j.edge, x))
                                .or_insert_with(BigRational::zero) += wj / &et * &per_x;
                        }
                    }
                }
            }
        }
        rows.push(row.into_iter().collect());
        if let Some(er) = exact_rows.as_mut() {
            er.push(exact_row.into_iter().collect());
        }
    }
    Ok(ForestKernel {
        forests,
        rows,
        exact_rows,
    })
}
