use std::collections::{BTreeSet, HashMap};

use super::enumerate::{check_size, enumerate_connected_partitions, EnumOptions};
use crate::error::{Error, Result};
use crate::graph::{induced_subgraph, Graph, VertexId};
use crate::partition::PartitionView;

/// Directed graph of one-step ReCom moves between balanced partitions.
#[derive(Clone, Debug)]
pub struct ReachabilityGraph {
    pub states: Vec<PartitionView>,
    /// Sorted successor lists; a state lists itself when a move can
    /// reproduce it.
    pub edges: Vec<Vec<usize>>,
}

impl ReachabilityGraph {
    pub fn non_self_edge_count(&self) -> usize {
        self.edges
            .iter()
            .enumerate()
            .map(|(i, out)| out.iter().filter(|&&j| j != i).count())
            .sum()
    }

    pub fn is_strongly_connected(&self) -> bool {
        let n = self.states.len();
        if n == 0 {
            return false;
        }
        let mut rev = vec![Vec::new(); n];
        for (i, out) in self.edges.iter().enumerate() {
            for &j in out {
                rev[j].push(i);
            }
        }
        let all_reached = |adj: &[Vec<usize>]| {
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
        all_reached(&self.edges) && all_reached(&rev)
    }
}

/// `P -> P'` whenever `P'` arises from `P` by merging two adjacent parts
/// and re-splitting the union into two connected halves of equal size:
/// some spanning tree of the union then has a balanced edge realizing the
/// split, which a ReCom step selects with positive probability.
pub fn recom_reachability_graph(
    g: &Graph,
    k: usize,
    opts: EnumOptions,
) -> Result<ReachabilityGraph> {
    let n = g.n();
    check_size(n, &opts)?;
    if k < 2 || !n.is_multiple_of(k) {
        return Err(Error::InvalidArgument(format!(
            "ReCom needs k >= 2 dividing n = {n}, got {k}"
        )));
    }
    let size = n / k;
    let states = enumerate_connected_partitions(g, k, opts.balanced(size))?;
    let index: HashMap<&PartitionView, usize> =
        states.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut splits: HashMap<Vec<VertexId>, Vec<(Vec<VertexId>, Vec<VertexId>)>> = HashMap::new();
    let mut edges = Vec::with_capacity(states.len());

    for p in &states {
        let assign = p.assignment();
        let mut out = BTreeSet::new();
        for i in 0..k {
            for j in i + 1..k {
                let adjacent = p.parts()[i]
                    .iter()
                    .any(|&u| g.neighbors(u).iter().any(|&(w, _)| assign[w] == j));
                if !adjacent {
                    continue;
                }
                let mut region: Vec<VertexId> =
                    p.parts()[i].iter().chain(&p.parts()[j]).copied().collect();
                region.sort_unstable();
                if !splits.contains_key(&region) {
                    let (sub, map) = induced_subgraph(g, &region)?;
                    let halves = enumerate_connected_partitions(
                        &sub,
                        2,
                        EnumOptions::unguarded().balanced(size),
                    )?
                    .into_iter()
                    .map(|h| {
                        let lift =
                            |part: &Vec<VertexId>| part.iter().map(|&v| map[v]).collect::<Vec<_>>();
                        (lift(&h.parts()[0]), lift(&h.parts()[1]))
                    })
                    .collect();
                    splits.insert(region.clone(), halves);
                }
                for (a, b) in &splits[&region] {
                    let mut parts: Vec<Vec<VertexId>> = p
                        .parts()
                        .iter()
                        .enumerate()
                        .filter(|&(t, _)| t != i && t != j)
                        .map(|(_, part)| part.clone())
                        .collect();
                    parts.push(a.clone());
                    parts.push(b.clone());
                    let q = PartitionView::new(n, parts)?;
                    out.insert(index[&q]);
                }
            }
        }
        edges.push(out.into_iter().collect());
    }
    Ok(ReachabilityGraph { states, edges })
}
