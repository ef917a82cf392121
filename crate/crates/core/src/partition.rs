//! Canonical unordered vertex partitions.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

/// An unordered partition of `0..n` in canonical form: vertices sorted within
/// each part, parts sorted by their minimum vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionView {
    parts: Vec<Vec<VertexId>>,
}

impl PartitionView {
    /// Validates that `parts` are nonempty, disjoint and cover `0..n`, then
    /// canonicalizes.
    pub fn new(n: usize, mut parts: Vec<Vec<VertexId>>) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut covered = 0;
        for part in &mut parts {
            if part.is_empty() {
                return Err(Error::InvalidArgument("empty part".into()));
            }
            for &v in part.iter() {
                if v >= n || seen[v] {
                    return Err(Error::InvalidArgument(format!(
                        "vertex {v} out of range or repeated"
                    )));
                }
                seen[v] = true;
                covered += 1;
            }
            part.sort_unstable();
        }
        if covered != n {
            return Err(Error::InvalidArgument(format!(
                "parts cover {covered} of {n} vertices"
            )));
        }
        parts.sort_unstable_by_key(|p| p[0]);
        Ok(PartitionView { parts })
    }

    /// Builds the partition whose classes are the level sets of `labels`.
    pub fn from_assignment(labels: &[usize]) -> Self {
        let mut remap = std::collections::HashMap::new();
        let mut parts: Vec<Vec<VertexId>> = Vec::new();
        for (v, &l) in labels.iter().enumerate() {
            let idx = *remap.entry(l).or_insert_with(|| {
                parts.push(Vec::new());
                parts.len() - 1
            });
            parts[idx].push(v);
        }
        // Parts are discovered in order of their minimum vertex.
        PartitionView { parts }
    }

    #[cfg(test)]
    pub(crate) fn masks(&self) -> Vec<u64> {
        self.parts
            .iter()
            .map(|p| p.iter().fold(0u64, |m, &v| m | (1 << v)))
            .collect()
    }

    /// Bitmask form used by the enumerators; `n <= 64`.
    pub(crate) fn from_masks(mut masks: Vec<u64>) -> Self {
        masks.sort_unstable_by_key(|m| m.trailing_zeros());
        let parts = masks
            .into_iter()
            .map(|mut m| {
                let mut part = Vec::with_capacity(m.count_ones() as usize);
                while m != 0 {
                    part.push(m.trailing_zeros() as usize);
                    m &= m - 1;
                }
                part
            })
            .collect();
        PartitionView { parts }
    }

    pub fn parts(&self) -> &[Vec<VertexId>] {
        &self.parts
    }

    pub fn k(&self) -> usize {
        self.parts.len()
    }

    pub fn n(&self) -> usize {
        self.parts.iter().map(Vec::len).sum()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.parts.iter().map(Vec::len).collect()
    }

    /// Part index of every vertex.
    pub fn assignment(&self) -> Vec<usize> {
        let mut out = vec![0; self.n()];
        for (i, part) in self.parts.iter().enumerate() {
            for &v in part {
                out[v] = i;
            }
        }
        out
    }

    pub fn is_balanced(&self) -> bool {
        let s = self.parts[0].len();
        self.parts.iter().all(|p| p.len() == s)
    }

    /// Largest over smallest part size.
    pub fn imbalance_ratio(&self) -> f64 {
        let sizes = self.sizes();
        let max = *sizes.iter().max().unwrap() as f64;
        let min = *sizes.iter().min().unwrap() as f64;
        max / min
    }

    /// True when every part induces a connected subgraph of `g`.
    pub fn parts_connected(&self, g: &Graph) -> bool {
        let assign = self.assignment();
        let mut seen = vec![false; g.n()];
        self.parts.iter().all(|part| {
            let mut stack = vec![part[0]];
            seen[part[0]] = true;
            let mut count = 1;
            while let Some(u) = stack.pop() {
                for &(w, _) in g.neighbors(u) {
                    if !seen[w] && assign[w] == assign[u] {
                        seen[w] = true;
                        count += 1;
                        stack.push(w);
                    }
                }
            }
            count == part.len()
        })
    }

    /// Parses the `Display` form, e.g. `0,1|2,3`.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let parts = text
            .trim()
            .split('|')
            .map(|p| {
                p.split(',')
                    .map(|t| {
                        t.trim()
                            .parse()
                            .map_err(|_| Error::InvalidArgument(format!("bad vertex `{t}`")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, parts)
    }
}

impl fmt::Display for PartitionView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, part) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            for (j, v) in part.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}
