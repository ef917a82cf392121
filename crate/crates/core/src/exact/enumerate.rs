use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::PartitionView;

/// Vertex count above which enumeration refuses to run unless overridden.
pub const SIZE_GUARD: usize = 20;
/// Bitmask representation limit.
pub const MAX_VERTICES: usize = 64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumOptions {
    /// Run above [`SIZE_GUARD`].
    pub override_guard: bool,
    /// Only partitions whose parts all have this size.
    pub part_size: Option<usize>,
}

impl EnumOptions {
    pub fn unguarded() -> Self {
        EnumOptions {
            override_guard: true,
            part_size: None,
        }
    }

    pub fn balanced(mut self, part_size: usize) -> Self {
        self.part_size = Some(part_size);
        self
    }
}

pub(crate) fn check_size(n: usize, opts: &EnumOptions) -> Result<()> {
    if n > MAX_VERTICES {
        return Err(Error::SizeGuard {
            n,
            limit: MAX_VERTICES,
        });
    }
    if n > SIZE_GUARD && !opts.override_guard {
        return Err(Error::SizeGuard {
            n,
            limit: SIZE_GUARD,
        });
    }
    Ok(())
}

/// Every partition of `g` into `k` nonempty parts that each induce a
/// connected subgraph, in canonical form and sorted.
pub fn enumerate_connected_partitions(
    g: &Graph,
    k: usize,
    opts: EnumOptions,
) -> Result<Vec<PartitionView>> {
    let n = g.n();
    check_size(n, &opts)?;
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "cannot split {n} vertices into {k} nonempty parts"
        )));
    }
    if let Some(s) = opts.part_size {
        if s * k != n {
            return Err(Error::InvalidArgument(format!(
                "{k} parts of size {s} do not cover {n} vertices"
            )));
        }
    }
    let nbr: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &(w, _)| m | (1 << w)))
        .collect();
    let mut e = Enumerator {
        nbr,
        part_size: opts.part_size,
        feasible: HashMap::new(),
        parts: Vec::with_capacity(k),
        out: Vec::new(),
    };
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    e.split(full, k);
    let mut out: Vec<PartitionView> = e.out.into_iter().map(PartitionView::from_masks).collect();
    out.sort_unstable();
    Ok(out)
}

struct Enumerator {
    nbr: Vec<u64>,
    part_size: Option<usize>,
    // remainder mask -> whether it can still be cut into the given number of parts
    feasible: HashMap<(u64, usize), bool>,
    parts: Vec<u64>,
    out: Vec<Vec<u64>>,
}

impl Enumerator {
    fn neighbourhood(&self, mut set: u64) -> u64 {
        let mut out = 0;
        while set != 0 {
            out |= self.nbr[set.trailing_zeros() as usize];
            set &= set - 1;
        }
        out
    }

    /// Connected components of the subgraph induced by `set`.
    fn components(&self, set: u64) -> Vec<u64> {
        let mut rest = set;
        let mut out = Vec::new();
        while rest != 0 {
            let mut comp = rest & rest.wrapping_neg();
            loop {
                let grown = (comp | self.neighbourhood(comp)) & set;
                if grown == comp {
                    break;
                }
                comp = grown;
            }
            out.push(comp);
            rest &= !comp;
        }
        out
    }

    /// Necessary condition for `rest` to split into `parts` connected parts.
    fn can_finish(&mut self, rest: u64, parts: usize) -> bool {
        if let Some(&ok) = self.feasible.get(&(rest, parts)) {
            return ok;
        }
        let comps = self.components(rest);
        let ok = comps.len() <= parts
            && rest.count_ones() as usize >= parts
            && match self.part_size {
                Some(s) => comps
                    .iter()
                    .all(|c| (c.count_ones() as usize).is_multiple_of(s)),
                None => true,
            };
        self.feasible.insert((rest, parts), ok);
        ok
    }

    fn split(&mut self, rest: u64, parts: usize) {
        if parts == 1 {
            if self.components(rest).len() == 1 {
                self.parts.push(rest);
                self.out.push(self.parts.clone());
                self.parts.pop();
            }
            return;
        }
        let v = rest.trailing_zeros() as usize;
        let max = match self.part_size {
            Some(s) => s,
            None => rest.count_ones() as usize - (parts - 1),
        };
        let seed = 1u64 << v;
        let cand = self.nbr[v] & rest;
        self.grow(rest, parts, seed, cand, 0, max);
    }

    /// Include/exclude branching on the lowest candidate: every connected set
    /// containing the seed is reached exactly once, when no candidates remain.
    fn grow(&mut self, rest: u64, parts: usize, set: u64, cand: u64, excluded: u64, max: usize) {
        let size = set.count_ones() as usize;
        if cand == 0 || size == max {
            if self.part_size.is_some_and(|s| s != size) {
                return;
            }
            let remainder = rest & !set;
            if self.can_finish(remainder, parts - 1) {
                self.parts.push(set);
                self.split(remainder, parts - 1);
                self.parts.pop();
            }
            return;
        }
        let c = cand & cand.wrapping_neg();
        let grown = set | c;
        let new_cand = (cand | self.nbr[c.trailing_zeros() as usize]) & rest & !grown & !excluded;
        self.grow(rest, parts, grown, new_cand, excluded, max);
        self.grow(rest, parts, set, cand & !c, excluded | c, max);
    }
}
