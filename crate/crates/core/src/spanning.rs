//! Spanning-tree counts via the matrix-tree theorem.
//!
//! The exact backend runs fraction-free Bareiss elimination on the reduced
//! Laplacian, first in `i128` with overflow checks and then in arbitrary
//! precision if any intermediate minor overflows. The log backend uses a
//! floating-point Cholesky factorization and is what the large-grid
//! statistics use.

use std::fmt;

use nalgebra::DMatrix;
use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::partition::PartitionView;

/// Exact number of spanning trees; zero iff the graph is disconnected.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactCount(pub BigUint);

impl ExactCount {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn ln(&self) -> f64 {
        if self.0.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.0.bits();
        if bits <= 1000 {
            self.0.to_f64().unwrap().ln()
        } else {
            let shift = bits - 64;
            (&self.0 >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
        }
    }
}

impl fmt::Display for ExactCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Natural-log weight; `-inf` encodes zero.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct LogWeight(pub f64);

impl LogWeight {
    pub const ZERO: LogWeight = LogWeight(f64::NEG_INFINITY);

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }
}

/// Local index of every vertex in `subset`, `usize::MAX` elsewhere; `None`
/// when the induced subgraph is disconnected.
fn connected_local_index(g: &Graph, subset: &[VertexId]) -> Option<Vec<usize>> {
    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in subset.iter().enumerate() {
        local[v] = i;
    }
    let mut seen = vec![false; subset.len()];
    let mut stack = vec![subset[0]];
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &(w, _) in g.neighbors(u) {
            let lw = local[w];
            if lw != usize::MAX && !seen[lw] {
                seen[lw] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    (count == subset.len()).then_some(local)
}

/// Reduced Laplacian of `G[subset]` with the last vertex's row and column
/// deleted.
fn reduced_laplacian(g: &Graph, subset: &[VertexId], local: &[usize]) -> Vec<Vec<i64>> {
    let dim = subset.len() - 1;
    let mut lap = vec![vec![0i64; dim]; dim];
    for (i, &v) in subset.iter().enumerate().take(dim) {
        for &(w, _) in g.neighbors(v) {
            let j = local[w];
            if j == usize::MAX {
                continue;
            }
            lap[i][i] += 1;
            if j < dim {
                lap[i][j] -= 1;
            }
        }
    }
    lap
}

fn bareiss_i128(mat: &[Vec<i64>]) -> Option<i128> {
    let n = mat.len();
    let mut a: Vec<Vec<i128>> = mat
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Some(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = a[i][j]
                    .checked_mul(a[k][k])?
                    .checked_sub(a[i][k].checked_mul(a[k][j])?)?;
                a[i][j] = t / prev;
            }
        }
        prev = a[k][k];
    }
    Some(if n == 0 { 1 } else { sign * a[n - 1][n - 1] })
}

fn bareiss_big(mat: &[Vec<i64>]) -> BigInt {
    let n = mat.len();
    let mut a: Vec<Vec<BigInt>> = mat
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut negate = false;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::from(1);
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Exact spanning-tree count of `G[subset]`. `subset` must be nonempty and
/// duplicate-free.
pub fn count_in_subset(g: &Graph, subset: &[VertexId]) -> ExactCount {
    if subset.len() <= 1 {
        return ExactCount(BigUint::from(subset.len() as u32));
    }
    let Some(local) = connected_local_index(g, subset) else {
        return ExactCount(BigUint::zero());
    };
    let lap = reduced_laplacian(g, subset, &local);
    let det = match bareiss_i128(&lap) {
        Some(d) => BigInt::from(d),
        None => bareiss_big(&lap),
    };
    debug_assert!(!det.is_negative());
    ExactCount(det.to_biguint().expect("Laplacian cofactor is nonnegative"))
}

pub fn count_spanning_trees(g: &Graph) -> ExactCount {
    let all: Vec<VertexId> = (0..g.n()).collect();
    count_in_subset(g, &all)
}

/// Log spanning-tree count of `G[subset]` through a Cholesky factorization of
/// the reduced Laplacian.
pub fn log_count_in_subset(g: &Graph, subset: &[VertexId]) -> Result<LogWeight> {
    if subset.is_empty() {
        return Ok(LogWeight::ZERO);
    }
    if subset.len() == 1 {
        return Ok(LogWeight(0.0));
    }
    let Some(local) = connected_local_index(g, subset) else {
        return Ok(LogWeight::ZERO);
    };
    let lap = reduced_laplacian(g, subset, &local);
    let dim = lap.len();
    let mat = DMatrix::from_fn(dim, dim, |i, j| lap[i][j] as f64);
    let chol = mat.cholesky().ok_or_else(|| {
        Error::NumericalFailure(format!(
            "non-positive pivot factoring a {dim}x{dim} reduced Laplacian of a connected graph"
        ))
    })?;
    let l = chol.l_dirty();
    // a connected subset has at least one tree; clamp rounding below ln 1
    Ok(LogWeight(
        (2.0 * (0..dim).map(|i| l[(i, i)].ln()).sum::<f64>()).max(0.0),
    ))
}

pub fn log_count_spanning_trees(g: &Graph) -> Result<LogWeight> {
    let all: Vec<VertexId> = (0..g.n()).collect();
    log_count_in_subset(g, &all)
}

/// `sum_i [ln T(G[P_i]) + c ln |P_i|]`, or `-inf` if any part is disconnected.
pub fn partition_log_weight(g: &Graph, parts: &PartitionView, c: f64) -> Result<LogWeight> {
    let mut total = 0.0;
    for part in parts.parts() {
        let lw = log_count_in_subset(g, part)?;
        if lw.is_zero() {
            return Ok(LogWeight::ZERO);
        }
        total += lw.0 + c * (part.len() as f64).ln();
    }
    Ok(LogWeight(total))
}
