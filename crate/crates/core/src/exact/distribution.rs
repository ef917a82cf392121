use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::enumerate::{enumerate_connected_partitions, EnumOptions};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::PartitionView;
use crate::spanning::count_in_subset;

/// Largest exponent treated as an integer for exact weights.
const MAX_EXACT_EXPONENT: f64 = 64.0;

#[derive(Clone, Debug, PartialEq)]
pub enum Weights {
    /// `prod T(G[P_i]) |P_i|^c` exactly; used for integer `c`.
    Exact {
        weights: Vec<BigUint>,
        total: BigUint,
    },
    /// The same weights in floating point, scaled so the largest is 1.
    Scaled { weights: Vec<f64>, total: f64 },
}

/// A finite distribution over canonical partitions.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactDistribution {
    support: Vec<PartitionView>,
    weights: Weights,
}

impl ExactDistribution {
    pub fn support(&self) -> &[PartitionView] {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn index_of(&self, p: &PartitionView) -> Option<usize> {
        self.support.binary_search(p).ok()
    }

    /// Exact weight, when the weights are integers.
    pub fn exact_weight(&self, i: usize) -> Option<&BigUint> {
        match &self.weights {
            Weights::Exact { weights, .. } => Some(&weights[i]),
            Weights::Scaled { .. } => None,
        }
    }

    /// The partition function, when the weights are integers.
    pub fn exact_total(&self) -> Option<&BigUint> {
        match &self.weights {
            Weights::Exact { total, .. } => Some(total),
            Weights::Scaled { .. } => None,
        }
    }

    pub fn exact_probability(&self, i: usize) -> Option<BigRational> {
        match &self.weights {
            Weights::Exact { weights, total } => Some(BigRational::new(
                BigInt::from(weights[i].clone()),
                BigInt::from(total.clone()),
            )),
            Weights::Scaled { .. } => None,
        }
    }

    pub fn probability(&self, i: usize) -> f64 {
        match &self.weights {
            Weights::Exact { weights, total } => ratio_f64(&weights[i], total),
            Weights::Scaled { weights, total } => weights[i] / total,
        }
    }

    pub fn probabilities(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.probability(i)).collect()
    }

    pub fn as_map(&self) -> BTreeMap<PartitionView, f64> {
        self.support
            .iter()
            .cloned()
            .zip(self.probabilities())
            .collect()
    }

    /// The distribution conditioned on `keep`.
    pub fn restrict(&self, keep: impl Fn(&PartitionView) -> bool) -> ExactDistribution {
        let idx: Vec<usize> = (0..self.len())
            .filter(|&i| keep(&self.support[i]))
            .collect();
        let support = idx.iter().map(|&i| self.support[i].clone()).collect();
        let weights = match &self.weights {
            Weights::Exact { weights, .. } => {
                let w: Vec<BigUint> = idx.iter().map(|&i| weights[i].clone()).collect();
                let total = w.iter().sum();
                Weights::Exact { weights: w, total }
            }
            Weights::Scaled { weights, .. } => {
                let w: Vec<f64> = idx.iter().map(|&i| weights[i]).collect();
                let total = w.iter().sum();
                Weights::Scaled { weights: w, total }
            }
        };
        ExactDistribution { support, weights }
    }

    /// Text table, one line per partition in canonical order:
    /// `partition<TAB>weight<TAB>probability`.
    pub fn to_table(&self) -> String {
        let mut out = String::from("# partition\tweight\tprobability\n");
        for (i, p) in self.support.iter().enumerate() {
            let w = match &self.weights {
                Weights::Exact { weights, .. } => weights[i].to_string(),
                Weights::Scaled { weights, .. } => format!("{:.17e}", weights[i]),
            };
            writeln!(out, "{p}\t{w}\t{:.12}", self.probability(i)).unwrap();
        }
        out
    }
}

/// `a / b` in floating point without overflowing for huge integers.
pub(crate) fn ratio_f64(a: &BigUint, b: &BigUint) -> f64 {
    let shift = b.bits().saturating_sub(1000);
    let (a, b) = (a >> shift, b >> shift);
    match (a.to_f64(), b.to_f64()) {
        (Some(x), Some(y)) if y > 0.0 => x / y,
        _ => f64::NAN,
    }
}

/// Spanning-tree counts of part masks, memoized across partitions.
#[derive(Default)]
pub(crate) struct TreeCounts {
    memo: HashMap<Vec<usize>, BigUint>,
}

impl TreeCounts {
    pub(crate) fn get(&mut self, g: &Graph, part: &[usize]) -> BigUint {
        if let Some(c) = self.memo.get(part) {
            return c.clone();
        }
        let c = count_in_subset(g, part).0;
        self.memo.insert(part.to_vec(), c.clone());
        c
    }
}

fn integer_exponent(c: f64) -> Option<u32> {
    (c >= 0.0 && c.fract() == 0.0 && c <= MAX_EXACT_EXPONENT).then_some(c as u32)
}

/// Weights over an explicit list of partitions.
pub fn distribution_over(
    g: &Graph,
    mut support: Vec<PartitionView>,
    c: f64,
) -> Result<ExactDistribution> {
    support.sort_unstable();
    support.dedup();
    if !(c >= 0.0 && c.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "bias exponent {c} must be finite and >= 0"
        )));
    }
    let mut counts = TreeCounts::default();
    let weights = match integer_exponent(c) {
        Some(ci) => {
            let w: Vec<BigUint> = support
                .iter()
                .map(|p| {
                    p.parts().iter().fold(BigUint::one(), |acc, part| {
                        acc * counts.get(g, part) * BigUint::from(part.len()).pow(ci)
                    })
                })
                .collect();
            let total = w.iter().sum();
            Weights::Exact { weights: w, total }
        }
        None => {
            let logs: Vec<f64> = support
                .iter()
                .map(|p| {
                    p.parts()
                        .iter()
                        .map(|part| {
                            let t = counts.get(g, part);
                            crate::spanning::ExactCount(t).ln() + c * (part.len() as f64).ln()
                        })
                        .sum()
                })
                .collect();
            let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let w: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
            let total = w.iter().sum();
            Weights::Scaled { weights: w, total }
        }
    };
    Ok(ExactDistribution { support, weights })
}

/// The size-biased spanning-tree distribution over connected `k`-partitions
/// (`c = 0` gives the plain spanning-tree distribution).
pub fn exact_distribution(
    g: &Graph,
    k: usize,
    c: f64,
    opts: EnumOptions,
) -> Result<ExactDistribution> {
    let support = enumerate_connected_partitions(g, k, opts)?;
    distribution_over(g, support, c)
}

/// The spanning-tree distribution restricted to balanced partitions.
pub fn balanced_distribution(g: &Graph, k: usize, opts: EnumOptions) -> Result<ExactDistribution> {
    let n = g.n();
    if k == 0 || !n.is_multiple_of(k) {
        return Err(Error::InvalidArgument(format!("{k} does not divide {n}")));
    }
    let support = enumerate_connected_partitions(g, k, opts.balanced(n / k))?;
    distribution_over(g, support, 0.0)
}

/// Balanced mass over total mass of the spanning-tree distribution.
pub fn fraction_balanced(g: &Graph, k: usize, opts: EnumOptions) -> Result<BigRational> {
    let n = g.n();
    if k == 0 || !n.is_multiple_of(k) {
        return Err(Error::InvalidArgument(format!("{k} does not divide {n}")));
    }
    let all = exact_distribution(
        g,
        k,
        0.0,
        EnumOptions {
            part_size: None,
            ..opts
        },
    )?;
    let total = all.exact_total().expect("integer exponent").clone();
    let balanced: BigUint = (0..all.len())
        .filter(|&i| all.support()[i].is_balanced())
        .map(|i| all.exact_weight(i).unwrap().clone())
        .sum();
    if total.is_zero() {
        return Err(Error::InvalidArgument(
            "graph has no connected k-partition".into(),
        ));
    }
    Ok(BigRational::new(
        BigInt::from(balanced),
        BigInt::from(total),
    ))
}

/// Total variation distance between two finite distributions given as
/// probability maps over a shared key space.
pub fn tv_distance<K: Ord>(p: &BTreeMap<K, f64>, q: &BTreeMap<K, f64>) -> f64 {
    let mut sum = 0.0;
    for (k, &pv) in p {
        sum += (pv - q.get(k).copied().unwrap_or(0.0)).abs();
    }
    for (k, &qv) in q {
        if !p.contains_key(k) {
            sum += qv.abs();
        }
    }
    sum / 2.0
}

/// Empirical distribution of a sample.
pub fn empirical<K: Ord>(samples: impl IntoIterator<Item = K>) -> BTreeMap<K, f64> {
    let mut counts: BTreeMap<K, u64> = BTreeMap::new();
    let mut total = 0u64;
    for s in samples {
        *counts.entry(s).or_insert(0) += 1;
        total += 1;
    }
    counts
        .into_iter()
        .map(|(k, c)| (k, c as f64 / total as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;
    use num_rational::Ratio;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn four_cycle_weights() {
        let g = graph::cycle(4).unwrap();
        let d = exact_distribution(&g, 2, 0.0, EnumOptions::default()).unwrap();
        assert_eq!(d.len(), 6);
        assert!((0..6).all(|i| d.exact_weight(i) == Some(&big(1))));
        assert_eq!(d.exact_total(), Some(&big(6)));
    }

    #[test]
    fn triangle_with_bias() {
        let g = graph::cycle(3).unwrap();
        let d = exact_distribution(&g, 2, 1.0, EnumOptions::default()).unwrap();
        assert!((0..3).all(|i| d.exact_weight(i) == Some(&big(2))));
        assert_eq!(d.exact_total(), Some(&big(6)));
    }

    #[test]
    fn fractions() {
        let one_third = BigRational::new(BigInt::from(1), BigInt::from(3));
        let e = EnumOptions::default();
        assert_eq!(
            fraction_balanced(&graph::cycle(4).unwrap(), 2, e).unwrap(),
            one_third
        );
        assert_eq!(
            fraction_balanced(&graph::grid(2, 2).unwrap(), 2, e).unwrap(),
            one_third
        );
        assert_eq!(
            fraction_balanced(&graph::path(4).unwrap(), 2, e).unwrap(),
            one_third
        );
        assert!(fraction_balanced(&graph::path(5).unwrap(), 2, e).is_err());
    }

    #[test]
    fn fractional_exponent_weights() {
        let g = graph::grid(2, 4).unwrap();
        let half = exact_distribution(&g, 2, 0.5, EnumOptions::default()).unwrap();
        assert!(matches!(half.weights(), Weights::Scaled { .. }));
        let exact = exact_distribution(&g, 2, 0.0, EnumOptions::default()).unwrap();
        // Tilt the exact c = 0 weights by sqrt(|P_1| |P_2|) and renormalize.
        let tilted: Vec<f64> = (0..exact.len())
            .map(|i| {
                let w = exact.exact_weight(i).unwrap().to_f64().unwrap();
                w * exact.support()[i]
                    .sizes()
                    .iter()
                    .map(|&s| (s as f64).sqrt())
                    .product::<f64>()
            })
            .collect();
        let z: f64 = tilted.iter().sum();
        for (i, t) in tilted.iter().enumerate() {
            assert!((half.probability(i) - t / z).abs() < 1e-14);
        }
    }

    #[test]
    fn tv_examples() {
        let uniform: BTreeMap<u8, f64> = [(0, 1.0 / 3.0), (1, 1.0 / 3.0), (2, 1.0 / 3.0)].into();
        let point: BTreeMap<u8, f64> = [(0, 1.0)].into();
        let other: BTreeMap<u8, f64> = [(7, 1.0)].into();
        assert_eq!(tv_distance(&uniform, &uniform), 0.0);
        assert!((tv_distance(&uniform, &point) - 2.0 / 3.0).abs() < 1e-15);
        assert!((tv_distance(&point, &uniform) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(tv_distance(&point, &other), 1.0);
        let e = empirical([1u8, 1, 2, 3]);
        assert_eq!(e[&1], 0.5);
    }

    #[test]
    fn restriction_and_table() {
        let g = graph::cycle(4).unwrap();
        let d = exact_distribution(&g, 2, 0.0, EnumOptions::default()).unwrap();
        let b = d.restrict(PartitionView::is_balanced);
        assert_eq!(b.len(), 2);
        assert_eq!(
            b.exact_probability(0),
            Some(Ratio::new(BigInt::from(1), BigInt::from(2)))
        );
        let t = d.to_table();
        assert_eq!(t.lines().count(), 7);
        assert!(t.lines().nth(1).unwrap().starts_with("0|1,2,3\t1\t0.1666"));
        assert_eq!(
            balanced_distribution(&g, 2, EnumOptions::default()).unwrap(),
            b
        );
    }
}
