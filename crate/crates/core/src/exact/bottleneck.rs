use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use super::distribution::balanced_distribution;
use super::enumerate::EnumOptions;
use super::gaps::{band_state, gap_profile};
use crate::error::{Error, Result};
use crate::graph::{EdgeClass, Graph};

#[derive(Clone, Debug, PartialEq)]
pub struct Bottleneck {
    /// Balanced 3-partitions with a part containing no rung.
    pub c_states: usize,
    pub c_weight: BigUint,
    /// Weight of the band state with gaps at labels 0, n and 2n.
    pub a0_weight: BigUint,
    /// `c_weight / a0_weight`.
    pub ratio: BigRational,
}

impl Bottleneck {
    /// Lower bound `1 / (4 ratio)` on the mixing time: the ratio bounds the
    /// conductance from above.
    pub fn mixing_time_lower_bound(&self) -> f64 {
        use num_traits::ToPrimitive;
        1.0 / (4.0 * self.ratio.to_f64().unwrap_or(f64::INFINITY))
    }
}

/// Spanning-tree mass of the rung-deficient balanced 3-partitions of
/// `double_cycle(3n)` relative to the band state `A_0`.
pub fn bottleneck_ratio(g: &Graph, opts: EnumOptions) -> Result<Bottleneck> {
    let tags = g
        .edge_tags()
        .ok_or_else(|| Error::UnsupportedGraph("graph has no edge class tags".into()))?;
    let len = tags
        .iter()
        .filter(|t| t.class() == EdgeClass::LeftCycle)
        .count();
    if len == 0 || len % 3 != 0 || g.n() != 2 * len {
        return Err(Error::UnsupportedGraph(
            "expected a double cycle of length divisible by 3".into(),
        ));
    }
    let dist = balanced_distribution(g, 3, opts)?;
    let a0 = band_state(len / 3, 0);
    let a0_index = dist
        .index_of(&a0)
        .ok_or_else(|| Error::UnsupportedGraph("band state missing from the support".into()))?;
    let a0_weight = dist
        .exact_weight(a0_index)
        .expect("integer weights")
        .clone();
    let mut c_states = 0;
    let mut c_weight = BigUint::zero();
    for (i, p) in dist.support().iter().enumerate() {
        if gap_profile(g, p)?.in_c {
            c_states += 1;
            c_weight += dist.exact_weight(i).unwrap();
        }
    }
    let ratio = BigRational::new(
        BigInt::from(c_weight.clone()),
        BigInt::from(a0_weight.clone()),
    );
    Ok(Bottleneck {
        c_states,
        c_weight,
        a0_weight,
        ratio,
    })
}
