use std::collections::BTreeMap;
use std::sync::Arc;

use crate::chains::{Chain, ChainParams, Variant};
use crate::error::{Error, Result};
use crate::exact::{
    balanced_distribution, bottleneck_ratio, empirical, exact_distribution, gap_profile,
    rotation_class, rotation_orbit, tv_distance, EnumOptions, ExactDistribution,
};
use crate::forest::ForestState;
use crate::graph::{EdgeClass, Graph};
use crate::partition::PartitionView;

#[derive(Clone, Debug, PartialEq)]
pub struct MixingRow {
    pub steps: u64,
    /// Distance between the empirical law over trials and the exact target.
    pub tv: Option<f64>,
    /// On double cycles: observed share of the start's rotation class minus
    /// the most any rotation-invariant target can give it.
    pub tv_lower_bound: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MixingReport {
    pub rows: Vec<MixingRow>,
    pub trials: usize,
    /// Support size of the exact target, when it was enumerated.
    pub support: Option<usize>,
    /// Lower bound on the mixing time from the double-cycle bottleneck.
    pub conductance_bound: Option<f64>,
}

impl MixingReport {
    pub fn to_csv(&self) -> String {
        let cell = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        let mut out = String::from("steps,tv,tv_lower_bound\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{}\n",
                r.steps,
                cell(r.tv),
                cell(r.tv_lower_bound)
            ));
        }
        out
    }
}

/// Cycle length of a double cycle, if `g` is one.
fn cycle_length(g: &Graph) -> Option<usize> {
    let tags = g.edge_tags()?;
    let len = tags
        .iter()
        .filter(|t| t.class() == EdgeClass::LeftCycle)
        .count();
    (len > 0 && g.n() == 2 * len).then_some(len)
}

/// Target of the chain: the balanced spanning-tree distribution for ReCom,
/// the `c`-biased one for the forest walk.
fn reference(g: &Graph, params: &ChainParams, opts: EnumOptions) -> Result<ExactDistribution> {
    match params.variant {
        Variant::Recom => balanced_distribution(g, params.k, opts),
        Variant::ForestWalk => exact_distribution(g, params.k, params.c, opts),
    }
}

/// Runs `trials` independent copies of the chain from `initial` and reports,
/// at each step count of `steps`, the distance of the trials' empirical law
/// to the exact target.
///
/// Graphs too large to enumerate are accepted when they are double cycles;
/// their rows carry only the rotation lower bound.
pub fn mixing_report(
    g: &Arc<Graph>,
    params: &ChainParams,
    initial: &ForestState,
    steps: &[u64],
    trials: usize,
    opts: EnumOptions,
) -> Result<MixingReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument(
            "mixing report needs at least one trial".into(),
        ));
    }
    let mut grid = steps.to_vec();
    grid.sort_unstable();
    grid.dedup();
    let len = cycle_length(g);
    let target = match reference(g, params, opts) {
        Ok(d) => Some(d),
        Err(Error::SizeGuard { .. }) if len.is_some() => None,
        Err(e) => return Err(e),
    };
    let conductance_bound = match (target.is_some(), len, params.variant, params.k) {
        (true, Some(l), Variant::Recom, 3) if l % 3 == 0 => {
            Some(bottleneck_ratio(g, opts)?.mixing_time_lower_bound())
        }
        _ => None,
    };

    let run = |trial: usize| -> Result<Vec<PartitionView>> {
        let mut chain = Chain::with_stream(params.clone(), initial.clone(), trial as u64)?;
        let mut out = Vec::with_capacity(grid.len());
        for &s in &grid {
            while chain.steps_taken() < s {
                chain.step()?;
            }
            out.push(chain.state().partition());
        }
        Ok(out)
    };
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(trials);
    let results: Vec<Result<Vec<PartitionView>>> = std::thread::scope(|s| {
        let run = &run;
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                s.spawn(move || {
                    (w..trials)
                        .step_by(workers)
                        .map(|t| (t, run(t)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        let mut all: Vec<_> = handles
            .into_iter()
            .flat_map(|h| h.join().expect("trial thread panicked"))
            .collect();
        all.sort_by_key(|(t, _)| *t);
        all.into_iter().map(|(_, r)| r).collect()
    });
    let per_trial: Vec<Vec<PartitionView>> = results.into_iter().collect::<Result<_>>()?;

    let target_map: Option<BTreeMap<PartitionView, f64>> = target.as_ref().map(|d| d.as_map());
    let start_class = match len {
        Some(l) => Some(rotation_class(&gap_profile(g, &initial.partition())?, l)),
        None => None,
    };
    let mut rows = Vec::with_capacity(grid.len());
    for (i, &s) in grid.iter().enumerate() {
        let at_step = per_trial.iter().map(|t| &t[i]);
        let tv = target_map
            .as_ref()
            .map(|q| tv_distance(&empirical(at_step.clone().cloned()), q));
        let tv_lower_bound = match (start_class, len) {
            (Some(class), Some(l)) => {
                let mut hits = 0usize;
                for p in at_step {
                    hits += (rotation_class(&gap_profile(g, p)?, l) == class) as usize;
                }
                Some(hits as f64 / trials as f64 - 1.0 / rotation_orbit(class, l) as f64)
            }
            _ => None,
        };
        rows.push(MixingRow {
            steps: s,
            tv,
            tv_lower_bound,
        });
    }
    Ok(MixingReport {
        rows,
        trials,
        support: target.map(|d| d.len()),
        conductance_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::chain_rng;
    use crate::chains::initial_forest_state;
    use crate::exact::band_state;
    use crate::graph;

    #[test]
    fn step_zero_is_a_point_mass() {
        let g = Arc::new(graph::grid(2, 3).unwrap());
        let init = initial_forest_state(&g, 2, &mut chain_rng(1, 0)).unwrap();
        let params = ChainParams::default();
        let report = mixing_report(&g, &params, &init, &[0], 5, EnumOptions::default()).unwrap();
        let exact = exact_distribution(&g, 2, 0.0, EnumOptions::default()).unwrap();
        let p0 = exact.probability(exact.index_of(&init.partition()).unwrap());
        assert!((report.rows[0].tv.unwrap() - (1.0 - p0)).abs() < 1e-12);
        assert_eq!(report.rows[0].tv_lower_bound, None);
        assert_eq!(report.conductance_bound, None);
    }

    #[test]
    fn double_cycle_rows_carry_bounds() {
        let g = Arc::new(graph::double_cycle(9).unwrap());
        let a0 = band_state(3, 0);
        let init = ForestState::from_partition(g.clone(), &a0).unwrap();
        let params = ChainParams {
            k: 3,
            variant: Variant::Recom,
            seed: 2,
            ..ChainParams::default()
        };
        let report =
            mixing_report(&g, &params, &init, &[0, 50], 4, EnumOptions::default()).unwrap();
        // A_0 has six gaps summing to 0 mod 9: orbit 3.
        assert!((report.rows[0].tv_lower_bound.unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!(report.conductance_bound.unwrap() > 0.0);
        assert!(report.to_csv().starts_with("steps,tv,tv_lower_bound\n0,"));
    }

    #[test]
    fn large_double_cycle_skips_the_exact_target() {
        let g = Arc::new(graph::double_cycle(30).unwrap());
        let init = ForestState::from_partition(g.clone(), &band_state(10, 0)).unwrap();
        let params = ChainParams {
            k: 3,
            variant: Variant::Recom,
            ..ChainParams::default()
        };
        let report =
            mixing_report(&g, &params, &init, &[0, 10], 2, EnumOptions::default()).unwrap();
        assert_eq!(report.support, None);
        assert!(report
            .rows
            .iter()
            .all(|r| r.tv.is_none() && r.tv_lower_bound.is_some()));
        let grid = Arc::new(graph::grid(5, 5).unwrap());
        let init = initial_forest_state(&grid, 2, &mut chain_rng(0, 0)).unwrap();
        assert!(matches!(
            mixing_report(
                &grid,
                &ChainParams::default(),
                &init,
                &[0],
                1,
                EnumOptions::default()
            ),
            Err(Error::SizeGuard { .. })
        ));
    }
}
