use std::io::Write;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use crate::chains::{
    chain_rng, initial_balanced_state, initial_forest_state, Chain, Variant, DEFAULT_INIT_ATTEMPTS,
};
use crate::error::{Error, Result};
use crate::exact::gap_profile;
use crate::forest::ForestState;
use crate::graph::Graph;
use crate::partition::PartitionView;
use crate::spanning::partition_log_weight;
use crate::stats::wilson_interval;

/// One sampled partition. Serializes as a JSON object with keys in field
/// order; `phi` and `avg_gap` appear only for tagged graphs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleRecord {
    pub index: usize,
    /// Chain step the sample was taken at.
    pub step: u64,
    /// Canonical part label of every vertex.
    pub assignment: Vec<usize>,
    /// Part sizes in label order.
    pub sizes: Vec<usize>,
    /// Log of the product of the parts' spanning-tree counts.
    pub log_weight: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<usize>,
    /// Mean gap label as `p/q`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub avg_gap: Option<String>,
}

impl EnsembleRecord {
    pub fn from_state(index: usize, step: u64, state: &ForestState) -> Result<Self> {
        let g = state.graph();
        let p = state.partition();
        let log_weight = partition_log_weight(g, &p, 0.0)?.value();
        let (phi, avg_gap) = match g.edge_tags() {
            Some(_) => {
                let prof = gap_profile(g, &p)?;
                let avg = prof
                    .avg_gap_position
                    .map(|r| format!("{}/{}", r.numer(), r.denom()));
                (Some(prof.phi), avg)
            }
            None => (None, None),
        };
        Ok(EnsembleRecord {
            index,
            step,
            assignment: p.assignment(),
            sizes: p.sizes(),
            log_weight,
            phi,
            avg_gap,
        })
    }

    pub fn partition(&self) -> PartitionView {
        PartitionView::from_assignment(&self.assignment)
    }

    /// Largest over smallest part size.
    pub fn imbalance_ratio(&self) -> f64 {
        let max = *self.sizes.iter().max().unwrap_or(&1);
        let min = *self.sizes.iter().min().unwrap_or(&1);
        max as f64 / min as f64
    }

    /// The record describes a connected `k`-partition of `g`.
    pub fn validate(&self, g: &Graph, k: usize) -> Result<()> {
        let p = self.partition();
        if p.n() != g.n() || p.k() != k || !p.parts_connected(g) || p.sizes() != self.sizes {
            return Err(Error::InvalidArgument(format!(
                "record {} is not a connected {k}-partition",
                self.index
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }
}

pub fn write_records<W: Write>(records: &[EnsembleRecord], mut out: W) -> Result<()> {
    for r in records {
        writeln!(out, "{}", r.to_json())?;
    }
    Ok(())
}

fn initial_state(g: &Arc<Graph>, cfg: &RunConfig, worker: u64) -> Result<ForestState> {
    let mut rng = chain_rng(cfg.chain.seed, 2 * worker + 1);
    match cfg.chain.variant {
        Variant::Recom => initial_balanced_state(g, cfg.chain.k, DEFAULT_INIT_ATTEMPTS, &mut rng),
        Variant::ForestWalk => initial_forest_state(g, cfg.chain.k, &mut rng),
    }
}

fn start_chain(g: &Arc<Graph>, cfg: &RunConfig, worker: u64) -> Result<Chain> {
    let params = cfg.chain_params();
    params.validate(g.n())?;
    let init = initial_state(g, cfg, worker)?;
    Chain::with_stream(params, init, 2 * worker)
}

fn advance(chain: &mut Chain, steps: u64, sample: usize) -> Result<()> {
    for _ in 0..steps {
        chain.step().map_err(|e| Error::Sample {
            sample,
            source: Box::new(e),
        })?;
    }
    Ok(())
}

/// Draws `samples` records: chain `j` of `chains` produces the samples with
/// index `j mod chains`, one every `thin` steps after `burn_in`. Chains run
/// on separate threads with separate random streams; the output is ordered
/// by index and does not depend on scheduling.
pub fn sample_ensemble(cfg: &RunConfig, g: &Arc<Graph>) -> Result<Vec<EnsembleRecord>> {
    cfg.check()?;
    let total = cfg.chain.samples;
    let workers = cfg.chain.chains.min(total);
    let thin = cfg.thin_for(g);
    let run = |worker: usize| -> Result<Vec<EnsembleRecord>> {
        let mut chain = start_chain(g, cfg, worker as u64)?;
        let mut out = Vec::new();
        let mut index = worker;
        advance(&mut chain, cfg.chain.burn_in, index)?;
        loop {
            out.push(EnsembleRecord::from_state(
                index,
                chain.steps_taken(),
                chain.state(),
            )?);
            index += workers;
            if index >= total {
                return Ok(out);
            }
            advance(&mut chain, thin, index)?;
        }
    };
    let per_worker: Vec<Result<Vec<EnsembleRecord>>> = if workers == 1 {
        vec![run(0)]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..workers).map(|w| s.spawn(move || run(w))).collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("sampling thread panicked"))
                .collect()
        })
    };
    let mut records = Vec::with_capacity(total);
    for r in per_worker {
        records.extend(r?);
    }
    records.sort_by_key(|r| r.index);
    Ok(records)
}

#[derive(Clone, Debug)]
pub struct RejectionReport {
    /// Accepted (balanced) samples, re-indexed from 0.
    pub records: Vec<EnsembleRecord>,
    pub tries: usize,
    pub accepted: usize,
    /// 95% Wilson interval for the acceptance rate.
    pub interval: (f64, f64),
}

impl RejectionReport {
    pub fn rate(&self) -> f64 {
        self.accepted as f64 / self.tries as f64
    }

    pub fn standard_error(&self) -> f64 {
        let p = self.rate();
        (p * (1.0 - p) / self.tries as f64).sqrt()
    }
}

/// Runs the forest walk and keeps only exactly balanced samples, one try
/// every `thin` steps after `burn_in`, until `samples` are accepted or
/// `max_tries` are spent.
pub fn rejection_sample_balanced(cfg: &RunConfig, g: &Arc<Graph>) -> Result<RejectionReport> {
    cfg.check()?;
    let k = cfg.chain.k;
    if k == 0 || !g.n().is_multiple_of(k) {
        return Err(Error::InvalidArgument(format!(
            "balanced sampling needs k | n, got k = {k} and n = {}",
            g.n()
        )));
    }
    if cfg.chain.variant != Variant::ForestWalk {
        return Err(Error::InvalidArgument(
            "rejection sampling runs the forest walk".into(),
        ));
    }
    let size = g.n() / k;
    let thin = cfg.thin_for(g);
    let mut chain = start_chain(g, cfg, 0)?;
    advance(&mut chain, cfg.chain.burn_in, 0)?;
    let mut records = Vec::new();
    let mut tries = 0;
    while records.len() < cfg.chain.samples && tries < cfg.chain.max_tries {
        if tries > 0 {
            advance(&mut chain, thin, records.len())?;
        }
        tries += 1;
        if chain.state().comp_sizes().iter().all(|&s| s == size) {
            records.push(EnsembleRecord::from_state(
                records.len(),
                chain.steps_taken(),
                chain.state(),
            )?);
        }
    }
    let accepted = records.len();
    let interval = wilson_interval(accepted as u64, tries as u64, 0.95);
    if accepted == 0 {
        return Err(Error::BudgetExhausted {
            tries,
            upper_bound: interval.1,
        });
    }
    Ok(RejectionReport {
        records,
        tries,
        accepted,
        interval,
    })
}
