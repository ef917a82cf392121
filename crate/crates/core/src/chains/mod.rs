//! ReCom and the forest walk, their initial states, and trajectory running.

mod forest_walk;
mod observe;
mod recom;

pub use forest_walk::{
    forest_walk_step, initial_forest_state, removal_candidates, JoinCandidate, Removal,
};
pub use observe::{Observer, StatsWriter, Trajectory};
pub use recom::{initial_balanced_state, recom_step, DEFAULT_INIT_ATTEMPTS};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forest::ForestState;
use crate::graph::EdgeId;

pub const DEFAULT_RESAMPLE_CAP: usize = 10_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Recom,
    #[default]
    ForestWalk,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChainParams {
    pub k: usize,
    /// Bias exponent; ignored by ReCom.
    pub c: f64,
    pub variant: Variant,
    pub seed: u64,
    pub steps: u64,
    pub resample_cap: usize,
}

impl Default for ChainParams {
    fn default() -> Self {
        ChainParams {
            k: 2,
            c: 0.0,
            variant: Variant::ForestWalk,
            seed: 0,
            steps: 0,
            resample_cap: DEFAULT_RESAMPLE_CAP,
        }
    }
}

impl ChainParams {
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.k < 2 || self.k > n {
            return Err(Error::InvalidArgument(format!(
                "k = {} must lie in 2..={n}",
                self.k
            )));
        }
        if !(self.c >= 0.0 && self.c.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "bias exponent {} must be finite and >= 0",
                self.c
            )));
        }
        if self.variant == Variant::Recom && !n.is_multiple_of(self.k) {
            return Err(Error::InvalidArgument(format!(
                "ReCom needs k | n, got k = {} and n = {n}",
                self.k
            )));
        }
        if self.resample_cap == 0 {
            return Err(Error::InvalidArgument(
                "resample_cap must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// The random source for chain `stream` of a run seeded with `seed`.
pub fn chain_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MoveKind {
    Recom {
        /// Component ids (before the move) of the two merged parts.
        merged: (usize, usize),
        boundary_edge: EdgeId,
        cut: Vec<EdgeId>,
        linked: Vec<EdgeId>,
        resamples: usize,
    },
    ForestWalk {
        added: EdgeId,
        removed: EdgeId,
        lazy: bool,
    },
    /// No move was possible (the host graph has no edge outside the forest).
    Idle,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub step: u64,
    pub kind: MoveKind,
    /// Sizes of the components the move touched, after the move.
    pub sizes: Vec<usize>,
}

impl StepRecord {
    /// Replays the move on `state`.
    pub fn apply(&self, state: &mut ForestState) -> Result<()> {
        match &self.kind {
            MoveKind::Recom { cut, linked, .. } => {
                for &e in cut {
                    state.cut(e)?;
                }
                for &e in linked {
                    state.link(e)?;
                }
            }
            MoveKind::ForestWalk {
                added,
                removed,
                lazy,
            } => {
                if !lazy {
                    state.cut(*removed)?;
                    state.link(*added)?;
                }
            }
            MoveKind::Idle => {}
        }
        Ok(())
    }
}

/// A running chain: state, parameters and its private random stream.
#[derive(Clone, Debug)]
pub struct Chain {
    state: ForestState,
    params: ChainParams,
    rng: ChaCha8Rng,
    step: u64,
}

impl Chain {
    pub fn new(params: ChainParams, initial: ForestState) -> Result<Self> {
        Self::with_stream(params, initial, 0)
    }

    pub fn with_stream(params: ChainParams, initial: ForestState, stream: u64) -> Result<Self> {
        params.validate(initial.n())?;
        if initial.k() != params.k {
            return Err(Error::InvalidArgument(format!(
                "initial state has {} components, expected {}",
                initial.k(),
                params.k
            )));
        }
        if params.variant == Variant::Recom {
            let sizes = initial.comp_sizes();
            if sizes.iter().any(|&s| s != sizes[0]) {
                return Err(Error::InvalidArgument(
                    "ReCom needs a balanced initial state".into(),
                ));
            }
        }
        let rng = chain_rng(params.seed, stream);
        Ok(Chain {
            state: initial,
            params,
            rng,
            step: 0,
        })
    }

    pub fn step(&mut self) -> Result<StepRecord> {
        let mut rec = match self.params.variant {
            Variant::Recom => recom_step(&mut self.state, &self.params, &mut self.rng)?,
            Variant::ForestWalk => forest_walk_step(&mut self.state, &self.params, &mut self.rng),
        };
        self.step += 1;
        rec.step = self.step;
        Ok(rec)
    }

    pub fn state(&self) -> &ForestState {
        &self.state
    }

    pub fn params(&self) -> &ChainParams {
        &self.params
    }

    pub fn steps_taken(&self) -> u64 {
        self.step
    }

    pub fn into_state(self) -> ForestState {
        self.state
    }
}

/// Runs `params.steps` steps from `initial`, feeding every observer the
/// initial state (with no record) and then each post-step state.
pub fn run_chain(
    params: &ChainParams,
    initial: ForestState,
    observers: &mut [&mut dyn Observer],
) -> Result<ForestState> {
    let mut chain = Chain::new(params.clone(), initial)?;
    for obs in observers.iter_mut() {
        obs.observe(0, chain.state(), None)?;
    }
    for _ in 0..params.steps {
        let rec = chain.step()?;
        for obs in observers.iter_mut() {
            obs.observe(rec.step, chain.state(), Some(&rec))?;
        }
    }
    Ok(chain.into_state())
}
