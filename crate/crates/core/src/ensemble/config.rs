use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::chains::{ChainParams, Variant, DEFAULT_RESAMPLE_CAP};
use crate::error::{Error, Result};
use crate::graph::{self, Graph};

/// Run configuration, read from TOML with `[graph]`, `[chain]` and
/// `[output]` tables.
///
/// ```toml
/// [graph]
/// generator = "grid"       # or: edge_list = "graph.txt"
/// params = [6, 6]
///
/// [chain]
/// variant = "forest_walk"  # or "recom"
/// k = 2
/// c = 0.0
/// seed = 7
/// burn_in = 1000
/// thin = 0                 # 0 means one step per graph edge
/// samples = 100
/// chains = 1               # independent chains, run in parallel
/// max_tries = 100000       # rejection sampling budget
///
/// [output]
/// samples = "samples.jsonl"
/// stats = "balance.csv"
/// render = "last.svg"
/// cell = 12
/// ```
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub graph: GraphSpec,
    #[serde(default)]
    pub chain: ChainSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub generator: Option<String>,
    #[serde(default)]
    pub params: Vec<usize>,
    pub edge_list: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChainSection {
    pub variant: Variant,
    pub k: usize,
    pub c: f64,
    pub seed: u64,
    pub resample_cap: usize,
    pub burn_in: u64,
    /// Steps between samples; 0 selects the edge count.
    pub thin: u64,
    pub samples: usize,
    pub chains: usize,
    pub max_tries: usize,
}

impl Default for ChainSection {
    fn default() -> Self {
        ChainSection {
            variant: Variant::ForestWalk,
            k: 2,
            c: 0.0,
            seed: 0,
            resample_cap: DEFAULT_RESAMPLE_CAP,
            burn_in: 0,
            thin: 0,
            samples: 1,
            chains: 1,
            max_tries: 100_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub samples: Option<PathBuf>,
    pub stats: Option<PathBuf>,
    /// Image of the last sample; `.ppm` or `.svg`.
    pub render: Option<PathBuf>,
    /// Pixels per vertex cell.
    pub cell: u32,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            samples: None,
            stats: None,
            render: None,
            cell: 10,
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    /// Structural checks that need no graph.
    pub fn check(&self) -> Result<()> {
        match (&self.graph.generator, &self.graph.edge_list) {
            (Some(_), None) | (None, Some(_)) => {}
            _ => {
                return Err(Error::Config(
                    "[graph] needs exactly one of `generator` and `edge_list`".into(),
                ))
            }
        }
        if self.chain.samples == 0 {
            return Err(Error::Config("`samples` must be at least 1".into()));
        }
        if self.chain.chains == 0 {
            return Err(Error::Config("`chains` must be at least 1".into()));
        }
        if self.output.cell == 0 {
            return Err(Error::Config("`cell` must be positive".into()));
        }
        Ok(())
    }

    pub fn build_graph(&self) -> Result<Arc<Graph>> {
        let g = match (&self.graph.generator, &self.graph.edge_list) {
            (Some(name), _) => graph::from_generator(name, &self.graph.params)?,
            (None, Some(path)) => Graph::from_edge_list(&std::fs::read_to_string(path)?)?,
            (None, None) => return Err(Error::Config("no graph given".into())),
        };
        Ok(Arc::new(g))
    }

    /// Chain parameters with the step budget left at 0; samplers drive the
    /// chain step by step.
    pub fn chain_params(&self) -> ChainParams {
        ChainParams {
            k: self.chain.k,
            c: self.chain.c,
            variant: self.chain.variant,
            seed: self.chain.seed,
            steps: 0,
            resample_cap: self.chain.resample_cap,
        }
    }

    pub fn thin_for(&self, g: &Graph) -> u64 {
        if self.chain.thin == 0 {
            g.m().max(1) as u64
        } else {
            self.chain.thin
        }
    }
}
