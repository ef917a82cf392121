use std::io::Write;

use super::StepRecord;
use crate::error::Result;
use crate::exact::gaps::profile_of;
use crate::forest::ForestState;
use crate::spanning::partition_log_weight;

/// Receives the chain state after every step (and once before the first,
/// with no record).
pub trait Observer {
    fn observe(
        &mut self,
        step: u64,
        state: &ForestState,
        record: Option<&StepRecord>,
    ) -> Result<()>;
}

/// Keeps every step record, for replay.
#[derive(Clone, Debug, Default)]
pub struct Trajectory {
    pub records: Vec<StepRecord>,
}

impl Observer for Trajectory {
    fn observe(
        &mut self,
        _step: u64,
        _state: &ForestState,
        record: Option<&StepRecord>,
    ) -> Result<()> {
        if let Some(r) = record {
            self.records.push(r.clone());
        }
        Ok(())
    }
}

/// Writes per-state statistics as tab-separated `step name value` lines
/// every `thin` steps.
///
/// Statistics, in output order:
/// - `sizes`: component sizes, ascending, comma separated
/// - `imbalance`: largest over smallest component size
/// - `phi`, `avg_gap`: rung count and mean gap label, for tagged graphs
///   (`avg_gap` is `p/q` or `none`)
/// - `log_weight`: log of the partition weight at the configured exponent,
///   when enabled
pub struct StatsWriter<W: Write> {
    out: W,
    thin: u64,
    log_weight_c: Option<f64>,
}

impl<W: Write> StatsWriter<W> {
    pub fn new(out: W, thin: u64) -> Self {
        StatsWriter {
            out,
            thin: thin.max(1),
            log_weight_c: None,
        }
    }

    pub fn with_log_weight(mut self, c: f64) -> Self {
        self.log_weight_c = Some(c);
        self
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

impl<W: Write> Observer for StatsWriter<W> {
    fn observe(
        &mut self,
        step: u64,
        state: &ForestState,
        _record: Option<&StepRecord>,
    ) -> Result<()> {
        if !step.is_multiple_of(self.thin) {
            return Ok(());
        }
        let mut sizes = state.comp_sizes().to_vec();
        sizes.sort_unstable();
        let joined: Vec<String> = sizes.iter().map(|s| s.to_string()).collect();
        writeln!(self.out, "{step}\tsizes\t{}", joined.join(","))?;
        let ratio = *sizes.last().unwrap() as f64 / sizes[0] as f64;
        writeln!(self.out, "{step}\timbalance\t{ratio}")?;
        let g = state.graph();
        if let Some(tags) = g.edge_tags() {
            let labels = state.labels();
            let p = profile_of(g, tags, &labels.comp_of, labels.comp_size.len());
            writeln!(self.out, "{step}\tphi\t{}", p.phi)?;
            match p.avg_gap_position {
                Some(r) => writeln!(self.out, "{step}\tavg_gap\t{}/{}", r.numer(), r.denom())?,
                None => writeln!(self.out, "{step}\tavg_gap\tnone")?,
            }
        }
        if let Some(c) = self.log_weight_c {
            let w = partition_log_weight(g, &state.partition(), c)?;
            writeln!(self.out, "{step}\tlog_weight\t{}", w.value())?;
        }
        Ok(())
    }
}
