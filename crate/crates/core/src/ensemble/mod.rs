//! Ensemble generation, rejection sampling, diagnostics and rendering.

mod config;
mod mixing;
mod profile;
mod render;
mod sample;

pub use config::{ChainSection, GraphSpec, OutputSection, RunConfig};
pub use mixing::{mixing_report, MixingReport, MixingRow};
pub use profile::{balance_profile, BalanceProfile};
pub use render::{render_partition, render_ppm, render_svg, PALETTE};
pub use sample::{
    rejection_sample_balanced, sample_ensemble, write_records, EnsembleRecord, RejectionReport,
};
