//! Waveform text, VCD output and run configuration.

mod config;
mod vcd;
mod waveform;

pub use config::{RunConfig, SEED_ENV};
pub use vcd::emit_vcd;
pub use waveform::{emit_waveforms, parse_waveforms, Waveforms};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IoError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("time {ticks} ticks is not a finite decimal at resolution {resolution}")]
    NotRepresentable { ticks: i64, resolution: u64 },
    #[error("config: {0}")]
    Config(String),
}
