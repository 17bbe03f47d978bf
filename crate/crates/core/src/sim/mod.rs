//! Seeded Monte-Carlo sweeps: configuration, trial execution, statistics
//! and CSV output.

mod config;
mod csv;
mod stats;
mod sweep;

pub use self::csv::{format_g, parse_csv, write_csv, write_csv_file, CsvRow, CSV_HEADER};
pub use config::{
    ChannelSpec, CodeFamily, CodeSpec, ExperimentConfig, Stage1Kind, Stage1Spec, StopSpec, WsdSpec,
    DEFAULT_CRC_EXPONENTS,
};
pub use stats::{wilson_interval, Z_95};
pub use sweep::{
    run_ml_sweep, run_sweep, stream_id, trial_input, Experiment, SweepRecord, TrialInput,
    TRIAL_BATCH,
};
