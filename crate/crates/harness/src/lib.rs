//! Convergence studies, limit checks and the `zakharov` command line on top
//! of `zakharov-core`.

pub mod cli;
pub mod config;
pub mod error;
pub mod invariants;
pub mod limit;
pub mod measure;
pub mod output;
pub mod soliton;
pub mod sweep;

pub use error::{HarnessError, Result};
pub use sweep::{run_sweep, ErrorRecord, SweepKind, SweepOutcome, SweepSpec};
