//! Verdicts on trajectories: front speeds, support spreading, subsolution
//! certificates, comparison and jump conditions.

mod comparison;
mod front;
mod rankine;
mod spreading;
mod subsolution;

pub use comparison::{comparison_suite, supersolution_check, ComparisonReport, PairOutcome, SupersolutionReport};
pub use front::{default_window, front_position, front_speed, FrontSpeedEstimate};
pub use rankine::{rankine_hugoniot_check, JumpSample, RankineHugoniotReport};
pub use spreading::{support_spreading_report, SpreadingReport, SpreadingRow};
pub use subsolution::{default_lambda_samples, subsolution_field, subsolution_rhs, subsolution_terms, verify_subsolution, SubsolutionCertificate};
