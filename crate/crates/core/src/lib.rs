//! Relational event modeling for signed bipartite statement sequences.
//!
//! The crate ingests date-stamped actor-belief statements, computes
//! time-decayed network statistics over the past event history, builds
//! stratified risk-set datasets, fits rate (conditional logit) and type
//! (logistic) models, and evaluates fit by generative simulation against
//! a uniform baseline. `oracle` holds deliberately naive reference
//! implementations used by the test suite.

pub mod corpus;
pub mod error;
pub mod inference;
pub mod netstats;
pub mod oracle;
pub mod report;
pub mod riskset;
pub mod simulate;
pub mod synth;

pub use corpus::{
    parse_corpus, split_burn_in, weekly_frequencies, ActorId, ActorRecord, ActorType, BeliefId,
    Clock, ClockMode, DebateCorpus, Stance, StatementEvent,
};
pub use error::{DataError, FitError, SimError, StatError};
pub use inference::{
    combined_log_likelihood, fit_conditional_logit, fit_logistic, ClogitStratum, Convergence,
    FitOptions, ModelFit,
};
pub use netstats::{HalfLife, PastIndex, SignMode, StatColumn, StatName, StatOptions};
pub use riskset::{
    build_rate_dataset, build_type_dataset, Combo, RateDataset, RateSpec, RiskMode,
    StandardizationScales, Standardization, TypeDataset, TypeSpec,
};
pub use simulate::{
    evaluate_gof, gof_match_rates, gof_timing_error, random_baseline, simulate_window, GofReport,
    HistoryMode, MatchTarget, RateModel, SimOutput, SimulationConfig, StanceMode, TypeModel,
};

/// Version string embedded in every output artifact.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
