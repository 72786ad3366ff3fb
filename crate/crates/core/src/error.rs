use thiserror::Error;

/// Errors produced while reading and validating input files.
#[derive(Debug, Error)]
pub enum DataError {
    #[error("io error reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error in {path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },
    #[error("{path}: missing column `{column}`")]
    MissingColumn { path: String, column: String },
    #[error("{path} row {row}: malformed date `{value}`")]
    MalformedDate {
        path: String,
        row: usize,
        value: String,
    },
    #[error("{path} row {row}: invalid stance `{value}` (expected +1 or -1)")]
    InvalidStance {
        path: String,
        row: usize,
        value: String,
    },
    #[error("{path} row {row}: unknown actor type `{value}`")]
    InvalidActorType {
        path: String,
        row: usize,
        value: String,
    },
    #[error("{path} row {row}: invalid boolean `{value}` (expected 0 or 1)")]
    InvalidBool {
        path: String,
        row: usize,
        value: String,
    },
    #[error("{path} row {row}: duplicate actor id `{id}` in actor table")]
    DuplicateActor {
        path: String,
        row: usize,
        id: String,
    },
    #[error("{path} row {row}: actor `{id}` not present in actor table")]
    UnknownActor {
        path: String,
        row: usize,
        id: String,
    },
    #[error("{path} row {row}: is_government inconsistent with actor_type for `{id}`")]
    GovernmentFlagMismatch {
        path: String,
        row: usize,
        id: String,
    },
    #[error("statement file is empty")]
    EmptyCorpus,
    #[error("burn-in cutoff {cutoff} leaves an empty analysis period")]
    EmptyAnalysisPeriod { cutoff: chrono::NaiveDate },
    #[error("corpus needs at least 2 actors and 1 belief for estimation (got {actors} actors, {beliefs} beliefs)")]
    TooSmall { actors: usize, beliefs: usize },
}

/// Errors from statistic evaluation and dataset construction.
#[derive(Debug, Error)]
pub enum StatError {
    #[error("half-life must be positive (got {0})")]
    NonPositiveHalfLife(f64),
    #[error("unknown statistic `{0}`")]
    UnknownStatistic(String),
    #[error("statistic column `{0}` is constant; cannot standardize")]
    ConstantColumn(String),
    #[error("full-factorial risk set would have {rows} rows, above the limit {limit}")]
    FactorialTooLarge { rows: u64, limit: u64 },
    #[error("oracle guard exceeded: {0}")]
    OracleGuard(String),
    #[error(transparent)]
    Data(#[from] DataError),
}

/// Errors from model estimation.
#[derive(Debug, Error)]
pub enum FitError {
    #[error("no usable strata (every stratum lacks null rows)")]
    NoStrata,
    #[error("outcome column is constant")]
    ConstantOutcome,
    #[error("non-finite likelihood at iteration {iteration}")]
    NonFiniteLikelihood { iteration: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Errors from the simulation module.
#[derive(Debug, Error)]
pub enum SimError {
    #[error("simulation window start {0} is outside the analysis period")]
    WindowOutsideAnalysis(chrono::NaiveDate),
    #[error("window has no true event days")]
    EmptyWindow,
    #[error("rate fit and simulation config disagree: {0}")]
    ConfigMismatch(String),
}
