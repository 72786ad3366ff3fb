//! Declarative run configuration. One TOML file drives every subcommand;
//! command-line flags only override individual keys.

use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use rem_core::corpus::ClockMode;
use rem_core::netstats::{HalfLife, StatColumn, StatOptions};
use rem_core::riskset::{PeriodDummy, RateSpec, RiskMode, Standardization, TypeSpec};
use rem_core::simulate::{HistoryMode, SimulationConfig, StanceMode};

use crate::CliError;

/// Environment variable consulted when `--config` is absent.
pub const CONFIG_ENV: &str = "REM_CONFIG";

fn default_factorial_limit() -> u64 {
    2_000_000
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputsConfig {
    pub statements: PathBuf,
    pub actors: PathBuf,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    /// Burn-in cutoff: events before this date only seed the network.
    pub cutoff: NaiveDate,
    #[serde(default = "default_clock")]
    pub clock: ClockMode,
    /// Half-life in clock units; `half_lives` runs a sweep instead.
    #[serde(default)]
    pub half_life: Option<f64>,
    #[serde(default)]
    pub half_lives: Vec<f64>,
    #[serde(default)]
    pub standardization: Standardization,
    #[serde(default)]
    pub risk_mode: RiskMode,
    #[serde(default = "default_factorial_limit")]
    pub factorial_row_limit: u64,
    #[serde(default)]
    pub literal_index_sets: bool,
    /// Rate-model statistic columns; empty means the default main set.
    #[serde(default)]
    pub rate_columns: Vec<String>,
    /// Type-model statistic columns; empty means the signed-split set.
    #[serde(default)]
    pub type_columns: Vec<String>,
    /// Columns interacted with the government dummy.
    #[serde(default)]
    pub interactions: Vec<String>,
    #[serde(default = "default_true")]
    pub government_dummy: bool,
    #[serde(default = "default_true")]
    pub monday_dummy: bool,
    #[serde(default)]
    pub period_dummies: Vec<PeriodDummyConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodDummyConfig {
    pub name: String,
    pub start: NaiveDate,
    pub end: NaiveDate,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSection {
    pub window_start: NaiveDate,
    pub n_event_days: usize,
    pub n_replications: usize,
    #[serde(default)]
    pub history: HistoryMode,
    #[serde(default)]
    pub stance: StanceMode,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub seed: u64,
    /// 0 lets the thread pool size itself; 1 is the reference mode.
    #[serde(default)]
    pub threads: usize,
    pub output_dir: PathBuf,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub inputs: InputsConfig,
    pub analysis: AnalysisConfig,
    #[serde(default)]
    pub simulation: Option<SimulationSection>,
    pub run: RunSection,
}

/// Flag overrides applied on top of the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub half_life: Option<f64>,
    pub cutoff: Option<NaiveDate>,
    pub output_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<(RunConfig, String), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let config: RunConfig = toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))?;
        config.validate()?;
        Ok((config, text))
    }

    pub fn apply_overrides(&mut self, ov: &Overrides) {
        if let Some(seed) = ov.seed {
            self.run.seed = seed;
        }
        if let Some(threads) = ov.threads {
            self.run.threads = threads;
        }
        if let Some(h) = ov.half_life {
            self.analysis.half_life = Some(h);
            self.analysis.half_lives.clear();
        }
        if let Some(cutoff) = ov.cutoff {
            self.analysis.cutoff = cutoff;
        }
        if let Some(dir) = &ov.output_dir {
            self.run.output_dir = dir.clone();
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        for (label, path) in [
            ("statements", &self.inputs.statements),
            ("actors", &self.inputs.actors),
        ] {
            if !path.exists() {
                return Err(CliError::Usage(format!(
                    "{label} file {} does not exist",
                    path.display()
                )));
            }
        }
        for &h in self
            .analysis
            .half_life
            .iter()
            .chain(&self.analysis.half_lives)
        {
            if !(h > 0.0 && h.is_finite()) {
                return Err(CliError::Usage(format!("half-life must be positive, got {h}")));
            }
        }
        if self.analysis.half_life.is_none() && self.analysis.half_lives.is_empty() {
            return Err(CliError::Usage(
                "set analysis.half_life or analysis.half_lives".into(),
            ));
        }
        if let Some(sim) = &self.simulation {
            if sim.n_event_days == 0 || sim.n_replications == 0 {
                return Err(CliError::Usage(
                    "simulation needs n_event_days >= 1 and n_replications >= 1".into(),
                ));
            }
        }
        Ok(())
    }

    /// The half-lives this run covers: the sweep list, or the single value.
    pub fn half_life_values(&self) -> Vec<f64> {
        if self.analysis.half_lives.is_empty() {
            vec![self.analysis.half_life.expect("validated")]
        } else {
            self.analysis.half_lives.clone()
        }
    }

    pub fn stat_options(&self) -> StatOptions {
        StatOptions {
            literal_index_sets: self.analysis.literal_index_sets,
        }
    }

    fn parse_columns(names: &[String]) -> Result<Vec<StatColumn>, CliError> {
        names
            .iter()
            .map(|n| {
                n.parse::<StatColumn>()
                    .map_err(|e| CliError::Usage(e.to_string()))
            })
            .collect()
    }

    pub fn rate_spec(&self, half_life: f64) -> Result<RateSpec, CliError> {
        let h = HalfLife::new(half_life).map_err(|e| CliError::Usage(e.to_string()))?;
        let mut spec = RateSpec::main_model(self.analysis.cutoff, h);
        spec.stat_options = self.stat_options();
        spec.standardization = self.analysis.standardization;
        spec.risk_mode = self.analysis.risk_mode;
        spec.factorial_row_limit = self.analysis.factorial_row_limit;
        spec.government_dummy = self.analysis.government_dummy;
        spec.monday_dummy = self.analysis.monday_dummy;
        spec.period_dummies = self
            .analysis
            .period_dummies
            .iter()
            .map(|p| PeriodDummy {
                name: p.name.clone(),
                start: p.start,
                end: p.end,
            })
            .collect();
        if !self.analysis.rate_columns.is_empty() {
            spec.columns = Self::parse_columns(&self.analysis.rate_columns)?;
        }
        if !self.analysis.interactions.is_empty() {
            spec.interactions = Self::parse_columns(&self.analysis.interactions)?;
        }
        if self.analysis.interactions.is_empty() && !self.analysis.rate_columns.is_empty() {
            // custom column set without an explicit interaction list: none
            spec.interactions.clear();
        }
        for c in &spec.interactions {
            if !spec.columns.contains(c) {
                return Err(CliError::Usage(format!(
                    "interaction column {c} is not among the rate columns"
                )));
            }
        }
        Ok(spec)
    }

    pub fn type_spec(&self, half_life: f64) -> Result<TypeSpec, CliError> {
        let h = HalfLife::new(half_life).map_err(|e| CliError::Usage(e.to_string()))?;
        let mut spec = TypeSpec::main_model(self.analysis.cutoff, h);
        spec.stat_options = self.stat_options();
        spec.standardization = self.analysis.standardization;
        if !self.analysis.type_columns.is_empty() {
            spec.columns = Self::parse_columns(&self.analysis.type_columns)?;
        }
        Ok(spec)
    }

    pub fn simulation_config(&self) -> Result<SimulationConfig, CliError> {
        let sim = self
            .simulation
            .as_ref()
            .ok_or_else(|| CliError::Usage("config has no [simulation] section".into()))?;
        Ok(SimulationConfig {
            window_start: sim.window_start,
            n_event_days: sim.n_event_days,
            n_replications: sim.n_replications,
            seed: self.run.seed,
            history: sim.history,
            stance: sim.stance,
        })
    }
}

fn default_clock() -> ClockMode {
    ClockMode::EventDays
}
