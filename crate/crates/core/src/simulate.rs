//! Generative simulation from fitted rate and type models, a uniform
//! random baseline, and goodness-of-fit metrics (exact-day match rates
//! and timing errors).

use chrono::NaiveDate;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{ActorType, DebateCorpus, Stance, StatementEvent};
use crate::error::SimError;
use crate::netstats::PastIndex;
use crate::riskset::{
    rate_covariates, type_covariates, Combo, RateSpec, StandardizationScales, Standardization,
    TypeSpec,
};

/// Whether the sampler conditions on its own output or on truth between days.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HistoryMode {
    /// Sampled events feed the past network of later days (default).
    #[default]
    Generative,
    /// The true events of each day feed the past network of later days.
    Conditional,
}

/// How a sampled event's stance is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StanceMode {
    /// Bernoulli draw from the fitted type model (default).
    #[default]
    TypeModel,
    /// Keep the stance the sampled risk-set combo was observed with.
    CopyObserved,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub window_start: NaiveDate,
    pub n_event_days: usize,
    pub n_replications: usize,
    pub seed: u64,
    pub history: HistoryMode,
    pub stance: StanceMode,
}

impl SimulationConfig {
    pub fn new(window_start: NaiveDate, n_event_days: usize, n_replications: usize, seed: u64) -> SimulationConfig {
        SimulationConfig {
            window_start,
            n_event_days,
            n_replications,
            seed,
            history: HistoryMode::default(),
            stance: StanceMode::default(),
        }
    }
}

/// A fitted rate model in the form the simulator needs: the dataset spec,
/// the coefficient vector aligned with the dataset's columns, and the
/// scales the coefficients were estimated under.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RateModel {
    pub spec: RateSpec,
    pub coefficients: Vec<f64>,
    pub scales: StandardizationScales,
}

/// A fitted type model (intercept last, matching the dataset layout).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TypeModel {
    pub spec: TypeSpec,
    pub coefficients: Vec<f64>,
    pub scales: StandardizationScales,
}

/// One simulated sequence over the prediction window.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimReplication {
    pub events: Vec<StatementEvent>,
    /// True when the risk set ran dry before the window ended.
    pub truncated: bool,
}

#[derive(Debug, Clone)]
pub struct SimOutput {
    pub replications: Vec<SimReplication>,
    /// The true events of the window days, for GOF evaluation.
    pub true_window: Vec<StatementEvent>,
    pub window_dates: Vec<NaiveDate>,
}

/// Per-replication seed: a splitmix64 step keyed by the root seed and the
/// replication index, so streams are independent of evaluation order.
pub fn replication_seed(root: u64, replication: usize) -> u64 {
    let mut z = root
        .wrapping_add((replication as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// The true event days of the window: the first `n_event_days` event days
/// at or after `window_start`, with their events.
fn window_days(
    corpus: &DebateCorpus,
    config: &SimulationConfig,
) -> Result<Vec<(NaiveDate, Vec<StatementEvent>)>, SimError> {
    if config.n_event_days == 0 || config.n_replications == 0 {
        return Err(SimError::EmptyWindow);
    }
    let mut days: Vec<(NaiveDate, Vec<StatementEvent>)> = Vec::new();
    for &e in &corpus.events {
        if e.date < config.window_start {
            continue;
        }
        match days.last_mut() {
            Some((d, evs)) if *d == e.date => evs.push(e),
            _ => {
                if days.len() == config.n_event_days {
                    break;
                }
                days.push((e.date, vec![e]));
            }
        }
    }
    if days.is_empty() {
        return Err(SimError::WindowOutsideAnalysis(config.window_start));
    }
    if days.len() < config.n_event_days {
        return Err(SimError::EmptyWindow);
    }
    Ok(days)
}

/// The deduplicated risk set: distinct combos issued at or after the
/// window start, in canonical order.
fn initial_risk_set(corpus: &DebateCorpus, window_start: NaiveDate) -> Vec<Combo> {
    let mut combos: Vec<Combo> = corpus
        .events
        .iter()
        .filter(|e| e.date >= window_start)
        .map(Combo::of)
        .collect();
    combos.sort();
    combos.dedup();
    combos
}

fn check_model(corpus: &DebateCorpus, rate: &RateModel, type_model: &TypeModel) -> Result<(), SimError> {
    let n_rate_cols = rate.spec.columns.len()
        + rate.spec.interactions.len()
        + usize::from(rate.spec.government_dummy)
        + usize::from(rate.spec.monday_dummy)
        + rate.spec.period_dummies.len();
    if rate.coefficients.len() != n_rate_cols {
        return Err(SimError::ConfigMismatch(format!(
            "rate model has {} coefficients for {} columns",
            rate.coefficients.len(),
            n_rate_cols
        )));
    }
    if rate.scales.entries.len() != rate.spec.columns.len() {
        return Err(SimError::ConfigMismatch(
            "rate scales do not cover the statistic columns".into(),
        ));
    }
    if type_model.coefficients.len() != type_model.spec.columns.len() + 1 {
        return Err(SimError::ConfigMismatch(format!(
            "type model has {} coefficients for {} columns plus intercept",
            type_model.coefficients.len(),
            type_model.spec.columns.len()
        )));
    }
    if type_model.scales.entries.len() != type_model.spec.columns.len() {
        return Err(SimError::ConfigMismatch(
            "type scales do not cover the statistic columns".into(),
        ));
    }
    let _ = corpus;
    Ok(())
}

fn simulate_one(
    corpus: &DebateCorpus,
    rate: &RateModel,
    type_model: &TypeModel,
    config: &SimulationConfig,
    days: &[(NaiveDate, Vec<StatementEvent>)],
    initial_risk: &[Combo],
    types: &[ActorType],
    replication: usize,
) -> SimReplication {
    let mut rng = ChaCha8Rng::seed_from_u64(replication_seed(config.seed, replication));
    let mut risk: Vec<Combo> = initial_risk.to_vec();
    let mut index = PastIndex::new(corpus.n_actors(), corpus.n_beliefs());
    for e in &corpus.events {
        if e.date >= config.window_start {
            break;
        }
        index.push(corpus.clock.time_of(e.date), e.actor, e.belief, e.stance);
    }

    let mut events: Vec<StatementEvent> = Vec::new();
    let mut truncated = false;
    for (date, true_events) in days {
        let t = corpus.clock.time_of(*date);
        index.advance_cutoff(t);
        let mut day_sampled: Vec<StatementEvent> = Vec::new();
        for _ in 0..true_events.len() {
            if risk.is_empty() {
                truncated = true;
                break;
            }
            // utilities on the estimation scale; softmax sampling
            let utilities: Vec<f64> = risk
                .iter()
                .map(|&c| {
                    dot(
                        &rate_covariates(corpus, &index, t, *date, c, &rate.spec, &rate.scales, types),
                        &rate.coefficients,
                    )
                })
                .collect();
            let max_u = utilities.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let weights: Vec<f64> = utilities.iter().map(|u| (u - max_u).exp()).collect();
            let total: f64 = weights.iter().sum();
            let mut target = rng.gen::<f64>() * total;
            let mut pick = weights.len() - 1;
            for (k, w) in weights.iter().enumerate() {
                target -= w;
                if target < 0.0 {
                    pick = k;
                    break;
                }
            }
            let combo = risk.remove(pick);
            let stance = match config.stance {
                StanceMode::CopyObserved => {
                    let _ = rng.gen::<f64>(); // keep the stream aligned across modes
                    combo.stance
                }
                StanceMode::TypeModel => {
                    let x = type_covariates(&index, t, combo, &type_model.spec, &type_model.scales, types);
                    let p = sigmoid(dot(&x, &type_model.coefficients));
                    if rng.gen::<f64>() < p {
                        Stance::Positive
                    } else {
                        Stance::Negative
                    }
                }
            };
            day_sampled.push(StatementEvent {
                date: *date,
                actor: combo.actor,
                belief: combo.belief,
                stance,
            });
        }
        events.extend(day_sampled.iter().copied());
        match config.history {
            HistoryMode::Generative => {
                for e in &day_sampled {
                    index.push(t, e.actor, e.belief, e.stance);
                }
            }
            HistoryMode::Conditional => {
                for e in true_events {
                    index.push(t, e.actor, e.belief, e.stance);
                }
            }
        }
        if truncated {
            break;
        }
    }
    SimReplication { events, truncated }
}

/// Simulate `config.n_replications` event sequences over the window from
/// fitted rate and type models. Deterministic given the seed, independent
/// of thread count.
pub fn simulate_window(
    corpus: &DebateCorpus,
    rate: &RateModel,
    type_model: &TypeModel,
    config: &SimulationConfig,
) -> Result<SimOutput, SimError> {
    check_model(corpus, rate, type_model)?;
    let days = window_days(corpus, config)?;
    let initial_risk = initial_risk_set(corpus, config.window_start);
    let types: Vec<ActorType> = corpus.actors.iter().map(|a| a.actor_type).collect();

    let replications: Vec<SimReplication> = (0..config.n_replications)
        .into_par_iter()
        .map(|r| simulate_one(corpus, rate, type_model, config, &days, &initial_risk, &types, r))
        .collect();

    Ok(SimOutput {
        replications,
        true_window: days.iter().flat_map(|(_, evs)| evs.iter().copied()).collect(),
        window_dates: days.iter().map(|(d, _)| *d).collect(),
    })
}

/// The uniform null model: the same sampler with all coefficients zero,
/// so every at-risk combo is equally likely and stances are fair coin
/// flips. Same seed as a zero-coefficient `simulate_window` gives the
/// identical sequence.
pub fn random_baseline(corpus: &DebateCorpus, config: &SimulationConfig) -> Result<SimOutput, SimError> {
    let half_life = crate::netstats::HalfLife::new(1.0).expect("positive");
    let rate = RateModel {
        spec: RateSpec {
            columns: Vec::new(),
            half_life,
            stat_options: Default::default(),
            standardization: Standardization::None,
            risk_mode: Default::default(),
            factorial_row_limit: u64::MAX,
            interactions: Vec::new(),
            government_dummy: false,
            monday_dummy: false,
            period_dummies: Vec::new(),
            cutoff: config.window_start,
        },
        coefficients: Vec::new(),
        scales: StandardizationScales::default(),
    };
    let type_model = TypeModel {
        spec: TypeSpec {
            columns: Vec::new(),
            half_life,
            stat_options: Default::default(),
            standardization: Standardization::None,
            cutoff: config.window_start,
        },
        coefficients: vec![0.0],
        scales: StandardizationScales::default(),
    };
    simulate_window(corpus, &rate, &type_model, config)
}

/// The five exact-day match targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchTarget {
    Actor,
    Belief,
    Stance,
    ActorBelief,
    ActorBeliefStance,
}

impl MatchTarget {
    pub const ALL: [MatchTarget; 5] = [
        MatchTarget::Actor,
        MatchTarget::Belief,
        MatchTarget::Stance,
        MatchTarget::ActorBelief,
        MatchTarget::ActorBeliefStance,
    ];

    pub fn label(self) -> &'static str {
        match self {
            MatchTarget::Actor => "actor",
            MatchTarget::Belief => "belief",
            MatchTarget::Stance => "stance",
            MatchTarget::ActorBelief => "actor_belief",
            MatchTarget::ActorBeliefStance => "actor_belief_stance",
        }
    }

    fn hits(self, truth: &StatementEvent, sim: &StatementEvent) -> bool {
        if truth.date != sim.date {
            return false;
        }
        match self {
            MatchTarget::Actor => truth.actor == sim.actor,
            MatchTarget::Belief => truth.belief == sim.belief,
            MatchTarget::Stance => truth.stance == sim.stance,
            MatchTarget::ActorBelief => truth.actor == sim.actor && truth.belief == sim.belief,
            MatchTarget::ActorBeliefStance => {
                truth.actor == sim.actor && truth.belief == sim.belief && truth.stance == sim.stance
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatchRate {
    pub target: MatchTarget,
    pub mean: f64,
    pub stderr: f64,
    pub per_replication: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TimingSummary {
    pub n: usize,
    pub unmatched: usize,
    pub mean: f64,
    pub sd: f64,
    pub min: f64,
    pub max: f64,
    pub median: f64,
}

impl TimingSummary {
    pub fn from_errors(errors: &[f64], unmatched: usize) -> TimingSummary {
        let n = errors.len();
        if n == 0 {
            return TimingSummary {
                n,
                unmatched,
                mean: f64::NAN,
                sd: f64::NAN,
                min: f64::NAN,
                max: f64::NAN,
                median: f64::NAN,
            };
        }
        let mean = errors.iter().sum::<f64>() / n as f64;
        let sd = if n > 1 {
            (errors.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0)).sqrt()
        } else {
            0.0
        };
        let mut sorted = errors.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = if n % 2 == 1 {
            sorted[n / 2]
        } else {
            (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
        };
        TimingSummary {
            n,
            unmatched,
            mean,
            sd,
            min: sorted[0],
            max: sorted[n - 1],
            median,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GofReport {
    pub match_rates: Vec<MatchRate>,
    pub timing_per_replication: Vec<TimingSummary>,
    pub timing_errors: Vec<Vec<f64>>,
    pub timing_pooled: TimingSummary,
    pub n_true_events: usize,
    pub n_replications: usize,
}

/// Exact-day match rates per target, averaged over replications with
/// standard errors across replications.
pub fn gof_match_rates(
    true_window: &[StatementEvent],
    replications: &[SimReplication],
) -> Result<Vec<MatchRate>, SimError> {
    if true_window.is_empty() || replications.is_empty() {
        return Err(SimError::EmptyWindow);
    }
    let n_true = true_window.len() as f64;
    let mut out = Vec::with_capacity(MatchTarget::ALL.len());
    for target in MatchTarget::ALL {
        let per_replication: Vec<f64> = replications
            .iter()
            .map(|rep| {
                let hits = true_window
                    .iter()
                    .filter(|t| rep.events.iter().any(|s| target.hits(t, s)))
                    .count();
                hits as f64 / n_true
            })
            .collect();
        let r = per_replication.len() as f64;
        let mean = per_replication.iter().sum::<f64>() / r;
        let stderr = if per_replication.len() > 1 {
            let var = per_replication.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (r - 1.0);
            (var / r).sqrt()
        } else {
            0.0
        };
        out.push(MatchRate {
            target,
            mean,
            stderr,
            per_replication,
        });
    }
    Ok(out)
}

/// Timing errors: for each true event, the absolute event-day difference
/// to the first simulated occurrence of the same combo. Combos never
/// simulated count as unmatched, kept out of the averages.
pub fn gof_timing_error(
    corpus: &DebateCorpus,
    true_window: &[StatementEvent],
    replications: &[SimReplication],
) -> Result<(Vec<Vec<f64>>, Vec<TimingSummary>, TimingSummary), SimError> {
    if true_window.is_empty() || replications.is_empty() {
        return Err(SimError::EmptyWindow);
    }
    let day_of = |date: NaiveDate| corpus.clock.event_day_of(date).unwrap_or(0) as f64;
    let mut per_rep_errors: Vec<Vec<f64>> = Vec::with_capacity(replications.len());
    let mut per_rep_summary: Vec<TimingSummary> = Vec::with_capacity(replications.len());
    let mut pooled: Vec<f64> = Vec::new();
    let mut pooled_unmatched = 0usize;
    for rep in replications {
        let mut errors: Vec<f64> = Vec::new();
        let mut unmatched = 0usize;
        for t in true_window {
            let combo = Combo::of(t);
            match rep.events.iter().find(|s| Combo::of(s) == combo) {
                Some(s) => errors.push((day_of(t.date) - day_of(s.date)).abs()),
                None => unmatched += 1,
            }
        }
        per_rep_summary.push(TimingSummary::from_errors(&errors, unmatched));
        pooled.extend(errors.iter().copied());
        pooled_unmatched += unmatched;
        per_rep_errors.push(errors);
    }
    let pooled_summary = TimingSummary::from_errors(&pooled, pooled_unmatched);
    Ok((per_rep_errors, per_rep_summary, pooled_summary))
}

/// Full GOF report for a simulation run.
pub fn evaluate_gof(corpus: &DebateCorpus, sim: &SimOutput) -> Result<GofReport, SimError> {
    let match_rates = gof_match_rates(&sim.true_window, &sim.replications)?;
    let (timing_errors, timing_per_replication, timing_pooled) =
        gof_timing_error(corpus, &sim.true_window, &sim.replications)?;
    Ok(GofReport {
        match_rates,
        timing_per_replication,
        timing_errors,
        timing_pooled,
        n_true_events: sim.true_window.len(),
        n_replications: sim.replications.len(),
    })
}

/// CSV of match rates: target, mean, stderr.
pub fn write_match_rates_csv<W: std::io::Write>(rates: &[MatchRate], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["target", "mean", "stderr"])?;
    for r in rates {
        w.write_record([
            r.target.label().to_string(),
            format!("{:.6}", r.mean),
            format!("{:.6}", r.stderr),
        ])?;
    }
    w.flush()
}

/// CSV of timing-error samples: replication, error.
pub fn write_timing_csv<W: std::io::Write>(errors: &[Vec<f64>], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["replication", "error"])?;
    for (rep, errs) in errors.iter().enumerate() {
        for e in errs {
            w.write_record([rep.to_string(), format!("{e}")])?;
        }
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{ActorId, ActorRecord, BeliefId, ClockMode, DebateCorpus};
    use crate::netstats::HalfLife;

    fn date(s: &str) -> NaiveDate {
        NaiveDate::parse_from_str(s, "%Y-%m-%d").unwrap()
    }

    fn toy_corpus(rows: &[(&str, u32, u32, Stance)]) -> DebateCorpus {
        let n_actors = rows.iter().map(|r| r.1).max().unwrap() + 1;
        let n_beliefs = rows.iter().map(|r| r.2).max().unwrap() + 1;
        let actors = (0..n_actors)
            .map(|k| ActorRecord {
                id: format!("a{k}"),
                label: format!("Actor {k}"),
                actor_type: ActorType::Other,
                is_government: false,
            })
            .collect();
        let beliefs = (0..n_beliefs).map(|k| format!("b{k}")).collect();
        let events = rows
            .iter()
            .map(|&(d, a, b, s)| StatementEvent {
                date: date(d),
                actor: ActorId(a),
                belief: BeliefId(b),
                stance: s,
            })
            .collect();
        DebateCorpus::from_parts(events, actors, beliefs, ClockMode::EventDays).unwrap()
    }

    #[test]
    fn single_at_risk_combo_is_certain() {
        use Stance::Positive as P;
        let corpus = toy_corpus(&[
            ("1996-01-01", 0, 0, P),
            ("1996-02-01", 1, 1, P),
        ]);
        let mut config = SimulationConfig::new(date("1996-02-01"), 1, 5, 7);
        config.stance = StanceMode::CopyObserved;
        let sim = random_baseline(&corpus, &config).unwrap();
        for rep in &sim.replications {
            assert_eq!(rep.events.len(), 1);
            let e = rep.events[0];
            assert_eq!((e.actor, e.belief, e.stance), (ActorId(1), BeliefId(1), P));
        }
    }

    #[test]
    fn daily_counts_match_truth_and_risk_set_contains_all_draws() {
        use Stance::Negative as N;
        use Stance::Positive as P;
        let corpus = toy_corpus(&[
            ("1996-01-01", 0, 0, P),
            ("1996-01-02", 1, 0, N),
            ("1996-01-02", 0, 1, P),
            ("1996-01-03", 1, 1, N),
            ("1996-01-03", 0, 0, P),
            ("1996-01-03", 1, 0, P),
        ]);
        let config = SimulationConfig::new(date("1996-01-02"), 2, 8, 99);
        let sim = random_baseline(&corpus, &config).unwrap();
        let risk = initial_risk_set(&corpus, config.window_start);
        for rep in &sim.replications {
            let per_day: Vec<usize> = sim
                .window_dates
                .iter()
                .map(|d| rep.events.iter().filter(|e| e.date == *d).count())
                .collect();
            assert_eq!(per_day, vec![2, 3]);
            // each (actor, belief) pair drawn no more often than it occurs
            // in the deduplicated risk set (stances are redrawn, so the
            // invariant lives at the pair level)
            for e in &rep.events {
                let drawn = rep
                    .events
                    .iter()
                    .filter(|s| (s.actor, s.belief) == (e.actor, e.belief))
                    .count();
                let available = risk
                    .iter()
                    .filter(|c| (c.actor, c.belief) == (e.actor, e.belief))
                    .count();
                assert!(drawn <= available);
                assert!(available > 0);
            }
        }
    }

    #[test]
    fn same_seed_same_sequence() {
        use Stance::Positive as P;
        let corpus = toy_corpus(&[
            ("1996-01-01", 0, 0, P),
            ("1996-01-02", 1, 0, P),
            ("1996-01-03", 0, 1, P),
            ("1996-01-04", 1, 1, P),
        ]);
        let config = SimulationConfig::new(date("1996-01-02"), 3, 4, 1234);
        let a = random_baseline(&corpus, &config).unwrap();
        let b = random_baseline(&corpus, &config).unwrap();
        assert_eq!(
            format!("{:?}", a.replications.iter().map(|r| &r.events).collect::<Vec<_>>()),
            format!("{:?}", b.replications.iter().map(|r| &r.events).collect::<Vec<_>>())
        );
        let mut other = config.clone();
        other.seed = 1235;
        let c = random_baseline(&corpus, &other).unwrap();
        assert_ne!(
            format!("{:?}", a.replications.iter().map(|r| &r.events).collect::<Vec<_>>()),
            format!("{:?}", c.replications.iter().map(|r| &r.events).collect::<Vec<_>>())
        );
    }

    #[test]
    fn zero_coefficients_match_baseline_exactly() {
        use Stance::Negative as N;
        use Stance::Positive as P;
        let corpus = toy_corpus(&[
            ("1996-01-01", 0, 0, P),
            ("1996-01-02", 1, 0, N),
            ("1996-01-03", 0, 1, P),
            ("1996-01-04", 1, 1, N),
        ]);
        let config = SimulationConfig::new(date("1996-01-02"), 3, 6, 42);
        let h = HalfLife::new(20.0).unwrap();
        // a real model shape with zeroed coefficients
        let mut spec = RateSpec::main_model(date("1996-01-02"), h);
        spec.standardization = Standardization::None;
        let rate = RateModel {
            coefficients: vec![0.0; spec.columns.len() + spec.interactions.len() + 2],
            scales: StandardizationScales {
                entries: spec
                    .columns
                    .iter()
                    .map(|c| crate::riskset::ScaleEntry {
                        name: c.to_string(),
                        sd: 1.0,
                        mean: 0.0,
                        min: 0.0,
                        max: 0.0,
                    })
                    .collect(),
                mode: Standardization::None,
            },
            spec,
        };
        let tspec = TypeSpec::main_model(date("1996-01-02"), h);
        let type_model = TypeModel {
            coefficients: vec![0.0; tspec.columns.len() + 1],
            scales: StandardizationScales {
                entries: tspec
                    .columns
                    .iter()
                    .map(|c| crate::riskset::ScaleEntry {
                        name: c.to_string(),
                        sd: 1.0,
                        mean: 0.0,
                        min: 0.0,
                        max: 0.0,
                    })
                    .collect(),
                mode: Standardization::None,
            },
            spec: tspec,
        };
        let fitted = simulate_window(&corpus, &rate, &type_model, &config).unwrap();
        let baseline = random_baseline(&corpus, &config).unwrap();
        assert_eq!(
            format!("{:?}", fitted.replications.iter().map(|r| &r.events).collect::<Vec<_>>()),
            format!("{:?}", baseline.replications.iter().map(|r| &r.events).collect::<Vec<_>>())
        );
    }

    #[test]
    fn day_one_selection_is_uniform_under_zero_coefficients() {
        use Stance::Positive as P;
        // 4 combos at risk on the single window day
        let corpus = toy_corpus(&[
            ("1996-01-01", 0, 0, P),
            ("1996-01-05", 0, 0, P),
            ("1996-01-06", 0, 1, P),
            ("1996-01-07", 1, 0, P),
            ("1996-01-08", 1, 1, P),
        ]);
        let n_reps = 20_000usize;
        let config = SimulationConfig::new(date("1996-01-05"), 1, n_reps, 555);
        let sim = random_baseline(&corpus, &config).unwrap();
        let risk = initial_risk_set(&corpus, config.window_start);
        assert_eq!(risk.len(), 4);
        let mut counts = vec![0usize; risk.len()];
        for rep in &sim.replications {
            let e = rep.events[0];
            let k = risk
                .iter()
                .position(|c| c.actor == e.actor && c.belief == e.belief)
                .unwrap();
            counts[k] += 1;
        }
        let p = 1.0 / risk.len() as f64;
        let sigma = (n_reps as f64 * p * (1.0 - p)).sqrt();
        for &c in &counts {
            assert!(
                (c as f64 - n_reps as f64 * p).abs() < 3.0 * sigma,
                "count {c} outside 3-sigma band"
            );
        }
    }

    #[test]
    fn truncates_when_risk_set_runs_dry() {
        use Stance::Positive as P;
        // day 2 truth has 3 events but only 2 distinct combos exist at risk
        let corpus = toy_corpus(&[
            ("1996-01-01", 0, 0, P),
            ("1996-01-02", 0, 0, P),
            ("1996-01-02", 0, 0, P),
            ("1996-01-02", 0, 1, P),
        ]);
        let config = SimulationConfig::new(date("1996-01-02"), 1, 3, 9);
        let sim = random_baseline(&corpus, &config).unwrap();
        for rep in &sim.replications {
            assert!(rep.truncated);
            assert_eq!(rep.events.len(), 2);
        }
    }

    #[test]
    fn identical_sequences_have_perfect_gof() {
        use Stance::Negative as N;
        use Stance::Positive as P;
        let corpus = toy_corpus(&[
            ("1996-01-01", 0, 0, P),
            ("1996-01-02", 1, 0, N),
            ("1996-01-03", 0, 1, P),
        ]);
        let truth: Vec<StatementEvent> = corpus
            .events
            .iter()
            .filter(|e| e.date >= date("1996-01-02"))
            .copied()
            .collect();
        let reps = vec![SimReplication {
            events: truth.clone(),
            truncated: false,
        }];
        let rates = gof_match_rates(&truth, &reps).unwrap();
        for r in &rates {
            assert_eq!(r.mean, 1.0);
        }
        let (_, _, pooled) = gof_timing_error(&corpus, &truth, &reps).unwrap();
        assert_eq!(pooled.mean, 0.0);
        assert_eq!(pooled.unmatched, 0);
    }

    #[test]
    fn disjoint_beliefs_have_zero_belief_match_rate() {
        use Stance::Positive as P;
        let corpus = toy_corpus(&[
            ("1996-01-01", 0, 0, P),
            ("1996-01-02", 0, 1, P),
        ]);
        let truth = vec![corpus.events[1]];
        let reps = vec![SimReplication {
            events: vec![StatementEvent {
                date: date("1996-01-02"),
                actor: ActorId(0),
                belief: BeliefId(0),
                stance: P,
            }],
            truncated: false,
        }];
        let rates = gof_match_rates(&truth, &reps).unwrap();
        let by = |t: MatchTarget| rates.iter().find(|r| r.target == t).unwrap().mean;
        assert_eq!(by(MatchTarget::Belief), 0.0);
        assert_eq!(by(MatchTarget::Actor), 1.0);
        assert_eq!(by(MatchTarget::ActorBelief), 0.0);
    }

    #[test]
    fn five_days_late_is_error_five() {
        use Stance::Positive as P;
        // 7 consecutive event days
        let rows: Vec<(String, u32, u32, Stance)> = (1..=7)
            .map(|d| (format!("1996-01-0{d}"), (d % 2) as u32, 0u32, P))
            .collect();
        let rows_ref: Vec<(&str, u32, u32, Stance)> =
            rows.iter().map(|(d, a, b, s)| (d.as_str(), *a, *b, *s)).collect();
        let corpus = toy_corpus(&rows_ref);
        let truth = vec![corpus.events[1]]; // day index 1
        let late = StatementEvent {
            date: corpus.events[6].date, // day index 6
            ..corpus.events[1]
        };
        let reps = vec![SimReplication {
            events: vec![late],
            truncated: false,
        }];
        let (errors, _, pooled) = gof_timing_error(&corpus, &truth, &reps).unwrap();
        assert_eq!(errors[0], vec![5.0]);
        assert_eq!(pooled.unmatched, 0);

        // never-simulated combo is unmatched, not an error sample
        let reps = vec![SimReplication {
            events: vec![],
            truncated: true,
        }];
        let (errors, _, pooled) = gof_timing_error(&corpus, &truth, &reps).unwrap();
        assert!(errors[0].is_empty());
        assert_eq!(pooled.unmatched, 1);
        assert!(pooled.mean.is_nan());
    }

    #[test]
    fn match_rate_hierarchy_holds() {
        use Stance::Negative as N;
        use Stance::Positive as P;
        let corpus = toy_corpus(&[
            ("1996-01-01", 0, 0, P),
            ("1996-01-02", 1, 0, N),
            ("1996-01-02", 0, 1, P),
            ("1996-01-03", 1, 1, N),
            ("1996-01-04", 0, 0, P),
            ("1996-01-05", 1, 0, N),
        ]);
        let config = SimulationConfig::new(date("1996-01-02"), 4, 25, 31);
        let sim = random_baseline(&corpus, &config).unwrap();
        let rates = gof_match_rates(&sim.true_window, &sim.replications).unwrap();
        let by = |t: MatchTarget| rates.iter().find(|r| r.target == t).unwrap();
        for k in 0..sim.replications.len() {
            let abs = by(MatchTarget::ActorBeliefStance).per_replication[k];
            let ab = by(MatchTarget::ActorBelief).per_replication[k];
            let a = by(MatchTarget::Actor).per_replication[k];
            let b = by(MatchTarget::Belief).per_replication[k];
            assert!(abs <= ab + 1e-12);
            assert!(ab <= a.min(b) + 1e-12);
        }
    }

    #[test]
    fn invalid_windows_are_rejected() {
        use Stance::Positive as P;
        let corpus = toy_corpus(&[("1996-01-01", 0, 0, P), ("1996-01-02", 1, 0, P)]);
        let config = SimulationConfig::new(date("1997-01-01"), 1, 2, 0);
        assert!(matches!(
            random_baseline(&corpus, &config),
            Err(SimError::WindowOutsideAnalysis(_))
        ));
        let config = SimulationConfig::new(date("1996-01-01"), 5, 2, 0);
        assert!(matches!(random_baseline(&corpus, &config), Err(SimError::EmptyWindow)));
        let config = SimulationConfig::new(date("1996-01-01"), 0, 2, 0);
        assert!(matches!(random_baseline(&corpus, &config), Err(SimError::EmptyWindow)));
    }
}
