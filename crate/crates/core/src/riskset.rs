//! Construction of the stratified rate-model dataset (true + null events
//! per event day) and the type-model dataset, with covariates,
//! interactions, and standardization.

use std::collections::BTreeMap;

use chrono::{NaiveDate, Weekday};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{weekday, ActorType, DebateCorpus, Stance, StatementEvent};
use crate::error::StatError;
use crate::inference::ClogitStratum;
use crate::netstats::{
    statistic_vector, HalfLife, PastIndex, StatColumn, StatOptions,
};

/// One candidate statement: (actor, belief, stance).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Combo {
    pub actor: crate::corpus::ActorId,
    pub belief: crate::corpus::BeliefId,
    pub stance: Stance,
}

impl Combo {
    pub fn of(event: &StatementEvent) -> Combo {
        Combo {
            actor: event.actor,
            belief: event.belief,
            stance: event.stance,
        }
    }
}

/// One observation of a design matrix: a candidate event with its
/// covariate values in `values`, aligned with the dataset's column names.
#[derive(Debug, Clone)]
pub struct DesignRow {
    pub combo: Combo,
    pub outcome: bool,
    pub values: Vec<f64>,
}

/// One event day's set of true and null candidate rows.
#[derive(Debug, Clone)]
pub struct Stratum {
    pub event_day: usize,
    pub date: NaiveDate,
    pub rows: Vec<DesignRow>,
}

/// Per-statistic scale information recorded during standardization.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScaleEntry {
    pub name: String,
    pub sd: f64,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct StandardizationScales {
    pub entries: Vec<ScaleEntry>,
    pub mode: Standardization,
}

impl StandardizationScales {
    /// Apply the recorded scales to a raw statistic vector (same column
    /// order as the entries).
    pub fn apply(&self, raw: &[f64]) -> Vec<f64> {
        raw.iter()
            .zip(&self.entries)
            .map(|(&v, e)| match self.mode {
                Standardization::None => v,
                Standardization::Sd => v / e.sd,
                Standardization::Centered => (v - e.mean) / e.sd,
            })
            .collect()
    }
}

/// How endogenous statistic columns are scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Standardization {
    /// Division by the standard deviation only (default).
    #[default]
    Sd,
    /// Mean-centering followed by division by the standard deviation.
    Centered,
    /// Raw columns, scales recorded but not applied.
    None,
}

/// Which candidate combos are at risk on each event day.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RiskMode {
    /// Every analysis-period combo is at risk from the start of the
    /// analysis period until its last occurrence (default).
    #[default]
    LastOccurrence,
    /// At risk only between its first and last analysis-period occurrence.
    FromFirstMention,
    /// All |A| x |B| x 2 combos on every event day; guarded by a row limit.
    FullFactorial,
}

/// A user-supplied calendar-range dummy (e.g. an election period).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PeriodDummy {
    pub name: String,
    pub start: NaiveDate,
    pub end: NaiveDate,
}

/// Specification of the rate-model dataset.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RateSpec {
    pub columns: Vec<StatColumn>,
    pub half_life: HalfLife,
    pub stat_options: StatOptions,
    pub standardization: Standardization,
    pub risk_mode: RiskMode,
    /// Hard cap on full-factorial rows; exceeded runs are rejected.
    pub factorial_row_limit: u64,
    /// Statistic columns interacted with the government dummy, computed
    /// after standardization of the base column.
    pub interactions: Vec<StatColumn>,
    pub government_dummy: bool,
    pub monday_dummy: bool,
    pub period_dummies: Vec<PeriodDummy>,
    /// Burn-in cutoff: events before this date seed the past network only.
    pub cutoff: NaiveDate,
}

impl RateSpec {
    pub fn main_model(cutoff: NaiveDate, half_life: HalfLife) -> RateSpec {
        use crate::netstats::{SignMode, StatName};
        RateSpec {
            columns: StatColumn::rate_set(),
            half_life,
            stat_options: StatOptions::default(),
            standardization: Standardization::Sd,
            risk_mode: RiskMode::LastOccurrence,
            factorial_row_limit: 2_000_000,
            interactions: vec![
                StatColumn::new(StatName::PositiveReciprocity, SignMode::Candidate),
                StatColumn::new(StatName::InnovationLearning, SignMode::Candidate),
                StatColumn::new(StatName::NegativeReciprocity, SignMode::Candidate),
            ],
            government_dummy: true,
            monday_dummy: true,
            period_dummies: Vec::new(),
            cutoff,
        }
    }
}

/// Specification of the type-model dataset.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TypeSpec {
    pub columns: Vec<StatColumn>,
    pub half_life: HalfLife,
    pub stat_options: StatOptions,
    pub standardization: Standardization,
    pub cutoff: NaiveDate,
}

impl TypeSpec {
    pub fn main_model(cutoff: NaiveDate, half_life: HalfLife) -> TypeSpec {
        TypeSpec {
            columns: StatColumn::type_set(),
            half_life,
            stat_options: StatOptions::default(),
            standardization: Standardization::Sd,
            cutoff,
        }
    }
}

/// Rate-model design dataset: strata of true and null rows.
#[derive(Debug, Clone)]
pub struct RateDataset {
    pub column_names: Vec<String>,
    /// Number of leading columns that are endogenous statistics.
    pub n_stat_columns: usize,
    pub strata: Vec<Stratum>,
    pub scales: StandardizationScales,
}

impl RateDataset {
    pub fn n_rows(&self) -> usize {
        self.strata.iter().map(|s| s.rows.len()).sum()
    }

    pub fn n_true(&self) -> usize {
        self.strata
            .iter()
            .map(|s| s.rows.iter().filter(|r| r.outcome).count())
            .sum()
    }

    /// Convert to the solver's stratum representation. Same-day repeats
    /// of one combo are separate dataset rows but a single candidate at
    /// risk, so they merge into one solver row with their event count.
    pub fn clogit_strata(&self) -> Vec<ClogitStratum> {
        self.strata
            .iter()
            .map(|s| {
                let mut x: Vec<Vec<f64>> = Vec::with_capacity(s.rows.len());
                let mut y: Vec<u32> = Vec::new();
                // duplicates only arise among the leading true rows: null
                // rows are distinct combos that were not issued that day
                let mut true_combos: Vec<Combo> = Vec::new();
                for r in &s.rows {
                    if r.outcome {
                        match true_combos.iter().position(|&c| c == r.combo) {
                            Some(i) => y[i] += 1,
                            None => {
                                true_combos.push(r.combo);
                                x.push(r.values.clone());
                                y.push(1);
                            }
                        }
                    } else {
                        x.push(r.values.clone());
                        y.push(0);
                    }
                }
                ClogitStratum { x, y }
            })
            .collect()
    }
}

/// Type-model design dataset: one row per true analysis statement.
#[derive(Debug, Clone)]
pub struct TypeDataset {
    pub column_names: Vec<String>,
    pub n_stat_columns: usize,
    pub rows: Vec<DesignRow>,
    pub dates: Vec<NaiveDate>,
    pub scales: StandardizationScales,
}

impl TypeDataset {
    pub fn design(&self) -> (Vec<Vec<f64>>, Vec<bool>) {
        (
            self.rows.iter().map(|r| r.values.clone()).collect(),
            self.rows.iter().map(|r| r.outcome).collect(),
        )
    }
}

/// Row count of the full-factorial risk set.
pub fn full_factorial_rows(actors: u64, beliefs: u64, stances: u64, event_days: u64) -> u64 {
    actors * beliefs * stances * event_days
}

fn actor_types(corpus: &DebateCorpus) -> Vec<ActorType> {
    corpus.actors.iter().map(|a| a.actor_type).collect()
}

/// Compute sd/mean/min/max per statistic column over the dataset rows and
/// divide (or center-and-divide) each column in place.
fn standardize_in_place(
    rows: &mut [&mut DesignRow],
    names: &[String],
    n_stat: usize,
    mode: Standardization,
) -> Result<StandardizationScales, StatError> {
    let n = rows.len() as f64;
    let mut entries = Vec::with_capacity(n_stat);
    for c in 0..n_stat {
        let mut sum = 0.0;
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for row in rows.iter() {
            let v = row.values[c];
            sum += v;
            min = min.min(v);
            max = max.max(v);
        }
        let mean = sum / n;
        let mut ss = 0.0;
        for row in rows.iter() {
            let d = row.values[c] - mean;
            ss += d * d;
        }
        // sample standard deviation over the estimation dataset
        let sd = if n > 1.0 { (ss / (n - 1.0)).sqrt() } else { 0.0 };
        if sd == 0.0 && mode != Standardization::None {
            return Err(StatError::ConstantColumn(names[c].clone()));
        }
        entries.push(ScaleEntry {
            name: names[c].clone(),
            sd,
            mean,
            min,
            max,
        });
    }
    if mode != Standardization::None {
        for row in rows.iter_mut() {
            for c in 0..n_stat {
                let e = &entries[c];
                row.values[c] = match mode {
                    Standardization::Sd => row.values[c] / e.sd,
                    Standardization::Centered => (row.values[c] - e.mean) / e.sd,
                    Standardization::None => unreachable!(),
                };
            }
        }
    }
    Ok(StandardizationScales { entries, mode })
}

/// Days of the analysis period, each with its true events, in order.
fn analysis_days(analysis: &[StatementEvent]) -> Vec<(NaiveDate, Vec<StatementEvent>)> {
    let mut days: Vec<(NaiveDate, Vec<StatementEvent>)> = Vec::new();
    for &e in analysis {
        match days.last_mut() {
            Some((d, evs)) if *d == e.date => evs.push(e),
            _ => days.push((e.date, vec![e])),
        }
    }
    days
}

/// Build the stratified rate-model dataset.
///
/// For each analysis event day: true rows are the statements issued that
/// day (same-day duplicates kept); null rows are the candidate combos at
/// risk under `spec.risk_mode` that were not issued that day. Statistics
/// are evaluated strictly on the pre-day past network (burn-in plus all
/// earlier analysis events).
pub fn build_rate_dataset(
    corpus: &DebateCorpus,
    spec: &RateSpec,
) -> Result<(RateDataset, usize), StatError> {
    corpus.check_estimable()?;
    let (burn_in, analysis) = crate::corpus::split_burn_in(corpus, spec.cutoff)?;
    let days = analysis_days(analysis);
    let types = actor_types(corpus);

    // Combo eligibility windows over the analysis period.
    let mut windows: BTreeMap<Combo, (NaiveDate, NaiveDate)> = BTreeMap::new();
    for e in analysis {
        let c = Combo::of(e);
        windows
            .entry(c)
            .and_modify(|(_, last)| *last = e.date)
            .or_insert((e.date, e.date));
    }

    if spec.risk_mode == RiskMode::FullFactorial {
        let rows = full_factorial_rows(
            corpus.n_actors() as u64,
            corpus.n_beliefs() as u64,
            2,
            days.len() as u64,
        );
        if rows > spec.factorial_row_limit {
            return Err(StatError::FactorialTooLarge {
                rows,
                limit: spec.factorial_row_limit,
            });
        }
    }

    let mut column_names: Vec<String> = spec.columns.iter().map(|c| c.to_string()).collect();
    let n_stat = column_names.len();
    let interaction_idx: Vec<usize> = spec
        .interactions
        .iter()
        .map(|c| {
            spec.columns
                .iter()
                .position(|k| k == c)
                .ok_or_else(|| StatError::UnknownStatistic(format!("interaction base {c}")))
        })
        .collect::<Result<_, _>>()?;
    for c in &spec.interactions {
        column_names.push(format!("government_x_{c}"));
    }
    if spec.government_dummy {
        column_names.push("government".to_string());
    }
    if spec.monday_dummy {
        column_names.push("monday".to_string());
    }
    for p in &spec.period_dummies {
        column_names.push(p.name.clone());
    }

    // Seed the past network with burn-in events.
    let mut index = PastIndex::new(corpus.n_actors(), corpus.n_beliefs());
    for e in burn_in {
        index.push(corpus.clock.time_of(e.date), e.actor, e.belief, e.stance);
    }

    let mut strata: Vec<Stratum> = Vec::with_capacity(days.len());
    for (date, day_events) in &days {
        let t = corpus.clock.time_of(*date);
        index.advance_cutoff(t);

        // Candidate combos: true events first in file order, then null
        // combos in canonical (actor, belief, stance) order.
        let mut candidates: Vec<(Combo, bool)> = day_events
            .iter()
            .map(|e| (Combo::of(e), true))
            .collect();
        match spec.risk_mode {
            RiskMode::FullFactorial => {
                for actor in 0..corpus.n_actors() as u32 {
                    for belief in 0..corpus.n_beliefs() as u32 {
                        for stance in Stance::BOTH {
                            let c = Combo {
                                actor: crate::corpus::ActorId(actor),
                                belief: crate::corpus::BeliefId(belief),
                                stance,
                            };
                            if !day_events.iter().any(|e| Combo::of(e) == c) {
                                candidates.push((c, false));
                            }
                        }
                    }
                }
            }
            RiskMode::LastOccurrence | RiskMode::FromFirstMention => {
                for (&c, &(first, last)) in &windows {
                    if last < *date {
                        continue;
                    }
                    if spec.risk_mode == RiskMode::FromFirstMention && first > *date {
                        continue;
                    }
                    if !day_events.iter().any(|e| Combo::of(e) == c) {
                        candidates.push((c, false));
                    }
                }
            }
        }

        let is_monday = weekday(*date) == Weekday::Mon;
        let rows: Vec<DesignRow> = candidates
            .par_iter()
            .map(|&(combo, outcome)| {
                let mut values = statistic_vector(
                    &index,
                    t,
                    combo.actor,
                    combo.belief,
                    combo.stance,
                    &spec.columns,
                    spec.half_life,
                    spec.stat_options,
                    &types,
                );
                // interaction slots filled after standardization
                values.extend(std::iter::repeat(0.0).take(interaction_idx.len()));
                if spec.government_dummy {
                    values.push(bool_to_f64(
                        corpus.actor(combo.actor).is_government,
                    ));
                }
                if spec.monday_dummy {
                    values.push(bool_to_f64(is_monday));
                }
                for p in &spec.period_dummies {
                    values.push(bool_to_f64(*date >= p.start && *date <= p.end));
                }
                DesignRow {
                    combo,
                    outcome,
                    values,
                }
            })
            .collect();

        strata.push(Stratum {
            event_day: corpus.clock.event_day_of(*date).unwrap_or(t as usize),
            date: *date,
            rows,
        });

        for e in day_events {
            index.push(t, e.actor, e.belief, e.stance);
        }
    }

    // Standardize statistic columns over the full estimation dataset.
    let mut all_rows: Vec<&mut DesignRow> = strata
        .iter_mut()
        .flat_map(|s| s.rows.iter_mut())
        .collect();
    let scales = standardize_in_place(&mut all_rows, &column_names, n_stat, spec.standardization)?;

    // Interactions: government dummy times the standardized base column.
    for (slot, &base) in interaction_idx.iter().enumerate() {
        let col = n_stat + slot;
        for row in all_rows.iter_mut() {
            let gov = bool_to_f64(corpus.actor(row.combo.actor).is_government);
            row.values[col] = gov * row.values[base];
        }
    }

    let n_burn_in = burn_in.len();
    Ok((
        RateDataset {
            column_names,
            n_stat_columns: n_stat,
            strata,
            scales,
        },
        n_burn_in,
    ))
}

/// Build the type-model dataset: one row per true analysis statement,
/// outcome 1 for a positive stance, signed-split statistics plus an
/// intercept column (last).
pub fn build_type_dataset(
    corpus: &DebateCorpus,
    spec: &TypeSpec,
) -> Result<TypeDataset, StatError> {
    corpus.check_estimable()?;
    let (burn_in, analysis) = crate::corpus::split_burn_in(corpus, spec.cutoff)?;
    let days = analysis_days(analysis);
    let types = actor_types(corpus);

    let mut column_names: Vec<String> = spec.columns.iter().map(|c| c.to_string()).collect();
    let n_stat = column_names.len();
    column_names.push("intercept".to_string());

    let mut index = PastIndex::new(corpus.n_actors(), corpus.n_beliefs());
    for e in burn_in {
        index.push(corpus.clock.time_of(e.date), e.actor, e.belief, e.stance);
    }

    let mut rows: Vec<DesignRow> = Vec::with_capacity(analysis.len());
    let mut dates: Vec<NaiveDate> = Vec::with_capacity(analysis.len());
    for (date, day_events) in &days {
        let t = corpus.clock.time_of(*date);
        index.advance_cutoff(t);
        let day_rows: Vec<DesignRow> = day_events
            .par_iter()
            .map(|e| {
                let combo = Combo::of(e);
                let mut values = statistic_vector(
                    &index,
                    t,
                    combo.actor,
                    combo.belief,
                    combo.stance,
                    &spec.columns,
                    spec.half_life,
                    spec.stat_options,
                    &types,
                );
                values.push(1.0);
                DesignRow {
                    combo,
                    outcome: e.stance == Stance::Positive,
                    values,
                }
            })
            .collect();
        rows.extend(day_rows);
        dates.extend(std::iter::repeat(*date).take(day_events.len()));
        for e in day_events {
            index.push(t, e.actor, e.belief, e.stance);
        }
    }

    let mut row_refs: Vec<&mut DesignRow> = rows.iter_mut().collect();
    let scales =
        standardize_in_place(&mut row_refs, &column_names, n_stat, spec.standardization)?;

    Ok(TypeDataset {
        column_names,
        n_stat_columns: n_stat,
        rows,
        dates,
        scales,
    })
}

/// Covariate vector for one candidate at time `t`, standardized with
/// previously recorded scales. Column order matches `build_rate_dataset`:
/// statistics, interactions, government, monday, period dummies. Used by
/// the simulator to score candidates on the estimation scale.
pub fn rate_covariates(
    corpus: &DebateCorpus,
    index: &PastIndex,
    t: f64,
    date: NaiveDate,
    combo: Combo,
    spec: &RateSpec,
    scales: &StandardizationScales,
    types: &[ActorType],
) -> Vec<f64> {
    let raw = statistic_vector(
        index,
        t,
        combo.actor,
        combo.belief,
        combo.stance,
        &spec.columns,
        spec.half_life,
        spec.stat_options,
        types,
    );
    let mut values = scales.apply(&raw);
    let gov = bool_to_f64(corpus.actor(combo.actor).is_government);
    for c in &spec.interactions {
        let base = spec
            .columns
            .iter()
            .position(|k| k == c)
            .expect("interaction base missing from columns");
        values.push(gov * values[base]);
    }
    if spec.government_dummy {
        values.push(gov);
    }
    if spec.monday_dummy {
        values.push(bool_to_f64(weekday(date) == Weekday::Mon));
    }
    for p in &spec.period_dummies {
        values.push(bool_to_f64(date >= p.start && date <= p.end));
    }
    values
}

/// Covariate vector for a type-model observation, standardized with
/// previously recorded scales; intercept last.
pub fn type_covariates(
    index: &PastIndex,
    t: f64,
    combo: Combo,
    spec: &TypeSpec,
    scales: &StandardizationScales,
    types: &[ActorType],
) -> Vec<f64> {
    let raw = statistic_vector(
        index,
        t,
        combo.actor,
        combo.belief,
        combo.stance,
        &spec.columns,
        spec.half_life,
        spec.stat_options,
        types,
    );
    let mut values = scales.apply(&raw);
    values.push(1.0);
    values
}

fn bool_to_f64(v: bool) -> f64 {
    if v {
        1.0
    } else {
        0.0
    }
}

/// Write a design dataset as CSV: one row per DesignRow with a stratum id
/// column, suitable for cross-validation in external tools.
pub fn write_rate_csv<W: std::io::Write>(
    dataset: &RateDataset,
    corpus: &DebateCorpus,
    out: W,
) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec![
        "stratum".to_string(),
        "date".to_string(),
        "actor".to_string(),
        "belief".to_string(),
        "stance".to_string(),
        "outcome".to_string(),
    ];
    header.extend(dataset.column_names.iter().cloned());
    w.write_record(&header)?;
    for (sid, stratum) in dataset.strata.iter().enumerate() {
        for row in &stratum.rows {
            let mut record = vec![
                sid.to_string(),
                stratum.date.format("%Y-%m-%d").to_string(),
                corpus.actor(row.combo.actor).id.clone(),
                corpus.belief_name(row.combo.belief).to_string(),
                row.combo.stance.token().to_string(),
                if row.outcome { "1" } else { "0" }.to_string(),
            ];
            record.extend(row.values.iter().map(|v| format!("{v:.12}")));
            w.write_record(&record)?;
        }
    }
    w.flush()
}

/// Write the recorded scales as CSV (variable, sd, min, max).
pub fn write_scales_csv<W: std::io::Write>(
    scales: &StandardizationScales,
    out: W,
) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["variable", "sd", "min", "max"])?;
    for e in &scales.entries {
        w.write_record([
            e.name.clone(),
            format!("{:.6}", e.sd),
            format!("{:.6}", e.min),
            format!("{:.6}", e.max),
        ])?;
    }
    w.flush()
}
