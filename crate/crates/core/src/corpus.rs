//! Data model and ingestion for signed bipartite statement sequences.
//!
//! A corpus is a time-ordered sequence of signed actor-belief statements
//! plus an actor attribute table. Actor and belief identifiers are opaque
//! strings in files and dense integer indices internally.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use chrono::{Datelike, NaiveDate, Weekday};
use serde::{Deserialize, Serialize};

use crate::error::DataError;

/// Valence of a statement: support (+1) or rejection (-1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Stance {
    Positive,
    Negative,
}

impl Stance {
    pub fn parse(token: &str) -> Option<Stance> {
        match token.trim() {
            "+1" | "1" => Some(Stance::Positive),
            "-1" => Some(Stance::Negative),
            _ => None,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Stance::Positive => "+1",
            Stance::Negative => "-1",
        }
    }

    pub fn flipped(self) -> Stance {
        match self {
            Stance::Positive => Stance::Negative,
            Stance::Negative => Stance::Positive,
        }
    }

    pub const BOTH: [Stance; 2] = [Stance::Positive, Stance::Negative];
}

/// Dense actor index into `DebateCorpus::actors`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ActorId(pub u32);

/// Dense belief index into `DebateCorpus::beliefs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BeliefId(pub u32);

/// Broad organizational category of an actor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ActorType {
    TradeUnionSocial,
    EmployerLiberal,
    Financial,
    Government,
    Science,
    Youth,
    Other,
}

impl ActorType {
    pub fn parse(token: &str) -> Option<ActorType> {
        match token.trim() {
            "trade_union_social" => Some(ActorType::TradeUnionSocial),
            "employer_liberal" => Some(ActorType::EmployerLiberal),
            "financial" => Some(ActorType::Financial),
            "government" => Some(ActorType::Government),
            "science" => Some(ActorType::Science),
            "youth" => Some(ActorType::Youth),
            "other" => Some(ActorType::Other),
            _ => None,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            ActorType::TradeUnionSocial => "trade_union_social",
            ActorType::EmployerLiberal => "employer_liberal",
            ActorType::Financial => "financial",
            ActorType::Government => "government",
            ActorType::Science => "science",
            ActorType::Youth => "youth",
            ActorType::Other => "other",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ActorRecord {
    pub id: String,
    pub label: String,
    pub actor_type: ActorType,
    pub is_government: bool,
}

/// One dated, signed actor-belief statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatementEvent {
    pub date: NaiveDate,
    pub actor: ActorId,
    pub belief: BeliefId,
    pub stance: Stance,
}

/// How elapsed time between events is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClockMode {
    /// Consecutive index over calendar dates with at least one statement.
    EventDays,
    /// Plain difference in calendar days.
    CalendarDays,
}

/// Maps calendar dates to the time axis used for decay.
#[derive(Debug, Clone)]
pub struct Clock {
    pub mode: ClockMode,
    /// Distinct statement dates, ascending. Event day k is `dates[k]`.
    dates: Vec<NaiveDate>,
}

impl Clock {
    pub fn new(mode: ClockMode, mut statement_dates: Vec<NaiveDate>) -> Clock {
        statement_dates.sort_unstable();
        statement_dates.dedup();
        Clock {
            mode,
            dates: statement_dates,
        }
    }

    pub fn n_event_days(&self) -> usize {
        self.dates.len()
    }

    pub fn event_dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    /// Event-day index of a statement date, if it has one.
    pub fn event_day_of(&self, date: NaiveDate) -> Option<usize> {
        self.dates.binary_search(&date).ok()
    }

    /// Position of `date` on the active time axis. Dates between statement
    /// days in event-day mode sit at the index the next statement day would
    /// get, so elapsed times to past events stay consistent.
    pub fn time_of(&self, date: NaiveDate) -> f64 {
        match self.mode {
            ClockMode::EventDays => self.dates.partition_point(|d| *d < date) as f64,
            ClockMode::CalendarDays => match self.dates.first() {
                Some(first) => (date - *first).num_days() as f64,
                None => 0.0,
            },
        }
    }
}

/// Immutable, validated debate corpus.
#[derive(Debug, Clone)]
pub struct DebateCorpus {
    /// Sorted nondecreasing by date, stable within a date.
    pub events: Vec<StatementEvent>,
    pub actors: Vec<ActorRecord>,
    pub beliefs: Vec<String>,
    pub clock: Clock,
    actor_index: HashMap<String, ActorId>,
    belief_index: HashMap<String, BeliefId>,
}

impl DebateCorpus {
    pub fn n_actors(&self) -> usize {
        self.actors.len()
    }

    pub fn n_beliefs(&self) -> usize {
        self.beliefs.len()
    }

    pub fn actor_id(&self, name: &str) -> Option<ActorId> {
        self.actor_index.get(name).copied()
    }

    pub fn belief_id(&self, name: &str) -> Option<BeliefId> {
        self.belief_index.get(name).copied()
    }

    pub fn actor(&self, id: ActorId) -> &ActorRecord {
        &self.actors[id.0 as usize]
    }

    pub fn belief_name(&self, id: BeliefId) -> &str {
        &self.beliefs[id.0 as usize]
    }

    pub fn first_date(&self) -> NaiveDate {
        self.events.first().expect("non-empty corpus").date
    }

    pub fn last_date(&self) -> NaiveDate {
        self.events.last().expect("non-empty corpus").date
    }

    /// Build a corpus from already-decoded rows. Events are sorted stably by
    /// date; within one date file order is preserved.
    pub fn from_parts(
        mut events: Vec<StatementEvent>,
        actors: Vec<ActorRecord>,
        beliefs: Vec<String>,
        mode: ClockMode,
    ) -> Result<DebateCorpus, DataError> {
        if events.is_empty() {
            return Err(DataError::EmptyCorpus);
        }
        events.sort_by_key(|e| e.date);
        let clock = Clock::new(mode, events.iter().map(|e| e.date).collect());
        let actor_index = actors
            .iter()
            .enumerate()
            .map(|(k, a)| (a.id.clone(), ActorId(k as u32)))
            .collect();
        let belief_index = beliefs
            .iter()
            .enumerate()
            .map(|(k, b)| (b.clone(), BeliefId(k as u32)))
            .collect();
        Ok(DebateCorpus {
            events,
            actors,
            beliefs,
            clock,
            actor_index,
            belief_index,
        })
    }

    /// Check the minimum dimensions required for an estimation run.
    pub fn check_estimable(&self) -> Result<(), DataError> {
        if self.actors.len() < 2 || self.beliefs.is_empty() {
            return Err(DataError::TooSmall {
                actors: self.actors.len(),
                beliefs: self.beliefs.len(),
            });
        }
        Ok(())
    }
}

/// Proleptic Gregorian weekday of a date.
pub fn weekday(date: NaiveDate) -> Weekday {
    date.weekday()
}

fn header_positions(
    headers: &csv::StringRecord,
    required: &[&str],
    path: &str,
) -> Result<Vec<usize>, DataError> {
    required
        .iter()
        .map(|col| {
            headers
                .iter()
                .position(|h| h.trim() == *col)
                .ok_or_else(|| DataError::MissingColumn {
                    path: path.to_string(),
                    column: col.to_string(),
                })
        })
        .collect()
}

/// Parse and validate a statement file plus actor attribute file.
///
/// Statement schema: `date,actor,belief,stance` with ISO-8601 dates and
/// stance in {+1, -1}. Actor schema: `actor,label,actor_type,is_government`.
/// Beliefs are enumerated from the statement file. Actors that never speak
/// may still appear in the attribute file.
pub fn parse_corpus(
    statements_path: &Path,
    actors_path: &Path,
    mode: ClockMode,
) -> Result<DebateCorpus, DataError> {
    let spath = statements_path.display().to_string();
    let apath = actors_path.display().to_string();

    let mut actor_reader =
        csv::Reader::from_path(actors_path).map_err(|e| csv_open_err(e, &apath))?;
    let headers = actor_reader
        .headers()
        .map_err(|e| DataError::Csv {
            path: apath.clone(),
            source: e,
        })?
        .clone();
    let apos = header_positions(&headers, &["actor", "label", "actor_type", "is_government"], &apath)?;

    let mut actors: Vec<ActorRecord> = Vec::new();
    let mut actor_index: HashMap<String, ActorId> = HashMap::new();
    for (k, record) in actor_reader.records().enumerate() {
        let row = k + 2; // 1-based, after header
        let record = record.map_err(|e| DataError::Csv {
            path: apath.clone(),
            source: e,
        })?;
        let id = record.get(apos[0]).unwrap_or("").trim().to_string();
        let label = record.get(apos[1]).unwrap_or("").trim().to_string();
        let type_token = record.get(apos[2]).unwrap_or("").trim();
        let actor_type =
            ActorType::parse(type_token).ok_or_else(|| DataError::InvalidActorType {
                path: apath.clone(),
                row,
                value: type_token.to_string(),
            })?;
        let gov_token = record.get(apos[3]).unwrap_or("").trim();
        let is_government = match gov_token {
            "1" => true,
            "0" => false,
            other => {
                return Err(DataError::InvalidBool {
                    path: apath.clone(),
                    row,
                    value: other.to_string(),
                })
            }
        };
        if is_government != (actor_type == ActorType::Government) {
            return Err(DataError::GovernmentFlagMismatch {
                path: apath.clone(),
                row,
                id,
            });
        }
        if actor_index.contains_key(&id) {
            return Err(DataError::DuplicateActor {
                path: apath.clone(),
                row,
                id,
            });
        }
        actor_index.insert(id.clone(), ActorId(actors.len() as u32));
        actors.push(ActorRecord {
            id,
            label,
            actor_type,
            is_government,
        });
    }

    let mut stmt_reader =
        csv::Reader::from_path(statements_path).map_err(|e| csv_open_err(e, &spath))?;
    let headers = stmt_reader
        .headers()
        .map_err(|e| DataError::Csv {
            path: spath.clone(),
            source: e,
        })?
        .clone();
    let spos = header_positions(&headers, &["date", "actor", "belief", "stance"], &spath)?;

    let mut events: Vec<StatementEvent> = Vec::new();
    let mut beliefs: Vec<String> = Vec::new();
    let mut belief_index: HashMap<String, BeliefId> = HashMap::new();
    for (k, record) in stmt_reader.records().enumerate() {
        let row = k + 2;
        let record = record.map_err(|e| DataError::Csv {
            path: spath.clone(),
            source: e,
        })?;
        let date_token = record.get(spos[0]).unwrap_or("").trim();
        let date = NaiveDate::parse_from_str(date_token, "%Y-%m-%d").map_err(|_| {
            DataError::MalformedDate {
                path: spath.clone(),
                row,
                value: date_token.to_string(),
            }
        })?;
        let actor_token = record.get(spos[1]).unwrap_or("").trim();
        let actor = *actor_index
            .get(actor_token)
            .ok_or_else(|| DataError::UnknownActor {
                path: spath.clone(),
                row,
                id: actor_token.to_string(),
            })?;
        let belief_token = record.get(spos[2]).unwrap_or("").trim();
        let belief = *belief_index
            .entry(belief_token.to_string())
            .or_insert_with(|| {
                beliefs.push(belief_token.to_string());
                BeliefId((beliefs.len() - 1) as u32)
            });
        let stance_token = record.get(spos[3]).unwrap_or("").trim();
        let stance = Stance::parse(stance_token).ok_or_else(|| DataError::InvalidStance {
            path: spath.clone(),
            row,
            value: stance_token.to_string(),
        })?;
        events.push(StatementEvent {
            date,
            actor,
            belief,
            stance,
        });
    }

    DebateCorpus::from_parts(events, actors, beliefs, mode)
}

fn csv_open_err(e: csv::Error, path: &str) -> DataError {
    if e.is_io_error() {
        if let csv::ErrorKind::Io(io) = e.into_kind() {
            return DataError::Io {
                path: path.to_string(),
                source: io,
            };
        }
        unreachable!();
    }
    DataError::Csv {
        path: path.to_string(),
        source: e,
    }
}

/// Serialize the statement sequence back to its CSV schema.
pub fn write_statements<W: Write>(corpus: &DebateCorpus, out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["date", "actor", "belief", "stance"])?;
    for e in &corpus.events {
        w.write_record([
            e.date.format("%Y-%m-%d").to_string(),
            corpus.actor(e.actor).id.clone(),
            corpus.belief_name(e.belief).to_string(),
            e.stance.token().to_string(),
        ])?;
    }
    w.flush()
}

/// Serialize the actor attribute table back to its CSV schema.
pub fn write_actors<W: Write>(corpus: &DebateCorpus, out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["actor", "label", "actor_type", "is_government"])?;
    for a in &corpus.actors {
        w.write_record([
            a.id.clone(),
            a.label.clone(),
            a.actor_type.token().to_string(),
            if a.is_government { "1" } else { "0" }.to_string(),
        ])?;
    }
    w.flush()
}

/// Split events into burn-in (strictly before `cutoff`) and analysis
/// (at/after `cutoff`). Burn-in events seed the past network but never
/// become strata or dependent observations.
pub fn split_burn_in(
    corpus: &DebateCorpus,
    cutoff: NaiveDate,
) -> Result<(&[StatementEvent], &[StatementEvent]), DataError> {
    let split = corpus.events.partition_point(|e| e.date < cutoff);
    if split == corpus.events.len() {
        return Err(DataError::EmptyAnalysisPeriod { cutoff });
    }
    Ok(corpus.events.split_at(split))
}

/// Count statements per ISO week, for frequency-series output.
/// Returns (iso_week_label, count) ascending by week.
pub fn weekly_frequencies(corpus: &DebateCorpus) -> Vec<(String, usize)> {
    let mut counts: Vec<(String, usize)> = Vec::new();
    let mut map: HashMap<String, usize> = HashMap::new();
    for e in &corpus.events {
        let iso = e.date.iso_week();
        let label = format!("{}-W{:02}", iso.year(), iso.week());
        *map.entry(label).or_insert(0) += 1;
    }
    counts.extend(map.into_iter());
    counts.sort();
    counts
}
