//! Seeded synthetic corpus generators, used by the test suites and the
//! benchmarks: uniform random corpora for oracle cross-checks and
//! model-driven corpora with known coefficients for recovery studies.

use chrono::{Duration, NaiveDate};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{
    ActorId, ActorRecord, ActorType, BeliefId, ClockMode, DebateCorpus, Stance, StatementEvent,
};
use crate::netstats::{statistic_vector, HalfLife, PastIndex, StatColumn, StatOptions};

const TYPE_POOL: [ActorType; 7] = [
    ActorType::TradeUnionSocial,
    ActorType::EmployerLiberal,
    ActorType::Financial,
    ActorType::Government,
    ActorType::Science,
    ActorType::Youth,
    ActorType::Other,
];

fn actor_table(rng: &mut ChaCha8Rng, n_actors: usize) -> Vec<ActorRecord> {
    (0..n_actors)
        .map(|k| {
            let actor_type = TYPE_POOL[rng.gen_range(0..TYPE_POOL.len())];
            ActorRecord {
                id: format!("a{k:03}"),
                label: format!("Actor {k}"),
                actor_type,
                is_government: actor_type == ActorType::Government,
            }
        })
        .collect()
}

/// Uniform random corpus: `n_events` statements over `n_days` calendar
/// days with uniform actors, beliefs, stances, and random actor types.
pub fn random_corpus(
    seed: u64,
    n_actors: usize,
    n_beliefs: usize,
    n_events: usize,
    n_days: usize,
) -> DebateCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = NaiveDate::from_ymd_opt(1996, 1, 1).unwrap();
    let actors = actor_table(&mut rng, n_actors);
    let beliefs = (0..n_beliefs).map(|k| format!("b{k:03}")).collect();
    let events: Vec<StatementEvent> = (0..n_events)
        .map(|_| StatementEvent {
            date: start + Duration::days(rng.gen_range(0..n_days as i64)),
            actor: ActorId(rng.gen_range(0..n_actors as u32)),
            belief: BeliefId(rng.gen_range(0..n_beliefs as u32)),
            stance: if rng.gen_bool(0.5) {
                Stance::Positive
            } else {
                Stance::Negative
            },
        })
        .collect();
    DebateCorpus::from_parts(events, actors, beliefs, ClockMode::EventDays)
        .expect("synthetic corpus is well-formed")
}

/// Corpus drawn from a known rate model: each day samples
/// `events_per_day` candidates from the full actor x belief x stance
/// grid with probability proportional to exp(x . beta), where x are the
/// raw (unstandardized) `columns` statistics over the strict past.
/// `seed_days` uniform days are prepended so the statistics have history
/// to work with.
#[allow(clippy::too_many_arguments)]
pub fn model_driven_corpus(
    seed: u64,
    n_actors: usize,
    n_beliefs: usize,
    n_days: usize,
    events_per_day: usize,
    seed_days: usize,
    columns: &[StatColumn],
    beta: &[f64],
    half_life: HalfLife,
) -> DebateCorpus {
    assert_eq!(columns.len(), beta.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = NaiveDate::from_ymd_opt(1996, 1, 1).unwrap();
    let actors = actor_table(&mut rng, n_actors);
    let types: Vec<ActorType> = actors.iter().map(|a| a.actor_type).collect();
    let beliefs = (0..n_beliefs).map(|k| format!("b{k:03}")).collect();
    let opts = StatOptions::default();

    let mut candidates: Vec<(ActorId, BeliefId, Stance)> = Vec::new();
    for a in 0..n_actors as u32 {
        for b in 0..n_beliefs as u32 {
            for s in Stance::BOTH {
                candidates.push((ActorId(a), BeliefId(b), s));
            }
        }
    }

    let mut index = PastIndex::new(n_actors, n_beliefs);
    let mut events: Vec<StatementEvent> = Vec::new();
    for day in 0..(seed_days + n_days) {
        let date = start + Duration::days(day as i64);
        let t = (day + 1) as f64; // event-day clock: every day has events
        index.advance_cutoff(t);
        // statistics see the strict past only, so candidate weights are
        // shared by every draw of the day
        let day_weights: Option<(Vec<f64>, f64)> = if day < seed_days {
            None
        } else {
            let utilities: Vec<f64> = candidates
                .iter()
                .map(|&(a, b, s)| {
                    let x = statistic_vector(&index, t, a, b, s, columns, half_life, opts, &types);
                    x.iter().zip(beta).map(|(v, c)| v * c).sum()
                })
                .collect();
            let max_u = utilities.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let weights: Vec<f64> = utilities.iter().map(|u| (u - max_u).exp()).collect();
            let total: f64 = weights.iter().sum();
            Some((weights, total))
        };
        let mut day_events: Vec<StatementEvent> = Vec::new();
        for _ in 0..events_per_day {
            let pick = match &day_weights {
                None => candidates[rng.gen_range(0..candidates.len())],
                Some((weights, total)) => {
                    let mut target = rng.gen::<f64>() * total;
                    let mut pick = candidates.len() - 1;
                    for (k, w) in weights.iter().enumerate() {
                        target -= w;
                        if target < 0.0 {
                            pick = k;
                            break;
                        }
                    }
                    candidates[pick]
                }
            };
            day_events.push(StatementEvent {
                date,
                actor: pick.0,
                belief: pick.1,
                stance: pick.2,
            });
        }
        for e in &day_events {
            index.push(t, e.actor, e.belief, e.stance);
        }
        events.extend(day_events);
    }
    DebateCorpus::from_parts(events, actors, beliefs, ClockMode::EventDays)
        .expect("synthetic corpus is well-formed")
}

/// First analysis date of a model-driven corpus built with `seed_days`.
pub fn analysis_cutoff(seed_days: usize) -> NaiveDate {
    NaiveDate::from_ymd_opt(1996, 1, 1).unwrap() + Duration::days(seed_days as i64)
}
