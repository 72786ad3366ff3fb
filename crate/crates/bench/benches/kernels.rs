//! Benchmarks for the hot paths: statistic evaluation, dataset
//! construction, and the conditional-logit solver.

use chrono::NaiveDate;
use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use rem_core::corpus::Stance;
use rem_core::inference::{fit_conditional_logit, FitOptions};
use rem_core::netstats::{statistic_vector, HalfLife, PastIndex, StatColumn, StatOptions};
use rem_core::riskset::{build_rate_dataset, RateSpec, Standardization};
use rem_core::synth::random_corpus;
use rem_core::{ActorId, BeliefId};

fn bench_statistics(c: &mut Criterion) {
    let corpus = random_corpus(1, 30, 20, 5_000, 400);
    let types: Vec<_> = corpus.actors.iter().map(|a| a.actor_type).collect();
    let columns = StatColumn::rate_set();
    let h = HalfLife::new(20.0).unwrap();
    let opts = StatOptions::default();

    let mut index = PastIndex::new(corpus.n_actors(), corpus.n_beliefs());
    for e in &corpus.events {
        index.push(corpus.clock.time_of(e.date), e.actor, e.belief, e.stance);
    }
    let t = corpus.clock.time_of(corpus.last_date()) + 1.0;
    index.advance_cutoff(t);

    c.bench_function("statistic_vector_full_set", |b| {
        let mut k = 0u32;
        b.iter(|| {
            let a = ActorId(k % 30);
            let bel = BeliefId((k / 30) % 20);
            k = k.wrapping_add(1);
            statistic_vector(
                &index,
                t,
                a,
                bel,
                Stance::Positive,
                &columns,
                h,
                opts,
                &types,
            )
        })
    });
}

fn bench_rate_dataset(c: &mut Criterion) {
    let corpus = random_corpus(2, 15, 10, 1_500, 150);
    let cutoff = NaiveDate::from_ymd_opt(1996, 1, 15).unwrap();
    let mut spec = RateSpec::main_model(cutoff, HalfLife::new(20.0).unwrap());
    spec.standardization = Standardization::None;

    c.bench_function("build_rate_dataset_1500_events", |b| {
        b.iter(|| build_rate_dataset(&corpus, &spec).unwrap())
    });
}

fn bench_clogit(c: &mut Criterion) {
    let corpus = random_corpus(3, 15, 10, 1_500, 150);
    let cutoff = NaiveDate::from_ymd_opt(1996, 1, 8).unwrap();
    let spec = RateSpec::main_model(cutoff, HalfLife::new(20.0).unwrap());
    let (dataset, _) = build_rate_dataset(&corpus, &spec).unwrap();
    let strata = dataset.clogit_strata();

    c.bench_function("fit_conditional_logit_main_model", |b| {
        b.iter_batched(
            || strata.clone(),
            |s| fit_conditional_logit(&s, &dataset.column_names, &FitOptions::default()).unwrap(),
            BatchSize::LargeInput,
        )
    });
}

criterion_group!(benches, bench_statistics, bench_rate_dataset, bench_clogit);
criterion_main!(benches);
