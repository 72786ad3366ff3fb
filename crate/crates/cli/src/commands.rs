//! Subcommand implementations. Each command loads the corpus, composes
//! the core operations, and writes stamped artifacts into the output
//! directory.

use std::path::PathBuf;

use serde_json::json;

use rem_core::corpus::{parse_corpus, DebateCorpus};
use rem_core::inference::{
    combined_log_likelihood, fit_conditional_logit, fit_logistic, FitOptions, ModelFit,
};
use rem_core::report::{render_fit_table, render_gof_summary};
use rem_core::riskset::{
    build_rate_dataset, build_type_dataset, write_rate_csv, write_scales_csv, RateDataset,
    StandardizationScales, TypeDataset,
};
use rem_core::simulate::{
    evaluate_gof, random_baseline, simulate_window, write_match_rates_csv, write_timing_csv,
    RateModel, SimOutput, TypeModel,
};

use crate::artifacts::{config_hash, write_json, write_stamped};
use crate::config::RunConfig;
use crate::CliError;

/// Everything a command needs: the validated config, its verbatim text,
/// the derived hash, and the parsed corpus.
pub struct RunContext {
    pub config: RunConfig,
    pub config_text: String,
    pub hash: String,
    pub corpus: DebateCorpus,
}

impl RunContext {
    pub fn new(config: RunConfig, config_text: String) -> Result<RunContext, CliError> {
        let corpus = parse_corpus(
            &config.inputs.statements,
            &config.inputs.actors,
            config.analysis.clock,
        )?;
        let hash = config_hash(&config_text);
        Ok(RunContext {
            config,
            config_text,
            hash,
            corpus,
        })
    }

    fn out(&self, name: &str) -> PathBuf {
        self.config.run.output_dir.join(name)
    }

    /// Suffix for sweep artifacts: empty for a single half-life.
    fn suffix(&self, half_life: f64) -> String {
        if self.config.half_life_values().len() == 1 {
            String::new()
        } else {
            format!("_h{}", format!("{half_life}").replace('.', "p"))
        }
    }

    fn base_artifact(&self) -> serde_json::Value {
        json!({
            "version": rem_core::VERSION,
            "config_hash": self.hash,
            "config_echo": self.config_text,
        })
    }

    fn fit_artifact(
        &self,
        model: &str,
        half_life: f64,
        fit: &ModelFit,
        scales: &StandardizationScales,
        extra: serde_json::Value,
    ) -> serde_json::Value {
        let mut artifact = self.base_artifact();
        let obj = artifact.as_object_mut().unwrap();
        obj.insert("model".into(), json!(model));
        obj.insert("half_life".into(), json!(half_life));
        obj.insert("tie_handling".into(), json!("breslow"));
        obj.insert("fit".into(), serde_json::to_value(fit).unwrap());
        obj.insert("z_values".into(), json!(fit.z_values()));
        obj.insert("p_values".into(), json!(fit.p_values()));
        obj.insert("scales".into(), serde_json::to_value(scales).unwrap());
        if let serde_json::Value::Object(extra) = extra {
            obj.extend(extra);
        }
        artifact
    }

    fn rate_dataset(&self, half_life: f64) -> Result<(RateDataset, usize), CliError> {
        let spec = self.config.rate_spec(half_life)?;
        Ok(build_rate_dataset(&self.corpus, &spec)?)
    }

    fn type_dataset(&self, half_life: f64) -> Result<TypeDataset, CliError> {
        let spec = self.config.type_spec(half_life)?;
        Ok(build_type_dataset(&self.corpus, &spec)?)
    }

    fn fit_rate_once(&self, half_life: f64) -> Result<(ModelFit, RateDataset, usize), CliError> {
        let (dataset, n_burn_in) = self.rate_dataset(half_life)?;
        let fit = fit_conditional_logit(
            &dataset.clogit_strata(),
            &dataset.column_names,
            &FitOptions::default(),
        )?;
        Ok((fit, dataset, n_burn_in))
    }

    fn fit_type_once(&self, half_life: f64) -> Result<(ModelFit, TypeDataset), CliError> {
        let dataset = self.type_dataset(half_life)?;
        let (x, y) = dataset.design();
        let fit = fit_logistic(&x, &y, &dataset.column_names, &FitOptions::default())?;
        Ok((fit, dataset))
    }

    fn simulate_pair(&self, half_life: f64) -> Result<(SimOutput, SimOutput), CliError> {
        let sim_config = self.config.simulation_config()?;
        let (rate_fit, rate_ds, _) = self.fit_rate_once(half_life)?;
        let (type_fit, type_ds) = self.fit_type_once(half_life)?;
        let rate_model = RateModel {
            spec: self.config.rate_spec(half_life)?,
            coefficients: rate_fit.coefficients.clone(),
            scales: rate_ds.scales.clone(),
        };
        let type_model = TypeModel {
            spec: self.config.type_spec(half_life)?,
            coefficients: type_fit.coefficients.clone(),
            scales: type_ds.scales.clone(),
        };
        let fitted = simulate_window(&self.corpus, &rate_model, &type_model, &sim_config)?;
        let baseline = random_baseline(&self.corpus, &sim_config)?;
        Ok((fitted, baseline))
    }
}

/// Validate and summarize the corpus; write the weekly frequency series.
pub fn cmd_ingest(ctx: &RunContext) -> Result<(), CliError> {
    let corpus = &ctx.corpus;
    let mut artifact = ctx.base_artifact();
    artifact.as_object_mut().unwrap().extend(
        json!({
            "actors": corpus.n_actors(),
            "beliefs": corpus.n_beliefs(),
            "statements": corpus.events.len(),
            "event_days": corpus.clock.n_event_days(),
            "first_date": corpus.first_date(),
            "last_date": corpus.last_date(),
        })
        .as_object()
        .unwrap()
        .clone(),
    );
    write_json(&ctx.out("corpus_summary.json"), &artifact)?;

    let mut body = String::from("week,statements\n");
    for (week, count) in rem_core::weekly_frequencies(corpus) {
        body.push_str(&format!("{week},{count}\n"));
    }
    write_stamped(&ctx.out("weekly_frequencies.csv"), &ctx.hash, &body)?;
    println!(
        "corpus: {} actors, {} beliefs, {} statements over {} event days",
        corpus.n_actors(),
        corpus.n_beliefs(),
        corpus.events.len(),
        corpus.clock.n_event_days()
    );
    Ok(())
}

/// Write the rate and type design matrices and their scales as CSV.
pub fn cmd_stats(ctx: &RunContext) -> Result<(), CliError> {
    for h in ctx.config.half_life_values() {
        let suffix = ctx.suffix(h);
        let (rate_ds, _) = ctx.rate_dataset(h)?;
        let mut buf = Vec::new();
        write_rate_csv(&rate_ds, &ctx.corpus, &mut buf)?;
        write_stamped(
            &ctx.out(&format!("rate_design{suffix}.csv")),
            &ctx.hash,
            &String::from_utf8(buf).expect("utf8 csv"),
        )?;
        let mut buf = Vec::new();
        write_scales_csv(&rate_ds.scales, &mut buf)?;
        write_stamped(
            &ctx.out(&format!("rate_scales{suffix}.csv")),
            &ctx.hash,
            &String::from_utf8(buf).expect("utf8 csv"),
        )?;

        let type_ds = ctx.type_dataset(h)?;
        let mut buf = Vec::new();
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            let mut header = vec![
                "date".to_string(),
                "actor".to_string(),
                "belief".to_string(),
                "outcome".to_string(),
            ];
            header.extend(type_ds.column_names.iter().cloned());
            w.write_record(&header).map_err(csv_io)?;
            for (row, date) in type_ds.rows.iter().zip(&type_ds.dates) {
                let mut record = vec![
                    date.format("%Y-%m-%d").to_string(),
                    ctx.corpus.actor(row.combo.actor).id.clone(),
                    ctx.corpus.belief_name(row.combo.belief).to_string(),
                    if row.outcome { "1" } else { "0" }.to_string(),
                ];
                record.extend(row.values.iter().map(|v| format!("{v:.12}")));
                w.write_record(&record).map_err(csv_io)?;
            }
            w.flush()?;
        }
        write_stamped(
            &ctx.out(&format!("type_design{suffix}.csv")),
            &ctx.hash,
            &String::from_utf8(buf).expect("utf8 csv"),
        )?;
        let mut buf = Vec::new();
        write_scales_csv(&type_ds.scales, &mut buf)?;
        write_stamped(
            &ctx.out(&format!("type_scales{suffix}.csv")),
            &ctx.hash,
            &String::from_utf8(buf).expect("utf8 csv"),
        )?;
        println!(
            "h={h}: rate design {} rows, type design {} rows",
            rate_ds.n_rows(),
            type_ds.rows.len()
        );
    }
    Ok(())
}

fn csv_io(e: csv::Error) -> CliError {
    CliError::Data(format!("csv write failed: {e}"))
}

/// Fit the rate model (per half-life on a sweep) and write JSON + text.
pub fn cmd_fit_rate(ctx: &RunContext) -> Result<(), CliError> {
    for h in ctx.config.half_life_values() {
        let suffix = ctx.suffix(h);
        let (fit, dataset, n_burn_in) = ctx.fit_rate_once(h)?;
        let artifact = ctx.fit_artifact(
            "rate",
            h,
            &fit,
            &dataset.scales,
            json!({
                "n_strata": dataset.strata.len(),
                "n_burn_in_events": n_burn_in,
            }),
        );
        write_json(&ctx.out(&format!("fit_rate{suffix}.json")), &artifact)?;
        let table = render_fit_table(&fit, &format!("Rate model (conditional logit, h = {h})"));
        write_stamped(&ctx.out(&format!("fit_rate{suffix}.txt")), &ctx.hash, &table)?;
        print!("{table}");
    }
    Ok(())
}

/// Fit the type model (per half-life on a sweep) and write JSON + text.
pub fn cmd_fit_type(ctx: &RunContext) -> Result<(), CliError> {
    for h in ctx.config.half_life_values() {
        let suffix = ctx.suffix(h);
        let (fit, dataset) = ctx.fit_type_once(h)?;
        let artifact = ctx.fit_artifact("type", h, &fit, &dataset.scales, json!({}));
        write_json(&ctx.out(&format!("fit_type{suffix}.json")), &artifact)?;
        let table = render_fit_table(&fit, &format!("Type model (logistic, h = {h})"));
        write_stamped(&ctx.out(&format!("fit_type{suffix}.txt")), &ctx.hash, &table)?;
        print!("{table}");
    }
    Ok(())
}

fn sequences_csv(ctx: &RunContext, sim: &SimOutput) -> String {
    let mut body = String::from("replication,date,actor,belief,stance,truncated\n");
    for (k, rep) in sim.replications.iter().enumerate() {
        for e in &rep.events {
            body.push_str(&format!(
                "{k},{},{},{},{},{}\n",
                e.date.format("%Y-%m-%d"),
                ctx.corpus.actor(e.actor).id,
                ctx.corpus.belief_name(e.belief),
                e.stance.token(),
                if rep.truncated { 1 } else { 0 },
            ));
        }
    }
    body
}

/// Simulate the prediction window from the fitted models plus the uniform
/// baseline; write both event sequences.
pub fn cmd_simulate(ctx: &RunContext) -> Result<(), CliError> {
    let h = ctx.config.half_life_values()[0];
    let (fitted, baseline) = ctx.simulate_pair(h)?;
    write_stamped(
        &ctx.out("simulated_sequences.csv"),
        &ctx.hash,
        &sequences_csv(ctx, &fitted),
    )?;
    write_stamped(
        &ctx.out("baseline_sequences.csv"),
        &ctx.hash,
        &sequences_csv(ctx, &baseline),
    )?;
    let truncated = fitted.replications.iter().filter(|r| r.truncated).count();
    if truncated > 0 {
        eprintln!("warning: {truncated} replication(s) exhausted the risk set early");
    }
    println!(
        "simulated {} replications over {} event days",
        fitted.replications.len(),
        fitted.window_dates.len()
    );
    Ok(())
}

/// Simulate and score: match rates and timing errors for the fitted model
/// and the uniform baseline.
pub fn cmd_gof(ctx: &RunContext) -> Result<(), CliError> {
    let h = ctx.config.half_life_values()[0];
    let (fitted, baseline) = ctx.simulate_pair(h)?;
    let model_report = evaluate_gof(&ctx.corpus, &fitted)?;
    let baseline_report = evaluate_gof(&ctx.corpus, &baseline)?;

    for (label, report) in [("model", &model_report), ("baseline", &baseline_report)] {
        let mut buf = Vec::new();
        write_match_rates_csv(&report.match_rates, &mut buf)?;
        write_stamped(
            &ctx.out(&format!("match_rates_{label}.csv")),
            &ctx.hash,
            &String::from_utf8(buf).expect("utf8 csv"),
        )?;
        let mut buf = Vec::new();
        write_timing_csv(&report.timing_errors, &mut buf)?;
        write_stamped(
            &ctx.out(&format!("timing_errors_{label}.csv")),
            &ctx.hash,
            &String::from_utf8(buf).expect("utf8 csv"),
        )?;
    }

    let mut artifact = ctx.base_artifact();
    artifact.as_object_mut().unwrap().extend(
        json!({
            "half_life": h,
            "model": serde_json::to_value(&model_report).unwrap(),
            "baseline": serde_json::to_value(&baseline_report).unwrap(),
        })
        .as_object()
        .unwrap()
        .clone(),
    );
    write_json(&ctx.out("gof_report.json"), &artifact)?;

    let mut summary = render_gof_summary(&model_report, "fitted model");
    summary.push_str(&render_gof_summary(&baseline_report, "uniform baseline"));
    write_stamped(&ctx.out("gof_summary.txt"), &ctx.hash, &summary)?;
    print!("{summary}");
    Ok(())
}

/// Run both fits and report the combined likelihood in the run metadata;
/// helper shared by tests.
pub fn combined_likelihood(ctx: &RunContext, half_life: f64) -> Result<f64, CliError> {
    let (rate_fit, _, _) = ctx.fit_rate_once(half_life)?;
    let (type_fit, _) = ctx.fit_type_once(half_life)?;
    Ok(combined_log_likelihood(&rate_fit, &type_fit))
}
