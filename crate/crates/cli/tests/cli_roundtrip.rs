//! End-to-end exercise of every subcommand on a synthetic corpus, plus
//! the exit-code contract of the binary.

use std::fs;
use std::path::Path;
use std::process::Command;

use rem_cli::commands::{self, RunContext};
use rem_cli::config::RunConfig;
use rem_core::corpus::{write_actors, write_statements};
use rem_core::synth::random_corpus;

fn write_fixture(dir: &Path, seed: u64) -> (String, String) {
    let corpus = random_corpus(seed, 8, 6, 300, 40);
    let statements = dir.join("statements.csv");
    let actors = dir.join("actors.csv");
    write_statements(&corpus, fs::File::create(&statements).unwrap()).unwrap();
    write_actors(&corpus, fs::File::create(&actors).unwrap()).unwrap();
    (
        statements.to_string_lossy().into_owned(),
        actors.to_string_lossy().into_owned(),
    )
}

fn write_config(dir: &Path, statements: &str, actors: &str, with_sim: bool) -> std::path::PathBuf {
    let out_dir = dir.join("out");
    let sim = if with_sim {
        "\n[simulation]\nwindow_start = \"1996-02-01\"\nn_event_days = 5\nn_replications = 8\n"
    } else {
        ""
    };
    let text = format!(
        r#"[inputs]
statements = "{statements}"
actors = "{actors}"

[analysis]
cutoff = "1996-01-08"
half_life = 20.0
{sim}
[run]
seed = 42
threads = 1
output_dir = "{}"
"#,
        out_dir.display()
    );
    let path = dir.join("run.toml");
    fs::write(&path, text).unwrap();
    path
}

fn context(config_path: &Path) -> RunContext {
    let (config, text) = RunConfig::load(config_path).unwrap();
    RunContext::new(config, text).unwrap()
}

#[test]
fn every_subcommand_writes_its_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let (statements, actors) = write_fixture(dir.path(), 7);
    let config_path = write_config(dir.path(), &statements, &actors, true);
    let ctx = context(&config_path);

    commands::cmd_ingest(&ctx).unwrap();
    commands::cmd_stats(&ctx).unwrap();
    commands::cmd_fit_rate(&ctx).unwrap();
    commands::cmd_fit_type(&ctx).unwrap();
    commands::cmd_simulate(&ctx).unwrap();
    commands::cmd_gof(&ctx).unwrap();

    let out = dir.path().join("out");
    for name in [
        "corpus_summary.json",
        "weekly_frequencies.csv",
        "rate_design.csv",
        "rate_scales.csv",
        "type_design.csv",
        "type_scales.csv",
        "fit_rate.json",
        "fit_rate.txt",
        "fit_type.json",
        "fit_type.txt",
        "simulated_sequences.csv",
        "baseline_sequences.csv",
        "match_rates_model.csv",
        "match_rates_baseline.csv",
        "timing_errors_model.csv",
        "timing_errors_baseline.csv",
        "gof_report.json",
        "gof_summary.txt",
    ] {
        let path = out.join(name);
        assert!(path.exists(), "missing artifact {name}");
        let content = fs::read_to_string(&path).unwrap();
        assert!(
            content.contains(&ctx.hash),
            "{name} lacks the config hash stamp"
        );
        assert!(content.contains(rem_core::VERSION), "{name} lacks the version");
    }

    // fit artifacts carry the full metadata contract
    let fit: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("fit_rate.json")).unwrap()).unwrap();
    assert_eq!(fit["tie_handling"], "breslow");
    assert_eq!(fit["half_life"], 20.0);
    assert!(fit["config_echo"].as_str().unwrap().contains("[analysis]"));
    assert!(fit["fit"]["coefficients"].as_array().unwrap().len() >= 8);
}

#[test]
fn half_life_sweep_fans_out_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let (statements, actors) = write_fixture(dir.path(), 11);
    let config_path = write_config(dir.path(), &statements, &actors, false);
    let text = fs::read_to_string(&config_path)
        .unwrap()
        .replace("half_life = 20.0", "half_lives = [10.0, 20.0]");
    fs::write(&config_path, text).unwrap();
    let ctx = context(&config_path);

    commands::cmd_fit_type(&ctx).unwrap();
    let out = dir.path().join("out");
    assert!(out.join("fit_type_h10.json").exists());
    assert!(out.join("fit_type_h20.json").exists());
}

fn rem_binary() -> &'static str {
    env!("CARGO_BIN_EXE_rem")
}

#[test]
fn binary_reports_usage_and_data_errors_with_exit_codes() {
    let dir = tempfile::tempdir().unwrap();

    // no config anywhere: usage error, exit 1
    let status = Command::new(rem_binary())
        .env_remove("REM_CONFIG")
        .arg("ingest")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));

    // config pointing at missing inputs: usage error, exit 1
    let bad = dir.path().join("bad.toml");
    fs::write(
        &bad,
        "[inputs]\nstatements = \"/nonexistent.csv\"\nactors = \"/nonexistent.csv\"\n\
         [analysis]\ncutoff = \"1996-01-08\"\nhalf_life = 20.0\n\
         [run]\nseed = 1\noutput_dir = \"/tmp/x\"\n",
    )
    .unwrap();
    let status = Command::new(rem_binary())
        .args(["--config", bad.to_str().unwrap(), "ingest"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));

    // malformed statements file: data error, exit 2
    let statements = dir.path().join("statements.csv");
    let actors = dir.path().join("actors.csv");
    fs::write(&statements, "date,actor,belief,stance\nnot-a-date,a,b,+1\n").unwrap();
    fs::write(&actors, "actor,label,actor_type,is_government\na,A,government,1\n").unwrap();
    let config = write_config(
        dir.path(),
        statements.to_str().unwrap(),
        actors.to_str().unwrap(),
        false,
    );
    let status = Command::new(rem_binary())
        .args(["--config", config.to_str().unwrap(), "ingest"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2));
}

#[test]
fn config_env_var_supplies_default_path() {
    let dir = tempfile::tempdir().unwrap();
    let (statements, actors) = write_fixture(dir.path(), 3);
    let config_path = write_config(dir.path(), &statements, &actors, false);
    let output = Command::new(rem_binary())
        .env("REM_CONFIG", &config_path)
        .arg("ingest")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    assert!(dir.path().join("out/corpus_summary.json").exists());
}
