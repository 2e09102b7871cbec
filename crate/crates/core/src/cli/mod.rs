//! Command-line front end. The binary only forwards its arguments to [`run`].
//!
//! A scenario is resolved in this order, later steps overriding earlier ones:
//! built-in defaults, the preset (from `--preset`, the reproduce target, or a
//! `preset = …` line in the config file), the `--config` file, `--set`
//! overrides, then `--seed` and `--out`.

pub mod commands;
pub mod config;
pub mod output;
pub mod presets;
pub mod reproduce;

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};

use commands::{CliError, EXIT_ACCEPTANCE, EXIT_CONFIG, EXIT_OK};
use config::{parse_override, parse_pairs, ConfigError, ScenarioConfig};
use output::{OutputDir, RunManifest};

#[derive(Debug, Parser)]
#[command(name = "elliptic-sync", version, about = "Coupled elliptic burster simulations and fast-subsystem analysis")]
pub struct Cli {
    /// Scenario file of `key = value` lines.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Random seed (sets integrator.rng_seed).
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Output directory (sets output.dir).
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Worker threads for scans and multi-seed runs.
    #[arg(long, global = true, value_name = "N")]
    pub workers: Option<usize>,
    /// Override one key, e.g. `--set model.sigma=4`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub sets: Vec<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the network; writes trajectory.csv and summary.json.
    Simulate {
        #[arg(long)]
        preset: Option<String>,
    },
    /// Branch diagram or two-parameter stability boundaries.
    Scan {
        #[arg(long)]
        preset: Option<String>,
    },
    /// Run a table or figure pipeline and compare with expected values.
    Reproduce {
        target: String,
    },
    /// Asymptotic, closed-form and bisected stability-change points.
    AnalyticPoints {
        #[arg(long)]
        preset: Option<String>,
    },
    /// List presets, or print one as a config file.
    Presets {
        name: Option<String>,
    },
}

/// Builds the scenario from a preset name, config text and overrides.
pub fn resolve_config(
    preset: Option<&str>,
    config_text: Option<&str>,
    sets: &[String],
    seed: Option<u64>,
    out: Option<PathBuf>,
) -> Result<ScenarioConfig, ConfigError> {
    let file_pairs = match config_text {
        Some(t) => parse_pairs(t)?,
        None => Vec::new(),
    };
    let file_preset = file_pairs.iter().find(|p| p.1 == "preset").map(|p| p.2.as_str());
    let mut cfg = match preset.or(file_preset) {
        Some(name) => presets::preset(name)?,
        None => ScenarioConfig::default(),
    };
    for (_, k, v) in &file_pairs {
        if k != "preset" {
            cfg.set(k, v)?;
        }
    }
    for s in sets {
        let (k, v) = parse_override(s)?;
        cfg.set(&k, &v)?;
    }
    if let Some(s) = seed {
        cfg.integrator.rng_seed = s;
    }
    if let Some(o) = out {
        cfg.out_dir = o;
    }
    Ok(cfg)
}

fn load(cli: &Cli, preset: Option<&str>) -> Result<ScenarioConfig, CliError> {
    let text = match &cli.config {
        Some(p) => Some(std::fs::read_to_string(p).map_err(|e| {
            ConfigError::Invalid(format!("cannot read {}: {e}", p.display()))
        })?),
        None => None,
    };
    Ok(resolve_config(
        preset,
        text.as_deref(),
        &cli.sets,
        cli.seed,
        cli.out.clone(),
    )?)
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    let started = Instant::now();
    let (name, cfg) = match &cli.command {
        Command::Presets { name: None } => {
            let mut out = io::stdout().lock();
            for n in presets::names() {
                // A closed pipe (e.g. `| head`) just ends the listing.
                if writeln!(out, "{n:12} {}", presets::describe(n).unwrap_or("")).is_err() {
                    break;
                }
            }
            return Ok(EXIT_OK);
        }
        Command::Presets { name: Some(n) } => {
            let _ = io::stdout().lock().write_all(presets::dump(n)?.as_bytes());
            return Ok(EXIT_OK);
        }
        Command::Simulate { preset } => ("simulate", load(cli, preset.as_deref())?),
        Command::Scan { preset } => ("scan", load(cli, preset.as_deref())?),
        Command::AnalyticPoints { preset } => ("analytic-points", load(cli, preset.as_deref())?),
        Command::Reproduce { target } => {
            reproduce::target_config(target)?;
            ("reproduce", load(cli, Some(target))?)
        }
    };
    let command = match &cli.command {
        Command::Reproduce { target } => format!("reproduce {target}"),
        _ => name.to_string(),
    };
    let mut out = OutputDir::create(&cfg.out_dir, RunManifest::new(&command, &cfg))?;
    let mut code = EXIT_OK;
    match &cli.command {
        Command::Simulate { .. } => {
            let s = commands::cmd_simulate(&cfg, &mut out)?;
            println!("bursts: {}", s["burst_count"]);
        }
        Command::Scan { .. } => {
            commands::cmd_scan(&cfg, &mut out)?;
        }
        Command::AnalyticPoints { .. } => {
            let s = commands::cmd_analytic_points(&cfg, &mut out)?;
            for p in s["points"].as_array().into_iter().flatten() {
                println!(
                    "{:<10} {:<9} r = {:.7}  u = {:.7}",
                    p["method"].as_str().unwrap_or(""),
                    p["branch"].as_str().unwrap_or(""),
                    p["r"].as_f64().unwrap_or(f64::NAN),
                    p["u"].as_f64().unwrap_or(f64::NAN)
                );
            }
            for n in s["notes"].as_array().into_iter().flatten() {
                println!("note: {}", n.as_str().unwrap_or(""));
            }
        }
        Command::Reproduce { target } => {
            let report = reproduce::run_target(target, &cfg, &mut out)?;
            for c in &report.checks {
                let tag = if c.informational {
                    "INFO"
                } else if c.passed {
                    "PASS"
                } else {
                    "FAIL"
                };
                println!("{tag} {}: {}", c.name, c.computed);
            }
            if !report.passed() {
                code = EXIT_ACCEPTANCE;
            }
        }
        Command::Presets { .. } => unreachable!(),
    }
    let dir = out.path().display().to_string();
    let manifest = out.finish(started.elapsed().as_secs_f64())?;
    println!("wrote {} file(s) to {dir} (manifest {})", manifest.outputs.len() + 1, &manifest.sha256[..12]);
    Ok(code)
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let result = match cli.workers {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(CliError::Config(ConfigError::Invalid(format!("--workers: {e}")))),
        },
        None => execute(&cli),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
