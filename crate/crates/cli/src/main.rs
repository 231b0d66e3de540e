use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use selftune::simulation::{preset, PRESET_NAMES};

mod config;
mod output;
mod runner;

use config::{diagnostics, ExperimentConfig, SCHEMA_VERSION};
use output::{Group, Summary, Timings};

#[derive(Parser)]
#[command(name = "selftune", version, about = "Run self-tuning architecture campaigns")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a campaign and write its artifacts.
    Run {
        config: PathBuf,
        /// Replace every run seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory; overrides the campaign's `output_dir`.
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Number of runs executed in parallel.
        #[arg(long, short, default_value_t = 1)]
        jobs: usize,
        #[arg(long, short)]
        quiet: bool,
    },
    /// Parse and validate a campaign without running it.
    Validate {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Print the campaign in normalized form (defaults filled in).
        #[arg(long)]
        print: bool,
    },
    /// Print the built-in presets.
    ListPresets {
        /// Print each preset's run configurations as TOML.
        #[arg(long)]
        verbose: bool,
    },
}

fn run(path: PathBuf, seed: Option<u64>, output: Option<PathBuf>, jobs: usize, quiet: bool) -> Result<()> {
    let started_at = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0.0, |d| d.as_secs_f64());
    let clock = Instant::now();
    let campaign = ExperimentConfig::load(&path)?;
    let plan = campaign.expand(seed)?;
    let problems = diagnostics(&plan);
    if !problems.is_empty() {
        bail!("campaign is invalid:\n  {}", problems.join("\n  "));
    }
    let dir = output
        .or_else(|| campaign.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from(&campaign.name));
    let finished = runner::run_all(&plan, &dir, campaign.emit, jobs, quiet)?;

    let mut groups: Vec<Group> = Vec::new();
    for (run, done) in plan.iter().zip(&finished) {
        match groups.last_mut() {
            Some(g) if g.name == run.group => g.runs.push(done.summary.name.clone()),
            _ => groups.push(Group {
                name: run.group.clone(),
                runs: vec![done.summary.name.clone()],
                cost_ratios: Vec::new(),
            }),
        }
    }
    let summaries: Vec<_> = finished.iter().map(|f| f.summary.clone()).collect();
    for g in &mut groups {
        let costs: Vec<f64> = summaries
            .iter()
            .filter(|s| g.runs.contains(&s.name))
            .map(|s| s.cumulative_cost)
            .collect();
        g.cost_ratios = costs.iter().map(|c| costs[0] / c).collect();
    }
    if campaign.emit.summary {
        let summary = Summary {
            schema_version: SCHEMA_VERSION,
            name: campaign.name.clone(),
            runs: summaries,
            groups,
        };
        output::write_json(&dir.join("summary.json"), &summary)?;
    }
    let timings = Timings {
        name: campaign.name.clone(),
        started_at,
        wall_seconds: clock.elapsed().as_secs_f64(),
        jobs,
        runs: finished.into_iter().map(|f| f.timing).collect(),
    };
    output::write_json(&dir.join("timings.json"), &timings)?;
    if !quiet {
        eprintln!("wrote {} run(s) to {}", plan.len(), dir.display());
    }
    Ok(())
}

fn validate(path: PathBuf, seed: Option<u64>, print: bool) -> Result<bool> {
    let campaign = ExperimentConfig::load(&path)?;
    if print {
        print!("{}", campaign.to_toml()?);
    }
    let plan = campaign.expand(seed)?;
    let problems = diagnostics(&plan);
    for p in &problems {
        println!("{p}");
    }
    if problems.is_empty() {
        eprintln!("{}: {} run(s), valid", path.display(), plan.len());
    }
    Ok(problems.is_empty())
}

fn list_presets(verbose: bool) -> Result<()> {
    for name in PRESET_NAMES {
        let pair = preset(name, 0).context("preset table is inconsistent")?;
        let first = &pair[0];
        println!(
            "{name}: n = {}, {} steps, {:?} feedback, fixed vs self-tuning",
            first.system.dimension(),
            first.steps,
            first.feedback
        );
        if verbose {
            for config in &pair {
                println!("\n[[runs]]\n{}", toml::to_string(config)?);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            config,
            seed,
            output,
            jobs,
            quiet,
        } => run(config, seed, output, jobs, quiet).map(|()| true),
        Command::Validate { config, seed, print } => validate(config, seed, print),
        Command::ListPresets { verbose } => list_presets(verbose).map(|()| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
