use std::fs;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use selftune::simulation::{simulate, RunSummary};

use crate::config::{Emit, PlannedRun};
use crate::output::{self, RunTiming};

pub struct Finished {
    pub summary: RunSummary,
    pub timing: RunTiming,
}

fn execute(run: &PlannedRun, dir: &Path, emit: Emit) -> Result<Finished> {
    let start = Instant::now();
    let config = &run.config;
    let system = config.validate()?;
    let trace = simulate(config)?;
    let name = &config.name;
    if emit.trace {
        output::write_trace(&dir.join(format!("{name}.trace.csv")), &trace)?;
    }
    if emit.plotdata {
        let timings = format!("{name}.timings.csv");
        let pools = (system.actuator_count(), system.sensor_count());
        output::write_plot_data(&dir.join(format!("{name}.plot.json")), &trace, pools, &timings)?;
        output::write_timings(&dir.join(timings), &trace)?;
    }
    let steps = trace.timings.len().max(1) as f64;
    Ok(Finished {
        timing: RunTiming {
            name: name.clone(),
            wall_seconds: start.elapsed().as_secs_f64(),
            mean_step_seconds: trace.timings.iter().sum::<f64>() / steps,
        },
        summary: RunSummary::of(&trace),
    })
}

/// Runs every planned run on `jobs` worker threads. Results come back in
/// plan order; each run writes only its own files.
pub fn run_all(runs: &[PlannedRun], dir: &Path, emit: Emit, jobs: usize, quiet: bool) -> Result<Vec<Finished>> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<Finished>>>> = Mutex::new((0..runs.len()).map(|_| None).collect());
    thread::scope(|scope| {
        for _ in 0..jobs.clamp(1, runs.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(run) = runs.get(i) else { break };
                let out = execute(run, dir, emit).with_context(|| format!("run {:?} failed", run.config.name));
                if !quiet {
                    match &out {
                        Ok(f) => eprintln!(
                            "finished {} (cost {:.6e}, {:.1} s)",
                            run.config.name, f.summary.cumulative_cost, f.timing.wall_seconds
                        ),
                        Err(e) => eprintln!("{e:#}"),
                    }
                }
                results.lock().unwrap()[i] = Some(out);
            });
        }
    });
    results
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.unwrap_or_else(|| Err(anyhow!("run was never scheduled"))))
        .collect()
}
