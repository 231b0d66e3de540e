//! Files written for each run and for the campaign.
//!
//! Per run, in the output directory:
//!
//! * `<run>.trace.csv`: one row per step with the columns of
//!   [`trace_header`]. Floats carry 17 significant digits.
//! * `<run>.plot.json`: series for plotting (cumulative and stage cost,
//!   state, estimate and error norms, actuator and sensor rasters).
//! * `<run>.timings.csv`: architecture and gain computation time per step.
//!
//! Per campaign: `summary.json` and the `timings.json` sidecar. Everything
//! except the timing files is a function of the campaign file and seeds.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::Result;
use selftune::network::{indicator, DeviceKind};
use selftune::simulation::{RunSummary, SimulationTrace};
use serde::Serialize;

use crate::config::SCHEMA_VERSION;

fn float(v: f64) -> String {
    format!("{v:.16e}")
}

fn join(idx: &[usize]) -> String {
    idx.iter().map(usize::to_string).collect::<Vec<_>>().join(";")
}

pub fn trace_header(n: usize) -> Vec<String> {
    let mut h: Vec<String> = [
        "t",
        "stage",
        "running",
        "switching",
        "cumulative",
        "changes",
        "actuators",
        "sensors",
        "state_norm",
        "estimate_norm",
        "error_norm",
    ]
    .map(String::from)
    .into();
    h.extend((0..n).map(|i| format!("x{i}")));
    h.extend((0..n).map(|i| format!("xhat{i}")));
    h
}

pub fn write_trace(path: &Path, trace: &SimulationTrace) -> Result<()> {
    let n = trace.final_state.len();
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(trace_header(n))?;
    let (xs, xh, es) = (trace.state_norms(), trace.estimate_norms(), trace.error_norms());
    for (i, s) in trace.steps.iter().enumerate() {
        let mut row = vec![
            s.t.to_string(),
            float(s.ledger.stage),
            float(s.ledger.running),
            float(s.ledger.switching),
            float(s.ledger.cumulative),
            s.changes.to_string(),
            join(s.architecture.actuators()),
            join(s.architecture.sensors()),
            float(xs[i]),
            float(xh[i]),
            float(es[i]),
        ];
        row.extend(s.state.iter().copied().map(float));
        row.extend(s.estimate.iter().copied().map(float));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct PlotData<'a> {
    schema_version: u32,
    name: &'a str,
    t: Vec<usize>,
    cumulative_cost: Vec<f64>,
    stage_cost: Vec<f64>,
    state_norm: Vec<f64>,
    estimate_norm: Vec<f64>,
    error_norm: Vec<f64>,
    /// `[t][i]`: whether pool actuator `i` is active.
    actuator_raster: Vec<Vec<u8>>,
    sensor_raster: Vec<Vec<u8>>,
    /// Per-step compute time lives in this non-reproducible file.
    compute_time: String,
}

pub fn write_plot_data(path: &Path, trace: &SimulationTrace, pools: (usize, usize), timings_file: &str) -> Result<()> {
    let raster = |kind, size| {
        trace
            .steps
            .iter()
            .map(|s| indicator(&s.architecture, kind, size).into_iter().map(u8::from).collect())
            .collect()
    };
    let data = PlotData {
        schema_version: SCHEMA_VERSION,
        name: &trace.name,
        t: trace.steps.iter().map(|s| s.t).collect(),
        cumulative_cost: trace.steps.iter().map(|s| s.ledger.cumulative).collect(),
        stage_cost: trace.steps.iter().map(|s| s.ledger.stage).collect(),
        state_norm: trace.state_norms(),
        estimate_norm: trace.estimate_norms(),
        error_norm: trace.error_norms(),
        actuator_raster: raster(DeviceKind::Actuator, pools.0),
        sensor_raster: raster(DeviceKind::Sensor, pools.1),
        compute_time: timings_file.into(),
    };
    write_json(path, &data)
}

pub fn write_timings(path: &Path, trace: &SimulationTrace) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["t", "seconds"])?;
    for (t, s) in trace.timings.iter().enumerate() {
        w.write_record([t.to_string(), float(*s)])?;
    }
    w.flush()?;
    Ok(())
}

/// Fixed and self-tuning runs of one preset entry, or the explicit runs.
#[derive(Debug, Serialize)]
pub struct Group {
    pub name: String,
    pub runs: Vec<String>,
    /// Cumulative cost of the group's first run over that of each run.
    pub cost_ratios: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub schema_version: u32,
    pub name: String,
    pub runs: Vec<RunSummary>,
    pub groups: Vec<Group>,
}

#[derive(Debug, Serialize)]
pub struct RunTiming {
    pub name: String,
    pub wall_seconds: f64,
    pub mean_step_seconds: f64,
}

#[derive(Debug, Serialize)]
pub struct Timings {
    pub name: String,
    /// Seconds since the Unix epoch when the campaign started.
    pub started_at: f64,
    pub wall_seconds: f64,
    pub jobs: usize,
    pub runs: Vec<RunTiming>,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut f = fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut f, value)?;
    f.write_all(b"\n")?;
    Ok(())
}
