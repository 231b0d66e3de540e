//! Closed-loop rollouts of fixed and self-tuning architectures.
//!
//! Every run draws its initial state, process noise, measurement noise and
//! initial architecture from separate streams of one seed. Measurement
//! noise is drawn for the whole sensor pool at every step and the active
//! entries are used, so two runs with the same seed see the same noise
//! whatever architectures they pick.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cost::{self, CostLedger, CostParameters, EstimateBreakdown, LedgerEntry, PredictionModel, SwitchConvention};
use crate::error::{Error, Result};
use crate::greedy::{self, change_count, ActuatorSelector};
use crate::linalg;
use crate::network::{self, ArchitectureConstraints, ArchitectureSet, ChangeBudget, LinearNetworkSystem};
use crate::rng::{self, Stream};
use crate::synthesis::{self, DareOptions, DareOutcome};

/// Where the dynamics come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SystemSpec {
    /// Symmetric `A` with eigenvalue magnitudes uniform on
    /// `[1 − eig_band, 1 + eig_band]`.
    RandomNetwork {
        n: usize,
        eig_band: f64,
        /// Network seed; the run seed when absent.
        #[serde(default)]
        seed: Option<u64>,
    },
    /// Symmetric `A` with eigenvalue magnitudes uniform on
    /// `[0, spectral_radius]`.
    RandomUnstable {
        n: usize,
        spectral_radius: f64,
        #[serde(default)]
        seed: Option<u64>,
    },
    /// Matrices given as row lists; pools default to the canonical basis.
    Explicit {
        a: Vec<Vec<f64>>,
        #[serde(default)]
        actuator_pool: Option<Vec<Vec<f64>>>,
        #[serde(default)]
        sensor_pool: Option<Vec<Vec<f64>>>,
    },
}

impl SystemSpec {
    pub fn dimension(&self) -> usize {
        match self {
            SystemSpec::RandomNetwork { n, .. } | SystemSpec::RandomUnstable { n, .. } => *n,
            SystemSpec::Explicit { a, .. } => a.len(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Fixed,
    SelfTuning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Feedback {
    /// Full-state LQR.
    State,
    /// LQG with a Kalman filter on the active sensors.
    Output,
}

/// What a state-feedback run applies when the Riccati iteration for its
/// actuator set diverges.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DivergencePolicy {
    /// Keep the most recent finite gain (zero input if there never was one).
    #[default]
    LastFinite,
    ZeroInput,
}

/// Uniform cost weights: `Q = q·I`, `R₁ = r·I`, `Q_T = q_T·I`, and the same
/// running and switching cost on every device.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CostSpec {
    pub state_weight: f64,
    pub input_weight: f64,
    pub terminal_weight: f64,
    pub running: f64,
    pub switching: f64,
    pub switch_convention: SwitchConvention,
}

impl Default for CostSpec {
    fn default() -> Self {
        Self {
            state_weight: 1.0,
            input_weight: 1.0,
            terminal_weight: 1.0,
            running: 0.0,
            switching: 0.0,
            switch_convention: SwitchConvention::AbsoluteDifference,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub name: String,
    pub system: SystemSpec,
    #[serde(default = "one")]
    pub process_noise_var: f64,
    #[serde(default = "one")]
    pub sensor_noise_var: f64,
    pub mode: Mode,
    pub feedback: Feedback,
    /// Fixed architecture, or the starting point of a self-tuning run.
    /// Drawn at random within the bounds when absent.
    #[serde(default)]
    pub initial_architecture: Option<ArchitectureSet>,
    /// Cardinality bounds and change budget. State-feedback runs select
    /// `act_max` actuators.
    pub constraints: ArchitectureConstraints,
    #[serde(default)]
    pub costs: CostSpec,
    /// Prediction horizon `T_p` of output-feedback runs.
    #[serde(default = "default_horizon")]
    pub horizon: usize,
    /// Simulation length.
    pub steps: usize,
    /// `x(0) ~ N(0, initial_state_std² I)`.
    #[serde(default = "one")]
    pub initial_state_std: f64,
    /// `E_0 = initial_covariance · I`; the estimate starts at zero.
    #[serde(default = "one")]
    pub initial_covariance: f64,
    /// Re-identify `A` by least squares at every step of a state-feedback
    /// run (the configured `A` is used until the data have full rank).
    #[serde(default)]
    pub identify: bool,
    /// State-feedback self-tuning only: keep the previous actuator set when
    /// its cost-to-go at the current state beats the greedy pick.
    #[serde(default)]
    pub keep_incumbent: bool,
    #[serde(default)]
    pub on_divergence: DivergencePolicy,
    #[serde(default = "DareOptions::doubling")]
    pub dare: DareOptions,
    pub seed: u64,
}

fn one() -> f64 {
    1.0
}

fn default_horizon() -> usize {
    10
}

fn rows_to_matrix(rows: &[Vec<f64>], what: &'static str) -> Result<DMatrix<f64>> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().find(|row| row.len() != c) {
        return Err(Error::dim(what, format!("rows of length {c}"), format!("a row of length {}", bad.len())));
    }
    Ok(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
}

impl SimulationConfig {
    pub fn build_system(&self) -> Result<LinearNetworkSystem> {
        let base = match &self.system {
            SystemSpec::RandomNetwork { n, eig_band, seed } => {
                network::random_network(*n, *eig_band, seed.unwrap_or(self.seed))?
            }
            SystemSpec::RandomUnstable {
                n,
                spectral_radius,
                seed,
            } => network::random_network_in_disc(*n, *spectral_radius, seed.unwrap_or(self.seed))?,
            SystemSpec::Explicit {
                a,
                actuator_pool,
                sensor_pool,
            } => {
                let a = rows_to_matrix(a, "dynamics A")?;
                let n = a.nrows();
                let b = match actuator_pool {
                    Some(rows) => rows_to_matrix(rows, "actuator pool")?,
                    None => DMatrix::identity(n, n),
                };
                let c = match sensor_pool {
                    Some(rows) => rows_to_matrix(rows, "sensor pool")?,
                    None => DMatrix::identity(n, n),
                };
                LinearNetworkSystem::new(a, b, c, DMatrix::identity(n, n), 1.0)?
            }
        };
        if self.process_noise_var.is_nan() || self.process_noise_var < 0.0 {
            return Err(Error::Domain("process_noise_var must be >= 0".into()));
        }
        let n = base.n();
        base.with_noise(DMatrix::identity(n, n) * self.process_noise_var, self.sensor_noise_var)
    }

    pub fn cost_parameters(&self, system: &LinearNetworkSystem) -> CostParameters {
        let n = system.n();
        let m = system.actuator_count();
        let c = &self.costs;
        let mut params = CostParameters::new(
            DMatrix::identity(n, n) * c.state_weight,
            DMatrix::identity(m, m) * c.input_weight,
            DMatrix::identity(n, n) * c.terminal_weight,
            system.sensor_count(),
            self.horizon,
        )
        .with_uniform_architecture_costs(c.running, c.switching);
        params.switch_convention = c.switch_convention;
        params
    }

    /// Full validation without running; returns the built system.
    pub fn validate(&self) -> Result<LinearNetworkSystem> {
        if self.steps == 0 {
            return Err(Error::Argument(format!("{}: steps must be at least 1", self.name)));
        }
        if self.horizon == 0 {
            return Err(Error::Argument(format!("{}: prediction horizon must be at least 1", self.name)));
        }
        for (what, v) in [
            ("initial_state_std", self.initial_state_std),
            ("initial_covariance", self.initial_covariance),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("{}: {what} must be finite and >= 0", self.name)));
            }
        }
        let system = self.build_system()?;
        let pools = (system.actuator_count(), system.sensor_count());
        self.constraints.validate(pools.0, pools.1)?;
        self.cost_parameters(&system).validate(&system)?;
        if let Some(arch) = &self.initial_architecture {
            arch.validate_for(&system)?;
            if !self.constraints.is_satisfied_by(arch) {
                return Err(Error::Infeasible(format!(
                    "{}: initial architecture {arch} violates the cardinality bounds",
                    self.name
                )));
            }
        }
        Ok(system)
    }
}

/// Random architecture within the bounds: each cardinality uniform on its
/// range, then a uniform subset of that size.
pub fn random_feasible_architecture<R: Rng + ?Sized>(
    constraints: &ArchitectureConstraints,
    pools: (usize, usize),
    rng: &mut R,
) -> ArchitectureSet {
    let mut pick = |lo: usize, hi: usize, pool: usize| {
        let k = rng.random_range(lo..=hi);
        index::sample(rng, pool, k).into_vec()
    };
    let a = pick(constraints.act_min, constraints.act_max, pools.0);
    let s = pick(constraints.sen_min, constraints.sen_max, pools.1);
    ArchitectureSet::new(a, s).expect("sampled indices are distinct")
}

/// State of one time step, recorded before the transition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: usize,
    pub state: Vec<f64>,
    pub estimate: Vec<f64>,
    pub error: Vec<f64>,
    pub architecture: ArchitectureSet,
    /// Changes (summed over both kinds) from the previous step's architecture.
    pub changes: usize,
    pub input: Vec<f64>,
    pub ledger: LedgerEntry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationTrace {
    pub name: String,
    pub mode: Mode,
    pub feedback: Feedback,
    pub seed: u64,
    pub steps: Vec<StepRecord>,
    /// `x(T_sim)`.
    pub final_state: Vec<f64>,
    pub warnings: Vec<String>,
    /// Wall-clock seconds of each step's architecture and gain computation.
    /// Not part of the reproducible content.
    #[serde(skip)]
    pub timings: Vec<f64>,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

impl SimulationTrace {
    pub fn cumulative_cost(&self) -> f64 {
        self.steps.last().map_or(0.0, |s| s.ledger.cumulative)
    }

    pub fn state_norms(&self) -> Vec<f64> {
        self.steps.iter().map(|s| norm(&s.state)).collect()
    }

    pub fn estimate_norms(&self) -> Vec<f64> {
        self.steps.iter().map(|s| norm(&s.estimate)).collect()
    }

    pub fn error_norms(&self) -> Vec<f64> {
        self.steps.iter().map(|s| norm(&s.error)).collect()
    }

    pub fn max_state_norm(&self) -> f64 {
        self.state_norms()
            .into_iter()
            .chain(std::iter::once(norm(&self.final_state)))
            .fold(0.0, f64::max)
    }

    pub fn ledger(&self) -> CostLedger {
        let mut ledger = CostLedger::new();
        for s in &self.steps {
            let l = &s.ledger;
            ledger
                .accumulate_true_cost(l.t, l.stage, l.running, l.switching, l.estimate)
                .expect("steps are recorded in order");
        }
        ledger
    }

    /// Same content ignoring wall-clock timings.
    pub fn same_content(&self, other: &SimulationTrace) -> bool {
        self.name == other.name
            && self.mode == other.mode
            && self.feedback == other.feedback
            && self.seed == other.seed
            && self.steps == other.steps
            && self.final_state == other.final_state
            && self.warnings == other.warnings
    }
}

/// Recomputes stage, running and switching costs and the cumulative total
/// from the recorded states, inputs and architectures.
pub fn replay_ledger(trace: &SimulationTrace, params: &CostParameters) -> Result<CostLedger> {
    let mut ledger = CostLedger::new();
    let mut prev: Option<&ArchitectureSet> = None;
    for s in &trace.steps {
        let x = DVector::from_column_slice(&s.state);
        let u = DVector::from_column_slice(&s.input);
        let stage = cost::stage_cost(&x, &u, &s.architecture, params)?;
        let running = cost::running_cost(&s.architecture, params);
        let switching = prev.map_or(0.0, |p| cost::switching_cost(&s.architecture, p, params));
        ledger.accumulate_true_cost(s.t, stage, running, switching, s.ledger.estimate)?;
        prev = Some(&s.architecture);
    }
    Ok(ledger)
}

fn total_changes(a: &ArchitectureSet, b: &ArchitectureSet) -> usize {
    change_count(a.actuators(), b.actuators()) + change_count(a.sensors(), b.sensors())
}

struct Noise {
    process: rng::SeededRng,
    measurement: rng::SeededRng,
    process_factor: DMatrix<f64>,
    sensor_std: f64,
}

impl Noise {
    fn new(seed: u64, system: &LinearNetworkSystem) -> Self {
        Self {
            process: rng::stream(seed, Stream::ProcessNoise),
            measurement: rng::stream(seed, Stream::MeasurementNoise),
            process_factor: rng::covariance_factor(system.process_noise()),
            sensor_std: system.sensor_noise_var().sqrt(),
        }
    }

    fn process(&mut self) -> DVector<f64> {
        rng::gaussian_vector(&mut self.process, &self.process_factor)
    }

    /// Noise on the active sensors, drawn for the whole pool.
    fn measurement(&mut self, pool: usize, active: &[usize]) -> DVector<f64> {
        let all = rng::standard_normal_vector(&mut self.measurement, pool);
        DVector::from_iterator(active.len(), active.iter().map(|&j| all[j] * self.sensor_std))
    }
}

fn initial_state(config: &SimulationConfig, n: usize) -> DVector<f64> {
    let mut g = rng::stream(config.seed, Stream::InitialState);
    rng::standard_normal_vector(&mut g, n) * config.initial_state_std
}

fn initial_architecture(config: &SimulationConfig, pools: (usize, usize)) -> ArchitectureSet {
    config.initial_architecture.clone().unwrap_or_else(|| {
        let mut g = rng::stream(config.seed, Stream::InitialArchitecture);
        random_feasible_architecture(&config.constraints, pools, &mut g)
    })
}

fn empty_trace(config: &SimulationConfig) -> SimulationTrace {
    SimulationTrace {
        name: config.name.clone(),
        mode: config.mode,
        feedback: config.feedback,
        seed: config.seed,
        steps: Vec::with_capacity(config.steps),
        final_state: Vec::new(),
        warnings: Vec::new(),
        timings: Vec::with_capacity(config.steps),
    }
}

/// Runs `config` with the rollout its feedback kind calls for.
pub fn simulate(config: &SimulationConfig) -> Result<SimulationTrace> {
    match config.feedback {
        Feedback::State => simulate_lqr(config),
        Feedback::Output => simulate_lqg(config),
    }
}

/// Full-state LQR rollout. Fixed mode applies the infinite-horizon gain of
/// the configured actuators; self-tuning mode reselects `act_max`
/// actuators greedily at every step.
pub fn simulate_lqr(config: &SimulationConfig) -> Result<SimulationTrace> {
    if config.feedback != Feedback::State {
        return Err(Error::Argument("simulate_lqr needs feedback = state".into()));
    }
    let system = config.validate()?;
    let params = config.cost_parameters(&system);
    let n = system.n();
    let pools = (system.actuator_count(), system.sensor_count());
    let cardinality = config.constraints.act_max;
    let fixed = initial_architecture(config, pools);
    let no_sensors = ArchitectureSet::new(Vec::new(), Vec::new())?;

    let mut selector = ActuatorSelector::new(
        system.a().clone(),
        system.actuator_pool().clone(),
        params.state_cost.clone(),
        params.input_cost.clone(),
        config.dare,
    )?;
    let mut noise = Noise::new(config.seed, &system);
    let mut trace = empty_trace(config);
    let mut ledger = CostLedger::new();
    let mut x = initial_state(config, n);
    let mut last_gain: Option<(Vec<usize>, DMatrix<f64>)> = None;
    let mut prev_arch: Option<ArchitectureSet> = None;
    // States x(0..=t), applied inputs and the input matrices they went through.
    let mut states = vec![x.clone()];
    let mut inputs: Vec<DVector<f64>> = Vec::new();
    let mut input_maps: Vec<DMatrix<f64>> = Vec::new();

    for t in 0..config.steps {
        let clock = Instant::now();
        if config.identify && !inputs.is_empty() {
            let id = greedy::least_squares_identify(&states, &inputs, &input_maps)?;
            let model = if id.rank_deficient { system.a().clone() } else { id.a_hat };
            if &model != selector.dynamics() {
                selector.set_dynamics(model)?;
            }
        }
        let (actuators, outcome) = match config.mode {
            Mode::Fixed => {
                let outcome = selector.dare(fixed.actuators())?;
                (fixed.actuators().to_vec(), outcome)
            }
            Mode::SelfTuning => {
                let sel = selector.select(&x, cardinality)?;
                let outcome = selector.dare(&sel.actuators)?;
                let mut pick = (sel.actuators, outcome);
                if let Some(prev) = prev_arch.as_ref().filter(|_| config.keep_incumbent) {
                    let incumbent = selector.dare(prev.actuators())?;
                    if incumbent.cost_at(&x) < pick.1.cost_at(&x) {
                        pick = (prev.actuators().to_vec(), incumbent);
                    }
                }
                pick
            }
        };
        let arch = ArchitectureSet::new(actuators.clone(), no_sensors.sensors().to_vec())?;
        let b = network::build_input_matrix(&system, &arch)?;
        let gain = match &outcome {
            DareOutcome::Converged { p, .. } => {
                let r = params.active_input_cost(&arch);
                let k = -synthesis::lqr_gain(selector.dynamics(), &b, &r, p)?;
                last_gain = Some((actuators.clone(), k.clone()));
                k
            }
            DareOutcome::Diverged(reason) => {
                trace.warnings.push(format!("t={t}: Riccati iteration diverged ({reason:?}) for actuators {actuators:?}"));
                match (&config.on_divergence, &last_gain) {
                    (DivergencePolicy::LastFinite, Some((acts, k))) if *acts == actuators => k.clone(),
                    _ => DMatrix::zeros(actuators.len(), n),
                }
            }
        };
        trace.timings.push(clock.elapsed().as_secs_f64());

        let u = &gain * &x;
        let stage = cost::stage_cost(&x, &u, &arch, &params)?;
        let running = cost::running_cost(&arch, &params);
        let switching = prev_arch.as_ref().map_or(0.0, |p| cost::switching_cost(&arch, p, &params));
        let estimate = EstimateBreakdown {
            control: outcome.cost_at(&x),
            running,
            switching,
        };
        ledger.accumulate_true_cost(t, stage, running, switching, Some(estimate))?;
        trace.steps.push(StepRecord {
            t,
            state: x.as_slice().to_vec(),
            estimate: x.as_slice().to_vec(),
            error: vec![0.0; n],
            changes: prev_arch.as_ref().map_or(0, |p| total_changes(p, &arch)),
            architecture: arch.clone(),
            input: u.as_slice().to_vec(),
            ledger: *ledger.entries().last().expect("entry just added"),
        });

        x = system.a() * &x + &b * &u + noise.process();
        if config.identify {
            states.push(x.clone());
            inputs.push(u);
            input_maps.push(b);
        }
        prev_arch = Some(arch);
    }
    trace.final_state = x.as_slice().to_vec();
    Ok(trace)
}

/// Output-feedback LQG rollout with receding-horizon gains. A self-tuning
/// run re-optimizes the architecture by greedy swapping from the previous
/// one at every step; the chosen sensors measure at the same step.
pub fn simulate_lqg(config: &SimulationConfig) -> Result<SimulationTrace> {
    if config.feedback != Feedback::Output {
        return Err(Error::Argument("simulate_lqg needs feedback = output".into()));
    }
    let system = config.validate()?;
    let params = config.cost_parameters(&system);
    let n = system.n();
    let pools = (system.actuator_count(), system.sensor_count());
    let mut model = PredictionModel::new(&system, &params)?;
    let mut noise = Noise::new(config.seed, &system);
    let mut trace = empty_trace(config);
    let mut ledger = CostLedger::new();

    let mut x = initial_state(config, n);
    let mut x_hat = DVector::zeros(n);
    let mut e_cov = DMatrix::identity(n, n) * config.initial_covariance;
    let mut arch = initial_architecture(config, pools);
    let mut prev: Option<ArchitectureSet> = None;

    for t in 0..config.steps {
        let clock = Instant::now();
        if config.mode == Mode::SelfTuning {
            let outcome = greedy::greedy_swap_model(
                &mut model,
                &params,
                &arch,
                &arch,
                &x_hat,
                &e_cov,
                &config.constraints,
                pools,
            )?;
            arch = outcome.architecture;
        }
        let gains = cost::synthesize(&system, &arch, &e_cov, &params)?;
        let predicted = model.predicted_cost(&arch, &x_hat, &e_cov)?;
        trace.timings.push(clock.elapsed().as_secs_f64());

        let c = network::build_output_matrix(&system, &arch)?;
        let b = network::build_input_matrix(&system, &arch)?;
        let k0 = gains.feedback(0);
        let u = -(k0 * &x_hat);
        let stage = cost::stage_cost(&x, &u, &arch, &params)?;
        let running = cost::running_cost(&arch, &params);
        let switching = prev.as_ref().map_or(0.0, |p| cost::switching_cost(&arch, p, &params));
        let estimate = EstimateBreakdown {
            control: predicted,
            running,
            switching,
        };
        ledger.accumulate_true_cost(t, stage, running, switching, Some(estimate))?;
        trace.steps.push(StepRecord {
            t,
            state: x.as_slice().to_vec(),
            estimate: x_hat.as_slice().to_vec(),
            error: (&x - &x_hat).as_slice().to_vec(),
            changes: prev.as_ref().map_or(0, |p| total_changes(p, &arch)),
            architecture: arch.clone(),
            input: u.as_slice().to_vec(),
            ledger: *ledger.entries().last().expect("entry just added"),
        });

        let y = &c * &x + noise.measurement(pools.1, arch.sensors());
        let x_hat_next = synthesis::estimator_update(&system, &arch, k0, gains.estimator(0), &x_hat, &y)?;
        x = system.a() * &x + &b * &u + noise.process();
        x_hat = x_hat_next;
        e_cov = gains.estimation.covariances[1].clone();
        linalg::symmetrize_in_place(&mut e_cov);
        prev = Some(arch.clone());
    }
    trace.final_state = x.as_slice().to_vec();
    Ok(trace)
}

/// Headline numbers of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub name: String,
    pub mode: Mode,
    pub feedback: Feedback,
    pub seed: u64,
    pub steps: usize,
    pub cumulative_cost: f64,
    pub final_state_norm: f64,
    pub max_state_norm: f64,
    pub final_estimate_norm: f64,
    pub final_error_norm: f64,
    pub changes_per_step: Vec<usize>,
    pub total_changes: usize,
    pub warnings: usize,
}

impl RunSummary {
    pub fn of(trace: &SimulationTrace) -> Self {
        let changes: Vec<usize> = trace.steps.iter().map(|s| s.changes).collect();
        Self {
            name: trace.name.clone(),
            mode: trace.mode,
            feedback: trace.feedback,
            seed: trace.seed,
            steps: trace.steps.len(),
            cumulative_cost: trace.cumulative_cost(),
            final_state_norm: norm(&trace.final_state),
            max_state_norm: trace.max_state_norm(),
            final_estimate_norm: trace.estimate_norms().last().copied().unwrap_or(0.0),
            final_error_norm: trace.error_norms().last().copied().unwrap_or(0.0),
            total_changes: changes.iter().sum(),
            changes_per_step: changes,
            warnings: trace.warnings.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub runs: Vec<RunSummary>,
    /// Cumulative cost of the first run divided by that of each run.
    pub cost_ratios: Vec<f64>,
    /// Mean architecture-step wall time of each run, in seconds.
    pub mean_compute_seconds: Vec<f64>,
}

/// Summaries of `traces` with cost ratios relative to the first.
pub fn compare_runs(traces: &[SimulationTrace]) -> Comparison {
    let runs: Vec<RunSummary> = traces.iter().map(RunSummary::of).collect();
    let base = runs.first().map_or(f64::NAN, |r| r.cumulative_cost);
    Comparison {
        cost_ratios: runs.iter().map(|r| base / r.cumulative_cost).collect(),
        mean_compute_seconds: traces
            .iter()
            .map(|t| {
                if t.timings.is_empty() {
                    0.0
                } else {
                    t.timings.iter().sum::<f64>() / t.timings.len() as f64
                }
            })
            .collect(),
        runs,
    }
}

/// Names accepted by [`preset`].
pub const PRESET_NAMES: [&str; 3] = ["lqr-50", "lqg-50-tight", "lqg-50-costs"];

/// Built-in campaigns on 50-node networks, fixed run first:
///
/// * `lqr-50`: unstable network (eigenvalue magnitudes up to 1.1), two
///   actuators, fixed `{e1, e2}` against greedy reselection at every step.
/// * `lqg-50-tight`: eigenvalue magnitudes in `[0.9, 1.1]`, exactly five
///   actuators and five sensors, fixed random architecture against greedy
///   swapping with `T_p = 10`.
/// * `lqg-50-costs`: the same network with running and switching cost 100
///   on every device and between one and five devices of each kind.
pub fn preset(name: &str, seed: u64) -> Option<Vec<SimulationConfig>> {
    let pair = |base: SimulationConfig| {
        let mut tuned = base.clone();
        tuned.name = format!("{}-self-tuning", base.name);
        tuned.mode = Mode::SelfTuning;
        let mut fixed = base;
        fixed.name = format!("{}-fixed", fixed.name);
        vec![fixed, tuned]
    };
    let lqg = |name: &str, constraints: ArchitectureConstraints, costs: CostSpec| SimulationConfig {
        name: name.into(),
        system: SystemSpec::RandomNetwork {
            n: 50,
            eig_band: 0.1,
            seed: None,
        },
        process_noise_var: 1.0,
        sensor_noise_var: 1.0,
        mode: Mode::Fixed,
        feedback: Feedback::Output,
        initial_architecture: None,
        constraints,
        costs,
        horizon: 10,
        steps: 100,
        initial_state_std: 1.0,
        initial_covariance: 1.0,
        identify: false,
        keep_incumbent: false,
        on_divergence: DivergencePolicy::LastFinite,
        dare: DareOptions::doubling(),
        seed,
    };
    match name {
        "lqr-50" => Some(pair(SimulationConfig {
            name: name.into(),
            system: SystemSpec::RandomUnstable {
                n: 50,
                spectral_radius: 1.1,
                seed: None,
            },
            process_noise_var: 1e-4,
            sensor_noise_var: 1.0,
            mode: Mode::Fixed,
            feedback: Feedback::State,
            initial_architecture: Some(ArchitectureSet::new(vec![0, 1], vec![]).expect("distinct indices")),
            constraints: ArchitectureConstraints {
                act_min: 2,
                act_max: 2,
                sen_min: 0,
                sen_max: 0,
                ..ArchitectureConstraints::uniform(0, 0)
            },
            costs: CostSpec::default(),
            horizon: 10,
            steps: 100,
            initial_state_std: 5.0,
            initial_covariance: 1.0,
            identify: false,
            keep_incumbent: true,
            on_divergence: DivergencePolicy::LastFinite,
            dare: DareOptions::doubling(),
            seed,
        })),
        "lqg-50-tight" => Some(pair(lqg(
            name,
            ArchitectureConstraints::uniform(5, 5).with_budget(ChangeBudget::UNBOUNDED, 1),
            CostSpec::default(),
        ))),
        "lqg-50-costs" => Some(pair(lqg(
            name,
            ArchitectureConstraints::uniform(1, 5).with_budget(ChangeBudget::Bounded(2), 1),
            CostSpec {
                running: 100.0,
                switching: 100.0,
                ..CostSpec::default()
            },
        ))),
        _ => None,
    }
}
