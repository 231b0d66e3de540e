//! Predicted and incurred costs of an architecture.
//!
//! Over a prediction horizon the architecture is frozen and the closed loop
//! (true state stacked with its estimate) evolves as
//!
//! ```text
//! X⁺ = Ā_τ X + F_τ [w; v],   Ā_τ = [ A        −B K_τ            ]
//!                                  [ A L_τ C   A − A L_τ C − B K_τ ]
//! ```
//!
//! with `F_τ = blockdiag(I, A L_τ)`. The predicted control cost starts the
//! stack at `[x̂; x̂]` and runs the backward recursion
//! `Z_τ = Ā_τᵀ Z_{τ+1} Ā_τ + Q̄_τ` from `Z_T = blockdiag(Q_T, 0)`.
//! Running and switching costs are linear in the indicator vectors.

use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, StateMap};
use crate::network::{self, ArchitectureSet, DeviceKind, LinearNetworkSystem};
use crate::synthesis::{self, ControlSchedule, GainSchedule};

/// How a toggle enters the switching cost.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SwitchConvention {
    /// `Σ |A′_t − A′_{t−1}| R₃`: every activation and deactivation costs.
    #[default]
    AbsoluteDifference,
    /// `(A′_t − A′_{t−1})ᵀ R₃`: deactivations earn a negative cost.
    Signed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostParameters {
    /// `Q_B`, n×n
    pub state_cost: DMatrix<f64>,
    /// `R_{1,B}`, M×M; the active block is its principal submatrix
    pub input_cost: DMatrix<f64>,
    /// `Q_T`, n×n
    pub terminal_cost: DMatrix<f64>,
    pub running_actuator: Vec<f64>,
    pub running_sensor: Vec<f64>,
    pub switching_actuator: Vec<f64>,
    pub switching_sensor: Vec<f64>,
    pub horizon: usize,
    pub switch_convention: SwitchConvention,
}

impl CostParameters {
    /// Control weights only; all architecture costs zero.
    pub fn new(
        state_cost: DMatrix<f64>,
        input_cost: DMatrix<f64>,
        terminal_cost: DMatrix<f64>,
        sensor_count: usize,
        horizon: usize,
    ) -> Self {
        let m = input_cost.nrows();
        Self {
            state_cost,
            input_cost,
            terminal_cost,
            running_actuator: vec![0.0; m],
            running_sensor: vec![0.0; sensor_count],
            switching_actuator: vec![0.0; m],
            switching_sensor: vec![0.0; sensor_count],
            horizon,
            switch_convention: SwitchConvention::AbsoluteDifference,
        }
    }

    /// `Q = Q_T = I`, `R₁ = I` sized for `system`.
    pub fn identity(system: &LinearNetworkSystem, horizon: usize) -> Self {
        let n = system.n();
        let m = system.actuator_count();
        Self::new(
            DMatrix::identity(n, n),
            DMatrix::identity(m, m),
            DMatrix::identity(n, n),
            system.sensor_count(),
            horizon,
        )
    }

    pub fn with_running(mut self, actuator: Vec<f64>, sensor: Vec<f64>) -> Self {
        self.running_actuator = actuator;
        self.running_sensor = sensor;
        self
    }

    pub fn with_switching(mut self, actuator: Vec<f64>, sensor: Vec<f64>) -> Self {
        self.switching_actuator = actuator;
        self.switching_sensor = sensor;
        self
    }

    /// Same running and switching cost on every device.
    pub fn with_uniform_architecture_costs(self, running: f64, switching: f64) -> Self {
        let m = self.running_actuator.len();
        let l = self.running_sensor.len();
        self.with_running(vec![running; m], vec![running; l])
            .with_switching(vec![switching; m], vec![switching; l])
    }

    pub fn validate(&self, system: &LinearNetworkSystem) -> Result<()> {
        let n = system.n();
        let m = system.actuator_count();
        let l = system.sensor_count();
        if self.horizon == 0 {
            return Err(Error::Argument("prediction horizon must be at least 1".into()));
        }
        linalg::require_shape(&self.state_cost, n, n, "state cost Q")?;
        linalg::require_shape(&self.terminal_cost, n, n, "terminal cost Q_T")?;
        linalg::require_shape(&self.input_cost, m, m, "input cost R1")?;
        linalg::require_psd(&self.state_cost, "state cost Q")?;
        linalg::require_psd(&self.terminal_cost, "terminal cost Q_T")?;
        linalg::require_pd(&self.input_cost, "input cost R1")?;
        for (name, v, len) in [
            ("running actuator cost", &self.running_actuator, m),
            ("running sensor cost", &self.running_sensor, l),
            ("switching actuator cost", &self.switching_actuator, m),
            ("switching sensor cost", &self.switching_sensor, l),
        ] {
            if v.len() != len {
                return Err(Error::dim(name, len, v.len()));
            }
            if v.iter().any(|c| !(*c >= 0.0 && c.is_finite())) {
                return Err(Error::Domain(format!("{name} entries must be finite and >= 0")));
            }
        }
        Ok(())
    }

    /// Principal block of `R₁` on the active actuators.
    pub fn active_input_cost(&self, arch: &ArchitectureSet) -> DMatrix<f64> {
        linalg::principal_submatrix(&self.input_cost, arch.actuators())
    }
}

/// One step of the stacked closed loop.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedStep {
    /// `Ā_τ`, 2n×2n
    pub dynamics: DMatrix<f64>,
    /// `F_τ`, 2n×(n + |S|)
    pub noise_map: DMatrix<f64>,
    /// `Q̄_τ = blockdiag(Q, K_τᵀ R₁ K_τ)`
    pub stage_cost: DMatrix<f64>,
    /// `W̄_τ = F_τ blockdiag(W, V) F_τᵀ`
    pub noise_cov: DMatrix<f64>,
}

/// Assembles the closed-loop matrices at prediction step `tau`.
pub fn build_augmented(
    system: &LinearNetworkSystem,
    arch: &ArchitectureSet,
    gains: &GainSchedule,
    tau: usize,
    params: &CostParameters,
) -> Result<AugmentedStep> {
    if tau >= gains.horizon() || tau >= gains.estimation.gains.len() {
        return Err(Error::Argument(format!(
            "prediction step {tau} outside gain horizon {}",
            gains.horizon()
        )));
    }
    let n = system.n();
    let a = system.a();
    let b = network::build_input_matrix(system, arch)?;
    let c = network::build_output_matrix(system, arch)?;
    let k = gains.feedback(tau);
    let l = gains.estimator(tau);
    linalg::require_shape(k, b.ncols(), n, "feedback gain K")?;
    linalg::require_shape(l, n, c.nrows(), "estimator gain L")?;
    let s = c.nrows();

    let bk = &b * k;
    let al = a * l;
    let alc = &al * &c;
    let mut dynamics = DMatrix::zeros(2 * n, 2 * n);
    dynamics.view_mut((0, 0), (n, n)).copy_from(a);
    dynamics.view_mut((0, n), (n, n)).copy_from(&(-&bk));
    dynamics.view_mut((n, 0), (n, n)).copy_from(&alc);
    dynamics.view_mut((n, n), (n, n)).copy_from(&(a - &alc - &bk));

    let mut noise_map = DMatrix::zeros(2 * n, n + s);
    noise_map.view_mut((0, 0), (n, n)).fill_with_identity();
    noise_map.view_mut((n, n), (n, s)).copy_from(&al);

    let r = params.active_input_cost(arch);
    let mut stage_cost = DMatrix::zeros(2 * n, 2 * n);
    stage_cost.view_mut((0, 0), (n, n)).copy_from(&params.state_cost);
    stage_cost
        .view_mut((n, n), (n, n))
        .copy_from(&linalg::symmetrize(&(k.transpose() * r * k)));

    let mut base_noise = DMatrix::zeros(n + s, n + s);
    base_noise.view_mut((0, 0), (n, n)).copy_from(system.process_noise());
    base_noise
        .view_mut((n, n), (s, s))
        .copy_from(&system.measurement_noise(s));
    let noise_cov = linalg::symmetrize(&(&noise_map * base_noise * noise_map.transpose()));

    Ok(AugmentedStep {
        dynamics,
        noise_map,
        stage_cost,
        noise_cov,
    })
}

/// LQR and Kalman schedules for `arch` over `params.horizon`, starting from
/// the error covariance `e_t`.
pub fn synthesize(
    system: &LinearNetworkSystem,
    arch: &ArchitectureSet,
    e_t: &DMatrix<f64>,
    params: &CostParameters,
) -> Result<GainSchedule> {
    let b = network::build_input_matrix(system, arch)?;
    let c = network::build_output_matrix(system, arch)?;
    let control = synthesis::lqr_backward(
        system.a(),
        &b,
        &params.state_cost,
        &params.active_input_cost(arch),
        &params.terminal_cost,
        params.horizon,
    )?;
    let estimation = synthesis::kalman_forward(
        system.a(),
        &c,
        system.process_noise(),
        &system.measurement_noise(c.nrows()),
        e_t,
        params.horizon,
    )?;
    Ok(GainSchedule { control, estimation })
}

/// Predicted control cost `X̂ᵀZ₀X̂ + Σ_τ tr(Z_{τ+1} W̄_τ)` with `X̂ = [x̂; x̂]`,
/// computed literally on the 2n-dimensional stacked system.
pub fn predicted_cost(
    system: &LinearNetworkSystem,
    arch: &ArchitectureSet,
    x_hat: &DVector<f64>,
    e_t: &DMatrix<f64>,
    params: &CostParameters,
) -> Result<(f64, GainSchedule)> {
    params.validate(system)?;
    let n = system.n();
    if x_hat.len() != n {
        return Err(Error::dim("state estimate", n, x_hat.len()));
    }
    let gains = synthesize(system, arch, e_t, params)?;
    let mut z = DMatrix::zeros(2 * n, 2 * n);
    z.view_mut((0, 0), (n, n)).copy_from(&params.terminal_cost);
    let mut noise = 0.0;
    for tau in (0..params.horizon).rev() {
        let step = build_augmented(system, arch, &gains, tau, params)?;
        noise += linalg::frobenius_dot(&z, &step.noise_cov);
        z = step.dynamics.tr_mul(&(&z * &step.dynamics)) + &step.stage_cost;
        linalg::symmetrize_in_place(&mut z);
    }
    let stacked = DVector::from_iterator(2 * n, x_hat.iter().chain(x_hat.iter()).copied());
    Ok((linalg::quad_form(&z, &stacked) + noise, gains))
}

/// Incurred control cost `xᵀQx + x̂ᵀK₀ᵀR₁K₀x̂` of the current step.
pub fn true_stage_cost(
    x: &DVector<f64>,
    x_hat: &DVector<f64>,
    arch: &ArchitectureSet,
    gains: &GainSchedule,
    params: &CostParameters,
) -> Result<f64> {
    let n = params.state_cost.nrows();
    if x.len() != n || x_hat.len() != n {
        return Err(Error::dim("state vectors", n, format!("{} and {}", x.len(), x_hat.len())));
    }
    let k = gains.feedback(0);
    linalg::require_shape(k, arch.actuators().len(), n, "feedback gain K_0")?;
    stage_cost(x, &(k * x_hat), arch, params)
}

/// `xᵀQx + uᵀR₁u` for an applied input `u` on the active actuators.
pub fn stage_cost(x: &DVector<f64>, u: &DVector<f64>, arch: &ArchitectureSet, params: &CostParameters) -> Result<f64> {
    if u.len() != arch.actuators().len() {
        return Err(Error::dim("input", arch.actuators().len(), u.len()));
    }
    let r = params.active_input_cost(arch);
    Ok(linalg::quad_form(&params.state_cost, x) + u.dot(&(r * u)))
}

pub fn running_cost(arch: &ArchitectureSet, params: &CostParameters) -> f64 {
    let act: f64 = arch.actuators().iter().map(|&i| params.running_actuator[i]).sum();
    let sen: f64 = arch.sensors().iter().map(|&j| params.running_sensor[j]).sum();
    act + sen
}

pub fn switching_cost(arch: &ArchitectureSet, prev: &ArchitectureSet, params: &CostParameters) -> f64 {
    let mut total = 0.0;
    for (kind, weights) in [
        (DeviceKind::Actuator, &params.switching_actuator),
        (DeviceKind::Sensor, &params.switching_sensor),
    ] {
        let now = arch.devices(kind);
        let before = prev.devices(kind);
        let added: f64 = now.iter().filter(|i| !prev.contains(kind, **i)).map(|&i| weights[i]).sum();
        let dropped: f64 = before.iter().filter(|i| !arch.contains(kind, **i)).map(|&i| weights[i]).sum();
        total += match params.switch_convention {
            SwitchConvention::AbsoluteDifference => added + dropped,
            SwitchConvention::Signed => added - dropped,
        };
    }
    total
}

/// Components of the total estimated cost of one candidate architecture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateBreakdown {
    pub control: f64,
    pub running: f64,
    pub switching: f64,
}

impl EstimateBreakdown {
    pub fn total(&self) -> f64 {
        self.control + self.running + self.switching
    }
}

/// Predicted control cost plus running and switching cost relative to `prev`.
pub fn total_estimated_cost(
    system: &LinearNetworkSystem,
    arch: &ArchitectureSet,
    prev: &ArchitectureSet,
    x_hat: &DVector<f64>,
    e_t: &DMatrix<f64>,
    params: &CostParameters,
) -> Result<(f64, EstimateBreakdown, GainSchedule)> {
    let (control, gains) = predicted_cost(system, arch, x_hat, e_t, params)?;
    let breakdown = EstimateBreakdown {
        control,
        running: running_cost(arch, params),
        switching: switching_cost(arch, prev, params),
    };
    Ok((breakdown.total(), breakdown, gains))
}

/// One time step of the cost ledger.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub t: usize,
    /// Total estimated cost breakdown of the committed architecture, if one
    /// was predicted at this step.
    pub estimate: Option<EstimateBreakdown>,
    pub stage: f64,
    pub running: f64,
    pub switching: f64,
    pub cumulative: f64,
}

/// Cumulative true cost `Σ_{τ≤t}(stage + running) + Σ_{1≤τ≤t} switching`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CostLedger {
    entries: Vec<LedgerEntry>,
}

impl CostLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn cumulative(&self) -> f64 {
        self.entries.last().map_or(0.0, |e| e.cumulative)
    }

    /// Appends step `t`, which must be the next step. The switching cost is
    /// recorded but not charged at `t = 0`.
    pub fn accumulate_true_cost(
        &mut self,
        t: usize,
        stage: f64,
        running: f64,
        switching: f64,
        estimate: Option<EstimateBreakdown>,
    ) -> Result<f64> {
        if t != self.entries.len() {
            return Err(Error::Argument(format!(
                "ledger expects step {}, got {t}",
                self.entries.len()
            )));
        }
        let charged = if t == 0 { 0.0 } else { switching };
        let cumulative = self.cumulative() + stage + running + charged;
        self.entries.push(LedgerEntry {
            t,
            estimate,
            stage,
            running,
            switching,
            cumulative,
        });
        Ok(cumulative)
    }

    /// Recomputes every cumulative total from the stored components.
    pub fn replay(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.entries.len());
        let mut acc = 0.0;
        for e in &self.entries {
            acc = acc + e.stage + e.running + if e.t == 0 { 0.0 } else { e.switching };
            out.push(acc);
        }
        out
    }
}

/// Free-function form of [`CostLedger::accumulate_true_cost`].
pub fn accumulate_true_cost(
    mut ledger: CostLedger,
    stage: f64,
    running: f64,
    switching: f64,
    t: usize,
) -> Result<CostLedger> {
    ledger.accumulate_true_cost(t, stage, running, switching, None)?;
    Ok(ledger)
}

/// Fast evaluator of the predicted control cost used inside the
/// architecture search.
///
/// Completing the square with the Riccati sequence `P_τ` of the actuator
/// set gives, for the applied input `u = −K_τ x̂`,
///
/// `J = x̂ᵀP₀x̂ + Σ_τ tr(P_{τ+1}W) + Σ_τ tr(K_τᵀ(R₁ + BᵀP_{τ+1}B)K_τ Σ_τ)`
///
/// where `Σ_τ` is the covariance of the prediction error `e = x − x̂`, which
/// starts at zero and follows `e⁺ = (A − AL_τC)e + w − AL_τv`. The first two
/// terms depend only on the actuators and the last factor only on the
/// sensors, so both are memoized and a candidate costs `T` inner products.
/// For symmetric `A` the model works in the eigenbasis, where `A` is
/// diagonal; the cost is invariant under that orthogonal change of frame.
#[derive(Debug, Clone)]
pub struct PredictionModel {
    map: StateMap,
    /// `x = basis · z` when working in the eigenbasis.
    basis: Option<DMatrix<f64>>,
    actuator_pool: DMatrix<f64>,
    sensor_pool: DMatrix<f64>,
    state_cost: DMatrix<f64>,
    terminal_cost: DMatrix<f64>,
    process_noise: DMatrix<f64>,
    sensor_noise_var: f64,
    input_cost: DMatrix<f64>,
    horizon: usize,
    actuator_cache: HashMap<Vec<usize>, Arc<ActuatorTerms>>,
}

/// Actuator-only part of the predicted cost.
#[derive(Debug)]
struct ActuatorTerms {
    p0: DMatrix<f64>,
    /// `Σ_τ tr(P_{τ+1} W)`
    process: f64,
    /// `K_τᵀ(R₁ + BᵀP_{τ+1}B)K_τ` for τ = 1…T−1 (the τ = 0 error is zero).
    error_weights: Vec<DMatrix<f64>>,
}

const ACTUATOR_CACHE_LIMIT: usize = 4096;

impl PredictionModel {
    pub fn new(system: &LinearNetworkSystem, params: &CostParameters) -> Result<Self> {
        params.validate(system)?;
        let a = system.a();
        let symmetric = linalg::asymmetry(a) <= 1e-12 * a.amax().max(1.0);
        if symmetric {
            let eig = SymmetricEigen::new(linalg::symmetrize(a));
            let v = eig.eigenvectors;
            let congr = |m: &DMatrix<f64>| linalg::symmetrize(&v.tr_mul(&(m * &v)));
            Ok(Self {
                map: StateMap::Diagonal(eig.eigenvalues),
                actuator_pool: v.tr_mul(system.actuator_pool()),
                sensor_pool: system.sensor_pool() * &v,
                state_cost: congr(&params.state_cost),
                terminal_cost: congr(&params.terminal_cost),
                process_noise: congr(system.process_noise()),
                basis: Some(v),
                sensor_noise_var: system.sensor_noise_var(),
                input_cost: params.input_cost.clone(),
                horizon: params.horizon,
                actuator_cache: HashMap::new(),
            })
        } else {
            Ok(Self {
                map: StateMap::Dense(a.clone()),
                basis: None,
                actuator_pool: system.actuator_pool().clone(),
                sensor_pool: system.sensor_pool().clone(),
                state_cost: params.state_cost.clone(),
                terminal_cost: params.terminal_cost.clone(),
                process_noise: system.process_noise().clone(),
                sensor_noise_var: system.sensor_noise_var(),
                input_cost: params.input_cost.clone(),
                horizon: params.horizon,
                actuator_cache: HashMap::new(),
            })
        }
    }

    pub fn uses_eigenbasis(&self) -> bool {
        self.basis.is_some()
    }

    fn to_frame_vec(&self, x: &DVector<f64>) -> DVector<f64> {
        match &self.basis {
            Some(v) => v.tr_mul(x),
            None => x.clone(),
        }
    }

    fn to_frame_mat(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        match &self.basis {
            Some(v) => linalg::symmetrize(&v.tr_mul(&(m * v))),
            None => m.clone(),
        }
    }

    fn actuator_terms(&mut self, actuators: &[usize]) -> Result<Arc<ActuatorTerms>> {
        if let Some(t) = self.actuator_cache.get(actuators) {
            return Ok(t.clone());
        }
        let b = network::input_matrix_unchecked(&self.actuator_pool, actuators);
        let r = linalg::principal_submatrix(&self.input_cost, actuators);
        let ControlSchedule { gains, mut costs } =
            synthesis::lqr_backward_map(&self.map, &b, &self.state_cost, &r, &self.terminal_cost, self.horizon)?;
        let process = costs[1..].iter().map(|p| linalg::frobenius_dot(p, &self.process_noise)).sum();
        let error_weights = (1..self.horizon)
            .map(|tau| {
                let k = &gains[tau];
                let pb = &costs[tau + 1] * &b;
                let s = &r + b.tr_mul(&pb);
                let mut m = k.tr_mul(&(s * k));
                linalg::symmetrize_in_place(&mut m);
                m
            })
            .collect();
        let terms = Arc::new(ActuatorTerms {
            p0: costs.swap_remove(0),
            process,
            error_weights,
        });
        if self.actuator_cache.len() >= ACTUATOR_CACHE_LIMIT {
            self.actuator_cache.clear();
        }
        self.actuator_cache.insert(actuators.to_vec(), terms.clone());
        Ok(terms)
    }

    /// Prediction-error covariances `Σ_1 … Σ_{T−1}` for one sensor set, in
    /// model coordinates.
    fn error_covariances(&self, sensors: &[usize], e_frame: &DMatrix<f64>) -> Result<Vec<DMatrix<f64>>> {
        let c = network::output_matrix_unchecked(&self.sensor_pool, sensors);
        let v = DMatrix::identity(sensors.len(), sensors.len()) * self.sensor_noise_var;
        let schedule = synthesis::kalman_forward_map(&self.map, &c, &self.process_noise, &v, e_frame, self.horizon)?;
        let n = self.state_cost.nrows();
        let mut sigma = DMatrix::zeros(n, n);
        let mut out = Vec::with_capacity(self.horizon.saturating_sub(1));
        for tau in 0..self.horizon.saturating_sub(1) {
            // (A − ALC) Σ (A − ALC)ᵀ + W + v (AL)(AL)ᵀ, with the rank-|S|
            // correction kept thin.
            let al = self.map.mul(&schedule.gains[tau]);
            let mut next = self.map.sandwich(&sigma) + &self.process_noise;
            if !sensors.is_empty() {
                let sct = &sigma * c.transpose();
                let a_sct = self.map.mul(&sct);
                let cross = &a_sct * al.transpose();
                let inner = &c * &sct + &v;
                next -= &cross;
                next -= cross.transpose();
                next += &al * inner * al.transpose();
            }
            linalg::symmetrize_in_place(&mut next);
            out.push(next.clone());
            sigma = next;
        }
        Ok(out)
    }

    /// Predicted control cost of `arch` from `(x̂, E_t)`; agrees with
    /// [`predicted_cost`] up to rounding.
    pub fn predicted_cost(&mut self, arch: &ArchitectureSet, x_hat: &DVector<f64>, e_t: &DMatrix<f64>) -> Result<f64> {
        let ctx = self.context(x_hat, e_t);
        self.predicted_cost_in(&ctx, arch)
    }

    /// Pre-transforms `(x̂, E_t)` once for many candidate architectures.
    pub fn context(&self, x_hat: &DVector<f64>, e_t: &DMatrix<f64>) -> PredictionContext {
        PredictionContext {
            z: self.to_frame_vec(x_hat),
            e: self.to_frame_mat(e_t),
            error_cache: HashMap::new(),
        }
    }

    pub fn predicted_cost_in(&mut self, ctx: &PredictionContext, arch: &ArchitectureSet) -> Result<f64> {
        let terms = self.actuator_terms(arch.actuators())?;
        let errors = match ctx.error_cache.get(arch.sensors()) {
            Some(e) => e.clone(),
            None => Arc::new(self.error_covariances(arch.sensors(), &ctx.e)?),
        };
        Ok(Self::combine(&terms, &errors, &ctx.z))
    }

    /// Like [`Self::predicted_cost_in`] but memoizes the sensor-set terms
    /// in `ctx`.
    pub fn predicted_cost_cached(&mut self, ctx: &mut PredictionContext, arch: &ArchitectureSet) -> Result<f64> {
        if !ctx.error_cache.contains_key(arch.sensors()) {
            let errors = self.error_covariances(arch.sensors(), &ctx.e)?;
            ctx.error_cache.insert(arch.sensors().to_vec(), Arc::new(errors));
        }
        self.predicted_cost_in(ctx, arch)
    }

    fn combine(terms: &ActuatorTerms, errors: &[DMatrix<f64>], z: &DVector<f64>) -> f64 {
        let estimation: f64 = terms
            .error_weights
            .iter()
            .zip(errors)
            .map(|(m, s)| linalg::frobenius_dot(m, s))
            .sum();
        linalg::quad_form(&terms.p0, z) + terms.process + estimation
    }
}

/// Per-time-step inputs of [`PredictionModel`] in model coordinates, with
/// a memo of error covariances by sensor set.
#[derive(Debug, Clone)]
pub struct PredictionContext {
    z: DVector<f64>,
    e: DMatrix<f64>,
    error_cache: HashMap<Vec<usize>, Arc<Vec<DMatrix<f64>>>>,
}
