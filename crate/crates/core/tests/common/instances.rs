//! Seeded problem instances used by several test targets.

use nalgebra::{DMatrix, DVector};
use rand::seq::index;
use selftune::cost::{predicted_cost, running_cost, switching_cost, CostParameters, PredictionModel};
use selftune::exact_dp::{k_subsets, LqArchitectureProblem};
use selftune::network::{ArchitectureSet, LinearNetworkSystem};
use selftune::rng::{covariance_factor, gaussian_vector};

use super::*;

pub fn dp_problem(seed: u64, n: usize, m: usize, k: usize, horizon: usize) -> LqArchitectureProblem {
    let mut g = rng(seed);
    let rho = uniform(&mut g, 0.5, 1.5);
    LqArchitectureProblem {
        a: scaled_dynamics(&mut g, n, rho),
        pool: normal_matrix(&mut g, n, m),
        q: random_psd(&mut g, n, 0.1),
        r: random_psd(&mut g, m, 0.5),
        q_terminal: random_psd(&mut g, n, 0.0),
        w: random_psd(&mut g, n, 0.0),
        horizon,
        cardinality: k,
    }
}

/// Fixed-architecture LQG instance with `n ∈ 2..=5` and `T = 5`.
pub struct LqgInstance {
    pub system: LinearNetworkSystem,
    pub arch: ArchitectureSet,
    pub params: CostParameters,
    pub x_hat: DVector<f64>,
    pub e_t: DMatrix<f64>,
}

pub fn lqg_instance(seed: u64) -> LqgInstance {
    let mut g = rng(seed);
    let n = 2 + (seed as usize % 4);
    let (m, s) = (n, n);
    let rho = uniform(&mut g, 0.6, 1.2);
    let a = scaled_dynamics(&mut g, n, rho);
    let b = normal_matrix(&mut g, n, m);
    let c = normal_matrix(&mut g, s, n);
    let w = random_psd(&mut g, n, 0.1) * 0.3;
    let v = uniform(&mut g, 0.2, 1.5);
    let system = LinearNetworkSystem::new(a, b, c, w, v).unwrap();
    let k_act = 1 + (seed as usize % m);
    let k_sen = 1 + (seed as usize % s);
    let acts = index::sample(&mut g, m, k_act).into_vec();
    let sens = index::sample(&mut g, s, k_sen).into_vec();
    let arch = ArchitectureSet::new(acts, sens).unwrap();
    let params = CostParameters::new(
        random_psd(&mut g, n, 0.1),
        random_psd(&mut g, m, 0.5),
        random_psd(&mut g, n, 0.1),
        s,
        5,
    );
    LqgInstance {
        x_hat: normal_vector(&mut g, n),
        e_t: random_psd(&mut g, n, 0.1),
        system,
        arch,
        params,
    }
}

/// Mean and standard error of the realized cost over `rollouts` runs with
/// `x(0) = x̂(0)` and the one-step predictor
/// `x̂⁺ = A(x̂ + L(y − Cx̂)) + Bu`, `u = −Kx̂`.
pub fn empirical_cost(inst: &LqgInstance, rollouts: usize, seed: u64) -> (f64, f64) {
    let sys = &inst.system;
    let n = sys.n();
    let acts = inst.arch.actuators();
    let sens = inst.arch.sensors();
    let b = DMatrix::from_fn(n, acts.len(), |i, j| sys.actuator_pool()[(i, acts[j])]);
    let c = DMatrix::from_fn(sens.len(), n, |i, j| sys.sensor_pool()[(sens[i], j)]);
    let r = DMatrix::from_fn(acts.len(), acts.len(), |i, j| inst.params.input_cost[(acts[i], acts[j])]);
    let (_, gains) = predicted_cost(sys, &inst.arch, &inst.x_hat, &inst.e_t, &inst.params).unwrap();
    let w_factor = covariance_factor(sys.process_noise());
    let v_std = sys.sensor_noise_var().sqrt();
    let mut g = rng(seed);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..rollouts {
        let mut x = inst.x_hat.clone();
        let mut xh = inst.x_hat.clone();
        let mut cost = 0.0;
        for tau in 0..inst.params.horizon {
            let u = -(gains.feedback(tau) * &xh);
            cost += x.dot(&(&inst.params.state_cost * &x)) + u.dot(&(&r * &u));
            let y = &c * &x + normal_vector(&mut g, c.nrows()) * v_std;
            let corrected = &xh + gains.estimator(tau) * (y - &c * &xh);
            xh = sys.a() * corrected + &b * &u;
            x = sys.a() * &x + &b * &u + gaussian_vector(&mut g, &w_factor);
        }
        cost += x.dot(&(&inst.params.terminal_cost * &x));
        sum += cost;
        sum_sq += cost * cost;
    }
    let k = rollouts as f64;
    let mean = sum / k;
    let var = (sum_sq / k - mean * mean) * k / (k - 1.0);
    (mean, (var / k).sqrt())
}

/// n = 4 network with pools of five actuators and five sensors and a random
/// initial architecture with two of each.
pub struct SwapInstance {
    pub system: LinearNetworkSystem,
    pub params: CostParameters,
    pub x_hat: DVector<f64>,
    pub e_t: DMatrix<f64>,
    pub init: ArchitectureSet,
}

pub fn swap_instance(seed: u64) -> SwapInstance {
    let mut g = rng(seed);
    let n = 4;
    let rho = uniform(&mut g, 0.8, 1.2);
    let a = scaled_dynamics(&mut g, n, rho);
    let system = LinearNetworkSystem::new(
        a,
        normal_matrix(&mut g, n, 5),
        normal_matrix(&mut g, 5, n),
        DMatrix::identity(n, n),
        1.0,
    )
    .unwrap();
    let params = CostParameters::identity(&system, 5);
    let init = ArchitectureSet::new(
        index::sample(&mut g, 5, 2).into_vec(),
        index::sample(&mut g, 5, 2).into_vec(),
    )
    .unwrap();
    SwapInstance {
        x_hat: normal_vector(&mut g, n) * 3.0,
        e_t: random_psd(&mut g, n, 0.1),
        system,
        params,
        init,
    }
}

impl SwapInstance {
    pub fn total_cost(&self, model: &mut PredictionModel, arch: &ArchitectureSet) -> f64 {
        model.predicted_cost(arch, &self.x_hat, &self.e_t).unwrap()
            + running_cost(arch, &self.params)
            + switching_cost(arch, &self.init, &self.params)
    }

    /// Minimum over every (A, S) with two devices of each kind.
    pub fn exhaustive_minimum(&self, model: &mut PredictionModel) -> f64 {
        let mut best = f64::INFINITY;
        for a in k_subsets(5, 2) {
            for s in k_subsets(5, 2) {
                best = best.min(self.total_cost(model, &ArchitectureSet::new(a.clone(), s).unwrap()));
            }
        }
        best
    }
}
