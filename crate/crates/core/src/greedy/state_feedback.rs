//! Greedy actuator selection for state-feedback LQR and the
//! least-squares model it can run on.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};

use super::argmin;
use crate::error::{Error, Result};
use crate::linalg;
use crate::network;
use crate::synthesis::{self, DareOptions, DareOutcome};

/// Least-squares estimate of `A` from recorded transitions.
#[derive(Debug, Clone, PartialEq)]
pub struct Identification {
    pub a_hat: DMatrix<f64>,
    /// Numerical rank of the state regressor.
    pub rank: usize,
    /// Set when the regressor does not span the state space; `a_hat` is
    /// then the minimum-norm solution.
    pub rank_deficient: bool,
}

/// Fits `x(τ+1) ≈ A x(τ) + B_τ u(τ)` over all recorded transitions.
///
/// `x_hist` holds `t + 1` states, `u_hist` and `input_matrices` hold `t`
/// inputs and the input matrices they were applied through.
pub fn least_squares_identify(
    x_hist: &[DVector<f64>],
    u_hist: &[DVector<f64>],
    input_matrices: &[DMatrix<f64>],
) -> Result<Identification> {
    let t = u_hist.len();
    if t == 0 || x_hist.len() != t + 1 || input_matrices.len() != t {
        return Err(Error::Argument(format!(
            "need t >= 1 transitions with t+1 states and t inputs; got {} states, {t} inputs, {} input matrices",
            x_hist.len(),
            input_matrices.len()
        )));
    }
    let n = x_hist[0].len();
    let mut regressor = DMatrix::zeros(t, n);
    let mut targets = DMatrix::zeros(t, n);
    for tau in 0..t {
        let (x, b, u) = (&x_hist[tau], &input_matrices[tau], &u_hist[tau]);
        if x.len() != n || x_hist[tau + 1].len() != n {
            return Err(Error::dim("state history", n, x.len()));
        }
        if b.shape() != (n, u.len()) {
            return Err(Error::dim("input history", format!("{n}x{}", u.len()), format!("{}x{}", b.nrows(), b.ncols())));
        }
        let y = &x_hist[tau + 1] - b * u;
        regressor.row_mut(tau).copy_from(&x.transpose());
        targets.row_mut(tau).copy_from(&y.transpose());
    }
    let svd = regressor.svd(true, true);
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let eps = sigma_max * (t.max(n) as f64) * f64::EPSILON;
    let rank = svd.singular_values.iter().filter(|s| **s > eps).count();
    let a_t = svd
        .solve(&targets, eps)
        .map_err(|e| Error::Solver(format!("least squares: {e}")))?;
    Ok(Identification {
        a_hat: a_t.transpose(),
        rank,
        rank_deficient: rank < n,
    })
}

/// Result of one greedy actuator selection.
#[derive(Debug, Clone, PartialEq)]
pub struct StateFeedbackSelection {
    /// Chosen actuators, ascending.
    pub actuators: Vec<usize>,
    /// Actuators in the order they were picked.
    pub pick_order: Vec<usize>,
    /// Infinite-horizon cost `xᵀPx` of the final set (+∞ if unstabilizable).
    pub cost: f64,
    /// `P` of the final set, if the Riccati iteration converged.
    pub p: Option<DMatrix<f64>>,
    /// Applied gain: `u = gain · x`.
    pub gain: Option<DMatrix<f64>>,
    pub input: Option<DVector<f64>>,
}

/// Greedy actuator selector that caches Riccati solutions by actuator set.
/// The solutions depend only on the model, so the cache is valid for as long
/// as `A` stays fixed.
#[derive(Debug, Clone)]
pub struct ActuatorSelector {
    a: DMatrix<f64>,
    pool: DMatrix<f64>,
    q: DMatrix<f64>,
    r: DMatrix<f64>,
    options: DareOptions,
    cache: HashMap<Vec<usize>, DareOutcome>,
}

const DARE_CACHE_LIMIT: usize = 8192;

impl ActuatorSelector {
    /// `r` is the M×M input cost over the whole pool.
    pub fn new(
        a: DMatrix<f64>,
        actuator_pool: DMatrix<f64>,
        q: DMatrix<f64>,
        r: DMatrix<f64>,
        options: DareOptions,
    ) -> Result<Self> {
        let n = a.nrows();
        linalg::require_shape(&a, n, n, "dynamics A")?;
        linalg::require_shape(&actuator_pool, n, actuator_pool.ncols(), "actuator pool")?;
        linalg::require_shape(&q, n, n, "state cost Q")?;
        linalg::require_shape(&r, actuator_pool.ncols(), actuator_pool.ncols(), "input cost R")?;
        linalg::require_psd(&q, "state cost Q")?;
        linalg::require_pd(&r, "input cost R")?;
        Ok(Self {
            a,
            pool: actuator_pool,
            q,
            r,
            options,
            cache: HashMap::new(),
        })
    }

    pub fn dynamics(&self) -> &DMatrix<f64> {
        &self.a
    }

    /// Swaps in a new model and drops cached solutions.
    pub fn set_dynamics(&mut self, a: DMatrix<f64>) -> Result<()> {
        linalg::require_shape(&a, self.a.nrows(), self.a.ncols(), "dynamics A")?;
        self.a = a;
        self.cache.clear();
        Ok(())
    }

    /// Riccati solution for a sorted actuator set.
    pub fn dare(&mut self, actuators: &[usize]) -> Result<DareOutcome> {
        if let Some(out) = self.cache.get(actuators) {
            return Ok(out.clone());
        }
        let b = network::input_matrix_unchecked(&self.pool, actuators);
        let r = linalg::principal_submatrix(&self.r, actuators);
        let out = synthesis::solve_dare(&self.a, &b, &self.q, &r, &self.options)?;
        if self.cache.len() >= DARE_CACHE_LIMIT {
            self.cache.clear();
        }
        self.cache.insert(actuators.to_vec(), out.clone());
        Ok(out)
    }

    /// Grows an actuator set to `cardinality` elements, each time adding the
    /// candidate with the lowest `xᵀPx`. Unstabilizable candidates score +∞;
    /// if every candidate does, the lowest index is taken.
    pub fn select(&mut self, x: &DVector<f64>, cardinality: usize) -> Result<StateFeedbackSelection> {
        let m = self.pool.ncols();
        if cardinality > m {
            return Err(Error::Argument(format!("cardinality {cardinality} exceeds pool size {m}")));
        }
        if x.len() != self.a.nrows() {
            return Err(Error::dim("state", self.a.nrows(), x.len()));
        }
        let mut chosen: Vec<usize> = Vec::with_capacity(cardinality);
        let mut pick_order = Vec::with_capacity(cardinality);
        while chosen.len() < cardinality {
            let candidates: Vec<usize> = (0..m).filter(|c| chosen.binary_search(c).is_err()).collect();
            let mut scores = Vec::with_capacity(candidates.len());
            for &c in &candidates {
                let mut trial = chosen.clone();
                trial.insert(trial.binary_search(&c).unwrap_err(), c);
                scores.push(self.dare(&trial)?.cost_at(x));
            }
            let best = candidates[argmin(scores).expect("candidates remain below the pool size")];
            chosen.insert(chosen.binary_search(&best).unwrap_err(), best);
            pick_order.push(best);
        }

        let outcome = self.dare(&chosen)?;
        let cost = outcome.cost_at(x);
        let (p, gain, input) = match outcome {
            DareOutcome::Converged { p, .. } => {
                let b = network::input_matrix_unchecked(&self.pool, &chosen);
                let r = linalg::principal_submatrix(&self.r, &chosen);
                let gain = -synthesis::lqr_gain(&self.a, &b, &r, &p)?;
                let input = &gain * x;
                (Some(p), Some(gain), Some(input))
            }
            DareOutcome::Diverged(_) => (None, None, None),
        };
        Ok(StateFeedbackSelection {
            actuators: chosen,
            pick_order,
            cost,
            p,
            gain,
            input,
        })
    }
}

/// One-shot form of [`ActuatorSelector::select`].
pub fn greedy_actuator_state_feedback(
    a: &DMatrix<f64>,
    actuator_pool: &DMatrix<f64>,
    q: &DMatrix<f64>,
    r: &DMatrix<f64>,
    x: &DVector<f64>,
    cardinality: usize,
    options: &DareOptions,
) -> Result<StateFeedbackSelection> {
    ActuatorSelector::new(a.clone(), actuator_pool.clone(), q.clone(), r.clone(), *options)?.select(x, cardinality)
}
