//! Control and estimation gain synthesis.
//!
//! Finite-horizon LQR runs backwards from the terminal weight, the Kalman
//! filter forwards from the current error covariance. Every produced cost and
//! covariance matrix is symmetrized after each step. An empty actuator set
//! degenerates to the uncontrolled recursion `P = AᵀP⁺A + Q`, an empty sensor
//! set to open-loop covariance propagation `E⁺ = AEAᵀ + W`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, StateMap};
use crate::network::{self, ArchitectureSet, LinearNetworkSystem};

/// Feedback gains `K_τ` (τ = 0…T−1) and cost-to-go matrices `P_τ` (τ = 0…T).
#[derive(Debug, Clone, PartialEq)]
pub struct ControlSchedule {
    pub gains: Vec<DMatrix<f64>>,
    pub costs: Vec<DMatrix<f64>>,
}

/// Estimator gains `L_τ` (τ = 0…T−1) and error covariances `E_τ` (τ = 0…T).
#[derive(Debug, Clone, PartialEq)]
pub struct EstimationSchedule {
    pub gains: Vec<DMatrix<f64>>,
    pub covariances: Vec<DMatrix<f64>>,
}

/// Control and estimation schedules over one prediction horizon for a fixed
/// architecture.
#[derive(Debug, Clone, PartialEq)]
pub struct GainSchedule {
    pub control: ControlSchedule,
    pub estimation: EstimationSchedule,
}

impl GainSchedule {
    pub fn horizon(&self) -> usize {
        self.control.gains.len()
    }

    pub fn feedback(&self, tau: usize) -> &DMatrix<f64> {
        &self.control.gains[tau]
    }

    pub fn estimator(&self, tau: usize) -> &DMatrix<f64> {
        &self.estimation.gains[tau]
    }
}

pub(crate) fn riccati_step_map(
    a: &StateMap,
    b: &DMatrix<f64>,
    q: &DMatrix<f64>,
    r: &DMatrix<f64>,
    p_next: &DMatrix<f64>,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let n = p_next.nrows();
    let mut p = a.congruence(p_next);
    if b.ncols() == 0 {
        p += q;
        linalg::symmetrize_in_place(&mut p);
        return Ok((DMatrix::zeros(0, n), p));
    }
    let pb = p_next * b;
    let s = b.tr_mul(&pb) + r;
    // Aᵀ P⁺ B, so Bᵀ P⁺ A is its transpose
    let at_pb = a.tr_mul(&pb);
    let k = linalg::spd_solve(&s, &at_pb.transpose())?;
    p -= &at_pb * &k;
    p += q;
    linalg::symmetrize_in_place(&mut p);
    Ok((k, p))
}

/// One backward LQR step from `P⁺`:
/// `K = (BᵀP⁺B + R)⁻¹BᵀP⁺A`, `P = AᵀP⁺A − AᵀP⁺B K + Q`.
pub fn riccati_step(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    q: &DMatrix<f64>,
    r: &DMatrix<f64>,
    p_next: &DMatrix<f64>,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    check_control_inputs(a, b, q, r)?;
    linalg::require_shape(p_next, a.nrows(), a.nrows(), "P_next")?;
    linalg::require_psd(p_next, "P_next")?;
    riccati_step_map(&StateMap::Dense(a.clone()), b, q, r, p_next)
}

fn check_control_inputs(a: &DMatrix<f64>, b: &DMatrix<f64>, q: &DMatrix<f64>, r: &DMatrix<f64>) -> Result<()> {
    let n = a.nrows();
    linalg::require_shape(a, n, n, "A")?;
    if b.nrows() != n {
        return Err(Error::dim("B rows", n, b.nrows()));
    }
    linalg::require_shape(q, n, n, "Q")?;
    linalg::require_shape(r, b.ncols(), b.ncols(), "R")?;
    linalg::require_psd(q, "Q")?;
    linalg::require_pd(r, "R")
}

pub(crate) fn lqr_backward_map(
    a: &StateMap,
    b: &DMatrix<f64>,
    q: &DMatrix<f64>,
    r: &DMatrix<f64>,
    q_terminal: &DMatrix<f64>,
    horizon: usize,
) -> Result<ControlSchedule> {
    let mut costs = vec![linalg::symmetrize(q_terminal)];
    let mut gains = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        let (k, p) = riccati_step_map(a, b, q, r, costs.last().unwrap())?;
        gains.push(k);
        costs.push(p);
    }
    gains.reverse();
    costs.reverse();
    Ok(ControlSchedule { gains, costs })
}

/// Finite-horizon LQR: `P_T = Q_T`, then [`riccati_step`] for τ = T−1 … 0.
pub fn lqr_backward(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    q: &DMatrix<f64>,
    r: &DMatrix<f64>,
    q_terminal: &DMatrix<f64>,
    horizon: usize,
) -> Result<ControlSchedule> {
    if horizon == 0 {
        return Err(Error::Argument("horizon must be at least 1".into()));
    }
    check_control_inputs(a, b, q, r)?;
    linalg::require_shape(q_terminal, a.nrows(), a.nrows(), "Q_T")?;
    linalg::require_psd(q_terminal, "Q_T")?;
    lqr_backward_map(&StateMap::Dense(a.clone()), b, q, r, q_terminal, horizon)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DareMethod {
    /// Plain Riccati value iteration from `P = Q`.
    FixedPoint,
    /// Structure-preserving doubling: the k-th iterate equals value iterate
    /// `2^k − 1` of the fixed-point sequence, so it reaches the same limit in
    /// logarithmically many steps.
    Doubling,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DareOptions {
    /// Stop when `‖P_{k+1} − P_k‖_F < tol · max(1, ‖P_{k+1}‖_F)`.
    pub tol: f64,
    /// Budget in value-iteration steps (doubling gets `⌈log₂(max_iter + 1)⌉` doublings).
    pub max_iter: usize,
    /// Frobenius norm above which the iteration is declared divergent.
    pub overflow: f64,
    pub method: DareMethod,
}

impl Default for DareOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 10_000,
            overflow: 1e12,
            method: DareMethod::FixedPoint,
        }
    }
}

impl DareOptions {
    pub fn doubling() -> Self {
        Self {
            method: DareMethod::Doubling,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DivergenceReason {
    Overflow,
    IterationLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DareOutcome {
    Converged { p: DMatrix<f64>, iterations: usize },
    /// No stabilizing solution was found; the infinite-horizon cost is +∞.
    Diverged(DivergenceReason),
}

impl DareOutcome {
    pub fn solution(&self) -> Option<&DMatrix<f64>> {
        match self {
            DareOutcome::Converged { p, .. } => Some(p),
            DareOutcome::Diverged(_) => None,
        }
    }

    /// `xᵀPx`, or +∞ when diverged.
    pub fn cost_at(&self, x: &DVector<f64>) -> f64 {
        self.solution().map_or(f64::INFINITY, |p| linalg::quad_form(p, x))
    }
}

fn converged(prev: &DMatrix<f64>, next: &DMatrix<f64>, tol: f64) -> bool {
    (next - prev).norm() < tol * next.norm().max(1.0)
}

pub(crate) fn solve_dare_map(
    a: &StateMap,
    b: &DMatrix<f64>,
    q: &DMatrix<f64>,
    r: &DMatrix<f64>,
    opts: &DareOptions,
) -> Result<DareOutcome> {
    match opts.method {
        DareMethod::FixedPoint => {
            let mut p = linalg::symmetrize(q);
            for it in 1..=opts.max_iter {
                let (_, next) = riccati_step_map(a, b, q, r, &p)?;
                if !next.iter().all(|v| v.is_finite()) || next.norm() > opts.overflow {
                    return Ok(DareOutcome::Diverged(DivergenceReason::Overflow));
                }
                let done = converged(&p, &next, opts.tol);
                p = next;
                if done {
                    return Ok(DareOutcome::Converged { p, iterations: it });
                }
            }
            Ok(DareOutcome::Diverged(DivergenceReason::IterationLimit))
        }
        DareMethod::Doubling => solve_dare_doubling(a, b, q, r, opts),
    }
}

fn solve_dare_doubling(
    a: &StateMap,
    b: &DMatrix<f64>,
    q: &DMatrix<f64>,
    r: &DMatrix<f64>,
    opts: &DareOptions,
) -> Result<DareOutcome> {
    let n = q.nrows();
    let ident = DMatrix::<f64>::identity(n, n);
    let mut ak = a.mul(&ident);
    let mut g = if b.ncols() == 0 {
        DMatrix::zeros(n, n)
    } else {
        b * linalg::spd_solve(r, &b.transpose())?
    };
    linalg::symmetrize_in_place(&mut g);
    let mut h = linalg::symmetrize(q);
    let doublings = ((opts.max_iter as f64) + 1.0).log2().ceil().max(1.0) as usize;
    for k in 1..=doublings {
        let w = &ident + &g * &h;
        let lu = w.lu();
        let solve = |m: &DMatrix<f64>| {
            lu.solve(m)
                .ok_or_else(|| Error::Solver("singular doubling matrix I + G H".into()))
        };
        let winv_a = solve(&ak)?;
        let winv_g = solve(&g)?;
        let h_next = &h + ak.tr_mul(&(&h * &winv_a));
        let g_next = &g + &ak * winv_g * ak.transpose();
        ak = &ak * winv_a;
        let mut h_next = h_next;
        linalg::symmetrize_in_place(&mut h_next);
        if !h_next.iter().all(|v| v.is_finite()) || h_next.norm() > opts.overflow {
            return Ok(DareOutcome::Diverged(DivergenceReason::Overflow));
        }
        let done = converged(&h, &h_next, opts.tol);
        h = h_next;
        g = g_next;
        linalg::symmetrize_in_place(&mut g);
        if done {
            return Ok(DareOutcome::Converged {
                p: h,
                iterations: (1usize << k.min(62)) - 1,
            });
        }
    }
    Ok(DareOutcome::Diverged(DivergenceReason::IterationLimit))
}

/// Infinite-horizon Riccati fixed point. Unstabilizable pairs come back as
/// [`DareOutcome::Diverged`] rather than an error.
pub fn solve_dare(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    q: &DMatrix<f64>,
    r: &DMatrix<f64>,
    opts: &DareOptions,
) -> Result<DareOutcome> {
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(Error::Argument(format!("DARE tolerance must be positive, got {}", opts.tol)));
    }
    check_control_inputs(a, b, q, r)?;
    solve_dare_map(&StateMap::Dense(a.clone()), b, q, r, opts)
}

/// `‖P − (AᵀPA − AᵀPB(BᵀPB + R)⁻¹BᵀPA + Q)‖_F`
pub fn dare_residual(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    q: &DMatrix<f64>,
    r: &DMatrix<f64>,
    p: &DMatrix<f64>,
) -> Result<f64> {
    let (_, next) = riccati_step_map(&StateMap::Dense(a.clone()), b, q, r, p)?;
    Ok((next - p).norm())
}

/// Stationary gain `K = (R + BᵀPB)⁻¹BᵀPA`; the applied input is `u = −K x`.
pub fn lqr_gain(a: &DMatrix<f64>, b: &DMatrix<f64>, r: &DMatrix<f64>, p: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if b.ncols() == 0 {
        return Ok(DMatrix::zeros(0, a.nrows()));
    }
    let pb = p * b;
    let s = b.tr_mul(&pb) + r;
    linalg::spd_solve(&s, &(pb.transpose() * a))
}

pub(crate) fn kalman_step_map(
    a: &StateMap,
    c: &DMatrix<f64>,
    w: &DMatrix<f64>,
    v: &DMatrix<f64>,
    e: &DMatrix<f64>,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let n = e.nrows();
    let mut e_next = a.sandwich(e);
    if c.nrows() == 0 {
        e_next += w;
        linalg::symmetrize_in_place(&mut e_next);
        return Ok((DMatrix::zeros(n, 0), e_next));
    }
    let ect = e * c.transpose();
    let s = c * &ect + v;
    // L = E Cᵀ S⁻¹ = (S⁻¹ C E)ᵀ
    let l = linalg::spd_solve(&s, &ect.transpose())
        .map_err(|_| Error::Solver("singular innovation covariance C E Cᵀ + V".into()))?
        .transpose();
    let al = a.mul(&l);
    let aect = a.mul(&ect);
    e_next -= al * aect.transpose();
    e_next += w;
    linalg::symmetrize_in_place(&mut e_next);
    Ok((l, e_next))
}

fn check_estimation_inputs(
    a: &DMatrix<f64>,
    c: &DMatrix<f64>,
    w: &DMatrix<f64>,
    v: &DMatrix<f64>,
    e: &DMatrix<f64>,
) -> Result<()> {
    let n = a.nrows();
    linalg::require_shape(a, n, n, "A")?;
    if c.ncols() != n {
        return Err(Error::dim("C columns", n, c.ncols()));
    }
    linalg::require_shape(w, n, n, "W")?;
    linalg::require_shape(v, c.nrows(), c.nrows(), "V")?;
    linalg::require_shape(e, n, n, "E")?;
    linalg::require_psd(w, "W")?;
    linalg::require_psd(v, "V")?;
    linalg::require_psd(e, "E")
}

/// One forward Kalman step from `E`:
/// `L = ECᵀ(CECᵀ + V)⁻¹`, `E⁺ = AEAᵀ − AECᵀ(CECᵀ + V)⁻¹CEAᵀ + W`.
pub fn kalman_step(
    a: &DMatrix<f64>,
    c: &DMatrix<f64>,
    w: &DMatrix<f64>,
    v: &DMatrix<f64>,
    e: &DMatrix<f64>,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    check_estimation_inputs(a, c, w, v, e)?;
    kalman_step_map(&StateMap::Dense(a.clone()), c, w, v, e)
}

pub(crate) fn kalman_forward_map(
    a: &StateMap,
    c: &DMatrix<f64>,
    w: &DMatrix<f64>,
    v: &DMatrix<f64>,
    e0: &DMatrix<f64>,
    horizon: usize,
) -> Result<EstimationSchedule> {
    let mut covariances = vec![linalg::symmetrize(e0)];
    let mut gains = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        let (l, e) = kalman_step_map(a, c, w, v, covariances.last().unwrap())?;
        gains.push(l);
        covariances.push(e);
    }
    Ok(EstimationSchedule { gains, covariances })
}

/// Kalman recursion over `horizon` steps from the current covariance `E_0`.
pub fn kalman_forward(
    a: &DMatrix<f64>,
    c: &DMatrix<f64>,
    w: &DMatrix<f64>,
    v: &DMatrix<f64>,
    e0: &DMatrix<f64>,
    horizon: usize,
) -> Result<EstimationSchedule> {
    if horizon == 0 {
        return Err(Error::Argument("horizon must be at least 1".into()));
    }
    check_estimation_inputs(a, c, w, v, e0)?;
    kalman_forward_map(&StateMap::Dense(a.clone()), c, w, v, e0, horizon)
}

/// Estimator update with the applied input `u = −K₀ x̂`:
/// `x̂⁺ = A(I − L₀C)x̂ + A L₀ y + B u`.
pub fn estimator_update(
    system: &LinearNetworkSystem,
    arch: &ArchitectureSet,
    k0: &DMatrix<f64>,
    l0: &DMatrix<f64>,
    x_hat: &DVector<f64>,
    y: &DVector<f64>,
) -> Result<DVector<f64>> {
    let n = system.n();
    let b = network::build_input_matrix(system, arch)?;
    let c = network::build_output_matrix(system, arch)?;
    linalg::require_shape(k0, b.ncols(), n, "K_0")?;
    linalg::require_shape(l0, n, c.nrows(), "L_0")?;
    if x_hat.len() != n {
        return Err(Error::dim("state estimate", n, x_hat.len()));
    }
    if y.len() != c.nrows() {
        return Err(Error::dim("measurement", c.nrows(), y.len()));
    }
    let u = -(k0 * x_hat);
    let innovation = y - &c * x_hat;
    Ok(system.a() * (x_hat + l0 * innovation) + b * u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: f64) -> DMatrix<f64> {
        DMatrix::from_element(1, 1, v)
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn scalar_riccati_step() {
        let (k, p) = riccati_step(&s(2.0), &s(1.0), &s(1.0), &s(1.0), &s(1.0)).unwrap();
        assert!(close(k[(0, 0)], 1.0, 1e-14));
        assert!(close(p[(0, 0)], 3.0, 1e-14));
    }

    /// The step must agree with direct minimization of the one-step cost
    /// `q x² + r u² + p (a x + b u)²` over a fine grid of inputs.
    #[test]
    fn scalar_riccati_step_matches_grid_minimum() {
        let (a, b, q, r, p) = (2.0, 1.0, 1.0, 1.0, 1.0);
        let x = 1.0;
        let best = (-40_000..=40_000)
            .map(|i| i as f64 * 1e-4)
            .map(|u| q * x * x + r * u * u + p * (a * x + b * u).powi(2))
            .fold(f64::INFINITY, f64::min);
        let (_, pm) = riccati_step(&s(a), &s(b), &s(q), &s(r), &s(p)).unwrap();
        assert!(close(best, pm[(0, 0)] * x * x, 1e-7));
    }

    #[test]
    fn zero_terminal_weight() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.3, 0.0, 0.8]);
        let b = DMatrix::from_row_slice(2, 1, &[0.0, 1.0]);
        let q = DMatrix::identity(2, 2);
        let (k, p) = riccati_step(&a, &b, &q, &s(1.0), &DMatrix::zeros(2, 2)).unwrap();
        assert_eq!(k, DMatrix::zeros(1, 2));
        assert_eq!(p, q);
    }

    #[test]
    fn empty_input_matrix_is_uncontrolled() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.3, 0.0, 0.8]);
        let b = DMatrix::zeros(2, 0);
        let q = DMatrix::identity(2, 2);
        let pn = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let (k, p) = riccati_step(&a, &b, &q, &DMatrix::zeros(0, 0), &pn).unwrap();
        assert_eq!(k.shape(), (0, 2));
        assert!((p - (a.transpose() * &pn * &a + q)).amax() < 1e-14);
    }

    #[test]
    fn riccati_rejects_bad_inputs() {
        assert!(matches!(
            riccati_step(&s(1.0), &s(1.0), &s(-1.0), &s(1.0), &s(1.0)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            riccati_step(&s(1.0), &s(1.0), &s(1.0), &s(0.0), &s(1.0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn lqr_backward_scalar() {
        let sched = lqr_backward(&s(2.0), &s(1.0), &s(1.0), &s(1.0), &s(1.0), 2).unwrap();
        assert_eq!(sched.costs.len(), 3);
        assert!(close(sched.costs[2][(0, 0)], 1.0, 0.0));
        assert!(close(sched.costs[1][(0, 0)], 3.0, 1e-14));
        assert!(close(sched.costs[0][(0, 0)], 4.0, 1e-14));
        // composed one-step op
        let (_, p1) = riccati_step(&s(2.0), &s(1.0), &s(1.0), &s(1.0), &s(1.0)).unwrap();
        let (k0, p0) = riccati_step(&s(2.0), &s(1.0), &s(1.0), &s(1.0), &p1).unwrap();
        assert_eq!(sched.costs[0], p0);
        assert_eq!(sched.gains[0], k0);
    }

    #[test]
    fn lqr_backward_single_step_and_memoryless() {
        let one = lqr_backward(&s(2.0), &s(1.0), &s(1.0), &s(1.0), &s(1.0), 1).unwrap();
        assert_eq!(one.gains.len(), 1);
        assert!(close(one.gains[0][(0, 0)], 1.0, 1e-14));

        let q = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]);
        let sched = lqr_backward(
            &DMatrix::zeros(2, 2),
            &DMatrix::identity(2, 2),
            &q,
            &DMatrix::identity(2, 2),
            &DMatrix::identity(2, 2),
            4,
        )
        .unwrap();
        for tau in 0..4 {
            assert_eq!(sched.gains[tau], DMatrix::zeros(2, 2));
            assert_eq!(sched.costs[tau], q);
        }
        assert!(lqr_backward(&s(1.0), &s(1.0), &s(1.0), &s(1.0), &s(1.0), 0).is_err());
    }

    #[test]
    fn dare_scalar_closed_form() {
        let expected = 2.0 + 5f64.sqrt();
        for opts in [DareOptions::default(), DareOptions::doubling()] {
            let out = solve_dare(&s(2.0), &s(1.0), &s(1.0), &s(1.0), &opts).unwrap();
            let p = out.solution().expect("converged")[(0, 0)];
            assert!(close(p, expected, 1e-8), "{opts:?}: {p}");
        }
    }

    #[test]
    fn dare_uncontrolled_stable_is_geometric_series() {
        let b = DMatrix::zeros(1, 0);
        let r = DMatrix::zeros(0, 0);
        let out = solve_dare(&s(0.5), &b, &s(1.0), &r, &DareOptions::default()).unwrap();
        assert!(close(out.solution().unwrap()[(0, 0)], 4.0 / 3.0, 1e-9));
        let sum: f64 = (0..200).map(|k| 0.25f64.powi(k)).sum();
        assert!(close(sum, 4.0 / 3.0, 1e-12));
    }

    #[test]
    fn dare_uncontrolled_unstable_diverges() {
        let b = DMatrix::zeros(1, 0);
        let r = DMatrix::zeros(0, 0);
        for opts in [DareOptions::default(), DareOptions::doubling()] {
            let out = solve_dare(&s(2.0), &b, &s(1.0), &r, &opts).unwrap();
            assert_eq!(out, DareOutcome::Diverged(DivergenceReason::Overflow));
            assert_eq!(out.cost_at(&DVector::from_element(1, 1.0)), f64::INFINITY);
        }
    }

    #[test]
    fn dare_iteration_limit() {
        let opts = DareOptions {
            max_iter: 2,
            ..DareOptions::default()
        };
        let out = solve_dare(&s(0.99), &s(0.01), &s(1.0), &s(1.0), &opts).unwrap();
        assert_eq!(out, DareOutcome::Diverged(DivergenceReason::IterationLimit));
    }

    #[test]
    fn kalman_scalar() {
        let (l, e) = kalman_step(&s(1.0), &s(1.0), &s(1.0), &s(1.0), &s(1.0)).unwrap();
        assert!(close(l[(0, 0)], 0.5, 1e-15));
        assert!(close(e[(0, 0)], 1.5, 1e-15));
        let sched = kalman_forward(&s(1.0), &s(1.0), &s(1.0), &s(1.0), &s(1.0), 2).unwrap();
        assert_eq!(sched.gains[0], l);
        assert!(close(sched.covariances[1][(0, 0)], 1.5, 1e-15));
        assert!(close(sched.covariances[2][(0, 0)], 1.6, 1e-14));
    }

    #[test]
    fn kalman_open_loop_without_sensors() {
        let c = DMatrix::zeros(0, 1);
        let v = DMatrix::zeros(0, 0);
        let (l, e) = kalman_step(&s(1.0), &c, &s(1.0), &v, &s(1.0)).unwrap();
        assert_eq!(l.shape(), (1, 0));
        assert!(close(e[(0, 0)], 2.0, 0.0));
    }

    #[test]
    fn kalman_noise_monotone() {
        let e_next = |v: f64| kalman_step(&s(1.0), &s(1.0), &s(1.0), &s(v), &s(1.0)).unwrap().1[(0, 0)];
        assert!(e_next(1.0) < e_next(10.0));
        assert!(e_next(10.0) < e_next(100.0));
    }

    #[test]
    fn kalman_perfect_information() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.2, 0.0, 0.9]);
        let c = DMatrix::from_row_slice(1, 2, &[1.0, 0.0]);
        let sched = kalman_forward(&a, &c, &DMatrix::zeros(2, 2), &s(1.0), &DMatrix::zeros(2, 2), 3).unwrap();
        assert!(sched.covariances.iter().all(|e| e.amax() == 0.0));
        assert!(sched.gains.iter().all(|l| l.amax() == 0.0));
    }

    #[test]
    fn kalman_singular_innovation() {
        let c = DMatrix::from_row_slice(2, 1, &[1.0, 1.0]);
        let v = DMatrix::zeros(2, 2);
        assert!(matches!(
            kalman_step(&s(1.0), &c, &s(1.0), &v, &s(1.0)),
            Err(Error::Solver(_))
        ));
    }

    #[test]
    fn estimator_update_cases() {
        let sys = LinearNetworkSystem::with_canonical_pools(s(1.0), s(1.0), 1.0).unwrap();
        let arch = ArchitectureSet::full(1, 1);
        let x = DVector::from_element(1, 2.0);
        let y = DVector::from_element(1, 4.0);
        let next = estimator_update(&sys, &arch, &s(0.5), &s(0.5), &x, &y).unwrap();
        assert!(close(next[0], 2.0, 1e-15));

        // L = 0 is pure prediction (A − B K) x̂
        let next = estimator_update(&sys, &arch, &s(0.5), &s(0.0), &x, &y).unwrap();
        assert!(close(next[0], 1.0, 1e-15));

        let zero = DVector::zeros(1);
        assert_eq!(estimator_update(&sys, &arch, &s(0.5), &s(0.5), &zero, &zero).unwrap(), zero);
        assert!(estimator_update(&sys, &arch, &s(0.5), &s(0.5), &x, &DVector::zeros(2)).is_err());
    }
}
