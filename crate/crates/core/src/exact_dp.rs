//! Exact dynamic programming over architecture sequences for
//! state-feedback LQ control.
//!
//! With the actuator set chosen freely from the `K`-subsets of the pool at
//! every step, the optimal cost-to-go is the pointwise minimum of finitely
//! many quadratics `xᵀPx + q`. Each backward step maps every piece through
//! the Riccati update of every architecture, so stage `t` carries
//! `C(M, K)^(T − t)` pieces before pruning.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;
use crate::synthesis;

/// Piece count above which [`dp_backward`] refuses to run.
pub const DP_PIECE_LIMIT: u128 = 1_000_000;
/// Sequence count above which [`brute_force_value`] refuses to run.
pub const BRUTE_FORCE_LIMIT: u128 = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticPiece {
    pub p: DMatrix<f64>,
    pub q: f64,
    /// Index (into [`k_subsets`]) of the architecture applied at this stage;
    /// `None` for the terminal piece.
    pub architecture: Option<usize>,
}

impl QuadraticPiece {
    pub fn value(&self, x: &DVector<f64>) -> f64 {
        x.dot(&(&self.p * x)) + self.q
    }

    /// `other` lies below `self` everywhere: `self.p − other.p ⪰ 0` and
    /// `other.q ≤ self.q`.
    pub fn is_dominated_by(&self, other: &QuadraticPiece) -> bool {
        let scale = self.p.amax().max(other.p.amax()).max(1.0);
        other.q <= self.q && linalg::min_eigenvalue(&(&self.p - &other.p)) >= -1e-12 * scale
    }
}

/// Pointwise minimum of quadratic pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseQuadratic {
    pieces: Vec<QuadraticPiece>,
}

impl PiecewiseQuadratic {
    pub fn new(pieces: Vec<QuadraticPiece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::Argument("piecewise quadratic needs at least one piece".into()));
        }
        Ok(Self { pieces })
    }

    pub fn pieces(&self) -> &[QuadraticPiece] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Drops every piece dominated by another; of identical pieces the
    /// first is kept.
    pub fn pruned(&self) -> Self {
        let n = self.pieces.len();
        let mut removed = vec![false; n];
        for i in 0..n {
            for j in 0..n {
                if i == j || removed[j] {
                    continue;
                }
                let (pi, pj) = (&self.pieces[i], &self.pieces[j]);
                if pi.is_dominated_by(pj) && !(pj.is_dominated_by(pi) && i < j) {
                    removed[i] = true;
                    break;
                }
            }
        }
        Self {
            pieces: self
                .pieces
                .iter()
                .zip(removed)
                .filter(|(_, r)| !r)
                .map(|(p, _)| p.clone())
                .collect(),
        }
    }
}

/// Minimum over pieces at `x` and the architecture index of the minimizing
/// piece (first piece on ties).
pub fn evaluate(pwq: &PiecewiseQuadratic, x: &DVector<f64>) -> (f64, Option<usize>) {
    let mut best = (f64::INFINITY, None);
    let mut first = true;
    for piece in &pwq.pieces {
        let v = piece.value(x);
        if first || v < best.0 {
            best = (v, piece.architecture);
            first = false;
        }
    }
    best
}

/// All `k`-subsets of `0..m` in lexicographic order.
pub fn k_subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > m {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + m - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub fn binomial(m: usize, k: usize) -> u128 {
    if k > m {
        return 0;
    }
    let k = k.min(m - k);
    (0..k).fold(1u128, |acc, i| acc * (m - i) as u128 / (i as u128 + 1))
}

fn saturating_pow(base: u128, exp: usize) -> u128 {
    (0..exp).fold(1u128, |acc, _| acc.saturating_mul(base))
}

/// Problem data shared by the DP and the brute-force oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct LqArchitectureProblem {
    pub a: DMatrix<f64>,
    /// n×M actuator pool.
    pub pool: DMatrix<f64>,
    pub q: DMatrix<f64>,
    /// M×M input cost; each architecture uses its principal block.
    pub r: DMatrix<f64>,
    pub q_terminal: DMatrix<f64>,
    pub w: DMatrix<f64>,
    pub horizon: usize,
    pub cardinality: usize,
}

impl LqArchitectureProblem {
    pub fn validate(&self) -> Result<()> {
        let n = self.a.nrows();
        let m = self.pool.ncols();
        linalg::require_shape(&self.a, n, n, "dynamics A")?;
        linalg::require_shape(&self.pool, n, m, "actuator pool")?;
        linalg::require_shape(&self.q, n, n, "state cost Q")?;
        linalg::require_shape(&self.q_terminal, n, n, "terminal cost Q_T")?;
        linalg::require_shape(&self.w, n, n, "process noise W")?;
        linalg::require_shape(&self.r, m, m, "input cost R")?;
        linalg::require_psd(&self.q, "state cost Q")?;
        linalg::require_psd(&self.q_terminal, "terminal cost Q_T")?;
        linalg::require_psd(&self.w, "process noise W")?;
        linalg::require_pd(&self.r, "input cost R")?;
        if self.cardinality > m {
            return Err(Error::Argument(format!(
                "cardinality {} exceeds pool size {m}",
                self.cardinality
            )));
        }
        Ok(())
    }

    pub fn architectures(&self) -> Vec<Vec<usize>> {
        k_subsets(self.pool.ncols(), self.cardinality)
    }

    fn step_inputs(&self, arch: &[usize]) -> (DMatrix<f64>, DMatrix<f64>) {
        (
            crate::network::input_matrix_unchecked(&self.pool, arch),
            linalg::principal_submatrix(&self.r, arch),
        )
    }

    /// One backward step: `(P⁺, q⁺) ↦ (Riccati(P⁺), q⁺ + tr(P⁺W))`.
    fn backup(&self, b: &DMatrix<f64>, r: &DMatrix<f64>, p_next: &DMatrix<f64>, q_next: f64) -> Result<(DMatrix<f64>, f64)> {
        let (_, p) = synthesis::riccati_step(&self.a, b, &self.q, r, p_next)?;
        Ok((p, q_next + linalg::frobenius_dot(p_next, &self.w)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DpOptions {
    /// Drop dominated pieces after each backward step.
    pub prune: bool,
    pub piece_limit: u128,
}

impl Default for DpOptions {
    fn default() -> Self {
        Self {
            prune: false,
            piece_limit: DP_PIECE_LIMIT,
        }
    }
}

/// Value functions `J_0, …, J_T`.
pub fn dp_backward(problem: &LqArchitectureProblem, options: &DpOptions) -> Result<Vec<PiecewiseQuadratic>> {
    problem.validate()?;
    let archs = problem.architectures();
    let worst = saturating_pow(archs.len() as u128, problem.horizon);
    if worst > options.piece_limit {
        return Err(Error::Size {
            what: "value-function pieces",
            count: worst,
            limit: options.piece_limit,
        });
    }
    let inputs: Vec<_> = archs.iter().map(|a| problem.step_inputs(a)).collect();

    let terminal = PiecewiseQuadratic::new(vec![QuadraticPiece {
        p: linalg::symmetrize(&problem.q_terminal),
        q: 0.0,
        architecture: None,
    }])?;
    let mut stages = vec![terminal];
    for _ in 0..problem.horizon {
        let next = stages.last().expect("terminal stage present");
        let mut pieces = Vec::with_capacity(next.len() * archs.len());
        for piece in next.pieces() {
            for (idx, (b, r)) in inputs.iter().enumerate() {
                let (p, q) = problem.backup(b, r, &piece.p, piece.q)?;
                pieces.push(QuadraticPiece {
                    p,
                    q,
                    architecture: Some(idx),
                });
            }
        }
        let mut stage = PiecewiseQuadratic::new(pieces)?;
        if options.prune {
            stage = stage.pruned();
        }
        stages.push(stage);
    }
    stages.reverse();
    Ok(stages)
}

/// Cost at `x` of applying the architecture sequence `seq` (indices into
/// [`LqArchitectureProblem::architectures`]) with optimal inputs.
pub fn sequence_value(problem: &LqArchitectureProblem, seq: &[usize], x: &DVector<f64>) -> Result<f64> {
    problem.validate()?;
    if seq.len() != problem.horizon {
        return Err(Error::dim("architecture sequence", problem.horizon, seq.len()));
    }
    let archs = problem.architectures();
    let mut p = linalg::symmetrize(&problem.q_terminal);
    let mut q = 0.0;
    for &idx in seq.iter().rev() {
        let arch = archs
            .get(idx)
            .ok_or_else(|| Error::Argument(format!("architecture index {idx} out of range")))?;
        let (b, r) = problem.step_inputs(arch);
        (p, q) = problem.backup(&b, &r, &p, q)?;
    }
    Ok(x.dot(&(&p * x)) + q)
}

/// Minimum of [`sequence_value`] over every architecture sequence.
pub fn brute_force_value(problem: &LqArchitectureProblem, x: &DVector<f64>) -> Result<f64> {
    problem.validate()?;
    let count = problem.architectures().len();
    let total = saturating_pow(count as u128, problem.horizon);
    if total > BRUTE_FORCE_LIMIT {
        return Err(Error::Size {
            what: "architecture sequences",
            count: total,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    if count == 0 {
        return Err(Error::Argument("no architectures to enumerate".into()));
    }
    let mut seq = vec![0usize; problem.horizon];
    let mut best = f64::INFINITY;
    loop {
        best = best.min(sequence_value(problem, &seq, x)?);
        let Some(pos) = seq.iter().rposition(|&s| s + 1 < count) else {
            return Ok(best);
        };
        seq[pos] += 1;
        for s in &mut seq[pos + 1..] {
            *s = 0;
        }
    }
}
