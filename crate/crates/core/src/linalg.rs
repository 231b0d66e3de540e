//! Small dense linear-algebra helpers shared by the synthesis, cost and DP
//! modules.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Tolerance used when checking that covariance and cost matrices are PSD.
pub const PSD_TOL: f64 = 1e-9;

pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

pub(crate) fn symmetrize_in_place(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

/// Smallest eigenvalue of the symmetric part of `m`.
pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    SymmetricEigen::new(symmetrize(m))
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Largest absolute entry of `m - mᵀ`.
pub fn asymmetry(m: &DMatrix<f64>) -> f64 {
    (m - m.transpose()).amax()
}

pub fn is_psd(m: &DMatrix<f64>, tol: f64) -> bool {
    m.is_square() && asymmetry(m) <= tol.max(1e-12 * m.amax()) && min_eigenvalue(m) >= -tol
}

pub(crate) fn require_psd(m: &DMatrix<f64>, name: &'static str) -> Result<()> {
    if !m.is_square() {
        return Err(Error::dim(name, "square matrix", format!("{}x{}", m.nrows(), m.ncols())));
    }
    let scale = m.amax().max(1.0);
    if asymmetry(m) > 1e-9 * scale || min_eigenvalue(m) < -PSD_TOL * scale {
        return Err(Error::Domain(format!("{name} is not symmetric positive semidefinite")));
    }
    Ok(())
}

pub(crate) fn require_pd(m: &DMatrix<f64>, name: &'static str) -> Result<()> {
    require_psd(m, name)?;
    if m.nrows() > 0 && nalgebra::Cholesky::new(symmetrize(m)).is_none() {
        return Err(Error::Domain(format!("{name} is not positive definite")));
    }
    Ok(())
}

pub(crate) fn require_shape(
    m: &DMatrix<f64>,
    rows: usize,
    cols: usize,
    context: &'static str,
) -> Result<()> {
    if m.shape() != (rows, cols) {
        return Err(Error::dim(
            context,
            format!("{rows}x{cols}"),
            format!("{}x{}", m.nrows(), m.ncols()),
        ));
    }
    Ok(())
}

/// Solves `S X = rhs` for symmetric positive definite `S` by Cholesky, falling
/// back to LU when rounding has pushed `S` off the PD cone.
pub fn spd_solve(s: &DMatrix<f64>, rhs: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if s.nrows() == 0 {
        return Ok(DMatrix::zeros(0, rhs.ncols()));
    }
    if let Some(chol) = nalgebra::Cholesky::new(s.clone()) {
        return Ok(chol.solve(rhs));
    }
    s.clone()
        .lu()
        .solve(rhs)
        .filter(|x| x.iter().all(|v| v.is_finite()))
        .ok_or_else(|| Error::Solver(format!("singular {}x{} system", s.nrows(), s.ncols())))
}

/// Principal submatrix of `m` on the (sorted) index set `idx`.
pub fn principal_submatrix(m: &DMatrix<f64>, idx: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])])
}

/// `tr(XᵀY)`, i.e. the Frobenius inner product.
pub(crate) fn frobenius_dot(x: &DMatrix<f64>, y: &DMatrix<f64>) -> f64 {
    x.iter().zip(y.iter()).map(|(a, b)| a * b).sum()
}

pub(crate) fn quad_form(m: &DMatrix<f64>, x: &DVector<f64>) -> f64 {
    x.dot(&(m * x))
}

/// Dynamics matrix in either general or diagonal form. The diagonal form is
/// what a symmetric `A` becomes in its eigenbasis and makes every product
/// with `A` cost O(n²).
#[derive(Debug, Clone)]
pub(crate) enum StateMap {
    Dense(DMatrix<f64>),
    Diagonal(DVector<f64>),
}

impl StateMap {
    /// `A X`
    pub fn mul(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        match self {
            StateMap::Dense(a) => a * x,
            StateMap::Diagonal(d) => {
                let mut out = x.clone();
                for (i, mut row) in out.row_iter_mut().enumerate() {
                    row *= d[i];
                }
                out
            }
        }
    }

    /// `Aᵀ X`
    pub fn tr_mul(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        match self {
            StateMap::Dense(a) => a.tr_mul(x),
            StateMap::Diagonal(_) => self.mul(x),
        }
    }

    /// `Aᵀ P A`
    pub fn congruence(&self, p: &DMatrix<f64>) -> DMatrix<f64> {
        match self {
            StateMap::Dense(a) => a.tr_mul(&(p * a)),
            StateMap::Diagonal(d) => DMatrix::from_fn(p.nrows(), p.ncols(), |i, j| d[i] * p[(i, j)] * d[j]),
        }
    }

    /// `A E Aᵀ`
    pub fn sandwich(&self, e: &DMatrix<f64>) -> DMatrix<f64> {
        match self {
            StateMap::Dense(a) => a * e * a.transpose(),
            StateMap::Diagonal(_) => self.congruence(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spd_solve_matches_direct_inverse() {
        let s = DMatrix::from_row_slice(2, 2, &[4.0, 1.0, 1.0, 3.0]);
        let b = DMatrix::from_row_slice(2, 1, &[1.0, 2.0]);
        let x = spd_solve(&s, &b).unwrap();
        assert!((&s * &x - &b).amax() < 1e-14);
    }

    #[test]
    fn spd_solve_reports_singular() {
        let s = DMatrix::<f64>::zeros(2, 2);
        let b = DMatrix::from_row_slice(2, 1, &[1.0, 2.0]);
        assert!(matches!(spd_solve(&s, &b), Err(Error::Solver(_))));
    }

    #[test]
    fn diagonal_map_agrees_with_dense() {
        let d = DVector::from_vec(vec![0.5, -2.0, 1.5]);
        let dense = StateMap::Dense(DMatrix::from_diagonal(&d));
        let diag = StateMap::Diagonal(d);
        let p = DMatrix::from_fn(3, 3, |i, j| (i * 3 + j) as f64 - 2.5);
        assert!((dense.congruence(&p) - diag.congruence(&p)).amax() < 1e-14);
        assert!((dense.sandwich(&p) - diag.sandwich(&p)).amax() < 1e-14);
        assert!((dense.mul(&p) - diag.mul(&p)).amax() < 1e-14);
        assert!((dense.tr_mul(&p) - diag.tr_mul(&p)).amax() < 1e-14);
    }

    #[test]
    fn psd_checks() {
        assert!(is_psd(&DMatrix::identity(3, 3), PSD_TOL));
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(!is_psd(&m, PSD_TOL));
        assert!(require_psd(&m, "M").is_err());
        assert!(require_pd(&DMatrix::zeros(2, 2), "R").is_err());
    }
}
