//! Small dense complex linear algebra.

mod eigen;
mod matrix;

pub use eigen::{
    cholesky, eigh, inverse_from_cholesky, log_det_from_cholesky, solve_spd, Eigh,
    NoEigenConvergence,
};
pub use matrix::CMatrix;

use crate::error::{Error, Result};

pub(crate) fn eigh_checked(a: &CMatrix) -> Result<Eigh> {
    eigh(a).map_err(|e| Error::EigenFailure {
        residual: e.residual,
    })
}

/// Nearest positive semidefinite matrix in Frobenius norm (negative eigenvalues clipped).
pub fn psd_part(a: &CMatrix) -> Result<CMatrix> {
    Ok(eigh_checked(a)?.map(|x| x.max(0.0)))
}

/// `A^{-1/2}` on the support of a PSD matrix; eigenvalues at or below
/// `cutoff` are treated as zero.
pub fn pinv_sqrt(a: &CMatrix, cutoff: f64) -> Result<(CMatrix, CMatrix)> {
    let e = eigh_checked(a)?;
    let inv = e.map(|x| if x > cutoff { 1.0 / x.sqrt() } else { 0.0 });
    let (support, _) = e.spectral_projector(|x| x > cutoff);
    Ok((inv, support))
}

/// Trace norm `||A||_1` of a Hermitian matrix.
pub fn trace_norm(a: &CMatrix) -> Result<f64> {
    Ok(eigh_checked(a)?.values.iter().map(|x| x.abs()).sum())
}

pub fn min_eigenvalue(a: &CMatrix) -> Result<f64> {
    Ok(eigh_checked(a)?.min())
}

pub fn max_eigenvalue(a: &CMatrix) -> Result<f64> {
    Ok(eigh_checked(a)?.max())
}

/// Operator norm of a Hermitian matrix.
pub fn spectral_norm(a: &CMatrix) -> Result<f64> {
    let e = eigh_checked(a)?;
    Ok(e.min().abs().max(e.max().abs()))
}
