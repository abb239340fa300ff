use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::label::Label;
use crate::linalg::{eigh_checked, CMatrix};
use crate::tol;

/// A `d x d` Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator(CMatrix);

impl HermitianOperator {
    /// Validates Hermiticity within [`tol::HERMITIAN`] and symmetrizes.
    pub fn new(m: CMatrix) -> Result<Self> {
        let scale = m.max_abs().max(1.0);
        let deviation = m.hermiticity_defect();
        if deviation > tol::HERMITIAN * scale {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self(m.hermitian_part()))
    }

    /// Takes the Hermitian part of `m` without checking.
    pub fn from_hermitian_part(m: &CMatrix) -> Self {
        Self(m.hermitian_part())
    }

    pub fn zeros(dim: usize) -> Self {
        Self(CMatrix::zeros(dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(CMatrix::identity(dim))
    }

    pub fn from_real_diagonal(values: &[f64]) -> Self {
        Self(CMatrix::from_real_diagonal(values))
    }

    /// Rank-one projector `|v><v| / <v|v>`.
    pub fn ket_projector(v: &[Complex64]) -> Self {
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        Self(CMatrix::projector(v).scale(1.0 / norm))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// Real part of `tr(A B)`; exact for Hermitian pairs.
    pub fn trace_with(&self, other: &HermitianOperator) -> f64 {
        self.0.trace_product(&other.0).re
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale(s))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    /// `U A U†`
    pub fn conjugate_by(&self, u: &CMatrix) -> Self {
        Self::from_hermitian_part(&u.conjugate(&self.0))
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(eigh_checked(&self.0)?.values)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(eigh_checked(&self.0)?.min())
    }

    pub fn max_eigenvalue(&self) -> Result<f64> {
        Ok(eigh_checked(&self.0)?.max())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0.max_abs_diff(&other.0)
    }

    /// `A <= B + tol`, i.e. the smallest eigenvalue of `B - A` is at least `-tol`.
    pub fn is_below(&self, other: &Self, tol: f64) -> Result<bool> {
        Ok(other.sub(self).min_eigenvalue()? >= -tol)
    }
}

impl std::ops::Index<(usize, usize)> for HermitianOperator {
    type Output = Complex64;
    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.0[idx]
    }
}

impl AsRef<CMatrix> for HermitianOperator {
    fn as_ref(&self) -> &CMatrix {
        &self.0
    }
}

/// A POVM element, `0 <= E <= 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Effect(HermitianOperator);

impl Effect {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        Self::labelled(op, &Label::atom("?"))
    }

    pub(crate) fn labelled(op: HermitianOperator, label: &Label) -> Result<Self> {
        let ev = op.eigenvalues()?;
        let (min, max) = (ev[0], ev[ev.len() - 1]);
        if min < -tol::PSD || max > 1.0 + tol::PSD {
            return Err(Error::NotEffect {
                label: label.clone(),
                min,
                max,
            });
        }
        Ok(Self(op))
    }

    pub(crate) fn unchecked(op: HermitianOperator) -> Self {
        Self(op)
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.0
    }

    pub fn into_op(self) -> HermitianOperator {
        self.0
    }
}

/// A quantum state: PSD with unit trace.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator(HermitianOperator);

impl DensityOperator {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let tr = op.trace();
        if (tr - 1.0).abs() > tol::PSD {
            return Err(Error::NotState {
                reason: format!("trace {tr}"),
            });
        }
        let min = op.min_eigenvalue()?;
        if min < -tol::PSD {
            return Err(Error::NotState {
                reason: format!("smallest eigenvalue {min:.3e}"),
            });
        }
        Ok(Self(op))
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.0
    }

    pub fn into_op(self) -> HermitianOperator {
        self.0
    }
}

/// Largest eigenvalue together with the projector onto its (possibly degenerate) eigenspace.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub projector: HermitianOperator,
    pub rank: usize,
}

/// Top eigenvalue of `h` and the projector onto all eigenvectors whose
/// eigenvalue is within `degeneracy_tol` of it.
pub fn largest_eigenpair(h: &HermitianOperator, degeneracy_tol: f64) -> Result<EigenPair> {
    let e = eigh_checked(h.matrix())?;
    let value = e.max();
    let (projector, rank) = e.spectral_projector(|x| x >= value - degeneracy_tol);
    Ok(EigenPair {
        value,
        projector: HermitianOperator::from_hermitian_part(&projector),
        rank,
    })
}
