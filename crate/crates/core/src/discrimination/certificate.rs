use crate::ensemble::StateEnsemble;
use crate::error::Result;
use crate::linalg::{min_eigenvalue, CMatrix};
use crate::measurement::Measurement;

use super::{check_labels, guess_prob_unclamped};

/// Duality gap of the uniform-shift dual point built from `m`.
///
/// `Y` is the Hermitian part of `sum_x E(x) M(x)`; it is shifted by `s 1`
/// with the smallest `s >= 0` making every `Y + s 1 - E(x)` PSD. The result
/// `tr(Y + s 1) - P_guess(E; M)` bounds the distance of `M` to optimality.
pub fn optimality_certificate(e: &StateEnsemble, m: &Measurement) -> Result<f64> {
    check_labels(e, m)?;
    let d = e.dim();
    let mut y = CMatrix::zeros(d);
    for (x, op) in e.iter() {
        y += &op.matrix().matmul(m.get(x).unwrap().matrix());
    }
    let y = y.hermitian_part();
    let mut shift = 0.0f64;
    for (_, op) in e.iter() {
        shift = shift.max(-min_eigenvalue(&(&y - op.matrix()))?);
    }
    Ok(y.trace().re + d as f64 * shift - guess_prob_unclamped(e, m))
}
