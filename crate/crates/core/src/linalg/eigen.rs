//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Jacobi is slow compared with tridiagonal QR but it is simple, attains
//! absolute eigenvalue accuracy of order `eps * ||A||`, and the matrices in
//! this crate are small (d <= ~64).

use num_complex::Complex64;

use super::CMatrix;

const MAX_SWEEPS: usize = 80;

/// Eigenvalues in ascending order with matching eigenvector columns.
#[derive(Clone, Debug)]
pub struct Eigh {
    pub values: Vec<f64>,
    /// Column `k` is the unit eigenvector for `values[k]`.
    pub vectors: CMatrix,
}

/// Error raised when the Jacobi sweeps fail to annihilate the off-diagonal part.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoEigenConvergence {
    pub residual: f64,
}

pub fn eigh(a: &CMatrix) -> Result<Eigh, NoEigenConvergence> {
    let n = a.dim();
    let mut m = a.hermitian_part();
    let mut v = CMatrix::identity(n);
    let scale = m.frobenius_norm();
    if scale == 0.0 || n == 1 {
        let values = (0..n).map(|i| m[(i, i)].re).collect();
        return Ok(Eigh { values, vectors: v });
    }
    let target = (f64::EPSILON * scale).powi(2);
    let negligible = 1e-300f64.max(f64::EPSILON * 1e-3 * scale);

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off = off_diagonal_sqr(&m);
        if off <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q, negligible);
            }
        }
    }
    if !converged {
        let off = off_diagonal_sqr(&m);
        // Stagnation at rounding level still yields usable spectra.
        if off > (1e-12 * scale).powi(2) {
            return Err(NoEigenConvergence {
                residual: off.sqrt(),
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, |r, c| v[(r, order[c])]);
    Ok(Eigh { values, vectors })
}

fn off_diagonal_sqr(m: &CMatrix) -> f64 {
    let n = m.dim();
    let mut off = 0.0;
    for p in 0..n {
        for q in (p + 1)..n {
            off += m[(p, q)].norm_sqr();
        }
    }
    2.0 * off
}

fn rotate(m: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize, negligible: f64) {
    let n = m.dim();
    let apq = m[(p, q)];
    let abs = apq.norm();
    if abs <= negligible {
        m[(p, q)] = Complex64::new(0.0, 0.0);
        m[(q, p)] = Complex64::new(0.0, 0.0);
        return;
    }
    // U = diag(1, e^{-i phi}) * [[c, s], [-s, c]] on the (p, q) plane.
    let phase = apq / abs;
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let theta = (aqq - app) / (2.0 * abs);
    let t = if theta.is_finite() {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    } else {
        0.0
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let ph_conj = phase.conj();

    // A <- A U
    for k in 0..n {
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        m[(k, p)] = akp * c - akq * ph_conj * s;
        m[(k, q)] = akp * s + akq * ph_conj * c;
    }
    // A <- U^dagger A
    for k in 0..n {
        let apk = m[(p, k)];
        let aqk = m[(q, k)];
        m[(p, k)] = apk * c - aqk * phase * s;
        m[(q, k)] = apk * s + aqk * phase * c;
    }
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);
    m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);
    // V <- V U
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * ph_conj * s;
        v[(k, q)] = vkp * s + vkq * ph_conj * c;
    }
}

impl Eigh {
    /// `sum_k f(lambda_k) |v_k><v_k|`
    pub fn map(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let weights: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        CMatrix::from_fn(n, |i, j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                if weights[k] != 0.0 {
                    acc += self.vectors[(i, k)] * self.vectors[(j, k)].conj() * weights[k];
                }
            }
            acc
        })
    }

    /// Projector onto the span of eigenvectors whose eigenvalue satisfies `keep`.
    pub fn spectral_projector(&self, keep: impl Fn(f64) -> bool) -> (CMatrix, usize) {
        let rank = self.values.iter().filter(|&&x| keep(x)).count();
        (self.map(|x| if keep(x) { 1.0 } else { 0.0 }), rank)
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }
}

/// Lower Cholesky factor of a Hermitian positive definite matrix, or `None`
/// when a non-positive pivot appears.
pub fn cholesky(a: &CMatrix) -> Option<CMatrix> {
    let n = a.dim();
    let mut l = CMatrix::zeros(n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) {
            return None;
        }
        let djj = d.sqrt();
        l[(j, j)] = Complex64::new(djj, 0.0);
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / djj;
        }
    }
    Some(l)
}

/// Inverse of a Hermitian positive definite matrix from its Cholesky factor.
pub fn inverse_from_cholesky(l: &CMatrix) -> CMatrix {
    let n = l.dim();
    // Solve L X = I column by column, then A^{-1} = X^dagger X.
    let mut x = CMatrix::zeros(n);
    for col in 0..n {
        for i in 0..n {
            let mut s = if i == col {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            for k in 0..i {
                s -= l[(i, k)] * x[(k, col)];
            }
            x[(i, col)] = s / l[(i, i)];
        }
    }
    x.adjoint().matmul(&x).hermitian_part()
}

/// `ln det A` for Hermitian positive definite `A` given its Cholesky factor.
pub fn log_det_from_cholesky(l: &CMatrix) -> f64 {
    (0..l.dim()).map(|i| 2.0 * l[(i, i)].re.ln()).sum()
}

/// Solves the real symmetric positive definite system `H x = b` in place.
/// Returns `None` if `H` is not numerically positive definite.
pub fn solve_spd(h: &[f64], n: usize, b: &[f64]) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = h[j * n + j];
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if !(d > 0.0) {
            return None;
        }
        let djj = d.sqrt();
        l[j * n + j] = djj;
        for i in (j + 1)..n {
            let mut s = h[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / djj;
        }
    }
    let mut y = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            y[i] -= l[i * n + k] * y[k];
        }
        y[i] /= l[i * n + i];
    }
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            y[i] -= l[k * n + i] * y[k];
        }
        y[i] /= l[i * n + i];
    }
    Some(y)
}
