//! Qubit helpers in the Bloch representation.

use num_complex::Complex64;

use crate::linalg::CMatrix;
use crate::operator::HermitianOperator;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Pauli matrix `sigma_k` for `k` in `1..=3`.
pub fn pauli(k: usize) -> CMatrix {
    let data = match k {
        1 => vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        2 => vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)],
        3 => vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
        _ => panic!("pauli index must be 1, 2 or 3"),
    };
    CMatrix::from_row_major(2, data).unwrap()
}

/// `v . sigma`
pub fn sigma_dot(v: [f64; 3]) -> CMatrix {
    CMatrix::from_row_major(
        2,
        vec![
            c(v[2], 0.0),
            c(v[0], -v[1]),
            c(v[0], v[1]),
            c(-v[2], 0.0),
        ],
    )
    .unwrap()
}

/// `(w/2)(1 + v . sigma)`; with `w = 1` and `|v| <= 1` this is the state with Bloch vector `v`.
pub fn bloch_operator(w: f64, v: [f64; 3]) -> HermitianOperator {
    let m = &CMatrix::identity(2) + &sigma_dot(v);
    HermitianOperator::from_hermitian_part(&m.scale(0.5 * w))
}

/// Bloch vector `(tr(A sigma_1), tr(A sigma_2), tr(A sigma_3))` and trace of a qubit operator.
pub fn bloch_components(a: &HermitianOperator) -> ([f64; 3], f64) {
    let m = a.matrix();
    let v = [1, 2, 3].map(|k| m.trace_product(&pauli(k)).re);
    (v, a.trace())
}

pub fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

pub fn scale3(v: [f64; 3], s: f64) -> [f64; 3] {
    [v[0] * s, v[1] * s, v[2] * s]
}

pub fn add3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}
