use indexmap::IndexMap;
use num_complex::Complex64;

use super::{map_of, GalleryCase, P_GUESS, P_POST, P_PRIOR};
use crate::discrimination::Uniqueness;
use crate::ensemble::{Partition, StateEnsemble};
use crate::error::{Error, Result};
use crate::label::Label;
use crate::linalg::CMatrix;
use crate::measurement::Measurement;
use crate::operator::HermitianOperator;
use crate::post_info::PostInfoProblem;

fn omega_pow(d: usize, k: i64) -> Complex64 {
    let k = k.rem_euclid(d as i64) as f64;
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k / d as f64)
}

/// `psi_k = d^{-1/2} sum_h omega^{hk} phi_h` with `phi_h` the standard basis.
pub fn psi_basis(d: usize) -> Vec<Vec<Complex64>> {
    let s = 1.0 / (d as f64).sqrt();
    (0..d)
        .map(|k| (0..d).map(|h| omega_pow(d, (h * k) as i64) * s).collect())
        .collect()
}

/// `W(r,s) = sum_z omega^{sz} |phi_{r+z}><phi_z|`.
pub fn weyl(d: usize, r: usize, s: usize) -> CMatrix {
    let mut w = CMatrix::zeros(d);
    for z in 0..d {
        w[((r + z) % d, z)] = omega_pow(d, (s * z) as i64);
    }
    w
}

/// Positive `(alpha, beta)` with `alpha^2 + beta^2 + 2 alpha beta / sqrt(d) = 1` and
/// `alpha / beta = sqrt(d)/(2 q_psi) [q_phi - q_psi + sqrt((q_phi - q_psi)^2 + 4 q_phi q_psi / d)]`.
pub fn solve_alpha_beta(d: usize, q_phi: f64, q_psi: f64) -> (f64, f64) {
    let sd = (d as f64).sqrt();
    let diff = q_phi - q_psi;
    let root = (diff * diff + 4.0 * q_phi * q_psi / d as f64).sqrt();
    let ratio = sd / (2.0 * q_psi) * (diff + root);
    let beta = 1.0 / (ratio * ratio + 1.0 + 2.0 * ratio / sd).sqrt();
    (ratio * beta, beta)
}

/// Left-hand side of the ellipse criterion
/// `t_phi^2 + t_psi^2 + (2(d-2)/d)(1 - t_phi)(1 - t_psi)`.
pub fn mub_ellipse_lhs(d: usize, t_phi: f64, t_psi: f64) -> f64 {
    let df = d as f64;
    t_phi * t_phi + t_psi * t_psi + 2.0 * (df - 2.0) / df * (1.0 - t_phi) * (1.0 - t_psi)
}

/// Slack allowed in the joint measurability criterion below.
pub const MUB_BOUNDARY_TOL: f64 = 1e-10;

/// Joint measurability of the uniformly noisy Fourier pair with weights `t_phi`, `t_psi`.
pub fn mub_compat_boundary_check(d: usize, t_phi: f64, t_psi: f64) -> bool {
    t_phi + t_psi <= 1.0 + MUB_BOUNDARY_TOL || mub_ellipse_lhs(d, t_phi, t_psi) <= 1.0 + MUB_BOUNDARY_TOL
}

/// Standard basis and its Fourier transform, weighted `q_phi` and `1 - q_phi`.
pub fn fourier_mub(d: usize, q_phi: f64) -> Result<GalleryCase> {
    if d < 2 {
        return Err(Error::BadArgs(format!("dimension {d} below 2")));
    }
    if !(q_phi > 0.0 && q_phi < 1.0) {
        return Err(Error::BadArgs(format!("q_phi = {q_phi} outside (0, 1)")));
    }
    let q_psi = 1.0 - q_phi;
    let df = d as f64;
    let psi = psi_basis(d);
    let phi: Vec<Vec<Complex64>> = (0..d)
        .map(|h| (0..d).map(|j| Complex64::new(if j == h { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect();
    let x_phi: Vec<Label> = (0..d).map(|h| Label::atom(format!("{h}phi"))).collect();
    let x_psi: Vec<Label> = (0..d).map(|k| Label::atom(format!("{k}psi"))).collect();

    let mut pairs = Vec::with_capacity(2 * d);
    for (basis, labels, w) in [(&phi, &x_phi, q_phi), (&psi, &x_psi, q_psi)] {
        for (v, x) in basis.iter().zip(labels) {
            pairs.push((x.clone(), HermitianOperator::ket_projector(v).scale(w / df)));
        }
    }
    let ensemble = StateEnsemble::from_pairs(d, pairs)?;
    let problem = PostInfoProblem::new(ensemble, Partition::new(vec![x_phi.clone(), x_psi.clone()])?)?;

    let (alpha, beta) = solve_alpha_beta(d, q_phi, q_psi);
    let sd = df.sqrt();
    let t_phi = alpha * alpha + 2.0 * alpha * beta / sd;
    let t_psi = beta * beta + 2.0 * alpha * beta / sd;
    let diff = q_phi - q_psi;
    let reference = map_of([
        (P_GUESS, (q_phi - 0.5).abs() + 0.5),
        (P_PRIOR, 1.0),
        (P_POST, 0.5 * (1.0 + (diff * diff + 4.0 * q_phi * q_psi / df).sqrt())),
    ]);

    let mut projectors = Vec::with_capacity(d * d);
    for h in 0..d {
        for k in 0..d {
            let phase = omega_pow(d, -((h * k) as i64)) * beta;
            let v: Vec<Complex64> = phi[h]
                .iter()
                .zip(&psi[k])
                .map(|(a, b)| a * alpha + b * phase)
                .collect();
            projectors.push((
                Label::tuple([x_phi[h].clone(), x_psi[k].clone()]),
                HermitianOperator::ket_projector(&v),
            ));
        }
    }
    let c0 = Measurement::new(d, projectors.iter().map(|(t, p)| (t.clone(), p.scale(1.0 / df))))?;
    let mut measurements = IndexMap::new();
    measurements.insert("c0".to_owned(), c0);

    Ok(GalleryCase {
        name: "mub".into(),
        problem,
        reference,
        reference_measurements: measurements,
        uniqueness: if d % 2 == 1 { Uniqueness::Yes } else { Uniqueness::No },
        params: map_of([
            ("d", df),
            ("q_phi", q_phi),
            ("alpha", alpha),
            ("beta", beta),
            ("t_phi", t_phi),
            ("t_psi", t_psi),
        ]),
        projectors,
    })
}
