//! Seeded random states, effects and ensembles for tests, benches and solver restarts.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::ensemble::StateEnsemble;
use crate::error::Result;
use crate::label::Label;
use crate::linalg::CMatrix;
use crate::measurement::Measurement;
use crate::operator::HermitianOperator;

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre(dim: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(dim, |_, _| gaussian(rng))
}

/// Haar-random unit vector.
pub fn random_ket(dim: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

/// Haar-random unitary (Gram-Schmidt on Gaussian columns).
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> CMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
        for u in &cols {
            let ip: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= ip * ui;
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-8 {
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    CMatrix::from_fn(dim, |i, j| cols[j][i])
}

/// PSD matrix `G G†` with Ginibre `G`, normalized to unit trace.
pub fn random_density(dim: usize, rng: &mut impl Rng) -> HermitianOperator {
    let g = ginibre(dim, rng);
    let a = g.matmul(&g.adjoint());
    let tr = a.trace().re;
    HermitianOperator::from_hermitian_part(&a.scale(1.0 / tr))
}

/// Random density operator of the given rank.
pub fn random_density_of_rank(dim: usize, rank: usize, rng: &mut impl Rng) -> HermitianOperator {
    let mut a = CMatrix::zeros(dim);
    for _ in 0..rank.clamp(1, dim) {
        a += &CMatrix::projector(&random_ket(dim, rng)).scale(rng.gen_range(0.2..1.0));
    }
    let tr = a.trace().re;
    HermitianOperator::from_hermitian_part(&a.scale(1.0 / tr))
}

/// Random POVM: Ginibre squares renormalized by `S^{-1/2}`.
pub fn random_povm(dim: usize, outcomes: &[Label], rng: &mut impl Rng) -> Result<Measurement> {
    Measurement::from_psd_family(
        dim,
        outcomes.iter().map(|x| {
            let g = ginibre(dim, rng);
            (x.clone(), g.matmul(&g.adjoint()))
        }),
    )
}

/// Random effect `0 <= B <= 1`.
pub fn random_effect(dim: usize, rng: &mut impl Rng) -> HermitianOperator {
    let u = random_unitary(dim, rng);
    let diag: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>()).collect();
    HermitianOperator::from_real_diagonal(&diag).conjugate_by(&u)
}

/// Ensemble of `n` random mixed states with a random prior, labelled `"0".."n-1"`.
pub fn random_ensemble(dim: usize, n: usize, rng: &mut impl Rng) -> Result<StateEnsemble> {
    let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = w.iter().sum();
    StateEnsemble::from_pairs(
        dim,
        (0..n).map(|i| {
            let rank = rng.gen_range(1..=dim);
            let rho = random_density_of_rank(dim, rank, rng);
            (Label::atom(i.to_string()), rho.scale(w[i] / total))
        }),
    )
}

/// Ensemble with a built-in spectral symmetry: `d` equal-weight rank-one
/// projectors onto a random orthonormal basis, each mixed with a weaker
/// random state supported off that projector, plus `extra` weak states.
/// Every basis element has top eigenvalue `1/Z` (`Z` the normalization), so
/// the top eigenprojections sum to the identity.
pub fn random_symmetric_ensemble(dim: usize, extra: usize, rng: &mut impl Rng) -> Result<StateEnsemble> {
    let u = random_unitary(dim, rng);
    let mut pairs = Vec::new();
    let strong = 1.0;
    let weak = rng.gen_range(0.0..0.3);
    for k in 0..dim {
        let col = u.column(k);
        let mut a = CMatrix::projector(&col).scale(strong);
        // noise orthogonal to the top vector keeps it the top eigenvector
        let noise = random_density(dim, rng).into_matrix();
        let perp = &CMatrix::identity(dim) - &CMatrix::projector(&col);
        a += &perp.conjugate(&noise).scale(weak);
        pairs.push((Label::atom(format!("b{k}")), a));
    }
    for j in 0..extra {
        pairs.push((
            Label::atom(format!("w{j}")),
            random_density(dim, rng).into_matrix().scale(rng.gen_range(0.0..0.2)),
        ));
    }
    let total: f64 = pairs.iter().map(|(_, a)| a.trace().re).sum();
    StateEnsemble::from_pairs(
        dim,
        pairs
            .into_iter()
            .map(|(x, a)| (x, HermitianOperator::from_hermitian_part(&a.scale(1.0 / total)))),
    )
}
