use indexmap::IndexMap;

use crate::ensemble::StateEnsemble;
use crate::error::{Error, Result};
use crate::label::Label;
use crate::linalg::{eigh_checked, spectral_norm, CMatrix};
use crate::measurement::Measurement;
use crate::operator::{largest_eigenpair, EigenPair, Effect, HermitianOperator};
use crate::tol;

use super::{check_labels, optimality_certificate, Method, SolveResult, Uniqueness};

/// Top eigenvalues and eigenprojections of every ensemble element.
#[derive(Clone, Debug)]
pub struct SpectralProfile {
    pub pairs: IndexMap<Label, EigenPair>,
    /// `lambda_E`, the largest top eigenvalue over all labels.
    pub lambda_max: f64,
    /// Labels whose top eigenvalue equals `lambda_E` within [`tol::DEGENERACY`].
    pub top_labels: Vec<Label>,
    /// Present iff the top eigenprojections over `top_labels` sum to `mu 1`.
    pub mu: Option<f64>,
}

impl SpectralProfile {
    pub fn projector(&self, x: &Label) -> Option<&HermitianOperator> {
        self.pairs.get(x).map(|p| &p.projector)
    }

    pub fn is_top(&self, x: &Label) -> bool {
        self.top_labels.contains(x)
    }
}

pub fn spectral_profile(e: &StateEnsemble, tol: f64) -> Result<SpectralProfile> {
    let mut pairs = IndexMap::with_capacity(e.len());
    for (x, op) in e.iter() {
        pairs.insert(x.clone(), largest_eigenpair(op, tol::DEGENERACY)?);
    }
    let lambda_max = pairs
        .values()
        .map(|p: &EigenPair| p.value)
        .fold(f64::NEG_INFINITY, f64::max);
    let top_labels: Vec<Label> = pairs
        .iter()
        .filter(|(_, p)| p.value >= lambda_max - tol::DEGENERACY)
        .map(|(x, _)| x.clone())
        .collect();
    let d = e.dim();
    let mut sum = CMatrix::zeros(d);
    let mut ranks = 0usize;
    for x in &top_labels {
        let p = &pairs[x];
        sum += p.projector.matrix();
        ranks += p.rank;
    }
    let mu = ranks as f64 / d as f64;
    let holds = sum.max_abs_diff(&CMatrix::identity(d).scale(mu)) <= tol;
    Ok(SpectralProfile {
        pairs,
        lambda_max,
        top_labels,
        mu: holds.then_some(mu),
    })
}

/// Linear independence of Hermitian operators, via the smallest eigenvalue of
/// their Hilbert-Schmidt Gram matrix.
pub fn operators_linearly_independent(ops: &[&HermitianOperator], tol: f64) -> Result<bool> {
    let n = ops.len();
    if n == 0 {
        return Ok(true);
    }
    if n > ops[0].dim().pow(2) {
        return Ok(false);
    }
    let gram = CMatrix::from_fn(n, |i, j| ops[i].trace_with(ops[j]).into());
    let e = eigh_checked(&gram)?;
    Ok(e.min() > tol * e.max().max(1.0))
}

fn uniqueness(profile: &SpectralProfile) -> Result<Uniqueness> {
    let ops: Vec<&HermitianOperator> = profile
        .top_labels
        .iter()
        .map(|x| &profile.pairs[x].projector)
        .collect();
    if profile.top_labels.iter().any(|x| profile.pairs[x].rank > 1) {
        return Ok(Uniqueness::Unknown);
    }
    Ok(if operators_linearly_independent(&ops, 1e-9)? {
        Uniqueness::Yes
    } else {
        Uniqueness::No
    })
}

/// Optimum `d lambda_E` with measurement `Pi(x)/mu` on the top labels, when
/// the top eigenprojections sum to a multiple of the identity.
pub fn solve_closed_form(e: &StateEnsemble, tol: f64) -> Result<SolveResult> {
    let profile = spectral_profile(e, tol)?;
    let mu = profile.mu.ok_or_else(|| {
        Error::NotApplicable(
            "top eigenprojections do not sum to a multiple of the identity".into(),
        )
    })?;
    let d = e.dim();
    let effects = e
        .labels()
        .map(|x| {
            let op = if profile.is_top(x) {
                profile.pairs[x].projector.scale(1.0 / mu)
            } else {
                HermitianOperator::zeros(d)
            };
            (x.clone(), Effect::unchecked(op))
        })
        .collect();
    let measurement = Measurement::from_effects_unchecked(d, effects);
    let certificate_gap = optimality_certificate(e, &measurement)?;
    Ok(SolveResult {
        value: d as f64 * profile.lambda_max,
        measurement,
        method: Method::ClosedForm,
        unique: uniqueness(&profile)?,
        certificate_gap,
    })
}

/// Tests the characterization of all optimal measurements available under the
/// eigenprojection condition: `M(x) <= Pi(x)` on the top labels, `M(x) = 0`
/// elsewhere.
pub fn is_optimal_measurement(e: &StateEnsemble, m: &Measurement, tol: f64) -> Result<bool> {
    check_labels(e, m)?;
    let profile = spectral_profile(e, tol)?;
    if profile.mu.is_none() {
        return Err(Error::ConditionUnavailable);
    }
    for (x, op) in m.iter() {
        let ok = if profile.is_top(x) {
            op.is_below(&profile.pairs[x].projector, tol)?
        } else {
            spectral_norm(op.matrix())? <= tol
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}
