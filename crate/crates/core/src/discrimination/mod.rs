//! Standard minimum-error discrimination.

mod certificate;
mod closed_form;
mod numeric;

use serde::{Deserialize, Serialize};

pub use certificate::optimality_certificate;
pub use closed_form::{
    is_optimal_measurement, operators_linearly_independent, solve_closed_form, spectral_profile,
    SpectralProfile,
};
pub use numeric::solve_numeric;

use crate::ensemble::{subensemble, Partition, StateEnsemble};
use crate::error::{Error, Result};
use crate::measurement::Measurement;
use crate::tol;

/// Which path produced a [`SolveResult`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Numeric,
}

/// Whether the optimal measurement is unique.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Uniqueness {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub value: f64,
    pub measurement: Measurement,
    pub method: Method,
    pub unique: Uniqueness,
    pub certificate_gap: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    /// Tolerance for the eigenprojection-sum condition.
    pub tol: f64,
    /// Target certificate gap of the numeric solver.
    pub gap_tol: f64,
    /// Iteration budget of the fixed-point phase.
    pub max_iter: usize,
    /// Seed for restarts.
    pub seed: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: tol::PROJECTOR,
            gap_tol: tol::GAP,
            max_iter: 10_000,
            seed: 0x5eed,
        }
    }
}

fn check_labels(e: &StateEnsemble, m: &Measurement) -> Result<()> {
    if m.dim() != e.dim() {
        return Err(Error::DimensionMismatch {
            expected: e.dim(),
            found: m.dim(),
        });
    }
    if m.len() != e.len() || e.labels().any(|x| m.get(x).is_none()) {
        return Err(Error::LabelMismatch(
            "measurement outcomes differ from ensemble labels".into(),
        ));
    }
    Ok(())
}

pub(crate) fn guess_prob_unclamped(e: &StateEnsemble, m: &Measurement) -> f64 {
    e.iter()
        .map(|(x, op)| op.trace_with(m.get(x).expect("labels checked")))
        .sum()
}

/// `sum_x tr(E(x) M(x))`.
pub fn guess_prob(e: &StateEnsemble, m: &Measurement) -> Result<f64> {
    check_labels(e, m)?;
    let p = guess_prob_unclamped(e, m);
    Ok(if (-1e-12..0.0).contains(&p) {
        0.0
    } else if p > 1.0 && p <= 1.0 + 1e-12 {
        1.0
    } else {
        p
    })
}

/// Closed form when the eigenprojection condition holds, numeric otherwise.
pub fn solve(e: &StateEnsemble, opts: &SolveOptions) -> Result<SolveResult> {
    match solve_closed_form(e, opts.tol) {
        Ok(r) => Ok(r),
        Err(Error::NotApplicable(_)) => solve_numeric(e, opts),
        Err(err) => Err(err),
    }
}

/// `P_guess(E) = max_l q(l) P_guess(E_l)`, valid when every conditioned
/// ensemble satisfies the eigenprojection condition.
pub fn compose_partition_value(e: &StateEnsemble, p: &Partition, tol: f64) -> Result<f64> {
    p.validate_for(e)?;
    let mut best = f64::NEG_INFINITY;
    for l in 0..p.len() {
        let (q, sub) = subensemble(e, p, l)?;
        let r = solve_closed_form(&sub, tol).map_err(|err| match err {
            Error::NotApplicable(why) => Error::NotApplicable(format!("block {l}: {why}")),
            other => other,
        })?;
        best = best.max(q * r.value);
    }
    Ok(best)
}
