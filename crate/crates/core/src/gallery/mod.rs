//! Worked examples with closed-form reference values.

mod appendix;
mod mub;
mod qubit_cases;

use indexmap::IndexMap;

pub use appendix::appendix_a_case;
pub use mub::{
    fourier_mub, mub_compat_boundary_check, mub_ellipse_lhs, psi_basis, solve_alpha_beta, weyl,
    MUB_BOUNDARY_TOL,
};
pub use qubit_cases::{
    dihedral, dihedral_alpha_admissible, three_axes, three_axes_alpha_admissible, two_bases,
    two_bases_measurements,
};

use crate::discrimination::Uniqueness;
use crate::error::{Error, Result};
use crate::label::Label;
use crate::measurement::Measurement;
use crate::operator::HermitianOperator;
use crate::post_info::PostInfoProblem;

/// Reference value keys.
pub const P_GUESS: &str = "p_guess";
pub const P_PRIOR: &str = "p_prior";
pub const P_POST: &str = "p_post";
pub const JMD: &str = "jmd";

#[derive(Clone, Debug)]
pub struct GalleryCase {
    pub name: String,
    pub problem: PostInfoProblem,
    /// Closed-form values keyed by [`P_GUESS`], [`P_PRIOR`], [`P_POST`] and [`JMD`].
    pub reference: IndexMap<String, f64>,
    pub reference_measurements: IndexMap<String, Measurement>,
    /// Uniqueness of the optimal post-information measurement.
    pub uniqueness: Uniqueness,
    /// Generating parameters.
    pub params: IndexMap<String, f64>,
    /// Top eigenprojections of the auxiliary ensemble, in product order, when known in closed form.
    pub projectors: Vec<(Label, HermitianOperator)>,
}

impl GalleryCase {
    pub fn reference(&self, key: &str) -> Option<f64> {
        self.reference.get(key).copied()
    }

    pub fn measurement(&self, key: &str) -> Option<&Measurement> {
        self.reference_measurements.get(key)
    }

    pub fn param(&self, key: &str) -> Option<f64> {
        self.params.get(key).copied()
    }

    /// The measurement `C(t) = alpha(t) Pi(t)` over the product outcomes.
    ///
    /// Fails unless every `alpha(t)` lies in `[0, 1]` and the family sums to the identity.
    pub fn family_member(&self, alpha: &[f64]) -> Result<Measurement> {
        if self.projectors.is_empty() {
            return Err(Error::BadArgs(format!("case `{}` has no projector family", self.name)));
        }
        if alpha.len() != self.projectors.len() {
            return Err(Error::BadArgs(format!(
                "{} coefficients for {} outcomes",
                alpha.len(),
                self.projectors.len()
            )));
        }
        if let Some(a) = alpha.iter().find(|a| !(-1e-12..=1.0 + 1e-12).contains(*a)) {
            return Err(Error::BadArgs(format!("coefficient {a} outside [0, 1]")));
        }
        Measurement::new(
            self.problem.dim(),
            self.projectors
                .iter()
                .zip(alpha)
                .map(|((t, p), &a)| (t.clone(), p.scale(a))),
        )
    }
}

/// Best `t` in `[0, 1]` with `c ~ t a + (1 - t) b`, and the largest entrywise residual.
pub fn convex_decomposition(c: &Measurement, a: &Measurement, b: &Measurement) -> Result<(f64, f64)> {
    let mut num = 0.0;
    let mut den = 0.0;
    let mut parts = Vec::with_capacity(c.len());
    for (x, cx) in c.iter() {
        let (ax, bx) = match (a.get(x), b.get(x)) {
            (Some(ax), Some(bx)) => (ax, bx),
            _ => return Err(Error::LabelMismatch(format!("outcome `{x}` missing"))),
        };
        let diff = ax.sub(bx);
        let target = cx.sub(bx);
        num += diff.trace_with(&target);
        den += diff.trace_with(&diff);
        parts.push((cx, ax, bx));
    }
    if a.len() != c.len() || b.len() != c.len() {
        return Err(Error::LabelMismatch("outcome sets differ".into()));
    }
    let t = if den > 0.0 { (num / den).clamp(0.0, 1.0) } else { 0.5 };
    let residual = parts
        .iter()
        .map(|(cx, ax, bx)| cx.max_abs_diff(&ax.scale(t).add(&bx.scale(1.0 - t))))
        .fold(0.0, f64::max);
    Ok((t, residual))
}

fn map_of<const N: usize>(pairs: [(&str, f64); N]) -> IndexMap<String, f64> {
    pairs.into_iter().map(|(k, v)| (k.to_owned(), v)).collect()
}

#[cfg(test)]
mod tests;
