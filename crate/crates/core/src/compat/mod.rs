//! Incompatibility of measurements: noisy versions, joint measurability,
//! joint measurability degrees and the lower bounds built on them.

mod bounds;
mod joint;
mod symmetrize;

use serde::{Deserialize, Serialize};

pub use bounds::{cloning_bound, cloning_factor, cloning_observable, post_lower_bound_jmd};
pub use joint::{jointly_measurable, jointly_measurable_with, JointMeasurability, JointOptions};
pub use symmetrize::{negate_outcome, qubit_symmetrize};

use crate::error::{Error, Result};
use crate::measurement::Measurement;
use crate::operator::HermitianOperator;

/// Noise added to each measurement in a family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    /// `nu_l(x) = 1/n_l`.
    Uniform,
    /// One distribution per measurement, in outcome order.
    Distribution(Vec<Vec<f64>>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    /// Mixing weight of each measurement.
    pub t: Vec<f64>,
}

impl NoiseModel {
    pub fn uniform(t: Vec<f64>) -> Self {
        Self {
            kind: NoiseKind::Uniform,
            t,
        }
    }

    /// Noisy versions of `ns`.
    pub fn apply(&self, ns: &[Measurement]) -> Result<Vec<Measurement>> {
        if self.t.len() != ns.len() {
            return Err(Error::BadArgs(format!(
                "{} mixing weights for {} measurements",
                self.t.len(),
                ns.len()
            )));
        }
        ns.iter()
            .enumerate()
            .map(|(l, n)| {
                let nu = match &self.kind {
                    NoiseKind::Uniform => vec![1.0 / n.len() as f64; n.len()],
                    NoiseKind::Distribution(nus) => nus
                        .get(l)
                        .cloned()
                        .ok_or_else(|| Error::BadDistribution(format!("no distribution for measurement {l}")))?,
                };
                noisy_version(n, self.t[l], &nu)
            })
            .collect()
    }
}

fn check_distribution(nu: &[f64], len: usize) -> Result<()> {
    if nu.len() != len {
        return Err(Error::BadDistribution(format!(
            "{} weights for {len} outcomes",
            nu.len()
        )));
    }
    if let Some(w) = nu.iter().find(|w| !(**w >= -1e-12)) {
        return Err(Error::BadDistribution(format!("negative weight {w}")));
    }
    let total: f64 = nu.iter().sum();
    if (total - 1.0).abs() > crate::tol::NORMALIZATION {
        return Err(Error::BadDistribution(format!("weights sum to {total}")));
    }
    Ok(())
}

/// `t N(x) + (1 - t) nu(x) 1`.
pub fn noisy_version(n: &Measurement, t: f64, nu: &[f64]) -> Result<Measurement> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::BadArgs(format!("mixing weight {t} outside [0, 1]")));
    }
    check_distribution(nu, n.len())?;
    let id = HermitianOperator::identity(n.dim());
    Measurement::new(
        n.dim(),
        n.iter()
            .zip(nu)
            .map(|((x, op), &w)| (x.clone(), op.scale(t).add(&id.scale((1.0 - t) * w.max(0.0))))),
    )
}

/// Requested noise family for [`jmd`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseSearch {
    Uniform,
    /// Optimize the noise distributions over a simplex grid with this step.
    Distribution { grid_step: f64 },
}

/// Bracket on the largest common mixing weight keeping the noisy versions jointly measurable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JmdEstimate {
    pub lower: f64,
    pub upper: f64,
    pub noise_kind: NoiseSearch,
    /// Noise distributions attaining `lower`.
    pub noise: Vec<Vec<f64>>,
}

impl JmdEstimate {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

/// Default bisection tolerance on `t`.
pub const BISECT_TOL: f64 = 1e-4;

pub fn jmd(ns: &[Measurement], search: NoiseSearch, bisect_tol: f64) -> Result<JmdEstimate> {
    jmd_with(ns, search, bisect_tol, &JointOptions::default())
}

pub fn jmd_with(
    ns: &[Measurement],
    search: NoiseSearch,
    bisect_tol: f64,
    opts: &JointOptions,
) -> Result<JmdEstimate> {
    if !(bisect_tol > 0.0) {
        return Err(Error::BadArgs("bisection tolerance must be positive".into()));
    }
    let uniform: Vec<Vec<f64>> = ns.iter().map(|n| vec![1.0 / n.len() as f64; n.len()]).collect();
    match search {
        NoiseSearch::Uniform => {
            let (lower, upper) = bisect(ns, &uniform, bisect_tol, opts)?;
            Ok(JmdEstimate {
                lower,
                upper,
                noise_kind: search,
                noise: uniform,
            })
        }
        NoiseSearch::Distribution { grid_step } => {
            if !(grid_step > 0.0 && grid_step <= 1.0) {
                return Err(Error::BadArgs(format!("grid step {grid_step} outside (0, 1]")));
            }
            let (noise, lower, upper) = optimize_noise(ns, uniform, grid_step, bisect_tol, opts)?;
            Ok(JmdEstimate {
                lower,
                upper,
                noise_kind: search,
                noise,
            })
        }
    }
}

fn feasible_at(ns: &[Measurement], nus: &[Vec<f64>], t: f64, opts: &JointOptions) -> Result<bool> {
    let model = NoiseModel {
        kind: NoiseKind::Distribution(nus.to_vec()),
        t: vec![t; ns.len()],
    };
    Ok(jointly_measurable_with(&model.apply(ns)?, opts)?.is_feasible())
}

/// Bisection on `t`; inconclusive searches count as infeasible.
fn bisect(ns: &[Measurement], nus: &[Vec<f64>], tol: f64, opts: &JointOptions) -> Result<(f64, f64)> {
    if feasible_at(ns, nus, 1.0, opts)? {
        return Ok((1.0, 1.0));
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if feasible_at(ns, nus, mid, opts)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// Points of the simplex `{w >= 0, sum w = 1}` in `n` coordinates with spacing `1/k`.
fn simplex_grid(n: usize, k: usize) -> Vec<Vec<f64>> {
    fn rec(n: usize, left: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if prefix.len() + 1 == n {
            prefix.push(left);
            out.push(prefix.iter().map(|&c| c as f64 / k as f64).collect());
            prefix.pop();
            return;
        }
        for c in 0..=left {
            prefix.push(c);
            rec(n, left - c, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    rec(n, k, k, &mut Vec::new(), &mut out);
    out
}

const MAX_GRID_POINTS: usize = 300;

/// Grid with the requested spacing, coarsened until it has at most `MAX_GRID_POINTS` points.
fn grid_for(n: usize, step: f64) -> Vec<Vec<f64>> {
    let mut k = (1.0 / step).round().max(1.0) as usize;
    loop {
        let g = simplex_grid(n, k);
        if g.len() <= MAX_GRID_POINTS || k == 1 {
            return g;
        }
        k = (k / 2).max(1);
    }
}

/// Coordinate search over the noise distribution of one measurement at a
/// time, then a single refinement at a fifth of the step around the best point.
fn optimize_noise(
    ns: &[Measurement],
    start: Vec<Vec<f64>>,
    step: f64,
    tol: f64,
    opts: &JointOptions,
) -> Result<(Vec<Vec<f64>>, f64, f64)> {
    let mut best = start;
    let (mut lo, mut hi) = bisect(ns, &best, tol, opts)?;
    for refine in [false, true] {
        let mut improved = true;
        while improved && lo < 1.0 {
            improved = false;
            for l in 0..ns.len() {
                let candidates = if refine {
                    grid_for(ns[l].len(), step / 5.0)
                        .into_iter()
                        .filter(|p| {
                            p.iter().zip(&best[l]).all(|(a, b)| (a - b).abs() <= step + 1e-12)
                        })
                        .collect()
                } else {
                    grid_for(ns[l].len(), step)
                };
                for cand in candidates {
                    let mut trial = best.clone();
                    trial[l] = cand;
                    // only a strictly larger feasible weight can improve the bracket
                    if !feasible_at(ns, &trial, (lo + tol).min(1.0), opts)? {
                        continue;
                    }
                    let (l2, h2) = bisect(ns, &trial, tol, opts)?;
                    if l2 > lo {
                        best = trial;
                        lo = l2;
                        hi = h2;
                        improved = true;
                    }
                }
            }
        }
    }
    Ok((best, lo, hi))
}
