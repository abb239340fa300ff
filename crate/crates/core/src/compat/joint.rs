//! Joint measurability by alternating projections.

use crate::error::{Error, Result};
use crate::label::{cartesian_product, Label};
use crate::linalg::{psd_part, CMatrix};
use crate::measurement::Measurement;
use crate::tol;

/// Outcome of a joint-measurability search.
#[derive(Clone, Debug)]
pub enum JointMeasurability {
    /// A POVM on the product outcome set whose marginals match the inputs.
    Feasible(Measurement),
    /// The iteration settled at a positive distance from the marginal constraints.
    Infeasible { residual: f64 },
    /// Neither verdict could be reached within the iteration budget.
    Undecided { residual: f64 },
}

impl JointMeasurability {
    pub fn is_feasible(&self) -> bool {
        matches!(self, JointMeasurability::Feasible(_))
    }

    pub fn witness(&self) -> Option<&Measurement> {
        match self {
            JointMeasurability::Feasible(c) => Some(c),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JointOptions {
    /// Largest accepted entrywise marginal residual.
    pub tol: f64,
    pub max_iter: usize,
    /// Iterations over which the residual must drop by at least `stall_decrease`.
    pub stall_window: usize,
    pub stall_decrease: f64,
}

impl Default for JointOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iter: 50_000,
            stall_window: 500,
            stall_decrease: 1e-12,
        }
    }
}

/// The affine set of Hermitian families on `X_1 x ... x X_m` with prescribed marginals.
struct MarginalConstraints<'a> {
    dim: usize,
    targets: Vec<Vec<&'a CMatrix>>,
    sizes: Vec<usize>,
    /// Component indices of every tuple, in product order.
    index: Vec<Vec<usize>>,
}

impl<'a> MarginalConstraints<'a> {
    fn new(ns: &'a [Measurement]) -> Self {
        let sizes: Vec<usize> = ns.iter().map(Measurement::len).collect();
        let ranges: Vec<Vec<Label>> = sizes
            .iter()
            .map(|&n| (0..n).map(|i| Label::atom(i.to_string())).collect())
            .collect();
        let index = cartesian_product(&ranges)
            .into_iter()
            .map(|t| {
                t.as_tuple()
                    .unwrap()
                    .iter()
                    .map(|x| x.as_atom().unwrap().parse().unwrap())
                    .collect()
            })
            .collect();
        Self {
            dim: ns[0].dim(),
            targets: ns
                .iter()
                .map(|n| n.iter().map(|(_, op)| op.matrix()).collect())
                .collect(),
            sizes,
            index,
        }
    }

    fn marginals(&self, c: &[CMatrix]) -> Vec<Vec<CMatrix>> {
        let mut out: Vec<Vec<CMatrix>> = self
            .sizes
            .iter()
            .map(|&n| vec![CMatrix::zeros(self.dim); n])
            .collect();
        for (ct, idx) in c.iter().zip(&self.index) {
            for (l, &i) in idx.iter().enumerate() {
                out[l][i] += ct;
            }
        }
        out
    }

    /// Residuals `a_l(x) - pi_l c(x)`.
    fn residuals(&self, c: &[CMatrix]) -> Vec<Vec<CMatrix>> {
        let mut r = self.marginals(c);
        for (rl, al) in r.iter_mut().zip(&self.targets) {
            for (rx, ax) in rl.iter_mut().zip(al) {
                *rx = *ax - &*rx;
            }
        }
        r
    }

    fn max_residual(&self, c: &[CMatrix]) -> f64 {
        self.residuals(c)
            .iter()
            .flatten()
            .map(CMatrix::max_abs)
            .fold(0.0, f64::max)
    }

    /// Orthogonal projection onto the affine set, valid when every target family sums to the identity.
    fn project(&self, c: &[CMatrix]) -> Vec<CMatrix> {
        let m = self.sizes.len() as f64;
        let p: f64 = self.sizes.iter().map(|&n| n as f64).product();
        let r = self.residuals(c);
        let mut total = CMatrix::zeros(self.dim);
        for ct in c {
            total += ct;
        }
        let missing = &CMatrix::identity(self.dim) - &total;
        let common = missing.scale((1.0 - m) / p);
        let scaled: Vec<Vec<CMatrix>> = r
            .iter()
            .zip(&self.sizes)
            .map(|(rl, &n)| rl.iter().map(|x| x.scale(n as f64 / p)).collect())
            .collect();
        c.iter()
            .zip(&self.index)
            .map(|(ct, idx)| {
                let mut out = ct + &common;
                for (l, &i) in idx.iter().enumerate() {
                    out += &scaled[l][i];
                }
                out
            })
            .collect()
    }
}

/// Searches for a joint measurement of `ns` with the default options.
pub fn jointly_measurable(ns: &[Measurement], tol: f64) -> Result<JointMeasurability> {
    jointly_measurable_with(
        ns,
        &JointOptions {
            tol,
            ..JointOptions::default()
        },
    )
}

/// Alternates between the PSD cone and the affine marginal constraints,
/// starting from the minimum-norm point of the affine set.
pub fn jointly_measurable_with(ns: &[Measurement], opts: &JointOptions) -> Result<JointMeasurability> {
    if ns.is_empty() {
        return Err(Error::BadArgs("no measurements given".into()));
    }
    let dim = ns[0].dim();
    if let Some(n) = ns.iter().find(|n| n.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: n.dim(),
        });
    }
    let count = ns.iter().fold(1u128, |acc, n| acc.saturating_mul(n.len() as u128));
    let cap = tol::max_tuples();
    if count > cap as u128 {
        return Err(Error::SizeOverflow { count, cap });
    }
    let cons = MarginalConstraints::new(ns);
    let zero = vec![CMatrix::zeros(dim); cons.index.len()];
    let mut c = cons.project(&zero);
    let mut history: Vec<f64> = Vec::new();
    let mut residual = f64::INFINITY;
    for it in 0..opts.max_iter {
        let p: Vec<CMatrix> = c.iter().map(psd_part).collect::<Result<_>>()?;
        residual = cons.max_residual(&p);
        if residual <= opts.tol {
            return Ok(JointMeasurability::Feasible(witness(ns, &cons, p)?));
        }
        history.push(residual);
        if it >= opts.stall_window {
            let old = history[it - opts.stall_window];
            if old - residual < opts.stall_decrease {
                return Ok(if residual > 10.0 * opts.tol {
                    JointMeasurability::Infeasible { residual }
                } else {
                    JointMeasurability::Undecided { residual }
                });
            }
        }
        c = cons.project(&p);
    }
    Ok(JointMeasurability::Undecided { residual })
}

fn witness(ns: &[Measurement], cons: &MarginalConstraints, p: Vec<CMatrix>) -> Result<Measurement> {
    let labels: Vec<Vec<Label>> = ns.iter().map(|n| n.outcomes().cloned().collect()).collect();
    let tuples = cons
        .index
        .iter()
        .map(|idx| Label::tuple(idx.iter().enumerate().map(|(l, &i)| labels[l][i].clone())));
    Measurement::from_psd_family(cons.dim, tuples.zip(p))
}
