//! Discrimination when the block of the partition is announced after the measurement.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::discrimination::{solve, SolveOptions, SolveResult};
use crate::ensemble::{subensemble, Partition, StateEnsemble};
use crate::error::{Error, Result};
use crate::label::{cartesian_product, Label};
use crate::linalg::CMatrix;
use crate::measurement::{marginal, Measurement};
use crate::operator::{Effect, HermitianOperator};
use crate::tol;

/// An ensemble together with the partition whose block is revealed.
#[derive(Clone, Debug, PartialEq)]
pub struct PostInfoProblem {
    ensemble: StateEnsemble,
    partition: Partition,
}

impl PostInfoProblem {
    pub fn new(ensemble: StateEnsemble, partition: Partition) -> Result<Self> {
        partition.validate_for(&ensemble)?;
        Ok(Self {
            ensemble,
            partition,
        })
    }

    pub fn ensemble(&self) -> &StateEnsemble {
        &self.ensemble
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn dim(&self) -> usize {
        self.ensemble.dim()
    }

    pub fn num_blocks(&self) -> usize {
        self.partition.len()
    }

    pub fn block(&self, l: usize) -> &[Label] {
        &self.partition.blocks()[l]
    }

    pub fn weights(&self) -> Vec<f64> {
        self.partition.weights(&self.ensemble)
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.partition.block_sizes()
    }

    /// Conditioned ensembles `E_l` with their weights `q(l)`.
    pub fn subensembles(&self) -> Result<Vec<(f64, StateEnsemble)>> {
        (0..self.num_blocks())
            .map(|l| subensemble(&self.ensemble, &self.partition, l))
            .collect()
    }

    /// `n_1 ... n_m sum_l q(l) / n_l`.
    pub fn delta(&self) -> f64 {
        let sizes = self.block_sizes();
        let prod: f64 = sizes.iter().map(|&n| n as f64).product();
        prod * self
            .weights()
            .iter()
            .zip(&sizes)
            .map(|(q, &n)| q / n as f64)
            .sum::<f64>()
    }

    /// Number of tuples in `X_1 x ... x X_m`.
    pub fn product_size(&self) -> u128 {
        self.block_sizes()
            .iter()
            .fold(1u128, |acc, &n| acc.saturating_mul(n as u128))
    }

    /// The product outcome set, refused if larger than `cap`.
    pub fn product_outcomes(&self, cap: usize) -> Result<Vec<Label>> {
        let count = self.product_size();
        if count > cap as u128 {
            return Err(Error::SizeOverflow { count, cap });
        }
        Ok(cartesian_product(self.partition.blocks()))
    }
}

/// The product-labelled ensemble whose standard optimum, times `delta`, is
/// the post-information optimum.
#[derive(Clone, Debug, PartialEq)]
pub struct AuxiliaryEnsemble {
    pub delta: f64,
    pub ensemble: StateEnsemble,
}

/// `F(x_1, ..., x_m) = (1/delta) sum_l E(x_l)` with the default tuple cap.
pub fn auxiliary_ensemble(prob: &PostInfoProblem) -> Result<AuxiliaryEnsemble> {
    auxiliary_ensemble_capped(prob, tol::max_tuples())
}

pub fn auxiliary_ensemble_capped(prob: &PostInfoProblem, cap: usize) -> Result<AuxiliaryEnsemble> {
    let tuples = prob.product_outcomes(cap)?;
    let delta = prob.delta();
    let e = prob.ensemble();
    let elements: IndexMap<Label, HermitianOperator> = tuples
        .into_iter()
        .map(|t| {
            let mut sum = CMatrix::zeros(e.dim());
            for x in t.as_tuple().unwrap() {
                sum += e.get(x).unwrap().matrix();
            }
            (t, HermitianOperator::from_hermitian_part(&sum.scale(1.0 / delta)))
        })
        .collect();
    Ok(AuxiliaryEnsemble {
        delta,
        ensemble: StateEnsemble::from_map_unchecked(e.dim(), elements),
    })
}

/// `sum_l q(l) P_guess(E_l)`: the optimum when the block is announced first.
pub fn p_prior(prob: &PostInfoProblem, opts: &SolveOptions) -> Result<f64> {
    let mut total = 0.0;
    for (q, sub) in prob.subensembles()? {
        total += q * solve(&sub, opts)?.value;
    }
    Ok(total)
}

/// Optimal post-information guessing probability and an optimal product-outcome measurement.
pub fn p_post(prob: &PostInfoProblem, opts: &SolveOptions) -> Result<SolveResult> {
    let aux = auxiliary_ensemble(prob)?;
    match solve(&aux.ensemble, opts) {
        Ok(mut r) => {
            r.value *= aux.delta;
            r.certificate_gap *= aux.delta;
            Ok(r)
        }
        Err(Error::NoConvergence { best, gap }) => Err(Error::NoConvergence {
            best: best * aux.delta,
            gap: gap * aux.delta,
        }),
        Err(e) => Err(e),
    }
}

fn check_product_shape(prob: &PostInfoProblem, c: &Measurement) -> Result<()> {
    if c.dim() != prob.dim() {
        return Err(Error::DimensionMismatch {
            expected: prob.dim(),
            found: c.dim(),
        });
    }
    if c.len() as u128 != prob.product_size() {
        return Err(Error::OutcomeShapeMismatch);
    }
    let m = prob.num_blocks();
    for t in c.outcomes() {
        let parts = t.as_tuple().ok_or(Error::OutcomeShapeMismatch)?;
        if parts.len() != m || parts.iter().enumerate().any(|(l, x)| !prob.block(l).contains(x)) {
            return Err(Error::OutcomeShapeMismatch);
        }
    }
    Ok(())
}

/// `sum_l q(l) P_guess(E_l; pi_l* C)` for a measurement on `X_1 x ... x X_m`.
pub fn p_post_with(prob: &PostInfoProblem, c: &Measurement) -> Result<f64> {
    check_product_shape(prob, c)?;
    let e = prob.ensemble();
    let mut total = 0.0;
    for l in 0..prob.num_blocks() {
        let ml = marginal(c, l)?;
        for x in prob.block(l) {
            total += e.get(x).unwrap().trace_with(ml.get(x).unwrap());
        }
    }
    Ok(total)
}

fn check_relabelings<F: Fn(&Label) -> Label>(
    prob: &PostInfoProblem,
    m: &Measurement,
    fs: &[F],
) -> Result<()> {
    if fs.len() != prob.num_blocks() {
        return Err(Error::BadArgs(format!(
            "{} relabelings for {} blocks",
            fs.len(),
            prob.num_blocks()
        )));
    }
    for (l, f) in fs.iter().enumerate() {
        for y in m.outcomes() {
            let x = f(y);
            if !prob.block(l).contains(&x) {
                return Err(Error::BadArgs(format!(
                    "relabeling {l} sends `{y}` to `{x}` outside its block"
                )));
            }
        }
    }
    Ok(())
}

/// Guessing probability of measuring `m` and answering `f_l(y)` once block
/// `l` is announced: `sum_l sum_y tr(E(f_l(y)) M(y))`.
pub fn strategy_value<F: Fn(&Label) -> Label>(
    prob: &PostInfoProblem,
    m: &Measurement,
    fs: &[F],
) -> Result<f64> {
    check_relabelings(prob, m, fs)?;
    let e = prob.ensemble();
    let mut total = 0.0;
    for f in fs {
        for (y, op) in m.iter() {
            total += e.get(&f(y)).unwrap().trace_with(op);
        }
    }
    Ok(total)
}

/// Product-outcome measurement `C(x_1..x_m) = sum { M(y) : f_l(y) = x_l for all l }`
/// with the same post-information value as the strategy `(m, f_1..f_m)`.
pub fn realize_strategy<F: Fn(&Label) -> Label>(
    prob: &PostInfoProblem,
    m: &Measurement,
    fs: &[F],
) -> Result<Measurement> {
    check_relabelings(prob, m, fs)?;
    let d = prob.dim();
    let mut acc: IndexMap<Label, CMatrix> = prob
        .product_outcomes(tol::max_tuples())?
        .into_iter()
        .map(|t| (t, CMatrix::zeros(d)))
        .collect();
    for (y, op) in m.iter() {
        let t = Label::tuple(fs.iter().map(|f| f(y)));
        *acc.get_mut(&t).expect("images lie in the blocks") += op.matrix();
    }
    let effects = acc
        .into_iter()
        .map(|(t, s)| (t, Effect::unchecked(HermitianOperator::from_hermitian_part(&s))))
        .collect();
    Ok(Measurement::from_effects_unchecked(d, effects))
}

/// Keep the outcome when it lies in the announced block, otherwise answer `defaults[l]`.
pub fn baseline_from_standard(
    prob: &PostInfoProblem,
    m: &Measurement,
    defaults: &[Label],
) -> Result<Measurement> {
    if defaults.len() != prob.num_blocks() {
        return Err(Error::BadArgs(format!(
            "{} defaults for {} blocks",
            defaults.len(),
            prob.num_blocks()
        )));
    }
    for (l, x) in defaults.iter().enumerate() {
        if !prob.block(l).contains(x) {
            return Err(Error::BadDefault {
                block: l,
                label: x.clone(),
            });
        }
    }
    let e = prob.ensemble();
    if m.len() != e.len() || e.labels().any(|x| m.get(x).is_none()) {
        return Err(Error::LabelMismatch(
            "measurement outcomes differ from ensemble labels".into(),
        ));
    }
    let fs: Vec<_> = (0..prob.num_blocks())
        .map(|l| {
            let block = prob.block(l);
            let default = defaults[l].clone();
            move |y: &Label| {
                if block.contains(y) {
                    y.clone()
                } else {
                    default.clone()
                }
            }
        })
        .collect();
    realize_strategy(prob, m, &fs)
}

/// `C(x, ..., x) = M(x)` on `copies`-fold tuples of `m`'s outcomes, zero off the diagonal.
pub fn diagonal_from_standard(m: &Measurement, copies: usize) -> Result<Measurement> {
    if copies == 0 {
        return Err(Error::BadArgs("at least one copy required".into()));
    }
    let alphabet: Vec<Label> = m.outcomes().cloned().collect();
    let tuples = cartesian_product(&vec![alphabet; copies]);
    let count = tuples.len();
    if count > tol::max_tuples() {
        return Err(Error::SizeOverflow {
            count: count as u128,
            cap: tol::max_tuples(),
        });
    }
    let d = m.dim();
    let effects = tuples
        .into_iter()
        .map(|t| {
            let parts = t.as_tuple().unwrap();
            let op = if parts.iter().all(|x| x == &parts[0]) {
                m.get(&parts[0]).unwrap().clone()
            } else {
                HermitianOperator::zeros(d)
            };
            (t, Effect::unchecked(op))
        })
        .collect();
    Ok(Measurement::from_effects_unchecked(d, effects))
}

/// Diagonal measurement for a problem whose blocks share one alphabet by
/// position: the `k`-th outcome of `m` stands for the `k`-th label of every block.
pub fn diagonal_for_problem(prob: &PostInfoProblem, m: &Measurement) -> Result<Measurement> {
    let sizes = prob.block_sizes();
    if sizes.iter().any(|&n| n != m.len()) {
        return Err(Error::AlphabetMismatch(format!(
            "block sizes {sizes:?}, measurement has {} outcomes",
            m.len()
        )));
    }
    let diag = diagonal_from_standard(m, prob.num_blocks())?;
    let alphabet: Vec<Label> = m.outcomes().cloned().collect();
    let index = |x: &Label| alphabet.iter().position(|a| a == x).unwrap();
    diag.relabel(|t| {
        Label::tuple(
            t.as_tuple()
                .unwrap()
                .iter()
                .enumerate()
                .map(|(l, x)| prob.block(l)[index(x)].clone()),
        )
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    CompatibleOptimaExist,
    IncompatibleOptima,
    Inconclusive,
}

/// Gaps at or below this count as zero.
pub const COMPATIBLE_GAP: f64 = 1e-7;
/// Gaps above this count as genuine.
pub const INCOMPATIBLE_GAP: f64 = 1e-6;
/// Certificate gap targeted by [`compatibility_gap`] when the caller asks for less.
pub const GAP_DIAGNOSTIC_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct CompatibilityReport {
    pub gap: f64,
    pub verdict: Verdict,
    pub p_prior: f64,
    pub p_post: f64,
}

/// `p_prior - p_post`: zero exactly when the blocks admit jointly measurable optimal measurements.
pub fn compatibility_gap(prob: &PostInfoProblem, opts: &SolveOptions) -> Result<CompatibilityReport> {
    // Both sides are primal values, each short of its optimum by up to the
    // certificate gap, so solve tighter than the verdict thresholds.
    let tight = SolveOptions {
        gap_tol: opts.gap_tol.min(GAP_DIAGNOSTIC_TOL),
        ..*opts
    };
    let (prior, post) = match (p_prior(prob, &tight), p_post(prob, &tight)) {
        (Ok(prior), Ok(post)) => (prior, post.value),
        _ => (p_prior(prob, opts)?, p_post(prob, opts)?.value),
    };
    let gap = prior - post;
    let verdict = if gap <= COMPATIBLE_GAP {
        Verdict::CompatibleOptimaExist
    } else if gap > INCOMPATIBLE_GAP {
        Verdict::IncompatibleOptima
    } else {
        Verdict::Inconclusive
    };
    Ok(CompatibilityReport {
        gap,
        verdict,
        p_prior: prior,
        p_post: post,
    })
}
