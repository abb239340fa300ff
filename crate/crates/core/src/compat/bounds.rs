use crate::discrimination::{solve, SolveOptions};
use crate::error::{Error, Result};
use crate::measurement::Measurement;
use crate::operator::HermitianOperator;
use crate::post_info::{p_prior, PostInfoProblem};

/// Shrink factor `(m + d) / (m (1 + d))` of the optimal symmetric `m`-fold cloner in dimension `d`.
pub fn cloning_factor(m: usize, d: usize) -> Result<f64> {
    if m < 1 || d < 2 {
        return Err(Error::BadArgs(format!("cloning needs m >= 1 and d >= 2, got m={m}, d={d}")));
    }
    let (m, d) = (m as f64, d as f64);
    Ok((m + d) / (m * (1.0 + d)))
}

/// Lower bound `c p_prior + (1 - c) m / N` from cloning the state once per block.
/// Requires a uniform prior.
pub fn cloning_bound(prob: &PostInfoProblem, opts: &SolveOptions) -> Result<f64> {
    let e = prob.ensemble();
    let n = e.len() as f64;
    let deviation = e
        .iter()
        .map(|(_, op)| (op.trace() - 1.0 / n).abs())
        .fold(0.0, f64::max);
    if deviation > crate::tol::NORMALIZATION {
        return Err(Error::NonUniformPrior { deviation });
    }
    let m = prob.num_blocks();
    let c = cloning_factor(m, prob.dim())?;
    Ok(c * p_prior(prob, opts)? + (1.0 - c) * m as f64 / n)
}

/// Heisenberg-picture image of `n` under the `m`-fold cloner:
/// `c N(x) + (1 - c) tr N(x) 1/d`.
pub fn cloning_observable(n: &Measurement, m: usize, d: usize) -> Result<Measurement> {
    if d != n.dim() {
        return Err(Error::DimensionMismatch {
            expected: n.dim(),
            found: d,
        });
    }
    let c = cloning_factor(m, d)?;
    let id = HermitianOperator::identity(d);
    Measurement::new(
        d,
        n.iter().map(|(x, op)| {
            (
                x.clone(),
                op.scale(c).add(&id.scale((1.0 - c) * op.trace() / d as f64)),
            )
        }),
    )
}

/// Lower bound on the post-information optimum from a joint measurability degree.
///
/// When every block is perfectly distinguishable and all blocks have the same
/// size `n` this is `1/n + (n-1)/n jmd`; otherwise `jmd sum_l q(l) P_guess(E_l)`.
pub fn post_lower_bound_jmd(prob: &PostInfoProblem, jmd: f64, opts: &SolveOptions) -> Result<f64> {
    let sizes = prob.block_sizes();
    let subs = prob.subensembles()?;
    let mut values = Vec::with_capacity(subs.len());
    for (_, sub) in &subs {
        values.push(solve(sub, opts)?.value);
    }
    let perfect = values.iter().all(|v| (v - 1.0).abs() <= 1e-9);
    let equal = sizes.iter().all(|&n| n == sizes[0]);
    if perfect && equal {
        let n = sizes[0] as f64;
        return Ok(1.0 / n + (n - 1.0) / n * jmd);
    }
    let prior: f64 = subs.iter().zip(&values).map(|((q, _), v)| q * v).sum();
    Ok(jmd * prior)
}
