//! Post-information value of the two-bases family against its jmd lower bound.

use std::f64::consts::FRAC_PI_2;

use pgdiscrim::discrimination::{solve_closed_form, solve_numeric};
use pgdiscrim::gallery::two_bases;
use pgdiscrim::{auxiliary_ensemble, SolveOptions};
use serde::Serialize;

use crate::{CliError, Result};

pub const DEFAULT_THETA_MIN: f64 = FRAC_PI_2 - 1.5;
pub const DEFAULT_THETA_MAX: f64 = FRAC_PI_2 + 1.5;
pub const DEFAULT_STEPS: usize = 61;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub theta: f64,
    pub p_post_closed: f64,
    pub p_post_numeric: f64,
    pub jmd_lower_bound: f64,
}

/// Evenly spaced angles from `theta_min` to `theta_max` inclusive.
pub fn grid(theta_min: f64, theta_max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(0.0 < theta_min && theta_min < theta_max && theta_max < std::f64::consts::PI) {
        return Err(CliError::BadFlag(format!(
            "need 0 < theta_min < theta_max < pi, got {theta_min}, {theta_max}"
        )));
    }
    if steps < 2 {
        return Err(CliError::BadFlag("at least 2 steps required".into()));
    }
    let h = (theta_max - theta_min) / (steps - 1) as f64;
    Ok((0..steps).map(|i| theta_min + i as f64 * h).collect())
}

/// One row: closed-form and numeric optimum of the auxiliary ensemble, and
/// the uniform-noise bound `1/2 (1 + 1/sqrt(1 + |sin theta|))`.
pub fn row(theta: f64, opts: &SolveOptions) -> Result<SweepRow> {
    let case = two_bases(theta, 0.5)?;
    let aux = auxiliary_ensemble(&case.problem)?;
    let closed = solve_closed_form(&aux.ensemble, opts.tol)?;
    let numeric = solve_numeric(&aux.ensemble, opts)?;
    let jmd = 1.0 / (1.0 + theta.sin().abs()).sqrt();
    Ok(SweepRow {
        theta,
        p_post_closed: aux.delta * closed.value,
        p_post_numeric: aux.delta * numeric.value,
        jmd_lower_bound: 0.5 * (1.0 + jmd),
    })
}

pub fn sweep(theta_min: f64, theta_max: f64, steps: usize, opts: &SolveOptions) -> Result<Vec<SweepRow>> {
    grid(theta_min, theta_max, steps)?
        .into_iter()
        .map(|t| row(t, opts))
        .collect()
}

pub fn to_csv(rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["theta", "p_post_closed", "p_post_numeric", "jmd_lower_bound"])?;
    for r in rows {
        w.write_record(
            [r.theta, r.p_post_closed, r.p_post_numeric, r.jmd_lower_bound].map(|v| format!("{v:.9}")),
        )?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("utf-8"))
}
