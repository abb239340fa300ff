//! Reports for single problems and their text/CSV/JSON renderings.

use indexmap::IndexMap;
use pgdiscrim::compat::{jmd, post_lower_bound_jmd, JmdEstimate, NoiseSearch, BISECT_TOL};
use pgdiscrim::discrimination::{Method, Uniqueness};
use pgdiscrim::io::MeasurementDocument;
use pgdiscrim::{
    cloning_bound, compatibility_gap, p_post, solve, Error, Measurement, PostInfoProblem, SolveOptions,
    Verdict,
};
use serde::Serialize;

use crate::cases::Target;
use crate::Result;

#[derive(Clone, Debug, Serialize)]
pub struct Bounds {
    /// Cloning lower bound; absent when the prior is not uniform.
    pub cloning: Option<f64>,
    /// Joint measurability degree used for `jmd_lower_bound`.
    pub jmd: Option<f64>,
    pub jmd_lower_bound: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub case: String,
    pub params: IndexMap<String, f64>,
    pub dim: usize,
    pub labels: usize,
    pub blocks: usize,
    pub p_guess: f64,
    pub p_prior: f64,
    pub p_post: f64,
    pub gap: f64,
    pub verdict: Verdict,
    pub method: Method,
    pub unique: Uniqueness,
    pub certificate_gap: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<IndexMap<String, f64>>,
    pub bounds: Bounds,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measurement: Option<MeasurementDocument>,
}

/// Optimal measurement of each block, in block order.
pub fn block_optima(prob: &PostInfoProblem, opts: &SolveOptions) -> Result<Vec<Measurement>> {
    Ok(prob
        .subensembles()?
        .iter()
        .map(|(_, sub)| solve(sub, opts).map(|r| r.measurement))
        .collect::<pgdiscrim::Result<_>>()?)
}

/// Uniform-noise jmd of the block optima.
pub fn numeric_jmd(prob: &PostInfoProblem, opts: &SolveOptions, search: NoiseSearch, bisect_tol: f64) -> Result<JmdEstimate> {
    Ok(jmd(&block_optima(prob, opts)?, search, bisect_tol)?)
}

pub struct ReportOptions {
    pub emit_povm: bool,
    /// Estimate jmd numerically instead of relying on a reference value.
    pub compute_jmd: bool,
}

pub fn build_report(target: &Target, opts: &SolveOptions, ro: &ReportOptions) -> Result<Report> {
    let prob = target.problem();
    let e = prob.ensemble();
    let p_guess = solve(e, opts)?.value;
    let post = p_post(prob, opts)?;
    let compat = compatibility_gap(prob, opts)?;
    let cloning = match cloning_bound(prob, opts) {
        Ok(v) => Some(v),
        Err(Error::NonUniformPrior { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let jmd_value = if ro.compute_jmd {
        Some(numeric_jmd(prob, opts, NoiseSearch::Uniform, BISECT_TOL)?.lower)
    } else {
        target.gallery().and_then(|c| c.reference(pgdiscrim::gallery::JMD))
    };
    let jmd_lower_bound = jmd_value
        .map(|j| post_lower_bound_jmd(prob, j, opts))
        .transpose()?;
    let gallery = target.gallery();
    Ok(Report {
        case: target.name().to_owned(),
        params: gallery.map(|c| c.params.clone()).unwrap_or_default(),
        dim: prob.dim(),
        labels: e.len(),
        blocks: prob.num_blocks(),
        p_guess,
        p_prior: compat.p_prior,
        p_post: post.value,
        gap: compat.gap,
        verdict: compat.verdict,
        method: post.method,
        unique: post.unique,
        certificate_gap: post.certificate_gap,
        reference: gallery.map(|c| c.reference.clone()),
        bounds: Bounds {
            cloning,
            jmd: jmd_value,
            jmd_lower_bound,
        },
        measurement: ro.emit_povm.then(|| MeasurementDocument::from_measurement(&post.measurement)),
    })
}

fn flat_rows(r: &Report) -> Vec<(String, String)> {
    let opt = |v: Option<f64>| v.map(|x| format!("{x:.9}")).unwrap_or_default();
    let mut rows = vec![
        ("case".to_owned(), r.case.clone()),
        ("dim".to_owned(), r.dim.to_string()),
        ("labels".to_owned(), r.labels.to_string()),
        ("blocks".to_owned(), r.blocks.to_string()),
    ];
    for (k, v) in &r.params {
        rows.push((format!("param.{k}"), format!("{v}")));
    }
    for (k, v) in [
        ("p_guess", r.p_guess),
        ("p_prior", r.p_prior),
        ("p_post", r.p_post),
        ("gap", r.gap),
    ] {
        rows.push((k.to_owned(), format!("{v:.9}")));
    }
    rows.push(("verdict".to_owned(), enum_name(&r.verdict)));
    rows.push(("method".to_owned(), enum_name(&r.method)));
    rows.push(("unique".to_owned(), enum_name(&r.unique)));
    rows.push(("certificate_gap".to_owned(), format!("{:.3e}", r.certificate_gap)));
    if let Some(reference) = &r.reference {
        for (k, v) in reference {
            rows.push((format!("reference.{k}"), format!("{v:.9}")));
        }
    }
    rows.push(("bound.cloning".to_owned(), opt(r.bounds.cloning)));
    rows.push(("bound.jmd".to_owned(), opt(r.bounds.jmd)));
    rows.push(("bound.jmd_lower_bound".to_owned(), opt(r.bounds.jmd_lower_bound)));
    rows
}

fn enum_name<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|j| j.as_str().map(str::to_owned))
        .unwrap_or_default()
}

pub fn render_text(r: &Report) -> String {
    let rows = flat_rows(r);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out: String = rows
        .iter()
        .map(|(k, v)| format!("{k:<width$}  {v}\n"))
        .collect();
    if let Some(m) = &r.measurement {
        out.push_str(&serde_json::to_string_pretty(m).expect("serializable"));
        out.push('\n');
    }
    out
}

pub fn render_csv(r: &Report) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["key", "value"])?;
    for (k, v) in flat_rows(r) {
        w.write_record([k, v])?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("utf-8"))
}
