//! Case selection from command-line arguments.

use std::f64::consts::FRAC_PI_2;
use std::path::Path;

use pgdiscrim::gallery::{appendix_a_case, dihedral, fourier_mub, three_axes, two_bases, GalleryCase};
use pgdiscrim::io::load_problem;
use pgdiscrim::PostInfoProblem;

use crate::{CliError, Result};

pub const CASE_NAMES: [&str; 5] = ["two-bases", "dihedral", "three-axes", "mub", "appendix-a"];

/// Parses `a/b` or a decimal. Both parts of a fraction are read as integers
/// when possible so the only rounding is the final division.
pub fn parse_fraction(s: &str) -> Result<f64> {
    let bad = || CliError::BadFlag(format!("cannot parse `{s}` as a number or fraction"));
    let s = s.trim();
    let value = match s.split_once('/') {
        Some((num, den)) => {
            let (num, den) = (num.trim(), den.trim());
            let (n, d) = match (num.parse::<i64>(), den.parse::<i64>()) {
                (Ok(n), Ok(d)) => (n as f64, d as f64),
                _ => (num.parse::<f64>().map_err(|_| bad())?, den.parse::<f64>().map_err(|_| bad())?),
            };
            if d == 0.0 {
                return Err(bad());
            }
            n / d
        }
        None => s.parse::<f64>().map_err(|_| bad())?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

/// Comma-separated list of fractions.
pub fn parse_weights(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(parse_fraction).collect()
}

/// Parameters shared by the case-taking subcommands.
#[derive(Clone, Debug, Default)]
pub struct CaseParams {
    pub theta: Option<f64>,
    pub q: Option<Vec<f64>>,
    pub q_phi: Option<f64>,
    pub n: Option<usize>,
    pub d: Option<usize>,
}

/// A gallery case or a problem loaded from a file.
pub enum Target {
    Gallery(Box<GalleryCase>),
    File { path: String, problem: PostInfoProblem },
}

impl Target {
    pub fn problem(&self) -> &PostInfoProblem {
        match self {
            Target::Gallery(c) => &c.problem,
            Target::File { problem, .. } => problem,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Target::Gallery(c) => &c.name,
            Target::File { path, .. } => path,
        }
    }

    pub fn gallery(&self) -> Option<&GalleryCase> {
        match self {
            Target::Gallery(c) => Some(c),
            Target::File { .. } => None,
        }
    }
}

fn single_weight(p: &CaseParams, default: f64) -> Result<f64> {
    match p.q.as_deref() {
        None => Ok(default),
        Some([w]) => Ok(*w),
        Some(ws) => Err(CliError::BadFlag(format!("expected one weight, got {}", ws.len()))),
    }
}

pub fn gallery_case(name: &str, p: &CaseParams) -> Result<GalleryCase> {
    let case = match name {
        "two-bases" => two_bases(p.theta.unwrap_or(FRAC_PI_2), single_weight(p, 0.5)?)?,
        "dihedral" => dihedral(p.n.unwrap_or(1), single_weight(p, 0.5)?)?,
        "three-axes" => {
            let q = match p.q.as_deref() {
                None => [1.0 / 3.0; 3],
                Some([a, b, c]) => [*a, *b, *c],
                Some(ws) => return Err(CliError::BadFlag(format!("three-axes needs 3 weights, got {}", ws.len()))),
            };
            three_axes(q)?
        }
        "mub" => fourier_mub(p.d.unwrap_or(2), p.q_phi.unwrap_or(0.5))?,
        "appendix-a" => appendix_a_case()?,
        other => return Err(CliError::UnknownCase(other.to_owned())),
    };
    Ok(case)
}

/// A known case name, otherwise a path to a problem document.
pub fn resolve(target: &str, p: &CaseParams) -> Result<Target> {
    if CASE_NAMES.contains(&target) {
        return Ok(Target::Gallery(Box::new(gallery_case(target, p)?)));
    }
    if Path::new(target).exists() {
        return Ok(Target::File {
            path: target.to_owned(),
            problem: load_problem(target)?,
        });
    }
    Err(CliError::UnknownCase(target.to_owned()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractions() {
        assert_eq!(parse_fraction("1/3").unwrap(), 1.0 / 3.0);
        assert_eq!(parse_fraction(" 0.25 ").unwrap(), 0.25);
        assert_eq!(parse_fraction("1.5/3").unwrap(), 0.5);
        assert!(parse_fraction("1/0").is_err());
        assert!(parse_fraction("x").is_err());
        assert_eq!(parse_weights("1/3,1/3,1/3").unwrap(), vec![1.0 / 3.0; 3]);
    }

    #[test]
    fn unknown_case() {
        assert!(matches!(resolve("no-such-case", &CaseParams::default()), Err(CliError::UnknownCase(_))));
    }

    #[test]
    fn weight_shapes() {
        let p = CaseParams {
            q: Some(vec![0.5, 0.5]),
            ..Default::default()
        };
        assert!(matches!(gallery_case("three-axes", &p), Err(CliError::BadFlag(_))));
        assert!(matches!(gallery_case("dihedral", &p), Err(CliError::BadFlag(_))));
    }
}
