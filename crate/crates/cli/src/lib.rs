//! Command-line front end: gallery cases, problem files, the two-bases sweep,
//! joint measurability degrees and lower bounds.

pub mod cases;
pub mod report;
pub mod sweep;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pgdiscrim::compat::{post_lower_bound_jmd, JmdEstimate, NoiseSearch, BISECT_TOL};
use pgdiscrim::io::{load_measurement, load_problem};
use pgdiscrim::{cloning_bound, p_post, Error, SolveOptions};
use serde::Serialize;

use cases::{parse_fraction, parse_weights, resolve, CaseParams};
use report::{build_report, numeric_jmd, render_csv, render_text, ReportOptions};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("unknown case `{0}` (known: {known}; or give a problem file)", known = cases::CASE_NAMES.join(", "))]
    UnknownCase(String),
    #[error("{0}")]
    BadFlag(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Noise {
    Uniform,
    Distribution,
}

#[derive(Debug, Parser)]
#[command(name = "pgdiscrim", version, about = "State discrimination with post-measurement information")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Tolerance for the eigenprojection-sum condition.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Target certificate gap of the numeric solver.
    #[arg(long, global = true, default_value_t = 1e-7)]
    pub gap_tol: f64,
    /// Seed for the numeric solver's restarts.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    pub seed: u64,
    /// Output format (sweep-fig4 defaults to csv, others to json).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct CaseArgs {
    /// Gallery case (two-bases, dihedral, three-axes, mub, appendix-a) or problem file.
    pub target: String,
    /// Angle between the two qubit bases.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Block weights as comma-separated numbers or fractions.
    #[arg(long)]
    pub q: Option<String>,
    /// Weight of the standard basis in the mub case.
    #[arg(long)]
    pub q_phi: Option<String>,
    /// Order parameter of the dihedral case.
    #[arg(long)]
    pub n: Option<usize>,
    /// Dimension of the mub case.
    #[arg(long)]
    pub d: Option<usize>,
}

impl CaseArgs {
    pub fn params(&self) -> Result<CaseParams> {
        Ok(CaseParams {
            theta: self.theta,
            q: self.q.as_deref().map(parse_weights).transpose()?,
            q_phi: self.q_phi.as_deref().map(parse_fraction).transpose()?,
            n: self.n,
            d: self.d,
        })
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a gallery case or a problem file.
    Run {
        #[command(flatten)]
        case: CaseArgs,
        /// Include the optimal product measurement.
        #[arg(long)]
        emit_povm: bool,
        /// Estimate jmd numerically for the jmd bound.
        #[arg(long)]
        with_jmd: bool,
    },
    /// Two-bases value and jmd bound over a range of angles.
    #[command(name = "sweep-fig4")]
    SweepFig4 {
        #[arg(long, default_value_t = sweep::DEFAULT_THETA_MIN)]
        theta_min: f64,
        #[arg(long, default_value_t = sweep::DEFAULT_THETA_MAX)]
        theta_max: f64,
        #[arg(long, default_value_t = sweep::DEFAULT_STEPS)]
        steps: usize,
    },
    /// Joint measurability degree of the optimal block measurements.
    Jmd {
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long, value_enum, default_value_t = Noise::Uniform)]
        noise: Noise,
        /// Simplex grid step for the distribution search.
        #[arg(long, default_value_t = 0.1)]
        grid_step: f64,
        #[arg(long, default_value_t = BISECT_TOL)]
        bisect_tol: f64,
    },
    /// Post-information value with cloning and jmd lower bounds.
    Bounds {
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long, default_value_t = BISECT_TOL)]
        bisect_tol: f64,
    },
    /// Check a problem document (and optionally a measurement document).
    Validate {
        file: PathBuf,
        #[arg(long)]
        povm: Option<PathBuf>,
    },
}

impl Cli {
    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            tol: self.tol,
            gap_tol: self.gap_tol,
            seed: self.seed,
            ..SolveOptions::default()
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Flat key/value rendering of a serializable record.
fn key_values<T: Serialize>(v: &T) -> Vec<(String, String)> {
    fn walk(prefix: &str, v: &serde_json::Value, out: &mut Vec<(String, String)>) {
        match v {
            serde_json::Value::Object(map) => {
                for (k, x) in map {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, x, out);
                }
            }
            serde_json::Value::Number(n) => {
                let text = match n.as_f64() {
                    Some(f) if !n.is_i64() && !n.is_u64() => format!("{f:.9}"),
                    _ => n.to_string(),
                };
                out.push((prefix.to_owned(), text));
            }
            serde_json::Value::String(s) => out.push((prefix.to_owned(), s.clone())),
            serde_json::Value::Null => out.push((prefix.to_owned(), String::new())),
            other => out.push((prefix.to_owned(), other.to_string())),
        }
    }
    let mut out = Vec::new();
    walk("", &serde_json::to_value(v).expect("serializable"), &mut out);
    out
}

fn render_record<T: Serialize>(v: &T, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(json(v)),
        Format::Text => Ok(key_values(v).into_iter().map(|(k, x)| format!("{k}: {x}\n")).collect()),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["key", "value"])?;
            for (k, x) in key_values(v) {
                w.write_record([k, x])?;
            }
            Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("utf-8"))
        }
    }
}

#[derive(Serialize)]
struct JmdReport {
    case: String,
    estimate: JmdEstimate,
    post_lower_bound: f64,
    p_post: f64,
}

#[derive(Serialize)]
struct BoundsReport {
    case: String,
    p_post: f64,
    cloning: Option<f64>,
    jmd: f64,
    jmd_lower_bound: f64,
    reference_jmd: Option<f64>,
    reference_jmd_lower_bound: Option<f64>,
}

#[derive(Serialize)]
struct ValidateReport {
    file: String,
    dim: usize,
    labels: usize,
    blocks: usize,
    block_sizes: Vec<usize>,
    weights: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    povm_outcomes: Option<usize>,
}

/// Runs a parsed command and returns the rendered output.
pub fn execute(cli: &Cli) -> Result<String> {
    let opts = cli.solve_options();
    match &cli.command {
        Command::Run { case, emit_povm, with_jmd } => {
            let target = resolve(&case.target, &case.params()?)?;
            let r = build_report(
                &target,
                &opts,
                &ReportOptions {
                    emit_povm: *emit_povm,
                    compute_jmd: *with_jmd,
                },
            )?;
            match cli.format.unwrap_or(Format::Json) {
                Format::Json => Ok(json(&r)),
                Format::Text => Ok(render_text(&r)),
                Format::Csv => render_csv(&r),
            }
        }
        Command::SweepFig4 { theta_min, theta_max, steps } => {
            let rows = sweep::sweep(*theta_min, *theta_max, *steps, &opts)?;
            match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => sweep::to_csv(&rows),
                Format::Json => Ok(json(&rows)),
                Format::Text => Ok(rows
                    .iter()
                    .map(|r| {
                        format!(
                            "{:.9} {:.9} {:.9} {:.9}\n",
                            r.theta, r.p_post_closed, r.p_post_numeric, r.jmd_lower_bound
                        )
                    })
                    .collect()),
            }
        }
        Command::Jmd { case, noise, grid_step, bisect_tol } => {
            let target = resolve(&case.target, &case.params()?)?;
            let prob = target.problem();
            let search = match noise {
                Noise::Uniform => NoiseSearch::Uniform,
                Noise::Distribution => NoiseSearch::Distribution { grid_step: *grid_step },
            };
            let estimate = numeric_jmd(prob, &opts, search, *bisect_tol)?;
            let r = JmdReport {
                case: target.name().to_owned(),
                post_lower_bound: post_lower_bound_jmd(prob, estimate.lower, &opts)?,
                p_post: p_post(prob, &opts)?.value,
                estimate,
            };
            render_record(&r, cli.format.unwrap_or(Format::Json))
        }
        Command::Bounds { case, bisect_tol } => {
            let target = resolve(&case.target, &case.params()?)?;
            let prob = target.problem();
            let cloning = match cloning_bound(prob, &opts) {
                Ok(v) => Some(v),
                Err(Error::NonUniformPrior { .. }) => None,
                Err(e) => return Err(e.into()),
            };
            let jmd = numeric_jmd(prob, &opts, NoiseSearch::Uniform, *bisect_tol)?.lower;
            let reference_jmd = target.gallery().and_then(|c| c.reference(pgdiscrim::gallery::JMD));
            let r = BoundsReport {
                case: target.name().to_owned(),
                p_post: p_post(prob, &opts)?.value,
                cloning,
                jmd,
                jmd_lower_bound: post_lower_bound_jmd(prob, jmd, &opts)?,
                reference_jmd,
                reference_jmd_lower_bound: reference_jmd
                    .map(|j| post_lower_bound_jmd(prob, j, &opts))
                    .transpose()?,
            };
            render_record(&r, cli.format.unwrap_or(Format::Json))
        }
        Command::Validate { file, povm } => {
            let prob = load_problem(file)?;
            let povm_outcomes = match povm {
                Some(p) => {
                    let m = load_measurement(p)?;
                    if m.dim() != prob.dim() {
                        return Err(Error::DimensionMismatch {
                            expected: prob.dim(),
                            found: m.dim(),
                        }
                        .into());
                    }
                    Some(m.len())
                }
                None => None,
            };
            let r = ValidateReport {
                file: file.display().to_string(),
                dim: prob.dim(),
                labels: prob.ensemble().len(),
                blocks: prob.num_blocks(),
                block_sizes: prob.block_sizes(),
                weights: prob.weights(),
                povm_outcomes,
            };
            render_record(&r, cli.format.unwrap_or(Format::Json))
        }
    }
}

/// Executes `cli` and writes the output to `--out` or `stdout`.
pub fn run(cli: &Cli, stdout: &mut impl Write) -> Result<()> {
    let text = execute(cli)?;
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}
