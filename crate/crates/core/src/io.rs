//! JSON documents for problems and measurements.
//!
//! Complex entries are `[re, im]` pairs (a bare number is read as a real
//! entry); matrices are arrays of rows.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ensemble::{Partition, StateEnsemble};
use crate::error::{Error, Result};
use crate::label::Label;
use crate::linalg::CMatrix;
use crate::measurement::Measurement;
use crate::operator::{DensityOperator, HermitianOperator};
use crate::post_info::PostInfoProblem;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Complex([f64; 2]),
    Real(f64),
}

impl From<Entry> for Complex64 {
    fn from(e: Entry) -> Self {
        match e {
            Entry::Complex([re, im]) => Complex64::new(re, im),
            Entry::Real(re) => Complex64::new(re, 0.0),
        }
    }
}

pub type MatrixDoc = Vec<Vec<Entry>>;

/// Serialized problem. Either `operators` (the `p(x) rho_x` themselves) or
/// `states` with `probabilities` must be given.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub dim: usize,
    pub labels: Vec<Label>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operators: Option<Vec<MatrixDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub states: Option<Vec<MatrixDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probabilities: Option<Vec<f64>>,
    pub partition: Vec<Vec<Label>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementDocument {
    pub dim: usize,
    pub outcomes: Vec<Label>,
    pub effects: Vec<MatrixDoc>,
}

fn located(path: &str, location: String, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_owned(),
        location,
        message: message.into(),
    }
}

pub fn matrix_to_doc(m: &CMatrix) -> MatrixDoc {
    (0..m.dim())
        .map(|i| m.row(i).iter().map(|z| Entry::Complex([z.re, z.im])).collect())
        .collect()
}

fn matrix_from_doc(doc: &MatrixDoc, dim: usize, path: &str, at: &str) -> Result<CMatrix> {
    if doc.len() != dim {
        return Err(located(path, at.to_owned(), format!("expected {dim} rows, found {}", doc.len())));
    }
    let mut data = Vec::with_capacity(dim * dim);
    for (i, row) in doc.iter().enumerate() {
        if row.len() != dim {
            return Err(located(
                path,
                format!("{at}[{i}]"),
                format!("expected {dim} entries, found {}", row.len()),
            ));
        }
        for (j, e) in row.iter().enumerate() {
            let z = Complex64::from(*e);
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(located(path, format!("{at}[{i}][{j}]"), "non-finite entry"));
            }
            data.push(z);
        }
    }
    Ok(CMatrix::from_row_major(dim, data).expect("checked shape"))
}

impl ProblemDocument {
    pub fn from_problem(prob: &PostInfoProblem) -> Self {
        let e = prob.ensemble();
        Self {
            dim: e.dim(),
            labels: e.labels().cloned().collect(),
            operators: Some(e.iter().map(|(_, op)| matrix_to_doc(op.matrix())).collect()),
            states: None,
            probabilities: None,
            partition: prob.partition().blocks().to_vec(),
        }
    }

    /// Validated problem; `path` only appears in error messages.
    pub fn to_problem(&self, path: &str) -> Result<PostInfoProblem> {
        let n = self.labels.len();
        let count_check = |what: &str, len: usize| {
            if len == n {
                Ok(())
            } else {
                Err(located(path, what.to_owned(), format!("{len} entries for {n} labels")))
            }
        };
        let ensemble = match (&self.operators, &self.states, &self.probabilities) {
            (Some(ops), None, None) => {
                count_check("operators", ops.len())?;
                let elements = ops
                    .iter()
                    .enumerate()
                    .map(|(i, m)| {
                        let at = format!("operators[{i}]");
                        HermitianOperator::new(matrix_from_doc(m, self.dim, path, &at)?)
                    })
                    .collect::<Result<Vec<_>>>()?;
                StateEnsemble::new(self.dim, self.labels.clone(), elements)?
            }
            (None, Some(states), Some(probs)) => {
                count_check("states", states.len())?;
                count_check("probabilities", probs.len())?;
                let states = states
                    .iter()
                    .enumerate()
                    .map(|(i, m)| {
                        let at = format!("states[{i}]");
                        DensityOperator::new(HermitianOperator::new(matrix_from_doc(m, self.dim, path, &at)?)?)
                    })
                    .collect::<Result<Vec<_>>>()?;
                StateEnsemble::from_states(self.dim, self.labels.clone(), states, probs.clone())?
            }
            _ => {
                return Err(located(
                    path,
                    String::new(),
                    "give either `operators` or both `states` and `probabilities`",
                ))
            }
        };
        PostInfoProblem::new(ensemble, Partition::new(self.partition.clone())?)
    }
}

impl MeasurementDocument {
    pub fn from_measurement(m: &Measurement) -> Self {
        Self {
            dim: m.dim(),
            outcomes: m.outcomes().cloned().collect(),
            effects: m.iter().map(|(_, op)| matrix_to_doc(op.matrix())).collect(),
        }
    }

    pub fn to_measurement(&self, path: &str) -> Result<Measurement> {
        if self.effects.len() != self.outcomes.len() {
            return Err(located(
                path,
                "effects".into(),
                format!("{} effects for {} outcomes", self.effects.len(), self.outcomes.len()),
            ));
        }
        let pairs = self
            .outcomes
            .iter()
            .zip(&self.effects)
            .enumerate()
            .map(|(i, (x, m))| {
                let op = HermitianOperator::new(matrix_from_doc(m, self.dim, path, &format!("effects[{i}]"))?)?;
                Ok((x.clone(), op))
            })
            .collect::<Result<Vec<_>>>()?;
        Measurement::new(self.dim, pairs)
    }
}

/// Parses a document, reporting the path into the document on failure.
pub fn parse_document<T: for<'de> Deserialize<'de>>(text: &str, path: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let location = e.path().to_string();
        located(path, location, e.into_inner().to_string())
    })
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn problem_from_str(text: &str, path: &str) -> Result<PostInfoProblem> {
    parse_document::<ProblemDocument>(text, path)?.to_problem(path)
}

pub fn load_problem(path: impl AsRef<Path>) -> Result<PostInfoProblem> {
    let path = path.as_ref();
    problem_from_str(&read(path)?, &path.display().to_string())
}

pub fn problem_to_string(prob: &PostInfoProblem) -> String {
    serde_json::to_string_pretty(&ProblemDocument::from_problem(prob)).expect("serializable")
}

pub fn save_problem(prob: &PostInfoProblem, path: impl AsRef<Path>) -> Result<()> {
    write(path.as_ref(), &problem_to_string(prob))
}

pub fn load_measurement(path: impl AsRef<Path>) -> Result<Measurement> {
    let path = path.as_ref();
    let name = path.display().to_string();
    parse_document::<MeasurementDocument>(&read(path)?, &name)?.to_measurement(&name)
}

pub fn save_measurement(m: &Measurement, path: impl AsRef<Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(&MeasurementDocument::from_measurement(m)).expect("serializable");
    write(path.as_ref(), &text)
}
