use std::fmt;

use serde::{Deserialize, Serialize};

/// Opaque outcome/label token.
///
/// Plain labels are strings; outcomes of product measurements are ordered
/// tuples of labels, one entry per partition block.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Atom(String),
    Tuple(Vec<Label>),
}

impl Label {
    pub fn atom(s: impl Into<String>) -> Self {
        Label::Atom(s.into())
    }

    pub fn tuple(parts: impl IntoIterator<Item = Label>) -> Self {
        Label::Tuple(parts.into_iter().collect())
    }

    pub fn as_tuple(&self) -> Option<&[Label]> {
        match self {
            Label::Tuple(parts) => Some(parts),
            Label::Atom(_) => None,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Label::Atom(s) => Some(s),
            Label::Tuple(_) => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Atom(s) => f.write_str(s),
            Label::Tuple(parts) => {
                f.write_str("(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label::Atom(s.to_owned())
    }
}

impl From<String> for Label {
    fn from(s: String) -> Self {
        Label::Atom(s)
    }
}

/// All tuples `(x_1, ..., x_m)` with `x_l` drawn from `sets[l]`, in
/// lexicographic order of the block orderings.
pub fn cartesian_product(sets: &[Vec<Label>]) -> Vec<Label> {
    let mut out: Vec<Vec<Label>> = vec![Vec::new()];
    for set in sets {
        let mut next = Vec::with_capacity(out.len() * set.len());
        for prefix in &out {
            for x in set {
                let mut t = prefix.clone();
                t.push(x.clone());
                next.push(t);
            }
        }
        out = next;
    }
    out.into_iter().map(Label::Tuple).collect()
}
