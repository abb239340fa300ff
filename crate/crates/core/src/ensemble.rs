use std::collections::HashSet;

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::label::Label;
use crate::operator::{DensityOperator, HermitianOperator};
use crate::tol;

/// Labelled family of subnormalized states `E(x) = p(x) rho_x` with total trace one.
#[derive(Clone, Debug, PartialEq)]
pub struct StateEnsemble {
    dim: usize,
    elements: IndexMap<Label, HermitianOperator>,
}

impl StateEnsemble {
    /// Validates and builds an ensemble. Labels must be distinct and keyed one-to-one with elements.
    pub fn new(dim: usize, labels: Vec<Label>, elements: Vec<HermitianOperator>) -> Result<Self> {
        Self::new_with_tol(dim, labels, elements, tol::PSD, tol::NORMALIZATION)
    }

    pub fn new_with_tol(
        dim: usize,
        labels: Vec<Label>,
        elements: Vec<HermitianOperator>,
        psd_tol: f64,
        norm_tol: f64,
    ) -> Result<Self> {
        if labels.len() != elements.len() {
            return Err(Error::LabelMismatch(format!(
                "{} labels for {} elements",
                labels.len(),
                elements.len()
            )));
        }
        if labels.is_empty() {
            return Err(Error::LabelMismatch("ensemble has no labels".into()));
        }
        let mut map = IndexMap::with_capacity(labels.len());
        let mut total = 0.0;
        for (label, op) in labels.into_iter().zip(elements) {
            if op.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: op.dim(),
                });
            }
            let min = op.min_eigenvalue()?;
            if min < -psd_tol {
                return Err(Error::NotPositive {
                    label,
                    min_eigenvalue: min,
                });
            }
            total += op.trace();
            if map.contains_key(&label) {
                return Err(Error::DuplicateLabel(label));
            }
            map.insert(label, op);
        }
        if (total - 1.0).abs() > norm_tol {
            return Err(Error::NotNormalized { total });
        }
        Ok(Self { dim, elements: map })
    }

    pub fn from_pairs(
        dim: usize,
        pairs: impl IntoIterator<Item = (Label, HermitianOperator)>,
    ) -> Result<Self> {
        let (labels, elements) = pairs.into_iter().unzip();
        Self::new(dim, labels, elements)
    }

    /// Expands `E(x) = p(x) rho_x` from states and a prior.
    pub fn from_states(
        dim: usize,
        labels: Vec<Label>,
        states: Vec<DensityOperator>,
        priors: Vec<f64>,
    ) -> Result<Self> {
        if states.len() != priors.len() {
            return Err(Error::LabelMismatch(format!(
                "{} states for {} probabilities",
                states.len(),
                priors.len()
            )));
        }
        if let Some(p) = priors.iter().find(|p| !(**p >= 0.0)) {
            return Err(Error::BadWeights(format!("negative probability {p}")));
        }
        let elements = states
            .into_iter()
            .zip(&priors)
            .map(|(s, &p)| s.op().scale(p))
            .collect();
        Self::new(dim, labels, elements)
    }

    pub(crate) fn from_map_unchecked(dim: usize, elements: IndexMap<Label, HermitianOperator>) -> Self {
        Self { dim, elements }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn labels(&self) -> impl ExactSizeIterator<Item = &Label> {
        self.elements.keys()
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = (&Label, &HermitianOperator)> {
        self.elements.iter()
    }

    pub fn get(&self, label: &Label) -> Option<&HermitianOperator> {
        self.elements.get(label)
    }

    pub fn contains(&self, label: &Label) -> bool {
        self.elements.contains_key(label)
    }

    /// `p(x) = tr E(x)`
    pub fn prior(&self, label: &Label) -> Option<f64> {
        self.get(label).map(HermitianOperator::trace)
    }

    pub fn elements(&self) -> &IndexMap<Label, HermitianOperator> {
        &self.elements
    }
}

/// Ordered disjoint cover of an ensemble's label set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Vec<Label>>,
}

impl Partition {
    /// Checks that blocks are nonempty and pairwise disjoint.
    pub fn new(blocks: Vec<Vec<Label>>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::BadPartition("no blocks".into()));
        }
        let mut seen = HashSet::new();
        for (i, b) in blocks.iter().enumerate() {
            if b.is_empty() {
                return Err(Error::BadPartition(format!("block {i} is empty")));
            }
            for x in b {
                if !seen.insert(x) {
                    return Err(Error::BadPartition(format!("label `{x}` appears twice")));
                }
            }
        }
        Ok(Self { blocks })
    }

    /// The partition with a single block holding every label of `e`.
    pub fn trivial(e: &StateEnsemble) -> Self {
        Self {
            blocks: vec![e.labels().cloned().collect()],
        }
    }

    pub fn blocks(&self) -> &[Vec<Label>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// Index of the block containing `label`.
    pub fn block_of(&self, label: &Label) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(label))
    }

    /// Checks that the blocks cover exactly the labels of `e` and carry positive weight.
    pub fn validate_for(&self, e: &StateEnsemble) -> Result<()> {
        let total: usize = self.blocks.iter().map(Vec::len).sum();
        if total != e.len() {
            return Err(Error::BadPartition(format!(
                "blocks hold {total} labels, ensemble has {}",
                e.len()
            )));
        }
        for b in &self.blocks {
            for x in b {
                if !e.contains(x) {
                    return Err(Error::BadPartition(format!("label `{x}` not in ensemble")));
                }
            }
        }
        for (i, q) in self.weights(e).into_iter().enumerate() {
            if !(q > 0.0) {
                return Err(Error::EmptyBlock(i));
            }
        }
        Ok(())
    }

    /// Block weights `q(l) = sum_{x in X_l} tr E(x)`.
    pub fn weights(&self, e: &StateEnsemble) -> Vec<f64> {
        self.blocks
            .iter()
            .map(|b| b.iter().filter_map(|x| e.prior(x)).sum())
            .collect()
    }
}

/// Weight `q(l)` of block `block` and the conditioned ensemble `E_l(x) = E(x)/q(l)`.
pub fn subensemble(e: &StateEnsemble, p: &Partition, block: usize) -> Result<(f64, StateEnsemble)> {
    let labels = p
        .blocks()
        .get(block)
        .ok_or_else(|| Error::BadPartition(format!("no block with index {block}")))?;
    let mut q = 0.0;
    for x in labels {
        q += e
            .prior(x)
            .ok_or_else(|| Error::BadPartition(format!("label `{x}` not in ensemble")))?;
    }
    if !(q > 0.0) {
        return Err(Error::EmptyBlock(block));
    }
    let elements = labels
        .iter()
        .map(|x| (x.clone(), e.get(x).unwrap().scale(1.0 / q)))
        .collect();
    Ok((q, StateEnsemble::from_map_unchecked(e.dim(), elements)))
}
