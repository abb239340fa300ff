use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::label::Label;
use crate::linalg::{pinv_sqrt, psd_part, CMatrix};
use crate::operator::{Effect, HermitianOperator};
use crate::tol;

/// A POVM: effects indexed by outcome labels, summing to the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Measurement {
    dim: usize,
    effects: IndexMap<Label, Effect>,
}

impl Measurement {
    pub fn new(dim: usize, pairs: impl IntoIterator<Item = (Label, HermitianOperator)>) -> Result<Self> {
        Self::new_with_tol(dim, pairs, tol::NORMALIZATION)
    }

    pub fn new_with_tol(
        dim: usize,
        pairs: impl IntoIterator<Item = (Label, HermitianOperator)>,
        sum_tol: f64,
    ) -> Result<Self> {
        let mut effects = IndexMap::new();
        for (label, op) in pairs {
            if op.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: op.dim(),
                });
            }
            let eff = Effect::labelled(op, &label)?;
            if effects.contains_key(&label) {
                return Err(Error::DuplicateLabel(label));
            }
            effects.insert(label, eff);
        }
        if effects.is_empty() {
            return Err(Error::LabelMismatch("measurement has no outcomes".into()));
        }
        let m = Self { dim, effects };
        let deviation = m.normalization_defect();
        if deviation > sum_tol {
            return Err(Error::NotPovm { deviation });
        }
        Ok(m)
    }

    /// `M(x) = w(x) 1`, the measurement that ignores the system.
    pub fn trivial(dim: usize, weights: impl IntoIterator<Item = (Label, f64)>) -> Result<Self> {
        Self::new(
            dim,
            weights
                .into_iter()
                .map(|(x, w)| (x, HermitianOperator::identity(dim).scale(w))),
        )
    }

    pub fn uniform(dim: usize, outcomes: impl IntoIterator<Item = Label>) -> Result<Self> {
        let outcomes: Vec<Label> = outcomes.into_iter().collect();
        let w = 1.0 / outcomes.len() as f64;
        Self::trivial(dim, outcomes.into_iter().map(|x| (x, w)))
    }

    /// Turns an arbitrary family of Hermitian operators into a POVM: each one
    /// is clipped to its PSD part, then all are conjugated by `S^{-1/2}` with
    /// `S` their sum. Directions outside the support of `S` are shared evenly.
    pub fn from_psd_family(
        dim: usize,
        pairs: impl IntoIterator<Item = (Label, CMatrix)>,
    ) -> Result<Self> {
        let mut clipped = Vec::new();
        let mut sum = CMatrix::zeros(dim);
        for (x, m) in pairs {
            let p = psd_part(&m)?;
            sum += &p;
            clipped.push((x, p));
        }
        let scale = sum.max_abs().max(1.0);
        let (inv, support) = pinv_sqrt(&sum, 1e-14 * scale)?;
        let missing = (&CMatrix::identity(dim) - &support).scale(1.0 / clipped.len() as f64);
        let effects = clipped
            .into_iter()
            .map(|(x, p)| {
                let m = &inv.conjugate(&p) + &missing;
                (x, Effect::unchecked(HermitianOperator::from_hermitian_part(&m)))
            })
            .collect();
        Ok(Self { dim, effects })
    }

    pub(crate) fn from_effects_unchecked(dim: usize, effects: IndexMap<Label, Effect>) -> Self {
        Self { dim, effects }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn outcomes(&self) -> impl ExactSizeIterator<Item = &Label> {
        self.effects.keys()
    }

    pub fn get(&self, outcome: &Label) -> Option<&HermitianOperator> {
        self.effects.get(outcome).map(Effect::op)
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = (&Label, &HermitianOperator)> {
        self.effects.iter().map(|(x, e)| (x, e.op()))
    }

    /// `max |sum_x M(x) - 1|` entrywise.
    pub fn normalization_defect(&self) -> f64 {
        let mut sum = CMatrix::zeros(self.dim);
        for e in self.effects.values() {
            sum += e.op().matrix();
        }
        sum.max_abs_diff(&CMatrix::identity(self.dim))
    }

    /// Largest operator-wise entry difference to another measurement with the same outcomes.
    pub fn max_abs_diff(&self, other: &Measurement) -> Option<f64> {
        if self.len() != other.len() {
            return None;
        }
        let mut worst = 0.0f64;
        for (x, op) in self.iter() {
            worst = worst.max(op.max_abs_diff(other.get(x)?));
        }
        Some(worst)
    }

    /// Same effects, outcome labels renamed by `f` (which must be injective).
    pub fn relabel(&self, f: impl Fn(&Label) -> Label) -> Result<Measurement> {
        let mut effects = IndexMap::new();
        for (x, e) in &self.effects {
            let y = f(x);
            if effects.insert(y.clone(), e.clone()).is_some() {
                return Err(Error::DuplicateLabel(y));
            }
        }
        Ok(Self::from_effects_unchecked(self.dim, effects))
    }
}

/// Post-processed measurement `f_* M (y) = sum_{x : f(x) = y} M(x)`; outcomes
/// are the image of `f` in order of first appearance.
pub fn push_forward(m: &Measurement, f: impl Fn(&Label) -> Label) -> Measurement {
    let mut acc: IndexMap<Label, CMatrix> = IndexMap::new();
    for (x, op) in m.iter() {
        let y = f(x);
        match acc.get_mut(&y) {
            Some(sum) => *sum += op.matrix(),
            None => {
                acc.insert(y, op.matrix().clone());
            }
        }
    }
    let effects = acc
        .into_iter()
        .map(|(y, s)| (y, Effect::unchecked(HermitianOperator::from_hermitian_part(&s))))
        .collect();
    Measurement::from_effects_unchecked(m.dim(), effects)
}

/// `l`-th marginal of a measurement with tuple outcomes: the push-forward along
/// the projection onto component `l`.
pub fn marginal(c: &Measurement, component: usize) -> Result<Measurement> {
    let mut arity = None;
    for x in c.outcomes() {
        let parts = x.as_tuple().ok_or(Error::NotProductOutcomes {
            expected: component + 1,
        })?;
        match arity {
            None => arity = Some(parts.len()),
            Some(a) if a != parts.len() => return Err(Error::NotProductOutcomes { expected: a }),
            _ => {}
        }
    }
    let arity = arity.unwrap_or(0);
    if component >= arity {
        return Err(Error::NotProductOutcomes {
            expected: component + 1,
        });
    }
    Ok(push_forward(c, |x| x.as_tuple().unwrap()[component].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::bloch_operator;

    fn sharp(axis: [f64; 3], plus: &str, minus: &str) -> Measurement {
        Measurement::new(
            2,
            [
                (plus.into(), bloch_operator(1.0, axis)),
                (minus.into(), bloch_operator(1.0, axis.map(|v| -v))),
            ],
        )
        .unwrap()
    }

    #[test]
    fn rejects_non_povm() {
        let r = Measurement::new(2, [("a".into(), bloch_operator(1.0, [0.0, 0.0, 1.0]))]);
        assert!(matches!(r, Err(Error::NotPovm { .. })));
    }

    #[test]
    fn identity_push_forward() {
        let m = sharp([1.0, 0.0, 0.0], "+", "-");
        let r = push_forward(&m, |x| x.clone());
        assert_eq!(r.max_abs_diff(&m), Some(0.0));
    }

    #[test]
    fn constant_push_forward_is_identity_effect() {
        let m = sharp([0.0, 1.0, 0.0], "+", "-");
        let r = push_forward(&m, |_| "*".into());
        assert_eq!(r.len(), 1);
        assert!(r
            .get(&"*".into())
            .unwrap()
            .max_abs_diff(&HermitianOperator::identity(2))
            < 1e-15);
    }

    #[test]
    fn merging_refinement_sums_pairwise() {
        // Four-outcome refinement: each sharp effect split with weights 0.3 / 0.7.
        let base = sharp([0.0, 0.0, 1.0], "+", "-");
        let fine = Measurement::new(
            2,
            base.iter().flat_map(|(x, op)| {
                [
                    (Label::atom(format!("{x}0")), op.scale(0.3)),
                    (Label::atom(format!("{x}1")), op.scale(0.7)),
                ]
            }),
        )
        .unwrap();
        let merged = push_forward(&fine, |x| {
            let s = x.as_atom().unwrap();
            Label::atom(&s[..1])
        });
        assert!(merged.max_abs_diff(&base).unwrap() < 1e-15);
    }

    #[test]
    fn marginal_of_product_with_trivial_factor() {
        let m = sharp([1.0, 0.0, 0.0], "+", "-");
        let c = Measurement::new(
            2,
            m.iter().flat_map(|(x, op)| {
                [("u", 0.25), ("v", 0.75)]
                    .into_iter()
                    .map(move |(y, w)| (Label::tuple([x.clone(), y.into()]), op.scale(w)))
            }),
        )
        .unwrap();
        let m1 = marginal(&c, 0).unwrap();
        assert!(m1.max_abs_diff(&m).unwrap() < 1e-15);
        let m2 = marginal(&c, 1).unwrap();
        assert!(m2
            .get(&"v".into())
            .unwrap()
            .max_abs_diff(&HermitianOperator::identity(2).scale(0.75))
            < 1e-15);
        assert!(matches!(marginal(&c, 2), Err(Error::NotProductOutcomes { .. })));
        assert!(matches!(marginal(&m, 0), Err(Error::NotProductOutcomes { .. })));
    }

    #[test]
    fn psd_family_normalizes() {
        let m = Measurement::from_psd_family(
            2,
            [
                ("a".into(), HermitianOperator::from_real_diagonal(&[2.0, 0.0]).into_matrix()),
                ("b".into(), HermitianOperator::from_real_diagonal(&[1.0, 3.0]).into_matrix()),
            ],
        )
        .unwrap();
        assert!(m.normalization_defect() < 1e-14);
    }
}
