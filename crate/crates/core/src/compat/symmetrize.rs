use crate::error::{Error, Result};
use crate::label::Label;
use crate::linalg::CMatrix;
use crate::measurement::Measurement;
use crate::operator::{Effect, HermitianOperator};
use crate::qubit::pauli;

/// Flips the leading `+`/`-` of every component of a tuple of signed atoms.
pub fn negate_outcome(x: &Label) -> Option<Label> {
    let parts = x.as_tuple()?;
    let flipped: Option<Vec<Label>> = parts
        .iter()
        .map(|p| {
            let s = p.as_atom()?;
            let rest = s.get(1..)?;
            match s.as_bytes().first()? {
                b'+' => Some(Label::atom(format!("-{rest}"))),
                b'-' => Some(Label::atom(format!("+{rest}"))),
                _ => None,
            }
        })
        .collect();
    flipped.map(Label::Tuple)
}

/// `A X A^{-1}` for the antiunitary `A = sigma_2 K`: maps the Bloch vector `v` to `-v`.
fn spin_flip(x: &CMatrix) -> CMatrix {
    let s2 = pauli(2);
    s2.matmul(&x.conj()).matmul(&s2)
}

/// `C'(k) = (C(k) + A C(-k) A^{-1}) / 2` on a qubit measurement with
/// sign-tuple outcomes. Each marginal of the result is the uniform-noise
/// counterpart of the corresponding marginal of `c`.
pub fn qubit_symmetrize(c: &Measurement) -> Result<Measurement> {
    if c.dim() != 2 {
        return Err(Error::WrongShape(format!("dimension {} is not 2", c.dim())));
    }
    let mut effects = indexmap::IndexMap::new();
    for (k, op) in c.iter() {
        let neg = negate_outcome(k)
            .ok_or_else(|| Error::WrongShape(format!("outcome `{k}` is not a tuple of signed labels")))?;
        let partner = c
            .get(&neg)
            .ok_or_else(|| Error::WrongShape(format!("outcome `{neg}` missing")))?;
        let sym = (op.matrix() + &spin_flip(partner.matrix())).scale(0.5);
        effects.insert(k.clone(), Effect::unchecked(HermitianOperator::from_hermitian_part(&sym)));
    }
    Ok(Measurement::from_effects_unchecked(2, effects))
}
