use indexmap::IndexMap;

use super::{map_of, GalleryCase, P_GUESS, P_POST, P_PRIOR};
use crate::discrimination::Uniqueness;
use crate::ensemble::{Partition, StateEnsemble};
use crate::error::Result;
use crate::label::Label;
use crate::measurement::Measurement;
use crate::operator::HermitianOperator;
use crate::post_info::PostInfoProblem;

/// Three rank-2 diagonal states on `C^3` whose top eigenprojections are
/// linearly independent, yet the optimum is not unique.
///
/// The operators are scaled by `1/3` so the ensemble is normalized; the
/// partition is the trivial one, so all three values coincide.
pub fn appendix_a_case() -> Result<GalleryCase> {
    let diag = [[0.5, 0.5, 0.0], [0.5, 0.0, 0.5], [0.0, 0.5, 0.5]];
    let raw: Vec<HermitianOperator> = diag.iter().map(|v| HermitianOperator::from_real_diagonal(v)).collect();
    let labels: Vec<Label> = ["1", "2", "3"].into_iter().map(Label::from).collect();
    let ensemble = StateEnsemble::new(3, labels.clone(), raw.iter().map(|e| e.scale(1.0 / 3.0)).collect())?;
    let partition = Partition::trivial(&ensemble);
    let problem = PostInfoProblem::new(ensemble, partition)?;

    let m0 = Measurement::new(3, labels.iter().cloned().zip(raw.iter().cloned()))?;
    // M1(x) = E(x) + E(y) - E(z) with M1(x) supported inside the support of E(x)
    let signs = [[1.0, 1.0, -1.0], [-1.0, 1.0, 1.0], [1.0, -1.0, 1.0]];
    let m1 = Measurement::new(
        3,
        labels.iter().zip(&signs).map(|(x, s)| {
            let op = raw
                .iter()
                .zip(s)
                .fold(HermitianOperator::zeros(3), |acc, (e, &c)| acc.add(&e.scale(c)));
            (x.clone(), op)
        }),
    )?;
    let mut measurements = IndexMap::new();
    measurements.insert("m0".to_owned(), m0);
    measurements.insert("m1".to_owned(), m1);

    Ok(GalleryCase {
        name: "appendix-a".into(),
        problem,
        reference: map_of([(P_GUESS, 0.5), (P_PRIOR, 0.5), (P_POST, 0.5)]),
        reference_measurements: measurements,
        uniqueness: Uniqueness::Unknown,
        params: IndexMap::new(),
        projectors: Vec::new(),
    })
}
