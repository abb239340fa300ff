use indexmap::IndexMap;

use super::{map_of, GalleryCase, JMD, P_GUESS, P_POST, P_PRIOR};
use crate::discrimination::Uniqueness;
use crate::ensemble::{Partition, StateEnsemble};
use crate::error::{Error, Result};
use crate::label::{cartesian_product, Label};
use crate::measurement::Measurement;
use crate::operator::HermitianOperator;
use crate::post_info::PostInfoProblem;
use crate::qubit::{add3, bloch_operator, norm3, scale3};

fn unit(v: [f64; 3]) -> [f64; 3] {
    scale3(v, 1.0 / norm3(v))
}

/// `1/2 (1 + v^ . sigma)`
fn half_projector(v: [f64; 3]) -> HermitianOperator {
    bloch_operator(1.0, unit(v))
}

fn sign_label(sign: f64, axis: &str) -> Label {
    Label::atom(format!("{}{axis}", if sign > 0.0 { '+' } else { '-' }))
}

const SIGNS: [f64; 2] = [1.0, -1.0];

fn two_bases_axes(theta: f64) -> ([f64; 3], [f64; 3]) {
    let (s, c) = (theta / 2.0).sin_cos();
    ([c, s, 0.0], [c, -s, 0.0])
}

fn check_angle(theta: f64) -> Result<()> {
    if theta > 0.0 && theta < std::f64::consts::PI {
        Ok(())
    } else {
        Err(Error::BadAngle(theta))
    }
}

fn check_open_unit(name: &str, q: f64) -> Result<()> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(Error::BadArgs(format!("{name} = {q} outside (0, 1)")))
    }
}

/// `C+` and `C-` on `{+a,-a} x {+b,-b}`.
///
/// `C+(h,k) = delta_hk 1/2 (1 + h v+^ . sigma)` with `v+ = q a + (1-q) b`;
/// `C-(h,k) = (1 - delta_hk) 1/2 (1 + h v-^ . sigma)` with `v- = q a - (1-q) b`.
pub fn two_bases_measurements(theta: f64, q: f64) -> Result<(Measurement, Measurement)> {
    check_angle(theta)?;
    check_open_unit("q", q)?;
    let (a, b) = two_bases_axes(theta);
    let v_plus = add3(scale3(a, q), scale3(b, 1.0 - q));
    let v_minus = add3(scale3(a, q), scale3(b, q - 1.0));
    let build = |same: bool, v: [f64; 3]| {
        let mut effects = Vec::with_capacity(4);
        for h in SIGNS {
            for k in SIGNS {
                let t = Label::tuple([sign_label(h, "a"), sign_label(k, "b")]);
                let op = if (h == k) == same {
                    half_projector(scale3(v, h))
                } else {
                    HermitianOperator::zeros(2)
                };
                effects.push((t, op));
            }
        }
        Measurement::new(2, effects)
    };
    Ok((build(true, v_plus)?, build(false, v_minus)?))
}

/// Two qubit eigenbases at angle `theta` with weights `q`, `1 - q`.
pub fn two_bases(theta: f64, q: f64) -> Result<GalleryCase> {
    check_angle(theta)?;
    check_open_unit("q", q)?;
    let (a, b) = two_bases_axes(theta);
    let mut pairs = Vec::with_capacity(4);
    for (w, v, name) in [(q, a, "a"), (1.0 - q, b, "b")] {
        for h in SIGNS {
            pairs.push((sign_label(h, name), bloch_operator(w / 2.0, scale3(v, h))));
        }
    }
    let ensemble = StateEnsemble::from_pairs(2, pairs)?;
    let partition = Partition::new(vec![
        vec!["+a".into(), "-a".into()],
        vec!["+b".into(), "-b".into()],
    ])?;
    let problem = PostInfoProblem::new(ensemble, partition)?;

    let cos = theta.cos();
    let p_post = 0.5 * (1.0 + (q * q + (1.0 - q) * (1.0 - q) + 2.0 * q * (1.0 - q) * cos.abs()).sqrt());
    let reference = map_of([
        (P_GUESS, q.max(1.0 - q)),
        (P_PRIOR, 1.0),
        (P_POST, p_post),
        (JMD, 1.0 / (1.0 + theta.sin().abs()).sqrt()),
    ]);

    let (c_plus, c_minus) = two_bases_measurements(theta, q)?;
    let mut measurements = IndexMap::new();
    let boundary = cos.abs() <= 1e-12;
    let uniqueness = if boundary {
        let c0 = Measurement::new(
            2,
            c_plus
                .iter()
                .zip(c_minus.iter())
                .map(|((t, x), (_, y))| (t.clone(), x.add(y).scale(0.5))),
        )?;
        measurements.insert("c0".to_owned(), c0);
        measurements.insert("c_plus".to_owned(), c_plus.clone());
        measurements.insert("c_minus".to_owned(), c_minus.clone());
        Uniqueness::No
    } else if cos > 0.0 {
        measurements.insert("c_plus".to_owned(), c_plus.clone());
        Uniqueness::Yes
    } else {
        measurements.insert("c_minus".to_owned(), c_minus.clone());
        Uniqueness::Yes
    };

    let projectors = if boundary {
        c_plus
            .iter()
            .zip(c_minus.iter())
            .map(|((t, x), (_, y))| (t.clone(), x.add(y)))
            .collect()
    } else {
        let top = if cos > 0.0 { &c_plus } else { &c_minus };
        top.iter().map(|(t, x)| (t.clone(), x.clone())).collect()
    };

    Ok(GalleryCase {
        name: "two-bases".into(),
        problem,
        reference,
        reference_measurements: measurements,
        uniqueness,
        params: map_of([("theta", theta), ("q", q)]),
        projectors,
    })
}

fn dihedral_axis(n: usize, k: usize) -> [f64; 3] {
    let (s, c) = (std::f64::consts::PI * k as f64 / n as f64).sin_cos();
    [0.0, c, s]
}

/// `+-` along `sigma_1` with weight `q1`, and `2n` states in the 2-3 plane sharing `1 - q1`.
pub fn dihedral(n: usize, q1: f64) -> Result<GalleryCase> {
    if n < 1 {
        return Err(Error::BadArgs("n must be at least 1".into()));
    }
    check_open_unit("q1", q1)?;
    let q2 = 1.0 - q1;
    let nf = n as f64;
    let e1 = [1.0, 0.0, 0.0];
    let first: Vec<Label> = vec!["+".into(), "-".into()];
    let second: Vec<Label> = (0..2 * n).map(|k| Label::atom(k.to_string())).collect();
    let mut pairs = Vec::with_capacity(2 * n + 2);
    for (h, x) in SIGNS.iter().zip(&first) {
        pairs.push((x.clone(), bloch_operator(q1 / 2.0, scale3(e1, *h))));
    }
    for (k, x) in second.iter().enumerate() {
        pairs.push((x.clone(), bloch_operator(q2 / (2.0 * nf), dihedral_axis(n, k))));
    }
    let ensemble = StateEnsemble::from_pairs(2, pairs)?;
    let problem = PostInfoProblem::new(ensemble, Partition::new(vec![first.clone(), second.clone()])?)?;

    let root = (nf * nf * q1 * q1 + q2 * q2).sqrt();
    let reference = map_of([
        (P_GUESS, q1.max(q2 / nf)),
        (P_PRIOR, ((nf - 1.0) * q1 + 1.0) / nf),
        (P_POST, (nf * q1 + q2 + root) / (2.0 * nf)),
    ]);

    let mut projectors = Vec::with_capacity(4 * n);
    for (h, x) in SIGNS.iter().zip(&first) {
        for (k, y) in second.iter().enumerate() {
            let v = add3(scale3(e1, nf * q1 * h), scale3(dihedral_axis(n, k), q2));
            projectors.push((Label::tuple([x.clone(), y.clone()]), half_projector(v)));
        }
    }
    let c0 = Measurement::new(
        2,
        projectors
            .iter()
            .map(|(t, p)| (t.clone(), p.scale(1.0 / (2.0 * nf)))),
    )?;
    let mut measurements = IndexMap::new();
    measurements.insert("c0".to_owned(), c0);

    Ok(GalleryCase {
        name: "dihedral".into(),
        problem,
        reference,
        reference_measurements: measurements,
        uniqueness: Uniqueness::No,
        params: map_of([("n", nf), ("q1", q1)]),
        projectors,
    })
}

/// Constraints on `alpha: {+,-} x {0..2n-1} -> [0,1]` (row-major in `h`) making
/// `alpha Pi` a measurement: each row sums to one and `sum_k (alpha(+,k) + alpha(-,k)) a_k = 0`.
pub fn dihedral_alpha_admissible(n: usize, alpha: &[f64], tol: f64) -> bool {
    if n < 1 || alpha.len() != 4 * n {
        return false;
    }
    if alpha.iter().any(|a| *a < -tol || *a > 1.0 + tol) {
        return false;
    }
    let (plus, minus) = alpha.split_at(2 * n);
    let rows_ok = [plus, minus]
        .iter()
        .all(|row| (row.iter().sum::<f64>() - 1.0).abs() <= tol);
    let mut centroid = [0.0; 3];
    for k in 0..2 * n {
        centroid = add3(centroid, scale3(dihedral_axis(n, k), plus[k] + minus[k]));
    }
    rows_ok && norm3(centroid) <= tol
}

/// Three orthogonal qubit bases with weights `q`.
pub fn three_axes(q: [f64; 3]) -> Result<GalleryCase> {
    if q.iter().any(|w| !(*w > 0.0)) {
        return Err(Error::BadWeights(format!("weights {q:?} must be positive")));
    }
    let total: f64 = q.iter().sum();
    if (total - 1.0).abs() > crate::tol::NORMALIZATION {
        return Err(Error::BadWeights(format!("weights sum to {total}")));
    }
    let axis = |l: usize| {
        let mut v = [0.0; 3];
        v[l] = 1.0;
        v
    };
    let blocks: Vec<Vec<Label>> = (0..3)
        .map(|l| SIGNS.iter().map(|&h| sign_label(h, &format!("e{}", l + 1))).collect())
        .collect();
    let mut pairs = Vec::with_capacity(6);
    for l in 0..3 {
        for (h, x) in SIGNS.iter().zip(&blocks[l]) {
            pairs.push((x.clone(), bloch_operator(q[l] / 2.0, scale3(axis(l), *h))));
        }
    }
    let ensemble = StateEnsemble::from_pairs(2, pairs)?;
    let problem = PostInfoProblem::new(ensemble, Partition::new(blocks.clone())?)?;

    let qn = norm3(q);
    let reference = map_of([
        (P_GUESS, q.iter().copied().fold(0.0, f64::max)),
        (P_PRIOR, 1.0),
        (P_POST, 0.5 * (1.0 + qn)),
        (JMD, 1.0 / 3f64.sqrt()),
    ]);

    let signs_of = |t: &Label| -> [f64; 3] {
        let parts = t.as_tuple().expect("product label");
        let mut s = [0.0; 3];
        for (l, p) in parts.iter().enumerate() {
            s[l] = if p.as_atom().unwrap().starts_with('+') { 1.0 } else { -1.0 };
        }
        s
    };
    let projectors: Vec<(Label, HermitianOperator)> = cartesian_product(&blocks)
        .into_iter()
        .map(|t| {
            let s = signs_of(&t);
            let v = [q[0] * s[0], q[1] * s[1], q[2] * s[2]];
            (t, half_projector(v))
        })
        .collect();
    let c0 = Measurement::new(2, projectors.iter().map(|(t, p)| (t.clone(), p.scale(0.25))))?;
    let diag = Measurement::new(
        2,
        projectors.iter().map(|(t, p)| {
            let s = signs_of(t);
            let op = if s[0] == s[1] && s[1] == s[2] {
                p.clone()
            } else {
                HermitianOperator::zeros(2)
            };
            (t.clone(), op)
        }),
    )?;
    let mut measurements = IndexMap::new();
    measurements.insert("c0".to_owned(), c0);
    measurements.insert("c_diag".to_owned(), diag);

    Ok(GalleryCase {
        name: "three-axes".into(),
        problem,
        reference,
        reference_measurements: measurements,
        uniqueness: Uniqueness::No,
        params: map_of([("q1", q[0]), ("q2", q[1]), ("q3", q[2])]),
        projectors,
    })
}

/// Constraints on `alpha: {+,-}^3 -> [0,1]` (index `4 i1 + 2 i2 + i3`, `0` for `+`):
/// every one-coordinate slice sums to one.
pub fn three_axes_alpha_admissible(alpha: &[f64], tol: f64) -> bool {
    if alpha.len() != 8 || alpha.iter().any(|a| *a < -tol || *a > 1.0 + tol) {
        return false;
    }
    (0..3).all(|l| {
        (0..2).all(|k| {
            let s: f64 = (0..8)
                .filter(|i| (i >> (2 - l)) & 1 == k)
                .map(|i| alpha[i])
                .sum();
            (s - 1.0).abs() <= tol
        })
    })
}
