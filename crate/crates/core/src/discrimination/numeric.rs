//! Numeric optimum for ensembles without a closed form.
//!
//! Phase one is the fixed-point map `M(x) <- R^+ E(x) M(x) E(x) R^+` with
//! `R = (sum_x E(x) M(x) E(x))^{1/2}`, started from the uniform POVM and
//! restarted from random POVMs when the certificate stalls. Phase two, used
//! only if phase one misses the target gap, is a log-barrier method on the
//! dual problem `min tr Y` subject to `Y >= E(x)`, from whose central points a
//! primal POVM is read off.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ensemble::StateEnsemble;
use crate::error::{Error, Result};
use crate::label::Label;
use crate::linalg::{
    cholesky, inverse_from_cholesky, log_det_from_cholesky, max_eigenvalue, pinv_sqrt, solve_spd,
    CMatrix,
};
use crate::measurement::Measurement;
use crate::random::random_povm;

use super::{
    guess_prob_unclamped, optimality_certificate, Method, SolveOptions, SolveResult, Uniqueness,
};

const CHECK_EVERY: usize = 10;
const STALL_WINDOW: usize = 500;
const RESTARTS: usize = 3;

struct Candidate {
    gap: f64,
    measurement: Measurement,
}

impl Candidate {
    fn offer(best: &mut Option<Candidate>, gap: f64, measurement: Measurement) {
        if best.as_ref().map_or(true, |b| gap < b.gap) {
            *best = Some(Candidate { gap, measurement });
        }
    }
}

pub fn solve_numeric(e: &StateEnsemble, opts: &SolveOptions) -> Result<SolveResult> {
    let labels: Vec<Label> = e.labels().cloned().collect();
    let mut best: Option<Candidate> = None;
    let mut budget = opts.max_iter;

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for attempt in 0..=RESTARTS {
        if budget == 0 {
            break;
        }
        let start = if attempt == 0 {
            Measurement::uniform(e.dim(), labels.iter().cloned())?
        } else {
            random_povm(e.dim(), &labels, &mut rng)?
        };
        let (m, gap, used) = fixed_point(e, start, budget, opts.gap_tol)?;
        budget -= used.min(budget);
        Candidate::offer(&mut best, gap, m);
        if gap <= opts.gap_tol {
            break;
        }
    }

    if best.as_ref().map_or(true, |b| b.gap > opts.gap_tol) {
        if let Some((m, gap)) = barrier(e, opts.gap_tol)? {
            Candidate::offer(&mut best, gap, m);
        }
    }

    let best = best.expect("at least one attempt runs");
    let value = guess_prob_unclamped(e, &best.measurement);
    if best.gap > opts.gap_tol {
        return Err(Error::NoConvergence {
            best: value,
            gap: best.gap,
        });
    }
    Ok(SolveResult {
        value,
        measurement: best.measurement,
        method: Method::Numeric,
        unique: Uniqueness::Unknown,
        certificate_gap: best.gap,
    })
}

fn assemble(labels: &[Label], dim: usize, mats: &[CMatrix]) -> Measurement {
    use crate::operator::{Effect, HermitianOperator};
    Measurement::from_effects_unchecked(
        dim,
        labels
            .iter()
            .zip(mats)
            .map(|(x, m)| (x.clone(), Effect::unchecked(HermitianOperator::from_hermitian_part(m))))
            .collect(),
    )
}

/// Runs the fixed-point map until the gap target, a stall, or `max_iter`.
/// Returns the best iterate seen, its gap and the iterations used.
fn fixed_point(
    e: &StateEnsemble,
    start: Measurement,
    max_iter: usize,
    gap_tol: f64,
) -> Result<(Measurement, f64, usize)> {
    let d = e.dim();
    let n = e.len();
    let labels: Vec<Label> = e.labels().cloned().collect();
    let es: Vec<&CMatrix> = e.iter().map(|(_, op)| op.matrix()).collect();
    let mut ms: Vec<CMatrix> = labels
        .iter()
        .map(|x| start.get(x).unwrap().matrix().clone())
        .collect();

    let mut best_gap = optimality_certificate(e, &start)?;
    let mut best = start;
    let mut history: Vec<f64> = vec![best_gap];
    let mut iter = 0;
    while iter < max_iter && best_gap > gap_tol {
        let sandwiched: Vec<CMatrix> = es
            .iter()
            .zip(&ms)
            .map(|(ex, mx)| ex.matmul(mx).matmul(ex))
            .collect();
        let mut s = CMatrix::zeros(d);
        for t in &sandwiched {
            s += t;
        }
        let (inv, support) = pinv_sqrt(&s, 1e-14 * s.max_abs().max(f64::MIN_POSITIVE))?;
        let missing = (&CMatrix::identity(d) - &support).scale(1.0 / n as f64);
        ms = sandwiched
            .iter()
            .map(|t| &inv.conjugate(t) + &missing)
            .collect();
        iter += 1;

        if iter % CHECK_EVERY == 0 {
            let m = assemble(&labels, d, &ms);
            let gap = optimality_certificate(e, &m)?;
            if gap < best_gap {
                best_gap = gap;
                best = m;
            }
            history.push(best_gap);
            let window = STALL_WINDOW / CHECK_EVERY;
            if history.len() > window {
                let old = history[history.len() - 1 - window];
                if best_gap > 0.99 * old {
                    break;
                }
            }
        }
    }
    Ok((best, best_gap, iter))
}

/// Sparse Hermitian basis element: `(row, col, coefficient)` triples.
type BasisElement = Vec<(usize, usize, Complex64)>;

/// Orthonormal basis of the real space of `d x d` Hermitian matrices.
fn hermitian_basis(d: usize) -> Vec<BasisElement> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut basis = Vec::with_capacity(d * d);
    for i in 0..d {
        basis.push(vec![(i, i, Complex64::new(1.0, 0.0))]);
    }
    for i in 0..d {
        for j in (i + 1)..d {
            basis.push(vec![(i, j, Complex64::new(r, 0.0)), (j, i, Complex64::new(r, 0.0))]);
            basis.push(vec![(i, j, Complex64::new(0.0, -r)), (j, i, Complex64::new(0.0, r))]);
        }
    }
    basis
}

fn compose(basis: &[BasisElement], y: &[f64], d: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d);
    for (b, &c) in basis.iter().zip(y) {
        for &(i, j, v) in b {
            m[(i, j)] += v * c;
        }
    }
    m
}

/// Barrier objective `t tr Y - sum_x ln det(Y - E(x))` and the inverses
/// `(Y - E(x))^{-1}`, or `None` outside the domain.
fn evaluate(y: &CMatrix, es: &[&CMatrix], t: f64) -> Option<(f64, Vec<CMatrix>)> {
    let mut f = t * y.trace().re;
    let mut zs = Vec::with_capacity(es.len());
    for ex in es {
        let l = cholesky(&(y - *ex))?;
        f -= log_det_from_cholesky(&l);
        zs.push(inverse_from_cholesky(&l));
    }
    f.is_finite().then_some((f, zs))
}

/// Log-barrier path following on the dual. Returns the best primal candidate
/// and its certificate gap, or `None` if the Newton system broke down first.
fn barrier(e: &StateEnsemble, gap_tol: f64) -> Result<Option<(Measurement, f64)>> {
    let d = e.dim();
    let labels: Vec<Label> = e.labels().cloned().collect();
    let es: Vec<&CMatrix> = e.iter().map(|(_, op)| op.matrix()).collect();
    let basis = hermitian_basis(d);
    let nb = basis.len();

    let mut top = 0.0f64;
    for ex in &es {
        top = top.max(max_eigenvalue(ex)?);
    }
    let mut y = vec![0.0; nb];
    for v in y.iter_mut().take(d) {
        *v = top + 1.0;
    }
    let mut t = 1.0;
    let mut best: Option<(Measurement, f64)> = None;

    for _outer in 0..60 {
        let Some((mut f, mut zs)) = evaluate(&compose(&basis, &y, d), &es, t) else {
            break;
        };
        for _newton in 0..200 {
            let mut zsum = CMatrix::zeros(d);
            for z in &zs {
                zsum += z;
            }
            let grad: Vec<f64> = basis
                .iter()
                .map(|b| {
                    b.iter()
                        .map(|&(i, j, v)| {
                            let tr_b = if i == j { v.re } else { 0.0 };
                            t * tr_b - (zsum[(j, i)] * v).re
                        })
                        .sum()
                })
                .collect();
            let mut hess = vec![0.0; nb * nb];
            for z in &zs {
                for (k, bk) in basis.iter().enumerate() {
                    for (l, bl) in basis.iter().enumerate().skip(k) {
                        let mut acc = 0.0;
                        for &(i, j, b) in bk {
                            for &(p, q, c) in bl {
                                acc += (b * c * z[(j, p)] * z[(q, i)]).re;
                            }
                        }
                        hess[k * nb + l] += acc;
                    }
                }
            }
            for k in 0..nb {
                for l in 0..k {
                    hess[k * nb + l] = hess[l * nb + k];
                }
            }
            let neg: Vec<f64> = grad.iter().map(|g| -g).collect();
            let Some(step) = solve_spd(&hess, nb, &neg) else {
                break;
            };
            let slope: f64 = grad.iter().zip(&step).map(|(g, s)| g * s).sum();
            if -slope < 1e-11 {
                break;
            }
            let mut alpha = 1.0;
            let mut moved = false;
            while alpha > 1e-14 {
                let trial: Vec<f64> = y.iter().zip(&step).map(|(a, s)| a + alpha * s).collect();
                if let Some((ft, zt)) = evaluate(&compose(&basis, &trial, d), &es, t) {
                    if ft <= f + 0.25 * alpha * slope {
                        y = trial;
                        f = ft;
                        zs = zt;
                        moved = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if !moved {
                break;
            }
        }

        let primal: Vec<(Label, CMatrix)> = labels
            .iter()
            .zip(&zs)
            .map(|(x, z)| (x.clone(), z.scale(1.0 / t)))
            .collect();
        let m = Measurement::from_psd_family(d, primal)?;
        let gap = optimality_certificate(e, &m)?;
        if best.as_ref().map_or(true, |(_, g)| gap < *g) {
            best = Some((m, gap));
        }
        if gap <= gap_tol || t > 1e14 {
            break;
        }
        t *= 8.0;
    }
    Ok(best)
}
