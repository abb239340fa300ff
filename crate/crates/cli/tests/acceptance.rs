//! Acceptance checks, one PASS/FAIL line per criterion.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};
use std::time::Instant;

use pgdiscrim::compat::{jmd, post_lower_bound_jmd, NoiseKind, NoiseModel, NoiseSearch};
use pgdiscrim::discrimination::{solve_closed_form, solve_numeric, Uniqueness};
use pgdiscrim::gallery::{
    appendix_a_case, convex_decomposition, dihedral, fourier_mub, three_axes, two_bases,
    two_bases_measurements, GalleryCase,
};
use pgdiscrim::qubit::bloch_operator;
use pgdiscrim::random::{random_density, random_effect, random_ensemble};
use pgdiscrim::{
    auxiliary_ensemble, cloning_bound, compatibility_gap, guess_prob, is_optimal_measurement,
    jointly_measurable, largest_eigenpair, marginal, p_post, p_prior, qubit_symmetrize, solve,
    Error, HermitianOperator, Label, Measurement, Partition, PostInfoProblem, SolveOptions,
    StateEnsemble, Verdict,
};
use pgdiscrim_cli::sweep;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn opts() -> SolveOptions {
    SolveOptions::default()
}

fn two_bases_value(theta: f64) -> f64 {
    0.5 * (1.0 + ((1.0 + theta.cos().abs()) / 2.0).sqrt())
}

fn criterion_1() -> Check {
    for theta in [0.2, 0.5, FRAC_PI_4, FRAC_PI_2, 2.0, 2.9] {
        let case = two_bases(theta, 0.5).map_err(err)?;
        let expected = two_bases_value(theta);
        let aux = auxiliary_ensemble(&case.problem).map_err(err)?;
        let closed = aux.delta * solve_closed_form(&aux.ensemble, 1e-9).map_err(err)?.value;
        ensure!((closed - expected).abs() <= 1e-7, "theta {theta}: closed form {closed} vs {expected}");
        let numeric = aux.delta * solve_numeric(&aux.ensemble, &opts()).map_err(err)?.value;
        ensure!((numeric - expected).abs() <= 1e-6, "theta {theta}: numeric {numeric} vs {expected}");
        let pg = solve(case.problem.ensemble(), &opts()).map_err(err)?.value;
        ensure!((pg - 0.5).abs() <= 1e-9, "theta {theta}: p_guess {pg}");
        let pp = p_prior(&case.problem, &opts()).map_err(err)?;
        ensure!((pp - 1.0).abs() <= 1e-9, "theta {theta}: p_prior {pp}");
    }
    Ok(())
}

fn criterion_2() -> Check {
    let rows = sweep::sweep(sweep::DEFAULT_THETA_MIN, sweep::DEFAULT_THETA_MAX, sweep::DEFAULT_STEPS, &opts())
        .map_err(err)?;
    let text = sweep::to_csv(&rows).map_err(err)?;
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers().map_err(err)?.iter().map(str::to_owned).collect();
    ensure!(
        header == ["theta", "p_post_closed", "p_post_numeric", "jmd_lower_bound"],
        "unexpected header {header:?}"
    );
    let mut parsed = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(err)?;
        let v: Vec<f64> = rec.iter().map(|s| s.parse::<f64>()).collect::<Result<_, _>>().map_err(err)?;
        parsed.push(v);
    }
    ensure!(parsed.len() == rows.len(), "row count");
    for (i, v) in parsed.iter().enumerate() {
        let (theta, closed, numeric, bound) = (v[0], v[1], v[2], v[3]);
        // the CSV carries 9 decimals
        ensure!(closed >= bound - 2e-9, "row {i}: closed {closed} below bound {bound}");
        ensure!(numeric >= bound - 1e-6, "row {i}: numeric {numeric} below bound {bound}");
        let gap = rows[i].p_post_closed - rows[i].jmd_lower_bound;
        let at_right_angle = (rows[i].theta - FRAC_PI_2).abs() < 1e-12;
        if at_right_angle {
            ensure!(gap.abs() <= 1e-7, "theta {theta}: gap {gap} at right angle");
        } else {
            ensure!(gap > 1e-7, "theta {theta}: equality away from the right angle (gap {gap})");
        }
    }
    ensure!(rows.iter().any(|r| (r.theta - FRAC_PI_2).abs() < 1e-12), "grid misses the right angle");
    for theta in [FRAC_PI_2 - 0.3, FRAC_PI_2 + 0.3] {
        let r = sweep::row(theta, &opts()).map_err(err)?;
        let gap = r.p_post_closed - r.jmd_lower_bound;
        ensure!(gap > 1e-4, "theta {theta}: gap {gap}");
        let on_grid = rows.iter().find(|x| (x.theta - theta).abs() < 1e-9).ok_or("grid misses pi/2 +- 0.3")?;
        ensure!(on_grid.p_post_closed - on_grid.jmd_lower_bound > 1e-4, "grid row at {theta}");
    }
    Ok(())
}

fn criterion_3() -> Check {
    for theta in [0.2, 0.5, FRAC_PI_4, 2.0, 2.9] {
        let case = two_bases(theta, 0.5).map_err(err)?;
        let (c_plus, c_minus) = two_bases_measurements(theta, 0.5).map_err(err)?;
        let target = if theta < FRAC_PI_2 { &c_plus } else { &c_minus };
        let m = p_post(&case.problem, &opts()).map_err(err)?.measurement;
        let diff = m.max_abs_diff(target).ok_or(format!("theta {theta}: outcome sets differ"))?;
        ensure!(diff <= 1e-7, "theta {theta}: distance {diff} from the regime optimum");
    }
    let case = two_bases(FRAC_PI_2, 0.5).map_err(err)?;
    let (c_plus, c_minus) = two_bases_measurements(FRAC_PI_2, 0.5).map_err(err)?;
    let aux = auxiliary_ensemble(&case.problem).map_err(err)?;
    let returned = [
        p_post(&case.problem, &opts()).map_err(err)?.measurement,
        solve_numeric(&aux.ensemble, &opts()).map_err(err)?.measurement,
        solve_numeric(&aux.ensemble, &SolveOptions { seed: 17, ..opts() }).map_err(err)?.measurement,
    ];
    for (i, m) in returned.iter().enumerate() {
        ensure!(is_optimal_measurement(&aux.ensemble, m, 1e-7).map_err(err)?, "optimum {i} not optimal");
        let (t, residual) = convex_decomposition(m, &c_plus, &c_minus).map_err(err)?;
        ensure!(residual <= 1e-7, "optimum {i}: residual {residual} (t = {t})");
        ensure!((-1e-7..=1.0 + 1e-7).contains(&t), "optimum {i}: weight {t} outside [0, 1]");
    }
    Ok(())
}

fn criterion_4() -> Check {
    for (n, q1) in [(1usize, 0.5), (2, 1.0 / 3.0), (3, 0.4), (5, 0.9)] {
        let case = dihedral(n, q1).map_err(err)?;
        let (nf, q2) = (n as f64, 1.0 - q1);
        let expected = (nf * q1 + q2 + (nf * nf * q1 * q1 + q2 * q2).sqrt()) / (2.0 * nf);
        let post = p_post(&case.problem, &opts()).map_err(err)?;
        ensure!((post.value - expected).abs() <= 1e-7, "({n}, {q1}): p_post {} vs {expected}", post.value);
        let pg = solve(case.problem.ensemble(), &opts()).map_err(err)?.value;
        let pg_expected = q1.max(q2 / nf);
        ensure!((pg - pg_expected).abs() <= 1e-7, "({n}, {q1}): p_guess {pg} vs {pg_expected}");
        ensure!(post.unique == Uniqueness::No, "({n}, {q1}): uniqueness {:?}", post.unique);
        ensure!(case.uniqueness == Uniqueness::No, "({n}, {q1}): gallery uniqueness");
    }
    Ok(())
}

fn criterion_5() -> Check {
    let third = 1.0 / 3.0;
    for q in [[third; 3], [0.5, 0.3, 0.2], [0.98, 0.01, 0.01], [0.1, 0.45, 0.45], [0.25, 0.6, 0.15]] {
        let case = three_axes(q).map_err(err)?;
        let expected = 0.5 * (1.0 + q.iter().map(|x| x * x).sum::<f64>().sqrt());
        let v = p_post(&case.problem, &opts()).map_err(err)?.value;
        ensure!((v - expected).abs() <= 1e-7, "{q:?}: p_post {v} vs {expected}");
    }
    let case = three_axes([third; 3]).map_err(err)?;
    let v = p_post(&case.problem, &opts()).map_err(err)?.value;
    let bound = post_lower_bound_jmd(&case.problem, 1.0 / 3f64.sqrt(), &opts()).map_err(err)?;
    ensure!((v - bound).abs() <= 1e-6, "equal weights: p_post {v} vs bound {bound}");
    Ok(())
}

fn criterion_6() -> Check {
    for d in 2..=7usize {
        for q_phi in [0.5, 0.7] {
            let case = fourier_mub(d, q_phi).map_err(err)?;
            let q_psi = 1.0 - q_phi;
            let df = d as f64;
            let sd = df.sqrt();
            let diff = q_phi - q_psi;
            let root = (diff * diff + 4.0 * q_phi * q_psi / df).sqrt();
            let expected = 0.5 * (1.0 + root);
            let post = p_post(&case.problem, &opts()).map_err(err)?;
            ensure!((post.value - expected).abs() <= 1e-7, "d {d} q {q_phi}: p_post {} vs {expected}", post.value);

            let param = |k: &str| case.param(k).ok_or(format!("missing parameter {k}"));
            let (alpha, beta) = (param("alpha")?, param("beta")?);
            ensure!(alpha > 0.0 && beta > 0.0, "d {d} q {q_phi}: non-positive ({alpha}, {beta})");
            let ellipse = alpha * alpha + beta * beta + 2.0 * alpha * beta / sd - 1.0;
            let ratio = alpha / beta - sd / (2.0 * q_psi) * (diff + root);
            ensure!(ellipse.abs() <= 1e-10, "d {d} q {q_phi}: normalization residual {ellipse}");
            ensure!(ratio.abs() <= 1e-10, "d {d} q {q_phi}: ratio residual {ratio}");

            let aux = auxiliary_ensemble(&case.problem).map_err(err)?;
            let c0 = case.measurement("c0").ok_or("missing c0")?;
            ensure!(is_optimal_measurement(&aux.ensemble, c0, 1e-9).map_err(err)?, "d {d} q {q_phi}: c0 not optimal");

            let t_phi = alpha * alpha + 2.0 * alpha * beta / sd;
            let t_psi = beta * beta + 2.0 * alpha * beta / sd;
            let lhs = t_phi * t_phi + t_psi * t_psi + 2.0 * (df - 2.0) / df * (1.0 - t_phi) * (1.0 - t_psi);
            ensure!((lhs - 1.0).abs() <= 1e-9, "d {d} q {q_phi}: boundary residual {}", lhs - 1.0);

            let want = if d % 2 == 1 { Uniqueness::Yes } else { Uniqueness::No };
            ensure!(post.unique == want, "d {d} q {q_phi}: uniqueness {:?}", post.unique);
        }
    }
    Ok(())
}

fn axis(k: usize) -> [f64; 3] {
    let mut v = [0.0; 3];
    v[k] = 1.0;
    v
}

fn sharp(k: usize) -> Measurement {
    let v = axis(k);
    Measurement::new(
        2,
        [
            (Label::atom(format!("+e{}", k + 1)), bloch_operator(1.0, v)),
            (Label::atom(format!("-e{}", k + 1)), bloch_operator(1.0, v.map(|c| -c))),
        ],
    )
    .expect("sharp qubit measurement")
}

fn criterion_7() -> Check {
    let pair = jmd(&[sharp(0), sharp(1)], NoiseSearch::Uniform, 1e-4).map_err(err)?;
    ensure!((pair.midpoint() - FRAC_1_SQRT_2).abs() <= 2e-4, "pair: {pair:?}");
    let triple = jmd(&[sharp(0), sharp(1), sharp(2)], NoiseSearch::Uniform, 1e-4).map_err(err)?;
    ensure!((triple.midpoint() - 1.0 / 3f64.sqrt()).abs() <= 2e-4, "triple: {triple:?}");

    let ns = [sharp(0), sharp(1), sharp(2)];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut witnesses = 0;
    for _ in 0..8 {
        let t = rng.gen_range(0.2..0.5);
        let nus: Vec<Vec<f64>> = (0..3)
            .map(|_| {
                let p = rng.gen_range(0.1..0.9);
                vec![p, 1.0 - p]
            })
            .collect();
        let biased = NoiseModel {
            kind: NoiseKind::Distribution(nus),
            t: vec![t; 3],
        }
        .apply(&ns)
        .map_err(err)?;
        let Some(c) = jointly_measurable(&biased, 1e-10).map_err(err)?.witness().cloned() else {
            continue;
        };
        witnesses += 1;
        let sym = qubit_symmetrize(&c).map_err(err)?;
        ensure!(sym.normalization_defect() <= 1e-7, "symmetrized witness not normalized");
        for (_, op) in sym.iter() {
            ensure!(op.min_eigenvalue().map_err(err)? >= -1e-7, "symmetrized witness not positive");
        }
        let uniform = NoiseModel::uniform(vec![t; 3]).apply(&ns).map_err(err)?;
        for (l, target) in uniform.iter().enumerate() {
            let r = marginal(&sym, l).map_err(err)?.max_abs_diff(target).ok_or("outcome mismatch")?;
            ensure!(r <= 1e-7, "t {t}: marginal {l} residual {r}");
        }
    }
    ensure!(witnesses >= 4, "only {witnesses} biased witnesses found");
    Ok(())
}

fn diagonal_problem() -> PostInfoProblem {
    let e = StateEnsemble::from_pairs(
        2,
        [
            ("a0".into(), HermitianOperator::from_real_diagonal(&[0.3, 0.0])),
            ("a1".into(), HermitianOperator::from_real_diagonal(&[0.0, 0.2])),
            ("b0".into(), HermitianOperator::from_real_diagonal(&[0.15, 0.05])),
            ("b1".into(), HermitianOperator::from_real_diagonal(&[0.05, 0.25])),
        ],
    )
    .expect("diagonal ensemble");
    let p = Partition::new(vec![vec!["a0".into(), "a1".into()], vec!["b0".into(), "b1".into()]]).expect("partition");
    PostInfoProblem::new(e, p).expect("problem")
}

fn random_problem(rng: &mut ChaCha8Rng) -> Result<PostInfoProblem, Error> {
    let dim = rng.gen_range(1..=3);
    let n = rng.gen_range(2..=5);
    let e = random_ensemble(dim, n, rng)?;
    let labels: Vec<Label> = e.labels().cloned().collect();
    let cut = rng.gen_range(1..n);
    let p = Partition::new(vec![labels[..cut].to_vec(), labels[cut..].to_vec()])?;
    PostInfoProblem::new(e, p)
}

fn criterion_8() -> Check {
    let r = compatibility_gap(&diagonal_problem(), &opts()).map_err(err)?;
    ensure!(r.verdict == Verdict::CompatibleOptimaExist, "diagonal problem: {:?} (gap {})", r.verdict, r.gap);
    let case = two_bases(FRAC_PI_2, 0.5).map_err(err)?;
    let r = compatibility_gap(&case.problem, &opts()).map_err(err)?;
    ensure!(r.verdict == Verdict::IncompatibleOptima, "two bases: {:?} (gap {})", r.verdict, r.gap);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..50 {
        let prob = random_problem(&mut rng).map_err(err)?;
        let r = compatibility_gap(&prob, &opts()).map_err(err)?;
        ensure!(r.gap >= -1e-8, "random problem {i}: gap {}", r.gap);
    }
    Ok(())
}

fn criterion_9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut closed_checked = 0;
    for i in 0..100 {
        let dim = rng.gen_range(1..=4);
        let n = rng.gen_range(1..=6);
        let e = random_ensemble(dim, n, &mut rng).map_err(err)?;
        let numeric = solve_numeric(&e, &opts()).map_err(err)?;
        ensure!(numeric.certificate_gap <= 1e-7, "ensemble {i}: certificate gap {}", numeric.certificate_gap);
        match solve_closed_form(&e, 1e-9) {
            Ok(closed) => {
                closed_checked += 1;
                ensure!(
                    (closed.value - numeric.value).abs() <= 1e-6,
                    "ensemble {i}: closed {} vs numeric {}",
                    closed.value,
                    numeric.value
                );
            }
            Err(Error::NotApplicable(_)) => {}
            Err(e) => return Err(format!("ensemble {i}: {e}")),
        }
    }
    ensure!(closed_checked > 0, "closed form never applied");

    for i in 0..1000 {
        let dim = rng.gen_range(1..=4);
        let a = random_density(dim, &mut rng).scale(rng.gen_range(0.1..3.0));
        let top = largest_eigenpair(&a, 1e-8).map_err(err)?;
        let b = if i % 2 == 0 {
            random_effect(dim, &mut rng)
        } else {
            top.projector.scale(rng.gen_range(0.0..1.0))
        };
        let lhs = a.trace_with(&b);
        let rhs = top.value * b.trace();
        ensure!(lhs <= rhs + 1e-10, "pair {i}: {lhs} > {rhs}");
        if (lhs - rhs).abs() <= 1e-8 {
            let slack = top.projector.sub(&b).min_eigenvalue().map_err(err)?;
            ensure!(slack >= -1e-8, "pair {i}: equality without B below the top projection ({slack})");
        } else {
            ensure!(i % 2 == 0, "pair {i}: constructed B misses equality");
        }
    }
    Ok(())
}

fn criterion_10() -> Check {
    let case = appendix_a_case().map_err(err)?;
    let e = case.problem.ensemble();
    for key in ["m0", "m1"] {
        let m = case.measurement(key).ok_or(format!("missing {key}"))?;
        ensure!(m.normalization_defect() <= 1e-10, "{key}: not normalized");
        for (x, op) in m.iter() {
            ensure!(op.min_eigenvalue().map_err(err)? >= -1e-10, "{key}({x}) not positive");
        }
        let v = guess_prob(e, m).map_err(err)?;
        ensure!((v - 0.5).abs() <= 1e-10, "{key}: value {v}");
    }
    let r = solve_closed_form(e, 1e-9).map_err(err)?;
    ensure!((r.value - 0.5).abs() <= 1e-10, "closed form value {}", r.value);
    ensure!(r.unique == Uniqueness::Unknown, "uniqueness {:?}", r.unique);
    ensure!(case.uniqueness == Uniqueness::Unknown, "gallery uniqueness {:?}", case.uniqueness);
    Ok(())
}

fn all_gallery_cases() -> Result<Vec<GalleryCase>, Error> {
    let mut cases = Vec::new();
    for theta in [0.2, FRAC_PI_4, FRAC_PI_2, 2.0, 2.9] {
        cases.push(two_bases(theta, 0.5)?);
    }
    cases.push(two_bases(1.1, 0.3)?);
    for (n, q1) in [(1, 0.5), (2, 1.0 / 3.0), (3, 0.4), (5, 0.9)] {
        cases.push(dihedral(n, q1)?);
    }
    for q in [[1.0 / 3.0; 3], [0.5, 0.3, 0.2]] {
        cases.push(three_axes(q)?);
    }
    for (d, q) in [(2, 0.5), (3, 0.5), (3, 0.7), (4, 0.7)] {
        cases.push(fourier_mub(d, q)?);
    }
    cases.push(appendix_a_case()?);
    Ok(cases)
}

fn criterion_11() -> Check {
    for case in all_gallery_cases().map_err(err)? {
        let name = format!("{} {:?}", case.name, case.params);
        let prob = &case.problem;
        let standard = solve(prob.ensemble(), &opts()).map_err(err)?.value;
        let post = p_post(prob, &opts()).map_err(err)?.value;
        let prior = p_prior(prob, &opts()).map_err(err)?;
        ensure!(standard <= post + 1e-7, "{name}: p_guess {standard} > p_post {post}");
        ensure!(post <= prior + 1e-7, "{name}: p_post {post} > p_prior {prior}");
        match cloning_bound(prob, &opts()) {
            Ok(b) => ensure!(b <= post + 1e-7, "{name}: cloning bound {b} > p_post {post}"),
            Err(Error::NonUniformPrior { .. }) => {}
            Err(e) => return Err(format!("{name}: {e}")),
        }
        let blocks: Vec<Measurement> = prob
            .subensembles()
            .map_err(err)?
            .iter()
            .map(|(_, sub)| solve(sub, &opts()).map(|r| r.measurement))
            .collect::<Result<_, _>>()
            .map_err(err)?;
        let estimate = jmd(&blocks, NoiseSearch::Uniform, 1e-4).map_err(err)?;
        let b = post_lower_bound_jmd(prob, estimate.lower, &opts()).map_err(err)?;
        ensure!(b <= post + 1e-7, "{name}: jmd bound {b} > p_post {post}");
        if let Some(j) = case.reference(pgdiscrim::gallery::JMD) {
            let b = post_lower_bound_jmd(prob, j, &opts()).map_err(err)?;
            ensure!(b <= post + 1e-7, "{name}: reference jmd bound {b} > p_post {post}");
        }
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 11] = [
        ("two-bases family values", criterion_1),
        ("two-bases sweep against the jmd bound", criterion_2),
        ("two-bases optimal measurement regimes", criterion_3),
        ("dihedral family", criterion_4),
        ("three-axes family", criterion_5),
        ("Fourier MUB family", criterion_6),
        ("joint measurability degrees and symmetrization", criterion_7),
        ("compatibility gap verdicts", criterion_8),
        ("closed form, numeric solver and top-eigenvalue inequality", criterion_9),
        ("rank-2 counterexample", criterion_10),
        ("sandwich inequalities and lower bounds on the gallery", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS {:>2} {name} ({secs:.2}s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
