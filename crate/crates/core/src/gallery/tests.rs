use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use super::*;
use crate::discrimination::{guess_prob, is_optimal_measurement, solve_closed_form, SolveOptions};
use crate::linalg::CMatrix;
use crate::post_info::{auxiliary_ensemble, p_post, p_post_with, p_prior};

fn opts() -> SolveOptions {
    SolveOptions::default()
}

fn check_values(case: &GalleryCase) {
    let post = p_post(&case.problem, &opts()).unwrap();
    assert!((post.value - case.reference(P_POST).unwrap()).abs() < 1e-7, "{}", case.name);
    let prior = p_prior(&case.problem, &opts()).unwrap();
    assert!((prior - case.reference(P_PRIOR).unwrap()).abs() < 1e-9, "{}", case.name);
    for (name, m) in &case.reference_measurements {
        assert!(m.normalization_defect() < 1e-9, "{name}");
    }
}

#[test]
fn two_bases_values_and_regimes() {
    for theta in [0.2, FRAC_PI_4, FRAC_PI_2, 2.0, 2.9] {
        let case = two_bases(theta, 0.5).unwrap();
        check_values(&case);
        let expected = 0.5 * (1.0 + ((1.0 + theta.cos().abs()) / 2.0).sqrt());
        assert!((case.reference(P_POST).unwrap() - expected).abs() < 1e-15);
        let aux = auxiliary_ensemble(&case.problem).unwrap();
        for (name, m) in &case.reference_measurements {
            assert!(is_optimal_measurement(&aux.ensemble, m, 1e-9).unwrap(), "{theta} {name}");
            assert!((p_post_with(&case.problem, m).unwrap() - expected).abs() < 1e-12);
        }
        let cf = solve_closed_form(&aux.ensemble, 1e-9).unwrap();
        assert_eq!(cf.unique, case.uniqueness, "theta {theta}");
    }
    let c = two_bases(FRAC_PI_2, 0.5).unwrap();
    assert!((c.reference(P_POST).unwrap() - 0.5 * (1.0 + 0.5f64.sqrt())).abs() < 1e-15);
    let (a, b) = (two_bases(0.7, 0.5).unwrap(), two_bases(PI - 0.7, 0.5).unwrap());
    assert!((a.reference(P_POST).unwrap() - b.reference(P_POST).unwrap()).abs() < 1e-15);
}

#[test]
fn two_bases_boundary_c0_is_midpoint() {
    let case = two_bases(FRAC_PI_2, 0.5).unwrap();
    let (t, res) = convex_decomposition(
        case.measurement("c0").unwrap(),
        case.measurement("c_plus").unwrap(),
        case.measurement("c_minus").unwrap(),
    )
    .unwrap();
    assert!((t - 0.5).abs() < 1e-12 && res < 1e-12);
}

#[test]
fn two_bases_general_weight() {
    let case = two_bases(1.1, 0.3).unwrap();
    check_values(&case);
}

#[test]
fn two_bases_rejects_bad_angles() {
    for theta in [0.0, PI, -1.0, f64::NAN] {
        assert!(matches!(two_bases(theta, 0.5), Err(Error::BadAngle(_))));
    }
}

#[test]
fn dihedral_values() {
    for (n, q1) in [(1, 0.5), (2, 1.0 / 3.0), (3, 0.4), (5, 0.9)] {
        let case = dihedral(n, q1).unwrap();
        check_values(&case);
        let aux = auxiliary_ensemble(&case.problem).unwrap();
        assert_eq!(solve_closed_form(&aux.ensemble, 1e-9).unwrap().unique, Uniqueness::No);
    }
    assert!((dihedral(1, 0.5).unwrap().reference(P_POST).unwrap() - (2.0 + 2f64.sqrt()) / 4.0).abs() < 1e-15);
    assert!((dihedral(2, 1.0 / 3.0).unwrap().reference(P_POST).unwrap() - 0.569036).abs() < 1e-6);
    // switch of the standard optimum at q1 = 1/(n+1)
    let n = 3;
    let at = 1.0 / (n as f64 + 1.0);
    for q1 in [at - 0.01, at + 0.01] {
        let case = dihedral(n, q1).unwrap();
        let expected = if q1 > at { q1 } else { (1.0 - q1) / n as f64 };
        assert!((case.reference(P_GUESS).unwrap() - expected).abs() < 1e-15);
    }
    assert!(dihedral(0, 0.5).is_err());
    assert!(dihedral(2, 1.0).is_err());
}

#[test]
fn dihedral_family_validator() {
    let n = 2;
    let case = dihedral(n, 0.3).unwrap();
    let constant = vec![1.0 / (2.0 * n as f64); 4 * n];
    assert!(dihedral_alpha_admissible(n, &constant, 1e-12));
    assert!(case.family_member(&constant).is_ok());
    // mass on antipodal pairs k and k+n in each row
    let mut alt = vec![0.0; 4 * n];
    alt[0] = 0.5;
    alt[2] = 0.5;
    alt[2 * n + 1] = 0.5;
    alt[2 * n + 3] = 0.5;
    assert!(dihedral_alpha_admissible(n, &alt, 1e-12));
    let m = case.family_member(&alt).unwrap();
    let aux = auxiliary_ensemble(&case.problem).unwrap();
    assert!(is_optimal_measurement(&aux.ensemble, &m, 1e-9).unwrap());
    let mut bad = alt.clone();
    bad[0] = 1.0;
    bad[2] = 0.0;
    assert!(!dihedral_alpha_admissible(n, &bad, 1e-12));
    assert!(case.family_member(&bad).is_err());
}

#[test]
fn three_axes_values() {
    let third = 1.0 / 3.0;
    for q in [[third; 3], [0.5, 0.3, 0.2], [0.98, 0.01, 0.01], [0.2, 0.5, 0.3]] {
        let case = three_axes(q).unwrap();
        check_values(&case);
    }
    let eq = three_axes([third; 3]).unwrap();
    assert!((eq.reference(P_POST).unwrap() - 0.788675).abs() < 1e-6);
    let skew = three_axes([0.98, 0.01, 0.01]).unwrap();
    assert!((skew.reference(P_POST).unwrap() - 0.5 * (1.0 + 0.980102)).abs() < 1e-6);
    assert!(matches!(three_axes([1.0, 0.0, 0.0]), Err(Error::BadWeights(_))));
    assert!(matches!(three_axes([0.5, 0.5, 0.5]), Err(Error::BadWeights(_))));
}

#[test]
fn three_axes_diagonal_solution() {
    let case = three_axes([0.5, 0.3, 0.2]).unwrap();
    let aux = auxiliary_ensemble(&case.problem).unwrap();
    for key in ["c0", "c_diag"] {
        let m = case.measurement(key).unwrap();
        assert!(is_optimal_measurement(&aux.ensemble, m, 1e-9).unwrap(), "{key}");
    }
    let mut diag = vec![0.0; 8];
    diag[0] = 1.0;
    diag[7] = 1.0;
    assert!(three_axes_alpha_admissible(&diag, 1e-12));
    assert!(three_axes_alpha_admissible(&[0.25; 8], 1e-12));
    let mut bad = diag.clone();
    bad[1] = 0.5;
    assert!(!three_axes_alpha_admissible(&bad, 1e-12));
    let m = case.family_member(&diag).unwrap();
    assert!(m.max_abs_diff(case.measurement("c_diag").unwrap()).unwrap() < 1e-15);
}

#[test]
fn alpha_beta_solution() {
    for d in 2..=7 {
        for q in [0.5, 0.7, 0.1] {
            let (a, b) = solve_alpha_beta(d, q, 1.0 - q);
            let sd = (d as f64).sqrt();
            assert!(a > 0.0 && b > 0.0);
            assert!((a * a + b * b + 2.0 * a * b / sd - 1.0).abs() <= 1e-12);
            let diff = 2.0 * q - 1.0;
            let ratio = sd / (2.0 * (1.0 - q)) * (diff + (diff * diff + 4.0 * q * (1.0 - q) / d as f64).sqrt());
            assert!((a / b - ratio).abs() <= 1e-12 * ratio.max(1.0));
        }
        let (a, b) = solve_alpha_beta(d, 0.5, 0.5);
        let sd = (d as f64).sqrt();
        let sym = (sd / (2.0 * (sd + 1.0))).sqrt();
        assert!((a - sym).abs() < 1e-14 && (b - sym).abs() < 1e-14);
    }
    let (a, b) = solve_alpha_beta(2, 0.5, 0.5);
    assert!((a * a + 2.0 * a * b / 2f64.sqrt() - 0.5f64.sqrt()).abs() < 1e-14);
}

#[test]
fn boundary_criterion() {
    for d in 2..=7 {
        for q in [0.5, 0.7] {
            let case = fourier_mub(d, q).unwrap();
            let (tp, ts) = (case.param("t_phi").unwrap(), case.param("t_psi").unwrap());
            assert!((mub_ellipse_lhs(d, tp, ts) - 1.0).abs() <= 1e-9);
            assert!(mub_compat_boundary_check(d, tp, ts));
            assert!(!mub_compat_boundary_check(d, tp + 1e-4, ts + 1e-4));
        }
        assert!(mub_compat_boundary_check(d, 0.3, 0.3));
        assert!(!mub_compat_boundary_check(d, 1.0, 1.0));
    }
}

#[test]
fn mub_values_and_uniqueness() {
    for d in 2..=5 {
        for q in [0.5, 0.7] {
            let case = fourier_mub(d, q).unwrap();
            check_values(&case);
            let aux = auxiliary_ensemble(&case.problem).unwrap();
            let c0 = case.measurement("c0").unwrap();
            assert!(is_optimal_measurement(&aux.ensemble, c0, 1e-9).unwrap());
            let cf = solve_closed_form(&aux.ensemble, 1e-9).unwrap();
            assert_eq!(cf.unique, case.uniqueness, "d={d}");
            assert_eq!(case.uniqueness == Uniqueness::Yes, d % 2 == 1);
        }
    }
    let five = fourier_mub(5, 0.5).unwrap();
    assert!((five.reference(P_POST).unwrap() - 0.723607).abs() < 1e-6);
    let four = fourier_mub(4, 0.7).unwrap();
    assert!((four.reference(P_POST).unwrap() - 0.804138).abs() < 1e-6);
    assert!(fourier_mub(1, 0.5).is_err());
}

#[test]
fn mub_marginals_are_uniform_noise() {
    let case = fourier_mub(3, 0.7).unwrap();
    let c0 = case.measurement("c0").unwrap();
    let (tp, ts) = (case.param("t_phi").unwrap(), case.param("t_psi").unwrap());
    for (l, t) in [(0, tp), (1, ts)] {
        let m = crate::measurement::marginal(c0, l).unwrap();
        let (_, sub) = crate::ensemble::subensemble(case.problem.ensemble(), case.problem.partition(), l).unwrap();
        for (x, op) in m.iter() {
            let sharp = sub.get(x).unwrap().scale(3.0);
            let expected = sharp.scale(t).add(&HermitianOperator::identity(3).scale((1.0 - t) / 3.0));
            assert!(op.max_abs_diff(&expected) < 1e-12);
        }
    }
}

#[test]
fn weyl_relations() {
    for d in 2..=7 {
        let om = |k: usize| Complex64::from_polar(1.0, 2.0 * PI * (k % d) as f64 / d as f64);
        for (r1, s1, r2, s2) in [(0, 1, 1, 0), (1, 2, 3, 1), (d - 1, d - 1, 2, 3)] {
            let lhs = weyl(d, r1 % d, s1 % d).matmul(&weyl(d, r2 % d, s2 % d));
            let rhs = weyl(d, (r1 + r2) % d, (s1 + s2) % d).scale_complex(om((s1 % d) * (r2 % d)));
            assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }
        let psi = psi_basis(d);
        let sd = (d as f64).sqrt();
        for h in 0..d {
            let mut sum = vec![Complex64::new(0.0, 0.0); d];
            for (k, v) in psi.iter().enumerate() {
                let ph = om(d * d - (h * k) % d);
                for (s, c) in sum.iter_mut().zip(v) {
                    *s += ph * c;
                }
            }
            for (j, s) in sum.iter().enumerate() {
                let e = if j == h { sd } else { 0.0 };
                assert!((s - Complex64::new(e, 0.0)).norm() < 1e-11);
            }
        }
        let u = weyl(d, 1, 2);
        assert!(u.matmul(&u.adjoint()).max_abs_diff(&CMatrix::identity(d)) < 1e-12);
    }
}

#[test]
fn auxiliary_covariance() {
    let d = 4;
    let case = fourier_mub(d, 0.7).unwrap();
    let aux = auxiliary_ensemble(&case.problem).unwrap();
    let key = |h: usize, k: usize| Label::tuple([Label::atom(format!("{h}phi")), Label::atom(format!("{k}psi"))]);
    for (r, s) in [(1, 0), (0, 1), (2, 3)] {
        let w = weyl(d, r, s);
        for (h, k) in [(0, 0), (1, 2), (3, 3)] {
            let lhs = aux.ensemble.get(&key(h, k)).unwrap().conjugate_by(&w);
            let rhs = aux.ensemble.get(&key((h + r) % d, (k + s) % d)).unwrap();
            assert!(lhs.max_abs_diff(rhs) < 1e-11);
        }
    }
}

#[test]
fn mub_two_matches_two_bases_at_right_angle() {
    let mub = fourier_mub(2, 0.5).unwrap();
    let tb = two_bases(FRAC_PI_2, 0.5).unwrap();
    assert!((mub.reference(P_POST).unwrap() - tb.reference(P_POST).unwrap()).abs() < 1e-15);
    assert!((mub.param("t_phi").unwrap() - 0.5f64.sqrt()).abs() < 1e-14);
}

#[test]
fn appendix_a() {
    let case = appendix_a_case().unwrap();
    let e = case.problem.ensemble();
    for key in ["m0", "m1"] {
        let m = case.measurement(key).unwrap();
        assert!(m.normalization_defect() < 1e-12);
        assert!((guess_prob(e, m).unwrap() - 0.5).abs() < 1e-12);
    }
    let cf = solve_closed_form(e, 1e-9).unwrap();
    assert!((cf.value - 0.5).abs() < 1e-12);
    assert_eq!(cf.unique, Uniqueness::Unknown);
    assert_eq!(case.uniqueness, Uniqueness::Unknown);
}

#[test]
fn appendix_a_m1_differs_and_sits_below_projectors() {
    let case = appendix_a_case().unwrap();
    let m0 = case.measurement("m0").unwrap();
    let m1 = case.measurement("m1").unwrap();
    assert!(m0.max_abs_diff(m1).unwrap() > 0.1);
    assert!(is_optimal_measurement(case.problem.ensemble(), m1, 1e-9).unwrap());
}
