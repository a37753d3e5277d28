use std::f64::consts::{FRAC_PI_2, PI};

use approx::assert_abs_diff_eq;
use cocycle_lab::projective::{circle_dist, h, involution, phi, phi_deriv, reduce_half_open};
use cocycle_lab::random::SeededSource;
use cocycle_lab::sl2::{log_avg_norm, operator_norm, rotation, spectral_radius_log, svd2, Mat2};
use cocycle_lab::words::{
    branch_deriv_sum, branch_solve, branch_table, elliptic_measure_by_branches,
    elliptic_measure_by_rho, phi_word_jet, rho_theta, word_product, MatrixWord,
};
use cocycle_lab::ProjPoint;
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = Mat2> {
    any::<u64>().prop_map(|seed| SeededSource::new(seed).matrix())
}

fn word(max_len: usize) -> impl Strategy<Value = MatrixWord> {
    (any::<u64>(), 1..=max_len).prop_map(|(seed, n)| SeededSource::new(seed).word(n))
}

fn angle() -> impl Strategy<Value = f64> {
    0.0..PI
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn svd_reconstructs(a in matrix()) {
        let s = svd2(&a);
        let back = s.s_factor * Mat2::diag(s.sigma).unwrap() * s.r_factor;
        prop_assert!(back.max_abs_diff(&a) <= 1e-12 * s.sigma.max(1.0));
        prop_assert!(s.sigma >= 1.0);
    }

    #[test]
    fn spectral_radius_bounded_by_norm(a in matrix()) {
        prop_assert!(spectral_radius_log(&a) <= operator_norm(&a).ln() + 1e-12);
        prop_assert!(spectral_radius_log(&a) >= 0.0);
    }

    #[test]
    fn invariants_under_conjugation(a in matrix(), t in angle()) {
        let r = rotation(t).unwrap();
        let conj = r * a * r.transpose();
        prop_assert!((spectral_radius_log(&conj) - spectral_radius_log(&a)).abs() <= 1e-10);
        prop_assert!((log_avg_norm(&conj) - log_avg_norm(&a)).abs() <= 1e-10);
    }

    #[test]
    fn rotation_group_law(s in -10.0..10.0f64, t in -10.0..10.0f64) {
        let lhs = rotation(s).unwrap() * rotation(t).unwrap();
        prop_assert!(lhs.max_abs_diff(&rotation(s + t).unwrap()) <= 1e-12);
    }

    #[test]
    fn eigenvector_at_branch_points(w in word(4), p in angle()) {
        let p = ProjPoint::new(p);
        let sol = branch_solve(&w, p).unwrap();
        prop_assert_eq!(sol.thetas.len(), w.len());
        for &theta in &sol.thetas {
            let image = phi(&word_product(&w, theta), p);
            prop_assert!(image.dist(p) <= 1e-9, "theta {theta}: {} vs {}", image, p);
        }
    }

    #[test]
    fn rho_at_branch_points_is_abs_log_stretch(w in word(4), p in angle()) {
        let p = ProjPoint::new(p);
        for &theta in &branch_solve(&w, p).unwrap().thetas {
            let u = word_product(&w, theta).apply(p.unit_vector());
            let stretch = u[0].hypot(u[1]).ln();
            prop_assert!((rho_theta(&w, theta) - stretch.abs()).abs() <= 1e-8);
        }
    }

    #[test]
    fn branch_signs_agree(w in word(4), p in angle()) {
        let p = ProjPoint::new(p);
        let sol = branch_solve(&w, p).unwrap();
        for (i, &theta) in sol.thetas.iter().enumerate() {
            let u = word_product(&w, theta).apply(p.unit_vector());
            let n2 = u[0] * u[0] + u[1] * u[1];
            let (hd, gap, lg) = (sol.derivs[i], 1.0 - n2.recip(), 0.5 * n2.ln());
            prop_assert!(hd * gap >= -1e-12 && hd * lg >= -1e-12 && gap * lg >= -1e-12);
        }
    }

    #[test]
    fn jet_matches_finite_differences(w in word(4), t in -FRAC_PI_2..FRAC_PI_2, p in 0.1..3.0f64) {
        let step = 1e-6;
        let pp = ProjPoint::new(p);
        let jet = phi_word_jet(&w, t, pp);
        let at = |t: f64, p: f64| phi_word_jet(&w, t, ProjPoint::new(p)).value.angle();
        let fd_t = reduce_half_open(at(t + step, p) - at(t - step, p)) / (2.0 * step);
        let fd_p = reduce_half_open(at(t, p + step) - at(t, p - step)) / (2.0 * step);
        let scale = 1.0 + jet.d_theta.abs();
        prop_assert!((fd_t - jet.d_theta).abs() <= 1e-4 * scale * scale, "{fd_t} {}", jet.d_theta);
        prop_assert!((fd_p - jet.d_p).abs() <= 1e-4 * scale * scale, "{fd_p} {}", jet.d_p);
    }

    #[test]
    fn branch_sum_against_involution_fd(w in word(3), p in 0.1..3.0f64) {
        let last = w.letters()[w.len() - 1];
        prop_assume!(operator_norm(&last) > 1.01);
        let step = 1e-5 / operator_norm(&last).powi(2);
        let psi = |x: f64| involution(&last, ProjPoint::new(x)).unwrap().angle();
        let fd = reduce_half_open(psi(p + step) - psi(p - step)) / (2.0 * step);
        let sum = branch_deriv_sum(&w, ProjPoint::new(p)).unwrap();
        prop_assert!((sum - (1.0 + fd)).abs() <= 1e-6, "{sum} vs {}", 1.0 + fd);
    }

    #[test]
    fn involution_swaps_preimages_of_h(a in matrix(), p in angle()) {
        prop_assume!(operator_norm(&a) > 1.01);
        let p = ProjPoint::new(p);
        let q = involution(&a, p).unwrap();
        prop_assert!(circle_dist(h(&a, q), h(&a, p)) <= 1e-9);
        let deriv_sum = (1.0 - phi_deriv(&a, p)) + (1.0 - phi_deriv(&a, q));
        prop_assert!(deriv_sum.is_finite());
    }
}

/// Dense scan of `theta` for sign changes of `Phi(theta, p) - p`; every
/// crossing must be one of the solver's roots.
#[test]
fn dense_scan_finds_the_same_roots() {
    let mut src = SeededSource::new(31);
    let scan = 100_000;
    for _ in 0..5 {
        let w = src.word(3);
        let p = src.point();
        let roots = branch_solve(&w, p).unwrap().thetas;
        let g = |t: f64| reduce_half_open(phi_word_jet(&w, t, p).value.angle() - p.angle());
        let mut crossings = Vec::new();
        let step = PI / scan as f64;
        let mut prev = g(-FRAC_PI_2);
        for i in 1..=scan {
            let t = -FRAC_PI_2 + i as f64 * step;
            let cur = g(t);
            // a genuine crossing, not the wrap from +pi/2 to -pi/2
            if prev < 0.0 && cur >= 0.0 && (cur - prev) < 1.0 {
                crossings.push(t);
            }
            prev = cur;
        }
        assert_eq!(crossings.len(), roots.len(), "{crossings:?} vs {roots:?}");
        for (c, r) in crossings.iter().zip(&roots) {
            assert!((c - r).abs() <= 2.0 * step, "{c} vs {r}");
        }
    }
}

#[test]
fn zero_set_of_rho_matches_branch_ranges() {
    let mut src = SeededSource::new(32);
    for _ in 0..3 {
        let w = src.word(2);
        let table = branch_table(&w, 512).unwrap();
        let by_rho = elliptic_measure_by_rho(&w, 4096);
        let by_branch = elliptic_measure_by_branches(&w, &table).unwrap();
        assert!(
            (by_rho - by_branch).abs() <= 2.0 / 512.0,
            "{by_rho} vs {by_branch}"
        );
    }
}

#[test]
fn elliptic_estimators_agree_for_random_pairs() {
    let mut src = SeededSource::new(33);
    let p_nodes = 128;
    for _ in 0..10 {
        let w = src.word(2);
        let table = branch_table(&w, p_nodes).unwrap();
        let a = elliptic_measure_by_rho(&w, 4096);
        let b = elliptic_measure_by_branches(&w, &table).unwrap();
        assert!((a - b).abs() <= 2.0 / p_nodes as f64, "{a} vs {b}");
    }
}

#[test]
fn single_hyperbolic_letter_range_width() {
    let a = Mat2::diag(2.0).unwrap();
    let w = MatrixWord::single(a);
    let table = branch_table(&w, 256).unwrap();
    let by_branch = elliptic_measure_by_branches(&w, &table).unwrap();
    // h ranges over [-atan(3/4), atan(3/4)] for diag(2, 1/2); the traced
    // ranges miss the extremes by O(grid step^2).
    let exact = 1.0 - 2.0 * 0.75f64.atan() / PI;
    assert_abs_diff_eq!(by_branch, exact, epsilon = 1e-4);
    assert_abs_diff_eq!(
        elliptic_measure_by_rho(&w, 1 << 14),
        by_branch,
        epsilon = 2.0 / 256.0
    );
}
