//! Matrix words and the eigen-angle branch functions of `theta -> R_theta A`.
//!
//! For a word `(A_1, ..., A_n)` the product is
//! `R_theta A = (R_theta A_1)(R_theta A_2)...(R_theta A_n)`, and
//! `Phi(theta, p)` is the action of that product on `p`. For fixed `p`,
//! `theta -> Phi(theta, p)` is an expanding circle map of degree `n`: its lift
//! `F` is strictly increasing with `F(theta + pi) = F(theta) + n pi`. Every
//! solver here inverts that lift by bisection followed by Newton steps.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::projective::{circle_dist, phi_deriv, phi_lift, reduce_half_open, ProjPoint};
use crate::quadrature::{periodic_trapezoid, try_periodic_trapezoid_vec, QuadResult};
use crate::sl2::{rotation_unchecked, spectral_radius_log, Mat2};

/// Default node count for the theta-average of the spectral radius.
pub const AVG_DEFAULT_NODES: usize = 1 << 16;
/// Default node count for the `J_k` integrals.
pub const J_DEFAULT_NODES: usize = 4096;

const BISECTION_WIDTH: f64 = 1e-6;
const MAX_NEWTON_STEPS: usize = 20;
const RESIDUAL_TOLERANCE: f64 = 1e-12;

/// An ordered, non-empty sequence of SL(2,R) matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixWord {
    letters: Vec<Mat2>,
}

impl MatrixWord {
    pub fn new(letters: Vec<Mat2>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidArgument(
                "a matrix word needs at least one letter".into(),
            ));
        }
        Ok(MatrixWord { letters })
    }

    pub fn single(m: Mat2) -> Self {
        MatrixWord { letters: vec![m] }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    /// Always false; words have at least one letter.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    #[inline]
    pub fn letters(&self) -> &[Mat2] {
        &self.letters
    }

    /// `A_k` with 1-based `k`.
    pub fn letter(&self, k: usize) -> Result<&Mat2> {
        if k == 0 || k > self.len() {
            return Err(Error::IndexOutOfRange {
                index: k,
                len: self.len(),
            });
        }
        Ok(&self.letters[k - 1])
    }

    pub fn concat(&self, other: &MatrixWord) -> MatrixWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        MatrixWord { letters }
    }

    /// `(A_{k+1}, ..., A_n, A_1, ..., A_k)` for `0 <= k <= n`.
    pub fn cyclic_shift(&self, k: usize) -> Result<MatrixWord> {
        if k > self.len() {
            return Err(Error::IndexOutOfRange {
                index: k,
                len: self.len(),
            });
        }
        let mut letters = self.letters.clone();
        letters.rotate_left(k % self.len());
        Ok(MatrixWord { letters })
    }
}

/// `(R_theta A_1)(R_theta A_2)...(R_theta A_n)`.
pub fn word_product(w: &MatrixWord, theta: f64) -> Mat2 {
    debug_assert!(theta.is_finite());
    let r = rotation_unchecked(theta);
    w.letters
        .iter()
        .fold(Mat2::IDENTITY, |acc, m| acc * (r * *m))
}

/// Value and first partials of `Phi(theta, p)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhiJet {
    pub value: ProjPoint,
    pub d_theta: f64,
    pub d_p: f64,
}

/// Lifted evaluation: `F(theta)` continuous in `theta` and `x`, starting from
/// the real `x` as the lift of `p`.
///
/// The innermost letter acts first: `x_{n+1} = x`,
/// `x_i = theta + lift_{A_i}(x_{i+1})`, `F = x_1`.
#[inline]
fn lift_jet(w: &MatrixWord, theta: f64, x: f64) -> (f64, f64, f64) {
    let mut pos = x;
    let mut d_theta = 0.0;
    let mut d_p = 1.0;
    for m in w.letters.iter().rev() {
        let slope = phi_deriv(m, ProjPoint::new(pos));
        pos = theta + phi_lift(m, pos);
        d_theta = 1.0 + slope * d_theta;
        d_p *= slope;
    }
    (pos, d_theta, d_p)
}

pub fn phi_word_jet(w: &MatrixWord, theta: f64, p: ProjPoint) -> PhiJet {
    let (value, d_theta, d_p) = lift_jet(w, theta, p.angle());
    PhiJet {
        value: ProjPoint::new(value),
        d_theta,
        d_p,
    }
}

/// One solution `theta` of `Phi(theta, p) = q`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Preimage {
    pub theta: f64,
    pub d_theta: f64,
    pub d_p: f64,
}

/// All `n` solutions of `Phi(theta, p) = q` in the window `(-pi/2, pi/2]`,
/// in increasing order.
pub fn preimages(w: &MatrixWord, p: ProjPoint, q: ProjPoint) -> Result<Vec<Preimage>> {
    let n = w.len();
    let x = p.angle();
    let lift = |theta: f64| lift_jet(w, theta, x);
    let lo_edge = -FRAC_PI_2;
    let hi_edge = FRAC_PI_2;
    let (f_lo, _, _) = lift(lo_edge);
    let first = ((f_lo - q.angle()) / PI).floor() + 1.0;

    let mut out = Vec::with_capacity(n);
    let mut lower = lo_edge;
    for j in 0..n {
        let target = q.angle() + (first + j as f64) * PI;
        let root = solve_monotone(&lift, target, lower, hi_edge)?;
        lower = root.theta;
        out.push(root);
    }
    Ok(out)
}

/// Solves `F(theta) = target` for increasing `F` on `[lo, hi]`.
fn solve_monotone<F>(lift: &F, target: f64, mut lo: f64, mut hi: f64) -> Result<Preimage>
where
    F: Fn(f64) -> (f64, f64, f64),
{
    // Rounding can leave the target a hair above F(hi); the root is then hi.
    let (f_hi, dt_hi, dp_hi) = lift(hi);
    if f_hi <= target {
        return Ok(Preimage {
            theta: hi,
            d_theta: dt_hi,
            d_p: dp_hi,
        });
    }
    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        if lift(mid).0 < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut theta = 0.5 * (lo + hi);
    let mut residual = f64::INFINITY;
    for _ in 0..=MAX_NEWTON_STEPS {
        let (f, d_theta, d_p) = lift(theta);
        residual = f - target;
        let tolerance = RESIDUAL_TOLERANCE + 16.0 * f64::EPSILON * d_theta * (1.0 + theta.abs());
        if residual.abs() <= tolerance {
            return Ok(Preimage {
                theta,
                d_theta,
                d_p,
            });
        }
        if residual < 0.0 {
            lo = theta;
        } else {
            hi = theta;
        }
        let next = theta - residual / d_theta;
        theta = if next > lo && next < hi {
            next
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::NoConvergence {
        residual: residual.abs(),
    })
}

/// The `n` eigen-angles `theta_j = H_j(p)` at one point, with derivatives.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchSolution {
    pub p: ProjPoint,
    /// Increasing, inside `(-pi/2, pi/2]`.
    pub thetas: Vec<f64>,
    /// `H_j'(p) = (1 - dPhi/dp) / (dPhi/dtheta)` at `(theta_j, p)`.
    pub derivs: Vec<f64>,
    /// `dPhi/dtheta` at each branch point.
    pub d_theta: Vec<f64>,
    /// `dPhi/dp = 1 / |R_theta A v_p|^2` at each branch point.
    pub d_p: Vec<f64>,
}

pub fn branch_solve(w: &MatrixWord, p: ProjPoint) -> Result<BranchSolution> {
    let roots = preimages(w, p, p)?;
    let mut sol = BranchSolution {
        p,
        thetas: Vec::with_capacity(roots.len()),
        derivs: Vec::with_capacity(roots.len()),
        d_theta: Vec::with_capacity(roots.len()),
        d_p: Vec::with_capacity(roots.len()),
    };
    for r in roots {
        sol.thetas.push(r.theta);
        sol.derivs.push((1.0 - r.d_p) / r.d_theta);
        sol.d_theta.push(r.d_theta);
        sol.d_p.push(r.d_p);
    }
    Ok(sol)
}

/// `rho(R_theta A)`, the log spectral radius of the rotated product.
pub fn rho_theta(w: &MatrixWord, theta: f64) -> f64 {
    spectral_radius_log(&word_product(w, theta))
}

/// `(1/2pi) * integral over [0, 2pi) of rho(R_theta A)`, using one period `[0, pi)`.
pub fn avg_spectral_radius(w: &MatrixWord, nodes: usize) -> Result<QuadResult> {
    Ok(periodic_trapezoid(|t| rho_theta(w, t), 0.0, PI, nodes)?.scaled(PI.recip()))
}

/// Summed `J_k` integrand for every `k` at once, indexed `k - 1`.
///
/// Walks the suffix `R_theta (A_{k+1}, ..., A_n) v_p` from the right, so the
/// vector at stage `k` is the normalized `v^k`.
fn j_integrand(w: &MatrixWord, p: ProjPoint) -> Result<Vec<f64>> {
    let sol = branch_solve(w, p)?;
    let mut acc = vec![0.0; w.len()];
    for (&theta, &deriv) in sol.thetas.iter().zip(&sol.derivs) {
        let r = rotation_unchecked(theta);
        let mut v = p.unit_vector();
        for (k, m) in w.letters.iter().enumerate().rev() {
            let u = m.apply(v);
            let norm = u[0].hypot(u[1]);
            acc[k] += norm.ln() * deriv;
            let turned = r.apply(u);
            v = [turned[0] / norm, turned[1] / norm];
        }
    }
    Ok(acc)
}

/// All of `J_1, ..., J_n` from a shared set of branch solves.
pub fn j_all(w: &MatrixWord, nodes: usize) -> Result<Vec<QuadResult>> {
    let scale = (2.0 * PI).recip();
    let raw = try_periodic_trapezoid_vec(
        |x| j_integrand(w, ProjPoint::new(x)),
        w.len(),
        -FRAC_PI_2,
        PI,
        nodes,
    )?;
    Ok(raw.into_iter().map(|r| r.scaled(scale)).collect())
}

/// [`j_all`] starting at `start_nodes` and doubling until every component's
/// error estimate is at most `tol` or `max_nodes` is reached.
pub fn j_all_refined(
    w: &MatrixWord,
    start_nodes: usize,
    max_nodes: usize,
    tol: f64,
) -> Result<Vec<QuadResult>> {
    let mut nodes = start_nodes;
    loop {
        let js = j_all(w, nodes)?;
        let worst = js.iter().fold(0.0f64, |m, j| m.max(j.error_estimate));
        if worst <= tol || nodes * 2 > max_nodes {
            return Ok(js);
        }
        nodes *= 2;
    }
}

/// `J_k` with 1-based `k`.
pub fn j_k(w: &MatrixWord, k: usize, nodes: usize) -> Result<QuadResult> {
    w.letter(k)?;
    Ok(j_all(w, nodes)?.swap_remove(k - 1))
}

/// `sum over preimages theta of q of 1 / (dPhi/dtheta)`; equals 1 for a
/// Haar-preserving map.
pub fn haar_preimage_sum(w: &MatrixWord, p: ProjPoint, q: ProjPoint) -> Result<f64> {
    Ok(preimages(w, p, q)?.iter().map(|r| r.d_theta.recip()).sum())
}

/// `sum_j H_j'(p)`.
pub fn branch_deriv_sum(w: &MatrixWord, p: ProjPoint) -> Result<f64> {
    Ok(branch_solve(w, p)?.derivs.iter().sum())
}

/// Haar measure of `{theta : rho(R_theta A) = 0}`, from a `theta_nodes` grid.
pub fn elliptic_measure_by_rho(w: &MatrixWord, theta_nodes: usize) -> f64 {
    let step = PI / theta_nodes as f64;
    let zeros = (0..theta_nodes)
        .filter(|&i| rho_theta(w, -FRAC_PI_2 + i as f64 * step) == 0.0)
        .count();
    zeros as f64 / theta_nodes as f64
}

/// Arcs on `R / pi Z` as `(start, length)` with `start` in `[-pi/2, pi/2)`.
fn union_length(arcs: &mut [(f64, f64)]) -> f64 {
    let mut pieces: Vec<(f64, f64)> = Vec::with_capacity(arcs.len() + 4);
    for &(start, len) in arcs.iter() {
        if len >= PI {
            return PI;
        }
        let end = start + len;
        if end > FRAC_PI_2 {
            pieces.push((start, FRAC_PI_2));
            pieces.push((-FRAC_PI_2, end - PI));
        } else {
            pieces.push((start, end));
        }
    }
    pieces.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut total = 0.0;
    let mut current: Option<(f64, f64)> = None;
    for (s, e) in pieces {
        match current {
            Some((cs, ce)) if s <= ce => current = Some((cs, ce.max(e))),
            Some((cs, ce)) => {
                total += ce - cs;
                current = Some((s, e));
            }
            None => current = Some((s, e)),
        }
    }
    if let Some((cs, ce)) = current {
        total += ce - cs;
    }
    total.min(PI)
}

const MAX_ARC_STEP: f64 = 0.05;
const MAX_REFINE_DEPTH: u32 = 24;

/// Pairs the roots at two nearby `p` by the cyclic shift that best matches a
/// first-order prediction, then records the arc each branch sweeps.
fn sweep_arcs(
    w: &MatrixWord,
    (p0, s0): (f64, &BranchSolution),
    (p1, s1): (f64, &BranchSolution),
    depth: u32,
    arcs: &mut Vec<(f64, f64)>,
) -> Result<()> {
    let n = s0.thetas.len();
    let dp = p1 - p0;
    let predicted: Vec<f64> = s0
        .thetas
        .iter()
        .zip(&s0.derivs)
        .map(|(t, d)| t + d * dp)
        .collect();
    let shift = (0..n)
        .min_by(|&a, &b| {
            let cost = |s: usize| -> f64 {
                (0..n)
                    .map(|j| circle_dist(predicted[j], s1.thetas[(j + s) % n]))
                    .sum()
            };
            cost(a).total_cmp(&cost(b))
        })
        .unwrap_or(0);
    let steps: Vec<f64> = (0..n)
        .map(|j| reduce_half_open(s1.thetas[(j + shift) % n] - s0.thetas[j]))
        .collect();
    let widest = steps.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    if widest > MAX_ARC_STEP && depth < MAX_REFINE_DEPTH {
        let pm = 0.5 * (p0 + p1);
        let sm = branch_solve(w, ProjPoint::new(pm))?;
        sweep_arcs(w, (p0, s0), (pm, &sm), depth + 1, arcs)?;
        return sweep_arcs(w, (pm, &sm), (p1, s1), depth + 1, arcs);
    }
    for (j, step) in steps.into_iter().enumerate() {
        let from = s0.thetas[j];
        let start = if step >= 0.0 { from } else { from + step };
        arcs.push(((start + FRAC_PI_2).rem_euclid(PI) - FRAC_PI_2, step.abs()));
    }
    Ok(())
}

/// Sampled branch graphs over an equispaced `p` grid on `[0, pi)`.
pub fn branch_table(w: &MatrixWord, p_nodes: usize) -> Result<Vec<BranchSolution>> {
    let step = PI / p_nodes as f64;
    (0..p_nodes)
        .map(|i| branch_solve(w, ProjPoint::new(i as f64 * step)))
        .collect()
}

/// Haar measure of the complement of the union of the branch ranges, with
/// the ranges traced continuously between consecutive grid points of `table`.
pub fn elliptic_measure_by_branches(w: &MatrixWord, table: &[BranchSolution]) -> Result<f64> {
    let m = table.len();
    if m < 2 {
        return Err(Error::InvalidArgument("need at least two p samples".into()));
    }
    let step = PI / m as f64;
    let mut arcs = Vec::new();
    for i in 0..m {
        let next = (i + 1) % m;
        let p0 = i as f64 * step;
        sweep_arcs(w, (p0, &table[i]), (p0 + step, &table[next]), 0, &mut arcs)?;
    }
    Ok(1.0 - union_length(&mut arcs) / PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::{h, phi, phi_deriv};
    use crate::random::SeededSource;
    use crate::sl2::{log_avg_norm, rotation, Mat2};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_4;

    fn word(ms: &[Mat2]) -> MatrixWord {
        MatrixWord::new(ms.to_vec()).unwrap()
    }

    fn diag2() -> Mat2 {
        Mat2::diag(2.0).unwrap()
    }

    #[test]
    fn empty_word_rejected() {
        assert!(MatrixWord::new(vec![]).is_err());
    }

    #[test]
    fn product_examples() {
        let a = Mat2::new(2.0, 1.0, 3.0, 2.0).unwrap();
        assert!(word_product(&MatrixWord::single(a), 0.0).max_abs_diff(&a) < 1e-15);
        let ii = word(&[Mat2::IDENTITY, Mat2::IDENTITY]);
        for &t in &[0.0, 0.3, 2.2] {
            assert!(word_product(&ii, t).max_abs_diff(&rotation(2.0 * t).unwrap()) < 1e-14);
        }
        let mut src = SeededSource::new(3);
        for _ in 0..10 {
            let (u, v) = (src.word(2), src.word(3));
            let t = src.uniform(0.0, PI);
            let whole = word_product(&u.concat(&v), t);
            let split = word_product(&u, t) * word_product(&v, t);
            let scale = whole.entries().iter().fold(1.0f64, |m, x| m.max(x.abs()));
            assert!(whole.max_abs_diff(&split) <= 1e-13 * scale);
        }
    }

    #[test]
    fn jet_examples() {
        let p = ProjPoint::new(0.9);
        let jet = phi_word_jet(&MatrixWord::single(Mat2::IDENTITY), 0.4, p);
        assert_eq!((jet.d_theta, jet.d_p), (1.0, 1.0));
        assert!(jet.value.approx_eq(ProjPoint::new(1.3), 1e-15));
        let jet = phi_word_jet(&word(&[Mat2::IDENTITY, Mat2::IDENTITY]), 0.4, p);
        assert_abs_diff_eq!(jet.d_theta, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(jet.d_p, 1.0, epsilon = 1e-15);
        assert!(jet.value.approx_eq(ProjPoint::new(1.7), 1e-15));
    }

    #[test]
    fn jet_value_matches_product_action() {
        let mut src = SeededSource::new(5);
        for n in 1..=4 {
            let w = src.word(n);
            let t = src.uniform(-2.0, 2.0);
            let p = src.point();
            let jet = phi_word_jet(&w, t, p);
            assert!(jet.value.approx_eq(phi(&word_product(&w, t), p), 1e-11));
            assert_abs_diff_eq!(
                jet.d_p,
                phi_deriv(&word_product(&w, t), p),
                epsilon = 1e-9 * jet.d_p.max(1.0)
            );
            assert!(jet.d_theta >= 1.0);
        }
    }

    #[test]
    fn branch_examples() {
        let ii = word(&[Mat2::IDENTITY, Mat2::IDENTITY]);
        for &p in &[0.0, 0.6, 2.0] {
            let sol = branch_solve(&ii, ProjPoint::new(p)).unwrap();
            assert_eq!(sol.thetas.len(), 2);
            assert_abs_diff_eq!(sol.thetas[0], 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(sol.thetas[1], FRAC_PI_2, epsilon = 1e-12);
            assert!(sol.derivs.iter().all(|d| d.abs() < 1e-15));
        }
        let single = MatrixWord::single(diag2());
        let p = ProjPoint::new(FRAC_PI_4);
        let sol = branch_solve(&single, p).unwrap();
        assert_abs_diff_eq!(sol.thetas[0], h(&diag2(), p), epsilon = 1e-12);
        assert_abs_diff_eq!(sol.thetas[0], 0.5404195, epsilon = 1e-7);
        assert_abs_diff_eq!(sol.derivs[0], 1.0 - phi_deriv(&diag2(), p), epsilon = 1e-12);
    }

    #[test]
    fn rho_theta_examples() {
        for n in 1..4 {
            let w = MatrixWord::new(vec![Mat2::IDENTITY; n]).unwrap();
            for &t in &[0.0, 0.5, 1.7] {
                assert_eq!(rho_theta(&w, t), 0.0);
            }
        }
        assert_abs_diff_eq!(
            rho_theta(&MatrixWord::single(diag2()), 0.0),
            2f64.ln(),
            epsilon = 1e-15
        );
        let w = SeededSource::new(8).word(3);
        assert_abs_diff_eq!(rho_theta(&w, 0.4), rho_theta(&w, 0.4 + PI), epsilon = 1e-9);
    }

    #[test]
    fn avg_examples() {
        let r = avg_spectral_radius(&MatrixWord::single(Mat2::IDENTITY), 1024).unwrap();
        assert_eq!(r.value, 0.0);
        let r = avg_spectral_radius(&MatrixWord::single(diag2()), AVG_DEFAULT_NODES).unwrap();
        assert_abs_diff_eq!(r.value, 1.25f64.ln(), epsilon = 1e-5);
    }

    #[test]
    fn j_examples() {
        let a = Mat2::new(1.0, 2.0, 0.5, 2.0).unwrap();
        let j = j_k(&MatrixWord::single(a), 1, J_DEFAULT_NODES).unwrap();
        assert_abs_diff_eq!(j.value, log_avg_norm(&a), epsilon = 1e-10);

        let w = word(&[Mat2::IDENTITY, rotation(0.8).unwrap()]);
        for k in 1..=2 {
            assert_abs_diff_eq!(j_k(&w, k, 256).unwrap().value, 0.0, epsilon = 1e-15);
        }
        assert!(matches!(
            j_k(&w, 3, 256),
            Err(Error::IndexOutOfRange { index: 3, len: 2 })
        ));
        assert!(j_k(&w, 0, 256).is_err());
    }

    #[test]
    fn haar_examples() {
        let ii = word(&[Mat2::IDENTITY, Mat2::IDENTITY]);
        let pre = preimages(&ii, ProjPoint::new(0.3), ProjPoint::new(1.2)).unwrap();
        assert_eq!(pre.len(), 2);
        assert!(pre.iter().all(|r| (r.d_theta - 2.0).abs() < 1e-15));
        assert_abs_diff_eq!(
            haar_preimage_sum(&ii, ProjPoint::new(0.3), ProjPoint::new(1.2)).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        let single = MatrixWord::single(Mat2::new(3.0, 1.0, 2.0, 1.0).unwrap());
        assert_abs_diff_eq!(
            haar_preimage_sum(&single, ProjPoint::new(0.3), ProjPoint::new(2.2)).unwrap(),
            1.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn deriv_sum_examples() {
        let ii = word(&[Mat2::IDENTITY, Mat2::IDENTITY]);
        assert_abs_diff_eq!(
            branch_deriv_sum(&ii, ProjPoint::new(0.5)).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        let s = branch_deriv_sum(&MatrixWord::single(diag2()), ProjPoint::new(FRAC_PI_4)).unwrap();
        assert_abs_diff_eq!(s, 1.0 - 1.0 / 2.125, epsilon = 1e-12);
        assert_abs_diff_eq!(s, 0.5294118, epsilon = 1e-7);
    }

    #[test]
    fn cyclic_shift_and_letter_bounds() {
        let w = SeededSource::new(4).word(3);
        let s = w.cyclic_shift(1).unwrap();
        assert_eq!(s.letters()[0], w.letters()[1]);
        assert_eq!(s.letters()[2], w.letters()[0]);
        assert_eq!(w.cyclic_shift(3).unwrap(), w);
        assert!(w.cyclic_shift(4).is_err());
    }

    #[test]
    fn union_length_merges_and_wraps() {
        let mut arcs = vec![(-0.2, 0.3), (0.0, 0.2), (1.5, 0.2)];
        let expected = 0.4 + 0.2;
        assert_abs_diff_eq!(union_length(&mut arcs), expected, epsilon = 1e-15);
        let mut arcs = vec![(1.5, 0.2), (-1.56, 0.05)];
        // second arc lies inside the wrapped part of the first, [-pi/2, 1.7 - pi)
        assert_abs_diff_eq!(union_length(&mut arcs), 0.2, epsilon = 1e-12);
    }

    #[test]
    fn elliptic_measures_of_trivial_words() {
        let ii = word(&[Mat2::IDENTITY, Mat2::IDENTITY]);
        let table = branch_table(&ii, 64).unwrap();
        assert_abs_diff_eq!(
            elliptic_measure_by_branches(&ii, &table).unwrap(),
            1.0,
            epsilon = 1e-10
        );
        assert_eq!(elliptic_measure_by_rho(&ii, 4096), 1.0);
    }
}
