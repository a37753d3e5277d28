//! Fiber Lyapunov exponents of cocycles over circle rotations.
//!
//! The base is `X = R / 2pi Z` with the rotation `x -> x + alpha`. Space
//! averages over `X` are replaced by orbit (Birkhoff) averages.

use std::f64::consts::TAU;

use log::warn;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{pairwise_sum, trapezoid_from_samples, MIN_NODES};
use crate::sl2::{log_avg_norm, raw_mul, raw_singular_values, rotation_unchecked, Mat2};

pub const DEFAULT_RENORM_EVERY: usize = 16;
pub const MIN_ITERATIONS: usize = 1000;
/// Largest denominator inspected when looking for rational rotation numbers.
pub const MAX_CONVERGENT_DENOMINATOR: u64 = 1_000_000;

/// `2pi (sqrt(5) - 1) / 2`.
pub fn golden_alpha() -> f64 {
    TAU * (5f64.sqrt() - 1.0) / 2.0
}

/// The rotation `x -> x + alpha` on `R / 2pi Z`, started at `x0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RotationBase {
    pub alpha: f64,
    pub x0: f64,
}

impl RotationBase {
    pub fn new(alpha: f64, x0: f64) -> Result<Self> {
        if !(alpha.is_finite() && x0.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "rotation base needs finite alpha and x0, got {alpha}, {x0}"
            )));
        }
        let base = RotationBase { alpha, x0 };
        if let Some((p, q)) = base.rational_approximation(MAX_CONVERGENT_DENOMINATOR) {
            warn!("alpha/2pi = {} is numerically rational ({p}/{q}); orbit averages may not converge to space averages", alpha / TAU);
        }
        Ok(base)
    }

    pub fn golden() -> Self {
        RotationBase {
            alpha: golden_alpha(),
            x0: 0.0,
        }
    }

    /// A continued-fraction convergent `p/q` of `alpha / 2pi` with
    /// `q <= max_den` and `q^2 |alpha/2pi - p/q| < 1e-6`, if any; i.e. the
    /// rotation number is rational up to rounding, or has a huge partial quotient.
    pub fn rational_approximation(&self, max_den: u64) -> Option<(i64, u64)> {
        let x = (self.alpha / TAU).rem_euclid(1.0);
        let (mut h_prev, mut h) = (0i64, 1i64);
        let (mut k_prev, mut k) = (1u64, 0u64);
        let mut rest = x;
        loop {
            let a = rest.floor();
            let (h_next, k_next) = (a as i64 * h + h_prev, a as u64 * k + k_prev);
            if k_next > max_den {
                return None;
            }
            (h_prev, h, k_prev, k) = (h, h_next, k, k_next);
            let gap = (x - h as f64 / k as f64).abs();
            if gap * (k as f64).powi(2) < 1e-6 {
                return Some((h, k));
            }
            let frac = rest - a;
            if frac == 0.0 {
                return None;
            }
            rest = frac.recip();
        }
    }

    #[inline]
    fn step(&self, x: f64) -> f64 {
        (x + self.alpha).rem_euclid(TAU)
    }

    /// First `len` orbit points, with the angle kept in `[0, 2pi)`.
    fn orbit(&self, len: usize) -> impl Iterator<Item = f64> + '_ {
        std::iter::successors(Some(self.x0.rem_euclid(TAU)), move |&x| Some(self.step(x))).take(len)
    }
}

/// A measurable fiber map `x -> A(x)` on the base circle.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CocycleSpec {
    /// `A(x) = R_x diag(c, 1/c)`.
    HermanExample { c: f64 },
    /// `A(x) = samples[floor(len * x / 2pi)]`, piecewise constant on equal bins.
    TableDriven { samples: Vec<Mat2> },
}

impl CocycleSpec {
    pub fn herman(c: f64) -> Result<Self> {
        let spec = CocycleSpec::HermanExample { c };
        spec.validate()?;
        Ok(spec)
    }

    pub fn table(samples: Vec<Mat2>) -> Result<Self> {
        let spec = CocycleSpec::TableDriven { samples };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            CocycleSpec::HermanExample { c } => {
                if !(c.is_finite() && *c > 0.0 && *c != 1.0) {
                    return Err(Error::InvalidArgument(format!(
                        "Herman example needs c > 0 and c != 1, got {c}"
                    )));
                }
            }
            CocycleSpec::TableDriven { samples } => {
                if samples.is_empty() {
                    return Err(Error::InvalidArgument(
                        "table-driven cocycle has no bins".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// The fiber matrix `A(x)`.
    pub fn at(&self, x: f64) -> Mat2 {
        match self {
            CocycleSpec::HermanExample { c } => {
                rotation_unchecked(x) * Mat2::diag(*c).expect("validated c")
            }
            CocycleSpec::TableDriven { samples } => {
                let len = samples.len();
                let bin = ((x.rem_euclid(TAU) / TAU) * len as f64) as usize;
                samples[bin.min(len - 1)]
            }
        }
    }
}

pub fn cocycle_step(spec: &CocycleSpec, x: f64) -> Mat2 {
    spec.at(x)
}

fn check_run(iterations: usize, renorm_every: usize) -> Result<()> {
    if iterations < MIN_ITERATIONS {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_ITERATIONS} iterations, got {iterations}"
        )));
    }
    if renorm_every == 0 {
        return Err(Error::InvalidArgument(
            "renorm_every must be at least 1".into(),
        ));
    }
    Ok(())
}

/// `(1/n) log |R_theta A(x_{n-1}) ... R_theta A(x_0)|` with periodic
/// rescaling of the running product.
fn orbit_exponent(
    base: &RotationBase,
    spec: &CocycleSpec,
    theta: f64,
    iterations: usize,
    renorm_every: usize,
) -> Result<f64> {
    let turn = rotation_unchecked(theta);
    let mut product = Mat2::IDENTITY.entries();
    let mut log_scale = 0.0;
    for (step, x) in base.orbit(iterations).enumerate() {
        let fiber = (turn * spec.at(x)).entries();
        product = raw_mul(fiber, product);
        if (step + 1) % renorm_every == 0 {
            let norm = raw_singular_values(product).0;
            if !norm.is_finite() || norm == 0.0 {
                return Err(Error::Overflow { step: step + 1 });
            }
            log_scale += norm.ln();
            product = product.map(|e| e / norm);
        }
    }
    let residual = raw_singular_values(product).0;
    if !residual.is_finite() || residual == 0.0 {
        return Err(Error::Overflow { step: iterations });
    }
    Ok((log_scale + residual.ln()) / iterations as f64)
}

/// Finite-time estimate of the fiber upper Lyapunov exponent along the orbit of `base.x0`.
pub fn lyapunov_estimate(
    base: &RotationBase,
    spec: &CocycleSpec,
    iterations: usize,
    renorm_every: usize,
) -> Result<f64> {
    check_run(iterations, renorm_every)?;
    spec.validate()?;
    orbit_exponent(base, spec, 0.0, iterations, renorm_every)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyAverage {
    pub average: f64,
    /// `(theta_i, lambda(f, R_theta_i A))`.
    pub per_theta: Vec<(f64, f64)>,
}

/// Average of `lambda(f, R_theta A)` over `theta` in `[0, 2pi)`.
pub fn family_average(
    base: &RotationBase,
    spec: &CocycleSpec,
    theta_nodes: usize,
    iterations: usize,
) -> Result<FamilyAverage> {
    family_average_with(base, spec, theta_nodes, iterations, DEFAULT_RENORM_EVERY)
}

pub fn family_average_with(
    base: &RotationBase,
    spec: &CocycleSpec,
    theta_nodes: usize,
    iterations: usize,
    renorm_every: usize,
) -> Result<FamilyAverage> {
    check_run(iterations, renorm_every)?;
    spec.validate()?;
    if theta_nodes < MIN_NODES {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_NODES} theta nodes, got {theta_nodes}"
        )));
    }
    let step = TAU / theta_nodes as f64;
    let per_theta: Vec<(f64, f64)> = (0..theta_nodes)
        .into_par_iter()
        .map(|i| {
            let theta = i as f64 * step;
            orbit_exponent(base, spec, theta, iterations, renorm_every).map(|l| (theta, l))
        })
        .collect::<Result<_>>()?;
    let values: Vec<f64> = per_theta.iter().map(|&(_, l)| l).collect();
    let average = trapezoid_from_samples(&values, TAU)?.value / TAU;
    Ok(FamilyAverage { average, per_theta })
}

/// Birkhoff average of `log((|A(x)| + 1/|A(x)|) / 2)` along the base orbit.
pub fn herman_integral(base: &RotationBase, spec: &CocycleSpec, samples: usize) -> Result<f64> {
    if samples < MIN_ITERATIONS {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_ITERATIONS} samples, got {samples}"
        )));
    }
    spec.validate()?;
    let values: Vec<f64> = base
        .orbit(samples)
        .map(|x| log_avg_norm(&spec.at(x)))
        .collect();
    Ok(pairwise_sum(&values) / samples as f64)
}

/// `log(c + 1/c) - log 2`, the exponent of the Herman example.
pub fn herman_example_exponent(c: f64) -> f64 {
    ((c + c.recip()) / 2.0).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::SeededSource;
    use crate::sl2::{rotation, spectral_radius_log};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn herman_step_examples() {
        let spec = CocycleSpec::herman(2.0).unwrap();
        assert!(spec.at(0.0).max_abs_diff(&Mat2::diag(2.0).unwrap()) < 1e-15);
        let expected = Mat2::new(0.0, -0.5, 2.0, 0.0).unwrap();
        assert!(cocycle_step(&spec, FRAC_PI_2).max_abs_diff(&expected) < 1e-15);
        let mut src = SeededSource::new(9);
        for _ in 0..50 {
            let x = src.uniform(0.0, TAU);
            let t = src.uniform(0.0, TAU);
            let lhs = rotation(t).unwrap() * spec.at(x);
            assert!(lhs.max_abs_diff(&spec.at(x + t)) <= 1e-14);
        }
    }

    #[test]
    fn spec_validation() {
        assert!(CocycleSpec::herman(1.0).is_err());
        assert!(CocycleSpec::herman(-2.0).is_err());
        assert!(CocycleSpec::herman(f64::NAN).is_err());
        assert!(CocycleSpec::table(vec![]).is_err());
    }

    #[test]
    fn table_bins() {
        let a = Mat2::diag(2.0).unwrap();
        let b = Mat2::diag(3.0).unwrap();
        let spec = CocycleSpec::table(vec![a, b]).unwrap();
        assert_eq!(spec.at(0.1), a);
        assert_eq!(spec.at(PI + 0.1), b);
        assert_eq!(spec.at(-0.1), b);
        assert_eq!(spec.at(TAU), a);
    }

    #[test]
    fn run_argument_checks() {
        let spec = CocycleSpec::table(vec![Mat2::IDENTITY]).unwrap();
        let base = RotationBase::golden();
        assert!(lyapunov_estimate(&base, &spec, 999, 16).is_err());
        assert!(lyapunov_estimate(&base, &spec, 1000, 0).is_err());
    }

    #[test]
    fn identity_cocycle_has_zero_exponent() {
        let spec = CocycleSpec::table(vec![Mat2::IDENTITY; 3]).unwrap();
        let base = RotationBase::golden();
        assert_eq!(lyapunov_estimate(&base, &spec, 10_000, 16).unwrap(), 0.0);
        let fam = family_average(&base, &spec, 16, 2000).unwrap();
        // R_theta has norm one, so every per-theta estimate is exactly 0 up to rounding
        assert!(fam.average.abs() < 1e-12);
        assert!(fam.per_theta.iter().all(|(_, l)| l.abs() < 1e-12));
        assert_eq!(herman_integral(&base, &spec, 1000).unwrap(), 0.0);
    }

    #[test]
    fn constant_hyperbolic_cocycle() {
        let m = Mat2::diag(2.0).unwrap();
        let spec = CocycleSpec::table(vec![m]).unwrap();
        let base = RotationBase::golden();
        let l = lyapunov_estimate(&base, &spec, 100_000, 16).unwrap();
        assert_abs_diff_eq!(l, 2f64.ln(), epsilon = 1e-6);
        let m = Mat2::new(2.0, 1.0, 3.0, 2.0).unwrap();
        let spec = CocycleSpec::table(vec![m]).unwrap();
        let l = lyapunov_estimate(&base, &spec, 1_000_000, 16).unwrap();
        assert_abs_diff_eq!(l, spectral_radius_log(&m), epsilon = 1e-6);
    }

    #[test]
    fn renormalization_period_does_not_matter() {
        let mut src = SeededSource::new(21);
        let spec = CocycleSpec::table((0..4).map(|_| src.matrix()).collect()).unwrap();
        let base = RotationBase::golden();
        let ls: Vec<f64> = [1, 8, 64]
            .iter()
            .map(|&r| lyapunov_estimate(&base, &spec, 20_000, r).unwrap())
            .collect();
        for l in &ls {
            assert!(*l >= 0.0);
            assert!((l - ls[0]).abs() <= 2e-3, "{ls:?}");
        }
    }

    #[test]
    fn overflow_is_reported() {
        let big = Mat2::diag(1e200).unwrap();
        let spec = CocycleSpec::table(vec![big]).unwrap();
        let err = lyapunov_estimate(&RotationBase::golden(), &spec, 1000, 16).unwrap_err();
        assert!(matches!(err, Error::Overflow { .. }));
    }

    #[test]
    fn herman_integral_of_herman_example() {
        let spec = CocycleSpec::herman(2.0).unwrap();
        let v = herman_integral(&RotationBase::golden(), &spec, 100_000).unwrap();
        assert_abs_diff_eq!(v, 1.25f64.ln(), epsilon = 1e-9);
        assert_abs_diff_eq!(herman_example_exponent(2.0), 1.25f64.ln(), epsilon = 1e-15);
    }

    #[test]
    fn herman_integral_matches_bin_average() {
        let mut src = SeededSource::new(17);
        let samples: Vec<Mat2> = (0..5).map(|_| src.matrix()).collect();
        let exact = samples.iter().map(log_avg_norm).sum::<f64>() / samples.len() as f64;
        let spec = CocycleSpec::table(samples).unwrap();
        let v = herman_integral(&RotationBase::golden(), &spec, 1_000_000).unwrap();
        assert_abs_diff_eq!(v, exact, epsilon = 1e-3);
    }

    #[test]
    fn rational_rotations_are_detected() {
        let base = RotationBase {
            alpha: TAU * 3.0 / 7.0,
            x0: 0.0,
        };
        assert_eq!(
            base.rational_approximation(MAX_CONVERGENT_DENOMINATOR),
            Some((3, 7))
        );
        assert_eq!(
            RotationBase::golden().rational_approximation(MAX_CONVERGENT_DENOMINATOR),
            None
        );
    }
}
