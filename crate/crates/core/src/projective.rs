//! The induced action of SL(2,R) on the projective line `R / pi Z`.
//!
//! A point `p` stands for the line spanned by `v_p = (cos p, sin p)`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sl2::{raw_mul, rotation_unchecked, svd2, Mat2};

/// Below `1 + ORTHOGONALITY_TOLERANCE` in operator norm the involution is undefined.
pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-9;

/// A point of the projective line, stored as its angle in `[0, pi)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(into = "f64", from = "f64")]
pub struct ProjPoint(f64);

impl ProjPoint {
    /// Reduces `angle` mod pi. Panics on non-finite input.
    pub fn new(angle: f64) -> Self {
        assert!(
            angle.is_finite(),
            "projective angle must be finite, got {angle}"
        );
        let mut t = angle.rem_euclid(PI);
        if t >= PI {
            t = 0.0;
        }
        ProjPoint(t)
    }

    #[inline]
    pub fn angle(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn unit_vector(self) -> [f64; 2] {
        let (s, c) = self.0.sin_cos();
        [c, s]
    }

    /// Distance on `R / pi Z`, in `[0, pi/2]`.
    pub fn dist(self, other: ProjPoint) -> f64 {
        circle_dist(self.0, other.0)
    }

    pub fn approx_eq(self, other: ProjPoint, tol: f64) -> bool {
        self.dist(other) <= tol
    }
}

impl From<f64> for ProjPoint {
    fn from(angle: f64) -> Self {
        ProjPoint::new(angle)
    }
}

impl From<ProjPoint> for f64 {
    fn from(p: ProjPoint) -> Self {
        p.0
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Representative of `x mod pi` in `(-pi/2, pi/2]`.
pub fn reduce_half_open(x: f64) -> f64 {
    let r = x.rem_euclid(PI);
    if r > FRAC_PI_2 {
        r - PI
    } else {
        r
    }
}

/// Distance between two reals seen as points of `R / pi Z`.
pub fn circle_dist(a: f64, b: f64) -> f64 {
    reduce_half_open(a - b).abs()
}

pub fn proj_of_vector(v: [f64; 2]) -> Result<ProjPoint> {
    if !(v[0].is_finite() && v[1].is_finite()) || (v[0] == 0.0 && v[1] == 0.0) {
        return Err(Error::InvalidArgument(format!(
            "vector {v:?} does not span a line"
        )));
    }
    Ok(ProjPoint::new(v[1].atan2(v[0])))
}

#[inline]
fn norm_sq(v: [f64; 2]) -> f64 {
    v[0] * v[0] + v[1] * v[1]
}

/// `Phi_A(p)`: the line `A * l_p`.
pub fn phi(m: &Mat2, p: ProjPoint) -> ProjPoint {
    let w = m.apply(p.unit_vector());
    ProjPoint::new(w[1].atan2(w[0]))
}

/// `Phi_A'(p) = 1 / |A v_p|^2`.
pub fn phi_deriv(m: &Mat2, p: ProjPoint) -> f64 {
    norm_sq(m.apply(p.unit_vector())).recip()
}

/// Continuous increasing lift of `Phi_A` to the real line, evaluated at any
/// real `x`; satisfies `phi_lift(x + pi) = phi_lift(x) + pi`.
///
/// Built from the polar factorization `A = R_alpha P` with `P` positive
/// definite, so the turn from `v_x` to `P v_x` stays inside `(-pi/2, pi/2)`.
pub fn phi_lift(m: &Mat2, x: f64) -> f64 {
    let [a, b, c, d] = m.entries();
    let alpha = (c - b).atan2(a + d);
    let (s, co) = x.sin_cos();
    let w = rotation_unchecked(-alpha).apply(m.apply([co, s]));
    let cross = co * w[1] - s * w[0];
    let dot = co * w[0] + s * w[1];
    x + alpha + cross.atan2(dot)
}

/// `H_A(p) = p - Phi_A(p)`, reported in `(-pi/2, pi/2]`.
pub fn h(m: &Mat2, p: ProjPoint) -> f64 {
    reduce_half_open(p.angle() - phi(m, p).angle())
}

/// Continuous lift of `H_A` (congruent to [`h`] mod pi).
pub fn h_lift(m: &Mat2, x: f64) -> f64 {
    x - phi_lift(m, x)
}

/// `rho_A(p) = log |A v_p|`.
pub fn rho_fn(m: &Mat2, p: ProjPoint) -> f64 {
    0.5 * norm_sq(m.apply(p.unit_vector())).ln()
}

/// The reflection `M = R^-1 K R` with `K = [[0, 1/s], [s, 0]]`, where
/// `A = S diag(s, 1/s) R`. Determinant -1, `M^2 = I`.
fn involution_matrix(m: &Mat2) -> Result<[f64; 4]> {
    let svd = svd2(m);
    if svd.sigma <= 1.0 + ORTHOGONALITY_TOLERANCE {
        return Err(Error::Domain(format!(
            "involution undefined for near-orthogonal matrix (norm {})",
            svd.sigma
        )));
    }
    let k = [0.0, svd.sigma.recip(), svd.sigma, 0.0];
    let r = svd.r_factor.entries();
    let r_inv = svd.r_factor.transpose().entries();
    Ok(raw_mul(raw_mul(r_inv, k), r))
}

/// The analytic involution `Psi_A` exchanging the two preimages of each
/// regular value of `H_A`.
pub fn involution(m: &Mat2, p: ProjPoint) -> Result<ProjPoint> {
    let [a, b, c, d] = involution_matrix(m)?;
    let [x, y] = p.unit_vector();
    proj_of_vector([a * x + b * y, c * x + d * y])
}

/// `Psi_A'(p)`, computed from the reflection itself as `det M / |M v_p|^2`.
pub fn involution_deriv(m: &Mat2, p: ProjPoint) -> Result<f64> {
    let [a, b, c, d] = involution_matrix(m)?;
    let [x, y] = p.unit_vector();
    let w = [a * x + b * y, c * x + d * y];
    Ok((a * d - b * c) / norm_sq(w))
}
