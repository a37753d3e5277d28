//! Closed-form kernels for 2x2 matrices of unit determinant.
//!
//! Everything here is exact up to rounding: the singular values of a 2x2
//! matrix come from the two half-sums
//! `sqrt((a+d)^2 + (c-b)^2) / 2` and `sqrt((a-d)^2 + (b+c)^2) / 2`,
//! which avoids the cancellation of the `t^2 - 4 det^2` form.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Determinant tolerance, relative to `max(1, |ad| + |bc|)`.
pub const DET_TOLERANCE: f64 = 1e-12;

/// Band around `|trace| = 2` classified as parabolic.
pub const PARABOLIC_TOLERANCE: f64 = 1e-10;

/// Below this distance from 1 the largest singular value is treated as 1.
const ISOMETRY_TOLERANCE: f64 = 1e-12;

/// A real 2x2 matrix `[[a, b], [c, d]]` with `ad - bc = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct Mat2 {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

/// `A = s_factor * diag(sigma, 1/sigma) * r_factor`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Svd2 {
    pub s_factor: Mat2,
    pub sigma: f64,
    pub r_factor: Mat2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConjClass {
    Elliptic,
    Parabolic,
    Hyperbolic,
}

fn det_within_tolerance(a: f64, b: f64, c: f64, d: f64) -> (f64, bool) {
    let ad = a * d;
    let bc = b * c;
    let det = ad - bc;
    let scale = (ad.abs() + bc.abs()).max(1.0);
    (det, (det - 1.0).abs() <= DET_TOLERANCE * scale)
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    /// Builds `[[a, b], [c, d]]`, rejecting non-finite entries and
    /// determinants away from 1. Inputs are never renormalized.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if ![a, b, c, d].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite matrix entry in [{a}, {b}, {c}, {d}]"
            )));
        }
        let (det, ok) = det_within_tolerance(a, b, c, d);
        if !ok {
            return Err(Error::Determinant { det });
        }
        Ok(Mat2 { a, b, c, d })
    }

    pub fn from_array(m: [f64; 4]) -> Result<Self> {
        Mat2::new(m[0], m[1], m[2], m[3])
    }

    /// `diag(lambda, 1/lambda)`.
    pub fn diag(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda == 0.0 {
            return Err(Error::InvalidArgument(format!(
                "diagonal entry must be finite and nonzero, got {lambda}"
            )));
        }
        Ok(Mat2 {
            a: lambda,
            b: 0.0,
            c: 0.0,
            d: lambda.recip(),
        })
    }

    #[inline]
    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    #[inline]
    pub fn a(&self) -> f64 {
        self.a
    }
    #[inline]
    pub fn b(&self) -> f64 {
        self.b
    }
    #[inline]
    pub fn c(&self) -> f64 {
        self.c
    }
    #[inline]
    pub fn d(&self) -> f64 {
        self.d
    }

    #[inline]
    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    #[inline]
    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    /// Exact inverse `[[d, -b], [-c, a]]`.
    #[inline]
    pub fn inverse(&self) -> Mat2 {
        Mat2 {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    #[inline]
    pub fn transpose(&self) -> Mat2 {
        Mat2 {
            a: self.a,
            b: self.c,
            c: self.b,
            d: self.d,
        }
    }

    #[inline]
    pub fn neg(&self) -> Mat2 {
        Mat2 {
            a: -self.a,
            b: -self.b,
            c: -self.c,
            d: -self.d,
        }
    }

    #[inline]
    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1]]
    }

    /// Product with the determinant re-checked.
    pub fn checked_mul(&self, rhs: &Mat2) -> Result<Mat2> {
        let [a, b, c, d] = raw_mul(self.entries(), rhs.entries());
        Mat2::new(a, b, c, d)
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    /// Both singular values `(sigma_max, sigma_min)` of the raw entries.
    #[inline]
    pub(crate) fn singular_values(&self) -> (f64, f64) {
        raw_singular_values(self.entries())
    }
}

impl TryFrom<[f64; 4]> for Mat2 {
    type Error = Error;

    fn try_from(m: [f64; 4]) -> Result<Self> {
        Mat2::from_array(m)
    }
}

impl From<Mat2> for [f64; 4] {
    fn from(m: Mat2) -> Self {
        m.entries()
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        // Closed under products; rounding drift in det grows with the norms of
        // intermediate factors, so it is not re-checked here.
        let [a, b, c, d] = raw_mul(self.entries(), rhs.entries());
        Mat2 { a, b, c, d }
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: &Mat2) -> Mat2 {
        *self * *rhs
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Row-major product of two raw 2x2 matrices.
#[inline]
pub(crate) fn raw_mul(x: [f64; 4], y: [f64; 4]) -> [f64; 4] {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

/// Singular values of an arbitrary real 2x2 matrix, largest first.
#[inline]
pub(crate) fn raw_singular_values(m: [f64; 4]) -> (f64, f64) {
    let [a, b, c, d] = m;
    let p = (a + d).hypot(c - b);
    let q = (a - d).hypot(b + c);
    (0.5 * (p + q), 0.5 * (p - q).abs())
}

/// Rotation by `theta` radians.
pub fn rotation(theta: f64) -> Result<Mat2> {
    if !theta.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "rotation angle {theta} is not finite"
        )));
    }
    Ok(rotation_unchecked(theta))
}

#[inline]
pub(crate) fn rotation_unchecked(theta: f64) -> Mat2 {
    let (s, c) = theta.sin_cos();
    Mat2 {
        a: c,
        b: -s,
        c: s,
        d: c,
    }
}

/// Singular value decomposition with a deterministic choice of factors.
///
/// `r_factor` is the rotation taking the top eigenvector of `AᵀA` (angle in
/// `[0, pi)`) to `e1`; `s_factor` absorbs the rest. Isometries return
/// `S = A`, `R = I`.
pub fn svd2(m: &Mat2) -> Svd2 {
    let sigma = operator_norm(m);
    if sigma - 1.0 <= ISOMETRY_TOLERANCE {
        return Svd2 {
            s_factor: *m,
            sigma: 1.0,
            r_factor: Mat2::IDENTITY,
        };
    }
    let [a, b, c, d] = m.entries();
    let off = a * b + c * d;
    let diff = (a * a + c * c) - (b * b + d * d);
    let angle = (0.5 * (2.0 * off).atan2(diff)).rem_euclid(std::f64::consts::PI);
    let r_factor = rotation_unchecked(-angle);
    let back = rotation_unchecked(angle);
    let [sa, sb, sc, sd] = raw_mul(m.entries(), back.entries());
    let inv = sigma.recip();
    let s_factor = Mat2 {
        a: sa * inv,
        b: sb * sigma,
        c: sc * inv,
        d: sd * sigma,
    };
    Svd2 {
        s_factor,
        sigma,
        r_factor,
    }
}

/// Operator (spectral) norm; at least 1 on SL(2,R).
#[inline]
pub fn operator_norm(m: &Mat2) -> f64 {
    m.singular_values().0.max(1.0)
}

/// `log((|A| + 1/|A|) / 2)`, the mean of `log|A v|` over directions.
pub fn log_avg_norm(m: &Mat2) -> f64 {
    let sigma = operator_norm(m);
    let excess = sigma - 1.0;
    (excess * excess / (2.0 * sigma)).ln_1p()
}

/// Logarithm of the spectral radius: `acosh(|tr|/2)` when hyperbolic, else 0.
pub fn spectral_radius_log(m: &Mat2) -> f64 {
    let half = 0.5 * m.trace().abs();
    if half <= 1.0 {
        return 0.0;
    }
    let u = half - 1.0;
    (u + (u * (u + 2.0)).sqrt()).ln_1p()
}

pub fn classify(m: &Mat2) -> ConjClass {
    let excess = m.trace().abs() - 2.0;
    if excess.abs() <= PARABOLIC_TOLERANCE {
        ConjClass::Parabolic
    } else if excess < 0.0 {
        ConjClass::Elliptic
    } else {
        ConjClass::Hyperbolic
    }
}
