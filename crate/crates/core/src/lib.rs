//! Numerical machinery for SL(2,R) cocycles over circle rotations.
//!
//! * [`sl2`]: closed-form 2x2 kernels (rotation, SVD, norm, spectral radius).
//! * [`projective`]: the action on the projective line, `H_A`, `rho_A` and the
//!   SVD-derived involution `Psi_A`.
//! * [`words`]: matrix words, the implicit branch functions `H_j`, the `J_k`
//!   integrals and the theta-average of the spectral radius.
//! * [`quadrature`]: deterministic periodic trapezoid rule.
//! * [`lyapunov`]: orbit estimates of fiber Lyapunov exponents and their
//!   averages over the rotated family `R_theta A`.
//!
//! The central identity checked throughout: for any word `(A_1, ..., A_n)`,
//!
//! ```text
//! (1/2pi) ∫ rho(R_theta A_1 ... R_theta A_n) dtheta = Σ_k log((|A_k| + 1/|A_k|) / 2)
//! ```
//!
//! ```
//! use cocycle_lab::sl2::{log_avg_norm, Mat2};
//! use cocycle_lab::words::{avg_spectral_radius, MatrixWord};
//!
//! let a = Mat2::diag(2.0).unwrap();
//! let avg = avg_spectral_radius(&MatrixWord::single(a), 1 << 16).unwrap();
//! assert!((avg.value - log_avg_norm(&a)).abs() < 1e-5);
//! ```

pub mod error;
pub mod lyapunov;
pub mod projective;
pub mod quadrature;
pub mod random;
pub mod sl2;
pub mod wordfile;
pub mod words;

pub use error::{Error, Result};
pub use projective::ProjPoint;
pub use sl2::Mat2;
pub use words::MatrixWord;
