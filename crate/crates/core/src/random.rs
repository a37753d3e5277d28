//! Seeded generators for test matrices, words and points.
//!
//! Matrices: entries uniform in `[-2, 2]`, first column divided by the
//! determinant, rejected when the condition number `|A|^2` exceeds
//! [`MAX_CONDITION`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::projective::ProjPoint;
use crate::sl2::{operator_norm, Mat2};
use crate::words::MatrixWord;

pub const MAX_CONDITION: f64 = 1e3;

/// Deterministic source for every seeded experiment.
#[derive(Clone, Debug)]
pub struct SeededSource {
    rng: ChaCha8Rng,
}

impl SeededSource {
    pub fn new(seed: u64) -> Self {
        SeededSource {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    pub fn index(&mut self, len: usize) -> usize {
        self.rng.gen_range(0..len)
    }

    pub fn matrix(&mut self) -> Mat2 {
        loop {
            let [a, b, c, d]: [f64; 4] = std::array::from_fn(|_| self.rng.gen_range(-2.0..=2.0));
            let det = a * d - b * c;
            if det.abs() < 1e-3 {
                continue;
            }
            let Ok(m) = Mat2::new(a / det, b, c / det, d) else {
                continue;
            };
            let norm = operator_norm(&m);
            if norm * norm <= MAX_CONDITION {
                return m;
            }
        }
    }

    /// A matrix whose operator norm exceeds `1 + margin`.
    pub fn non_orthogonal_matrix(&mut self, margin: f64) -> Mat2 {
        loop {
            let m = self.matrix();
            if operator_norm(&m) > 1.0 + margin {
                return m;
            }
        }
    }

    pub fn word(&mut self, len: usize) -> MatrixWord {
        let letters = (0..len.max(1)).map(|_| self.matrix()).collect();
        MatrixWord::new(letters).expect("non-empty word")
    }

    pub fn point(&mut self) -> ProjPoint {
        ProjPoint::new(self.rng.gen_range(0.0..std::f64::consts::PI))
    }
}
