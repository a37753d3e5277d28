//! Equal-weight trapezoid rule for periodic integrands.
//!
//! Node values are evaluated in parallel and reduced by pairwise summation in
//! a fixed order, so a given node count always yields the same bits.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

pub const MIN_NODES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: f64,
    /// `|value_N - value_{N/2}|`, from the even-indexed sub-rule.
    pub error_estimate: f64,
    pub nodes: usize,
}

/// Pairwise (tree) sum. Deterministic for a given slice.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 8;
    if xs.len() <= LEAF {
        return xs.iter().sum();
    }
    let (lo, hi) = xs.split_at(xs.len() / 2);
    pairwise_sum(lo) + pairwise_sum(hi)
}

fn check_nodes(nodes: usize) -> Result<()> {
    if nodes < MIN_NODES || !nodes.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "node count must be even and at least {MIN_NODES}, got {nodes}"
        )));
    }
    Ok(())
}

/// Integrates `f` over `[start, start + length)` with `nodes` equispaced points.
pub fn periodic_trapezoid<F>(f: F, start: f64, length: f64, nodes: usize) -> Result<QuadResult>
where
    F: Fn(f64) -> f64 + Sync,
{
    try_periodic_trapezoid(|x| Ok(f(x)), start, length, nodes)
}

/// As [`periodic_trapezoid`] for integrands that can fail.
pub fn try_periodic_trapezoid<F>(f: F, start: f64, length: f64, nodes: usize) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let mut out = try_periodic_trapezoid_vec(|x| Ok(vec![f(x)?]), 1, start, length, nodes)?;
    Ok(out.remove(0))
}

/// Integrates a vector-valued integrand of fixed dimension `dim`, one
/// [`QuadResult`] per component. All components share the node evaluations.
pub fn try_periodic_trapezoid_vec<F>(
    f: F,
    dim: usize,
    start: f64,
    length: f64,
    nodes: usize,
) -> Result<Vec<QuadResult>>
where
    F: Fn(f64) -> Result<Vec<f64>> + Sync,
{
    check_nodes(nodes)?;
    if !(start.is_finite() && length.is_finite() && length > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "bad integration period: start {start}, length {length}"
        )));
    }
    let step = length / nodes as f64;
    let samples: Vec<Vec<f64>> = (0..nodes)
        .into_par_iter()
        .map(|i| {
            let x = start + i as f64 * step;
            let values = f(x)?;
            debug_assert_eq!(values.len(), dim);
            match values.iter().find(|v| !v.is_finite()) {
                Some(&value) => Err(Error::NonFiniteSample { node: i, x, value }),
                None => Ok(values),
            }
        })
        .collect::<Result<_>>()?;

    (0..dim)
        .map(|c| {
            let column: Vec<f64> = samples.iter().map(|s| s[c]).collect();
            trapezoid_from_samples(&column, length)
        })
        .collect()
}

/// Trapezoid value from equispaced samples covering one period of `length`.
pub fn trapezoid_from_samples(samples: &[f64], length: f64) -> Result<QuadResult> {
    let nodes = samples.len();
    check_nodes(nodes)?;
    let step = length / nodes as f64;
    let even: Vec<f64> = samples.iter().step_by(2).copied().collect();
    let odd: Vec<f64> = samples.iter().skip(1).step_by(2).copied().collect();
    let sum_even = pairwise_sum(&even);
    let sum_odd = pairwise_sum(&odd);
    let value = (sum_even + sum_odd) * step;
    let coarse = sum_even * (2.0 * step);
    Ok(QuadResult {
        value,
        error_estimate: (value - coarse).abs(),
        nodes,
    })
}

impl QuadResult {
    /// Multiplies value and error estimate by `factor`.
    pub fn scaled(self, factor: f64) -> QuadResult {
        QuadResult {
            value: self.value * factor,
            error_estimate: self.error_estimate * factor.abs(),
            nodes: self.nodes,
        }
    }
}
