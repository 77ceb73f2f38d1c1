//! Space and error measurements over a sweep of `(n, eps)`.

use crate::error::Result;
use crate::pointsets;
use crate::ratio::{self, Eps};
use crate::sketch::{build_sketch, error_profile};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: u32,
    pub eps: Eps,
    pub m: usize,
    /// Serialized size without byte padding.
    pub bits: u64,
    pub bytes: usize,
    pub formula: f64,
    pub ratio: f64,
    pub max_error: u64,
    /// `eps n`, rounded up.
    pub eps_n: u64,
    pub trials: usize,
}

/// `(1/eps) log(1/eps) log log(1/eps) log n` with base-2 logs, each log
/// factor clamped below at 1 so small parameters do not zero the product.
pub fn space_formula(n: u32, eps: Eps) -> f64 {
    let inv = 1.0 / ratio::to_f64(eps);
    let lg = |x: f64| x.log2().max(1.0);
    inv * lg(inv) * lg(lg(inv)) * lg(f64::from(n))
}

/// One row: a uniform `n`-point set, its sketch, and the largest error over
/// `trials` random four-sided queries.
pub fn bench_row(n: u32, eps: Eps, trials: usize, seed: u64) -> Result<BenchRow> {
    let p = pointsets::uniform(n, n as usize, seed)?;
    let s = build_sketch(&p, eps, seed)?;
    let size = s.size_report();
    let prof = error_profile(&s, &p, trials, seed)?;
    let formula = space_formula(n, eps);
    let bits = size.payload_bits();
    Ok(BenchRow {
        n,
        eps,
        m: s.m(),
        bits,
        bytes: size.total_bytes,
        formula,
        ratio: bits as f64 / formula,
        max_error: prof.max_abs_error,
        eps_n: ratio::ceil_mul(eps, u64::from(n)),
        trials,
    })
}

/// Rows for every `(n, eps)` of the sweep, sorted by `n` then `eps`.
pub fn bench(sweep: &[(u32, Eps)], trials: usize, seed: u64) -> Result<Vec<BenchRow>> {
    let mut points = sweep.to_vec();
    points.sort();
    points.dedup();
    points
        .into_iter()
        .map(|(n, eps)| bench_row(n, eps, trials, seed))
        .collect()
}
