use num_complex::Complex64;
use rayon::prelude::*;

/// Index range processed by one task in [`indexed_sum`]; fixed so that the
/// reduction tree does not depend on the number of threads.
pub const BLOCK: usize = 4096;

pub fn pairwise_sum(v: &[Complex64]) -> Complex64 {
    if v.len() <= 16 {
        v.iter().fold(Complex64::new(0.0, 0.0), |acc, x| acc + x)
    } else {
        let mid = v.len() / 2;
        pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
    }
}

pub fn pairwise_sum_f64(v: &[f64]) -> f64 {
    if v.len() <= 16 {
        v.iter().sum()
    } else {
        let mid = v.len() / 2;
        pairwise_sum_f64(&v[..mid]) + pairwise_sum_f64(&v[mid..])
    }
}

/// `Σ_{i<n} f(i)`, evaluated in parallel over fixed blocks and reduced pairwise.
pub fn indexed_sum<F>(n: usize, f: F) -> Complex64
where
    F: Fn(usize) -> Complex64 + Sync,
{
    let nblocks = n.div_ceil(BLOCK);
    let partial: Vec<Complex64> = (0..nblocks)
        .into_par_iter()
        .map(|b| {
            let lo = b * BLOCK;
            let hi = (lo + BLOCK).min(n);
            let vals: Vec<Complex64> = (lo..hi).map(&f).collect();
            pairwise_sum(&vals)
        })
        .collect();
    pairwise_sum(&partial)
}

pub fn indexed_sum_f64<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let nblocks = n.div_ceil(BLOCK);
    let partial: Vec<f64> = (0..nblocks)
        .into_par_iter()
        .map(|b| {
            let lo = b * BLOCK;
            let hi = (lo + BLOCK).min(n);
            let vals: Vec<f64> = (lo..hi).map(&f).collect();
            pairwise_sum_f64(&vals)
        })
        .collect();
    pairwise_sum_f64(&partial)
}
