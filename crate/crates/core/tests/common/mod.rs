//! Shared test oracles: Kolmogorov–Smirnov statistics and random-state
//! generators, independent of the library's sampling internals.

use rand::Rng;
use suv_core::WeightVector;

/// Sup-distance between the empirical CDF of `samples` and the uniform CDF
/// on `[lo, hi]`. Sorts in place.
pub fn ks_statistic_uniform(samples: &mut [f64], lo: f64, hi: f64) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = samples.len() as f64;
    let mut sup: f64 = 0.0;
    for (i, x) in samples.iter().enumerate() {
        let cdf = ((x - lo) / (hi - lo)).clamp(0.0, 1.0);
        sup = sup.max((cdf - i as f64 / n).abs());
        sup = sup.max(((i + 1) as f64 / n - cdf).abs());
    }
    sup
}

/// Two-sample Kolmogorov–Smirnov statistic. Sorts both samples in place.
pub fn ks_two_sample(a: &mut [f64], b: &mut [f64]) -> f64 {
    a.sort_by(|x, y| x.partial_cmp(y).unwrap());
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut sup: f64 = 0.0;
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        sup = sup.max((i as f64 / na - j as f64 / nb).abs());
    }
    sup
}

/// Random weight vector with every component at least `floor` (so interval
/// blocks stay resolvable).
pub fn random_weights(rng: &mut impl Rng, n: usize, floor: f64) -> WeightVector {
    let raw: Vec<f64> = (0..n).map(|_| floor + rng.gen_range(0.0..1.0)).collect();
    WeightVector::normalized_from(raw).unwrap()
}
