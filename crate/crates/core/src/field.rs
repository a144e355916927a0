//! Reproducible stochastic draws and the continuum limit of the bisection
//! model: the sign function `θ(x,p)`, random field `Λ(x)`, propagator kernel
//! `Π(x,x′)`, and the generator `G(x)` on a uniform grid over `[0,1]`.
//!
//! All sampling is a pure function of a [`SeedSpec`]; distinct stream indices
//! give independent streams of the same master seed.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::{DrawConvention, StochasticDraw};

/// Master seed plus a per-trajectory stream index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        SeedSpec {
            master_seed,
            stream_index,
        }
    }

    /// The deterministic RNG for this (seed, stream) pair.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

/// Parameters of the continuum generator: hierarchy parameter, ultraviolet
/// cutoff γ (highest fine-graining stage retained), and grid resolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldSpec {
    eta: f64,
    gamma: u32,
    grid_points: usize,
}

/// Cutoff used when none is requested; η^16 is far below statistical
/// resolution for every η ≤ 0.5 of interest.
pub const DEFAULT_GAMMA: u32 = 16;

impl FieldSpec {
    pub fn new(eta: f64, gamma: u32, grid_points: usize) -> Result<Self> {
        if !(0.0..1.0).contains(&eta) {
            return Err(Error::invalid("eta", format!("must be in [0, 1), got {eta}")));
        }
        if grid_points < 2 {
            return Err(Error::invalid(
                "grid_points",
                format!("need at least 2, got {grid_points}"),
            ));
        }
        Ok(FieldSpec {
            eta,
            gamma,
            grid_points,
        })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn gamma(&self) -> u32 {
        self.gamma
    }

    pub fn grid_points(&self) -> usize {
        self.grid_points
    }

    /// Number of stochastic variables one field realisation consumes (γ+1).
    pub fn draw_count(&self) -> usize {
        self.gamma as usize + 1
    }

    /// Analytic bound on |Λ(x)|: `Σ_{p≤γ} η^p = (1 − η^{γ+1})/(1 − η)`.
    pub fn field_bound(&self) -> f64 {
        if self.eta == 0.0 {
            1.0
        } else {
            (1.0 - self.eta.powi(self.gamma as i32 + 1)) / (1.0 - self.eta)
        }
    }

    /// Midpoint of grid cell `i`: `x_i = (i + ½)/M`.
    pub fn grid_x(&self, i: usize) -> f64 {
        (i as f64 + 0.5) / self.grid_points as f64
    }
}

/// `count` i.i.d. uniform draws in the given convention, deterministic in the
/// seed.
pub fn draw_uniform(seed: SeedSpec, count: usize, convention: DrawConvention) -> StochasticDraw {
    let mut rng = seed.rng();
    draw_uniform_with(&mut rng, count, convention)
}

pub(crate) fn draw_uniform_with(
    rng: &mut impl Rng,
    count: usize,
    convention: DrawConvention,
) -> StochasticDraw {
    let values: Vec<f64> = match convention {
        DrawConvention::Xi => (0..count).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        DrawConvention::Lambda => (0..count).map(|_| rng.gen_range(0.0..1.0)).collect(),
    };
    match convention {
        DrawConvention::Xi => StochasticDraw::xi(values).expect("in range by construction"),
        DrawConvention::Lambda => StochasticDraw::lambda(values).expect("in range by construction"),
    }
}

/// Continuum sign function `θ(x,p) = (−1)^⌊x·2^{p+1}⌋`: a square wave with
/// `2^{p+1}` segments on `[0,1)`.
pub fn sign_partition_continuum(x: f64, p: u32) -> f64 {
    debug_assert!((0.0..1.0).contains(&x), "x = {x} outside [0, 1)");
    let scaled = x * f64::exp2((p + 1) as f64);
    if (scaled.floor() as i64) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Value of the random field `Λ(x) = −Σ_{p≤γ} η^p ξ_p θ(x,p)` for one draw
/// set of length γ+1.
pub fn random_field_sample(draws: &StochasticDraw, spec: &FieldSpec, x: f64) -> f64 {
    assert_eq!(
        draws.convention(),
        DrawConvention::Xi,
        "field samples take ξ-convention draws"
    );
    assert_eq!(draws.len(), spec.draw_count(), "need γ+1 draws");
    let mut acc = 0.0;
    let mut eta_pow = 1.0; // 0⁰ := 1, so η = 0 keeps only stage p = 0
    for (p, &xi_p) in draws.values().iter().enumerate() {
        acc -= eta_pow * xi_p * sign_partition_continuum(x, p as u32);
        eta_pow *= spec.eta();
    }
    acc
}

/// Propagator kernel `Π(x,x′) = Σ_{p≤γ} η^p θ(x,p) θ(x′,p)`.
pub fn propagator_kernel(x: f64, x_prime: f64, spec: &FieldSpec) -> f64 {
    let mut acc = 0.0;
    let mut eta_pow = 1.0;
    for p in 0..=spec.gamma() {
        acc += eta_pow * sign_partition_continuum(x, p) * sign_partition_continuum(x_prime, p);
        eta_pow *= spec.eta();
    }
    acc
}

/// Continuum generator on the midpoint grid:
/// `G(x_i) = Λ(x_i) + (1/M) Σ_{i′} Π(x_i, x_{i′}) |ψ(x_{i′})|² / Q` with
/// `Q = (1/M) Σ |ψ(x_i)|²` (midpoint quadrature of the x′ integral).
///
/// With `M = N = 2^{γ+1}` and ψ concentrated on grid cells this reproduces
/// the discrete bisection generator exactly.
pub fn continuum_generator(
    psi: &[Complex64],
    draws: &StochasticDraw,
    spec: &FieldSpec,
) -> Result<Vec<f64>> {
    assert_eq!(psi.len(), spec.grid_points(), "ψ grid must match spec");
    assert_eq!(draws.len(), spec.draw_count(), "need γ+1 draws");
    let m = psi.len();
    let norm_sqr: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
    if !(norm_sqr > 0.0) {
        return Err(Error::ZeroNorm);
    }
    // The double sum factorizes per stage: (1/M)/Q = 1/Σ|ψ|².
    let xi = draws.to_xi();
    let mut g = vec![0.0; m];
    let mut eta_pow = 1.0;
    for (p, &xi_p) in xi.iter().enumerate() {
        let p = p as u32;
        let mut imbalance = 0.0;
        for (i, amp) in psi.iter().enumerate() {
            imbalance += sign_partition_continuum(spec.grid_x(i), p) * amp.norm_sqr();
        }
        imbalance /= norm_sqr;
        let term = imbalance - xi_p;
        for (i, gi) in g.iter_mut().enumerate() {
            *gi += eta_pow * sign_partition_continuum(spec.grid_x(i), p) * term;
        }
        eta_pow *= spec.eta();
    }
    Ok(g)
}

/// Empirical histogram of `Λ(x)` over i.i.d. draw sets, with uniform bin
/// edges on the analytic support `[−S, S]`, `S = (1 − η^{γ+1})/(1 − η)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn bin_width(&self) -> f64 {
        self.edges[1] - self.edges[0]
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges
            .windows(2)
            .map(|e| 0.5 * (e[0] + e[1]))
            .collect()
    }

    /// Densities normalized so that `Σ density·bin_width = 1`.
    pub fn densities(&self) -> Vec<f64> {
        let total: u64 = self.counts.iter().sum();
        let norm = 1.0 / (total as f64 * self.bin_width());
        self.counts.iter().map(|c| *c as f64 * norm).collect()
    }
}

/// Samples the distribution of `Λ(x)` at a fixed `x`; deterministic in the
/// seed.
pub fn field_pdf_histogram(
    spec: &FieldSpec,
    x: f64,
    samples: u64,
    bins: usize,
    seed: SeedSpec,
) -> Result<Histogram> {
    if samples < 1 {
        return Err(Error::invalid("samples", "need at least one sample"));
    }
    if bins < 2 {
        return Err(Error::invalid("bins", format!("need at least 2 bins, got {bins}")));
    }
    let bound = spec.field_bound();
    let width = 2.0 * bound / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|i| -bound + i as f64 * width).collect();
    let mut counts = vec![0u64; bins];
    let mut rng = seed.rng();
    for _ in 0..samples {
        let draws = draw_uniform_with(&mut rng, spec.draw_count(), DrawConvention::Xi);
        let value = random_field_sample(&draws, spec, x);
        let idx = (((value + bound) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    Ok(Histogram { edges, counts })
}
