//! Right-hand sides of the four collapse models.
//!
//! Every generator is real and diagonal in the pointer basis and couples
//! non-linearly to the normalized weights, plus linearly to a stochastic draw
//! whose distribution does not depend on the state:
//!
//! * two-state: `G_0 = (|α_0|² − |α_1|²)/(|α_0|² + |α_1|²) − ξ`, `G_1 = −G_0`;
//!   in angle form `dθ/dt = rate·sin(θ)(ξ − cos θ)`.
//! * single-λ: `dθ_n/dt = rate·sin(θ_n)/L_n` with
//!   `L_n = 1 − Π_{m≤n} cos²(θ_m/2) − λ`; the hypersurfaces `L_n = 0` are the
//!   separatrices, located at the cumulative weights.
//! * sequential: stage `m` carries `η^m` and decides pointer `m` against the
//!   remaining tail (`G_j` of [`g_sequential`]).
//! * bisection: stage `p` carries `η^p` and decides between the halves of a
//!   recursive sign partition `Θ(j,p) = (−1)^⌊j·2^{p+1}/N⌋`.
//!
//! Only the combined constant `rate = ε𝒩/ħ` enters any equation of motion;
//! ε and 𝒩 never appear separately. An overall rescaling of a generator
//! changes collapse speed but neither fixed points nor separatrices.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::state::{born_weights, AngleCoords, StateVector, WeightVector};

/// Below this |L_n| the single-λ velocity denominator is floored (sign kept).
/// The 1/L_n divergence is an artifact of absorbing the common factor
/// Π L_m² into the rate; outcomes depend only on the sign structure.
pub const EPS_SEP: f64 = 1e-9;

/// Tail guard for `P_j` in the sequential generator: a fully decided stage
/// contributes a zero bracket (the 0/0 only occurs after that stage's
/// outcome is already fixed).
pub const EPS_TAIL: f64 = 1e-12;

/// Which collapse flow drives the dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModelKind {
    TwoState,
    SingleLambda,
    Sequential,
    Bisection,
}

/// A collapse model together with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelSpec {
    kind: ModelKind,
    n: usize,
    rate: f64,
    eta: f64,
}

impl ModelSpec {
    pub fn new(kind: ModelKind, n: usize, rate: f64, eta: f64) -> Result<Self> {
        if !(rate > 0.0) || !rate.is_finite() {
            return Err(Error::invalid("rate", format!("must be positive, got {rate}")));
        }
        if n < 2 {
            return Err(Error::invalid("n", format!("need at least 2 pointer states, got {n}")));
        }
        match kind {
            ModelKind::TwoState => {
                if n != 2 {
                    return Err(Error::ModelMismatch(format!(
                        "two-state model requires N = 2, got {n}"
                    )));
                }
            }
            ModelKind::SingleLambda => {}
            ModelKind::Sequential | ModelKind::Bisection => {
                if !(eta > 0.0 && eta <= 1.0) {
                    return Err(Error::invalid("eta", format!("must be in (0, 1], got {eta}")));
                }
                if kind == ModelKind::Bisection && !n.is_power_of_two() {
                    return Err(Error::UnsupportedN { n });
                }
            }
        }
        Ok(ModelSpec { kind, n, rate, eta })
    }

    pub fn two_state(rate: f64) -> Result<Self> {
        Self::new(ModelKind::TwoState, 2, rate, 1.0)
    }

    pub fn single_lambda(n: usize, rate: f64) -> Result<Self> {
        Self::new(ModelKind::SingleLambda, n, rate, 1.0)
    }

    pub fn sequential(n: usize, rate: f64, eta: f64) -> Result<Self> {
        Self::new(ModelKind::Sequential, n, rate, eta)
    }

    pub fn bisection(n: usize, rate: f64, eta: f64) -> Result<Self> {
        Self::new(ModelKind::Bisection, n, rate, eta)
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn with_rate(&self, rate: f64) -> Result<Self> {
        Self::new(self.kind, self.n, rate, self.eta)
    }

    pub fn with_eta(&self, eta: f64) -> Result<Self> {
        Self::new(self.kind, self.n, self.rate, eta)
    }

    /// How many stochastic variables one realisation of the model consumes.
    pub fn draw_count(&self) -> usize {
        match self.kind {
            ModelKind::TwoState | ModelKind::SingleLambda => 1,
            ModelKind::Sequential => self.n - 1,
            ModelKind::Bisection => self.n.trailing_zeros() as usize,
        }
    }

    /// The convention the model's draws are natively sampled in.
    pub fn draw_convention(&self) -> DrawConvention {
        match self.kind {
            ModelKind::TwoState | ModelKind::Bisection => DrawConvention::Xi,
            ModelKind::SingleLambda | ModelKind::Sequential => DrawConvention::Lambda,
        }
    }
}

/// Interval convention of a stochastic draw: `ξ ∈ [−1,1]` or `λ ∈ [0,1]`,
/// related by `λ = (ξ+1)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DrawConvention {
    Xi,
    Lambda,
}

/// The stochastic variables of one realisation, all sampled once at `t = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StochasticDraw {
    convention: DrawConvention,
    values: Vec<f64>,
}

impl StochasticDraw {
    pub fn xi(values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !(-1.0..=1.0).contains(*v)) {
            return Err(Error::invalid("draw", format!("ξ = {v} outside [-1, 1]")));
        }
        Ok(StochasticDraw {
            convention: DrawConvention::Xi,
            values,
        })
    }

    pub fn lambda(values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::invalid("draw", format!("λ = {v} outside [0, 1]")));
        }
        Ok(StochasticDraw {
            convention: DrawConvention::Lambda,
            values,
        })
    }

    pub fn convention(&self) -> DrawConvention {
        self.convention
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Values in the ξ convention (`ξ = 2λ − 1`).
    pub fn to_xi(&self) -> Vec<f64> {
        match self.convention {
            DrawConvention::Xi => self.values.clone(),
            DrawConvention::Lambda => self.values.iter().map(|l| 2.0 * l - 1.0).collect(),
        }
    }

    /// Values in the λ convention (`λ = (ξ + 1)/2`).
    pub fn to_lambda(&self) -> Vec<f64> {
        match self.convention {
            DrawConvention::Lambda => self.values.clone(),
            DrawConvention::Xi => self.values.iter().map(|x| 0.5 * (x + 1.0)).collect(),
        }
    }
}

/// Diagonal elements `G_j` of a collapse generator in the pointer basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratorDiagonal {
    entries: Vec<f64>,
}

impl GeneratorDiagonal {
    fn new(entries: Vec<f64>) -> Self {
        debug_assert!(entries.iter().all(|g| g.is_finite()));
        GeneratorDiagonal { entries }
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }
}

/// `sin θ`, exactly zero at the poles so pointer states are exact fixed
/// points (f64 `sin(π)` is ~1e-16, not 0).
#[inline]
pub(crate) fn pole_safe_sin(theta: f64) -> f64 {
    if theta == 0.0 || theta == std::f64::consts::PI {
        0.0
    } else {
        theta.sin()
    }
}

/// Two-state generator diagonal for `ξ ∈ [−1,1]`.
///
/// Basis note: index 0 carries `|α_0| = sin(θ/2)`, so `θ = π` puts all weight
/// on index 0.
pub fn g_two_state(state: &StateVector, xi: f64) -> Result<GeneratorDiagonal> {
    if state.n() != 2 {
        return Err(Error::ModelMismatch(format!(
            "two-state generator requires N = 2, got {}",
            state.n()
        )));
    }
    let a0 = state.amplitudes()[0].norm_sqr();
    let a1 = state.amplitudes()[1].norm_sqr();
    let g0 = (a0 - a1) / (a0 + a1) - xi;
    Ok(GeneratorDiagonal::new(vec![g0, -g0]))
}

/// Angle-form two-state velocity `rate·sin(θ)(ξ − cos θ)`.
pub fn theta_velocity_two_state(theta: f64, xi: f64, rate: f64) -> f64 {
    rate * pole_safe_sin(theta) * (xi - theta.cos())
}

/// Cumulative weights `c_n = Σ_{j<n} w_j` for `n = 1..N−1`: the boundary
/// values of λ separating the outcome blocks of the unit interval.
pub fn separatrix_values(weights: &WeightVector) -> Vec<f64> {
    let w = weights.as_slice();
    let mut acc = 0.0;
    w[..w.len() - 1]
        .iter()
        .map(|wj| {
            acc += wj;
            acc
        })
        .collect()
}

#[inline]
pub(crate) fn single_lambda_velocities_into(
    thetas: &[f64],
    lambda: f64,
    rate: f64,
    out: &mut [f64],
) {
    let mut cos_prod = 1.0;
    for (i, &theta) in thetas.iter().enumerate() {
        cos_prod *= (0.5 * theta).cos().powi(2);
        let l_n = (1.0 - cos_prod) - lambda;
        let s = pole_safe_sin(theta);
        out[i] = if s == 0.0 {
            0.0
        } else {
            let denom = if l_n.abs() < EPS_SEP {
                EPS_SEP.copysign(l_n)
            } else {
                l_n
            };
            rate * s / denom
        };
    }
}

/// Angle velocities `dθ_n/dt = rate·sin(θ_n)/L_n` of the single-λ model.
///
/// `λ` below `c_n` drives `θ_n` toward π, above toward 0, so the outcome is
/// the block of the unit-interval partition that `λ` falls into. Near a
/// separatrix the denominator is floored at [`EPS_SEP`] with its sign kept;
/// the integrator additionally caps the per-step angle change.
pub fn theta_velocity_single_lambda(angles: &AngleCoords, lambda: f64, rate: f64) -> Vec<f64> {
    let mut out = vec![0.0; angles.as_slice().len()];
    single_lambda_velocities_into(angles.as_slice(), lambda, rate, &mut out);
    out
}

#[inline]
pub(crate) fn sequential_velocities_into(
    thetas: &[f64],
    lambdas: &[f64],
    eta: f64,
    rate: f64,
    out: &mut [f64],
) {
    // Stage m−1 drives θ_m, so the first angle carries η⁰.
    let mut eta_pow = 1.0;
    for (i, &theta) in thetas.iter().enumerate() {
        let cos2 = (0.5 * theta).cos().powi(2);
        out[i] = rate * eta_pow * pole_safe_sin(theta) * (lambdas[i] - cos2);
        eta_pow *= eta;
    }
}

/// Angle velocities `dθ_m/dt = rate·η^{m−1}·sin(θ_m)(λ_m − cos²(θ_m/2))` of
/// the sequential model, `m = 1..N−1`.
pub fn theta_velocity_sequential(
    angles: &AngleCoords,
    draws: &StochasticDraw,
    eta: f64,
    rate: f64,
) -> Vec<f64> {
    assert_eq!(
        draws.convention(),
        DrawConvention::Lambda,
        "sequential angle velocities take λ-convention draws"
    );
    assert_eq!(draws.len(), angles.as_slice().len(), "need N-1 draws");
    let mut out = vec![0.0; angles.as_slice().len()];
    sequential_velocities_into(angles.as_slice(), draws.values(), eta, rate, &mut out);
    out
}

#[inline]
pub(crate) fn sequential_g_into(weights: &[f64], xi: &[f64], eta: f64, g: &mut [f64]) {
    let n = weights.len();
    // Suffix sums P_j into g as scratch; each g[j] is overwritten only after
    // its suffix value has been consumed.
    g[n - 1] = weights[n - 1];
    for j in (0..n - 1).rev() {
        g[j] = g[j + 1] + weights[j];
    }
    let mut prefix = 0.0;
    let mut eta_pow = 1.0;
    for j in 0..n - 1 {
        let p_j = g[j];
        let p_next = g[j + 1];
        let bracket = if p_j < EPS_TAIL {
            0.0
        } else {
            (weights[j] - p_next) / p_j - xi[j]
        };
        g[j] = eta_pow * bracket - prefix;
        prefix += eta_pow * bracket;
        eta_pow *= eta;
    }
    g[n - 1] = -prefix;
}

/// Sequential generator diagonal from ξ-convention draws of length N−1.
///
/// With `P_m = Σ_{j≥m} w_j` on normalized weights, stage j contributes the
/// bracket `(w_j − P_{j+1})/P_j − ξ_j` scaled by `η^j`; each `G_j` carries its
/// own stage bracket minus the sum of all earlier ones, and `G_{N−1}` the
/// negated sum of all stages. Stages whose `P_j` has emptied contribute zero.
pub fn g_sequential(state: &StateVector, draws: &StochasticDraw, eta: f64) -> GeneratorDiagonal {
    assert_eq!(
        draws.convention(),
        DrawConvention::Xi,
        "sequential generator takes ξ-convention draws"
    );
    assert_eq!(draws.len(), state.n() - 1, "need N-1 draws");
    let weights = born_weights(state).expect("StateVector guarantees nonzero norm");
    let mut g = vec![0.0; state.n()];
    sequential_g_into(weights.as_slice(), draws.values(), eta, &mut g);
    GeneratorDiagonal::new(g)
}

/// Sign partition `Θ(j,p) = (−1)^⌊j·2^{p+1}/N⌋`, the stage-`p` bipartition of
/// the pointer states.
pub fn sign_partition(j: usize, p: u32, n: usize) -> f64 {
    assert!(j < n, "pointer index {j} out of range for N = {n}");
    let scaled = (j as u128) << (p + 1);
    if (scaled / n as u128) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Θ for power-of-two N and p < log₂N, by bit arithmetic.
#[inline]
fn theta_sign_pow2(j: usize, p: u32, log2_n: u32) -> f64 {
    if (j >> (log2_n - p - 1)) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[inline]
pub(crate) fn bisection_g_into(weights: &[f64], xi: &[f64], eta: f64, g: &mut [f64]) {
    let n = weights.len();
    let log2_n = n.trailing_zeros();
    g.fill(0.0);
    let mut eta_pow = 1.0;
    for (p, &xi_p) in xi.iter().enumerate() {
        let p = p as u32;
        let mut imbalance = 0.0;
        for (j, &w) in weights.iter().enumerate() {
            imbalance += theta_sign_pow2(j, p, log2_n) * w;
        }
        let term = imbalance - xi_p;
        for (j, gj) in g.iter_mut().enumerate() {
            *gj += eta_pow * theta_sign_pow2(j, p, log2_n) * term;
        }
        eta_pow *= eta;
    }
}

/// Bisection generator diagonal from ξ-convention draws of length log₂N:
/// `G_j = Σ_p η^p Θ(j,p) [Σ_{j'} Θ(j',p) |α_{j'}|²/Q − ξ_p]`.
pub fn g_bisection(
    state: &StateVector,
    draws: &StochasticDraw,
    eta: f64,
) -> Result<GeneratorDiagonal> {
    let n = state.n();
    if !n.is_power_of_two() {
        return Err(Error::UnsupportedN { n });
    }
    assert_eq!(
        draws.convention(),
        DrawConvention::Xi,
        "bisection generator takes ξ-convention draws"
    );
    assert_eq!(draws.len(), n.trailing_zeros() as usize, "need log2(N) draws");
    let weights = born_weights(state)?;
    let mut g = vec![0.0; n];
    bisection_g_into(weights.as_slice(), draws.values(), eta, &mut g);
    Ok(GeneratorDiagonal::new(g))
}
