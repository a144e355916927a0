//! Superposition states over `N` pointer states and the lossless conversion
//! between complex amplitudes, normalized Born weights, and generalized Bloch
//! angles.
//!
//! The angle coordinates `θ_1..θ_{N-1}` encode relative weights as
//!
//! ```text
//! w_0     = sin²(θ_1/2)
//! w_j     = sin²(θ_{j+1}/2) · Π_{m=1..j} cos²(θ_m/2)     (0 < j < N-1)
//! w_{N-1} = Π_{m=1..N-1} cos²(θ_m/2)
//! ```
//!
//! so the weights sum to one identically and pointer states sit at the poles
//! `θ_m ∈ {0, π}`. Physical content is independent of the state's norm and
//! global phase; normalization is offered as a convenience, not an invariant.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Weights this close to zero are clamped before inverting the angle map, so
/// rounding noise cannot push `asin` out of its domain.
pub const WEIGHT_CLAMP: f64 = 1e-15;

/// Residual tail below which remaining angles are conventionally zero.
const TAIL_EPS: f64 = 1e-15;

/// Tolerance on `Σ w_j = 1` accepted by [`WeightVector::new`].
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Complex amplitudes `α_0..α_{N-1}` over `N ≥ 2` pointer states.
///
/// Not necessarily normalized; construction only rejects states with zero
/// squared norm. Collapse generators are real and diagonal, so amplitude
/// phases are carried along but never altered by the dynamics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::invalid(
                "state vector",
                format!("needs at least 2 pointer states, got {}", amplitudes.len()),
            ));
        }
        let state = StateVector { amplitudes };
        if !(state.norm_sqr() > 0.0) {
            return Err(Error::ZeroNorm);
        }
        Ok(state)
    }

    /// Real, non-negative amplitudes `√w_j` reproducing the given weights.
    pub fn from_weights(weights: &WeightVector) -> Self {
        StateVector {
            amplitudes: weights
                .as_slice()
                .iter()
                .map(|w| Complex64::new(w.sqrt(), 0.0))
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Generalized Bloch angles `θ_1..θ_{N-1}`, each in `[0, π]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleCoords {
    angles: Vec<f64>,
}

impl AngleCoords {
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::invalid("angles", "need at least one angle"));
        }
        for (m, &theta) in angles.iter().enumerate() {
            if !(0.0..=std::f64::consts::PI).contains(&theta) {
                return Err(Error::invalid(
                    "angles",
                    format!("θ_{} = {} is outside [0, π]", m + 1, theta),
                ));
            }
        }
        Ok(AngleCoords { angles })
    }

    /// Number of pointer states parameterized by these angles.
    pub fn n(&self) -> usize {
        self.angles.len() + 1
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.angles
    }
}

/// Normalized Born weights: non-negative entries summing to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightVector {
    weights: Vec<f64>,
}

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::invalid(
                "weights",
                format!("need at least 2 entries, got {}", weights.len()),
            ));
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0)) {
            return Err(Error::invalid("weights", format!("negative entry {w}")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::invalid(
                "weights",
                format!("sum {sum} differs from 1 by more than {WEIGHT_SUM_TOL}"),
            ));
        }
        Ok(WeightVector { weights })
    }

    /// Normalizes arbitrary non-negative entries into a weight vector.
    pub fn normalized_from(raw: Vec<f64>) -> Result<Self> {
        if raw.len() < 2 {
            return Err(Error::invalid(
                "weights",
                format!("need at least 2 entries, got {}", raw.len()),
            ));
        }
        if let Some(w) = raw.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
            return Err(Error::invalid("weights", format!("bad entry {w}")));
        }
        let sum: f64 = raw.iter().sum();
        if !(sum > 0.0) {
            return Err(Error::invalid("weights", "all entries are zero"));
        }
        Ok(WeightVector {
            weights: raw.into_iter().map(|w| w / sum).collect(),
        })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::normalized_from(vec![1.0; n.max(1)])
    }

    pub(crate) fn new_unchecked(weights: Vec<f64>) -> Self {
        debug_assert!((weights.iter().sum::<f64>() - 1.0).abs() <= WEIGHT_SUM_TOL);
        WeightVector { weights }
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }
}

/// Weights of the superposition parameterized by the given angles.
pub fn weights_from_angles(angles: &AngleCoords) -> WeightVector {
    let mut weights = vec![0.0; angles.n()];
    weights_from_angles_into(angles.as_slice(), &mut weights);
    WeightVector::new_unchecked(weights)
}

/// Slice form used by the integrator's inner loop; `out.len() == thetas.len() + 1`.
pub(crate) fn weights_from_angles_into(thetas: &[f64], out: &mut [f64]) {
    // Running product of cos²(θ_m/2); the telescoping makes the sum exactly 1.
    let mut tail = 1.0;
    for (j, &theta) in thetas.iter().enumerate() {
        let half = 0.5 * theta;
        out[j] = half.sin().powi(2) * tail;
        tail *= half.cos().powi(2);
    }
    out[thetas.len()] = tail;
}

/// Inverts the angle parameterization: `θ_{j+1} = 2·asin(√(w_j / T_j))` with
/// `T_j` the weight not yet assigned to components `< j`. Once the tail is
/// exhausted the remaining angles are conventionally zero.
pub fn angles_from_weights(weights: &WeightVector) -> AngleCoords {
    let w = weights.as_slice();
    let n = w.len();
    let mut angles = Vec::with_capacity(n - 1);
    let mut tail = 1.0;
    for &wj in &w[..n - 1] {
        let wj = if wj < WEIGHT_CLAMP { 0.0 } else { wj };
        if tail <= TAIL_EPS {
            angles.push(0.0);
            continue;
        }
        let ratio = (wj / tail).clamp(0.0, 1.0);
        angles.push(2.0 * ratio.sqrt().asin());
        tail -= wj;
    }
    AngleCoords { angles }
}

/// Norm-independent Born weights `w_j = |α_j|² / Σ_k |α_k|²`.
pub fn born_weights(state: &StateVector) -> Result<WeightVector> {
    let norm_sqr = state.norm_sqr();
    if !(norm_sqr > 0.0) {
        return Err(Error::ZeroNorm);
    }
    let weights = state
        .amplitudes()
        .iter()
        .map(|a| a.norm_sqr() / norm_sqr)
        .collect();
    Ok(WeightVector::new_unchecked(weights))
}

/// Rescales the state to unit norm. Born weights are unchanged.
pub fn normalize(state: &StateVector) -> Result<StateVector> {
    let norm_sqr = state.norm_sqr();
    if !(norm_sqr > 0.0) {
        return Err(Error::ZeroNorm);
    }
    let inv = 1.0 / norm_sqr.sqrt();
    Ok(StateVector {
        amplitudes: state.amplitudes().iter().map(|a| a * inv).collect(),
    })
}
