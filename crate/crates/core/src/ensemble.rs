//! Trajectory ensembles, Born-deviation metrics, and parameter sweeps.
//!
//! Trajectory `i` of an ensemble uses stream index `i` of the master seed, so
//! reports are deterministic and independent of scheduling: trajectories run
//! in parallel, results are assembled in stream order by commutative merges.
//!
//! The figure of merit is the L1 Born deviation
//! `Σ_j |counts_j/Σcounts − w_j(0)|`: the distance between the empirical
//! outcome distribution and the initial weights. The deviation-vs-time series
//! classifies each trajectory by its running argmax weight at logarithmically
//! spaced checkpoints (the threshold still decides the final outcome), which
//! matches the smooth early-time behavior of the deviation curves.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::SeedSpec;
use crate::generators::{ModelKind, ModelSpec, StochasticDraw};
use crate::integrate::{sample_model_draws, trace_trajectory, HaltReason, IntegratorConfig};
use crate::state::WeightVector;

/// Number of logarithmically spaced classification checkpoints.
pub const CHECKPOINT_COUNT: usize = 64;

/// Checkpoint times between `dt` and `dt·max_steps`.
pub fn checkpoint_times(cfg: &IntegratorConfig) -> Vec<f64> {
    let t0 = cfg.dt;
    let ratio = cfg.max_steps as f64;
    (0..CHECKPOINT_COUNT)
        .map(|i| t0 * ratio.powf(i as f64 / (CHECKPOINT_COUNT - 1) as f64))
        .collect()
}

/// Aggregated outcome of an ensemble of trajectories.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleReport {
    pub model: ModelSpec,
    pub initial: WeightVector,
    pub n_trajectories: u64,
    /// Threshold outcomes; unresolved (max-steps) trajectories are excluded
    /// here and reported separately.
    pub outcome_counts: Vec<u64>,
    pub unresolved_count: u64,
    pub master_seed: u64,
    /// Untrimmed checkpoint grid and per-checkpoint argmax classification
    /// counts; kept raw so reports merge by addition.
    pub checkpoint_times: Vec<f64>,
    pub checkpoint_counts: Vec<Vec<u64>>,
    pub max_halt_time: f64,
    /// `(t, L1 deviation)` pairs, trimmed just past the last halt.
    pub deviation_series: Vec<(f64, f64)>,
}

impl EnsembleReport {
    fn assemble(
        model: ModelSpec,
        initial: WeightVector,
        master_seed: u64,
        checkpoints: Vec<f64>,
        summaries: Vec<crate::integrate::TraceSummary>,
    ) -> EnsembleReport {
        let n = model.n();
        let mut outcome_counts = vec![0u64; n];
        let mut unresolved_count = 0u64;
        let mut checkpoint_counts = vec![vec![0u64; n]; checkpoints.len()];
        let mut max_halt_time: f64 = 0.0;
        for s in &summaries {
            match s.outcome {
                Some(j) => outcome_counts[j] += 1,
                None => unresolved_count += 1,
            }
            debug_assert_eq!(s.outcome.is_none(), s.halted_reason == HaltReason::MaxSteps);
            for (k, &j) in s.argmax_at.iter().enumerate() {
                checkpoint_counts[k][j as usize] += 1;
            }
            max_halt_time = max_halt_time.max(s.halt_time);
        }
        let mut report = EnsembleReport {
            model,
            initial,
            n_trajectories: summaries.len() as u64,
            outcome_counts,
            unresolved_count,
            master_seed,
            checkpoint_times: checkpoints,
            checkpoint_counts,
            max_halt_time,
            deviation_series: Vec::new(),
        };
        report.deviation_series = report.derive_deviation_series();
        report
    }

    fn derive_deviation_series(&self) -> Vec<(f64, f64)> {
        let w0 = self.initial.as_slice();
        let n_total = self.n_trajectories as f64;
        let last = self
            .checkpoint_times
            .iter()
            .position(|t| *t >= self.max_halt_time)
            .unwrap_or(self.checkpoint_times.len() - 1);
        self.checkpoint_times[..=last]
            .iter()
            .zip(&self.checkpoint_counts)
            .map(|(t, counts)| {
                let dev: f64 = counts
                    .iter()
                    .zip(w0)
                    .map(|(c, w)| (*c as f64 / n_total - w).abs())
                    .sum();
                (*t, dev)
            })
            .collect()
    }

    /// L1 deviation of the final (threshold) outcome distribution.
    pub fn final_deviation(&self) -> Result<f64> {
        born_deviation(&self.outcome_counts, &self.initial)
    }

    /// Binomial standard error of the deviation estimate,
    /// `√(Σ_j w_j(1−w_j)/n)` on the initial weights.
    pub fn standard_error(&self) -> f64 {
        binomial_standard_error(&self.initial, self.n_trajectories)
    }

    /// Merges two reports produced with the same model, seed, and grid (e.g.
    /// disjoint stream ranges); counts add, the series is re-derived.
    pub fn merge(&self, other: &EnsembleReport) -> Result<EnsembleReport> {
        if self.model != other.model
            || self.initial != other.initial
            || self.master_seed != other.master_seed
            || self.checkpoint_times != other.checkpoint_times
        {
            return Err(Error::invalid(
                "merge",
                "reports come from different runs and cannot be merged",
            ));
        }
        let mut merged = self.clone();
        merged.n_trajectories += other.n_trajectories;
        merged.unresolved_count += other.unresolved_count;
        for (a, b) in merged.outcome_counts.iter_mut().zip(&other.outcome_counts) {
            *a += b;
        }
        for (row_a, row_b) in merged
            .checkpoint_counts
            .iter_mut()
            .zip(&other.checkpoint_counts)
        {
            for (a, b) in row_a.iter_mut().zip(row_b) {
                *a += b;
            }
        }
        merged.max_halt_time = merged.max_halt_time.max(other.max_halt_time);
        merged.deviation_series = merged.derive_deviation_series();
        Ok(merged)
    }
}

/// `√(Σ_j w_j(1−w_j)/n)`.
pub fn binomial_standard_error(initial: &WeightVector, n: u64) -> f64 {
    let var: f64 = initial.as_slice().iter().map(|w| w * (1.0 - w)).sum();
    (var / n as f64).sqrt()
}

/// L1 distance between the empirical outcome frequencies and the initial
/// weights.
pub fn born_deviation(counts: &[u64], initial: &WeightVector) -> Result<f64> {
    if counts.len() != initial.n() {
        return Err(Error::invalid(
            "counts",
            format!("got {} counts for {} weights", counts.len(), initial.n()),
        ));
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::EmptyEnsemble);
    }
    let total = total as f64;
    Ok(counts
        .iter()
        .zip(initial.as_slice())
        .map(|(c, w)| (*c as f64 / total - w).abs())
        .sum())
}

/// Runs trajectories on streams `0..n` of the master seed.
pub fn run_ensemble(
    initial: &WeightVector,
    model: &ModelSpec,
    cfg: &IntegratorConfig,
    n: u64,
    master_seed: u64,
) -> Result<EnsembleReport> {
    run_ensemble_streams(initial, model, cfg, 0..n, master_seed)
}

/// Runs trajectories on an explicit stream range (the shared seeding policy:
/// stream `i` always produces the same trajectory regardless of which range
/// it is computed in).
pub fn run_ensemble_streams(
    initial: &WeightVector,
    model: &ModelSpec,
    cfg: &IntegratorConfig,
    streams: std::ops::Range<u64>,
    master_seed: u64,
) -> Result<EnsembleReport> {
    cfg.validate()?;
    if streams.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    if initial.n() != model.n() {
        return Err(Error::invalid(
            "initial",
            format!("weights have N = {}, model has N = {}", initial.n(), model.n()),
        ));
    }
    let checkpoints = checkpoint_times(cfg);
    let summaries: Result<Vec<_>> = streams
        .into_par_iter()
        .map(|stream| {
            let seed = SeedSpec::new(master_seed, stream);
            let mut rng = seed.rng();
            let draws = sample_model_draws(model, initial, &mut rng);
            trace_trajectory(initial, model, cfg, &draws, &checkpoints).map_err(|e| match e {
                Error::NumericalBlowup { step } => Error::EnsembleBlowup { stream, step },
                other => other,
            })
        })
        .collect();
    Ok(EnsembleReport::assemble(
        model.clone(),
        initial.clone(),
        master_seed,
        checkpoints,
        summaries?,
    ))
}

/// Stratified single-λ ensemble: the random draw is replaced by the uniform
/// grid `λ_i = (i+½)/n`, turning the run into a near-deterministic partition
/// measurement of the unit interval.
pub fn run_ensemble_stratified(
    initial: &WeightVector,
    model: &ModelSpec,
    cfg: &IntegratorConfig,
    n: u64,
    master_seed: u64,
) -> Result<EnsembleReport> {
    if model.kind() != ModelKind::SingleLambda {
        return Err(Error::ModelMismatch(
            "stratified mode applies to the single-λ model only".into(),
        ));
    }
    cfg.validate()?;
    if n == 0 {
        return Err(Error::EmptyEnsemble);
    }
    let checkpoints = checkpoint_times(cfg);
    let summaries: Result<Vec<_>> = (0..n)
        .into_par_iter()
        .map(|stream| {
            let lambda = (stream as f64 + 0.5) / n as f64;
            let draws = StochasticDraw::lambda(vec![lambda]).expect("grid point in [0,1]");
            trace_trajectory(initial, model, cfg, &draws, &checkpoints).map_err(|e| match e {
                Error::NumericalBlowup { step } => Error::EnsembleBlowup { stream, step },
                other => other,
            })
        })
        .collect();
    Ok(EnsembleReport::assemble(
        model.clone(),
        initial.clone(),
        master_seed,
        checkpoints,
        summaries?,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepAxis {
    Dt,
    Eta,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub value: f64,
    pub deviation: f64,
    pub std_err: f64,
}

/// One ensemble per parameter value, sharing the seeding policy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub axis: SweepAxis,
    pub points: Vec<SweepPoint>,
    pub reports: Vec<EnsembleReport>,
}

/// Sweeps `dt` or `η` over strictly monotone values, one ensemble of `n`
/// trajectories per point, all points seeded identically.
pub fn sweep(
    initial: &WeightVector,
    model: &ModelSpec,
    cfg: &IntegratorConfig,
    axis: SweepAxis,
    values: &[f64],
    n: u64,
    master_seed: u64,
) -> Result<SweepTable> {
    if values.is_empty() {
        return Err(Error::invalid("sweep values", "need at least one value"));
    }
    let increasing = values.windows(2).all(|v| v[1] > v[0]);
    let decreasing = values.windows(2).all(|v| v[1] < v[0]);
    if values.len() > 1 && !increasing && !decreasing {
        return Err(Error::invalid(
            "sweep values",
            "parameter values must be strictly monotone",
        ));
    }
    for &v in values {
        match axis {
            SweepAxis::Dt => {
                if !(v > 0.0) {
                    return Err(Error::invalid("sweep values", format!("dt = {v} not positive")));
                }
            }
            SweepAxis::Eta => {
                if !(v > 0.0 && v <= 1.0) {
                    return Err(Error::invalid(
                        "sweep values",
                        format!("eta = {v} outside (0, 1]"),
                    ));
                }
            }
        }
    }
    let mut points = Vec::with_capacity(values.len());
    let mut reports = Vec::with_capacity(values.len());
    for &value in values {
        let (model_v, cfg_v) = match axis {
            SweepAxis::Dt => (
                model.clone(),
                IntegratorConfig {
                    dt: value,
                    ..cfg.clone()
                },
            ),
            SweepAxis::Eta => (model.with_eta(value)?, cfg.clone()),
        };
        let report = run_ensemble(initial, &model_v, &cfg_v, n, master_seed)?;
        points.push(SweepPoint {
            value,
            deviation: report.final_deviation()?,
            std_err: report.standard_error(),
        });
        reports.push(report);
    }
    Ok(SweepTable {
        axis,
        points,
        reports,
    })
}
