//! Single-trajectory time evolution: explicit steppers for the collapse
//! flows, outcome detection, and the recorded weight time series.
//!
//! The stochastic variables are drawn once at `t = 0` (the noise correlation
//! time is effectively infinite on the collapse time scale) and the flow is
//! then deterministic. Two-state and single-λ trajectories integrate the
//! angle equations directly; sequential and bisection trajectories integrate
//! amplitudes `dα_j/dt = rate·G_j·α_j` with per-step normalization by
//! default. The sequential model supports both representations.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{draw_uniform_with, SeedSpec};
use crate::generators::{
    bisection_g_into, pole_safe_sin, sequential_g_into, sequential_velocities_into,
    single_lambda_velocities_into, DrawConvention, ModelKind, ModelSpec, StochasticDraw,
};
use crate::state::{
    angles_from_weights, weights_from_angles_into, AngleCoords, StateVector, WeightVector,
};

/// Per-step cap on any angle increment, sign preserved. The single-λ flow
/// steepens as 1/L_n near a separatrix; outcomes depend only on the sign
/// structure, so capping the step cannot move a trajectory across a basin
/// boundary.
pub const THETA_STEP_CAP: f64 = 0.1;

/// Snapshot budget for a [`TrajectoryRecord`]; past this the recording stride
/// doubles.
const MAX_SNAPSHOTS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Scheme {
    Euler,
    Rk4,
}

/// State representation a trajectory is integrated in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StateForm {
    Angles,
    Amplitudes,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegratorConfig {
    /// Time step in units of 1/rate.
    pub dt: f64,
    pub scheme: Scheme,
    pub max_steps: u64,
    /// A trajectory halts when one weight reaches this; above 1/2 the
    /// detected outcome is unique.
    pub outcome_threshold: f64,
    pub normalize_each_step: bool,
    /// Representation override; `None` picks the model default (angles for
    /// two-state and single-λ, amplitudes for sequential and bisection).
    pub form: Option<StateForm>,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            dt: 0.01,
            scheme: Scheme::Euler,
            max_steps: 10_000_000,
            outcome_threshold: 1.0 - 1e-4,
            normalize_each_step: true,
            form: None,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::invalid("dt", format!("must be positive, got {}", self.dt)));
        }
        if self.max_steps == 0 {
            return Err(Error::invalid("max_steps", "must be at least 1"));
        }
        if !(self.outcome_threshold > 0.5 && self.outcome_threshold < 1.0) {
            return Err(Error::invalid(
                "outcome_threshold",
                format!("must lie in (0.5, 1), got {}", self.outcome_threshold),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HaltReason {
    ThresholdReached,
    MaxSteps,
}

/// Recorded weight time series of one trajectory. `outcome` is set exactly
/// when the threshold halted the run.
#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub weights: Vec<WeightVector>,
    pub outcome: Option<usize>,
    pub steps_taken: u64,
    pub halted_reason: HaltReason,
}

/// A state in whichever representation the model is being integrated in.
#[derive(Debug, Clone)]
pub enum ModelState {
    Angles(AngleCoords),
    Amplitudes(StateVector),
}

/// Index of the unique weight at or above `threshold`, if any; requires
/// `threshold > 0.5`.
pub fn detect_outcome(weights: &WeightVector, threshold: f64) -> Option<usize> {
    assert!(threshold > 0.5, "threshold must exceed 1/2");
    detect_in(weights.as_slice(), threshold)
}

#[inline]
fn detect_in(weights: &[f64], threshold: f64) -> Option<usize> {
    weights
        .iter()
        .position(|w| *w >= threshold)
}

#[inline]
fn argmax(weights: &[f64]) -> usize {
    let mut best = 0;
    for (i, w) in weights.iter().enumerate() {
        if *w > weights[best] {
            best = i;
        }
    }
    best
}

/// Draws in the representation a given form consumes.
///
/// The sequential model's canonical variables are the stage values
/// `λ_m ∈ U[0,1]` of the angle equations; the amplitude-form generator takes
/// `ξ_m = 1 − 2λ_m` so that both representations share basins draw for draw
/// (an equal-measure reparameterization of the uniform distribution).
enum EngineDraws {
    TwoStateXi(f64),
    SingleLambda(f64),
    SequentialLambdas(Vec<f64>),
    SequentialXis(Vec<f64>),
    BisectionXis(Vec<f64>),
}

struct Engine {
    rate: f64,
    eta: f64,
    dt: f64,
    scheme: Scheme,
    normalize: bool,
    cap_angle_steps: bool,
    draws: EngineDraws,
    // scratch buffers, reused across steps
    w: Vec<f64>,
    g: Vec<f64>,
    k: [Vec<f64>; 4],
    probe: Vec<f64>,
    ak: [Vec<Complex64>; 4],
    aprobe: Vec<Complex64>,
}

enum EngineState {
    Thetas(Vec<f64>),
    Amps(Vec<Complex64>),
}

fn default_form(kind: ModelKind) -> StateForm {
    match kind {
        ModelKind::TwoState | ModelKind::SingleLambda => StateForm::Angles,
        ModelKind::Sequential | ModelKind::Bisection => StateForm::Amplitudes,
    }
}

fn check_form(kind: ModelKind, form: StateForm) -> Result<()> {
    let ok = match kind {
        ModelKind::TwoState | ModelKind::SingleLambda => form == StateForm::Angles,
        ModelKind::Sequential => true,
        ModelKind::Bisection => form == StateForm::Amplitudes,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::ModelMismatch(format!(
            "{kind:?} cannot be integrated in {form:?} form"
        )))
    }
}

impl Engine {
    fn new(
        model: &ModelSpec,
        cfg: &IntegratorConfig,
        draws: &StochasticDraw,
        form: StateForm,
    ) -> Result<Engine> {
        check_form(model.kind(), form)?;
        if draws.len() != model.draw_count() {
            return Err(Error::invalid(
                "draws",
                format!("model needs {} draws, got {}", model.draw_count(), draws.len()),
            ));
        }
        let engine_draws = match (model.kind(), form) {
            (ModelKind::TwoState, _) => EngineDraws::TwoStateXi(draws.to_xi()[0]),
            (ModelKind::SingleLambda, _) => EngineDraws::SingleLambda(draws.to_lambda()[0]),
            (ModelKind::Sequential, StateForm::Angles) => {
                EngineDraws::SequentialLambdas(match draws.convention() {
                    DrawConvention::Lambda => draws.values().to_vec(),
                    DrawConvention::Xi => draws.values().iter().map(|x| 0.5 * (1.0 - x)).collect(),
                })
            }
            (ModelKind::Sequential, StateForm::Amplitudes) => {
                EngineDraws::SequentialXis(match draws.convention() {
                    DrawConvention::Xi => draws.values().to_vec(),
                    DrawConvention::Lambda => {
                        draws.values().iter().map(|l| 1.0 - 2.0 * l).collect()
                    }
                })
            }
            (ModelKind::Bisection, _) => EngineDraws::BisectionXis(draws.to_xi()),
        };
        let n = model.n();
        let (angle_scratch, amp_scratch) = match form {
            StateForm::Angles => (n - 1, 0),
            StateForm::Amplitudes => (0, n),
        };
        let vec4 = |len: usize| {
            [
                vec![0.0; len],
                vec![0.0; len],
                vec![0.0; len],
                vec![0.0; len],
            ]
        };
        let cvec4 = |len: usize| {
            let z = Complex64::new(0.0, 0.0);
            [vec![z; len], vec![z; len], vec![z; len], vec![z; len]]
        };
        Ok(Engine {
            rate: model.rate(),
            eta: model.eta(),
            dt: cfg.dt,
            scheme: cfg.scheme,
            normalize: cfg.normalize_each_step,
            cap_angle_steps: model.kind() == ModelKind::SingleLambda,
            draws: engine_draws,
            w: vec![0.0; n],
            g: vec![0.0; amp_scratch],
            k: vec4(angle_scratch),
            probe: vec![0.0; angle_scratch],
            ak: cvec4(amp_scratch),
            aprobe: vec![Complex64::new(0.0, 0.0); amp_scratch],
        })
    }

    fn init_state(&self, initial: &WeightVector, form: StateForm) -> EngineState {
        match form {
            StateForm::Angles => {
                EngineState::Thetas(angles_from_weights(initial).as_slice().to_vec())
            }
            StateForm::Amplitudes => EngineState::Amps(
                initial
                    .as_slice()
                    .iter()
                    .map(|w| Complex64::new(w.sqrt(), 0.0))
                    .collect(),
            ),
        }
    }

    fn velocities(&self, thetas: &[f64], out: &mut [f64]) {
        match &self.draws {
            EngineDraws::TwoStateXi(xi) => {
                out[0] = self.rate * pole_safe_sin(thetas[0]) * (xi - thetas[0].cos());
            }
            EngineDraws::SingleLambda(lambda) => {
                single_lambda_velocities_into(thetas, *lambda, self.rate, out);
            }
            EngineDraws::SequentialLambdas(lambdas) => {
                sequential_velocities_into(thetas, lambdas, self.eta, self.rate, out);
            }
            _ => unreachable!("amplitude draws in angle form"),
        }
    }

    fn generator(&self, weights: &[f64], out: &mut [f64]) {
        match &self.draws {
            EngineDraws::SequentialXis(xis) => sequential_g_into(weights, xis, self.eta, out),
            EngineDraws::BisectionXis(xis) => bisection_g_into(weights, xis, self.eta, out),
            _ => unreachable!("angle draws in amplitude form"),
        }
    }

    /// One explicit step; returns false when a non-finite value appeared.
    fn step(&mut self, state: &mut EngineState) -> bool {
        match state {
            EngineState::Thetas(thetas) => self.step_angles(thetas),
            EngineState::Amps(amps) => self.step_amps(amps),
        }
    }

    fn step_angles(&mut self, thetas: &mut Vec<f64>) -> bool {
        let dt = self.dt;
        match self.scheme {
            Scheme::Euler => {
                let mut k1 = std::mem::take(&mut self.k[0]);
                self.velocities(thetas, &mut k1);
                for (theta, v) in thetas.iter_mut().zip(&k1) {
                    *theta = self.apply_angle_increment(*theta, v * dt);
                }
                self.k[0] = k1;
            }
            Scheme::Rk4 => {
                let [mut k1, mut k2, mut k3, mut k4] = std::mem::take(&mut self.k);
                let mut probe = std::mem::take(&mut self.probe);
                self.velocities(thetas, &mut k1);
                for i in 0..thetas.len() {
                    probe[i] = thetas[i] + 0.5 * dt * k1[i];
                }
                self.velocities(&probe, &mut k2);
                for i in 0..thetas.len() {
                    probe[i] = thetas[i] + 0.5 * dt * k2[i];
                }
                self.velocities(&probe, &mut k3);
                for i in 0..thetas.len() {
                    probe[i] = thetas[i] + dt * k3[i];
                }
                self.velocities(&probe, &mut k4);
                for i in 0..thetas.len() {
                    let incr = dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
                    thetas[i] = self.apply_angle_increment(thetas[i], incr);
                }
                self.k = [k1, k2, k3, k4];
                self.probe = probe;
            }
        }
        thetas.iter().all(|t| t.is_finite())
    }

    #[inline]
    fn apply_angle_increment(&self, theta: f64, incr: f64) -> f64 {
        let incr = if self.cap_angle_steps {
            incr.clamp(-THETA_STEP_CAP, THETA_STEP_CAP)
        } else {
            incr
        };
        (theta + incr).clamp(0.0, std::f64::consts::PI)
    }

    fn step_amps(&mut self, amps: &mut Vec<Complex64>) -> bool {
        let dt = self.dt;
        match self.scheme {
            Scheme::Euler => {
                let mut w = std::mem::take(&mut self.w);
                let mut g = std::mem::take(&mut self.g);
                weights_of_amps(amps, &mut w);
                self.generator(&w, &mut g);
                for (a, gj) in amps.iter_mut().zip(&g) {
                    *a *= 1.0 + dt * self.rate * gj;
                }
                self.w = w;
                self.g = g;
            }
            Scheme::Rk4 => {
                let [mut k1, mut k2, mut k3, mut k4] = std::mem::take(&mut self.ak);
                let mut probe = std::mem::take(&mut self.aprobe);
                self.amp_derivative(amps, &mut k1);
                for i in 0..amps.len() {
                    probe[i] = amps[i] + 0.5 * dt * k1[i];
                }
                self.amp_derivative(&probe, &mut k2);
                for i in 0..amps.len() {
                    probe[i] = amps[i] + 0.5 * dt * k2[i];
                }
                self.amp_derivative(&probe, &mut k3);
                for i in 0..amps.len() {
                    probe[i] = amps[i] + dt * k3[i];
                }
                self.amp_derivative(&probe, &mut k4);
                for i in 0..amps.len() {
                    amps[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
                }
                self.ak = [k1, k2, k3, k4];
                self.aprobe = probe;
            }
        }
        if self.normalize {
            let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
            let inv = 1.0 / norm_sqr.sqrt();
            for a in amps.iter_mut() {
                *a *= inv;
            }
        }
        amps.iter().all(|a| a.re.is_finite() && a.im.is_finite())
    }

    /// `dα/dt = rate·G(α)∘α` into `out`.
    fn amp_derivative(&mut self, amps: &[Complex64], out: &mut [Complex64]) {
        let mut w = std::mem::take(&mut self.w);
        let mut g = std::mem::take(&mut self.g);
        weights_of_amps(amps, &mut w);
        self.generator(&w, &mut g);
        for i in 0..amps.len() {
            out[i] = amps[i] * (self.rate * g[i]);
        }
        self.w = w;
        self.g = g;
    }

    fn weights_into(&self, state: &EngineState, out: &mut [f64]) {
        match state {
            EngineState::Thetas(thetas) => weights_from_angles_into(thetas, out),
            EngineState::Amps(amps) => weights_of_amps(amps, out),
        }
    }
}

#[inline]
fn weights_of_amps(amps: &[Complex64], out: &mut [f64]) {
    let mut norm_sqr = 0.0;
    for (a, w) in amps.iter().zip(out.iter_mut()) {
        *w = a.norm_sqr();
        norm_sqr += *w;
    }
    let inv = 1.0 / norm_sqr;
    for w in out.iter_mut() {
        *w *= inv;
    }
}

/// Samples the model's stochastic variables, rejecting the measure-zero
/// draws that land exactly on a separatrix of the initial state (those would
/// pin the trajectory forever).
pub(crate) fn sample_model_draws(
    model: &ModelSpec,
    initial: &WeightVector,
    rng: &mut impl rand::Rng,
) -> StochasticDraw {
    loop {
        let draws = draw_uniform_with(rng, model.draw_count(), model.draw_convention());
        if !draw_is_tied(model, initial, &draws) {
            return draws;
        }
    }
}

fn draw_is_tied(model: &ModelSpec, initial: &WeightVector, draws: &StochasticDraw) -> bool {
    let w = initial.as_slice();
    match model.kind() {
        ModelKind::TwoState => {
            let xi = draws.to_xi()[0];
            xi == w[1] - w[0]
        }
        ModelKind::SingleLambda => {
            let lambda = draws.to_lambda()[0];
            let mut acc = 0.0;
            w[..w.len() - 1].iter().any(|wj| {
                acc += wj;
                lambda == acc
            })
        }
        ModelKind::Sequential => {
            // Stage m decides pointer m against the tail; its boundary in λ
            // is the conditional tail weight P_{m+1}/P_m of the initial state.
            let lambdas = match draws.convention() {
                DrawConvention::Lambda => draws.values().to_vec(),
                DrawConvention::Xi => draws.values().iter().map(|x| 0.5 * (1.0 - x)).collect(),
            };
            let mut p_m = 1.0;
            for (m, lambda) in lambdas.iter().enumerate() {
                let p_next = p_m - w[m];
                if p_m > 0.0 && *lambda == p_next / p_m {
                    return true;
                }
                p_m = p_next;
            }
            false
        }
        ModelKind::Bisection => {
            let xis = draws.to_xi();
            let n = w.len();
            let log2_n = n.trailing_zeros();
            xis.iter().enumerate().any(|(p, xi)| {
                let mut imbalance = 0.0;
                for (j, wj) in w.iter().enumerate() {
                    let sign = if (j >> (log2_n - p as u32 - 1)) & 1 == 0 {
                        1.0
                    } else {
                        -1.0
                    };
                    imbalance += sign * wj;
                }
                *xi == imbalance
            })
        }
    }
}

/// One explicit step of the chosen scheme applied to the model's flow.
pub fn step(
    state: &ModelState,
    model: &ModelSpec,
    draws: &StochasticDraw,
    cfg: &IntegratorConfig,
) -> Result<ModelState> {
    cfg.validate()?;
    let form = match state {
        ModelState::Angles(_) => StateForm::Angles,
        ModelState::Amplitudes(_) => StateForm::Amplitudes,
    };
    let mut engine = Engine::new(model, cfg, draws, form)?;
    let mut es = match state {
        ModelState::Angles(a) => {
            if a.n() != model.n() {
                return Err(Error::invalid(
                    "state",
                    format!("state has N = {}, model has N = {}", a.n(), model.n()),
                ));
            }
            EngineState::Thetas(a.as_slice().to_vec())
        }
        ModelState::Amplitudes(s) => {
            if s.n() != model.n() {
                return Err(Error::invalid(
                    "state",
                    format!("state has N = {}, model has N = {}", s.n(), model.n()),
                ));
            }
            EngineState::Amps(s.amplitudes().to_vec())
        }
    };
    if !engine.step(&mut es) {
        return Err(Error::NumericalBlowup { step: 1 });
    }
    Ok(match es {
        EngineState::Thetas(thetas) => ModelState::Angles(
            AngleCoords::new(thetas).expect("stepper keeps angles in [0, π]"),
        ),
        EngineState::Amps(amps) => ModelState::Amplitudes(
            StateVector::new(amps).expect("stepper rejects degenerate amplitudes"),
        ),
    })
}

struct Recorder {
    times: Vec<f64>,
    weights: Vec<Vec<f64>>,
    stride: u64,
}

impl Recorder {
    fn new() -> Self {
        Recorder {
            times: Vec::new(),
            weights: Vec::new(),
            stride: 1,
        }
    }

    fn offer(&mut self, step: u64, t: f64, w: &[f64]) {
        if step % self.stride != 0 {
            return;
        }
        if self.times.len() == MAX_SNAPSHOTS {
            // Thin to every other snapshot and double the stride.
            let mut keep = 0;
            for i in (0..self.times.len()).step_by(2) {
                self.times[keep] = self.times[i];
                self.weights.swap(keep, i);
                keep += 1;
            }
            self.times.truncate(keep);
            self.weights.truncate(keep);
            self.stride *= 2;
            if step % self.stride != 0 {
                return;
            }
        }
        self.times.push(t);
        self.weights.push(w.to_vec());
    }

    fn force(&mut self, t: f64, w: &[f64]) {
        if self.times.last() == Some(&t) {
            return;
        }
        self.times.push(t);
        self.weights.push(w.to_vec());
    }

    fn into_record(
        self,
        outcome: Option<usize>,
        steps_taken: u64,
        halted_reason: HaltReason,
    ) -> TrajectoryRecord {
        TrajectoryRecord {
            times: self.times,
            weights: self
                .weights
                .into_iter()
                .map(WeightVector::new_unchecked)
                .collect(),
            outcome,
            steps_taken,
            halted_reason,
        }
    }
}

/// Integrates one realisation from the given initial weights, drawing the
/// stochastic variables from the seed. Deterministic in (initial, model,
/// cfg, seed).
pub fn run_trajectory(
    initial: &WeightVector,
    model: &ModelSpec,
    cfg: &IntegratorConfig,
    seed: SeedSpec,
) -> Result<TrajectoryRecord> {
    let mut rng = seed.rng();
    let draws = sample_model_draws(model, initial, &mut rng);
    run_trajectory_with_draws(initial, model, cfg, &draws)
}

/// Same as [`run_trajectory`] but with explicitly forced draws.
pub fn run_trajectory_with_draws(
    initial: &WeightVector,
    model: &ModelSpec,
    cfg: &IntegratorConfig,
    draws: &StochasticDraw,
) -> Result<TrajectoryRecord> {
    cfg.validate()?;
    if initial.n() != model.n() {
        return Err(Error::invalid(
            "initial",
            format!("weights have N = {}, model has N = {}", initial.n(), model.n()),
        ));
    }
    let form = cfg.form.unwrap_or_else(|| default_form(model.kind()));
    let mut engine = Engine::new(model, cfg, draws, form)?;
    let mut state = engine.init_state(initial, form);
    let mut w = vec![0.0; model.n()];
    let mut recorder = Recorder::new();

    engine.weights_into(&state, &mut w);
    recorder.offer(0, 0.0, &w);
    if let Some(outcome) = detect_in(&w, cfg.outcome_threshold) {
        return Ok(recorder.into_record(Some(outcome), 0, HaltReason::ThresholdReached));
    }

    for step_idx in 1..=cfg.max_steps {
        if !engine.step(&mut state) {
            return Err(Error::NumericalBlowup { step: step_idx });
        }
        let t = step_idx as f64 * cfg.dt;
        engine.weights_into(&state, &mut w);
        recorder.offer(step_idx, t, &w);
        if let Some(outcome) = detect_in(&w, cfg.outcome_threshold) {
            recorder.force(t, &w);
            return Ok(recorder.into_record(
                Some(outcome),
                step_idx,
                HaltReason::ThresholdReached,
            ));
        }
    }
    let t = cfg.max_steps as f64 * cfg.dt;
    engine.weights_into(&state, &mut w);
    recorder.force(t, &w);
    Ok(recorder.into_record(None, cfg.max_steps, HaltReason::MaxSteps))
}

/// Lightweight trajectory summary for ensemble runs: final outcome plus the
/// running-argmax classification at each checkpoint time.
pub(crate) struct TraceSummary {
    pub outcome: Option<usize>,
    pub halted_reason: HaltReason,
    pub argmax_at: Vec<u16>,
    pub halt_time: f64,
}

pub(crate) fn trace_trajectory(
    initial: &WeightVector,
    model: &ModelSpec,
    cfg: &IntegratorConfig,
    draws: &StochasticDraw,
    checkpoints: &[f64],
) -> Result<TraceSummary> {
    cfg.validate()?;
    let form = cfg.form.unwrap_or_else(|| default_form(model.kind()));
    let mut engine = Engine::new(model, cfg, draws, form)?;
    let mut state = engine.init_state(initial, form);
    let mut w = vec![0.0; model.n()];
    let mut argmax_at = Vec::with_capacity(checkpoints.len());

    engine.weights_into(&state, &mut w);
    let mut outcome = detect_in(&w, cfg.outcome_threshold);
    let mut halted_reason = HaltReason::ThresholdReached;
    let mut halt_time = 0.0;

    if outcome.is_none() {
        'run: {
            for step_idx in 1..=cfg.max_steps {
                if !engine.step(&mut state) {
                    return Err(Error::NumericalBlowup { step: step_idx });
                }
                let t = step_idx as f64 * cfg.dt;
                engine.weights_into(&state, &mut w);
                while argmax_at.len() < checkpoints.len() && t >= checkpoints[argmax_at.len()] {
                    argmax_at.push(argmax(&w) as u16);
                }
                if let Some(j) = detect_in(&w, cfg.outcome_threshold) {
                    outcome = Some(j);
                    halt_time = t;
                    break 'run;
                }
            }
            halted_reason = HaltReason::MaxSteps;
            halt_time = cfg.max_steps as f64 * cfg.dt;
        }
    }
    // Beyond the halt the classification is frozen.
    let frozen = argmax(&w) as u16;
    while argmax_at.len() < checkpoints.len() {
        argmax_at.push(frozen);
    }
    Ok(TraceSummary {
        outcome: if halted_reason == HaltReason::ThresholdReached {
            outcome
        } else {
            None
        },
        halted_reason,
        argmax_at,
        halt_time,
    })
}
