//! JSON run configuration: one flat document drives every subcommand, and
//! command-line flags override file values. Validation happens up front and
//! names the offending field.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use suv_core::{
    DrawConvention, FieldSpec, IntegratorConfig, ModelKind, ModelSpec, Scheme, StochasticDraw,
    SweepAxis, WeightVector,
};

use crate::CliError;

/// Initial weights: explicit list or the `"uniform"` preset.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum WeightsSpec {
    Preset(String),
    List(Vec<f64>),
}

/// One or several η values (several only matter for `field-pdf` overlays).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum EtaList {
    One(f64),
    Many(Vec<f64>),
}

impl EtaList {
    fn values(&self) -> Vec<f64> {
        match self {
            EtaList::One(v) => vec![*v],
            EtaList::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub model: String,
    pub n: usize,
    pub initial_weights: WeightsSpec,
    pub rate: f64,
    pub eta: f64,
    pub dt: f64,
    pub scheme: String,
    pub threshold: f64,
    pub max_steps: u64,
    pub normalize_each_step: bool,
    pub n_trajectories: u64,
    pub master_seed: u64,
    pub sweep_axis: Option<String>,
    pub sweep_values: Vec<f64>,
    pub field_eta: EtaList,
    pub field_gamma: u32,
    pub grid_points: usize,
    pub bins: usize,
    pub samples: u64,
    pub field_x: f64,
    /// Forces the stochastic draws of a single trajectory, in the model's
    /// native convention (ξ for two-state/bisection, λ otherwise).
    pub forced_draws: Option<Vec<f64>>,
    /// Replace random λ by a uniform grid (single-λ ensembles only).
    pub stratified: bool,
    pub out_dir: String,
    pub svg: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            model: "two-state".into(),
            n: 2,
            initial_weights: WeightsSpec::Preset("uniform".into()),
            rate: 1.0,
            eta: 0.1,
            dt: 0.01,
            scheme: "euler".into(),
            threshold: 1.0 - 1e-4,
            max_steps: 10_000_000,
            normalize_each_step: true,
            n_trajectories: 1000,
            master_seed: 1,
            sweep_axis: None,
            sweep_values: Vec::new(),
            field_eta: EtaList::One(0.5),
            field_gamma: 16,
            grid_points: 256,
            bins: 101,
            samples: 50_000,
            field_x: 0.3,
            forced_draws: None,
            stratified: false,
            out_dir: ".".into(),
            svg: false,
        }
    }
}

/// Everything a command needs, validated into core types.
pub struct Validated {
    pub config: RunConfig,
    pub model: ModelSpec,
    pub initial: WeightVector,
    pub integrator: IntegratorConfig,
    pub sweep: Option<(SweepAxis, Vec<f64>)>,
    pub field_specs: Vec<FieldSpec>,
    pub forced_draws: Option<StochasticDraw>,
    pub out_dir: PathBuf,
}

fn bad(field: &str, why: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{field}: {why}"))
}

impl RunConfig {
    pub fn validate(self) -> Result<Validated, CliError> {
        let kind = match self.model.as_str() {
            "two-state" => ModelKind::TwoState,
            "single-lambda" => ModelKind::SingleLambda,
            "sequential" => ModelKind::Sequential,
            "bisection" => ModelKind::Bisection,
            other => {
                return Err(bad(
                    "model",
                    format!(
                        "unknown model '{other}' (expected two-state, single-lambda, sequential or bisection)"
                    ),
                ))
            }
        };
        let model = ModelSpec::new(kind, self.n, self.rate, self.eta).map_err(|e| match e {
            suv_core::Error::UnsupportedN { n } => bad(
                "n",
                format!("the bisection model needs a power-of-two number of pointer states, got {n}"),
            ),
            other => bad("model", other),
        })?;

        let initial = match &self.initial_weights {
            WeightsSpec::Preset(name) if name == "uniform" => WeightVector::uniform(self.n)
                .map_err(|e| bad("initial_weights", e))?,
            WeightsSpec::Preset(name) => {
                return Err(bad(
                    "initial_weights",
                    format!("unknown preset '{name}' (expected \"uniform\" or a list)"),
                ))
            }
            WeightsSpec::List(raw) => {
                if raw.len() != self.n {
                    return Err(bad(
                        "initial_weights",
                        format!("{} entries for n = {}", raw.len(), self.n),
                    ));
                }
                WeightVector::normalized_from(raw.clone()).map_err(|e| bad("initial_weights", e))?
            }
        };

        let scheme = match self.scheme.as_str() {
            "euler" => Scheme::Euler,
            "rk4" => Scheme::Rk4,
            other => {
                return Err(bad(
                    "scheme",
                    format!("unknown scheme '{other}' (expected euler or rk4)"),
                ))
            }
        };
        let integrator = IntegratorConfig {
            dt: self.dt,
            scheme,
            max_steps: self.max_steps,
            outcome_threshold: self.threshold,
            normalize_each_step: self.normalize_each_step,
            form: None,
        };
        integrator.validate().map_err(|e| match e {
            suv_core::Error::InvalidInput { what, why } => bad(what, why),
            other => bad("integrator", other),
        })?;

        let sweep = match &self.sweep_axis {
            None => None,
            Some(axis) => {
                let axis = match axis.as_str() {
                    "dt" => SweepAxis::Dt,
                    "eta" => SweepAxis::Eta,
                    other => {
                        return Err(bad(
                            "sweep_axis",
                            format!("unknown axis '{other}' (expected dt or eta)"),
                        ))
                    }
                };
                if self.sweep_values.is_empty() {
                    return Err(bad("sweep_values", "empty; provide at least one value"));
                }
                Some((axis, self.sweep_values.clone()))
            }
        };

        let mut field_specs = Vec::new();
        for eta in self.field_eta.values() {
            field_specs.push(
                FieldSpec::new(eta, self.field_gamma, self.grid_points)
                    .map_err(|e| bad("field_eta", e))?,
            );
        }
        if field_specs.is_empty() {
            return Err(bad("field_eta", "empty list"));
        }
        if self.bins < 2 {
            return Err(bad("bins", format!("need at least 2, got {}", self.bins)));
        }
        if self.samples < 1 {
            return Err(bad("samples", "need at least one sample"));
        }
        if !(0.0..1.0).contains(&self.field_x) {
            return Err(bad("field_x", format!("must be in [0, 1), got {}", self.field_x)));
        }

        let forced_draws = match &self.forced_draws {
            None => None,
            Some(values) => {
                if values.len() != model.draw_count() {
                    return Err(bad(
                        "forced_draws",
                        format!(
                            "model consumes {} draws, got {}",
                            model.draw_count(),
                            values.len()
                        ),
                    ));
                }
                let draw = match model.draw_convention() {
                    DrawConvention::Xi => StochasticDraw::xi(values.clone()),
                    DrawConvention::Lambda => StochasticDraw::lambda(values.clone()),
                };
                Some(draw.map_err(|e| bad("forced_draws", e))?)
            }
        };

        if self.stratified && kind != ModelKind::SingleLambda {
            return Err(bad(
                "stratified",
                "stratified mode applies to the single-lambda model only",
            ));
        }

        let out_dir = PathBuf::from(&self.out_dir);
        Ok(Validated {
            config: self,
            model,
            initial,
            integrator,
            sweep,
            field_specs,
            forced_draws,
            out_dir,
        })
    }
}

/// Loads the JSON config (or defaults when no file is given) and applies the
/// flag overrides.
pub fn load_config(
    path: Option<&PathBuf>,
    seed: Option<u64>,
    out: Option<&PathBuf>,
    svg: bool,
) -> Result<RunConfig, CliError> {
    let mut config: RunConfig = match path {
        None => RunConfig::default(),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("config {}: {e}", p.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Config(format!("config {}: {e}", p.display())))?
        }
    };
    if let Some(seed) = seed {
        config.master_seed = seed;
    }
    if let Some(out) = out {
        config.out_dir = out.display().to_string();
    }
    if svg {
        config.svg = true;
    }
    Ok(config)
}
