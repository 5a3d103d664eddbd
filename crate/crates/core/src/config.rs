//! JSON run configuration shared by the `decompose` and `evolve` commands.
//!
//! Unknown keys are rejected. `n` and `energies` are always required; the
//! remaining keys are optional for `decompose` and checked on demand by
//! [`RunConfig::evolution`].

use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::hamiltonian::{DriveModel, SystemSpec};
use crate::propagator::{EvolutionConfig, InitialState};

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub n: usize,
    pub energies: Vec<f64>,
    pub g: Option<f64>,
    pub omega: Option<f64>,
    pub drive_model: Option<DriveModel>,
    pub include_delta0: Option<bool>,
    pub t_start: Option<f64>,
    pub t_end: Option<f64>,
    pub dt: Option<f64>,
    pub sample_every: Option<usize>,
    pub initial_state: Option<InitialStateJson>,
    pub output_path: Option<String>,
}

/// `0` (basis index) or `[[re, im], ...]`.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum InitialStateJson {
    Basis(usize),
    Amplitudes(Vec<[f64; 2]>),
}

impl From<&InitialStateJson> for InitialState {
    fn from(json: &InitialStateJson) -> Self {
        match json {
            InitialStateJson::Basis(k) => InitialState::Basis(*k),
            InitialStateJson::Amplitudes(pairs) => InitialState::Amplitudes(
                pairs.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
            ),
        }
    }
}

fn required<T: Copy>(value: Option<T>, key: &str) -> Result<T> {
    value.ok_or_else(|| Error::InvalidConfig(format!("missing required key `{key}`")))
}

fn finite(value: f64, key: &str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidConfig(format!("key `{key}` must be finite")))
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        config.check_finite()?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    fn check_finite(&self) -> Result<()> {
        for (k, &e) in self.energies.iter().enumerate() {
            finite(e, &format!("energies[{k}]"))?;
        }
        let scalars = [
            (self.g, "g"),
            (self.omega, "omega"),
            (self.t_start, "t_start"),
            (self.t_end, "t_end"),
            (self.dt, "dt"),
        ];
        for (value, key) in scalars {
            if let Some(v) = value {
                finite(v, key)?;
            }
        }
        if let Some(InitialStateJson::Amplitudes(pairs)) = &self.initial_state {
            for (k, pair) in pairs.iter().enumerate() {
                finite(pair[0], &format!("initial_state[{k}]"))?;
                finite(pair[1], &format!("initial_state[{k}]"))?;
            }
        }
        Ok(())
    }

    /// The system description, with an undriven default when drive keys are absent.
    pub fn system_spec(&self) -> Result<SystemSpec> {
        let spec = SystemSpec {
            n: self.n,
            energies: self.energies.clone(),
            g: self.g.unwrap_or(0.0),
            omega: self.omega.unwrap_or(0.0),
            drive_model: self.drive_model.unwrap_or_default(),
            include_delta0: self.include_delta0.unwrap_or(false),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// System and evolution settings for a full run. `g`, `omega`,
    /// `drive_model`, `t_end`, `dt` and `initial_state` must be present.
    pub fn evolution(&self) -> Result<(SystemSpec, EvolutionConfig)> {
        required(self.g, "g")?;
        required(self.omega, "omega")?;
        required(self.drive_model, "drive_model")?;
        let t_end = required(self.t_end, "t_end")?;
        let dt = required(self.dt, "dt")?;
        let initial = self
            .initial_state
            .as_ref()
            .ok_or_else(|| Error::InvalidConfig("missing required key `initial_state`".into()))?;
        let spec = self.system_spec()?;
        let config = EvolutionConfig {
            t_start: self.t_start.unwrap_or(0.0),
            t_end,
            dt,
            sample_every: self.sample_every.unwrap_or(1),
            initial_state: initial.into(),
        };
        config.validate()?;
        Ok((spec, config))
    }
}
