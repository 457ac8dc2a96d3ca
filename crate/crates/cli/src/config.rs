//! Run configuration: defaults, JSON file, `DPC_SEED` and dotted flag overrides.

use std::path::{Path, PathBuf};

use dpc_core::assessment::AssessmentConfig;
use dpc_core::completion::{CompletionInit, CorrectionMode};
use dpc_core::encoder_sim::{Condition, RecipeParams};
use dpc_core::harness::ExperimentConfig;
use dpc_core::{Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub const CONFIG_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Prop1,
    Prop2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Correction {
    Gated,
    Scalar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub seed: u64,
    /// Scenario count for harness runs, draw count for `prop1`.
    pub trials: usize,
    pub out: PathBuf,
    pub condition: Condition,
    pub experiment: Experiment,
    /// Scenario file read by `assess` and `complete` instead of generating one.
    pub scenario: Option<PathBuf>,
    pub stages: usize,
    pub dim: usize,
    /// One-based.
    pub planted: usize,
    pub fixed_depth: usize,
    pub eps: f64,
    pub eps0: f64,
    pub recipe: RecipeParams,
    pub assessment: AssessmentConfig,
    pub completion: CompletionInit,
    pub completion_seed: u64,
    pub correction: Correction,
    pub lambda: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let e = ExperimentConfig::default();
        Self {
            schema_version: CONFIG_SCHEMA_VERSION,
            seed: 0,
            trials: 200,
            out: PathBuf::from("out"),
            condition: Condition::Clean,
            experiment: Experiment::Prop1,
            scenario: None,
            stages: e.stages,
            dim: e.dim,
            planted: e.planted,
            fixed_depth: e.fixed_depth,
            eps: e.eps,
            eps0: e.eps0,
            recipe: e.recipe,
            assessment: e.assessment,
            completion: e.completion,
            completion_seed: e.completion_seed,
            correction: Correction::Gated,
            lambda: 1.0,
        }
    }
}

impl RunConfig {
    pub fn experiment_config(&self) -> ExperimentConfig {
        ExperimentConfig {
            stages: self.stages,
            dim: self.dim,
            planted: self.planted,
            recipe: self.recipe.clone(),
            assessment: self.assessment.clone(),
            completion: self.completion,
            completion_seed: self.completion_seed,
            eps: self.eps,
            eps0: self.eps0,
            fixed_depth: self.fixed_depth,
        }
    }

    pub fn correction_mode(&self) -> CorrectionMode {
        match self.correction {
            Correction::Gated => CorrectionMode::Gated,
            Correction::Scalar => CorrectionMode::Scalar(self.lambda),
        }
    }

    /// Consecutive scenario seeds starting at `seed`.
    pub fn seeds(&self) -> Vec<u64> {
        (0..self.trials as u64).map(|i| self.seed.wrapping_add(i)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != CONFIG_SCHEMA_VERSION {
            return Err(Error::Config(format!("unsupported config schema_version {}", self.schema_version)));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(Error::Config("lambda must lie in [0, 1]".into()));
        }
        self.experiment_config().validate()
    }

    /// Merge, in increasing precedence, the defaults, `DPC_SEED`, the config
    /// file (a run manifest is accepted too) and dotted flag overrides.
    pub fn resolve(file: Option<&Path>, env_seed: Option<&str>, overrides: &[(String, String)]) -> Result<Self> {
        let mut doc = serde_json::to_value(RunConfig::default()).map_err(config_err)?;
        if let Some(s) = env_seed {
            let seed: u64 = s.trim().parse().map_err(|_| Error::Config(format!("DPC_SEED is not a seed: '{s}'")))?;
            doc["seed"] = Value::from(seed);
        }
        if let Some(path) = file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
            let mut given: Value = serde_json::from_str(&text).map_err(config_err)?;
            if let Some(inner) = given.get("config").filter(|_| given.get("outputs").is_some()) {
                given = inner.clone();
            }
            merge(&mut doc, given, "")?;
        }
        for (key, raw) in overrides {
            set_path(&mut doc, key, raw)?;
        }
        let cfg: RunConfig = serde_json::from_value(doc).map_err(config_err)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn config_err(e: serde_json::Error) -> Error {
    Error::Config(e.to_string())
}

fn merge(base: &mut Value, given: Value, prefix: &str) -> Result<()> {
    match (base, given) {
        (Value::Object(b), Value::Object(g)) => {
            for (k, v) in g {
                let path = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v, &path)?,
                    None => return Err(Error::Config(format!("unknown config field '{path}'"))),
                }
            }
            Ok(())
        }
        (slot, v) => {
            *slot = v;
            Ok(())
        }
    }
}

const ALIASES: [(&str, &str); 1] = [("psi_mode", "assessment.psi_mode")];

fn set_path(doc: &mut Value, key: &str, raw: &str) -> Result<()> {
    let key = ALIASES.iter().find(|(a, _)| *a == key).map_or(key, |(_, full)| full);
    let mut slot = doc;
    for part in key.split('.') {
        let obj: &mut Map<String, Value> = match slot {
            Value::Object(m) => m,
            _ => return Err(Error::Config(format!("'{key}' does not name a config field"))),
        };
        slot = obj.get_mut(part).ok_or_else(|| Error::Config(format!("unknown flag --{key}")))?;
    }
    *slot = parse_value(raw, slot);
    Ok(())
}

/// JSON literal when it parses, otherwise the raw string; strings stay strings.
fn parse_value(raw: &str, current: &Value) -> Value {
    if current.is_string() {
        return Value::String(raw.to_string());
    }
    serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()))
}

/// Split `--dotted.name value` / `--dotted.name=value` pairs. `--config` is
/// returned separately.
pub fn parse_settings(args: &[String]) -> Result<(Option<PathBuf>, Vec<(String, String)>)> {
    let mut config = None;
    let mut out = Vec::new();
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        let Some(name) = arg.strip_prefix("--") else {
            return Err(Error::Config(format!("unexpected argument '{arg}'")));
        };
        let (name, value) = match name.split_once('=') {
            Some((n, v)) => (n.to_string(), v.to_string()),
            None => {
                let v = it.next().ok_or_else(|| Error::Config(format!("flag --{name} needs a value")))?;
                (name.to_string(), v.clone())
            }
        };
        if name == "config" {
            config = Some(PathBuf::from(value));
        } else {
            out.push((name, value));
        }
    }
    Ok((config, out))
}
