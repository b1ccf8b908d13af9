use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::sources;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Schur,
    Phase,
    Superres,
    Lambda,
    Ball,
    Demo,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Schur => "schur",
            ExperimentKind::Phase => "phase",
            ExperimentKind::Superres => "superres",
            ExperimentKind::Lambda => "lambda",
            ExperimentKind::Ball => "ball",
            ExperimentKind::Demo => "demo",
        }
    }
}

/// One experiment run. Every field has a default, so `{"kind": "demo"}` is a
/// complete config.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub seed: u64,
    /// Source object; its shape depends on `kind` (see [`sources`]).
    pub source: Option<serde_json::Value>,
    /// Phase grid points per axis.
    pub grid: usize,
    /// Compact radius: `K = {|z_j| <= radius}` for `superres`, largest
    /// sampled circle for `schur`. Defaults to 0.5 and 0.9.
    pub radius: Option<f64>,
    /// Mixture weights for `superres`, epsilon grid for `lambda`.
    pub schedule: Option<Vec<f64>>,
    /// Perturbation count for `schur`, corpus size for `ball`.
    pub count: usize,
    /// Largest Taylor gap of the `schur` perturbations.
    pub max_eps: f64,
    /// Angles per circle for `schur`.
    pub angles: usize,
    /// Points per axis of the sup-norm searches (`superres`, `demo`).
    pub sup_grid: usize,
    /// Sample count for `lambda` (also used per chart by `superres`).
    pub points: usize,
    /// Series truncation degree for `ball`.
    pub degree: usize,
    /// Dimensions cycled through by the random `ball` corpus.
    pub dims: Vec<usize>,
    /// Fourier table bound for `phase`; defaults to the source multi-degree.
    pub bound: Option<Vec<usize>>,
    pub out: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            kind: ExperimentKind::Demo,
            seed: 0,
            source: None,
            grid: 1 << 9,
            radius: None,
            schedule: None,
            count: 50,
            max_eps: 1e-3,
            angles: 256,
            sup_grid: 64,
            points: 1 << 20,
            degree: 12,
            dims: vec![2, 3],
            bound: None,
            out: PathBuf::from("out"),
        }
    }
}

/// A config problem, located by field path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl ExperimentConfig {
    pub fn for_kind(kind: ExperimentKind) -> Self {
        let count = if kind == ExperimentKind::Ball { 100 } else { 50 };
        ExperimentConfig { kind, count, ..ExperimentConfig::default() }
    }

    /// Reads a config file; `kind`, when given, overrides the file's kind.
    pub fn from_file(path: &Path, kind: Option<ExperimentKind>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_value(value, kind).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            e => e,
        })
    }

    /// Fills the fields missing from `value` with the defaults of its kind.
    pub fn from_value(value: serde_json::Value, kind: Option<ExperimentKind>) -> Result<Self> {
        let serde_json::Value::Object(fields) = value else {
            return Err(Error::Config("config must be a JSON object".into()));
        };
        let kind = match (kind, fields.get("kind")) {
            (Some(k), _) => k,
            (None, Some(v)) => serde_json::from_value(v.clone()).map_err(|e| Error::Config(format!("kind: {e}")))?,
            (None, None) => ExperimentKind::Demo,
        };
        let serde_json::Value::Object(mut merged) = serde_json::to_value(Self::for_kind(kind))? else {
            unreachable!("configs serialize to objects")
        };
        merged.extend(fields);
        merged.insert("kind".into(), serde_json::to_value(kind)?);
        serde_json::from_value(serde_json::Value::Object(merged)).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn effective_radius(&self) -> f64 {
        self.radius.unwrap_or(if self.kind == ExperimentKind::Schur { 0.9 } else { 0.5 })
    }

    /// Empty exactly when [`crate::harness::run`] may proceed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut bad = |field: &str, message: String| out.push(Violation { field: field.into(), message });
        if !self.grid.is_power_of_two() || self.grid < 2 {
            bad("grid", format!("{} is not a power of two", self.grid));
        }
        if !self.points.is_power_of_two() {
            bad("points", format!("{} is not a power of two", self.points));
        }
        let r = self.effective_radius();
        if !(r > 0.0 && r < 1.0) {
            bad("radius", format!("{r} is not in (0, 1)"));
        }
        if let Some(s) = &self.schedule {
            let (lo, hi) = match self.kind {
                ExperimentKind::Lambda => (0.0, f64::INFINITY),
                _ => (0.0, 1.0),
            };
            if s.is_empty() {
                bad("schedule", "empty".into());
            }
            for (i, &t) in s.iter().enumerate() {
                if !(t >= lo && t <= hi) {
                    bad(&format!("schedule[{i}]"), format!("{t} is not in [{lo}, {hi}]"));
                }
            }
        }
        if self.count == 0 {
            bad("count", "must be positive".into());
        }
        if !(self.max_eps > 0.0 && self.max_eps.is_finite()) {
            bad("max_eps", format!("{} is not positive", self.max_eps));
        }
        if self.angles == 0 {
            bad("angles", "must be positive".into());
        }
        if self.sup_grid < 2 {
            bad("sup_grid", "needs at least two points per axis".into());
        }
        if self.dims.is_empty() || self.dims.contains(&0) {
            bad("dims", "dimensions must be positive".into());
        }
        if let Some(b) = &self.bound {
            for (i, &k) in b.iter().enumerate() {
                if 2 * k >= self.grid {
                    bad(&format!("bound[{i}]"), format!("{k} needs a grid larger than {}", self.grid));
                }
            }
        }
        if let Err(e) = sources::check(self) {
            bad("source", e.to_string());
        }
        out
    }
}
