//! Run configuration: a single JSON document. Unknown keys are rejected so
//! typos surface as config errors instead of silently applied defaults.

use serde::{Deserialize, Serialize};

use qcf_core::ToleranceConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub time_grid: GridConfig,
    pub u_grid: GridConfig,
    pub cnot: CnotConfig,
    /// Bloch vector of the initial system state used by trajectory output.
    pub initial_bloch: [f64; 3],
    pub out_dir: Option<String>,
    pub tolerances: ToleranceOverrides,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: ModelConfig::default(),
            time_grid: GridConfig { start: 0.0, end: 3.0, points: 200 },
            u_grid: GridConfig { start: 0.5, end: 5.0, points: 10 },
            cnot: CnotConfig::default(),
            initial_bloch: [0.5, 0.5, 0.5],
            out_dir: None,
            tolerances: ToleranceOverrides::default(),
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelConfig {
    /// Bath layers as (spins, coupling) pairs.
    pub layers: Vec<(usize, f64)>,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self { layers: vec![(1, 1.0)] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

impl GridConfig {
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| self.start + (self.end - self.start) * i as f64 / (n - 1) as f64)
            .collect()
    }

    fn validate(&self, name: &str) -> Result<(), String> {
        if !(self.start < self.end) {
            return Err(format!("{name}: start must be strictly below end"));
        }
        if self.points < 2 {
            return Err(format!("{name}: need at least 2 points"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CnotConfig {
    /// Correlation vectors (c1, c2, c3); invalid ones are flagged in the
    /// report rather than rejected here.
    pub states: Vec<[f64; 3]>,
    pub time_grid: GridConfig,
}

impl Default for CnotConfig {
    fn default() -> Self {
        Self {
            states: vec![
                [0.0, 0.0, 0.5],
                [0.4, 0.3, 0.2],
                [0.5, -0.4, 0.3],
                [1.0, 1.0, 1.0],
            ],
            time_grid: GridConfig { start: 0.0, end: 3.0, points: 60 },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ToleranceOverrides {
    pub structural: Option<f64>,
    pub reconstruction: Option<f64>,
    pub kraus_truncation: Option<f64>,
    pub pole_epsilon: Option<f64>,
    pub sector_merge: Option<f64>,
}

impl RunConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| format!("{}: {e}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.model.layers.is_empty() {
            return Err("model.layers must not be empty".into());
        }
        for &(n, a) in &self.model.layers {
            if n == 0 {
                return Err("model.layers: layer spin count must be positive".into());
            }
            if !a.is_finite() {
                return Err("model.layers: coupling must be finite".into());
            }
        }
        self.time_grid.validate("time_grid")?;
        self.u_grid.validate("u_grid")?;
        self.cnot.time_grid.validate("cnot.time_grid")?;
        Ok(())
    }

    pub fn tolerances(&self) -> ToleranceConfig {
        let mut tol = ToleranceConfig::default();
        let o = &self.tolerances;
        if let Some(v) = o.structural {
            tol.structural = v;
        }
        if let Some(v) = o.reconstruction {
            tol.reconstruction = v;
        }
        if let Some(v) = o.kraus_truncation {
            tol.kraus_truncation = v;
        }
        if let Some(v) = o.pole_epsilon {
            tol.pole_epsilon = v;
        }
        if let Some(v) = o.sector_merge {
            tol.sector_merge = v;
        }
        tol
    }
}
