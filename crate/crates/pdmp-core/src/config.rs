//! Building models from structured text.
//!
//! A JSON document names one built-in family per characteristic and mode,
//! with its parameters. Only the closed-form families are expressible here;
//! ODE, event, and custom-closure variants must be constructed in code.
//!
//! ```json
//! {
//!   "time_augmented": false,
//!   "intensity_bound": 0.5,
//!   "modes": {
//!     "-1": {
//!       "flow": { "family": "exponential_scale", "rate": -0.05 },
//!       "intensity": { "family": "zero" },
//!       "kernel": { "family": "switch_mode", "target": 0 },
//!       "boundary": { "family": "exponential_hit", "rate": -0.05, "level": 1.0, "component": 0 },
//!       "region": { "family": "interval", "component": 0, "lo": 1.0, "hi": 10.0, "lo_open": true, "hi_open": true }
//!     }
//!   }
//! }
//! ```

use std::collections::BTreeMap;
use std::io;

use serde::{Deserialize, Serialize};

use crate::error::PdmpError;
use crate::model::{Boundary, Flow, Intensity, Kernel, ModeDynamics, PdmpModel, Region, SimConfig};

/// Serializable description of a model built from named families.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelConfig {
    /// Whether states carry an elapsed-time clock.
    #[serde(default)]
    pub time_augmented: bool,
    /// Optional global intensity bound for thinning.
    #[serde(default)]
    pub intensity_bound: Option<f64>,
    /// Optional numerical policy override.
    #[serde(default)]
    pub sim_config: Option<SimConfig>,
    /// Per-mode characteristics, keyed by the decimal mode label.
    pub modes: BTreeMap<String, ModeConfig>,
}

/// Serializable description of one mode.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModeConfig {
    /// Flow family.
    pub flow: FlowConfig,
    /// Intensity family.
    pub intensity: IntensityConfig,
    /// Kernel family.
    pub kernel: KernelConfig,
    /// Boundary family.
    #[serde(default)]
    pub boundary: BoundaryConfig,
    /// Region family.
    #[serde(default)]
    pub region: RegionConfig,
}

/// Named flow families.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FlowConfig {
    /// Coordinates stay put.
    Constant,
    /// Componentwise exponential scaling.
    ExponentialScale {
        /// Exponential rate.
        rate: f64,
    },
    /// Straight-line motion.
    Linear {
        /// Per-component velocity.
        velocity: Vec<f64>,
    },
}

/// Named intensity families.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum IntensityConfig {
    /// No random jumps.
    Zero,
    /// Constant rate.
    Constant {
        /// The rate.
        rate: f64,
    },
    /// Rate `beta u^alpha` in the elapsed-time coordinate.
    WeibullElapsed {
        /// Shape exponent, greater than -1.
        alpha: f64,
        /// Scale factor.
        beta: f64,
    },
}

/// Named kernel families.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum KernelConfig {
    /// Switch mode, keep coordinates.
    SwitchMode {
        /// Destination mode.
        target: i32,
    },
    /// Teleport to a fixed state.
    Reset {
        /// Destination mode.
        mode: i32,
        /// Destination coordinates.
        euclid: Vec<f64>,
    },
    /// Weighted choice among kernels.
    Mixture {
        /// The branches.
        branches: Vec<MixtureBranch>,
    },
}

/// One branch of a mixture kernel.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MixtureBranch {
    /// Selection probability.
    pub weight: f64,
    /// Branch kernel.
    pub kernel: KernelConfig,
}

/// Named boundary families.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum BoundaryConfig {
    /// Boundary unreachable.
    #[default]
    None,
    /// Exit of an exponential flow through a threshold.
    ExponentialHit {
        /// Flow rate.
        rate: f64,
        /// Threshold level.
        level: f64,
        /// Component index.
        #[serde(default)]
        component: usize,
    },
    /// Exit of a linear flow through a threshold.
    LinearHit {
        /// Component velocity.
        velocity: f64,
        /// Threshold level.
        level: f64,
        /// Component index.
        #[serde(default)]
        component: usize,
    },
}

/// Named region families.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum RegionConfig {
    /// All points belong to the mode.
    #[default]
    All,
    /// Interval constraint on one component.
    Interval {
        /// Component index.
        #[serde(default)]
        component: usize,
        /// Lower endpoint.
        lo: f64,
        /// Upper endpoint.
        hi: f64,
        /// Exclude the lower endpoint.
        #[serde(default)]
        lo_open: bool,
        /// Exclude the upper endpoint.
        #[serde(default)]
        hi_open: bool,
    },
    /// Single point up to tolerance.
    Point {
        /// The point.
        euclid: Vec<f64>,
        /// Componentwise tolerance.
        #[serde(default = "default_point_tol")]
        tol: f64,
    },
}

fn default_point_tol() -> f64 {
    1e-9
}

impl From<FlowConfig> for Flow {
    fn from(c: FlowConfig) -> Self {
        match c {
            FlowConfig::Constant => Flow::Constant,
            FlowConfig::ExponentialScale { rate } => Flow::ExponentialScale { rate },
            FlowConfig::Linear { velocity } => Flow::Linear { velocity },
        }
    }
}

impl From<IntensityConfig> for Intensity {
    fn from(c: IntensityConfig) -> Self {
        match c {
            IntensityConfig::Zero => Intensity::Zero,
            IntensityConfig::Constant { rate } => Intensity::Constant(rate),
            IntensityConfig::WeibullElapsed { alpha, beta } => {
                Intensity::WeibullElapsed { alpha, beta }
            }
        }
    }
}

impl From<KernelConfig> for Kernel {
    fn from(c: KernelConfig) -> Self {
        match c {
            KernelConfig::SwitchMode { target } => Kernel::SwitchMode { target },
            KernelConfig::Reset { mode, euclid } => Kernel::Reset { mode, euclid },
            KernelConfig::Mixture { branches } => Kernel::Mixture(
                branches.into_iter().map(|b| (b.weight, b.kernel.into())).collect(),
            ),
        }
    }
}

impl From<BoundaryConfig> for Boundary {
    fn from(c: BoundaryConfig) -> Self {
        match c {
            BoundaryConfig::None => Boundary::None,
            BoundaryConfig::ExponentialHit { rate, level, component } => {
                Boundary::ExponentialHit { rate, level, component }
            }
            BoundaryConfig::LinearHit { velocity, level, component } => {
                Boundary::LinearHit { velocity, level, component }
            }
        }
    }
}

impl From<RegionConfig> for Region {
    fn from(c: RegionConfig) -> Self {
        match c {
            RegionConfig::All => Region::All,
            RegionConfig::Interval { component, lo, hi, lo_open, hi_open } => {
                Region::Interval { component, lo, hi, lo_open, hi_open }
            }
            RegionConfig::Point { euclid, tol } => Region::Point { euclid, tol },
        }
    }
}

impl ModelConfig {
    /// Parses a configuration from JSON text.
    pub fn from_json_str(json: &str) -> Result<Self, PdmpError> {
        serde_json::from_str(json).map_err(|e| PdmpError::InvalidConfig(e.to_string()))
    }

    /// Parses a configuration from a JSON reader.
    pub fn from_json_reader<R: io::Read>(reader: R) -> Result<Self, PdmpError> {
        serde_json::from_reader(reader).map_err(|e| PdmpError::InvalidConfig(e.to_string()))
    }

    /// Builds the model, validating mode labels and family parameters.
    pub fn build(self) -> Result<PdmpModel, PdmpError> {
        let mut modes = BTreeMap::new();
        for (label, mode) in self.modes {
            let key: i32 = label.trim().parse().map_err(|_| {
                PdmpError::InvalidConfig(format!("mode label {label:?} is not an integer"))
            })?;
            modes.insert(
                key,
                ModeDynamics {
                    flow: mode.flow.into(),
                    intensity: mode.intensity.into(),
                    kernel: mode.kernel.into(),
                    boundary: mode.boundary.into(),
                    region: mode.region.into(),
                },
            );
        }
        let mut model = PdmpModel::new(modes, self.time_augmented)?;
        if let Some(bound) = self.intensity_bound {
            model = model.with_intensity_bound(bound);
        }
        if let Some(cfg) = self.sim_config {
            model = model.with_config(cfg);
        }
        Ok(model)
    }
}
