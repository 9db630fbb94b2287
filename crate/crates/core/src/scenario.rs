//! Complete, validated experiment input and its TOML representation.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::geometry::{RouteGeometry, SpeedProfile, Workshop};
use crate::impacts::MaintenanceParams;
use crate::risk::{AvailabilityUtility, QuadratureConfig};
use crate::rul::GammaRul;

/// One workshop at the highway entrance, customer at the far end, no spurs.
pub const PAPER_BASIC: &str = include_str!("../presets/paper-basic.toml");

/// Same as [`PAPER_BASIC`] with a 23 km spur to the workshop. This moves the
/// alarm location where the `wr` no-breakdown delay reaches `t_max` to about
/// 190 km.
pub const PAPER_CALIBRATED: &str = include_str!("../presets/paper-calibrated.toml");

fn default_grid_step() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Numerics {
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    /// Alarm-location grid spacing for sweeps, km.
    #[serde(default = "default_grid_step")]
    pub grid_step: f64,
}

impl Default for Numerics {
    fn default() -> Self {
        Numerics {
            quadrature: QuadratureConfig::default(),
            grid_step: default_grid_step(),
        }
    }
}

/// Everything needed to evaluate the three decisions at one alarm location.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub geometry: RouteGeometry,
    pub speeds: SpeedProfile,
    pub maintenance: MaintenanceParams,
    pub utility: AvailabilityUtility,
    pub rul: GammaRul,
    #[serde(default)]
    pub numerics: Numerics,
}

impl Scenario {
    /// Parses and validates a scenario document. Unknown keys are rejected.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let scenario: Scenario = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("scenario serializes to TOML")
    }

    /// One of the shipped presets by name (`paper-basic`, `paper-calibrated`).
    pub fn preset(name: &str) -> Option<Self> {
        let text = match name {
            "paper-basic" => PAPER_BASIC,
            "paper-calibrated" => PAPER_CALIBRATED,
            _ => return None,
        };
        Some(Self::from_toml_str(text).expect("shipped presets are valid"))
    }

    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        self.speeds.validate()?;
        self.maintenance.validate()?;
        self.utility.validate()?;
        self.rul.validate()?;
        self.numerics.quadrature.validate()?;
        ensure(
            self.numerics.grid_step.is_finite() && self.numerics.grid_step > 0.0,
            "numerics.grid_step",
            "grid_step > 0",
        )
    }

    /// Non-fatal findings about the configuration.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.utility.is_monotone() {
            out.push(format!(
                "utility: pe_max = {} is below rate·(t_max − t_min) = {}; the delay penalty is not monotone",
                self.utility.pe_max,
                self.utility.rate * (self.utility.t_max - self.utility.t_min)
            ));
        }
        out
    }

    /// Copy of the scenario with the alarm at `d_a`.
    pub fn with_alarm(&self, d_a: f64) -> Result<Self> {
        ensure(
            (0.0..=self.geometry.highway_length).contains(&d_a),
            "geometry.alarm_location",
            "0 ≤ d_a ≤ highway_length",
        )?;
        let mut s = self.clone();
        s.geometry.alarm_location = d_a;
        Ok(s)
    }

    pub fn with_workshops(&self, workshops: Vec<Workshop>) -> Result<Self> {
        let mut s = self.clone();
        s.geometry.workshops = workshops;
        s.geometry.validate()?;
        Ok(s)
    }
}

/// Reads, parses and validates a scenario file.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    Scenario::from_toml_str(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}
