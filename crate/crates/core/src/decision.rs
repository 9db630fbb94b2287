use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The three maintenance alternatives available once a fault alarm fires.
///
/// * `Wr`: drive to the nearest workshop at reduced speed (risk-averse).
/// * `Wn`: drive to the nearest workshop at normal speed (risk-neutral).
/// * `Cn`: finish the delivery first, then drive to the workshop (risk-seeking).
///
/// The derived ordering is the tie-break preference: when two decisions have
/// the same expected loss the smaller one (most risk-averse) wins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Wr,
    Wn,
    Cn,
}

impl Decision {
    /// All decisions in tie-break order.
    pub const ALL: [Decision; 3] = [Decision::Wr, Decision::Wn, Decision::Cn];

    pub fn as_str(self) -> &'static str {
        match self {
            Decision::Wr => "wr",
            Decision::Wn => "wn",
            Decision::Cn => "cn",
        }
    }

    /// Index into per-decision arrays, matching [`Decision::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }

    /// Whether the truck heads for the workshop first.
    pub fn workshop_first(self) -> bool {
        !matches!(self, Decision::Cn)
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Decision {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "wr" => Ok(Decision::Wr),
            "wn" => Ok(Decision::Wn),
            "cn" => Ok(Decision::Cn),
            other => Err(format!(
                "unknown decision `{other}` (expected wr, wn or cn)"
            )),
        }
    }
}

/// A decision impact that carries an economic loss.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Impact {
    /// Delivery delay in hours.
    Availability,
    /// Direct maintenance outlay in EUR.
    Maintenance,
}

impl Impact {
    pub const ALL: [Impact; 2] = [Impact::Availability, Impact::Maintenance];

    pub fn as_str(self) -> &'static str {
        match self {
            Impact::Availability => "al",
            Impact::Maintenance => "mc",
        }
    }
}

impl fmt::Display for Impact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which impacts enter the total economic risk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ImpactSelection {
    AvailabilityOnly,
    MaintenanceOnly,
    #[default]
    Both,
}

impl ImpactSelection {
    pub fn includes(self, impact: Impact) -> bool {
        match self {
            ImpactSelection::Both => true,
            ImpactSelection::AvailabilityOnly => impact == Impact::Availability,
            ImpactSelection::MaintenanceOnly => impact == Impact::Maintenance,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ImpactSelection::AvailabilityOnly => "al",
            ImpactSelection::MaintenanceOnly => "mc",
            ImpactSelection::Both => "both",
        }
    }
}

impl FromStr for ImpactSelection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "al" => Ok(ImpactSelection::AvailabilityOnly),
            "mc" => Ok(ImpactSelection::MaintenanceOnly),
            "both" => Ok(ImpactSelection::Both),
            other => Err(format!(
                "unknown impact selection `{other}` (expected al, mc or both)"
            )),
        }
    }
}
