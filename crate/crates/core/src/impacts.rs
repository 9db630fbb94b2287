//! Deterministic impact models: availability loss (hours of delivery delay)
//! and maintenance cost (EUR), conditional on whether and when the truck
//! breaks down before reaching the workshop.

use serde::{Deserialize, Serialize};

use crate::decision::{Decision, Impact};
use crate::error::{ensure, Result};
use crate::geometry::{Itinerary, RouteGeometry, SpeedProfile};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaintenanceParams {
    /// Workshop time without breakdown, hours.
    pub t_m_nb: f64,
    /// Workshop time after a breakdown, hours.
    pub t_m_b: f64,
    /// Time to schedule a tow truck, hours.
    pub t_sc: f64,
    /// Workshop cost without breakdown, EUR.
    pub c_m_nb: f64,
    /// Workshop cost after a breakdown, EUR.
    pub c_m_b: f64,
    /// Fixed tow fee, EUR.
    pub c_f: f64,
    /// Tow fee per kilometre driven by the tow truck, EUR/km.
    pub c_var: f64,
}

impl MaintenanceParams {
    pub fn validate(&self) -> Result<()> {
        for (field, v) in [
            ("maintenance.t_m_nb", self.t_m_nb),
            ("maintenance.t_m_b", self.t_m_b),
            ("maintenance.t_sc", self.t_sc),
            ("maintenance.c_m_nb", self.c_m_nb),
            ("maintenance.c_m_b", self.c_m_b),
            ("maintenance.c_f", self.c_f),
            ("maintenance.c_var", self.c_var),
        ] {
            ensure(v.is_finite() && v >= 0.0, field, "value ≥ 0")?;
        }
        ensure(
            self.t_m_b >= self.t_m_nb,
            "maintenance.t_m_b",
            "t_m_b ≥ t_m_nb",
        )?;
        ensure(
            self.c_m_b >= self.c_m_nb,
            "maintenance.c_m_b",
            "c_m_b ≥ c_m_nb",
        )?;
        Ok(())
    }
}

/// Whether the truck broke down before reaching the workshop, and when.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Condition {
    NoBreakdown,
    Breakdown { t: f64 },
}

/// The value of one impact for one decision under one condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImpactOutcome {
    pub impact: Impact,
    pub decision: Decision,
    pub condition: Condition,
    /// Hours for availability loss, EUR for maintenance cost.
    pub value: f64,
}

/// Impact values for one decision in one scenario.
#[derive(Debug, Clone)]
pub struct ImpactModel<'a> {
    itinerary: Itinerary<'a>,
    speeds: SpeedProfile,
    maintenance: MaintenanceParams,
}

impl<'a> ImpactModel<'a> {
    pub fn new(
        geometry: &'a RouteGeometry,
        speeds: &SpeedProfile,
        maintenance: &MaintenanceParams,
        decision: Decision,
    ) -> Self {
        ImpactModel {
            itinerary: Itinerary::new(geometry, speeds, decision),
            speeds: *speeds,
            maintenance: *maintenance,
        }
    }

    pub fn itinerary(&self) -> &Itinerary<'a> {
        &self.itinerary
    }

    pub fn decision(&self) -> Decision {
        self.itinerary.decision()
    }

    /// Breakdown window `[0, t_w|i]`.
    pub fn horizon(&self) -> f64 {
        self.itinerary.horizon()
    }

    /// Tow truck round trip per kilometre of truck-to-workshop distance, hours/km.
    fn tow_pace(&self) -> f64 {
        1.0 / self.speeds.v_ul + 1.0 / self.speeds.v_l
    }

    /// Planned delivery time measured from the alarm, `d_c / v_n`.
    fn planned_delivery(&self) -> f64 {
        self.itinerary.geometry().distance_to_customer() / self.speeds.v_n
    }

    /// Availability loss, hours, when the truck reaches the workshop intact.
    /// Negative values from degenerate configurations clamp to zero.
    pub fn availability_loss_nb(&self) -> f64 {
        match self.decision() {
            Decision::Cn => 0.0,
            Decision::Wr | Decision::Wn => {
                let it = &self.itinerary;
                let loss = it.horizon()
                    + self.maintenance.t_m_nb
                    + it.initial_workshop_to_customer() / self.speeds.v_n
                    - self.planned_delivery();
                loss.max(0.0)
            }
        }
    }

    /// Availability loss, hours, for a breakdown at `t ∈ [0, t_w|i]`.
    pub fn availability_loss_b(&self, t: f64) -> Result<f64> {
        let it = &self.itinerary;
        let d_tw = it.distance_to_workshop(t)?;
        let m = &self.maintenance;
        let loss = match self.decision() {
            Decision::Wr | Decision::Wn => {
                t + m.t_sc
                    + d_tw * self.tow_pace()
                    + m.t_m_b
                    + it.initial_workshop_to_customer() / self.speeds.v_n
                    - self.planned_delivery()
            }
            Decision::Cn => {
                let t_c = it.delivery_time().unwrap_or(0.0);
                if t > t_c {
                    // already delivered
                    return Ok(0.0);
                }
                t + m.t_sc
                    + d_tw * self.tow_pace()
                    + m.t_m_b
                    + it.workshop_to_customer(t)? / self.speeds.v_n
                    - t_c
            }
        };
        Ok(loss.max(0.0))
    }

    /// Maintenance cost, EUR, when the truck reaches the workshop intact.
    pub fn maintenance_cost_nb(&self) -> f64 {
        self.maintenance.c_m_nb
    }

    /// Maintenance cost, EUR, for a breakdown at `t`: workshop repair plus a
    /// tow fee for the round trip to the truck.
    pub fn maintenance_cost_b(&self, t: f64) -> Result<f64> {
        let d_tw = self.itinerary.distance_to_workshop(t)?;
        let m = &self.maintenance;
        Ok(m.c_m_b + m.c_f + 2.0 * d_tw * m.c_var)
    }

    pub fn value(&self, impact: Impact, condition: Condition) -> Result<f64> {
        match (impact, condition) {
            (Impact::Availability, Condition::NoBreakdown) => Ok(self.availability_loss_nb()),
            (Impact::Availability, Condition::Breakdown { t }) => self.availability_loss_b(t),
            (Impact::Maintenance, Condition::NoBreakdown) => Ok(self.maintenance_cost_nb()),
            (Impact::Maintenance, Condition::Breakdown { t }) => self.maintenance_cost_b(t),
        }
    }

    pub fn outcome(&self, impact: Impact, condition: Condition) -> Result<ImpactOutcome> {
        Ok(ImpactOutcome {
            impact,
            decision: self.decision(),
            condition,
            value: self.value(impact, condition)?,
        })
    }
}
