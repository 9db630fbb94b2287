//! Route geometry: a straight highway with off-route spurs to workshops and
//! the customer, and the truck kinematics implied by each decision.
//!
//! Positions are kilometres along the highway measured from its entrance.
//! A workshop or customer sits at the end of a spur of length `offset`
//! leaving the highway at its `highway_position`, so the road distance from
//! highway position `p` to a workshop `w` is `|p - w.highway_position| + w.offset`.

use serde::{Deserialize, Serialize};

use crate::decision::Decision;
use crate::error::{ensure, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Workshop {
    pub id: String,
    /// Access point on the highway, km.
    pub highway_position: f64,
    /// Spur length from the access point to the workshop door, km.
    #[serde(default)]
    pub offset: f64,
}

impl Workshop {
    pub fn new(id: impl Into<String>, highway_position: f64, offset: f64) -> Self {
        Workshop {
            id: id.into(),
            highway_position,
            offset,
        }
    }

    /// Road distance from a highway position to the workshop door.
    pub fn distance_from(&self, position: f64) -> f64 {
        (position - self.highway_position).abs() + self.offset
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RouteGeometry {
    pub highway_length: f64,
    pub workshops: Vec<Workshop>,
    pub customer_position: f64,
    #[serde(default)]
    pub customer_offset: f64,
    /// Alarm location `d_a`, km from the highway entrance.
    pub alarm_location: f64,
}

impl RouteGeometry {
    pub fn validate(&self) -> Result<()> {
        ensure(
            self.highway_length.is_finite() && self.highway_length > 0.0,
            "geometry.highway_length",
            "highway_length > 0",
        )?;
        ensure(
            !self.workshops.is_empty(),
            "geometry.workshops",
            "at least one workshop",
        )?;
        for (i, w) in self.workshops.iter().enumerate() {
            ensure(
                (0.0..=self.highway_length).contains(&w.highway_position),
                &format!("geometry.workshops[{i}].highway_position"),
                "0 ≤ highway_position ≤ highway_length",
            )?;
            ensure(
                w.offset.is_finite() && w.offset >= 0.0,
                &format!("geometry.workshops[{i}].offset"),
                "offset ≥ 0",
            )?;
        }
        ensure(
            (0.0..=self.highway_length).contains(&self.customer_position),
            "geometry.customer_position",
            "0 ≤ customer_position ≤ highway_length",
        )?;
        ensure(
            self.customer_offset.is_finite() && self.customer_offset >= 0.0,
            "geometry.customer_offset",
            "customer_offset ≥ 0",
        )?;
        ensure(
            (0.0..=self.highway_length).contains(&self.alarm_location),
            "geometry.alarm_location",
            "0 ≤ d_a ≤ highway_length",
        )?;
        Ok(())
    }

    /// The workshop with the shortest road distance from `position`, and
    /// that distance. Ties go to the lower highway position.
    pub fn nearest_workshop(&self, position: f64) -> (&Workshop, f64) {
        let mut best = &self.workshops[0];
        let mut best_distance = best.distance_from(position);
        for w in &self.workshops[1..] {
            let d = w.distance_from(position);
            if d < best_distance
                || (d == best_distance && w.highway_position < best.highway_position)
            {
                best = w;
                best_distance = d;
            }
        }
        (best, best_distance)
    }

    /// Road distance from the alarm location to the customer door, `d_c`.
    pub fn distance_to_customer(&self) -> f64 {
        (self.customer_position - self.alarm_location).abs() + self.customer_offset
    }

    /// Road distance from a workshop door to the customer door.
    pub fn workshop_to_customer(&self, workshop: &Workshop) -> f64 {
        workshop.distance_from(self.customer_position) + self.customer_offset
    }
}

/// Truck and tow-truck speeds, km/h.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeedProfile {
    /// Normal cruising speed, used for the planned trip and the post-repair leg.
    pub v_n: f64,
    pub v_wr: f64,
    pub v_wn: f64,
    pub v_cn: f64,
    /// Loaded tow truck.
    pub v_l: f64,
    /// Unloaded tow truck.
    pub v_ul: f64,
}

impl SpeedProfile {
    pub fn for_decision(&self, decision: Decision) -> f64 {
        match decision {
            Decision::Wr => self.v_wr,
            Decision::Wn => self.v_wn,
            Decision::Cn => self.v_cn,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (field, v) in [
            ("speeds.v_n", self.v_n),
            ("speeds.v_wr", self.v_wr),
            ("speeds.v_wn", self.v_wn),
            ("speeds.v_cn", self.v_cn),
            ("speeds.v_l", self.v_l),
            ("speeds.v_ul", self.v_ul),
        ] {
            ensure(v.is_finite() && v > 0.0, field, "speed > 0")?;
        }
        ensure(self.v_l <= self.v_ul, "speeds.v_l", "v_l ≤ v_ul")?;
        ensure(self.v_wr <= self.v_wn, "speeds.v_wr", "v_wr ≤ v_wn")?;
        Ok(())
    }
}

/// The path a truck follows after the alarm under one decision, up to the
/// moment it reaches the workshop without breaking down (the horizon `t_w`).
///
/// For `wr`/`wn` the target workshop and its distance `d_tw(0)` are frozen at
/// the alarm instant. For `cn` the truck drives to the customer, and after
/// delivery its position stays at the customer for the purpose of distance
/// queries: a post-delivery breakdown is towed from the customer's nearest
/// workshop over `d_wc(t_c)`.
#[derive(Debug, Clone)]
pub struct Itinerary<'a> {
    geometry: &'a RouteGeometry,
    decision: Decision,
    speed: f64,
    /// Signed unit direction of travel along the highway.
    direction: f64,
    /// Highway kilometres travelled before leaving onto a spur.
    highway_leg: f64,
    /// `d_tw(0)` for wr/wn; distance from the customer door to its nearest
    /// workshop for cn.
    workshop_distance: f64,
    /// `d_wc` of the frozen target workshop (wr/wn) or of the customer's
    /// nearest workshop (cn).
    workshop_to_customer: f64,
    delivery_time: Option<f64>,
    horizon: f64,
}

impl<'a> Itinerary<'a> {
    pub fn new(geometry: &'a RouteGeometry, speeds: &SpeedProfile, decision: Decision) -> Self {
        let speed = speeds.for_decision(decision);
        let d_a = geometry.alarm_location;
        match decision {
            Decision::Wr | Decision::Wn => {
                let (workshop, d_tw0) = geometry.nearest_workshop(d_a);
                Itinerary {
                    geometry,
                    decision,
                    speed,
                    direction: (workshop.highway_position - d_a).signum(),
                    highway_leg: (workshop.highway_position - d_a).abs(),
                    workshop_distance: d_tw0,
                    workshop_to_customer: geometry.workshop_to_customer(workshop),
                    delivery_time: None,
                    horizon: d_tw0 / speed,
                }
            }
            Decision::Cn => {
                let t_c = geometry.distance_to_customer() / speed;
                let (workshop, spur_free) = geometry.nearest_workshop(geometry.customer_position);
                let d_wc = spur_free + geometry.customer_offset;
                debug_assert_eq!(d_wc, geometry.workshop_to_customer(workshop));
                Itinerary {
                    geometry,
                    decision,
                    speed,
                    direction: (geometry.customer_position - d_a).signum(),
                    highway_leg: (geometry.customer_position - d_a).abs(),
                    workshop_distance: d_wc,
                    workshop_to_customer: d_wc,
                    delivery_time: Some(t_c),
                    horizon: t_c + d_wc / speed,
                }
            }
        }
    }

    pub fn decision(&self) -> Decision {
        self.decision
    }

    pub fn geometry(&self) -> &RouteGeometry {
        self.geometry
    }

    /// Truck speed before reaching the workshop, `v_i`.
    pub fn speed(&self) -> f64 {
        self.speed
    }

    /// Time to reach the workshop without breaking down, `t_w|i`.
    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Time to reach the customer, `t_c|cn`; `None` for workshop-first decisions.
    pub fn delivery_time(&self) -> Option<f64> {
        self.delivery_time
    }

    /// `d_tw(0)` for workshop-first decisions.
    pub fn initial_workshop_distance(&self) -> f64 {
        match self.decision {
            Decision::Cn => {
                self.geometry
                    .nearest_workshop(self.geometry.alarm_location)
                    .1
            }
            _ => self.workshop_distance,
        }
    }

    /// `d_wc(0)`: distance from the target workshop to the customer.
    pub fn initial_workshop_to_customer(&self) -> f64 {
        match self.decision {
            Decision::Cn => {
                let (w, _) = self.geometry.nearest_workshop(self.geometry.alarm_location);
                self.geometry.workshop_to_customer(w)
            }
            _ => self.workshop_to_customer,
        }
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if (0.0..=self.horizon).contains(&t) {
            Ok(())
        } else {
            Err(Error::Domain {
                quantity: "t",
                value: t,
                min: 0.0,
                max: self.horizon,
            })
        }
    }

    /// Highway position of the truck `t` hours after the alarm.
    pub fn position(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        let travelled = (self.speed * t).min(self.highway_leg);
        Ok(self.geometry.alarm_location + self.direction * travelled)
    }

    /// Road distance from the truck to the workshop it would be towed to,
    /// `d_tw(t)`.
    pub fn distance_to_workshop(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        Ok(self.distance_to_workshop_unchecked(t))
    }

    fn distance_to_workshop_unchecked(&self, t: f64) -> f64 {
        match self.decision {
            Decision::Wr | Decision::Wn => (self.workshop_distance - self.speed * t).max(0.0),
            Decision::Cn => {
                let travelled = self.speed * t;
                if travelled <= self.highway_leg {
                    let p = self.geometry.alarm_location + self.direction * travelled;
                    self.geometry.nearest_workshop(p).1
                } else if t <= self.delivery_time.unwrap_or(f64::INFINITY) {
                    // on the customer spur
                    let (_, d) = self
                        .geometry
                        .nearest_workshop(self.geometry.customer_position);
                    (travelled - self.highway_leg) + d
                } else {
                    self.workshop_distance
                }
            }
        }
    }

    /// Distance from the workshop the truck would be towed to at `t` on to
    /// the customer, `d_wc(t)`.
    pub fn workshop_to_customer(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        Ok(match self.decision {
            Decision::Wr | Decision::Wn => self.workshop_to_customer,
            Decision::Cn => {
                let travelled = self.speed * t;
                if travelled <= self.highway_leg {
                    let p = self.geometry.alarm_location + self.direction * travelled;
                    let (w, _) = self.geometry.nearest_workshop(p);
                    self.geometry.workshop_to_customer(w)
                } else {
                    self.workshop_to_customer
                }
            }
        })
    }

    /// Times in `(0, horizon)` where `d_tw(t)` or `d_wc(t)` stop being affine:
    /// the truck passing a workshop access point, the nearest workshop
    /// switching, leaving the highway and reaching the customer.
    pub fn kinks(&self) -> Vec<f64> {
        let mut times = Vec::new();
        if self.decision == Decision::Cn {
            let d_a = self.geometry.alarm_location;
            let mut positions: Vec<f64> = Vec::new();
            let ws = &self.geometry.workshops;
            for (i, a) in ws.iter().enumerate() {
                positions.push(a.highway_position);
                for b in &ws[i + 1..] {
                    let (lo, hi) = if a.highway_position <= b.highway_position {
                        (a, b)
                    } else {
                        (b, a)
                    };
                    let p =
                        0.5 * (lo.highway_position + hi.highway_position + hi.offset - lo.offset);
                    if p > lo.highway_position && p < hi.highway_position {
                        positions.push(p);
                    }
                }
            }
            for p in positions {
                let along = (p - d_a) * self.direction;
                if along > 0.0 && along < self.highway_leg {
                    times.push(along / self.speed);
                }
            }
            times.push(self.highway_leg / self.speed);
            if let Some(t_c) = self.delivery_time {
                times.push(t_c);
            }
        }
        times.retain(|&t| t > 0.0 && t < self.horizon);
        times.sort_by(f64::total_cmp);
        times.dedup();
        times
    }
}
