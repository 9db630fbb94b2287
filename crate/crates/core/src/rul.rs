//! Remaining-useful-life distributions.
//!
//! The risk engine only needs a density and a distribution function, so it
//! works against [`RulDistribution`]. The shipped family is Gamma, with one
//! parameter pair per decision because driving slower is assumed to slow the
//! degradation down.

use serde::{Deserialize, Serialize};

use crate::decision::Decision;
use crate::error::{ensure, Error, Result};
use crate::special::{gamma_p, ln_gamma};

/// Distribution of the time (hours after the alarm) until the faulty component fails.
pub trait RulDistribution {
    fn pdf(&self, t: f64) -> Result<f64>;
    fn cdf(&self, t: f64) -> Result<f64>;
    fn mean(&self) -> f64;
    fn variance(&self) -> f64;

    /// `p` such that the density behaves like `tᵖ` as `t → 0`, if known.
    /// Lets the quadrature treat a non-smooth start of the density.
    fn origin_power(&self) -> Option<f64> {
        None
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            quantity: "t",
            value: t,
            min: 0.0,
            max: f64::INFINITY,
        })
    }
}

/// Gamma distribution with shape `alpha` and scale `beta` (hours).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaDist {
    pub shape: f64,
    pub scale: f64,
}

impl GammaDist {
    pub fn new(shape: f64, scale: f64) -> Result<Self> {
        let g = GammaDist { shape, scale };
        g.validate("rul")?;
        Ok(g)
    }

    pub(crate) fn validate(&self, field: &str) -> Result<()> {
        ensure(
            self.shape.is_finite() && self.shape > 0.0,
            &format!("{field}.shape"),
            "shape > 0",
        )?;
        ensure(
            self.scale.is_finite() && self.scale > 0.0,
            &format!("{field}.scale"),
            "scale > 0",
        )
    }
}

impl RulDistribution for GammaDist {
    fn pdf(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        let GammaDist { shape: a, scale: b } = *self;
        if t == 0.0 {
            return Ok(match a.partial_cmp(&1.0) {
                Some(std::cmp::Ordering::Greater) => 0.0,
                Some(std::cmp::Ordering::Equal) => 1.0 / b,
                _ => f64::INFINITY,
            });
        }
        let log_density = (a - 1.0) * t.ln() - t / b - a * b.ln() - ln_gamma(a);
        Ok(log_density.exp())
    }

    fn cdf(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        gamma_p(self.shape, t / self.scale)
    }

    fn mean(&self) -> f64 {
        self.shape * self.scale
    }

    fn variance(&self) -> f64 {
        self.shape * self.scale * self.scale
    }

    fn origin_power(&self) -> Option<f64> {
        Some(self.shape - 1.0)
    }
}

/// Per-decision Gamma RUL parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaRul {
    pub wr: GammaDist,
    pub wn: GammaDist,
    pub cn: GammaDist,
}

impl GammaRul {
    pub fn get(&self, decision: Decision) -> &GammaDist {
        match decision {
            Decision::Wr => &self.wr,
            Decision::Wn => &self.wn,
            Decision::Cn => &self.cn,
        }
    }

    pub fn pdf(&self, decision: Decision, t: f64) -> Result<f64> {
        self.get(decision).pdf(t)
    }

    pub fn cdf(&self, decision: Decision, t: f64) -> Result<f64> {
        self.get(decision).cdf(t)
    }

    /// `(mean, variance)` of the RUL under `decision`.
    pub fn moments(&self, decision: Decision) -> (f64, f64) {
        let g = self.get(decision);
        (g.mean(), g.variance())
    }

    pub fn validate(&self) -> Result<()> {
        self.wr.validate("rul.wr")?;
        self.wn.validate("rul.wn")?;
        self.cn.validate("rul.cn")
    }
}

/// Reduced-speed RUL parameters from the normal-speed ones, assuming the
/// variance is unchanged and the expected distance driven before breakdown
/// doubles:
///
/// ```text
/// α_wn β_wn²        = α_wr β_wr²
/// 2 α_wn β_wn v_wn  = α_wr β_wr v_wr
/// ```
///
/// Returns `(α_wr, β_wr)`.
pub fn derive_wr_params(alpha_wn: f64, beta_wn: f64, v_wn: f64, v_wr: f64) -> (f64, f64) {
    let ratio = 2.0 * v_wn / v_wr;
    (alpha_wn * ratio * ratio, beta_wn / ratio)
}

/// Shape/scale pair with the given mean; the variance is then `mean² / α`.
pub fn alpha_for_fixed_mean(mean: f64, alpha: f64) -> GammaDist {
    GammaDist {
        shape: alpha,
        scale: mean / alpha,
    }
}
