use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};

fn default_rate() -> f64 {
    100.0
}

/// Contractual penalty for delivery delay: free up to `t_min`, then `rate`
/// EUR per hour, and a flat `pe_max` once the delay exceeds `t_max`
/// (order cancelled).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AvailabilityUtility {
    pub t_min: f64,
    pub t_max: f64,
    pub pe_max: f64,
    #[serde(default = "default_rate")]
    pub rate: f64,
}

impl AvailabilityUtility {
    /// EUR charged for a delay of `l` hours.
    pub fn value(&self, l: f64) -> Result<f64> {
        if l.is_nan() || l < 0.0 {
            return Err(Error::Domain {
                quantity: "l_al",
                value: l,
                min: 0.0,
                max: f64::INFINITY,
            });
        }
        Ok(self.value_unchecked(l))
    }

    pub(crate) fn value_unchecked(&self, l: f64) -> f64 {
        if l <= self.t_min {
            0.0
        } else if l <= self.t_max {
            self.rate * (l - self.t_min)
        } else {
            self.pe_max
        }
    }

    /// Delay values where the utility has a kink or a jump.
    pub fn breakpoints(&self) -> [f64; 2] {
        [self.t_min, self.t_max]
    }

    /// Whether cancelling costs at least as much as the largest delay penalty.
    pub fn is_monotone(&self) -> bool {
        self.pe_max >= self.rate * (self.t_max - self.t_min)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(
            self.t_min.is_finite() && self.t_min >= 0.0,
            "utility.t_min",
            "0 ≤ t_min",
        )?;
        ensure(
            self.t_max.is_finite() && self.t_max > self.t_min,
            "utility.t_max",
            "t_min < t_max",
        )?;
        ensure(
            self.pe_max.is_finite() && self.pe_max >= 0.0,
            "utility.pe_max",
            "pe_max ≥ 0",
        )?;
        ensure(
            self.rate.is_finite() && self.rate >= 0.0,
            "utility.rate",
            "rate ≥ 0",
        )
    }
}

/// Maintenance cost is already in EUR.
pub fn utility_mc(l: f64) -> f64 {
    l
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const U: AvailabilityUtility = AvailabilityUtility {
        t_min: 2.0,
        t_max: 10.0,
        pe_max: 2000.0,
        rate: 100.0,
    };

    #[test]
    fn branches() {
        assert_eq!(U.value(1.0).unwrap(), 0.0);
        assert_eq!(U.value(2.0).unwrap(), 0.0);
        assert_eq!(U.value(5.0).unwrap(), 300.0);
        assert_eq!(U.value(10.0).unwrap(), 800.0);
        assert_eq!(U.value(12.0).unwrap(), 2000.0);
        assert!(matches!(U.value(-0.5), Err(Error::Domain { .. })));
    }

    #[test]
    fn identity_for_cost() {
        assert_eq!(utility_mc(500.0), 500.0);
        assert_eq!(utility_mc(0.0), 0.0);
        assert_eq!(utility_mc(2275.0), 2275.0);
    }

    #[test]
    fn monotonicity_flag() {
        assert!(U.is_monotone());
        let cheap_cancel = AvailabilityUtility { pe_max: 500.0, ..U };
        assert!(!cheap_cancel.is_monotone());
        assert!(cheap_cancel.validate().is_ok());
        let bad = AvailabilityUtility { t_max: 1.0, ..U };
        assert!(bad.validate().unwrap_err().to_string().contains("t_max"));
    }

    proptest! {
        #[test]
        fn nondecreasing_when_monotone(a in 0.0..30.0f64, b in 0.0..30.0f64, pe in 800.0..4000.0f64) {
            let u = AvailabilityUtility { pe_max: pe, ..U };
            prop_assume!(u.is_monotone());
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(u.value(lo).unwrap() <= u.value(hi).unwrap());
        }
    }
}
