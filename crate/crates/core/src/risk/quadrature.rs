//! Composite Simpson quadrature with interval doubling.
//!
//! Each doubling reuses every previous sample. The difference between two
//! successive Simpson estimates gives a Richardson error estimate, and the
//! extrapolated value is returned once it meets the relative tolerance.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};

const MIN_PANELS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-8,
            max_panels: 1 << 20,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        ensure(
            self.rel_tol.is_finite() && self.rel_tol > 0.0 && self.rel_tol < 1.0,
            "numerics.quadrature.rel_tol",
            "0 < rel_tol < 1",
        )?;
        ensure(
            self.max_panels >= MIN_PANELS,
            "numerics.quadrature.max_panels",
            "max_panels ≥ 16",
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate {
    pub value: f64,
    pub error_estimate: f64,
    pub panels: usize,
}

/// Integrates `f` over `[a, b]`; `f` should be smooth on the interval.
pub fn simpson<F>(f: F, a: f64, b: f64, config: &QuadratureConfig) -> Result<QuadEstimate>
where
    F: Fn(f64) -> f64,
{
    simpson_with_floor(f, a, b, config, 0.0)
}

/// Like [`simpson`], but also accepts an error estimate below `abs_tol`.
/// Used when the integral is one term of a larger sum whose scale is known.
pub fn simpson_with_floor<F>(
    f: F,
    a: f64,
    b: f64,
    config: &QuadratureConfig,
    abs_tol: f64,
) -> Result<QuadEstimate>
where
    F: Fn(f64) -> f64,
{
    if b <= a {
        return Ok(QuadEstimate {
            value: 0.0,
            error_estimate: 0.0,
            panels: 0,
        });
    }
    let width = b - a;
    let ends = f(a) + f(b);
    // samples at even (excluding ends) and odd interior nodes of the current grid
    let mut n = 2usize;
    let mut even = 0.0;
    let mut odd = f(a + 0.5 * width);
    let estimate =
        |n: usize, even: f64, odd: f64| (width / n as f64) / 3.0 * (ends + 4.0 * odd + 2.0 * even);
    let mut previous = estimate(n, even, odd);

    loop {
        let next_n = 2 * n;
        if next_n > config.max_panels {
            let current = estimate(n, even, odd);
            return Err(Error::Quadrature {
                lower: a,
                upper: b,
                panels: n,
                estimate: current,
                error_estimate: (current - previous).abs() / 15.0,
            });
        }
        even += odd;
        let h = width / next_n as f64;
        odd = (0..n).map(|k| f(a + (2 * k + 1) as f64 * h)).sum();
        n = next_n;
        let current = estimate(n, even, odd);
        let error = (current - previous).abs() / 15.0;
        let extrapolated = current + (current - previous) / 15.0;
        if n >= MIN_PANELS
            && error <= config.rel_tol * extrapolated.abs() + abs_tol.max(f64::MIN_POSITIVE)
        {
            return Ok(QuadEstimate {
                value: extrapolated,
                error_estimate: error,
                panels: n,
            });
        }
        previous = current;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn integrates_polynomials_exactly() {
        let r = simpson(|x| 3.0 * x * x - 2.0 * x + 1.0, 0.0, 2.0, &cfg()).unwrap();
        assert!((r.value - 6.0).abs() < 1e-12);
        assert_eq!(r.panels, MIN_PANELS);
    }

    #[test]
    fn integrates_smooth_functions_to_tolerance() {
        let r = simpson(f64::sin, 0.0, std::f64::consts::PI, &cfg()).unwrap();
        assert!((r.value - 2.0).abs() < 2e-8);
        let r = simpson(|x| (-x).exp(), 0.0, 30.0, &cfg()).unwrap();
        assert!((r.value - (1.0 - (-30.0f64).exp())).abs() < 1e-8);
    }

    #[test]
    fn empty_and_zero_integrals() {
        assert_eq!(simpson(|x| x, 1.0, 1.0, &cfg()).unwrap().value, 0.0);
        let r = simpson(|_| 0.0, 0.0, 5.0, &cfg()).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn reports_non_convergence_with_diagnostics() {
        let tight = QuadratureConfig {
            rel_tol: 1e-15,
            max_panels: 64,
        };
        // a jump inside the interval defeats Simpson's error model
        let err = simpson(|x| if x < 0.3 { 0.0 } else { 1.0 }, 0.0, 1.0, &tight).unwrap_err();
        match err {
            Error::Quadrature {
                panels, estimate, ..
            } => {
                assert_eq!(panels, 64);
                assert!((estimate - 0.7).abs() < 0.05);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn validation() {
        assert!(cfg().validate().is_ok());
        let bad = QuadratureConfig {
            rel_tol: 0.0,
            ..cfg()
        };
        assert!(bad.validate().is_err());
    }
}
