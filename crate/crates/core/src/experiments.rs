//! Alarm-location sweeps, baseline comparison and sensitivity analyses.
//!
//! Every sweep point is an independent evaluation. Points are computed in
//! parallel and stored by grid index, so results do not depend on the
//! number of threads.

use rayon::prelude::*;

use crate::decision::{Decision, ImpactSelection};
use crate::error::{ensure, Result};
use crate::geometry::Workshop;
use crate::risk::{RiskEngine, RiskReport};
use crate::rul::{alpha_for_fixed_mean, derive_wr_params, GammaDist};
use crate::scenario::Scenario;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub grid: Vec<f64>,
    pub reports: Vec<RiskReport>,
}

impl SweepResult {
    /// Mean over the grid of the minimal economic risk.
    pub fn expected_mer(&self) -> f64 {
        mean(self.reports.iter().map(RiskReport::min_total))
    }
}

/// `{0, step, 2·step, …}` up to `length`, always ending at `length`.
pub fn alarm_grid(length: f64, step: f64) -> Result<Vec<f64>> {
    ensure(step.is_finite() && step > 0.0, "grid_step", "grid_step > 0")?;
    let n = (length / step + 1e-9).floor() as usize;
    let mut grid: Vec<f64> = (0..=n).map(|k| k as f64 * step).collect();
    if length - grid[n] > 1e-9 * length.max(1.0) {
        grid.push(length);
    } else {
        grid[n] = length;
    }
    Ok(grid)
}

/// Risk report at every alarm location of the grid.
pub fn sweep(scenario: &Scenario, step: f64, selection: ImpactSelection) -> Result<SweepResult> {
    let grid = alarm_grid(scenario.geometry.highway_length, step)?;
    let reports = grid
        .par_iter()
        .map(|&d_a| {
            let at = scenario.with_alarm(d_a)?;
            RiskEngine::new(&at)
                .report(selection)
                .map_err(|e| e.at_alarm(d_a))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { grid, reports })
}

/// Expected economic risk of each always-take-`i` baseline and of the
/// minimal-risk policy, under a uniform prior over alarm locations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EerReport {
    /// `EER(bm_i)`, indexed by [`Decision::index`].
    pub baselines: [f64; 3],
    /// `EER(pm)`.
    pub proposed: f64,
    /// `R_i = (EER(bm_i) − EER(pm)) / EER(bm_i)`.
    pub reduction: [f64; 3],
}

impl EerReport {
    pub fn baseline(&self, decision: Decision) -> f64 {
        self.baselines[decision.index()]
    }

    pub fn reduction(&self, decision: Decision) -> f64 {
        self.reduction[decision.index()]
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    sum / n as f64
}

pub fn eer(sweep: &SweepResult) -> EerReport {
    debug_assert!(!sweep.reports.is_empty());
    let mut baselines = [0.0; 3];
    for d in Decision::ALL {
        baselines[d.index()] = mean(sweep.reports.iter().map(|r| r.risk(d).total));
    }
    let proposed = sweep.expected_mer();
    let reduction = baselines.map(|b| if b > 0.0 { (b - proposed) / b } else { 0.0 });
    EerReport {
        baselines,
        proposed,
        reduction,
    }
}

/// Settings for the RUL-variance sensitivity analysis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RulSweep {
    /// Fixed expected RUL under normal speed, hours.
    pub mean: f64,
    pub alpha_min: f64,
    pub alpha_max: f64,
    /// Number of α values on `(alpha_min, alpha_max]`.
    pub count: usize,
}

impl Default for RulSweep {
    fn default() -> Self {
        RulSweep {
            mean: 4.0,
            alpha_min: 1.0,
            alpha_max: 10.0,
            count: 45,
        }
    }
}

impl RulSweep {
    /// `alpha_min + k (alpha_max − alpha_min) / count` for `k = 1..=count`.
    pub fn alphas(&self) -> Vec<f64> {
        let span = self.alpha_max - self.alpha_min;
        (1..=self.count)
            .map(|k| self.alpha_min + span * k as f64 / self.count as f64)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RulSensitivityPoint {
    pub wn: GammaDist,
    pub wr: GammaDist,
    pub variance_wn: f64,
    pub expected_mer: f64,
}

/// The `wn`/`cn` parameters for one point of the RUL sweep, with `wr` derived
/// from them.
pub fn rul_point_scenario(base: &Scenario, mean: f64, alpha: f64) -> Scenario {
    let wn = alpha_for_fixed_mean(mean, alpha);
    let (shape, scale) = derive_wr_params(wn.shape, wn.scale, base.speeds.v_wn, base.speeds.v_wr);
    let mut s = base.clone();
    s.rul.wn = wn;
    s.rul.cn = wn;
    s.rul.wr = GammaDist { shape, scale };
    s
}

pub fn rul_sensitivity(
    base: &Scenario,
    settings: &RulSweep,
    step: f64,
) -> Result<Vec<RulSensitivityPoint>> {
    settings
        .alphas()
        .into_par_iter()
        .map(|alpha| {
            let s = rul_point_scenario(base, settings.mean, alpha);
            let result = sweep(&s, step, ImpactSelection::Both)?;
            Ok(RulSensitivityPoint {
                wn: s.rul.wn,
                wr: s.rul.wr,
                variance_wn: s.rul.wn.shape * s.rul.wn.scale * s.rul.wn.scale,
                expected_mer: result.expected_mer(),
            })
        })
        .collect()
}

/// Settings for the delay-penalty sensitivity analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilitySweep {
    pub t_max_values: Vec<f64>,
    pub pe_max_min: f64,
    pub pe_max_max: f64,
    pub pe_max_count: usize,
}

impl Default for UtilitySweep {
    fn default() -> Self {
        UtilitySweep {
            t_max_values: vec![6.0, 10.0],
            pe_max_min: 800.0,
            pe_max_max: 4000.0,
            pe_max_count: 9,
        }
    }
}

impl UtilitySweep {
    /// Evenly spaced including both ends.
    pub fn pe_max_values(&self) -> Vec<f64> {
        if self.pe_max_count == 1 {
            return vec![self.pe_max_min];
        }
        let span = self.pe_max_max - self.pe_max_min;
        (0..self.pe_max_count)
            .map(|k| self.pe_max_min + span * k as f64 / (self.pe_max_count - 1) as f64)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UtilitySensitivityPoint {
    pub t_max: f64,
    pub pe_max: f64,
    pub expected_mer: f64,
}

pub fn utility_sensitivity(
    base: &Scenario,
    settings: &UtilitySweep,
    step: f64,
) -> Result<Vec<UtilitySensitivityPoint>> {
    let cells: Vec<(f64, f64)> = settings
        .t_max_values
        .iter()
        .flat_map(|&t| settings.pe_max_values().into_iter().map(move |p| (t, p)))
        .collect();
    cells
        .into_par_iter()
        .map(|(t_max, pe_max)| {
            let mut s = base.clone();
            s.utility.t_max = t_max;
            s.utility.pe_max = pe_max;
            s.utility.validate()?;
            let result = sweep(&s, step, ImpactSelection::Both)?;
            Ok(UtilitySensitivityPoint {
                t_max,
                pe_max,
                expected_mer: result.expected_mer(),
            })
        })
        .collect()
}

/// The base scenario's first workshop plus one more at the far end of the
/// highway with the same spur length.
pub fn two_workshop_layout(base: &Scenario) -> Vec<Workshop> {
    let first = base.geometry.workshops[0].clone();
    let far = Workshop::new("b", base.geometry.highway_length, first.offset);
    vec![first, far]
}

/// `n` workshops spread evenly over the highway, all with the base spur length.
pub fn even_workshop_layout(base: &Scenario, n: usize) -> Vec<Workshop> {
    let offset = base.geometry.workshops[0].offset;
    let length = base.geometry.highway_length;
    if n <= 1 {
        return vec![base.geometry.workshops[0].clone()];
    }
    (0..n)
        .map(|k| {
            let id = char::from_u32('a' as u32 + k as u32)
                .filter(char::is_ascii_lowercase)
                .map(String::from)
                .unwrap_or_else(|| format!("w{k}"));
            Workshop::new(id, length * k as f64 / (n - 1) as f64, offset)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorkshopComparison {
    pub baseline: SweepResult,
    pub variant: SweepResult,
    pub baseline_mer: f64,
    pub variant_mer: f64,
    /// `(variant − baseline) / baseline`; negative means the variant is cheaper.
    pub relative_change: f64,
}

/// Sweeps the base scenario and the same scenario with `workshops`, and
/// compares their expected minimal economic risk.
pub fn workshop_scenario(
    base: &Scenario,
    workshops: Vec<Workshop>,
    step: f64,
) -> Result<WorkshopComparison> {
    let variant_scenario = base.with_workshops(workshops)?;
    let baseline = sweep(base, step, ImpactSelection::Both)?;
    let variant = sweep(&variant_scenario, step, ImpactSelection::Both)?;
    let baseline_mer = baseline.expected_mer();
    let variant_mer = variant.expected_mer();
    Ok(WorkshopComparison {
        relative_change: (variant_mer - baseline_mer) / baseline_mer,
        baseline,
        variant,
        baseline_mer,
        variant_mer,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basic() -> Scenario {
        Scenario::preset("paper-basic").unwrap()
    }

    #[test]
    fn grid_shapes() {
        assert_eq!(alarm_grid(300.0, 1.0).unwrap().len(), 301);
        assert_eq!(alarm_grid(300.0, 300.0).unwrap(), vec![0.0, 300.0]);
        assert_eq!(alarm_grid(10.0, 4.0).unwrap(), vec![0.0, 4.0, 8.0, 10.0]);
        let g = alarm_grid(300.0, 0.1).unwrap();
        assert_eq!(g.len(), 3001);
        assert_eq!(*g.last().unwrap(), 300.0);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        assert!(alarm_grid(300.0, 0.0).is_err());
    }

    #[test]
    fn endpoint_sweep() {
        let r = sweep(&basic(), 300.0, ImpactSelection::Both).unwrap();
        assert_eq!(r.reports.len(), 2);
        assert_eq!(r.reports[1].alarm_location, 300.0);
    }

    #[test]
    fn cn_availability_risk_falls_towards_customer() {
        let r = sweep(&basic(), 1.0, ImpactSelection::Both).unwrap();
        let tail: Vec<f64> = r.reports[250..]
            .iter()
            .map(|x| x.risk(Decision::Cn).availability)
            .collect();
        assert!(tail.windows(2).all(|w| w[1] <= w[0] + 1e-9));
    }

    #[test]
    fn eer_of_single_point_is_min() {
        let s = basic().with_alarm(120.0).unwrap();
        let report = RiskEngine::new(&s).report(ImpactSelection::Both).unwrap();
        let one = SweepResult {
            grid: vec![120.0],
            reports: vec![report.clone()],
        };
        let e = eer(&one);
        assert_eq!(e.proposed, report.min_total());
        for d in Decision::ALL {
            assert_eq!(e.baseline(d), report.risk(d).total);
        }
    }

    #[test]
    fn eer_matches_naive_mean_of_minima() {
        let r = sweep(&basic(), 10.0, ImpactSelection::Both).unwrap();
        let e = eer(&r);
        let naive: f64 = r
            .reports
            .iter()
            .map(|x| {
                x.risks
                    .iter()
                    .map(|d| d.total)
                    .fold(f64::INFINITY, f64::min)
            })
            .sum::<f64>()
            / r.reports.len() as f64;
        assert!((e.proposed - naive).abs() <= 1e-12 * naive);
        for d in Decision::ALL {
            assert!(e.proposed <= e.baseline(d));
            assert!((0.0..1.0).contains(&e.reduction(d)));
        }
    }

    #[test]
    fn rul_grid() {
        let a = RulSweep::default().alphas();
        assert_eq!(a.len(), 45);
        assert!((a[0] - 1.2).abs() < 1e-12);
        assert_eq!(*a.last().unwrap(), 10.0);
        let s = rul_point_scenario(&basic(), 4.0, 8.0);
        assert!((s.rul.wn.variance() - 2.0).abs() < 1e-12);
        assert_eq!(s.rul.wn, s.rul.cn);
        use crate::rul::RulDistribution;
        assert!((s.rul.wr.variance() - s.rul.wn.variance()).abs() < 1e-12);
    }

    #[test]
    fn rul_point_is_consistent_with_eer() {
        let base = basic();
        let settings = RulSweep {
            mean: 4.0,
            alpha_min: 1.0,
            alpha_max: 2.0,
            count: 1,
        };
        let points = rul_sensitivity(&base, &settings, 30.0).unwrap();
        assert_eq!(points.len(), 1);
        let s = rul_point_scenario(&base, 4.0, 2.0);
        let direct = eer(&sweep(&s, 30.0, ImpactSelection::Both).unwrap()).proposed;
        assert_eq!(points[0].expected_mer, direct);
        assert_eq!((points[0].wn.shape, points[0].wn.scale), (2.0, 2.0));
        assert_eq!((points[0].wr.shape, points[0].wr.scale), (32.0, 0.5));
    }

    #[test]
    fn utility_grid() {
        let u = UtilitySweep::default();
        let pe = u.pe_max_values();
        assert_eq!(
            pe,
            vec![800.0, 1200.0, 1600.0, 2000.0, 2400.0, 2800.0, 3200.0, 3600.0, 4000.0]
        );
    }

    #[test]
    fn utility_cell_matches_base() {
        let base = basic();
        let settings = UtilitySweep {
            t_max_values: vec![10.0],
            pe_max_min: 2000.0,
            pe_max_max: 2000.0,
            pe_max_count: 1,
        };
        let cells = utility_sensitivity(&base, &settings, 20.0).unwrap();
        let direct = sweep(&base, 20.0, ImpactSelection::Both)
            .unwrap()
            .expected_mer();
        assert_eq!(cells[0].expected_mer, direct);
    }

    #[test]
    fn duplicate_workshop_changes_nothing() {
        let base = basic();
        let dup = vec![
            base.geometry.workshops[0].clone(),
            Workshop::new("a2", 0.0, 0.0),
        ];
        let cmp = workshop_scenario(&base, dup, 25.0).unwrap();
        assert_eq!(cmp.baseline_mer, cmp.variant_mer);
        assert_eq!(cmp.relative_change, 0.0);
    }

    #[test]
    fn layouts() {
        let base = Scenario::preset("paper-calibrated").unwrap();
        let two = two_workshop_layout(&base);
        assert_eq!(two.len(), 2);
        assert_eq!(two[1].highway_position, 300.0);
        assert_eq!(two[1].offset, 23.0);
        let three = even_workshop_layout(&base, 3);
        assert_eq!(
            three.iter().map(|w| w.highway_position).collect::<Vec<_>>(),
            vec![0.0, 150.0, 300.0]
        );
        assert_eq!(even_workshop_layout(&base, 1), base.geometry.workshops);
    }
}
