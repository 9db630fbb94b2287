//! CSV renderings of experiment results.
//!
//! Floats are written with six significant digits so that files are stable
//! across runs and plot-ready.

use std::fmt::Write as _;

use crate::decision::Decision;
use crate::experiments::{
    EerReport, RulSensitivityPoint, SweepResult, UtilitySensitivityPoint, WorkshopComparison,
};
use crate::risk::RiskReport;

/// Six significant digits, `%g` style (trailing zeros trimmed, scientific
/// notation outside `[1e-4, 1e6)`).
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (5 - exp) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub const SWEEP_HEADER: &str = "d_a,decision,E_al,E_mc,E_total,chosen";

fn push_report_rows(out: &mut String, prefix: &str, report: &RiskReport) {
    for d in Decision::ALL {
        let r = report.risk(d);
        writeln!(
            out,
            "{prefix}{},{},{},{},{},{}",
            sig6(report.alarm_location),
            d,
            sig6(r.availability),
            sig6(r.maintenance),
            sig6(r.total),
            d == report.chosen
        )
        .unwrap();
    }
}

/// One row per decision for a single alarm location.
pub fn plan_csv(report: &RiskReport) -> String {
    let mut out = format!("{SWEEP_HEADER}\n");
    push_report_rows(&mut out, "", report);
    out
}

/// One row per (alarm location, decision).
pub fn sweep_csv(sweep: &SweepResult) -> String {
    let mut out = format!("{SWEEP_HEADER}\n");
    for report in &sweep.reports {
        push_report_rows(&mut out, "", report);
    }
    out
}

pub fn baselines_csv(eer: &EerReport) -> String {
    let mut out = String::from("method,EER,R\n");
    for d in Decision::ALL {
        writeln!(
            out,
            "bm_{d},{},{}",
            sig6(eer.baseline(d)),
            sig6(eer.reduction(d))
        )
        .unwrap();
    }
    writeln!(out, "pm,{},", sig6(eer.proposed)).unwrap();
    out
}

pub fn rul_sensitivity_csv(points: &[RulSensitivityPoint]) -> String {
    let mut out = String::from("alpha_wn,beta_wn,var_wn,alpha_wr,beta_wr,expected_mer\n");
    for p in points {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            sig6(p.wn.shape),
            sig6(p.wn.scale),
            sig6(p.variance_wn),
            sig6(p.wr.shape),
            sig6(p.wr.scale),
            sig6(p.expected_mer)
        )
        .unwrap();
    }
    out
}

pub fn utility_sensitivity_csv(points: &[UtilitySensitivityPoint]) -> String {
    let mut out = String::from("t_max,pe_max,expected_mer\n");
    for p in points {
        writeln!(
            out,
            "{},{},{}",
            sig6(p.t_max),
            sig6(p.pe_max),
            sig6(p.expected_mer)
        )
        .unwrap();
    }
    out
}

/// Per-point rows for both layouts, tagged `baseline` / `variant`.
pub fn workshops_sweep_csv(cmp: &WorkshopComparison) -> String {
    let mut out = format!("layout,{SWEEP_HEADER}\n");
    for (label, sweep) in [("baseline", &cmp.baseline), ("variant", &cmp.variant)] {
        for report in &sweep.reports {
            push_report_rows(&mut out, &format!("{label},"), report);
        }
    }
    out
}

pub fn workshops_summary_csv(
    cmp: &WorkshopComparison,
    baseline_count: usize,
    variant_count: usize,
) -> String {
    format!(
        "layout,workshops,expected_mer,relative_change\nbaseline,{baseline_count},{},0\nvariant,{variant_count},{},{}\n",
        sig6(cmp.baseline_mer),
        sig6(cmp.variant_mer),
        sig6(cmp.relative_change)
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(1279.0), "1279");
        assert_eq!(sig6(598.914102617448), "598.914");
        assert_eq!(sig6(0.2119), "0.2119");
        assert_eq!(sig6(1.0 / 3.0), "0.333333");
        assert_eq!(sig6(-2.5), "-2.5");
        assert_eq!(sig6(300.0), "300");
        assert_eq!(sig6(999999.7), "1e6");
        assert_eq!(sig6(1234567.0), "1.23457e6");
        assert_eq!(sig6(0.00001234), "1.234e-5");
        assert_eq!(sig6(0.0001234), "0.0001234");
    }
}
