//! Reproduction report: machine-readable JSON plus a Markdown summary.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use anyhow::Result;
use serde::Serialize;
use sievebound::objective::{Axis, GSearchSpec, Objective, SearchParams};
use sievebound::Error;

use crate::output::fmt_sig;

#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub name: String,
    /// Module and operation that produced the number.
    pub producer: String,
    pub settings: BTreeMap<String, String>,
    pub value: Option<f64>,
    pub target: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub rows: Vec<ReportRow>,
    pub all_pass: bool,
}

impl ReportRow {
    pub fn value_text(&self) -> String {
        self.value.map_or_else(|| "none".to_string(), fmt_sig)
    }
}

impl Report {
    pub fn new(rows: Vec<ReportRow>) -> Self {
        let all_pass = rows.iter().all(|r| r.pass);
        Self { rows, all_pass }
    }

    pub fn markdown(&self) -> String {
        let mut s = String::from("# Reproduction report\n\n");
        if self.rows.is_empty() {
            s.push_str("No results.\n");
            return s;
        }
        s.push_str("| check | value | target | tolerance | result | producer | settings |\n");
        s.push_str("|---|---|---|---|---|---|---|\n");
        for r in &self.rows {
            let settings: Vec<String> = r.settings.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(
                s,
                "| {} | {} | {} | ±{} | {} | {} | {} |",
                r.name,
                r.value_text(),
                fmt_sig(r.target),
                fmt_sig(r.tolerance),
                if r.pass { "PASS" } else { "FAIL" },
                r.producer,
                settings.join(", ")
            );
        }
        let _ = writeln!(s, "\nOverall: {}", if self.all_pass { "PASS" } else { "FAIL" });
        s
    }
}

fn row(
    name: &str,
    producer: &str,
    settings: &[(&str, String)],
    value: Option<f64>,
    target: f64,
    tolerance: f64,
) -> ReportRow {
    ReportRow {
        name: name.to_string(),
        producer: producer.to_string(),
        settings: settings.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        value,
        target,
        tolerance,
        pass: value.is_some_and(|v| (v - target).abs() <= tolerance),
    }
}

/// θ₂ range of the largest-positive-G search.
pub fn theta2_axis(full_scan: bool) -> Axis {
    if full_scan {
        Axis::new(0.0001, 0.05, 0.0001)
    } else {
        Axis::new(0.020, 0.024, 0.0001)
    }
}

/// The G and H headline checks.
pub fn headline_rows(objective: &Objective<'_>, settings: &[(&str, String)], full_scan: bool) -> Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    let params = SearchParams::new(0.14, 0.23, 0.449, 0.011)?;
    let h = objective.eval_h(&params)?;
    rows.push(row("H(0.14, 0.23, 0.449, 0.011)", "objective::eval_h", settings, Some(h.h_value), 1.2471, 0.002));
    rows.push(row(
        "1/λ + 1/θ at (0.14, 0.23)",
        "objective::SearchParams::omega_bound",
        settings,
        Some(h.omega_bound),
        11.4907,
        1e-4,
    ));
    let g = objective.eval_g(0.431, 0.0219)?;
    rows.push(row("G(0.431, 0.0219)", "objective::eval_g", settings, Some(g.value), 0.0376, 0.002));

    let spec = GSearchSpec {
        theta1: Axis::new(0.2501, 0.4999, 0.0001),
        theta2: theta2_axis(full_scan),
    };
    let found = match objective.search_g(&spec, false) {
        Ok(out) => Some(out.best.theta2),
        Err(Error::NoPositivePoint { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let mut search_settings = settings.to_vec();
    search_settings.push(("theta2_range", format!("[{}, {}]", spec.theta2.lo, spec.theta2.hi)));
    search_settings.push(("grid_step", "0.0001".to_string()));
    rows.push(row(
        "largest θ₂ with G > 0",
        "objective::search_g",
        &search_settings,
        found,
        0.0219,
        0.5e-4,
    ));
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_valid() {
        let r = Report::new(Vec::new());
        assert!(r.all_pass);
        assert!(r.markdown().contains("No results"));
        let json = crate::output::to_json(&r).unwrap();
        assert!(json.contains("\"rows\": []"));
    }

    #[test]
    fn missing_value_fails() {
        let r = row("x", "m", &[], None, 1.0, 0.1);
        assert!(!r.pass);
        assert!(row("x", "m", &[], Some(1.05), 1.0, 0.1).pass);
    }
}
