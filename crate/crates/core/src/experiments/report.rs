//! Structured experiment results with CSV and JSON emission.

use std::collections::BTreeMap;

use serde::Serialize;

/// Schema header written before CSV output.
pub const SCHEMA_HEADER: &str = "# kss-spectra schema v1";

/// Fixed CSV column order.
pub const CSV_COLUMNS: [&str; 13] = [
    "name", "m", "n", "q", "l_n", "t_n", "eps_n", "eta_n", "estimate", "std_error", "target",
    "pass", "seed",
];

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub name: String,
    pub parameters: BTreeMap<String, String>,
    pub estimate: f64,
    pub std_error: f64,
    pub target: f64,
    pub tolerance_rule: String,
    /// None when the run is pre-asymptotic and no verdict applies.
    pub pass: Option<bool>,
    pub runtime_seconds: f64,
    pub seed: u64,
}

/// Full-precision decimal rendering of a double (17 significant digits).
pub fn full_precision(v: f64) -> String {
    format!("{:.16e}", v)
}

impl ExperimentReport {
    pub fn passed(&self) -> bool {
        self.pass.unwrap_or(true)
    }

    pub fn csv_row(&self) -> String {
        let get = |k: &str| self.parameters.get(k).cloned().unwrap_or_default();
        let pass = match self.pass {
            Some(true) => "true".to_string(),
            Some(false) => "false".to_string(),
            None => "pre-asymptotic".to_string(),
        };
        [
            self.name.clone(),
            get("m"),
            get("n"),
            get("q"),
            get("l_n"),
            get("t_n"),
            get("eps_n"),
            get("eta_n"),
            full_precision(self.estimate),
            full_precision(self.std_error),
            full_precision(self.target),
            pass,
            self.seed.to_string(),
        ]
        .join(",")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Render a batch of reports as CSV with the schema header and column row.
pub fn to_csv(reports: &[ExperimentReport]) -> String {
    let mut out = String::new();
    out.push_str(SCHEMA_HEADER);
    out.push('\n');
    out.push_str(&CSV_COLUMNS.join(","));
    out.push('\n');
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// Render a batch of reports as JSON (one object per report, in an array).
pub fn to_json(reports: &[ExperimentReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ExperimentReport {
        let mut parameters = BTreeMap::new();
        parameters.insert("m".into(), "2".into());
        parameters.insert("n".into(), "10".into());
        ExperimentReport {
            name: "demo".into(),
            parameters,
            estimate: 0.5,
            std_error: 0.01,
            target: 0.49,
            tolerance_rule: "within 3 SE".into(),
            pass: Some(true),
            runtime_seconds: 0.1,
            seed: 7,
        }
    }

    #[test]
    fn csv_shape() {
        let csv = to_csv(&[sample()]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], SCHEMA_HEADER);
        assert_eq!(lines[1].split(',').count(), 13);
        assert_eq!(lines[2].split(',').count(), 13);
        assert!(lines[2].starts_with("demo,2,10,"));
    }

    #[test]
    fn json_round_readable() {
        let j = sample().to_json();
        let v: serde_json::Value = serde_json::from_str(&j).unwrap();
        assert_eq!(v["name"], "demo");
        assert_eq!(v["pass"], true);
    }

    #[test]
    fn full_precision_round_trips() {
        for v in [0.1, 1.0 / 3.0, 6.02e23, -1e-300] {
            let s = full_precision(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
    }
}
