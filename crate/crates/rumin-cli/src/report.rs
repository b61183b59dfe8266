//! Machine-readable verification reports with byte-deterministic output.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    #[allow(dead_code)]
    Skip,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub id: String,
    pub status: Status,
    pub measured: String,
    pub tolerance: String,
    /// The property being checked, as a formula or short statement.
    pub anchor: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub n: usize,
    pub seed: u64,
    pub checks: Vec<Check>,
}

/// Stable float rendering used everywhere in reports.
pub fn fnum(v: f64) -> String {
    format!("{v:.12e}")
}

impl SuiteReport {
    pub fn new(suite: &str, n: usize, seed: u64) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            n,
            seed,
            checks: Vec::new(),
        }
    }

    /// An exact (rational-arithmetic) check.
    pub fn exact(&mut self, id: &str, ok: bool, anchor: &str) {
        self.push(id, ok, "exact".into(), "0".into(), anchor);
    }

    /// A numeric check `measured < tolerance`.
    pub fn tol(&mut self, id: &str, measured: f64, tolerance: f64, anchor: &str) {
        let ok = measured.is_finite() && measured < tolerance;
        self.push(id, ok, fnum(measured), fnum(tolerance), anchor);
    }

    /// A boolean condition with a reported value.
    pub fn cond(&mut self, id: &str, ok: bool, measured: String, anchor: &str) {
        self.push(id, ok, measured, "-".into(), anchor);
    }

    #[allow(dead_code)]
    pub fn skip(&mut self, id: &str, reason: &str) {
        self.checks.push(Check {
            id: id.to_string(),
            status: Status::Skip,
            measured: "-".into(),
            tolerance: "-".into(),
            anchor: reason.to_string(),
        });
    }

    fn push(&mut self, id: &str, ok: bool, measured: String, tolerance: String, anchor: &str) {
        assert!(
            self.checks.iter().all(|c| c.id != id),
            "duplicate check id {id}"
        );
        self.checks.push(Check {
            id: id.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            measured,
            tolerance,
            anchor: anchor.to_string(),
        });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("check_id,status,measured,tolerance,anchor\n");
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
                Status::Skip => "skip",
            };
            out.push_str(&format!(
                "{},{},{},{},\"{}\"\n",
                c.id, status, c.measured, c.tolerance, c.anchor
            ));
        }
        out
    }

    /// Human-oriented line listing on stderr-style output.
    pub fn summary_lines(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skip => "skip",
            };
            out.push_str(&format!(
                "[{status}] {:<42} measured={} tol={}\n",
                c.id, c.measured, c.tolerance
            ));
        }
        let (p, f, s) = self.counts();
        out.push_str(&format!("{p} passed, {f} failed, {s} skipped\n"));
        out
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        let mut counts = (0, 0, 0);
        for c in &self.checks {
            match c.status {
                Status::Pass => counts.0 += 1,
                Status::Fail => counts.1 += 1,
                Status::Skip => counts.2 += 1,
            }
        }
        counts
    }
}
