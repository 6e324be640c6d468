use serde::Serialize;

use crate::inequality::Adjudication;
use crate::io::{MatrixFile, Mode};

/// A check that failed in float arithmetic, with its exact re-check.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Violation {
    pub trial: u64,
    pub seed: u64,
    pub suite: String,
    pub context: String,
    pub margin: f64,
    pub matrices: Vec<MatrixFile>,
    pub exact_recheck: Adjudication,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteSummary {
    pub name: String,
    pub checks: u64,
    pub failures: u64,
    /// Smallest margin seen; identities contribute `−|lhs − rhs|`.
    pub min_margin: Option<f64>,
    pub min_margin_trial: Option<u64>,
}

impl SuiteSummary {
    fn new(name: &str) -> Self {
        SuiteSummary {
            name: name.to_string(),
            checks: 0,
            failures: 0,
            min_margin: None,
            min_margin_trial: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunReport {
    pub command: String,
    pub seed: u64,
    pub trials: u64,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub form: Option<String>,
    pub mode: Mode,
    pub tol: f64,
    /// `n ≤ 4`, where the reduced inequality is a theorem.
    pub theorem_region: bool,
    /// Exact-confirmed violations only.
    pub violations: Vec<Violation>,
    /// Float failures that the exact re-check did not confirm.
    pub flagged: Vec<Violation>,
    pub suites: Vec<SuiteSummary>,
    pub wall_time_ms: u128,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        if self.violations.is_empty() { 0 } else { 1 }
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteSummary> {
        self.suites.iter().find(|s| s.name == name)
    }
}

/// One evaluated check inside a trial.
#[derive(Clone, Debug)]
pub(crate) struct Observation {
    pub suite: &'static str,
    pub margin: f64,
    pub holds: bool,
    /// Present exactly when `holds` is false.
    pub escalation: Option<Violation>,
}

pub(crate) type RunReportParts = (Vec<SuiteSummary>, Vec<Violation>, Vec<Violation>);

/// Folds per-trial observations (in trial order) into suite summaries, the
/// confirmed violations and the flagged-only ones.
pub(crate) fn summarize(suite_names: &[&'static str], trials: Vec<(u64, Vec<Observation>)>) -> RunReportParts {
    let mut suites: Vec<SuiteSummary> = suite_names.iter().map(|s| SuiteSummary::new(s)).collect();
    let mut confirmed = Vec::new();
    let mut flagged = Vec::new();
    for (trial, obs) in trials {
        for o in obs {
            let Some(s) = suites.iter_mut().find(|s| s.name == o.suite) else {
                continue;
            };
            s.checks += 1;
            if s.min_margin.is_none_or(|m| o.margin < m) {
                s.min_margin = Some(o.margin);
                s.min_margin_trial = Some(trial);
            }
            if !o.holds {
                s.failures += 1;
            }
            if let Some(v) = o.escalation {
                if v.exact_recheck.is_confirmed() {
                    confirmed.push(v);
                } else {
                    flagged.push(v);
                }
            }
        }
    }
    (suites, confirmed, flagged)
}
