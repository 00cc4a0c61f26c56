//! Running plans and summarizing the outcome.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::registry::check;
use super::{IdentityCase, Status, SweepPlan};

/// Longest diff text kept in a report.
const DIFF_PREVIEW: usize = 400;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FailureRecord {
    pub params: String,
    pub branch: String,
    pub detail: String,
    pub diff: Option<String>,
}

/// Summary of one plan.
#[derive(Clone, Debug, Serialize)]
pub struct IdReport {
    pub id: &'static str,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    /// Cases rejected with an error (hypothesis, overflow).
    pub errors: usize,
    /// Pass counts per branch label.
    pub branches: BTreeMap<String, usize>,
    /// First failure in plan order.
    pub first_failure: Option<FailureRecord>,
    pub first_error: Option<FailureRecord>,
    pub elapsed_ms: u128,
}

impl IdReport {
    pub fn ok(&self) -> bool {
        self.failed == 0 && self.errors == 0
    }

    /// Everything except the timing.
    pub fn same_outcome(&self, other: &IdReport) -> bool {
        self.id == other.id
            && self.total == other.total
            && self.passed == other.passed
            && self.failed == other.failed
            && self.errors == other.errors
            && self.branches == other.branches
            && self.first_failure == other.first_failure
            && self.first_error == other.first_error
    }
}

impl fmt::Display for IdReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.ok() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict} {:<14} {:>6} cases  {:>6} passed  {:>3} failed  {:>3} errors  {:>8} ms",
            self.id, self.total, self.passed, self.failed, self.errors, self.elapsed_ms
        )?;
        if !self.branches.is_empty() && !(self.branches.len() == 1 && self.branches.contains_key("")) {
            let parts: Vec<String> = self.branches.iter().map(|(b, c)| format!("{b}:{c}")).collect();
            write!(f, "  [{}]", parts.join(", "))?;
        }
        if let Some(ff) = &self.first_failure {
            write!(f, "\n    first failure: {} ({}) {}", ff.params, ff.branch, ff.detail)?;
        }
        if let Some(fe) = &self.first_error {
            write!(f, "\n    first error: {} {}", fe.params, fe.detail)?;
        }
        Ok(())
    }
}

/// Runs every case of a plan. The report is independent of evaluation order.
pub fn sweep(plan: &SweepPlan) -> IdReport {
    let start = Instant::now();
    let results: Vec<_> = plan.cases.par_iter().map(|params| (params, check(plan.id, params))).collect();
    let mut report = IdReport {
        id: plan.id,
        total: plan.cases.len(),
        passed: 0,
        failed: 0,
        errors: 0,
        branches: BTreeMap::new(),
        first_failure: None,
        first_error: None,
        elapsed_ms: 0,
    };
    for (params, result) in results {
        match result {
            Ok(case) => record(&mut report, case),
            Err(e) => {
                report.errors += 1;
                report.first_error.get_or_insert_with(|| FailureRecord {
                    params: params.to_string(),
                    branch: String::new(),
                    detail: e.to_string(),
                    diff: None,
                });
            }
        }
    }
    report.elapsed_ms = start.elapsed().as_millis();
    report
}

fn record(report: &mut IdReport, case: IdentityCase) {
    match case.status {
        Status::Pass => {
            report.passed += 1;
            *report.branches.entry(case.branch).or_insert(0) += 1;
        }
        Status::Fail { diff, detail } => {
            report.failed += 1;
            report.first_failure.get_or_insert_with(|| FailureRecord {
                params: case.params.to_string(),
                branch: case.branch,
                detail,
                diff: diff.map(|d| {
                    let mut text = d.to_text();
                    if text.len() > DIFF_PREVIEW {
                        let mut cut = DIFF_PREVIEW;
                        while !text.is_char_boundary(cut) {
                            cut -= 1;
                        }
                        text.truncate(cut);
                        text.push_str(" + …");
                    }
                    text
                }),
            });
        }
    }
}

/// Reports for a list of plans, in order.
#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub entries: Vec<IdReport>,
}

impl SweepReport {
    pub fn ok(&self) -> bool {
        self.entries.iter().all(IdReport::ok)
    }

    pub fn total(&self) -> usize {
        self.entries.iter().map(|e| e.total).sum()
    }

    pub fn failed(&self) -> usize {
        self.entries.iter().map(|e| e.failed + e.errors).sum()
    }
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{e}")?;
        }
        write!(
            f,
            "{}: {} cases, {} failing",
            if self.ok() { "ALL PASS" } else { "FAILURES" },
            self.total(),
            self.failed()
        )
    }
}

pub fn sweep_all(plans: &[SweepPlan]) -> SweepReport {
    SweepReport { entries: plans.iter().map(sweep).collect() }
}
