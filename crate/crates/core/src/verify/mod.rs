//! Batch comparison of the closed forms and transforms against the numerical
//! operators.
//!
//! A suite expands a [`Grid`] into independent cases, evaluates them in
//! parallel and returns the records sorted by `case_id`, so reports are
//! byte-identical between runs.

mod cases;
mod grid;

use std::fmt::Write as _;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::QuadratureConfig;
use crate::error::{Error, Result};

pub use cases::{Case, Job};
pub use grid::Grid;

pub const INTEGRAL_TOL: f64 = 1e-8;
pub const DERIVATIVE_TOL: f64 = 1e-4;
pub const INTEGRAL_TRANSFORM_TOL: f64 = 1e-6;
pub const DERIVATIVE_TRANSFORM_TOL: f64 = 1e-3;
pub const COMPOSITION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[allow(non_camel_case_types)]
pub enum Theorem {
    Lemma2_1,
    Lemma2_2,
    Lemma2_3,
    Lemma2_4,
    Lemma2_5,
    Lemma2_6,
    Remark1a,
    Remark1b,
    Th1,
    Th2,
    Th3,
    Th4,
    /// derivative-left transform applied to an integral-left transform
    Th3oTh1,
    /// derivative-right transform applied to an integral-right transform
    Th4oTh2,
}

impl Theorem {
    pub fn name(self) -> &'static str {
        match self {
            Theorem::Lemma2_1 => "Lemma2_1",
            Theorem::Lemma2_2 => "Lemma2_2",
            Theorem::Lemma2_3 => "Lemma2_3",
            Theorem::Lemma2_4 => "Lemma2_4",
            Theorem::Lemma2_5 => "Lemma2_5",
            Theorem::Lemma2_6 => "Lemma2_6",
            Theorem::Remark1a => "Remark1a",
            Theorem::Remark1b => "Remark1b",
            Theorem::Th1 => "Th1",
            Theorem::Th2 => "Th2",
            Theorem::Th3 => "Th3",
            Theorem::Th4 => "Th4",
            Theorem::Th3oTh1 => "Th3oTh1",
            Theorem::Th4oTh2 => "Th4oTh2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Pass,
    Fail,
    OracleError,
    DomainSkipped,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "Pass",
            Status::Fail => "Fail",
            Status::OracleError => "OracleError",
            Status::DomainSkipped => "DomainSkipped",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Lemma2,
    Remark1,
    Theorems,
    Composition,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lemma2" => Ok(Suite::Lemma2),
            "remark1" => Ok(Suite::Remark1),
            "theorems" => Ok(Suite::Theorems),
            "composition" => Ok(Suite::Composition),
            "all" => Ok(Suite::All),
            other => Err(Error::Domain(format!(
                "unknown suite `{other}` (expected lemma2, remark1, theorems, composition or all)"
            ))),
        }
    }
}

/// Parameters of one case; absent entries are left blank in reports.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub k: Option<f64>,
    pub gamma: f64,
    pub rho: f64,
    pub alpha: Option<f64>,
    pub lambda: Option<f64>,
    pub w: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub case_id: String,
    pub theorem: Theorem,
    #[serde(flatten)]
    pub params: Params,
    pub s: f64,
    pub closed_value: f64,
    pub oracle_value: f64,
    pub rel_error: f64,
    pub status: Status,
    pub tolerance: f64,
    /// Error text for skipped or failed oracle cases.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

/// |closed − oracle| / max(|closed|, |oracle|, floor, 1e-300). `floor` is the
/// derivative magnitude scale for derivative cases and 0 otherwise.
pub fn rel_error(closed: f64, oracle: f64, floor: f64) -> f64 {
    (closed - oracle).abs() / closed.abs().max(oracle.abs()).max(floor).max(1e-300)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct TheoremSummary {
    pub theorem: String,
    pub cases: usize,
    pub pass: usize,
    pub fail: usize,
    pub oracle_error: usize,
    pub skipped: usize,
    pub max_rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub records: Vec<VerificationRecord>,
    /// Derivative cases (Lemma2_2, Lemma2_4) that would fail with the
    /// alternative ρ^{γ−n} prefactor, out of those with ρ ≠ 1.
    pub alt_prefactor_failures: (usize, usize),
}

impl Report {
    pub fn summary(&self) -> Vec<TheoremSummary> {
        let mut out: Vec<TheoremSummary> = Vec::new();
        let mut theorems: Vec<Theorem> = self.records.iter().map(|r| r.theorem).collect();
        theorems.sort();
        theorems.dedup();
        for t in theorems {
            let mut row = TheoremSummary {
                theorem: t.name().to_string(),
                ..Default::default()
            };
            for r in self.records.iter().filter(|r| r.theorem == t) {
                row.cases += 1;
                match r.status {
                    Status::Pass => row.pass += 1,
                    Status::Fail => row.fail += 1,
                    Status::OracleError => row.oracle_error += 1,
                    Status::DomainSkipped => row.skipped += 1,
                }
                if matches!(r.status, Status::Pass | Status::Fail)
                    && r.rel_error > row.max_rel_error
                {
                    row.max_rel_error = r.rel_error;
                }
            }
            out.push(row);
        }
        out
    }

    pub fn count(&self, status: Status) -> usize {
        self.records.iter().filter(|r| r.status == status).count()
    }

    pub fn all_passed(&self) -> bool {
        self.records
            .iter()
            .all(|r| matches!(r.status, Status::Pass | Status::DomainSkipped))
    }

    pub fn summary_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<10} {:>6} {:>6} {:>6} {:>8} {:>8} {:>12}",
            "theorem", "cases", "pass", "fail", "oracle", "skipped", "max_rel_err"
        );
        for row in self.summary() {
            let _ = writeln!(
                out,
                "{:<10} {:>6} {:>6} {:>6} {:>8} {:>8} {:>12.3e}",
                row.theorem,
                row.cases,
                row.pass,
                row.fail,
                row.oracle_error,
                row.skipped,
                row.max_rel_error
            );
        }
        let (bad, total) = self.alt_prefactor_failures;
        if total > 0 {
            let _ = writeln!(
                out,
                "note: derivative images use the prefactor rho^gamma; with rho^(gamma-n) instead, {bad} of {total} derivative cases with rho != 1 would fail"
            );
        }
        out
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Domain(format!("writing CSV report: {e}"));
        w.write_record([
            "case_id",
            "theorem",
            "k",
            "gamma",
            "rho",
            "alpha",
            "lambda",
            "w",
            "s",
            "closed_value",
            "oracle_value",
            "rel_error",
            "status",
        ])
        .map_err(io)?;
        let num = |x: f64| format!("{x:.16e}");
        let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
        for r in &self.records {
            let p = &r.params;
            w.write_record([
                r.case_id.clone(),
                r.theorem.name().to_string(),
                opt(p.k),
                num(p.gamma),
                num(p.rho),
                opt(p.alpha),
                opt(p.lambda),
                opt(p.w),
                num(r.s),
                num(r.closed_value),
                num(r.oracle_value),
                num(r.rel_error),
                r.status.name().to_string(),
            ])
            .map_err(io)?;
        }
        w.flush()
            .map_err(|e| Error::Domain(format!("writing CSV report: {e}")))?;
        Ok(())
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Out<'a> {
            summary: Vec<TheoremSummary>,
            alt_prefactor_failures: usize,
            alt_prefactor_cases: usize,
            records: &'a [VerificationRecord],
        }
        let (bad, total) = self.alt_prefactor_failures;
        serde_json::to_string_pretty(&Out {
            summary: self.summary(),
            alt_prefactor_failures: bad,
            alt_prefactor_cases: total,
            records: &self.records,
        })
        .expect("report serializes")
    }
}

/// The cases of `suite` on `grid`, in case_id order.
pub fn cases(suite: Suite, grid: &Grid) -> Vec<Case> {
    let mut out = Vec::new();
    if matches!(suite, Suite::Lemma2 | Suite::All) {
        out.extend(cases::lemma2(grid));
    }
    if matches!(suite, Suite::Remark1 | Suite::All) {
        out.extend(cases::remark1(grid));
    }
    if matches!(suite, Suite::Theorems | Suite::All) {
        out.extend(cases::theorems(grid));
    }
    if matches!(suite, Suite::Composition | Suite::All) {
        out.extend(cases::composition(grid));
    }
    out.sort_by(|a, b| a.id.cmp(&b.id));
    out
}

pub fn run_cases(cases: &[Case], cfg: &QuadratureConfig) -> Report {
    let evaluated: Vec<(VerificationRecord, Option<bool>)> =
        cases.par_iter().map(|c| c.run(cfg)).collect();
    let mut alt = (0, 0);
    let mut records = Vec::with_capacity(evaluated.len());
    for (rec, alt_pass) in evaluated {
        if let Some(ok) = alt_pass {
            alt.1 += 1;
            if !ok {
                alt.0 += 1;
            }
        }
        records.push(rec);
    }
    records.sort_by(|a, b| a.case_id.cmp(&b.case_id));
    Report {
        records,
        alt_prefactor_failures: alt,
    }
}

pub fn run_suite(suite: Suite, grid: &Grid, cfg: &QuadratureConfig) -> Report {
    run_cases(&cases(suite, grid), cfg)
}
