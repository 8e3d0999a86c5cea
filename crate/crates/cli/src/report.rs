//! Structured proof records (one JSON object per line) and the
//! human-readable renderings.

use std::fmt::Write as _;

use ctproof_core::synd::{Attempt, ProofReport};
use ctproof_core::telescope::render_coeffs;
use serde::{Deserialize, Serialize};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarBound {
    pub var: String,
    pub degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coord {
    pub var: String,
    pub value: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub var: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InitialCheck {
    pub n: i64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttemptRecord {
    pub order: usize,
    pub degree: usize,
    pub rows: usize,
    pub cols: usize,
    pub grid_total: u64,
    pub grid_tested: u64,
    pub witness: Option<Vec<Coord>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub stage: String,
    pub micros: u64,
}

/// Everything a proof run reports. Exact quantities are strings in the
/// expression grammar, so the record parses back without loss. Durations
/// appear only when requested, keeping default records reproducible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub name: String,
    pub tool_version: String,
    pub verdict: String,
    pub method: String,
    pub certainty: String,
    pub seed: u64,
    pub order: Option<usize>,
    pub degree: Option<usize>,
    pub shape: Option<String>,
    pub rows: usize,
    pub cols: usize,
    pub degree_bounds: Vec<VarBound>,
    pub grid_total: u64,
    pub grid_tested: u64,
    pub nonzero_point: Option<Vec<Coord>>,
    pub leading_root_bound: Option<i64>,
    pub specialization: Vec<Assignment>,
    pub initial_checks: Vec<InitialCheck>,
    pub recurrence: Option<Vec<String>>,
    pub certificate: Option<String>,
    pub attempts: Vec<AttemptRecord>,
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Vec<Timing>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration_ms: Option<u64>,
}

fn coords(c: &[(String, i64)]) -> Vec<Coord> {
    c.iter().map(|(var, value)| Coord { var: var.clone(), value: *value }).collect()
}

fn attempt(a: &Attempt) -> AttemptRecord {
    AttemptRecord {
        order: a.order,
        degree: a.degree,
        rows: a.rows,
        cols: a.cols,
        grid_total: a.grid_total,
        grid_tested: a.grid_tested,
        witness: a.witness.as_deref().map(coords),
    }
}

impl ReportRecord {
    pub fn new(name: &str, r: &ProofReport) -> Self {
        ReportRecord {
            name: name.to_string(),
            tool_version: TOOL_VERSION.to_string(),
            verdict: r.verdict.as_str().to_string(),
            method: r.method.as_str().to_string(),
            certainty: r.certainty.to_string(),
            seed: r.seed,
            order: r.order,
            degree: r.degree,
            shape: r.shape.map(|s| s.as_str().to_string()),
            rows: r.rows,
            cols: r.cols,
            degree_bounds: r
                .degree_bounds
                .iter()
                .map(|(var, degree)| VarBound { var: var.clone(), degree: *degree })
                .collect(),
            grid_total: r.grid_total,
            grid_tested: r.grid_tested,
            nonzero_point: r.nonzero_point.as_deref().map(coords),
            leading_root_bound: r.leading_root_bound,
            specialization: r
                .specialization
                .iter()
                .map(|(var, v)| Assignment { var: var.clone(), value: v.to_string() })
                .collect(),
            initial_checks: r.initial_checks.iter().map(|&(n, ok)| InitialCheck { n, ok }).collect(),
            recurrence: r.recurrence.as_ref().map(|rec| rec.coeffs().iter().map(|c| c.to_string()).collect()),
            certificate: r.certificate.as_ref().map(|c| c.to_string()),
            attempts: r.attempts.iter().map(attempt).collect(),
            notes: r.notes.clone(),
            timings: None,
            duration_ms: None,
        }
    }

    /// Attaches wall-clock data.
    pub fn with_timings(mut self, r: &ProofReport, duration_ms: u64) -> Self {
        self.timings = Some(
            r.timings
                .iter()
                .map(|(stage, micros)| Timing { stage: stage.clone(), micros: *micros })
                .collect(),
        );
        self.duration_ms = Some(duration_ms);
        self
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }

    pub fn proved(&self) -> bool {
        matches!(self.verdict.as_str(), "rigorous" | "semi-rigorous")
    }
}

/// Multi-line summary of one proof.
pub fn render_summary(rec: &ReportRecord, report: &ProofReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}: {} ({})", rec.name, rec.verdict, rec.method);
    if let (Some(j), Some(shape)) = (rec.order, &rec.shape) {
        let _ = writeln!(
            s,
            "  order J = {j}, degree K = {}, {} system {}x{}",
            rec.degree.map_or("-".to_string(), |d| d.to_string()),
            shape,
            rec.rows,
            rec.cols
        );
    }
    if !rec.degree_bounds.is_empty() {
        let b: Vec<String> = rec.degree_bounds.iter().map(|b| format!("{} <= {}", b.var, b.degree)).collect();
        let _ = writeln!(s, "  degree bounds: {}", b.join(", "));
    }
    if rec.grid_total > 0 {
        let _ = writeln!(
            s,
            "  grid: {} of {} points tested (certainty {}, seed {})",
            rec.grid_tested, rec.grid_total, rec.certainty, rec.seed
        );
    }
    for a in &rec.attempts {
        let w = a.witness.as_ref().map(|w| {
            w.iter().map(|c| format!("{}={}", c.var, c.value)).collect::<Vec<_>>().join(", ")
        });
        let _ = writeln!(
            s,
            "  order {} rejected: {}x{} system nonsingular at {}",
            a.order,
            a.rows,
            a.cols,
            w.unwrap_or_else(|| "-".into())
        );
    }
    if !rec.specialization.is_empty() {
        let sp: Vec<String> = rec.specialization.iter().map(|a| format!("{}={}", a.var, a.value)).collect();
        let bound = rec.leading_root_bound.map_or("none".to_string(), |r| r.to_string());
        let _ = writeln!(s, "  leading coefficient at {}: largest nonnegative root {bound}", sp.join(", "));
    }
    if !rec.initial_checks.is_empty() {
        let checks: Vec<String> = rec
            .initial_checks
            .iter()
            .map(|c| format!("{}{}", c.n, if c.ok { "" } else { "!" }))
            .collect();
        let _ = writeln!(s, "  exact initial checks at n = {}", checks.join(" "));
    }
    if let Some(rec_) = &report.recurrence {
        let _ = writeln!(s, "  recurrence: {}", render_coeffs(rec_));
    }
    if let Some(c) = &rec.certificate {
        let _ = writeln!(s, "  certificate: {c}");
    }
    for n in &rec.notes {
        let _ = writeln!(s, "  note: {n}");
    }
    if let Some(t) = &rec.timings {
        let parts: Vec<String> = t.iter().map(|t| format!("{} {:.3}s", t.stage, t.micros as f64 / 1e6)).collect();
        let _ = writeln!(s, "  timings: {}", parts.join(", "));
    }
    s
}

/// One row per identity of a corpus run.
pub enum Row {
    Done(ReportRecord),
    Failed { name: String, error: String },
}

pub fn render_table(rows: &[Row], with_duration: bool) -> String {
    let mut lines: Vec<[String; 6]> = vec![[
        "identity".into(),
        "verdict".into(),
        "J".into(),
        "K".into(),
        "grid tested/total".into(),
        "duration".into(),
    ]];
    for r in rows {
        lines.push(match r {
            Row::Done(rec) => [
                rec.name.clone(),
                rec.verdict.clone(),
                rec.order.map_or("-".into(), |j| j.to_string()),
                rec.degree.map_or("-".into(), |k| k.to_string()),
                format!("{}/{}", rec.grid_tested, rec.grid_total),
                match (with_duration, rec.duration_ms) {
                    (true, Some(ms)) => format!("{ms} ms"),
                    _ => "-".into(),
                },
            ],
            Row::Failed { name, error } => [
                name.clone(),
                "error".into(),
                "-".into(),
                "-".into(),
                "-".into(),
                error.clone(),
            ],
        });
    }
    let mut width = [0usize; 6];
    for l in &lines {
        for (w, c) in width.iter_mut().zip(l) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut s = String::new();
    for l in &lines {
        let cells: Vec<String> = l.iter().zip(width).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(s, "{}", cells.join("  ").trim_end());
    }
    s
}
