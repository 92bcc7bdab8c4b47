//! Serializable report documents.
//!
//! Every field is either a string, an integer count, or a nested record, so
//! the JSON form is byte-stable: keys follow declaration order, polynomials
//! use the canonical printer, and rationals are `{num, den}` string pairs in
//! lowest terms with the sign on the numerator.

use std::fmt::Write as _;

use serde::Serialize;

use crate::criteria::{CriterionReport, Diagnostic};
use crate::derivation::Derivation;
use crate::poly::{Poly, Rational};
use crate::problem::ProblemFile;
use crate::search::SearchResult;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_NAME: &str = "logder";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

impl From<&Rational> for RationalJson {
    fn from(q: &Rational) -> Self {
        // BigRational keeps itself reduced with a positive denominator.
        RationalJson {
            num: q.numer().to_string(),
            den: q.denom().to_string(),
        }
    }
}

impl RationalJson {
    fn render(&self) -> String {
        if self.den == "1" {
            self.num.clone()
        } else {
            format!("{}/{}", self.num, self.den)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedExpr {
    pub name: String,
    pub expr: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedDerivation {
    pub name: String,
    pub components: Vec<String>,
}

/// The problem as it was understood: every expression reprinted canonically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputEcho {
    pub variables: Vec<String>,
    pub mode: Option<String>,
    pub polynomials: Vec<NamedExpr>,
    pub multiplicities: Option<Vec<u32>>,
    pub derivations: Vec<NamedDerivation>,
    pub degree_bound: Option<u32>,
    pub search: Option<String>,
    pub graded: bool,
}

impl InputEcho {
    pub fn new(
        file: &ProblemFile,
        polynomials: &[(String, Poly)],
        derivations: &[(String, Derivation)],
    ) -> Self {
        let names = &file.variables;
        InputEcho {
            variables: names.clone(),
            mode: file.mode.map(|m| m.as_str().to_string()),
            polynomials: polynomials
                .iter()
                .map(|(name, p)| NamedExpr {
                    name: name.clone(),
                    expr: p.display_with(names).to_string(),
                })
                .collect(),
            multiplicities: file.multiplicities.clone(),
            derivations: derivations
                .iter()
                .map(|(name, d)| NamedDerivation {
                    name: name.clone(),
                    components: poly_strings(d.coeffs(), names),
                })
                .collect(),
            degree_bound: file.degree_bound,
            search: file.search.map(|s| s.as_str().to_string()),
            graded: file.graded,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagnosticJson {
    pub kind: String,
    pub message: String,
}

impl DiagnosticJson {
    pub fn new(d: &Diagnostic, names: &[String]) -> Self {
        DiagnosticJson {
            kind: d.kind().to_string(),
            message: d.message(names),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionPayload {
    pub criterion: String,
    pub verdict: String,
    pub evidence: Option<String>,
    pub expected: Option<String>,
    pub unit_witness: Option<RationalJson>,
    pub failure_factor: Option<String>,
    pub cofactors: Vec<Vec<String>>,
    pub minors: Vec<String>,
    pub diagnostics: Vec<DiagnosticJson>,
    pub warnings: Vec<String>,
}

impl CriterionPayload {
    pub fn new(criterion: &str, report: &CriterionReport, names: &[String]) -> Self {
        let show = |p: &Poly| p.display_with(names).to_string();
        CriterionPayload {
            criterion: criterion.to_string(),
            verdict: report.verdict.as_str().to_string(),
            evidence: report.evidence.as_ref().map(show),
            expected: report.expected.as_ref().map(show),
            unit_witness: report.unit_witness.as_ref().map(RationalJson::from),
            failure_factor: report.failure_factor.as_ref().map(show),
            cofactors: report
                .cofactors
                .iter()
                .map(|row| poly_strings(row, names))
                .collect(),
            minors: poly_strings(&report.minors, names),
            diagnostics: report
                .diagnostics
                .iter()
                .map(|d| DiagnosticJson::new(d, names))
                .collect(),
            warnings: report.warnings.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchPayload {
    pub mode: String,
    pub degree_bound: u32,
    pub graded: bool,
    pub ambient_dimension: usize,
    pub solution_dimension: usize,
    pub basis: Vec<Vec<String>>,
}

impl SearchPayload {
    pub fn new(
        mode: &str,
        degree_bound: u32,
        graded: bool,
        result: &SearchResult,
        names: &[String],
    ) -> Self {
        SearchPayload {
            mode: mode.to_string(),
            degree_bound,
            graded,
            ambient_dimension: result.ambient_dimension,
            solution_dimension: result.solution_dimension,
            basis: result
                .basis
                .iter()
                .map(|d| poly_strings(d.coeffs(), names))
                .collect(),
        }
    }
}

/// One `(derivation, polynomial)` tangency check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TangencyEntry {
    pub derivation: String,
    pub polynomial: String,
    pub tangent: bool,
    pub cofactor: Option<String>,
    pub residue: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TangencyPayload {
    pub all_tangent: bool,
    pub checks: Vec<TangencyEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeterminantPayload {
    pub rows: usize,
    pub cols: usize,
    /// Present for square matrices.
    pub determinant: Option<String>,
    /// All maximal minors, lexicographic in the row subset.
    pub minors: Vec<String>,
    /// Normalized gcd of the minors, absent when all vanish.
    pub minor_gcd: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Criterion(CriterionPayload),
    Search(SearchPayload),
    Tangency(TangencyPayload),
    Determinant(DeterminantPayload),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErrorEntry {
    pub kind: String,
    pub message: String,
    pub line: Option<usize>,
    pub position: Option<usize>,
}

impl ErrorEntry {
    pub fn new(kind: &str, message: impl Into<String>) -> Self {
        ErrorEntry {
            kind: kind.to_string(),
            message: message.into(),
            line: None,
            position: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub tool: String,
    pub tool_version: String,
    pub command: String,
    pub status: String,
    pub exit_code: i32,
    pub input: Option<InputEcho>,
    pub result: Option<Payload>,
    pub errors: Vec<ErrorEntry>,
    /// Wall-clock time of the computation; the only nondeterministic field.
    pub elapsed_us: u64,
}

impl ReportDocument {
    pub fn new(command: &str) -> Self {
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            tool: TOOL_NAME.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            status: "error".to_string(),
            exit_code: 2,
            input: None,
            result: None,
            errors: Vec::new(),
            elapsed_us: 0,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Plain-text rendering with one `key: value` line per fact.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: &dyn std::fmt::Display| {
            let _ = writeln!(out, "{k}: {v}");
        };
        line("tool", &format!("{} {}", self.tool, self.tool_version));
        line("schema_version", &self.schema_version);
        line("command", &self.command);
        line("status", &self.status);
        line("exit_code", &self.exit_code);
        if let Some(input) = &self.input {
            line("variables", &input.variables.join(", "));
            for p in &input.polynomials {
                line(&format!("polynomial {}", p.name), &p.expr);
            }
            if let Some(ms) = &input.multiplicities {
                line("multiplicities", &join(ms.iter()));
            }
            for d in &input.derivations {
                line(
                    &format!("derivation {}", d.name),
                    &format!("[{}]", d.components.join(", ")),
                );
            }
        }
        match &self.result {
            Some(Payload::Criterion(c)) => {
                line("criterion", &c.criterion);
                line("verdict", &c.verdict);
                opt(&mut line, "evidence", &c.evidence);
                opt(&mut line, "expected", &c.expected);
                if let Some(u) = &c.unit_witness {
                    line("unit_witness", &u.render());
                }
                opt(&mut line, "failure_factor", &c.failure_factor);
                for (i, row) in c.cofactors.iter().enumerate() {
                    line(&format!("cofactors {i}"), &row.join(", "));
                }
                for (i, m) in c.minors.iter().enumerate() {
                    line(&format!("minor {i}"), m);
                }
                for d in &c.diagnostics {
                    line(&format!("diagnostic {}", d.kind), &d.message);
                }
                for w in &c.warnings {
                    line("warning", w);
                }
            }
            Some(Payload::Search(s)) => {
                line("search_mode", &s.mode);
                line("degree_bound", &s.degree_bound);
                line("graded", &s.graded);
                line("ambient_dimension", &s.ambient_dimension);
                line("solution_dimension", &s.solution_dimension);
                for (i, b) in s.basis.iter().enumerate() {
                    line(&format!("basis {i}"), &format!("[{}]", b.join(", ")));
                }
            }
            Some(Payload::Tangency(t)) => {
                line("all_tangent", &t.all_tangent);
                for c in &t.checks {
                    let verdict = match &c.cofactor {
                        Some(q) => format!("tangent, cofactor {q}"),
                        None => format!("not tangent, residue {}", c.residue),
                    };
                    line(&format!("{} on {}", c.derivation, c.polynomial), &verdict);
                }
            }
            Some(Payload::Determinant(d)) => {
                line("shape", &format!("{}x{}", d.rows, d.cols));
                opt(&mut line, "determinant", &d.determinant);
                if d.determinant.is_none() {
                    for (i, m) in d.minors.iter().enumerate() {
                        line(&format!("minor {i}"), m);
                    }
                    opt(&mut line, "minor_gcd", &d.minor_gcd);
                }
            }
            None => {}
        }
        for e in &self.errors {
            line(&format!("error {}", e.kind), &e.message);
        }
        line("elapsed_us", &self.elapsed_us);
        out
    }
}

fn opt(line: &mut impl FnMut(&str, &dyn std::fmt::Display), key: &str, v: &Option<String>) {
    if let Some(v) = v {
        line(key, v);
    }
}

fn join<T: ToString>(items: impl Iterator<Item = T>) -> String {
    items.map(|t| t.to_string()).collect::<Vec<_>>().join(", ")
}

fn poly_strings(ps: &[Poly], names: &[String]) -> Vec<String> {
    ps.iter()
        .map(|p| p.display_with(names).to_string())
        .collect()
}
