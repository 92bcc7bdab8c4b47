//! Problem files: a line-oriented, sectioned text format.
//!
//! ```text
//! # Affine conic
//! [variables]
//! x, y
//! [mode]
//! classic
//! [polynomials]
//! f = x^2 + y^2 + x
//! [derivations]
//! d1 = 2*y*(2*x + 1), 4*y^2 - 1
//! d2 = x*(x + 1), (1/2)*y + y*x
//! ```
//!
//! See `docs/problem-format.md` for the full schema.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::derivation::Derivation;
use crate::parse::{parse_poly, ParseError};
use crate::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Classic,
    Multi,
    Several,
    Tangent,
    Search,
    Det,
}

impl Mode {
    pub const ALL: [Mode; 6] = [
        Mode::Classic,
        Mode::Multi,
        Mode::Several,
        Mode::Tangent,
        Mode::Search,
        Mode::Det,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Classic => "classic",
            Mode::Multi => "multi",
            Mode::Several => "several",
            Mode::Tangent => "tangent",
            Mode::Search => "search",
            Mode::Det => "det",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        Mode::ALL.into_iter().find(|m| m.as_str() == s).ok_or(())
    }
}

/// Which module a `search` problem targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SearchKind {
    Tangent,
    Annihilating,
    Multi,
    Several,
}

impl SearchKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchKind::Tangent => "tangent",
            SearchKind::Annihilating => "annihilating",
            SearchKind::Multi => "multi",
            SearchKind::Several => "several",
        }
    }
}

impl FromStr for SearchKind {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "tangent" => Ok(SearchKind::Tangent),
            "annihilating" => Ok(SearchKind::Annihilating),
            "multi" => Ok(SearchKind::Multi),
            "several" => Ok(SearchKind::Several),
            _ => Err(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProblemError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown section [{name}]")]
    UnknownSection { line: usize, name: String },
    #[error("line {line}: section [{name}] appears twice")]
    DuplicateSection { line: usize, name: String },
    #[error("missing section [{0}]")]
    MissingSection(&'static str),
    #[error("invalid variable name `{0}`")]
    InvalidVariable(String),
    #[error("variable `{0}` declared twice")]
    DuplicateVariable(String),
    #[error("name `{0}` used twice")]
    DuplicateName(String),
    #[error("line {line}: in `{name}`: {source}")]
    Expression {
        line: usize,
        name: String,
        #[source]
        source: ParseError,
    },
    #[error("derivation `{name}` has {found} components, expected {expected}")]
    DerivationLength {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("{found} multiplicities given for {expected} polynomials")]
    MultiplicityCount { expected: usize, found: usize },
}

/// A problem file as written, expressions still unparsed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProblemFile {
    pub variables: Vec<String>,
    pub mode: Option<Mode>,
    /// `(name, expression, line)`
    pub polynomials: Vec<(String, String, usize)>,
    pub multiplicities: Option<Vec<u32>>,
    /// `(name, component expressions, line)`
    pub derivations: Vec<(String, Vec<String>, usize)>,
    pub degree_bound: Option<u32>,
    pub search: Option<SearchKind>,
    pub graded: bool,
}

const SECTIONS: [&str; 8] = [
    "variables",
    "mode",
    "polynomials",
    "multiplicities",
    "derivations",
    "degree_bound",
    "search",
    "graded",
];

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn split_named(line: &str, lineno: usize) -> Result<(String, &str), ProblemError> {
    let (name, rhs) = line.split_once('=').ok_or_else(|| ProblemError::Syntax {
        line: lineno,
        message: "expected `name = ...`".into(),
    })?;
    let name = name.trim();
    if !is_identifier(name) {
        return Err(ProblemError::Syntax {
            line: lineno,
            message: format!("`{name}` is not a valid name"),
        });
    }
    Ok((name.to_string(), rhs.trim()))
}

fn single_value<'a>(
    values: &[(&'a str, usize)],
    section: &str,
    header: usize,
) -> Result<(&'a str, usize), ProblemError> {
    match values {
        [one] => Ok(*one),
        [] => Err(ProblemError::Syntax {
            line: header,
            message: format!("section [{section}] is empty"),
        }),
        [_, (_, line), ..] => Err(ProblemError::Syntax {
            line: *line,
            message: format!("section [{section}] takes a single value"),
        }),
    }
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, ProblemError> {
        // (name, header line, content lines with their numbers)
        type Section<'t> = (String, usize, Vec<(&'t str, usize)>);
        let mut sections: Vec<Section> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest.strip_suffix(']').ok_or_else(|| ProblemError::Syntax {
                    line: lineno,
                    message: "unterminated section header".into(),
                })?;
                let name = name.trim();
                if !SECTIONS.contains(&name) {
                    return Err(ProblemError::UnknownSection {
                        line: lineno,
                        name: name.to_string(),
                    });
                }
                if sections.iter().any(|(n, _, _)| n == name) {
                    return Err(ProblemError::DuplicateSection {
                        line: lineno,
                        name: name.to_string(),
                    });
                }
                sections.push((name.to_string(), lineno, Vec::new()));
                continue;
            }
            match sections.last_mut() {
                Some((_, _, lines)) => lines.push((line, lineno)),
                None => {
                    return Err(ProblemError::Syntax {
                        line: lineno,
                        message: "content before the first section header".into(),
                    })
                }
            }
        }

        let mut file = ProblemFile::default();
        for (name, header, lines) in &sections {
            match name.as_str() {
                "variables" => {
                    for (line, _) in lines {
                        for v in line.split(|c: char| c == ',' || c.is_whitespace()) {
                            if !v.is_empty() {
                                file.variables.push(v.to_string());
                            }
                        }
                    }
                }
                "mode" => {
                    let (v, line) = single_value(lines, name, *header)?;
                    file.mode = Some(v.parse().map_err(|_| ProblemError::Syntax {
                        line,
                        message: format!("unknown mode `{v}`"),
                    })?);
                }
                "polynomials" => {
                    for &(line, lineno) in lines {
                        let (n, rhs) = split_named(line, lineno)?;
                        file.polynomials.push((n, rhs.to_string(), lineno));
                    }
                }
                "multiplicities" => {
                    let mut ms = Vec::new();
                    for &(line, lineno) in lines {
                        for tok in line.split(|c: char| c == ',' || c.is_whitespace()) {
                            if tok.is_empty() {
                                continue;
                            }
                            let m: u32 = tok.parse().map_err(|_| ProblemError::Syntax {
                                line: lineno,
                                message: format!("`{tok}` is not a positive integer"),
                            })?;
                            if m == 0 {
                                return Err(ProblemError::Syntax {
                                    line: lineno,
                                    message: "multiplicities must be positive".into(),
                                });
                            }
                            ms.push(m);
                        }
                    }
                    file.multiplicities = Some(ms);
                }
                "derivations" => {
                    for &(line, lineno) in lines {
                        let (n, rhs) = split_named(line, lineno)?;
                        let comps = rhs.split(',').map(|c| c.trim().to_string()).collect();
                        file.derivations.push((n, comps, lineno));
                    }
                }
                "degree_bound" => {
                    let (v, line) = single_value(lines, name, *header)?;
                    file.degree_bound = Some(v.parse().map_err(|_| ProblemError::Syntax {
                        line,
                        message: format!("`{v}` is not a non-negative integer"),
                    })?);
                }
                "search" => {
                    let (v, line) = single_value(lines, name, *header)?;
                    file.search = Some(v.parse().map_err(|_| ProblemError::Syntax {
                        line,
                        message: format!("unknown search kind `{v}`"),
                    })?);
                }
                "graded" => {
                    let (v, line) = single_value(lines, name, *header)?;
                    file.graded = match v {
                        "true" => true,
                        "false" => false,
                        _ => {
                            return Err(ProblemError::Syntax {
                                line,
                                message: format!("expected `true` or `false`, got `{v}`"),
                            })
                        }
                    };
                }
                _ => unreachable!("section names are validated above"),
            }
        }
        if !sections.iter().any(|(n, _, _)| n == "variables") {
            return Err(ProblemError::MissingSection("variables"));
        }
        Ok(file)
    }

    /// Parses every expression over the declared variables.
    pub fn resolve(&self) -> Result<Problem, ProblemError> {
        let mut seen = HashSet::new();
        for v in &self.variables {
            if !is_identifier(v) {
                return Err(ProblemError::InvalidVariable(v.clone()));
            }
            if !seen.insert(v.as_str()) {
                return Err(ProblemError::DuplicateVariable(v.clone()));
            }
        }
        let mut names = HashSet::new();
        let vars = &self.variables;
        let mut polynomials = Vec::with_capacity(self.polynomials.len());
        for (name, expr, line) in &self.polynomials {
            if !names.insert(name.as_str()) {
                return Err(ProblemError::DuplicateName(name.clone()));
            }
            let p = parse_poly(expr, vars).map_err(|source| ProblemError::Expression {
                line: *line,
                name: name.clone(),
                source,
            })?;
            polynomials.push((name.clone(), p));
        }
        let mut derivations = Vec::with_capacity(self.derivations.len());
        for (name, comps, line) in &self.derivations {
            if !names.insert(name.as_str()) {
                return Err(ProblemError::DuplicateName(name.clone()));
            }
            if comps.len() != vars.len() {
                return Err(ProblemError::DerivationLength {
                    name: name.clone(),
                    expected: vars.len(),
                    found: comps.len(),
                });
            }
            let coeffs = comps
                .iter()
                .map(|c| parse_poly(c, vars))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|source| ProblemError::Expression {
                    line: *line,
                    name: name.clone(),
                    source,
                })?;
            derivations.push((
                name.clone(),
                Derivation::new(coeffs).expect("arity matches"),
            ));
        }
        if let Some(ms) = &self.multiplicities {
            if ms.len() != polynomials.len() {
                return Err(ProblemError::MultiplicityCount {
                    expected: polynomials.len(),
                    found: ms.len(),
                });
            }
        }
        Ok(Problem {
            variables: self.variables.clone(),
            mode: self.mode,
            polynomials,
            multiplicities: self.multiplicities.clone(),
            derivations,
            degree_bound: self.degree_bound,
            search: self.search,
            graded: self.graded,
        })
    }
}

/// A problem with every expression parsed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    pub variables: Vec<String>,
    pub mode: Option<Mode>,
    pub polynomials: Vec<(String, Poly)>,
    pub multiplicities: Option<Vec<u32>>,
    pub derivations: Vec<(String, Derivation)>,
    pub degree_bound: Option<u32>,
    pub search: Option<SearchKind>,
    pub graded: bool,
}

impl Problem {
    pub fn parse(text: &str) -> Result<Self, ProblemError> {
        ProblemFile::parse(text)?.resolve()
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn polys(&self) -> Vec<Poly> {
        self.polynomials.iter().map(|(_, p)| p.clone()).collect()
    }

    pub fn derivation_list(&self) -> Vec<Derivation> {
        self.derivations.iter().map(|(_, d)| d.clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const AFFINE_CONIC: &str = "\
# Affine conic
[variables]
x, y
[mode]
classic
[polynomials]
f = x^2 + y^2 + x   # the conic
[derivations]
d1 = 2*y*(2*x + 1), 4*y^2 - 1
d2 = x*(x + 1), (1/2)*y + y*x
";

    #[test]
    fn parses_affine_conic() {
        let p = Problem::parse(AFFINE_CONIC).unwrap();
        assert_eq!(p.variables, vec!["x", "y"]);
        assert_eq!(p.mode, Some(Mode::Classic));
        assert_eq!(p.polynomials[0].1.to_string(), "x^2 + y^2 + x");
        assert_eq!(p.derivations.len(), 2);
        assert_eq!(p.derivations[1].1.coeffs()[1].to_string(), "x*y + 1/2*y");
    }

    #[test]
    fn optional_sections() {
        let text = "[variables]\nx y z\n[polynomials]\nf = x*y*z\n[multiplicities]\n2\n\
                    [degree_bound]\n3\n[search]\nmulti\n[graded]\ntrue\n";
        let p = Problem::parse(text).unwrap();
        assert_eq!(p.multiplicities, Some(vec![2]));
        assert_eq!(p.degree_bound, Some(3));
        assert_eq!(p.search, Some(SearchKind::Multi));
        assert!(p.graded);
        assert_eq!(p.mode, None);
    }

    #[test]
    fn schema_violations() {
        assert!(matches!(
            ProblemFile::parse("x, y\n"),
            Err(ProblemError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            ProblemFile::parse("[vars]\nx\n"),
            Err(ProblemError::UnknownSection { line: 1, .. })
        ));
        assert!(matches!(
            ProblemFile::parse("[variables]\nx\n[variables]\ny\n"),
            Err(ProblemError::DuplicateSection { line: 3, .. })
        ));
        assert_eq!(
            ProblemFile::parse("[mode]\nclassic\n"),
            Err(ProblemError::MissingSection("variables"))
        );
        assert!(matches!(
            ProblemFile::parse("[variables]\nx\n[mode]\nfoo\n"),
            Err(ProblemError::Syntax { line: 4, .. })
        ));
        assert!(matches!(
            Problem::parse("[variables]\nx, x\n"),
            Err(ProblemError::DuplicateVariable(_))
        ));
        assert!(matches!(
            Problem::parse("[variables]\n1x\n"),
            Err(ProblemError::InvalidVariable(_))
        ));
        assert!(matches!(
            Problem::parse("[variables]\nx y\n[derivations]\nd = x\n"),
            Err(ProblemError::DerivationLength {
                expected: 2,
                found: 1,
                ..
            })
        ));
        assert!(matches!(
            Problem::parse("[variables]\nx\n[polynomials]\nf = x + w\n"),
            Err(ProblemError::Expression { line: 4, .. })
        ));
        assert!(matches!(
            Problem::parse("[variables]\nx\n[polynomials]\nf = x\n[multiplicities]\n1 2\n"),
            Err(ProblemError::MultiplicityCount { .. })
        ));
        assert!(matches!(
            ProblemFile::parse("[variables]\nx\n[multiplicities]\n0\n"),
            Err(ProblemError::Syntax { line: 4, .. })
        ));
    }
}
