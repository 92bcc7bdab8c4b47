//! Command dispatch for the `logder` binary.
//!
//! [`run_command`] never prints and never exits; it returns the exit code and
//! the rendered report so tests can drive it in-process.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use logder_core::criteria::{saito_classic, saito_multi, saito_several, CriterionReport, Verdict};
use logder_core::derivation::{tangency, MultiplicitySpec};
use logder_core::problem::{Mode, Problem, ProblemError, ProblemFile, SearchKind};
use logder_core::report::{
    CriterionPayload, DeterminantPayload, ErrorEntry, InputEcho, Payload, ReportDocument,
    SearchPayload, TangencyEntry, TangencyPayload,
};
use logder_core::search::{solve, SearchMode, SearchProblem};
use logder_core::{Derivation, Poly, PolyMatrix};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "logder",
    version,
    about = "Certify freeness of logarithmic derivation modules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Saito's criterion for a single polynomial.
    CheckSaito(CommonArgs),
    /// The criterion for a polynomial with multiplicities.
    CheckMulti(CommonArgs),
    /// The minor-gcd criterion for several polynomials.
    CheckSeveral(CommonArgs),
    /// Tangency of each derivation to each polynomial.
    Tangent(CommonArgs),
    /// Degree-bounded search for derivations.
    Search(SearchArgs),
    /// Determinant, or maximal minors, of the derivation matrix.
    Det(CommonArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CheckSaito(_) => "check-saito",
            Command::CheckMulti(_) => "check-multi",
            Command::CheckSeveral(_) => "check-several",
            Command::Tangent(_) => "tangent",
            Command::Search(_) => "search",
            Command::Det(_) => "det",
        }
    }

    fn mode(&self) -> Mode {
        match self {
            Command::CheckSaito(_) => Mode::Classic,
            Command::CheckMulti(_) => Mode::Multi,
            Command::CheckSeveral(_) => Mode::Several,
            Command::Tangent(_) => Mode::Tangent,
            Command::Search(_) => Mode::Search,
            Command::Det(_) => Mode::Det,
        }
    }

    fn common(&self) -> &CommonArgs {
        match self {
            Command::CheckSaito(a)
            | Command::CheckMulti(a)
            | Command::CheckSeveral(a)
            | Command::Tangent(a)
            | Command::Det(a) => a,
            Command::Search(s) => &s.common,
        }
    }
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Problem file.
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Coefficient degree bound; overrides the file's [degree_bound].
    #[arg(long)]
    degree: Option<u32>,
    /// Restrict to coefficients of exactly the given degree.
    #[arg(long)]
    graded: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Exit code plus everything destined for standard output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub output: String,
}

impl Outcome {
    fn render(doc: &ReportDocument, format: Format) -> Self {
        Outcome {
            exit_code: doc.exit_code,
            output: match format {
                Format::Json => doc.to_json(),
                Format::Text => doc.to_text(),
            },
        }
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome {
                    exit_code: EXIT_OK,
                    output: e.render().to_string(),
                };
            }
            let mut doc = ReportDocument::new("");
            doc.errors
                .push(ErrorEntry::new("usage", e.render().to_string().trim_end()));
            return Outcome::render(&doc, Format::Json);
        }
    };
    let doc = execute(&cli.command);
    Outcome::render(&doc, cli.command.common().format)
}

fn execute(command: &Command) -> ReportDocument {
    let mut doc = ReportDocument::new(command.name());
    let path = &command.common().input;
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            doc.errors.push(ErrorEntry::new(
                "io",
                format!("cannot read {}: {e}", path.display()),
            ));
            return doc;
        }
    };
    let (file, problem) = match ProblemFile::parse(&text).and_then(|f| {
        let p = f.resolve()?;
        Ok((f, p))
    }) {
        Ok(pair) => pair,
        Err(e) => {
            doc.errors.push(problem_error(&e));
            return doc;
        }
    };
    doc.input = Some(InputEcho::new(
        &file,
        &problem.polynomials,
        &problem.derivations,
    ));
    if let Some(mode) = problem.mode {
        if mode != command.mode() {
            doc.errors.push(ErrorEntry::new(
                "mode_mismatch",
                format!(
                    "file declares mode `{mode}` but `{}` was requested",
                    command.name()
                ),
            ));
            return doc;
        }
    }
    let start = Instant::now();
    let result = match command {
        Command::CheckSaito(_) => check_saito(&problem),
        Command::CheckMulti(_) => check_multi(&problem),
        Command::CheckSeveral(_) => check_several(&problem),
        Command::Tangent(_) => check_tangent(&problem),
        Command::Search(args) => run_search(&problem, args),
        Command::Det(_) => determinant(&problem),
    };
    doc.elapsed_us = u64::try_from(start.elapsed().as_micros()).unwrap_or(u64::MAX);
    match result {
        Ok((status, exit_code, payload)) => {
            doc.status = status.to_string();
            doc.exit_code = exit_code;
            doc.result = Some(payload);
        }
        Err(e) => doc.errors.push(e),
    }
    doc
}

type Computed = Result<(&'static str, i32, Payload), ErrorEntry>;

fn problem_error(e: &ProblemError) -> ErrorEntry {
    let mut entry = ErrorEntry::new("schema", e.to_string());
    match e {
        ProblemError::Syntax { line, .. }
        | ProblemError::UnknownSection { line, .. }
        | ProblemError::DuplicateSection { line, .. } => entry.line = Some(*line),
        ProblemError::Expression { line, source, .. } => {
            entry.kind = "parse".to_string();
            entry.line = Some(*line);
            entry.position = Some(source.position());
        }
        _ => {}
    }
    entry
}

fn criterion(name: &str, report: &CriterionReport, problem: &Problem) -> Computed {
    let (status, code) = match report.verdict {
        Verdict::Free => ("free", EXIT_OK),
        Verdict::NotFree => ("not_free", EXIT_NEGATIVE),
        Verdict::InvalidInput => ("invalid_input", EXIT_INVALID),
    };
    let payload = CriterionPayload::new(name, report, &problem.variables);
    Ok((status, code, Payload::Criterion(payload)))
}

fn require_polys(problem: &Problem) -> Result<Vec<Poly>, ErrorEntry> {
    if problem.polynomials.is_empty() {
        return Err(ErrorEntry::new(
            "schema",
            "section [polynomials] is missing or empty",
        ));
    }
    Ok(problem.polys())
}

/// With several polynomials the criterion is applied to their product.
fn check_saito(problem: &Problem) -> Computed {
    let polys = require_polys(problem)?;
    let f = polys
        .iter()
        .skip(1)
        .fold(polys[0].clone(), |acc, p| &acc * p);
    criterion(
        "classic",
        &saito_classic(&f, &problem.derivation_list()),
        problem,
    )
}

fn multiplicity_spec(problem: &Problem) -> Result<MultiplicitySpec, ErrorEntry> {
    let polys = require_polys(problem)?;
    let ms = problem
        .multiplicities
        .clone()
        .ok_or_else(|| ErrorEntry::new("schema", "section [multiplicities] is required"))?;
    MultiplicitySpec::new(polys.into_iter().zip(ms).collect())
        .map_err(|e| ErrorEntry::new("invalid_spec", e.to_string()))
}

fn check_multi(problem: &Problem) -> Computed {
    let spec = multiplicity_spec(problem)?;
    criterion(
        "multi",
        &saito_multi(&spec, &problem.derivation_list()),
        problem,
    )
}

fn check_several(problem: &Problem) -> Computed {
    let polys = require_polys(problem)?;
    criterion(
        "several",
        &saito_several(&polys, &problem.derivation_list()),
        problem,
    )
}

fn check_tangent(problem: &Problem) -> Computed {
    require_polys(problem)?;
    if problem.derivations.is_empty() {
        return Err(ErrorEntry::new(
            "schema",
            "section [derivations] is missing or empty",
        ));
    }
    let names = &problem.variables;
    let mut checks = Vec::new();
    for (dname, d) in &problem.derivations {
        for (pname, f) in &problem.polynomials {
            let w = tangency(d, f).map_err(|e| ErrorEntry::new("invalid_input", e.to_string()))?;
            checks.push(TangencyEntry {
                derivation: dname.clone(),
                polynomial: pname.clone(),
                tangent: w.is_tangent(),
                cofactor: w.cofactor.map(|c| c.display_with(names).to_string()),
                residue: w.residue.display_with(names).to_string(),
            });
        }
    }
    let all_tangent = checks.iter().all(|c| c.tangent);
    let (status, code) = if all_tangent {
        ("tangent", EXIT_OK)
    } else {
        ("not_tangent", EXIT_NEGATIVE)
    };
    Ok((
        status,
        code,
        Payload::Tangency(TangencyPayload {
            all_tangent,
            checks,
        }),
    ))
}

fn run_search(problem: &Problem, args: &SearchArgs) -> Computed {
    let polys = require_polys(problem)?;
    let degree = args.degree.or(problem.degree_bound).ok_or_else(|| {
        ErrorEntry::new(
            "schema",
            "no degree bound: pass --degree or add [degree_bound]",
        )
    })?;
    let kind = problem.search.unwrap_or(if polys.len() == 1 {
        SearchKind::Tangent
    } else {
        SearchKind::Several
    });
    let mode = match kind {
        SearchKind::Tangent => {
            if polys.len() != 1 {
                return Err(ErrorEntry::new(
                    "schema",
                    "tangent search takes exactly one polynomial",
                ));
            }
            SearchMode::Tangent(polys[0].clone())
        }
        SearchKind::Annihilating => SearchMode::Annihilating(polys),
        SearchKind::Multi => SearchMode::Multi(multiplicity_spec(problem)?),
        SearchKind::Several => SearchMode::Several(polys),
    };
    let mut sp = SearchProblem::new(mode, degree);
    if args.graded || problem.graded {
        sp = sp.graded();
    }
    let result = solve(&sp).map_err(|e| ErrorEntry::new("search", e.to_string()))?;
    let payload = SearchPayload::new(
        kind.as_str(),
        degree,
        sp.graded,
        &result,
        &problem.variables,
    );
    Ok(("ok", EXIT_OK, Payload::Search(payload)))
}

fn determinant(problem: &Problem) -> Computed {
    let ds: Vec<Derivation> = problem.derivation_list();
    if ds.is_empty() {
        return Err(ErrorEntry::new(
            "schema",
            "section [derivations] is missing or empty",
        ));
    }
    let columns: Vec<Vec<Poly>> = ds.iter().map(|d| d.coeffs().to_vec()).collect();
    let m = PolyMatrix::from_columns(&columns)
        .map_err(|e| ErrorEntry::new("invalid_input", e.to_string()))?;
    if m.cols() > m.rows() {
        return Err(ErrorEntry::new(
            "invalid_input",
            format!("{} derivations exceed {} variables", m.cols(), m.rows()),
        ));
    }
    let show = |p: &Poly| p.display_with(&problem.variables).to_string();
    let minors = m.maximal_minors().expect("cols <= rows");
    let payload = if m.rows() == m.cols() {
        DeterminantPayload {
            rows: m.rows(),
            cols: m.cols(),
            determinant: Some(show(&minors[0])),
            minors: Vec::new(),
            minor_gcd: None,
        }
    } else {
        let gcd = Poly::gcd_all(minors.iter()).expect("arities agree");
        DeterminantPayload {
            rows: m.rows(),
            cols: m.cols(),
            determinant: None,
            minors: minors.iter().map(show).collect(),
            minor_gcd: gcd.as_ref().map(show),
        }
    };
    Ok(("ok", EXIT_OK, Payload::Determinant(payload)))
}
