//! Saito-type freeness criteria.
//!
//! Each criterion takes candidate generators and returns a [`CriterionReport`]
//! whose verdict can be re-checked by a single multiplication:
//!
//! * [`saito_classic`]: `δ_1, …, δ_n ∈ Der(f)` form a basis iff
//!   `det(δ_1, …, δ_n) = u f` for a nonzero rational `u`.
//! * [`saito_multi`]: the same test for `Der_m(f)` against `Π f_i^{m_i}`.
//! * [`saito_several`]: `δ_1, …, δ_{n+1-s} ∈ Der(f_1, …, f_s)` form a basis iff
//!   the zero locus of their maximal minors has codimension at least two,
//!   decided here as "the minors have a constant gcd".

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::derivation::{
    multi_tangency, pairwise_compatibility, tangency, Derivation, MultiplicitySpec,
};
use crate::linalg::RationalMatrix;
use crate::matrix::PolyMatrix;
use crate::poly::{rat, Poly, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Free,
    NotFree,
    InvalidInput,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Free => "free",
            Verdict::NotFree => "not_free",
            Verdict::InvalidInput => "invalid_input",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A failed precondition. Derivation and polynomial indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    ZeroPolynomial {
        index: usize,
    },
    ArityMismatch {
        expected: usize,
        found: usize,
    },
    WrongDerivationCount {
        expected: usize,
        found: usize,
    },
    PolynomialCountOutOfRange {
        count: usize,
        min: usize,
        max: usize,
    },
    InvalidSpec {
        message: String,
    },
    /// `δ_index(f)` leaves `residue` on division by `f`.
    NotTangent {
        index: usize,
        residue: Poly,
    },
    /// `δ_index(f_factor)` is not divisible by `f_factor^{m_factor}`.
    NotMultiTangent {
        index: usize,
        factor: usize,
    },
    /// `f_j δ(f_i) - f_i δ(f_j) = defect ≠ 0`.
    Incompatible {
        index: usize,
        pair: (usize, usize),
        defect: Poly,
    },
    /// The candidate generators are linearly dependent over the fraction field.
    DependentFamily,
    /// The determinant is not a multiple of the expected polynomial even though
    /// every generator passed the membership test; the input polynomial is
    /// most likely not squarefree.
    DeterminantNotDivisible {
        remainder: Poly,
    },
}

impl Diagnostic {
    pub fn kind(&self) -> &'static str {
        match self {
            Diagnostic::ZeroPolynomial { .. } => "zero_polynomial",
            Diagnostic::ArityMismatch { .. } => "arity_mismatch",
            Diagnostic::WrongDerivationCount { .. } => "wrong_derivation_count",
            Diagnostic::PolynomialCountOutOfRange { .. } => "polynomial_count_out_of_range",
            Diagnostic::InvalidSpec { .. } => "invalid_spec",
            Diagnostic::NotTangent { .. } => "not_tangent",
            Diagnostic::NotMultiTangent { .. } => "not_multi_tangent",
            Diagnostic::Incompatible { .. } => "incompatible",
            Diagnostic::DependentFamily => "dependent_family",
            Diagnostic::DeterminantNotDivisible { .. } => "determinant_not_divisible",
        }
    }

    /// Human-readable message, printing polynomials with `names`.
    pub fn message(&self, names: &[String]) -> String {
        match self {
            Diagnostic::ZeroPolynomial { index } => format!("polynomial {index} is zero"),
            Diagnostic::ArityMismatch { expected, found } => {
                format!("expected {expected} variables, found {found}")
            }
            Diagnostic::WrongDerivationCount { expected, found } => {
                format!("expected {expected} derivations, found {found}")
            }
            Diagnostic::PolynomialCountOutOfRange { count, min, max } => {
                format!("need between {min} and {max} polynomials, found {count}")
            }
            Diagnostic::InvalidSpec { message } => message.clone(),
            Diagnostic::NotTangent { index, residue } => format!(
                "derivation {index} is not tangent: residue {}",
                residue.display_with(names)
            ),
            Diagnostic::NotMultiTangent { index, factor } => format!(
                "derivation {index} applied to factor {factor} is not divisible by its multiplicity power"
            ),
            Diagnostic::Incompatible {
                index,
                pair: (i, j),
                defect,
            } => format!(
                "derivation {index} violates the relation for polynomials ({i}, {j}): defect {}",
                defect.display_with(names)
            ),
            Diagnostic::DependentFamily => "derivations are linearly dependent".to_string(),
            Diagnostic::DeterminantNotDivisible { remainder } => format!(
                "determinant is not divisible by the expected polynomial (remainder {}); is the input squarefree?",
                remainder.display_with(names)
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionReport {
    pub verdict: Verdict,
    /// The determinant (classic, multi) or the normalized gcd of maximal minors (several).
    pub evidence: Option<Poly>,
    /// The polynomial the evidence is compared with: `f`, `Π f_i^{m_i}`, or `1`.
    pub expected: Option<Poly>,
    /// `u` with `evidence = u · expected`; present iff the verdict is `Free`.
    pub unit_witness: Option<Rational>,
    /// Nonconstant `evidence / expected`; present iff the verdict is `NotFree`.
    pub failure_factor: Option<Poly>,
    /// Membership cofactors, one row per derivation and one entry per
    /// polynomial: `δ_i(f) = c f` (classic) or `δ_i(f_k) = c f_k^{m_k}` (multi).
    pub cofactors: Vec<Vec<Poly>>,
    /// Maximal minors in lexicographic row-subset order (several only).
    pub minors: Vec<Poly>,
    pub diagnostics: Vec<Diagnostic>,
    /// Advisory notes that never affect the verdict.
    pub warnings: Vec<String>,
}

impl CriterionReport {
    fn invalid(diagnostics: Vec<Diagnostic>) -> Self {
        debug_assert!(!diagnostics.is_empty());
        CriterionReport {
            verdict: Verdict::InvalidInput,
            evidence: None,
            expected: None,
            unit_witness: None,
            failure_factor: None,
            cofactors: Vec::new(),
            minors: Vec::new(),
            diagnostics,
            warnings: Vec::new(),
        }
    }

    pub fn is_free(&self) -> bool {
        self.verdict == Verdict::Free
    }

    /// Re-derives the verdict from the evidence alone.
    pub fn recheck(&self) -> bool {
        match self.verdict {
            Verdict::Free => match (&self.evidence, &self.expected, &self.unit_witness) {
                (Some(e), Some(x), Some(u)) => !num_traits::Zero::is_zero(u) && x.scale(u) == *e,
                _ => false,
            },
            Verdict::NotFree => match (&self.evidence, &self.expected, &self.failure_factor) {
                (Some(e), Some(x), Some(q)) => !q.is_constant() && &(q * x) == e,
                (Some(e), None, Some(q)) => !q.is_constant() && q == e,
                _ => false,
            },
            Verdict::InvalidInput => !self.diagnostics.is_empty(),
        }
    }
}

fn check_arities(nvars: usize, ds: &[Derivation]) -> Vec<Diagnostic> {
    ds.iter()
        .filter(|d| d.nvars() != nvars)
        .map(|d| Diagnostic::ArityMismatch {
            expected: nvars,
            found: d.nvars(),
        })
        .collect()
}

fn column_matrix(ds: &[Derivation]) -> PolyMatrix {
    let columns: Vec<Vec<Poly>> = ds.iter().map(|d| d.coeffs().to_vec()).collect();
    PolyMatrix::from_columns(&columns).expect("arity checked")
}

/// Compares `det(ds)` with `expected` once membership has been established.
fn determinant_verdict(
    expected: Poly,
    ds: &[Derivation],
    cofactors: Vec<Vec<Poly>>,
) -> CriterionReport {
    let det = column_matrix(ds).determinant().expect("square matrix");
    let mut report = CriterionReport {
        verdict: Verdict::InvalidInput,
        evidence: Some(det.clone()),
        expected: Some(expected.clone()),
        unit_witness: None,
        failure_factor: None,
        cofactors,
        minors: Vec::new(),
        diagnostics: Vec::new(),
        warnings: Vec::new(),
    };
    if det.is_zero() {
        report.diagnostics.push(Diagnostic::DependentFamily);
        return report;
    }
    let (quotient, remainder) = det.div_rem(&expected).expect("expected is nonzero");
    if !remainder.is_zero() {
        report
            .diagnostics
            .push(Diagnostic::DeterminantNotDivisible { remainder });
        return report;
    }
    match quotient.constant_value() {
        Some(u) => {
            report.verdict = Verdict::Free;
            report.unit_witness = Some(u);
        }
        None => {
            report.verdict = Verdict::NotFree;
            report.failure_factor = Some(quotient);
        }
    }
    assert!(report.recheck(), "criterion verdict failed its own recheck");
    report
}

/// Saito's criterion for `Der(f)`.
///
/// `f` is assumed squarefree; this is not verified.
pub fn saito_classic(f: &Poly, ds: &[Derivation]) -> CriterionReport {
    let n = f.nvars();
    if f.is_zero() {
        return CriterionReport::invalid(vec![Diagnostic::ZeroPolynomial { index: 0 }]);
    }
    let mut diagnostics = check_arities(n, ds);
    if ds.len() != n {
        diagnostics.push(Diagnostic::WrongDerivationCount {
            expected: n,
            found: ds.len(),
        });
    }
    if !diagnostics.is_empty() {
        return CriterionReport::invalid(diagnostics);
    }
    let mut cofactors = Vec::with_capacity(n);
    for (index, d) in ds.iter().enumerate() {
        let w = tangency(d, f).expect("arity checked, f nonzero");
        match w.cofactor {
            Some(c) => cofactors.push(vec![c]),
            None => diagnostics.push(Diagnostic::NotTangent {
                index,
                residue: w.residue,
            }),
        }
    }
    if !diagnostics.is_empty() {
        return CriterionReport::invalid(diagnostics);
    }
    determinant_verdict(f.clone(), ds, cofactors)
}

/// Saito's criterion for the multiderivation module `Der_m(f)`.
pub fn saito_multi(spec: &MultiplicitySpec, ds: &[Derivation]) -> CriterionReport {
    let n = spec.nvars();
    let mut diagnostics = check_arities(n, ds);
    if ds.len() != n {
        diagnostics.push(Diagnostic::WrongDerivationCount {
            expected: n,
            found: ds.len(),
        });
    }
    if !diagnostics.is_empty() {
        return CriterionReport::invalid(diagnostics);
    }
    let mut cofactors = Vec::with_capacity(n);
    for (index, d) in ds.iter().enumerate() {
        let t = multi_tangency(d, spec).expect("arity checked");
        if t.holds() {
            cofactors.push(t.cofactors.into_iter().map(Option::unwrap).collect());
        } else {
            for (factor, c) in t.cofactors.iter().enumerate() {
                if c.is_none() {
                    diagnostics.push(Diagnostic::NotMultiTangent { index, factor });
                }
            }
        }
    }
    if !diagnostics.is_empty() {
        return CriterionReport::invalid(diagnostics);
    }
    determinant_verdict(spec.product(), ds, cofactors)
}

/// Generalized criterion for `Der(f_1, …, f_s)` with `2 ≤ s ≤ n - 1` and
/// `n + 1 - s` candidate generators.
pub fn saito_several(fs: &[Poly], ds: &[Derivation]) -> CriterionReport {
    let Some(first) = fs.first() else {
        return CriterionReport::invalid(vec![Diagnostic::PolynomialCountOutOfRange {
            count: 0,
            min: 2,
            max: 0,
        }]);
    };
    let n = first.nvars();
    let s = fs.len();
    let mut diagnostics: Vec<Diagnostic> = fs
        .iter()
        .filter(|f| f.nvars() != n)
        .map(|f| Diagnostic::ArityMismatch {
            expected: n,
            found: f.nvars(),
        })
        .collect();
    diagnostics.extend(
        fs.iter()
            .enumerate()
            .filter(|(_, f)| f.is_zero())
            .map(|(index, _)| Diagnostic::ZeroPolynomial { index }),
    );
    if s < 2 || s + 1 > n {
        diagnostics.push(Diagnostic::PolynomialCountOutOfRange {
            count: s,
            min: 2,
            max: n.saturating_sub(1),
        });
    }
    diagnostics.extend(check_arities(n, ds));
    let rank = (n + 1).saturating_sub(s);
    if ds.len() != rank {
        diagnostics.push(Diagnostic::WrongDerivationCount {
            expected: rank,
            found: ds.len(),
        });
    }
    if !diagnostics.is_empty() {
        return CriterionReport::invalid(diagnostics);
    }
    for (index, d) in ds.iter().enumerate() {
        let c = pairwise_compatibility(d, fs).expect("checked arity and count");
        for (pair, defect) in c.failing_pairs() {
            diagnostics.push(Diagnostic::Incompatible {
                index,
                pair: *pair,
                defect: defect.clone(),
            });
        }
    }
    if !diagnostics.is_empty() {
        return CriterionReport::invalid(diagnostics);
    }

    let minors = column_matrix(ds).maximal_minors().expect("cols <= rows");
    let warnings = independence_warning(fs).into_iter().collect();
    let Some(g) = Poly::gcd_all(&minors).expect("same arity") else {
        let mut report = CriterionReport::invalid(vec![Diagnostic::DependentFamily]);
        report.minors = minors;
        report.warnings = warnings;
        return report;
    };
    let free = g.is_constant();
    let report = CriterionReport {
        verdict: if free {
            Verdict::Free
        } else {
            Verdict::NotFree
        },
        evidence: Some(g.clone()),
        expected: Some(Poly::one(n)),
        unit_witness: free.then(|| rat(1)),
        failure_factor: (!free).then_some(g),
        cofactors: Vec::new(),
        minors,
        diagnostics,
        warnings,
    };
    assert!(report.recheck(), "criterion verdict failed its own recheck");
    report
}

/// Randomized check that the Jacobian of `fs` has full rank somewhere. A
/// failure suggests the polynomials are algebraically dependent.
fn independence_warning(fs: &[Poly]) -> Option<String> {
    const TRIALS: usize = 4;
    let n = fs[0].nvars();
    let jacobian: Vec<Vec<Poly>> = fs
        .iter()
        .map(|f| (0..n).map(|i| f.partial_derivative(i).unwrap()).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5a17_0001);
    for _ in 0..TRIALS {
        let point: Vec<Rational> = (0..n).map(|_| rat(rng.random_range(-50..=50))).collect();
        let rows = jacobian
            .iter()
            .map(|row| row.iter().map(|p| p.evaluate(&point).unwrap()).collect())
            .collect();
        if RationalMatrix::from_rows(rows).rank() == fs.len() {
            return None;
        }
    }
    Some(format!(
        "jacobian of the {} polynomials looked rank-deficient at {TRIALS} random points; \
         they may be algebraically dependent and the criterion is then not backed by theory",
        fs.len()
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LemmaError {
    #[error("expected {expected} derivations of arity {expected}, got {found}")]
    Shape { expected: usize, found: usize },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("derivation {index} is not tangent (residue {residue})")]
    NotTangent { index: usize, residue: Poly },
    #[error("derivations are linearly dependent")]
    Dependent,
    /// Tangent independent derivations whose determinant is not a multiple of
    /// `f`. Cannot happen for squarefree `f`.
    #[error("determinant {determinant} is not divisible by f")]
    Violation { determinant: Poly },
}

/// For `n` independent derivations tangent to `f`, `f` divides
/// `det(δ_1, …, δ_n)`; returns the exact quotient.
pub fn divisibility_lemma_check(f: &Poly, ds: &[Derivation]) -> Result<Poly, LemmaError> {
    let n = f.nvars();
    if f.is_zero() {
        return Err(LemmaError::ZeroPolynomial);
    }
    if ds.len() != n || ds.iter().any(|d| d.nvars() != n) {
        return Err(LemmaError::Shape {
            expected: n,
            found: ds.len(),
        });
    }
    for (index, d) in ds.iter().enumerate() {
        let w = tangency(d, f).expect("shape checked");
        if !w.is_tangent() {
            return Err(LemmaError::NotTangent {
                index,
                residue: w.residue,
            });
        }
    }
    let det = column_matrix(ds).determinant().expect("square");
    if det.is_zero() {
        return Err(LemmaError::Dependent);
    }
    det.exact_divide(f)
        .map_err(|_| LemmaError::Violation { determinant: det })
}
