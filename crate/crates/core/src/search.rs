//! Degree-bounded computation of derivation spaces by exact linear algebra.
//!
//! Membership in `Der(f)`, `Der_0(f_1, …)`, `Der_m(f)` and `Der(f_1, …, f_s)` is
//! a linear condition on the coefficients of a derivation (together with an
//! unknown cofactor where divisibility is involved). Restricting coefficients to
//! total degree at most `d` turns it into a finite rational linear system whose
//! kernel is computed exactly. This is deliberately independent of the
//! determinant criteria and is used to cross-check them.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::derivation::{
    multi_tangency, pairwise_compatibility, tangency, Derivation, MultiplicitySpec,
};
use crate::linalg::RationalMatrix;
use crate::matrix::PolyMatrix;
use crate::poly::{Monomial, Poly, Rational};

/// Upper bound on `equations × unknowns` for the dense system.
pub const DEFAULT_MAX_CELLS: usize = 1_500_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// `δ(f) ∈ (f)`.
    Tangent(Poly),
    /// `δ(f_i) = 0` for all `i`.
    Annihilating(Vec<Poly>),
    /// `δ(f_i) ∈ (f_i^{m_i})`.
    Multi(MultiplicitySpec),
    /// `f_j δ(f_i) = f_i δ(f_j)` for all pairs.
    Several(Vec<Poly>),
}

impl SearchMode {
    fn polys(&self) -> Vec<&Poly> {
        match self {
            SearchMode::Tangent(f) => vec![f],
            SearchMode::Annihilating(fs) | SearchMode::Several(fs) => fs.iter().collect(),
            SearchMode::Multi(spec) => spec.factors().iter().map(|(f, _)| f).collect(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SearchMode::Tangent(_) => "tangent",
            SearchMode::Annihilating(_) => "annihilating",
            SearchMode::Multi(_) => "multi",
            SearchMode::Several(_) => "several",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchProblem {
    pub mode: SearchMode,
    /// Bound on the total degree of every coefficient of a candidate derivation.
    pub degree_bound: u32,
    /// Only coefficients of degree exactly `degree_bound` (homogeneous inputs).
    pub graded: bool,
    pub max_cells: usize,
}

impl SearchProblem {
    pub fn new(mode: SearchMode, degree_bound: u32) -> Self {
        SearchProblem {
            mode,
            degree_bound,
            graded: false,
            max_cells: DEFAULT_MAX_CELLS,
        }
    }

    pub fn graded(mut self) -> Self {
        self.graded = true;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    /// Kernel basis projected to the derivation coefficients, each scaled to
    /// integer coefficients with content one.
    pub basis: Vec<Derivation>,
    /// Number of unknowns in the linear system (derivation and cofactor coefficients).
    pub ambient_dimension: usize,
    pub solution_dimension: usize,
}

impl SearchResult {
    /// Whether `d` lies in the rational span of the basis.
    pub fn contains(&self, d: &Derivation) -> bool {
        let mut keys: BTreeMap<(usize, Monomial), usize> = BTreeMap::new();
        for v in self.basis.iter().chain(std::iter::once(d)) {
            for (slot, p) in v.coeffs().iter().enumerate() {
                for (m, _) in p.terms() {
                    let next = keys.len();
                    keys.entry((slot, m.clone())).or_insert(next);
                }
            }
        }
        let to_row = |v: &Derivation| {
            let mut row = vec![Rational::zero(); keys.len()];
            for (slot, p) in v.coeffs().iter().enumerate() {
                for (m, c) in p.terms() {
                    row[keys[&(slot, m.clone())]] = c.clone();
                }
            }
            row
        };
        let base: Vec<Vec<Rational>> = self.basis.iter().map(to_row).collect();
        let mut extended = base.clone();
        extended.push(to_row(d));
        let rank = |rows: Vec<Vec<Rational>>| {
            if rows.is_empty() {
                0
            } else {
                RationalMatrix::from_rows(rows).rank()
            }
        };
        rank(base) == rank(extended)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("linear system of {cells} cells exceeds the limit of {limit}")]
    SizeLimit { cells: usize, limit: usize },
    #[error("the ring has no variables")]
    NoVariables,
    #[error("no polynomials given")]
    NoPolynomials,
    #[error("polynomial {index} is zero")]
    ZeroPolynomial { index: usize },
    #[error("polynomials live in rings of different arity")]
    ArityMismatch,
    #[error("several-polynomial mode needs at least two polynomials")]
    TooFewPolynomials,
    #[error("graded search needs homogeneous polynomials")]
    NotHomogeneous,
}

/// One linear condition family: the unknown-weighted sum of `contributions`
/// must vanish coefficientwise.
struct Block {
    /// Per unknown, its polynomial contribution to this block.
    contributions: Vec<Poly>,
}

pub fn solve(problem: &SearchProblem) -> Result<SearchResult, SearchError> {
    let polys = problem.mode.polys();
    let Some(first) = polys.first() else {
        return Err(SearchError::NoPolynomials);
    };
    let n = first.nvars();
    if n == 0 {
        return Err(SearchError::NoVariables);
    }
    if polys.iter().any(|p| p.nvars() != n) {
        return Err(SearchError::ArityMismatch);
    }
    if let Some(index) = polys.iter().position(|p| p.is_zero()) {
        return Err(SearchError::ZeroPolynomial { index });
    }
    if problem.graded && polys.iter().any(|p| !p.is_homogeneous()) {
        return Err(SearchError::NotHomogeneous);
    }
    if matches!(problem.mode, SearchMode::Several(ref fs) if fs.len() < 2) {
        return Err(SearchError::TooFewPolynomials);
    }

    let d = problem.degree_bound;
    let slot_monomials = if problem.graded {
        Monomial::all_of_degree(n, d)
    } else {
        Monomial::all_up_to_degree(n, d)
    };
    let derivation_unknowns = n * slot_monomials.len();

    // Unknown layout: slot-major derivation coefficients, then cofactor
    // coefficients block by block.
    let mut blocks: Vec<Block> = Vec::new();
    let mut extra_unknowns = 0usize;
    let derivation_part = |g: &Poly| -> Vec<Poly> {
        let grads: Vec<Poly> = (0..n).map(|i| g.partial_derivative(i).unwrap()).collect();
        let mut out = Vec::with_capacity(derivation_unknowns);
        for grad in &grads {
            for m in &slot_monomials {
                out.push(grad.mul_monomial(m));
            }
        }
        out
    };
    // Cofactor q with deg(q) + deg(divisor) <= d + deg(f) - 1.
    let cofactor_monomials = |f: &Poly, divisor_degree: u32| -> Vec<Monomial> {
        let top = i64::from(d) + i64::from(f.degree().unwrap()) - 1 - i64::from(divisor_degree);
        if top < 0 {
            Vec::new()
        } else {
            Monomial::all_up_to_degree(n, top as u32)
        }
    };

    match &problem.mode {
        SearchMode::Tangent(f) => {
            let cof = cofactor_monomials(f, f.degree().unwrap());
            let mut contributions = derivation_part(f);
            contributions.extend(cof.iter().map(|m| -&f.mul_monomial(m)));
            extra_unknowns += cof.len();
            blocks.push(Block { contributions });
        }
        SearchMode::Annihilating(fs) => {
            for f in fs {
                blocks.push(Block {
                    contributions: derivation_part(f),
                });
            }
        }
        SearchMode::Multi(spec) => {
            let mut cofactor_sets = Vec::new();
            for (f, m) in spec.factors() {
                let power = f.pow(*m);
                let cof = cofactor_monomials(f, power.degree().unwrap());
                cofactor_sets.push((power, cof));
            }
            let total_extra: usize = cofactor_sets.iter().map(|(_, c)| c.len()).sum();
            let mut offset = 0;
            for ((f, _), (power, cof)) in spec.factors().iter().zip(&cofactor_sets) {
                let mut contributions = derivation_part(f);
                contributions.resize(derivation_unknowns + total_extra, Poly::zero(n));
                for (k, m) in cof.iter().enumerate() {
                    contributions[derivation_unknowns + offset + k] = -&power.mul_monomial(m);
                }
                offset += cof.len();
                blocks.push(Block { contributions });
            }
            extra_unknowns = total_extra;
        }
        SearchMode::Several(fs) => {
            let parts: Vec<Vec<Poly>> = fs.iter().map(derivation_part).collect();
            for i in 0..fs.len() {
                for j in i + 1..fs.len() {
                    let contributions = parts[i]
                        .iter()
                        .zip(&parts[j])
                        .map(|(di, dj)| &(&fs[j] * di) - &(&fs[i] * dj))
                        .collect();
                    blocks.push(Block { contributions });
                }
            }
        }
    }

    let unknowns = derivation_unknowns + extra_unknowns;
    for b in &mut blocks {
        b.contributions.resize(unknowns, Poly::zero(n));
    }
    let mut row_index: Vec<BTreeMap<Monomial, usize>> = Vec::with_capacity(blocks.len());
    let mut equations = 0usize;
    for b in &blocks {
        let mut rows = BTreeMap::new();
        for p in &b.contributions {
            for (m, _) in p.terms() {
                rows.entry(m.clone()).or_insert(0);
            }
        }
        for v in rows.values_mut() {
            *v = equations;
            equations += 1;
        }
        row_index.push(rows);
    }
    let cells = equations.saturating_mul(unknowns);
    if cells > problem.max_cells {
        return Err(SearchError::SizeLimit {
            cells,
            limit: problem.max_cells,
        });
    }

    let mut system = RationalMatrix::zeros(equations, unknowns);
    for (b, rows) in blocks.iter().zip(&row_index) {
        for (col, p) in b.contributions.iter().enumerate() {
            for (m, c) in p.terms() {
                system.set(rows[m], col, c.clone());
            }
        }
    }

    let kernel = system.nullspace();
    let basis: Vec<Derivation> = kernel
        .iter()
        .map(|v| {
            let coeffs = (0..n)
                .map(|slot| {
                    let mut p = Poly::zero(n);
                    for (k, m) in slot_monomials.iter().enumerate() {
                        p = &p + &Poly::term(m.clone(), v[slot * slot_monomials.len() + k].clone());
                    }
                    p
                })
                .collect();
            normalize(Derivation::new(coeffs).expect("arity n"))
        })
        .collect();

    for d in &basis {
        assert!(
            satisfies(&problem.mode, d),
            "search produced a derivation outside the module"
        );
    }

    Ok(SearchResult {
        solution_dimension: basis.len(),
        basis,
        ambient_dimension: unknowns,
    })
}

/// The membership predicate of `mode`, evaluated through `derivation`.
pub fn satisfies(mode: &SearchMode, d: &Derivation) -> bool {
    match mode {
        SearchMode::Tangent(f) => tangency(d, f).is_ok_and(|w| w.is_tangent()),
        SearchMode::Annihilating(fs) => fs.iter().all(|f| d.apply(f).is_ok_and(|p| p.is_zero())),
        SearchMode::Multi(spec) => multi_tangency(d, spec).is_ok_and(|t| t.holds()),
        SearchMode::Several(fs) => pairwise_compatibility(d, fs).is_ok_and(|c| c.holds()),
    }
}

/// Scales to integer coefficients with content one and a positive leading
/// coefficient in the first nonzero slot.
fn normalize(d: Derivation) -> Derivation {
    let mut den_lcm = BigInt::one();
    let mut num_gcd = BigInt::zero();
    for p in d.coeffs() {
        for (_, c) in p.terms() {
            den_lcm = den_lcm.lcm(c.denom());
            num_gcd = num_gcd.gcd(c.numer());
        }
    }
    if num_gcd.is_zero() {
        return d;
    }
    let mut factor = Rational::new(den_lcm, num_gcd);
    let lead = d
        .coeffs()
        .iter()
        .find_map(|p| p.leading_coefficient())
        .expect("nonzero derivation");
    if lead.is_negative() {
        factor = -factor;
    }
    d.scale(&factor)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MembershipError {
    #[error("expected {expected} basis derivations on {expected} variables")]
    Shape { expected: usize },
    #[error("basis is not certified: its determinant is not a nonzero multiple of f")]
    NotCertified,
    /// Some Cramer quotient is not a polynomial.
    #[error("not a member: Cramer quotient {index} is not a polynomial")]
    NotMember { index: usize },
}

/// Expresses `d` in a certified free basis: returns `c` with `d = Σ c_i δ_i`,
/// where `c_i = det(basis with column i replaced by d) / det(basis)`.
pub fn membership(
    d: &Derivation,
    basis: &[Derivation],
    f: &Poly,
) -> Result<Vec<Poly>, MembershipError> {
    let n = f.nvars();
    if basis.len() != n || d.nvars() != n || basis.iter().any(|b| b.nvars() != n) {
        return Err(MembershipError::Shape { expected: n });
    }
    let columns: Vec<Vec<Poly>> = basis.iter().map(|b| b.coeffs().to_vec()).collect();
    let matrix = PolyMatrix::from_columns(&columns).expect("shape checked");
    let det = matrix.determinant().expect("square");
    let certified = det
        .exact_divide(f)
        .ok()
        .and_then(|q| q.constant_value())
        .is_some_and(|u| !u.is_zero());
    if !certified {
        return Err(MembershipError::NotCertified);
    }
    let mut coefficients = Vec::with_capacity(n);
    for i in 0..n {
        let numerator = matrix
            .with_column(i, d.coeffs())
            .determinant()
            .expect("square");
        let c = numerator
            .exact_divide(&det)
            .map_err(|_| MembershipError::NotMember { index: i })?;
        coefficients.push(c);
    }
    let terms: Vec<(Poly, Derivation)> = coefficients
        .iter()
        .cloned()
        .zip(basis.iter().cloned())
        .collect();
    debug_assert_eq!(Derivation::combination(&terms).as_ref(), Some(d));
    Ok(coefficients)
}
