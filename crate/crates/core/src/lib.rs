//! Exact computations with logarithmic derivation modules.
//!
//! The crate provides sparse polynomial arithmetic over the rationals, exact
//! determinants and maximal minors of polynomial matrices, the derivation
//! calculus behind `Der(f)`, `Der_m(f)` and `Der(f_1, …, f_s)`, and Saito-type
//! freeness criteria that emit re-checkable certificates. A degree-bounded
//! brute-force solver serves as an independent cross-check of the criteria.

pub mod criteria;
pub mod derivation;
pub mod linalg;
pub mod matrix;
pub mod parse;
pub mod poly;
pub mod problem;
pub mod report;
pub mod search;

pub use criteria::{
    divisibility_lemma_check, saito_classic, saito_multi, saito_several, CriterionReport,
    Diagnostic, LemmaError, Verdict,
};
pub use derivation::{
    euler_derivation, euler_split, gradient, multi_tangency, pairwise_compatibility, tangency,
    Derivation, DerivationError, MultiplicitySpec, TangencyWitness,
};
pub use matrix::{MatrixError, PolyMatrix};
pub use parse::{parse_poly, ParseError};
pub use poly::{Monomial, Poly, PolyError, Rational};
pub use problem::{Mode, Problem, ProblemError, ProblemFile, SearchKind};
pub use report::{Payload, ReportDocument};
pub use search::{
    membership, solve, MembershipError, SearchError, SearchMode, SearchProblem, SearchResult,
};
