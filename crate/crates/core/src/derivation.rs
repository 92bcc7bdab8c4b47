//! Polynomial derivations `δ = Σ P_i ∂_i` and the membership predicates of the
//! logarithmic derivation modules.

use std::fmt;

use thiserror::Error;

use crate::poly::{default_var_names, Poly, PolyError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivationError {
    #[error("ring arity mismatch: derivation on {derivation} variables, polynomial on {poly}")]
    ArityMismatch { derivation: usize, poly: usize },
    #[error("the zero polynomial has no tangent derivations")]
    ZeroPolynomial,
    #[error("euler splitting needs a homogeneous polynomial")]
    Inhomogeneous,
    #[error("euler splitting needs a nonconstant polynomial")]
    ConstantPolynomial,
    #[error("derivation is not tangent: residue {residue}")]
    NotTangent { residue: Poly },
    #[error("pairwise compatibility needs at least two polynomials, got {got}")]
    TooFewPolynomials { got: usize },
    #[error("multiplicity spec is empty")]
    EmptySpec,
    #[error("factor {index} has multiplicity 0")]
    ZeroMultiplicity { index: usize },
    #[error("factor {index} is constant")]
    ConstantFactor { index: usize },
    #[error("factors {first} and {second} coincide up to a unit")]
    RepeatedFactor { first: usize, second: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `Σ coeffs[i] ∂_i` over a ring with `coeffs.len()` variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Derivation {
    coeffs: Vec<Poly>,
}

impl Derivation {
    pub fn new(coeffs: Vec<Poly>) -> Result<Self, DerivationError> {
        let n = coeffs.len();
        for p in &coeffs {
            if p.nvars() != n {
                return Err(DerivationError::ArityMismatch {
                    derivation: n,
                    poly: p.nvars(),
                });
            }
        }
        Ok(Derivation { coeffs })
    }

    pub fn zero(nvars: usize) -> Self {
        Derivation {
            coeffs: vec![Poly::zero(nvars); nvars],
        }
    }

    /// The coordinate derivation `∂_var`.
    pub fn partial(nvars: usize, var: usize) -> Self {
        let mut d = Derivation::zero(nvars);
        d.coeffs[var] = Poly::one(nvars);
        d
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Poly> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    /// Largest total degree among the coefficients (`None` for the zero derivation).
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.iter().filter_map(Poly::degree).max()
    }

    /// `δ(f) = Σ P_i ∂_i f`.
    pub fn apply(&self, f: &Poly) -> Result<Poly, DerivationError> {
        if f.nvars() != self.nvars() {
            return Err(DerivationError::ArityMismatch {
                derivation: self.nvars(),
                poly: f.nvars(),
            });
        }
        let mut out = Poly::zero(f.nvars());
        for (i, p) in self.coeffs.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            out = &out + &(p * &f.partial_derivative(i)?);
        }
        Ok(out)
    }

    pub fn mul_poly(&self, g: &Poly) -> Derivation {
        Derivation {
            coeffs: self.coeffs.iter().map(|p| p * g).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Derivation {
        Derivation {
            coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn add(&self, other: &Derivation) -> Derivation {
        Derivation {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Derivation) -> Derivation {
        Derivation {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// `Σ g_j δ_j`.
    pub fn combination(terms: &[(Poly, Derivation)]) -> Option<Derivation> {
        let n = terms.first()?.1.nvars();
        Some(
            terms
                .iter()
                .fold(Derivation::zero(n), |acc, (g, d)| acc.add(&d.mul_poly(g))),
        )
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> DerivationDisplay<'a> {
        DerivationDisplay { d: self, names }
    }
}

pub struct DerivationDisplay<'a> {
    d: &'a Derivation,
    names: &'a [String],
}

impl fmt::Display for DerivationDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.d.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", p.display_with(self.names))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_var_names(self.nvars());
        write!(f, "{}", self.display_with(&names))
    }
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Derivation{self}")
    }
}

/// The Euler derivation `Σ x_i ∂_i`.
pub fn euler_derivation(nvars: usize) -> Derivation {
    Derivation {
        coeffs: (0..nvars).map(|i| Poly::var(nvars, i)).collect(),
    }
}

/// `(∂_1 f, …, ∂_n f)`, the generators of the Jacobian ideal.
pub fn gradient(f: &Poly) -> Vec<Poly> {
    (0..f.nvars())
        .map(|i| f.partial_derivative(i).expect("index in range"))
        .collect()
}

/// Outcome of a tangency test `δ(f) ∈ (f)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangencyWitness {
    /// `p` with `δ(f) = p f`, when it exists.
    pub cofactor: Option<Poly>,
    /// Remainder of `δ(f)` on division by `f`; zero exactly when tangent.
    pub residue: Poly,
}

impl TangencyWitness {
    pub fn is_tangent(&self) -> bool {
        self.cofactor.is_some()
    }
}

pub fn tangency(d: &Derivation, f: &Poly) -> Result<TangencyWitness, DerivationError> {
    if f.is_zero() {
        return Err(DerivationError::ZeroPolynomial);
    }
    let image = d.apply(f)?;
    let (quotient, residue) = image.div_rem(f)?;
    let cofactor = residue.is_zero().then(|| {
        debug_assert_eq!(&quotient * f, image);
        quotient
    });
    Ok(TangencyWitness { cofactor, residue })
}

/// Splits a derivation tangent to a homogeneous `f` as `δ = c δ_E + δ_0` with
/// `δ_0(f) = 0` and `c = δ(f) / (deg(f) f)`.
pub fn euler_split(d: &Derivation, f: &Poly) -> Result<(Poly, Derivation), DerivationError> {
    if f.is_zero() {
        return Err(DerivationError::ZeroPolynomial);
    }
    if !f.is_homogeneous() {
        return Err(DerivationError::Inhomogeneous);
    }
    let deg = f.degree().unwrap_or(0);
    if deg == 0 {
        return Err(DerivationError::ConstantPolynomial);
    }
    let witness = tangency(d, f)?;
    let cofactor = witness.cofactor.ok_or(DerivationError::NotTangent {
        residue: witness.residue,
    })?;
    let c = cofactor.scale(&Rational::new(1.into(), deg.into()));
    let d0 = d.sub(&euler_derivation(d.nvars()).mul_poly(&c));
    debug_assert!(d0.apply(f).map(|p| p.is_zero()).unwrap_or(false));
    Ok((c, d0))
}

/// The data `f = f_1^{m_1} ⋯ f_r^{m_r}` of a multiderivation module.
///
/// Squarefreeness and irreducibility of the factors are not checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicitySpec {
    factors: Vec<(Poly, u32)>,
}

impl MultiplicitySpec {
    pub fn new(factors: Vec<(Poly, u32)>) -> Result<Self, DerivationError> {
        if factors.is_empty() {
            return Err(DerivationError::EmptySpec);
        }
        let n = factors[0].0.nvars();
        for (index, (f, m)) in factors.iter().enumerate() {
            if f.nvars() != n {
                return Err(DerivationError::ArityMismatch {
                    derivation: n,
                    poly: f.nvars(),
                });
            }
            if *m == 0 {
                return Err(DerivationError::ZeroMultiplicity { index });
            }
            if f.is_constant() {
                return Err(DerivationError::ConstantFactor { index });
            }
        }
        for i in 0..factors.len() {
            for j in i + 1..factors.len() {
                if factors[i].0.is_associate(&factors[j].0) {
                    return Err(DerivationError::RepeatedFactor {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        Ok(MultiplicitySpec { factors })
    }

    pub fn factors(&self) -> &[(Poly, u32)] {
        &self.factors
    }

    pub fn nvars(&self) -> usize {
        self.factors[0].0.nvars()
    }

    /// `Π f_i^{m_i}`.
    pub fn product(&self) -> Poly {
        self.factors
            .iter()
            .fold(Poly::one(self.nvars()), |acc, (f, m)| &acc * &f.pow(*m))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiTangency {
    /// Per factor, `q_i` with `δ(f_i) = q_i f_i^{m_i}` when it exists.
    pub cofactors: Vec<Option<Poly>>,
}

impl MultiTangency {
    pub fn holds(&self) -> bool {
        self.cofactors.iter().all(Option::is_some)
    }

    pub fn first_failure(&self) -> Option<usize> {
        self.cofactors.iter().position(Option::is_none)
    }
}

/// Tests `δ(f_i) ∈ (f_i^{m_i})` for every factor of the spec.
pub fn multi_tangency(
    d: &Derivation,
    spec: &MultiplicitySpec,
) -> Result<MultiTangency, DerivationError> {
    let mut cofactors = Vec::with_capacity(spec.factors.len());
    for (f, m) in &spec.factors {
        let image = d.apply(f)?;
        cofactors.push(image.exact_divide(&f.pow(*m)).ok());
    }
    Ok(MultiTangency { cofactors })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Compatibility {
    /// `((i, j), f_j δ(f_i) - f_i δ(f_j))` for every pair `i < j`.
    pub defects: Vec<((usize, usize), Poly)>,
}

impl Compatibility {
    pub fn holds(&self) -> bool {
        self.defects.iter().all(|(_, p)| p.is_zero())
    }

    pub fn failing_pairs(&self) -> impl Iterator<Item = &((usize, usize), Poly)> {
        self.defects.iter().filter(|(_, p)| !p.is_zero())
    }
}

/// Tests the defining relations `f_j δ(f_i) = f_i δ(f_j)` of `Der(f_1, …, f_s)`.
pub fn pairwise_compatibility(
    d: &Derivation,
    fs: &[Poly],
) -> Result<Compatibility, DerivationError> {
    if fs.len() < 2 {
        return Err(DerivationError::TooFewPolynomials { got: fs.len() });
    }
    if fs.iter().any(Poly::is_zero) {
        return Err(DerivationError::ZeroPolynomial);
    }
    let images = fs
        .iter()
        .map(|f| d.apply(f))
        .collect::<Result<Vec<_>, _>>()?;
    let mut defects = Vec::new();
    for i in 0..fs.len() {
        for j in i + 1..fs.len() {
            let defect = &(&fs[j] * &images[i]) - &(&fs[i] * &images[j]);
            defects.push(((i, j), defect));
        }
    }
    Ok(Compatibility { defects })
}
