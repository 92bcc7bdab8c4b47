//! Sparse multivariate polynomials over the rationals.
//!
//! A [`Poly`] is a map from [`Monomial`] to a nonzero [`Rational`]. Terms are
//! kept in graded-lexicographic order, which fixes the leading term used by
//! division and the order used by the canonical printer.

mod gcd;
mod monomial;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use monomial::Monomial;

pub type Rational = num_rational::BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("ring arity mismatch: {left} vs {right} variables")]
    ArityMismatch { left: usize, right: usize },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial is not exactly divisible")]
    NotDivisible,
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
}

fn check_arity(left: usize, right: usize) -> Result<(), PolyError> {
    if left == right {
        Ok(())
    } else {
        Err(PolyError::ArityMismatch { left, right })
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Poly::term(Monomial::one(nvars), c)
    }

    pub fn int(nvars: usize, c: i64) -> Self {
        Poly::constant(nvars, rat(c))
    }

    /// The variable `x_index` (0-based).
    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable index {index} out of range");
        Poly::term(Monomial::var_power(nvars, index, 1), Rational::one())
    }

    pub fn term(mono: Monomial, c: Rational) -> Self {
        let nvars = mono.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono, c);
        }
        Poly { nvars, terms }
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Poly::zero(nvars);
        for (exps, c) in terms {
            assert_eq!(exps.len(), nvars, "exponent vector length");
            p.add_term(Monomial::new(exps), c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// True for the zero polynomial and nonzero constants alike.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value of a constant polynomial (zero included).
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, mono: &Monomial) -> Rational {
        self.terms.get(mono).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.leading_term().map(|(_, c)| c)
    }

    /// Total degree; `None` stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Monomial::total_degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    /// `(total degree, homogeneous?)`, with `None` as the zero polynomial's degree.
    pub fn degree_info(&self) -> (Option<u32>, bool) {
        (self.degree(), self.is_homogeneous())
    }

    /// Largest exponent of `var` over all terms (0 for the zero polynomial).
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms
            .keys()
            .map(|m| m.exponent(var))
            .max()
            .unwrap_or(0)
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exponent(var) > 0)
    }

    pub(crate) fn add_term(&mut self, mono: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c * mono * other`
    fn add_scaled_shifted(&mut self, other: &Poly, mono: &Monomial, c: &Rational) {
        for (m, d) in &other.terms {
            self.add_term(m.mul(mono), c * d);
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        check_arity(self.nvars, other.nvars)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        check_arity(self.nvars, other.nvars)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        check_arity(self.nvars, other.nvars)?;
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_scaled_shifted(other, m, c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.mul(mono), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Poly {
        let mut result = Poly::one(self.nvars);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Division by a single divisor under the graded-lexicographic order.
    ///
    /// Returns `(q, r)` with `self = q * divisor + r` and no term of `r`
    /// divisible by the leading monomial of `divisor`.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly), PolyError> {
        check_arity(self.nvars, divisor.nvars)?;
        let (lm, lc) = divisor.leading_term().ok_or(PolyError::DivisionByZero)?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rest = self.clone();
        let mut quotient = Poly::zero(self.nvars);
        let mut remainder = Poly::zero(self.nvars);
        while let Some((m, c)) = rest.leading_term() {
            let (m, c) = (m.clone(), c.clone());
            match m.checked_div(&lm) {
                Some(shift) => {
                    let factor = &c / &lc;
                    rest.add_scaled_shifted(divisor, &shift, &-factor.clone());
                    quotient.add_term(shift, factor);
                }
                None => {
                    rest.terms.remove(&m);
                    remainder.add_term(m, c);
                }
            }
        }
        Ok((quotient, remainder))
    }

    /// The exact quotient `self / divisor`, or `NotDivisible`.
    pub fn exact_divide(&self, divisor: &Poly) -> Result<Poly, PolyError> {
        check_arity(self.nvars, divisor.nvars)?;
        let (lm, lc) = divisor.leading_term().ok_or(PolyError::DivisionByZero)?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rest = self.clone();
        let mut quotient = Poly::zero(self.nvars);
        // For a single divisor the remainder vanishes iff every leading term
        // met along the way is divisible, so bail out at the first that is not.
        while let Some((m, c)) = rest.leading_term() {
            let shift = m.checked_div(&lm).ok_or(PolyError::NotDivisible)?;
            let factor = c / &lc;
            rest.add_scaled_shifted(divisor, &shift, &-factor.clone());
            quotient.add_term(shift, factor);
        }
        if &quotient * divisor != *self {
            return Err(PolyError::NotDivisible);
        }
        Ok(quotient)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        !self.is_zero() && other.exact_divide(self).is_ok()
    }

    /// Partial derivative with respect to the 0-based variable `var`.
    pub fn partial_derivative(&self, var: usize) -> Result<Poly, PolyError> {
        if var >= self.nvars {
            return Err(PolyError::VariableOutOfRange {
                index: var,
                nvars: self.nvars,
            });
        }
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if let Some((e, dm)) = m.derivative(var) {
                out.add_term(dm, c * rat(i64::from(e)));
            }
        }
        Ok(out)
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        check_arity(self.nvars, point.len())?;
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut value = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    value *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += value;
        }
        Ok(total)
    }

    /// Replaces `x_var` by the constant `value`.
    pub fn substitute(&self, var: usize, value: &Rational) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            let mut exps = m.exponents().to_vec();
            exps[var] = 0;
            out.add_term(
                Monomial::new(exps),
                c * num_traits::pow(value.clone(), e as usize),
            );
        }
        out
    }

    /// Scales to integer coefficients with content 1 and a positive leading
    /// coefficient. The zero polynomial is returned unchanged.
    pub fn primitive_normalized(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
            num_gcd = num_gcd.gcd(c.numer());
        }
        let mut factor = Rational::new(den_lcm, num_gcd);
        if self.leading_coefficient().unwrap().is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// The rational `u` with `self == u * other`, if one exists.
    pub fn unit_ratio(&self, other: &Poly) -> Option<Rational> {
        if self.nvars != other.nvars || self.is_zero() || other.is_zero() {
            return None;
        }
        let (lm_a, lc_a) = self.leading_term()?;
        let (lm_b, lc_b) = other.leading_term()?;
        if lm_a != lm_b || self.num_terms() != other.num_terms() {
            return None;
        }
        let u = lc_a / lc_b;
        (other.scale(&u) == *self).then_some(u)
    }

    /// True when `self` is a nonzero rational multiple of `other`.
    pub fn is_associate(&self, other: &Poly) -> bool {
        self.unit_ratio(other).is_some()
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

/// Variable names used when none are supplied: `x, y, z` up to three
/// variables, `x0, x1, …` beyond that.
pub fn default_var_names(nvars: usize) -> Vec<String> {
    if nvars <= 3 {
        ["x", "y", "z"][..nvars]
            .iter()
            .map(|s| s.to_string())
            .collect()
    } else {
        (0..nvars).map(|i| format!("x{i}")).collect()
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self.poly, self.names)
    }
}

fn write_poly(f: &mut fmt::Formatter<'_>, p: &Poly, names: &[String]) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    for (i, (m, c)) in p.terms().enumerate() {
        let negative = c.is_negative();
        match (i, negative) {
            (0, true) => write!(f, "-")?,
            (0, false) => {}
            (_, true) => write!(f, " - ")?,
            (_, false) => write!(f, " + ")?,
        }
        let abs = c.abs();
        if m.is_one() {
            write!(f, "{abs}")?;
            continue;
        }
        if !abs.is_one() {
            write!(f, "{abs}*")?;
        }
        let mut first = true;
        for (var, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", names[var])?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
    }
    Ok(())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self, &default_var_names(self.nvars))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.nvars, self)
    }
}

// Operator forms panic on arity mismatch; use the `checked_*` methods when the
// operands come from untrusted input.

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("polynomial addition")
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("polynomial subtraction")
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("polynomial multiplication")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var(3, 0)
    }
    fn y() -> Poly {
        Poly::var(3, 1)
    }
    fn z() -> Poly {
        Poly::var(3, 2)
    }
    fn c(v: i64) -> Poly {
        Poly::int(3, v)
    }

    #[test]
    fn add_cancels() {
        let a = &x().pow(2) + &y();
        assert_eq!(&a + &-y(), x().pow(2));
        assert_eq!(&a + &Poly::zero(3), a);
        let conic = &x().pow(2) + &(&y() * &z());
        let other = &x().pow(2) - &(&y() * &z());
        assert_eq!(&conic + &other, &c(2) * &x().pow(2));
    }

    #[test]
    fn multiply_examples() {
        assert_eq!(&(&x() + &y()) * &(&x() - &y()), &x().pow(2) - &y().pow(2));
        let conic = &x().pow(2) + &(&y() * &z());
        assert_eq!(&z() * &conic, &(&x().pow(2) * &z()) + &(&y() * &z().pow(2)));
        let lhs = &(&x().pow(2) - &y().pow(2)) * &(&z().pow(3) + &c(1));
        let expanded = Poly::from_terms(
            3,
            [
                (vec![2, 0, 3], rat(1)),
                (vec![2, 0, 0], rat(1)),
                (vec![0, 2, 3], rat(-1)),
                (vec![0, 2, 0], rat(-1)),
            ],
        );
        assert_eq!(lhs, expanded);
    }

    #[test]
    fn exact_divide_examples() {
        let conic = &x().pow(2) + &(&y() * &z());
        let product = &(&c(6) * &z()) * &conic;
        assert_eq!(product.exact_divide(&conic).unwrap(), &c(6) * &z());
        assert_eq!(conic.exact_divide(&conic).unwrap(), c(1));
        assert_eq!(
            conic.exact_divide(&(&x() + &y())),
            Err(PolyError::NotDivisible)
        );
        assert_eq!(
            conic.exact_divide(&Poly::zero(3)),
            Err(PolyError::DivisionByZero)
        );
        assert!(matches!(
            conic.exact_divide(&Poly::one(2)),
            Err(PolyError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = &(&x().pow(3) + &(&y() * &z())) + &c(5);
        let b = &x() + &y();
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(&(&q * &b) + &r, a);
        let lm = b.leading_term().unwrap().0;
        assert!(r.terms().all(|(m, _)| !lm.divides(m)));
    }

    #[test]
    fn derivative_examples() {
        let x2 = Poly::var(2, 0);
        let y2 = Poly::var(2, 1);
        let affine_conic = &(&x2.pow(2) + &y2.pow(2)) + &x2;
        assert_eq!(
            affine_conic.partial_derivative(0).unwrap(),
            &(&Poly::int(2, 2) * &x2) + &Poly::one(2)
        );
        assert!(c(7).partial_derivative(2).unwrap().is_zero());
        assert_eq!(
            x().pow(4).partial_derivative(0).unwrap(),
            &c(4) * &x().pow(3)
        );
        assert_eq!(
            x().partial_derivative(3),
            Err(PolyError::VariableOutOfRange { index: 3, nvars: 3 })
        );
    }

    #[test]
    fn degree_info_examples() {
        let conic = &x().pow(2) + &(&y() * &z());
        assert_eq!(conic.degree_info(), (Some(2), true));
        let affine_conic = &(&x().pow(2) + &y().pow(2)) + &x();
        assert_eq!(affine_conic.degree_info(), (Some(2), false));
        assert_eq!(Poly::zero(3).degree_info(), (None, true));
        assert_eq!(c(3).degree_info(), (Some(0), true));
    }

    #[test]
    fn evaluate_examples() {
        let conic = &x().pow(2) + &(&y() * &z());
        assert_eq!(conic.evaluate(&[rat(1), rat(1), rat(-1)]).unwrap(), rat(0));
        let p = &(&conic + &c(-4)) * &x();
        let p = &p + &c(9);
        assert_eq!(p.evaluate(&[rat(0), rat(0), rat(0)]).unwrap(), rat(9));
        let q = &(&x().pow(2) - &y().pow(2)) * &(&z().pow(3) + &c(1));
        assert_eq!(q.evaluate(&[rat(2), rat(1), rat(1)]).unwrap(), rat(6));
        assert!(q.evaluate(&[rat(1)]).is_err());
    }

    #[test]
    fn printing() {
        let p = &(&(&c(2) * &x()) + &c(1)) * &Poly::one(3);
        assert_eq!(p.to_string(), "2*x + 1");
        let q = &(&y().scale(&ratio(1, 2)) + &(&y() * &x())) - &z().pow(3);
        assert_eq!(q.to_string(), "-z^3 + x*y + 1/2*y");
        assert_eq!(Poly::zero(2).to_string(), "0");
        assert_eq!(Poly::var(4, 3).to_string(), "x3");
    }

    #[test]
    fn normalization_and_units() {
        let p = (&(&x() * &c(-4)) + &c(6)).scale(&ratio(1, 3));
        assert_eq!(p.primitive_normalized(), &(&c(2) * &x()) - &c(3));
        assert_eq!(p.unit_ratio(&(&(&c(2) * &x()) - &c(3))), Some(ratio(-2, 3)));
        assert!(!x().is_associate(&y()));
    }
}
