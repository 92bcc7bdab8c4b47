//! Multivariate gcd over the rationals.
//!
//! The polynomials are viewed as univariate in one variable with coefficients
//! in the ring of the remaining variables. Contents are handled recursively and
//! the primitive parts go through a subresultant remainder sequence, so every
//! division performed along the way is exact.

use super::{Monomial, Poly, PolyError};

/// Dense univariate polynomial with multivariate coefficients, low degree first.
/// Never has a trailing zero coefficient.
type Univariate = Vec<Poly>;

impl Poly {
    /// Greatest common divisor, normalized to integer coefficients with content 1
    /// and a positive leading coefficient.
    pub fn gcd(&self, other: &Poly) -> Result<Poly, PolyError> {
        super::check_arity(self.nvars, other.nvars)?;
        if self.is_zero() && other.is_zero() {
            return Err(PolyError::BothZero);
        }
        let g = gcd_rec(self, other).primitive_normalized();
        assert!(
            self.is_zero() || self.exact_divide(&g).is_ok(),
            "gcd does not divide its first argument"
        );
        assert!(
            other.is_zero() || other.exact_divide(&g).is_ok(),
            "gcd does not divide its second argument"
        );
        Ok(g)
    }

    /// Gcd of a list of polynomials; zero entries are ignored. `None` if all are zero.
    pub fn gcd_all<'a, I>(polys: I) -> Result<Option<Poly>, PolyError>
    where
        I: IntoIterator<Item = &'a Poly>,
    {
        let mut acc: Option<Poly> = None;
        for p in polys {
            if p.is_zero() {
                continue;
            }
            acc = Some(match acc {
                None => p.primitive_normalized(),
                Some(g) if g.is_one() => return Ok(Some(g)),
                Some(g) => g.gcd(p)?,
            });
        }
        Ok(acc)
    }
}

fn gcd_rec(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(a.nvars);
    }
    let var = (0..a.nvars)
        .find(|&v| a.involves(v) || b.involves(v))
        .expect("nonconstant polynomial involves some variable");

    let ua = to_univariate(a, var);
    let ub = to_univariate(b, var);
    let ca = content(&ua);
    let cb = content(&ub);
    let c = gcd_rec(&ca, &cb);
    let pa = divide_coefficients(&ua, &ca);
    let pb = divide_coefficients(&ub, &cb);
    let g = subresultant_gcd(pa, pb);
    &c * &from_univariate(&g, var)
}

fn to_univariate(p: &Poly, var: usize) -> Univariate {
    let mut coeffs = vec![Poly::zero(p.nvars); p.degree_in(var) as usize + 1];
    for (m, c) in &p.terms {
        let e = m.exponent(var) as usize;
        let mut exps = m.exponents().to_vec();
        exps[var] = 0;
        coeffs[e].add_term(Monomial::new(exps), c.clone());
    }
    trim(&mut coeffs);
    coeffs
}

fn from_univariate(u: &[Poly], var: usize) -> Poly {
    let nvars = u.first().map_or(0, Poly::nvars);
    let mut out = Poly::zero(nvars);
    for (e, c) in u.iter().enumerate() {
        let shift = Monomial::var_power(nvars, var, e as u32);
        out.add_scaled_shifted(c, &shift, &num_traits::One::one());
    }
    out
}

fn trim(u: &mut Univariate) {
    while u.last().is_some_and(Poly::is_zero) {
        u.pop();
    }
}

fn content(u: &[Poly]) -> Poly {
    let mut acc = Poly::zero(u[0].nvars);
    for c in u {
        acc = gcd_rec(&acc, c);
        if acc.is_constant() && !acc.is_zero() {
            return Poly::one(acc.nvars);
        }
    }
    acc
}

fn divide_coefficients(u: &[Poly], d: &Poly) -> Univariate {
    u.iter()
        .map(|c| {
            c.exact_divide(d)
                .expect("content divides every coefficient")
        })
        .collect()
}

fn degree(u: &[Poly]) -> usize {
    u.len() - 1
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
fn pseudo_remainder(a: &[Poly], b: &[Poly]) -> Univariate {
    let db = degree(b);
    let lb = b.last().unwrap();
    let mut r: Univariate = a.to_vec();
    let mut remaining = degree(a) + 1 - db;
    while !r.is_empty() && r.len() > db {
        let dr = degree(&r);
        let lr = r.last().unwrap().clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] = &r[i + shift] - &(&lr * bc);
        }
        trim(&mut r);
        remaining -= 1;
    }
    if remaining > 0 && !r.is_empty() {
        let factor = lb.pow(remaining as u32);
        for c in r.iter_mut() {
            *c = &*c * &factor;
        }
    }
    r
}

/// Gcd of two primitive univariate polynomials, returned primitive.
fn subresultant_gcd(mut a: Univariate, mut b: Univariate) -> Univariate {
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    let nvars = a[0].nvars;
    if b.is_empty() {
        return a;
    }
    let mut g = Poly::one(nvars);
    let mut h = Poly::one(nvars);
    loop {
        let delta = degree(&a) - degree(&b);
        let r = pseudo_remainder(&a, &b);
        if r.is_empty() {
            break;
        }
        if r.len() == 1 {
            return vec![Poly::one(nvars)];
        }
        let divisor = &g * &h.pow(delta as u32);
        a = std::mem::replace(&mut b, divide_coefficients(&r, &divisor));
        g = a.last().unwrap().clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => g
                .pow(delta as u32)
                .exact_divide(&h.pow(delta as u32 - 1))
                .expect("subresultant h update is exact"),
        };
    }
    let c = content(&b);
    divide_coefficients(&b, &c)
}
