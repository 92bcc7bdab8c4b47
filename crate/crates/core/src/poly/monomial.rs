use std::cmp::Ordering;
use std::fmt;

/// Exponent vector of a monomial in `n` variables.
///
/// Ordered graded-lexicographically: higher total degree is larger, ties are
/// broken lexicographically with the first variable most significant.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Box<[u32]>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: vec![0; nvars].into_boxed_slice(),
        }
    }

    pub fn new(exps: Vec<u32>) -> Self {
        Monomial {
            exps: exps.into_boxed_slice(),
        }
    }

    /// The monomial `x_var^power`.
    pub fn var_power(nvars: usize, var: usize, power: u32) -> Self {
        let mut exps = vec![0; nvars];
        exps[var] = power;
        Monomial::new(exps)
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.exps[var]
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(other.exps.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// `self / other` if `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        debug_assert_eq!(self.nvars(), other.nvars());
        let mut exps = Vec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(other.exps.iter()) {
            exps.push(a.checked_sub(*b)?);
        }
        Some(Monomial::new(exps))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// Derivative of the monomial with respect to `var`: the multiplicity and the
    /// resulting monomial, or `None` when the variable does not occur.
    pub fn derivative(&self, var: usize) -> Option<(u32, Monomial)> {
        let e = self.exps[var];
        if e == 0 {
            return None;
        }
        let mut exps = self.exps.to_vec();
        exps[var] = e - 1;
        Some((e, Monomial::new(exps)))
    }

    /// All monomials of total degree exactly `degree`, in ascending order.
    pub fn all_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut current = vec![0u32; nvars];
        fill(&mut out, &mut current, 0, degree);
        out.sort();
        out
    }

    /// All monomials of total degree at most `degree`, in ascending order.
    pub fn all_up_to_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
        (0..=degree)
            .flat_map(|d| Monomial::all_of_degree(nvars, d))
            .collect()
    }
}

fn fill(out: &mut Vec<Monomial>, current: &mut Vec<u32>, pos: usize, remaining: u32) {
    if current.is_empty() {
        if remaining == 0 {
            out.push(Monomial::new(Vec::new()));
        }
        return;
    }
    if pos == current.len() - 1 {
        current[pos] = remaining;
        out.push(Monomial::new(current.clone()));
        current[pos] = 0;
        return;
    }
    for e in 0..=remaining {
        current[pos] = e;
        fill(out, current, pos + 1, remaining - e);
    }
    current[pos] = 0;
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps)
    }
}
