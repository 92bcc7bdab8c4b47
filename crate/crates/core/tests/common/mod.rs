//! Shared generators and fixtures for the integration tests.
#![allow(dead_code)]

use logder_core::poly::{default_var_names, ratio};
use logder_core::{parse_poly, Derivation, Poly, Rational};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn names(n: usize) -> Vec<String> {
    default_var_names(n)
}

pub fn p(src: &str, n: usize) -> Poly {
    parse_poly(src, &names(n)).unwrap_or_else(|e| panic!("{src}: {e}"))
}

pub fn named(src: &str, vars: &[&str]) -> Poly {
    let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
    parse_poly(src, &vars).unwrap_or_else(|e| panic!("{src}: {e}"))
}

pub fn der(components: &[&str], n: usize) -> Derivation {
    Derivation::new(components.iter().map(|c| p(c, n)).collect()).unwrap()
}

// ---- proptest strategies ----

fn arb_coeff(integral: bool) -> BoxedStrategy<Rational> {
    if integral {
        (-5i64..=5).prop_map(|n| ratio(n, 1)).boxed()
    } else {
        (-6i64..=6, 1i64..=3).prop_map(|(a, b)| ratio(a, b)).boxed()
    }
}

fn arb_poly_with(
    nvars: usize,
    max_deg: u32,
    max_terms: usize,
    integral: bool,
) -> impl Strategy<Value = Poly> {
    let term = (
        prop::collection::vec(0..=max_deg, nvars),
        arb_coeff(integral),
    );
    prop::collection::vec(term, 0..=max_terms).prop_map(move |terms| {
        // clamp total degree so products stay small
        let terms = terms.into_iter().map(|(mut e, c)| {
            while e.iter().sum::<u32>() > max_deg {
                let i = e.iter().position(|&v| v > 0).unwrap();
                e[i] -= 1;
            }
            (e, c)
        });
        Poly::from_terms(nvars, terms)
    })
}

/// Rational coefficients, total degree at most `max_deg`.
pub fn arb_poly(nvars: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    arb_poly_with(nvars, max_deg, max_terms, false)
}

pub fn arb_int_poly(nvars: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    arb_poly_with(nvars, max_deg, max_terms, true)
}

pub fn arb_nonzero_poly(
    nvars: usize,
    max_deg: u32,
    max_terms: usize,
) -> impl Strategy<Value = Poly> {
    arb_poly(nvars, max_deg, max_terms).prop_filter("nonzero", |p| !p.is_zero())
}

/// Homogeneous of degree `deg`, possibly zero.
pub fn arb_homogeneous(nvars: usize, deg: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    let term = (prop::collection::vec(0..=deg, nvars), arb_coeff(false));
    prop::collection::vec(term, 0..=max_terms).prop_map(move |terms| {
        let terms = terms.into_iter().map(|(mut e, c)| {
            // push the exponent vector onto the simplex sum = deg
            let mut s: u32 = e.iter().sum();
            let mut i = 0;
            while s != deg {
                if s > deg && e[i] > 0 {
                    e[i] -= 1;
                    s -= 1;
                } else if s < deg {
                    e[i] += 1;
                    s += 1;
                }
                i = (i + 1) % e.len();
            }
            (e, c)
        });
        Poly::from_terms(nvars, terms)
    })
}

// ---- seeded generators for deterministic loops ----

pub fn random_poly(rng: &mut ChaCha8Rng, nvars: usize, max_deg: u32, terms: usize) -> Poly {
    let mut out = Poly::zero(nvars);
    for _ in 0..terms {
        let mut exps = vec![0u32; nvars];
        let deg = rng.random_range(0..=max_deg);
        for _ in 0..deg {
            exps[rng.random_range(0..nvars)] += 1;
        }
        let c = ratio(rng.random_range(-4..=4), 1);
        out = &out + &Poly::from_terms(nvars, [(exps, c)]);
    }
    out
}

/// Homogeneous of degree `deg` with up to `terms` terms.
pub fn random_homogeneous(rng: &mut ChaCha8Rng, nvars: usize, deg: u32, terms: usize) -> Poly {
    let mut out = Poly::zero(nvars);
    for _ in 0..terms {
        let mut exps = vec![0u32; nvars];
        for _ in 0..deg {
            exps[rng.random_range(0..nvars)] += 1;
        }
        let c = ratio(rng.random_range(-4..=4), rng.random_range(1..=3));
        out = &out + &Poly::from_terms(nvars, [(exps, c)]);
    }
    out
}

pub fn random_matrix(
    rng: &mut ChaCha8Rng,
    size: usize,
    nvars: usize,
    max_deg: u32,
) -> Vec<Vec<Poly>> {
    (0..size)
        .map(|_| {
            (0..size)
                .map(|_| {
                    let terms = rng.random_range(0..=3);
                    random_poly(rng, nvars, max_deg, terms)
                })
                .collect()
        })
        .collect()
}

/// Reference determinant by the permutation expansion.
pub fn leibniz_det(rows: &[Vec<Poly>], nvars: usize) -> Poly {
    use itertools::Itertools;
    let n = rows.len();
    let mut total = Poly::zero(nvars);
    for perm in (0..n).permutations(n) {
        let inversions = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| perm[i] > perm[j])
            .count();
        let mut term = Poly::one(nvars);
        for (i, &j) in perm.iter().enumerate() {
            term = &term * &rows[i][j];
        }
        total = if inversions % 2 == 0 {
            &total + &term
        } else {
            &total - &term
        };
    }
    total
}

/// `Σ_j g_ij δ_j` for each row `i` of `g`.
pub fn combine(g: &[Vec<Poly>], basis: &[Derivation]) -> Vec<Derivation> {
    g.iter()
        .map(|row| {
            let terms: Vec<(Poly, Derivation)> =
                row.iter().cloned().zip(basis.iter().cloned()).collect();
            Derivation::combination(&terms).unwrap()
        })
        .collect()
}

// ---- fixtures: free divisors with certified bases ----

pub struct FreeInstance {
    pub name: &'static str,
    pub f: Poly,
    pub basis: Vec<Derivation>,
}

pub fn affine_conic() -> FreeInstance {
    FreeInstance {
        name: "affine conic",
        f: p("x^2 + y^2 + x", 2),
        basis: vec![
            der(&["2*y*(2*x + 1)", "4*y^2 - 1"], 2),
            der(&["x*(x + 1)", "(1/2)*y + y*x"], 2),
        ],
    }
}

pub fn parabola() -> FreeInstance {
    FreeInstance {
        name: "parabola",
        f: p("y + x^2", 2),
        basis: vec![der(&["1", "-2*x"], 2), der(&["(1/2)*x", "y"], 2)],
    }
}

pub fn conic_tangent() -> FreeInstance {
    FreeInstance {
        name: "conic and tangent line",
        f: p("z*(x^2 + y*z)", 3),
        basis: vec![
            der(&["x", "y", "z"], 3),
            der(&["z", "-2*x", "0"], 3),
            der(&["x", "4*y", "-2*z"], 3),
        ],
    }
}

/// `xyz(x^n - y^n)(x^n - z^n)(y^n - z^n)` with its power-sum basis.
pub fn reflection(n: u32) -> FreeInstance {
    let f = p(
        &format!("x*y*z*(x^{n} - y^{n})*(x^{n} - z^{n})*(y^{n} - z^{n})"),
        3,
    );
    let power = |k: u32| {
        der(
            &[&format!("x^{k}"), &format!("y^{k}"), &format!("z^{k}")],
            3,
        )
    };
    FreeInstance {
        name: "reflection arrangement",
        f,
        basis: vec![power(1), power(n + 1), power(2 * n + 1)],
    }
}

pub fn free_instances() -> Vec<FreeInstance> {
    vec![
        affine_conic(),
        parabola(),
        conic_tangent(),
        reflection(1),
        reflection(2),
    ]
}
