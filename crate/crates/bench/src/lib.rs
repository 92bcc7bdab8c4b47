//! Inputs shared by the benchmarks in `benches/`.

use logder_core::{parse_poly, Derivation, Poly, PolyMatrix};

fn xyz() -> Vec<String> {
    ["x", "y", "z"].map(String::from).to_vec()
}

fn poly(src: &str) -> Poly {
    parse_poly(src, &xyz()).expect("fixture parses")
}

/// `xyz(x^n - y^n)(x^n - z^n)(y^n - z^n)`.
pub fn reflection_polynomial(n: u32) -> Poly {
    poly(&format!(
        "x*y*z*(x^{n} - y^{n})*(x^{n} - z^{n})*(y^{n} - z^{n})"
    ))
}

/// Euler plus the power sums of degree `n + 1` and `2n + 1`.
pub fn reflection_basis(n: u32) -> Vec<Derivation> {
    [1, n + 1, 2 * n + 1]
        .into_iter()
        .map(|k| {
            Derivation::new(vec![
                poly(&format!("x^{k}")),
                poly(&format!("y^{k}")),
                poly(&format!("z^{k}")),
            ])
            .expect("three components")
        })
        .collect()
}

pub fn column_matrix(ds: &[Derivation]) -> PolyMatrix {
    let cols: Vec<Vec<Poly>> = ds.iter().map(|d| d.coeffs().to_vec()).collect();
    PolyMatrix::from_columns(&cols).expect("equal arity")
}

/// Two polynomials sharing the factor `x^2 + y*z - 1`.
pub fn gcd_pair() -> (Poly, Poly) {
    let common = poly("x^2 + y*z - 1");
    let a = &common * &poly("(x - y + 2*z)^3 + x*y*z");
    let b = &common * &poly("(x + y)^2*(z - 3) + 5");
    (a, b)
}

pub fn affine_conic() -> Poly {
    parse_poly("x^2 + y^2 + x", &["x".into(), "y".into()]).expect("fixture parses")
}
