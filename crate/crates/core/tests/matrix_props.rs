mod common;

use common::*;
use logder_core::{MatrixError, Poly, PolyMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn matrix(rows: &[Vec<Poly>]) -> PolyMatrix {
    PolyMatrix::from_rows(rows.to_vec()).unwrap()
}

#[test]
fn bareiss_matches_permutation_expansion() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xde7);
    for case in 0..150 {
        let size = 1 + case % 4;
        let rows = random_matrix(&mut rng, size, 3, 2);
        let m = matrix(&rows);
        let reference = leibniz_det(&rows, 3);
        assert_eq!(m.determinant_bareiss().unwrap(), reference, "case {case}");
        assert_eq!(m.determinant_cofactor().unwrap(), reference, "case {case}");
        assert_eq!(m.determinant().unwrap(), reference, "case {case}");
    }
}

#[test]
fn five_by_five_dispatch_agrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let rows = random_matrix(&mut rng, 5, 2, 1);
        let m = matrix(&rows);
        assert_eq!(m.determinant().unwrap(), leibniz_det(&rows, 2));
    }
}

#[test]
fn alternating_columns() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa17);
    for _ in 0..50 {
        let size = rng.random_range(2..=4);
        let rows = random_matrix(&mut rng, size, 2, 2);
        let det = matrix(&rows).determinant().unwrap();
        let (i, j) = (0, rng.random_range(1..size));

        let swapped: Vec<Vec<Poly>> = rows
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.swap(i, j);
                r
            })
            .collect();
        assert_eq!(matrix(&swapped).determinant().unwrap(), -&det);

        let duplicated: Vec<Vec<Poly>> = rows
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r[j] = r[i].clone();
                r
            })
            .collect();
        assert!(matrix(&duplicated).determinant().unwrap().is_zero());
    }
}

#[test]
fn triangular_is_diagonal_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e1);
    for _ in 0..50 {
        let size = rng.random_range(1..=5);
        let mut rows = random_matrix(&mut rng, size, 3, 2);
        let mut diag = Poly::one(3);
        for (i, row) in rows.iter_mut().enumerate() {
            for entry in row.iter_mut().take(i) {
                *entry = Poly::zero(3);
            }
            diag = &diag * &row[i];
        }
        assert_eq!(matrix(&rows).determinant().unwrap(), diag);
    }
}

#[test]
fn square_determinant_is_the_only_maximal_minor() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let rows = random_matrix(&mut rng, 3, 2, 2);
    let m = matrix(&rows);
    assert_eq!(m.maximal_minors().unwrap(), vec![m.determinant().unwrap()]);
}

#[test]
fn minors_follow_lexicographic_row_subsets() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let rows = random_matrix(&mut rng, 4, 2, 2);
    let tall: Vec<Vec<Poly>> = rows.iter().map(|r| r[..2].to_vec()).collect();
    let m = matrix(&tall);
    let subsets = m.minor_row_subsets();
    assert_eq!(
        subsets,
        vec![
            vec![0, 1],
            vec![0, 2],
            vec![0, 3],
            vec![1, 2],
            vec![1, 3],
            vec![2, 3]
        ]
    );
    let minors = m.maximal_minors().unwrap();
    for (s, minor) in subsets.iter().zip(&minors) {
        let sub: Vec<Vec<Poly>> = s.iter().map(|&r| tall[r].clone()).collect();
        assert_eq!(&leibniz_det(&sub, 2), minor);
    }
}

#[test]
fn independence() {
    let ex = vec![
        vec![Poly::one(2), Poly::zero(2)],
        vec![Poly::zero(2), Poly::one(2)],
    ];
    assert!(matrix(&ex).columns_independent());
    let d = der(&["x*y", "y^2 - 1"], 2);
    let cols = vec![
        d.coeffs().to_vec(),
        d.scale(&logder_core::poly::rat(2)).coeffs().to_vec(),
    ];
    assert!(!PolyMatrix::from_columns(&cols)
        .unwrap()
        .columns_independent());
    let g = affine_conic();
    let cols: Vec<Vec<Poly>> = g.basis.iter().map(|d| d.coeffs().to_vec()).collect();
    assert!(PolyMatrix::from_columns(&cols)
        .unwrap()
        .columns_independent());
}

#[test]
fn shape_errors() {
    let wide = PolyMatrix::from_rows(vec![vec![Poly::one(1), Poly::one(1)]]).unwrap();
    assert!(matches!(
        wide.determinant(),
        Err(MatrixError::NotSquare { .. })
    ));
    assert!(matches!(
        wide.maximal_minors(),
        Err(MatrixError::TooManyColumns { .. })
    ));
    assert!(matches!(
        PolyMatrix::from_rows(vec![vec![Poly::one(1)], vec![]]),
        Err(MatrixError::Ragged)
    ));
}
