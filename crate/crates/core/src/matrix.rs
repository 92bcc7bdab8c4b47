//! Matrices of polynomials whose columns are derivations.

use itertools::Itertools;
use thiserror::Error;

use crate::poly::{Poly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("determinant needs a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("maximal minors need cols <= rows, got {rows}x{cols}")]
    TooManyColumns { rows: usize, cols: usize },
    #[error("columns have inconsistent lengths")]
    Ragged,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Row-major matrix of polynomials over a common ring.
///
/// Column `j` holds the coefficient vector of the `j`-th derivation: entry
/// `(i, j)` is the coefficient of `∂_i` in `δ_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

/// Sizes below this use Laplace expansion instead of fraction-free elimination.
const BAREISS_THRESHOLD: usize = 4;

impl PolyMatrix {
    pub fn from_rows(rows: Vec<Vec<Poly>>) -> Result<Self, MatrixError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(MatrixError::Ragged);
        }
        let entries: Vec<Poly> = rows.into_iter().flatten().collect();
        check_common_arity(&entries)?;
        Ok(PolyMatrix {
            rows: nrows,
            cols: ncols,
            entries,
        })
    }

    pub fn from_columns(columns: &[Vec<Poly>]) -> Result<Self, MatrixError> {
        let ncols = columns.len();
        let nrows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != nrows) {
            return Err(MatrixError::Ragged);
        }
        let mut entries = Vec::with_capacity(nrows * ncols);
        for i in 0..nrows {
            for col in columns {
                entries.push(col[i].clone());
            }
        }
        check_common_arity(&entries)?;
        Ok(PolyMatrix {
            rows: nrows,
            cols: ncols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &Poly {
        &self.entries[row * self.cols + col]
    }

    pub fn column(&self, col: usize) -> Vec<Poly> {
        (0..self.rows).map(|i| self.get(i, col).clone()).collect()
    }

    fn row_vecs(&self) -> Vec<Vec<Poly>> {
        self.entries
            .chunks(self.cols.max(1))
            .map(<[Poly]>::to_vec)
            .collect()
    }

    /// The square submatrix on the given rows, all columns kept.
    pub fn select_rows(&self, rows: &[usize]) -> PolyMatrix {
        let mut entries = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            entries.extend_from_slice(&self.entries[i * self.cols..(i + 1) * self.cols]);
        }
        PolyMatrix {
            rows: rows.len(),
            cols: self.cols,
            entries,
        }
    }

    /// Replaces column `col` with `values`.
    pub fn with_column(&self, col: usize, values: &[Poly]) -> PolyMatrix {
        let mut out = self.clone();
        for (i, v) in values.iter().enumerate() {
            out.entries[i * self.cols + col] = v.clone();
        }
        out
    }

    fn check_square(&self) -> Result<usize, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(self.rows)
    }

    fn nvars(&self) -> usize {
        self.entries.first().map_or(0, Poly::nvars)
    }

    /// Exact determinant: Laplace expansion below 4x4, Bareiss elimination above.
    pub fn determinant(&self) -> Result<Poly, MatrixError> {
        let n = self.check_square()?;
        if n < BAREISS_THRESHOLD {
            Ok(laplace(&self.row_vecs(), self.nvars()))
        } else {
            self.determinant_bareiss()
        }
    }

    /// Laplace expansion along the first row, at any size.
    pub fn determinant_cofactor(&self) -> Result<Poly, MatrixError> {
        self.check_square()?;
        Ok(laplace(&self.row_vecs(), self.nvars()))
    }

    /// Fraction-free Gaussian elimination. Every division is exact by
    /// Sylvester's identity, so no fractions of polynomials ever appear.
    pub fn determinant_bareiss(&self) -> Result<Poly, MatrixError> {
        let n = self.check_square()?;
        let nvars = self.nvars();
        if n == 0 {
            return Ok(Poly::one(nvars));
        }
        let mut a = self.row_vecs();
        let mut negate = false;
        let mut prev = Poly::one(nvars);
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        negate = !negate;
                    }
                    None => return Ok(Poly::zero(nvars)),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num.exact_divide(&prev)?;
                }
                a[i][k] = Poly::zero(nvars);
            }
            prev = a[k][k].clone();
        }
        let det = a[n - 1][n - 1].clone();
        Ok(if negate { -det } else { det })
    }

    /// Row subsets of size `cols`, in lexicographic order.
    pub fn minor_row_subsets(&self) -> Vec<Vec<usize>> {
        (0..self.rows).combinations(self.cols).collect()
    }

    /// All maximal minors, indexed like [`PolyMatrix::minor_row_subsets`].
    pub fn maximal_minors(&self) -> Result<Vec<Poly>, MatrixError> {
        if self.cols > self.rows {
            return Err(MatrixError::TooManyColumns {
                rows: self.rows,
                cols: self.cols,
            });
        }
        self.minor_row_subsets()
            .iter()
            .map(|rows| self.select_rows(rows).determinant())
            .collect()
    }

    /// Full column rank over the fraction field, i.e. some maximal minor is nonzero.
    pub fn columns_independent(&self) -> bool {
        if self.cols > self.rows {
            return false;
        }
        self.minor_row_subsets().iter().any(|rows| {
            self.select_rows(rows)
                .determinant()
                .is_ok_and(|d| !d.is_zero())
        })
    }
}

fn check_common_arity(entries: &[Poly]) -> Result<(), MatrixError> {
    if let Some(first) = entries.first() {
        for p in entries {
            if p.nvars() != first.nvars() {
                return Err(PolyError::ArityMismatch {
                    left: first.nvars(),
                    right: p.nvars(),
                }
                .into());
            }
        }
    }
    Ok(())
}

fn laplace(a: &[Vec<Poly>], nvars: usize) -> Poly {
    let n = a.len();
    match n {
        0 => Poly::one(nvars),
        1 => a[0][0].clone(),
        2 => &(&a[0][0] * &a[1][1]) - &(&a[0][1] * &a[1][0]),
        _ => {
            let mut det = Poly::zero(nvars);
            for (j, pivot) in a[0].iter().enumerate() {
                if pivot.is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Poly>> = a[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let term = pivot * &laplace(&minor, nvars);
                det = if j % 2 == 0 {
                    &det + &term
                } else {
                    &det - &term
                };
            }
            det
        }
    }
}
