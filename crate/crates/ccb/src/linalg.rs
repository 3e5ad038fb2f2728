//! Dense exact linear algebra over a [`Field`]: elimination with recorded
//! pivots, linear-system solving, column-space bases. Everything here is
//! exact; `Field::matrix_rank` stays the entry point for plain ranks.

use crate::error::{Error, Result};
use crate::field::Field;

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat<F> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<F>,
}

impl<F: Field> Mat<F> {
    pub fn new(rows: usize, cols: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        Mat { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = F::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn at(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut F {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Mat<F> {
        Mat::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn rank(&self) -> usize {
        F::matrix_rank(self.rows, self.cols, &self.data)
    }

    pub fn mul(&self, rhs: &Mat<F>) -> Mat<F> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        Mat::from_fn(self.rows, rhs.cols, |r, c| {
            let mut acc = F::zero();
            for k in 0..self.cols {
                acc = acc.add(&self.at(r, k).mul(rhs.at(k, c)));
            }
            acc
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }
}

/// Result of full elimination: pivot positions refer to the ORIGINAL matrix,
/// so `pivot_rows x pivot_cols` is an invertible minor and the original
/// columns at `pivot_cols` form a basis of the column space.
#[derive(Debug, Clone)]
pub struct Pivots {
    pub pivot_rows: Vec<usize>,
    pub pivot_cols: Vec<usize>,
}

impl Pivots {
    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }
}

/// Gaussian elimination tracking original row indices through swaps.
/// Chooses the first nonzero entry in each column scan, so results are
/// deterministic for a given input.
pub fn eliminate<F: Field>(m: &Mat<F>) -> Pivots {
    let mut work = m.clone();
    let mut perm: Vec<usize> = (0..m.rows).collect();
    let mut pivot_rows = Vec::new();
    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for col in 0..m.cols {
        let Some(p) = (rank..work.rows).find(|&r| !work.at(r, col).is_zero()) else {
            continue;
        };
        for c in 0..work.cols {
            let a = work.at(rank, c).clone();
            let b = work.at(p, c).clone();
            *work.at_mut(rank, c) = b;
            *work.at_mut(p, c) = a;
        }
        perm.swap(rank, p);
        let inv = work.at(rank, col).inv().expect("pivot is nonzero");
        for r in rank + 1..work.rows {
            if work.at(r, col).is_zero() {
                continue;
            }
            let factor = work.at(r, col).mul(&inv);
            for c in col..work.cols {
                let sub = factor.mul(work.at(rank, c));
                *work.at_mut(r, c) = work.at(r, c).sub(&sub);
            }
        }
        pivot_rows.push(perm[rank]);
        pivot_cols.push(col);
        rank += 1;
        if rank == work.rows {
            break;
        }
    }
    Pivots { pivot_rows, pivot_cols }
}

/// Basis of the column space: the original columns at the pivot indices.
pub fn column_space_basis<F: Field>(m: &Mat<F>) -> (Vec<Vec<F>>, Vec<usize>) {
    let piv = eliminate(m);
    let basis = piv.pivot_cols.iter().map(|&c| m.col(c)).collect();
    (basis, piv.pivot_cols)
}

/// Solve `A X = B` exactly for all columns of B at once. Returns None when
/// any column is inconsistent.
pub fn solve_multi<F: Field>(a: &Mat<F>, b: &Mat<F>) -> Option<Mat<F>> {
    assert_eq!(a.rows, b.rows, "solve shape mismatch");
    let n = a.cols;
    let width = a.cols + b.cols;
    let mut aug = Mat::from_fn(a.rows, width, |r, c| {
        if c < a.cols {
            a.at(r, c).clone()
        } else {
            b.at(r, c - a.cols).clone()
        }
    });
    // Gauss-Jordan restricted to the A block.
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..aug.rows).find(|&r| !aug.at(r, col).is_zero()) else {
            continue;
        };
        for c in 0..width {
            let x = aug.at(rank, c).clone();
            let y = aug.at(p, c).clone();
            *aug.at_mut(rank, c) = y;
            *aug.at_mut(p, c) = x;
        }
        let inv = aug.at(rank, col).inv().expect("pivot is nonzero");
        for c in col..width {
            let v = aug.at(rank, c).mul(&inv);
            *aug.at_mut(rank, c) = v;
        }
        for r in 0..aug.rows {
            if r == rank || aug.at(r, col).is_zero() {
                continue;
            }
            let factor = aug.at(r, col).clone();
            for c in col..width {
                let sub = factor.mul(aug.at(rank, c));
                *aug.at_mut(r, c) = aug.at(r, c).sub(&sub);
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
        if rank == aug.rows {
            break;
        }
    }
    // Rows with zero A-part must have zero B-part, otherwise inconsistent.
    for r in rank..aug.rows {
        if (n..width).any(|c| !aug.at(r, c).is_zero()) {
            return None;
        }
    }
    let mut x = Mat::zeros(n, b.cols);
    for (col, piv) in pivot_of_col.iter().enumerate() {
        if let Some(r) = piv {
            for j in 0..b.cols {
                *x.at_mut(col, j) = aug.at(*r, n + j).clone();
            }
        }
    }
    Some(x)
}

/// Inverse of a square matrix; None when singular.
pub fn invert<F: Field>(a: &Mat<F>) -> Option<Mat<F>> {
    assert_eq!(a.rows, a.cols, "inverse needs a square matrix");
    let x = solve_multi(a, &Mat::identity(a.rows))?;
    let check = a.mul(&x);
    if check == Mat::identity(a.rows) {
        Some(x)
    } else {
        None
    }
}

/// Convenience wrapper returning an invariant error instead of None; used
/// where theory guarantees a system is consistent.
pub fn solve_must<F: Field>(a: &Mat<F>, b: &Mat<F>, what: &str) -> Result<Mat<F>> {
    solve_multi(a, b).ok_or_else(|| Error::invariant(format!("{what}: linear system inconsistent")))
}
