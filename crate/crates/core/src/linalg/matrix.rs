use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Dense square complex matrix stored row-major.
///
/// Products skip zero entries of the left factor, so the many block-sparse
/// operators in this crate (permutations, number-conserving generators)
/// multiply in time proportional to their nonzero count.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries, checking squareness and finiteness.
    pub fn from_row_major(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::NotSquare {
                len: entries.len(),
                expected: dim * dim,
            });
        }
        if entries.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, entries })
    }

    /// Builds a matrix from nested rows of real numbers.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        let entries = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| C64::new(x, 0.0)))
            .collect();
        Self::from_row_major(dim, entries)
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self { dim, entries }
    }

    pub fn diagonal(diag: &[C64]) -> Self {
        let dim = diag.len();
        let mut m = Self::zeros(dim);
        for (i, &z) in diag.iter().enumerate() {
            m.entries[i * dim + i] = z;
        }
        m
    }

    /// Permutation matrix with a 1 at `(image(j), j)` for every column `j`.
    pub fn permutation(dim: usize, image: impl Fn(usize) -> usize) -> Self {
        let mut m = Self::zeros(dim);
        for j in 0..dim {
            let i = image(j);
            m.entries[i * dim + j] = ONE;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|z| z.is_finite())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            let out_row = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == ZERO {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(Self {
            dim: n,
            entries: out,
        })
    }

    /// Matrix power by binary exponentiation; `pow(0)` is the identity.
    pub fn pow(&self, mut exp: u32) -> Self {
        let mut result = Self::identity(self.dim);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                result = &result * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        Self::from_fn(n, |i, j| self.entries[j * n + i].conj())
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        Self::from_fn(n, |i, j| self.entries[j * n + i])
    }

    /// Kronecker product; `|a>⊗|b>` maps to index `a * other.dim + b`.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        let dim = n * m;
        let mut out = vec![ZERO; dim * dim];
        for a in 0..n {
            for c in 0..n {
                let x = self.entries[a * n + c];
                if x == ZERO {
                    continue;
                }
                for b in 0..m {
                    for d in 0..m {
                        out[(a * m + b) * dim + c * m + d] = x * other.entries[b * m + d];
                    }
                }
            }
        }
        Self { dim, entries: out }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|&z| z * s).collect(),
        }
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.entries[i * self.dim + i]).sum()
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-norm of `self - other`; infinite on a dimension mismatch.
    pub fn max_norm_diff(&self, other: &Self) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max-norm of `self - other` over rows and columns drawn from `indices`.
    pub fn max_norm_diff_on(&self, other: &Self, indices: &[usize]) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for &i in indices {
            for &j in indices {
                worst = worst.max((self.entries[i * n + j] - other.entries[i * n + j]).norm());
            }
        }
        worst
    }

    pub fn one_norm(&self) -> f64 {
        let n = self.dim;
        (0..n)
            .map(|j| (0..n).map(|i| self.entries[i * n + j].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Max-norm of `A†A - I`.
    pub fn unitarity_deviation(&self) -> f64 {
        (&self.adjoint() * self).max_norm_diff(&Self::identity(self.dim))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    /// True when every row and column holds exactly one entry equal to 1 and
    /// all other entries are exactly 0.
    pub fn is_permutation(&self) -> bool {
        let n = self.dim;
        let mut col_hits = vec![0usize; n];
        for i in 0..n {
            let mut row_hits = 0;
            for (hits, &z) in col_hits.iter_mut().zip(self.row(i)) {
                if z == ONE {
                    row_hits += 1;
                    *hits += 1;
                } else if z != ZERO {
                    return false;
                }
            }
            if row_hits != 1 {
                return false;
            }
        }
        col_hits.iter().all(|&c| c == 1)
    }

    pub fn matvec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: v.len(),
            });
        }
        Ok((0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Solves `self * X = rhs` by LU with partial pivoting.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        let n = self.dim;
        let mut a = self.entries.clone();
        let mut b = rhs.entries.clone();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&p, &q| a[p * n + col].norm().total_cmp(&a[q * n + col].norm()))
                .unwrap_or(col);
            let pivot_val = a[pivot * n + col];
            if pivot_val.norm() == 0.0 {
                return Err(Error::Singular);
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                    b.swap(pivot * n + j, col * n + j);
                }
            }
            for r in (col + 1)..n {
                let factor = a[r * n + col] / pivot_val;
                if factor == ZERO {
                    continue;
                }
                for j in col..n {
                    let v = a[col * n + j];
                    if v != ZERO {
                        a[r * n + j] -= factor * v;
                    }
                }
                for j in 0..n {
                    let v = b[col * n + j];
                    if v != ZERO {
                        b[r * n + j] -= factor * v;
                    }
                }
            }
        }
        for col in (0..n).rev() {
            let diag = a[col * n + col];
            for j in 0..n {
                b[col * n + j] /= diag;
            }
            for r in 0..col {
                let factor = a[r * n + col];
                if factor == ZERO {
                    continue;
                }
                for j in 0..n {
                    let v = b[col * n + j];
                    if v != ZERO {
                        b[r * n + j] -= factor * v;
                    }
                }
            }
        }
        Ok(Self { dim: n, entries: b })
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.entries[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.entries[i * self.dim + j]
    }
}

/// Panics on a dimension mismatch; use [`ComplexMatrix::matmul`] for a fallible product.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: Self) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix product dimension mismatch")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: Self) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: Self) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix difference dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = self.row(i).iter().map(|z| format!("{z:.4}")).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

pub fn tensor_op(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.matmul(b)
}

pub fn adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    a.adjoint()
}

pub fn is_unitary(a: &ComplexMatrix, tol: f64) -> bool {
    a.is_unitary(tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    #[test]
    fn identity_products() {
        let a = ComplexMatrix::from_fn(3, |i, j| C64::new(i as f64, j as f64 - 1.0));
        assert_eq!(&a * &ComplexMatrix::identity(3), a);
        assert_eq!(&ComplexMatrix::identity(3) * &a, a);
    }

    #[test]
    fn sigma_x_is_an_involution() {
        assert_eq!(&sigma_x() * &sigma_x(), ComplexMatrix::identity(2));
    }

    #[test]
    fn cnot_squares_to_identity() {
        let cx = ComplexMatrix::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap();
        assert_eq!(&cx * &cx, ComplexMatrix::identity(4));
    }

    #[test]
    fn matmul_rejects_mismatched_dims() {
        let err = ComplexMatrix::identity(2)
            .matmul(&ComplexMatrix::identity(3))
            .unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { left: 2, right: 3 });
    }

    #[test]
    fn kron_ordering() {
        assert_eq!(
            tensor_op(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2)),
            ComplexMatrix::identity(4)
        );
        // σ₁ ⊗ 1 sends index 0 (|0,0>) to index 2 (|1,0>)
        let x1 = sigma_x().kron(&ComplexMatrix::identity(2));
        let out = x1.matvec(&[ONE, ZERO, ZERO, ZERO]).unwrap();
        assert_eq!(out, vec![ZERO, ZERO, ONE, ZERO]);
    }

    #[test]
    fn from_row_major_validates() {
        assert!(matches!(
            ComplexMatrix::from_row_major(2, vec![ONE; 3]),
            Err(Error::NotSquare { .. })
        ));
        assert_eq!(
            ComplexMatrix::from_row_major(1, vec![C64::new(f64::NAN, 0.0)]),
            Err(Error::NonFinite)
        );
    }

    #[test]
    fn permutation_detection() {
        assert!(sigma_x().is_permutation());
        assert!(!ComplexMatrix::identity(2)
            .scale(C64::new(0.0, 1.0))
            .is_permutation());
        assert!(!ComplexMatrix::zeros(2).is_permutation());
    }

    #[test]
    fn solve_recovers_rhs() {
        let a = ComplexMatrix::from_fn(4, |i, j| {
            C64::new(if i == j { 4.0 } else { 0.5 }, (i as f64 - j as f64) * 0.25)
        });
        let x = ComplexMatrix::from_fn(4, |i, j| C64::new(i as f64 + 1.0, -(j as f64)));
        let b = &a * &x;
        assert!(a.solve(&b).unwrap().max_norm_diff(&x) < 1e-12);
        // needs a row swap
        let p = sigma_x();
        assert!(
            p.solve(&ComplexMatrix::identity(2))
                .unwrap()
                .max_norm_diff(&p)
                == 0.0
        );
    }

    #[test]
    fn solve_detects_singularity() {
        assert_eq!(
            ComplexMatrix::zeros(2).solve(&ComplexMatrix::identity(2)),
            Err(Error::Singular)
        );
    }

    #[test]
    fn pow_matches_repeated_product() {
        let a = ComplexMatrix::from_fn(3, |i, j| C64::new((i + 2 * j) as f64 * 0.1, 0.0));
        let mut expected = ComplexMatrix::identity(3);
        for _ in 0..5 {
            expected = &expected * &a;
        }
        assert!(a.pow(5).max_norm_diff(&expected) < 1e-12);
        assert_eq!(a.pow(0), ComplexMatrix::identity(3));
    }
}
