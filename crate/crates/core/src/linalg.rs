//! Dense real matrices sized for spectral-coefficient work.
//!
//! Storage is row-major: entry `(i, j)` lives at `entries[i * cols + j]`.
//! Vectorization follows the column-stacking convention
//! `vec(X)[j * rows + i] = X[i, j]`, so `vec(A X B) = (B^T kron A) vec(X)`;
//! the solver's assembly depends on this choice.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::{cast, Real};

/// Cap on the entry count of any dense product or Kronecker result.
pub const MAX_DENSE_ENTRIES: usize = 216 * 216 * 216;

/// Dense real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            entries: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from nested rows; all rows must share one length.
    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        assert!(!rows.is_empty(), "at least one row required");
        let cols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&v| v * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "add: shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "sub: shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul: inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = out[(i, j)] + aik * other[(k, j)];
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn matvec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "matvec: length mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (&a, &x)| acc + a * x)
            })
            .collect()
    }

    /// Row-vector-matrix product `v^T A`.
    pub fn vecmat(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.rows, v.len(), "vecmat: length mismatch");
        let mut out = vec![T::zero(); self.cols];
        for (i, &vi) in v.iter().enumerate() {
            if vi == T::zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = *o + vi * self[(i, j)];
            }
        }
        out
    }

    /// Maximum absolute entry.
    pub fn max_abs(&self) -> T {
        self.entries
            .iter()
            .fold(T::zero(), |acc, &v| acc.max(v.abs()))
    }

    /// Infinity norm (maximum absolute row sum).
    pub fn inf_norm(&self) -> T {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .fold(T::zero(), |acc, &v| acc + v.abs())
            })
            .fold(T::zero(), |acc, s| acc.max(s))
    }

    /// One norm (maximum absolute column sum).
    pub fn one_norm(&self) -> T {
        let mut sums = vec![T::zero(); self.cols];
        for i in 0..self.rows {
            for (j, s) in sums.iter_mut().enumerate() {
                *s = *s + self[(i, j)].abs();
            }
        }
        sums.into_iter().fold(T::zero(), |acc, s| acc.max(s))
    }

    /// Column-stacked vectorization.
    pub fn vec_cols(&self) -> Vec<T> {
        let mut v = Vec::with_capacity(self.rows * self.cols);
        for j in 0..self.cols {
            for i in 0..self.rows {
                v.push(self[(i, j)]);
            }
        }
        v
    }

    /// Inverse of [`Matrix::vec_cols`] for a `rows x cols` target.
    pub fn from_vec_cols(v: &[T], rows: usize, cols: usize) -> Self {
        assert_eq!(v.len(), rows * cols, "from_vec_cols: length mismatch");
        Self::from_fn(rows, cols, |i, j| v[j * rows + i])
    }

    /// Kronecker product: `(A kron B)[(i p + k), (j q + l)] = A[i,j] B[k,l]`
    /// for `B` of shape `p x q`.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        if rows.saturating_mul(cols) > MAX_DENSE_ENTRIES {
            return Err(Error::SizeCap {
                op: "kron",
                rows,
                cols,
            });
        }
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let aij = self[(i, j)];
                if aij == T::zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = aij * other[(k, l)];
                    }
                }
            }
        }
        Ok(out)
    }

    /// LU factorization with partial pivoting.
    pub fn lu(&self) -> Result<LuFactors<T>> {
        LuFactors::new(self)
    }

    /// Inverse via LU solves against identity columns.
    pub fn inverse(&self) -> Result<Self> {
        let lu = self.lu()?;
        let n = self.rows;
        let mut inv = Self::zeros(n, n);
        for j in 0..n {
            let mut e = vec![T::zero(); n];
            e[j] = T::one();
            let col = lu.solve(&e)?;
            for (i, &v) in col.iter().enumerate() {
                inv[(i, j)] = v;
            }
        }
        Ok(inv)
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

/// LU factorization with partial pivoting, reusable across right-hand sides.
#[derive(Debug, Clone)]
pub struct LuFactors<T> {
    lu: Matrix<T>,
    perm: Vec<usize>,
    /// |smallest pivot| / |largest pivot|; a cheap conditioning indicator.
    cond_indicator: T,
}

impl<T: Real> LuFactors<T> {
    fn new(a: &Matrix<T>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Shape {
                op: "lu",
                msg: format!("matrix is {} x {}, expected square", a.rows(), a.cols()),
            });
        }
        if a.entries().iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain {
                op: "lu",
                msg: "non-finite entry admitted into factorization".into(),
            });
        }
        let n = a.rows();
        let norm = a.inf_norm();
        let threshold = cast::<T>(1e-14) * norm;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut min_pivot = T::infinity();
        let mut max_pivot = T::zero();

        for k in 0..n {
            let mut pivot_row = k;
            let mut pivot_val = lu[(k, k)].abs();
            for i in (k + 1)..n {
                let v = lu[(i, k)].abs();
                if v > pivot_val {
                    pivot_val = v;
                    pivot_row = i;
                }
            }
            if pivot_val < threshold || pivot_val == T::zero() {
                return Err(Error::Singular {
                    op: "lu",
                    pivot_ratio: (pivot_val / norm.max(T::min_positive_value()))
                        .to_f64()
                        .unwrap_or(0.0),
                    cond_indicator: (pivot_val / max_pivot.max(T::min_positive_value()))
                        .to_f64()
                        .unwrap_or(0.0),
                });
            }
            if pivot_row != k {
                perm.swap(k, pivot_row);
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(pivot_row, j)];
                    lu[(pivot_row, j)] = tmp;
                }
            }
            min_pivot = min_pivot.min(pivot_val);
            max_pivot = max_pivot.max(pivot_val);
            let pivot = lu[(k, k)];
            for i in (k + 1)..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                for j in (k + 1)..n {
                    lu[(i, j)] = lu[(i, j)] - factor * lu[(k, j)];
                }
            }
        }
        Ok(Self {
            lu,
            perm,
            cond_indicator: min_pivot / max_pivot,
        })
    }

    pub fn n(&self) -> usize {
        self.lu.rows()
    }

    /// |smallest pivot| / |largest pivot|.
    pub fn cond_indicator(&self) -> T {
        self.cond_indicator
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        let n = self.n();
        if b.len() != n {
            return Err(Error::Shape {
                op: "lu_solve",
                msg: format!("rhs length {} does not match n = {n}", b.len()),
            });
        }
        // Forward substitution on the permuted rhs (unit lower factor).
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            let mut acc = x[i];
            for (j, &xj) in x[..i].iter().enumerate() {
                acc = acc - self.lu[(i, j)] * xj;
            }
            x[i] = acc;
        }
        // Back substitution.
        for i in (0..n).rev() {
            let mut acc = x[i];
            for (offset, &xj) in x[i + 1..].iter().enumerate() {
                acc = acc - self.lu[(i, i + 1 + offset)] * xj;
            }
            x[i] = acc / self.lu[(i, i)];
        }
        Ok(x)
    }
}

/// One-shot linear solve `A x = b` with partial pivoting.
pub fn lu_solve<T: Real>(a: &Matrix<T>, b: &[T]) -> Result<Vec<T>> {
    a.lu()?.solve(b)
}

/// Matrix exponential `exp(s A)` by Pade approximation with scaling and
/// squaring (Higham's degree/theta schedule). Intended for small matrices;
/// the adjoint-representation computations use n = 5.
pub fn expm<T: Real>(a: &Matrix<T>, s: T) -> Matrix<T> {
    assert!(a.is_square(), "expm: matrix must be square");
    assert!(a.rows() <= 16, "expm: supported sizes are n <= 16");
    let scaled = a.scale(s);
    let norm = scaled.one_norm();

    let (numer_deg, squarings) = if norm <= cast(1.495585217958292e-2) {
        (3, 0u32)
    } else if norm <= cast(2.539398330063230e-1) {
        (5, 0)
    } else if norm <= cast(9.504178996162932e-1) {
        (7, 0)
    } else if norm <= cast(2.097847961257068) {
        (9, 0)
    } else {
        let max_norm = 5.371920351148152;
        let k = (norm.to_f64().unwrap_or(f64::MAX) / max_norm).log2().ceil();
        (13, if k > 0.0 { k as u32 } else { 0 })
    };

    let work = if squarings > 0 {
        scaled.scale(cast::<T>(0.5).powi(squarings as i32))
    } else {
        scaled
    };
    let (u, v) = pade_uv(&work, numer_deg);
    // Pade approximant is (V + U) / (V - U).
    let numer = v.add(&u);
    let denom = v.sub(&u);
    let lu = denom
        .lu()
        .expect("expm: Pade denominator is well conditioned in the supported domain");
    let n = work.rows();
    let mut result = Matrix::zeros(n, n);
    for j in 0..n {
        let col: Vec<T> = (0..n).map(|i| numer[(i, j)]).collect();
        let x = lu.solve(&col).expect("expm: solve");
        for i in 0..n {
            result[(i, j)] = x[i];
        }
    }
    for _ in 0..squarings {
        result = result.matmul(&result);
    }
    result
}

fn pade_uv<T: Real>(a: &Matrix<T>, degree: usize) -> (Matrix<T>, Matrix<T>) {
    // Coefficients of the [m/m] Pade approximant to exp.
    const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
    const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
    const B7: [f64; 8] = [
        17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
    ];
    const B9: [f64; 10] = [
        17643225600.0,
        8821612800.0,
        2075673600.0,
        302702400.0,
        30270240.0,
        2162160.0,
        110880.0,
        3960.0,
        90.0,
        1.0,
    ];
    const B13: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    let b: &[f64] = match degree {
        3 => &B3,
        5 => &B5,
        7 => &B7,
        9 => &B9,
        13 => &B13,
        _ => unreachable!("unsupported Pade degree"),
    };
    let n = a.rows();
    let identity = Matrix::identity(n);
    // Even powers of A.
    let a2 = a.matmul(a);
    if degree < 13 {
        let mut powers = vec![identity.clone()];
        let mut current = identity.clone();
        for _ in 0..(degree / 2) {
            current = current.matmul(&a2);
            powers.push(current.clone());
        }
        let mut u_inner = Matrix::zeros(n, n);
        let mut v = Matrix::zeros(n, n);
        for (k, p) in powers.iter().enumerate() {
            u_inner = u_inner.add(&p.scale(cast(b[2 * k + 1])));
            v = v.add(&p.scale(cast(b[2 * k])));
        }
        (a.matmul(&u_inner), v)
    } else {
        let a4 = a2.matmul(&a2);
        let a6 = a4.matmul(&a2);
        let u_high = a6
            .scale(cast(b[13]))
            .add(&a4.scale(cast(b[11])))
            .add(&a2.scale(cast(b[9])));
        let u_low = a6
            .scale(cast(b[7]))
            .add(&a4.scale(cast(b[5])))
            .add(&a2.scale(cast(b[3])))
            .add(&identity.scale(cast(b[1])));
        let u = a.matmul(&a6.matmul(&u_high).add(&u_low));
        let v_high = a6
            .scale(cast(b[12]))
            .add(&a4.scale(cast(b[10])))
            .add(&a2.scale(cast(b[8])));
        let v_low = a6
            .scale(cast(b[6]))
            .add(&a4.scale(cast(b[4])))
            .add(&a2.scale(cast(b[2])))
            .add(&identity.scale(cast(b[0])));
        (u, a6.matmul(&v_high).add(&v_low))
    }
}
