//! Assembly and solution of the discrete system
//! `K - P^T K H_x - P^T K H_y - F = 0` and evaluation of the reconstructed
//! solution `u(t,x,y) = psi^T(t) P^T K psi_hat(x,y)`.
//!
//! The matrix equation is vectorized by column stacking,
//! `(I - (H_x + H_y)^T kron P^T) vec(K) = vec(F)`, and solved densely; at the
//! supported degrees the system has at most 2197 unknowns.
//!
//! Only zero initial/boundary data is supported: the scheme encodes
//! `u(0,.,.) = 0` through the fractional integration step and never uses the
//! remaining side conditions. Those are checked a posteriori via
//! [`SpectralSolution::side_conditions`] and reported, not enforced.

use std::io::{self, Write};

use crate::bernstein::BernsteinBasis;
use crate::error::{Error, Result};
use crate::fractional::{FracOrder, PolySum3};
use crate::linalg::Matrix;
use crate::operational::{build_2d_set, OperationalMatrixSet};
use crate::scalar::{cast_usize, Real};

/// Validated problem statement: orders, degree, and the polynomial source
/// term of the governing equation.
#[derive(Debug, Clone)]
pub struct ProblemSpec<T> {
    alpha: FracOrder<T>,
    beta: FracOrder<T>,
    degree: usize,
    f: PolySum3<T>,
}

impl<T: Real> ProblemSpec<T> {
    pub fn new(alpha: T, beta: T, degree: usize, f: PolySum3<T>) -> Result<Self> {
        let alpha = FracOrder::new(alpha)?;
        let beta = FracOrder::new(beta)?;
        if alpha.value() > T::one() {
            return Err(Error::Domain {
                op: "ProblemSpec::new",
                msg: format!("alpha must lie in (0, 1], got {}", alpha.value()),
            });
        }
        if beta.value() > cast_usize::<T>(2) {
            return Err(Error::Domain {
                op: "ProblemSpec::new",
                msg: format!("beta must lie in (0, 2], got {}", beta.value()),
            });
        }
        if degree == 0 || degree > crate::bernstein::MAX_DEGREE {
            return Err(Error::Domain {
                op: "ProblemSpec::new",
                msg: format!("degree must lie in 1..=12, got {degree}"),
            });
        }
        for term in f.terms() {
            if term.t_exp < T::zero() || term.x_exp < T::zero() || term.y_exp < T::zero() {
                return Err(Error::Domain {
                    op: "ProblemSpec::new",
                    msg: "source term must have nonnegative exponents".into(),
                });
            }
        }
        Ok(Self {
            alpha,
            beta,
            degree,
            f,
        })
    }

    pub fn alpha(&self) -> &FracOrder<T> {
        &self.alpha
    }

    pub fn beta(&self) -> &FracOrder<T> {
        &self.beta
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn f(&self) -> &PolySum3<T> {
        &self.f
    }
}

/// Axis selecting a two-dimensional slice of the unit cube.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SliceAxis {
    T,
    X,
    Y,
}

/// A coordinate slice such as `t = 0.5`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Slice<T> {
    pub axis: SliceAxis,
    pub value: T,
}

/// Maximum violations of the five homogeneous side conditions, measured on a
/// uniform grid. The scheme enforces only the initial condition structurally;
/// the rest are properties of the data, reported here.
#[derive(Debug, Clone, Copy)]
pub struct SideConditionReport<T> {
    /// max |u(0, x, y)|
    pub initial: T,
    /// max |u(t, 0, y)|
    pub boundary_x: T,
    /// max |u(t, x, 0)|
    pub boundary_y: T,
    /// max |du/dx (t, 0, y)|
    pub normal_x: T,
    /// max |du/dy (t, x, 0)|
    pub normal_y: T,
}

/// Solved spectral coefficients plus everything needed to evaluate `u`.
#[derive(Debug, Clone)]
pub struct SpectralSolution<T> {
    alpha: FracOrder<T>,
    beta: FracOrder<T>,
    degree: usize,
    k: Matrix<T>,
    u_coeffs: Matrix<T>,
    basis: BernsteinBasis<T>,
    residual: T,
}

/// Projects the polynomial source term onto the tensor basis:
/// `f ~ psi^T(t) F psi_hat(x,y)` with
/// `F = gram^-1 B (gram kron gram)^-1`, where `B` collects exact
/// Beta-function moments. No quadrature is involved.
pub fn project_f<T: Real>(f: &PolySum3<T>, basis: &BernsteinBasis<T>) -> Result<Matrix<T>> {
    let m = basis.degree();
    let n = m + 1;
    let mut b = Matrix::zeros(n, n * n);
    for term in f.terms() {
        for i in 0..n {
            let mt = crate::bernstein::monomial_moment(m, i, term.t_exp)?;
            if mt == T::zero() {
                continue;
            }
            for j in 0..n {
                let mx = crate::bernstein::monomial_moment(m, j, term.x_exp)?;
                for k in 0..n {
                    let my = crate::bernstein::monomial_moment(m, k, term.y_exp)?;
                    let idx = (i, j * n + k);
                    b[idx] = b[idx] + term.coef * mt * mx * my;
                }
            }
        }
    }
    // Left projection: Y = gram^-1 B, column by column.
    let mut y = Matrix::zeros(n, n * n);
    for col in 0..n * n {
        let rhs: Vec<T> = (0..n).map(|row| b[(row, col)]).collect();
        let solved = basis.project(&rhs)?;
        for row in 0..n {
            y[(row, col)] = solved[row];
        }
    }
    // Right projection: F (gram kron gram) = Y, i.e. (gram kron gram) F^T = Y^T
    // because the tensor Gram matrix is symmetric.
    let gram2 = basis.gram().kron(basis.gram())?;
    let lu = gram2.lu()?;
    let mut f_mat = Matrix::zeros(n, n * n);
    for row in 0..n {
        let rhs: Vec<T> = (0..n * n).map(|col| y[(row, col)]).collect();
        let solved = lu.solve(&rhs)?;
        for col in 0..n * n {
            f_mat[(row, col)] = solved[col];
        }
    }
    Ok(f_mat)
}

/// Solves the discrete system for the given problem.
pub fn solve<T: Real>(spec: &ProblemSpec<T>) -> Result<SpectralSolution<T>> {
    let basis = BernsteinBasis::new(spec.degree)?;
    let set: OperationalMatrixSet<T> = build_2d_set(&basis, &spec.alpha, &spec.beta)?;
    let f_mat = project_f(&spec.f, &basis)?;

    let n = spec.degree + 1;
    let p_t = set.p_alpha().transpose();
    let h_sum = set.h_x().add(set.h_y());

    // (I - (H_x + H_y)^T kron P^T) vec(K) = vec(F)
    let system = Matrix::identity(n * n * n).sub(&h_sum.transpose().kron(&p_t)?);
    let lu = system.lu().map_err(|e| match e {
        Error::Singular {
            pivot_ratio,
            cond_indicator,
            ..
        } => Error::Singular {
            op: "spectral_solve",
            pivot_ratio,
            cond_indicator,
        },
        other => other,
    })?;
    let k_vec = lu.solve(&f_mat.vec_cols())?;
    let k = Matrix::from_vec_cols(&k_vec, n, n * n);

    let residual = k
        .sub(&p_t.matmul(&k).matmul(&h_sum))
        .sub(&f_mat)
        .max_abs();
    let u_coeffs = p_t.matmul(&k);
    Ok(SpectralSolution {
        alpha: spec.alpha,
        beta: spec.beta,
        degree: spec.degree,
        k,
        u_coeffs,
        basis,
        residual,
    })
}

impl<T: Real> SpectralSolution<T> {
    pub fn alpha(&self) -> &FracOrder<T> {
        &self.alpha
    }

    pub fn beta(&self) -> &FracOrder<T> {
        &self.beta
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficient matrix of the Caputo time derivative of `u`.
    pub fn k(&self) -> &Matrix<T> {
        &self.k
    }

    /// Coefficient matrix of `u` itself, `P^T K`.
    pub fn u_coeffs(&self) -> &Matrix<T> {
        &self.u_coeffs
    }

    /// Max-norm residual of the discrete matrix equation.
    pub fn residual(&self) -> T {
        self.residual
    }

    /// Evaluates the reconstructed solution at a point of the unit cube.
    pub fn evaluate(&self, t: T, x: T, y: T) -> Result<T> {
        let pt = self.basis.eval_basis(t)?;
        let px = self.basis.eval_basis(x)?;
        let py = self.basis.eval_basis(y)?;
        Ok(self.contract(&pt, &px, &py))
    }

    /// `psi_t^T U (px kron py)` without materializing the Kronecker vector.
    fn contract(&self, pt: &[T], px: &[T], py: &[T]) -> T {
        let n = self.degree + 1;
        let left = self.u_coeffs.vecmat(pt);
        let mut acc = T::zero();
        for (j, &pxj) in px.iter().enumerate() {
            if pxj == T::zero() {
                continue;
            }
            for (k, &pyk) in py.iter().enumerate() {
                acc = acc + left[j * n + k] * pxj * pyk;
            }
        }
        acc
    }

    /// Absolute error against a reference solution on an `n x n` inclusive
    /// grid of the given slice. Rows are `(coord1, coord2, |error|)` in
    /// row-major order; for a `t`-slice the coordinates are `(x, y)`, for an
    /// `x`-slice `(t, y)`, for a `y`-slice `(t, x)`.
    pub fn error_grid(
        &self,
        exact: &PolySum3<T>,
        slice: Slice<T>,
        n: usize,
    ) -> Result<Vec<(T, T, T)>> {
        self.slice_table(slice, n, |t, x, y, u| (u - exact.eval(t, x, y)).abs())
    }

    /// Solution values on an `n x n` inclusive grid of the given slice.
    pub fn value_grid(&self, slice: Slice<T>, n: usize) -> Result<Vec<(T, T, T)>> {
        self.slice_table(slice, n, |_, _, _, u| u)
    }

    fn slice_table(
        &self,
        slice: Slice<T>,
        n: usize,
        entry: impl Fn(T, T, T, T) -> T,
    ) -> Result<Vec<(T, T, T)>> {
        if !(slice.value >= T::zero() && slice.value <= T::one()) {
            return Err(Error::Domain {
                op: "slice_table",
                msg: format!("slice value {} outside [0, 1]", slice.value),
            });
        }
        if n < 2 {
            return Err(Error::Domain {
                op: "slice_table",
                msg: "grid needs at least two points per axis".into(),
            });
        }
        let mut rows = Vec::with_capacity(n * n);
        let denom = cast_usize::<T>(n - 1);
        for a in 0..n {
            let c1 = cast_usize::<T>(a) / denom;
            for b in 0..n {
                let c2 = cast_usize::<T>(b) / denom;
                let (t, x, y) = match slice.axis {
                    SliceAxis::T => (slice.value, c1, c2),
                    SliceAxis::X => (c1, slice.value, c2),
                    SliceAxis::Y => (c1, c2, slice.value),
                };
                let u = self.evaluate(t, x, y)?;
                rows.push((c1, c2, entry(t, x, y, u)));
            }
        }
        Ok(rows)
    }

    /// Solution values on an inclusive `n^3` lattice of the cube, as
    /// `(t, x, y, u)` rows (t outermost, y innermost).
    pub fn solution_grid(&self, n: usize) -> Result<Vec<(T, T, T, T)>> {
        if n < 2 {
            return Err(Error::Domain {
                op: "solution_grid",
                msg: "grid needs at least two points per axis".into(),
            });
        }
        let denom = cast_usize::<T>(n - 1);
        let coords: Vec<T> = (0..n).map(|k| cast_usize::<T>(k) / denom).collect();
        let mut rows = Vec::with_capacity(n * n * n);
        for &t in &coords {
            let pt = self.basis.eval_basis(t)?;
            for &x in &coords {
                let px = self.basis.eval_basis(x)?;
                for &y in &coords {
                    let py = self.basis.eval_basis(y)?;
                    rows.push((t, x, y, self.contract(&pt, &px, &py)));
                }
            }
        }
        Ok(rows)
    }

    /// Checks the five homogeneous side conditions on an `n`-point grid.
    pub fn side_conditions(&self, n: usize) -> Result<SideConditionReport<T>> {
        let denom = cast_usize::<T>(n.max(2) - 1);
        let coords: Vec<T> = (0..n.max(2)).map(|k| cast_usize::<T>(k) / denom).collect();
        let zero_basis = self.basis.eval_basis(T::zero())?;
        let zero_deriv = self.basis.eval_basis_deriv(T::zero())?;
        let mut report = SideConditionReport {
            initial: T::zero(),
            boundary_x: T::zero(),
            boundary_y: T::zero(),
            normal_x: T::zero(),
            normal_y: T::zero(),
        };
        for &a in &coords {
            let pa = self.basis.eval_basis(a)?;
            for &b in &coords {
                let pb = self.basis.eval_basis(b)?;
                report.initial = report
                    .initial
                    .max(self.contract(&zero_basis, &pa, &pb).abs());
                report.boundary_x = report
                    .boundary_x
                    .max(self.contract(&pa, &zero_basis, &pb).abs());
                report.boundary_y = report
                    .boundary_y
                    .max(self.contract(&pa, &pb, &zero_basis).abs());
                report.normal_x = report
                    .normal_x
                    .max(self.contract(&pa, &zero_deriv, &pb).abs());
                report.normal_y = report
                    .normal_y
                    .max(self.contract(&pa, &pb, &zero_deriv).abs());
            }
        }
        Ok(report)
    }
}

/// Writes a slice table as CSV with header `coord1,coord2,value` and
/// 17-significant-digit floats.
pub fn write_slice_csv<T: Real, W: Write>(writer: &mut W, rows: &[(T, T, T)]) -> io::Result<()> {
    writeln!(writer, "coord1,coord2,value")?;
    for &(a, b, v) in rows {
        writeln!(writer, "{:.16e},{:.16e},{:.16e}", F(a), F(b), F(v))?;
    }
    Ok(())
}

/// Writes a cube table as CSV with header `t,x,y,u`.
pub fn write_cube_csv<T: Real, W: Write>(writer: &mut W, rows: &[(T, T, T, T)]) -> io::Result<()> {
    writeln!(writer, "t,x,y,u")?;
    for &(t, x, y, u) in rows {
        writeln!(writer, "{:.16e},{:.16e},{:.16e},{:.16e}", F(t), F(x), F(y), F(u))?;
    }
    Ok(())
}

/// Formatting shim: `LowerExp` via `f64` so the CSV layer works for any
/// scalar type.
struct F<T>(T);

impl<T: Real> std::fmt::LowerExp for F<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::LowerExp::fmt(&self.0.to_f64().unwrap_or(f64::NAN), f)
    }
}
