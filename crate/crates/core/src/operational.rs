//! Operational matrices over the Bernstein basis.
//!
//! `P^alpha` represents Riemann-Liouville integration of order `alpha` on the
//! one-dimensional basis, `D^beta` the Caputo derivative; both are built by
//! the exact monomial route (conversion matrix, gamma-ratio power rule,
//! Beta-function moments, Gram projection) with no quadrature anywhere in the
//! construction path. With `I^alpha psi ~ P psi` row-wise, the expression
//! `psi^T(t) P^T K psi_hat(x,y)` used by the solver comes out with `P`
//! transposed on the left of `K`.
//!
//! The two-dimensional basis is ordered as `psi_hat = psi(x) kron psi(y)`,
//! i.e. member `(i, j)` sits at flat index `i (M+1) + j`; the Caputo matrices
//! lift as `H_x = D kron I` and `H_y = I kron D`.

use crate::bernstein::{monomial_moment, BernsteinBasis};
use crate::error::{Error, Result};
use crate::fractional::{gamma_ratio, FracOrder};
use crate::linalg::Matrix;
use crate::scalar::{cast_usize, Real};

/// The matrices needed by the spectral solver for fixed `(alpha, beta, M)`.
#[derive(Debug, Clone)]
pub struct OperationalMatrixSet<T> {
    alpha: FracOrder<T>,
    beta: FracOrder<T>,
    degree: usize,
    p_alpha: Matrix<T>,
    d_beta: Matrix<T>,
    h_x: Matrix<T>,
    h_y: Matrix<T>,
}

impl<T: Real> OperationalMatrixSet<T> {
    pub fn alpha(&self) -> &FracOrder<T> {
        &self.alpha
    }

    pub fn beta(&self) -> &FracOrder<T> {
        &self.beta
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Fractional-integration matrix, `(M+1) x (M+1)`.
    pub fn p_alpha(&self) -> &Matrix<T> {
        &self.p_alpha
    }

    /// One-dimensional Caputo derivative matrix, `(M+1) x (M+1)`.
    pub fn d_beta(&self) -> &Matrix<T> {
        &self.d_beta
    }

    /// Caputo derivative in `x` on the tensor basis, `(M+1)^2` square.
    pub fn h_x(&self) -> &Matrix<T> {
        &self.h_x
    }

    /// Caputo derivative in `y` on the tensor basis, `(M+1)^2` square.
    pub fn h_y(&self) -> &Matrix<T> {
        &self.h_y
    }
}

/// Builds `P^alpha` for `0 < alpha <= 1`. Row `i` holds the L2 projection of
/// `I^alpha B_{i,M}` onto the basis.
pub fn build_p_alpha<T: Real>(
    basis: &BernsteinBasis<T>,
    alpha: &FracOrder<T>,
) -> Result<Matrix<T>> {
    if alpha.value() > T::one() {
        return Err(Error::Domain {
            op: "build_p_alpha",
            msg: format!("integration order must lie in (0, 1], got {}", alpha.value()),
        });
    }
    let m = basis.degree();
    let a = alpha.value();
    let mut p = Matrix::zeros(m + 1, m + 1);
    for i in 0..=m {
        let mut moments = vec![T::zero(); m + 1];
        for k in 0..=m {
            let conv_ik = basis.conv()[(i, k)];
            if conv_ik == T::zero() {
                continue;
            }
            let kf = cast_usize::<T>(k);
            let ratio = gamma_ratio(kf + T::one(), kf + T::one() + a)?;
            for (j, slot) in moments.iter_mut().enumerate() {
                *slot = *slot + conv_ik * ratio * monomial_moment(m, j, kf + a)?;
            }
        }
        let row = basis.project(&moments)?;
        p.row_mut(i).copy_from_slice(&row);
    }
    Ok(p)
}

/// Builds `D^beta` for `0 < beta <= 2`. Row `i` holds the projection of the
/// Caputo derivative of `B_{i,M}`; monomials below the ceiling order drop
/// out, so every surviving exponent `k - beta` exceeds -1.
pub fn build_d_beta<T: Real>(basis: &BernsteinBasis<T>, beta: &FracOrder<T>) -> Result<Matrix<T>> {
    if beta.value() > cast_usize::<T>(2) {
        return Err(Error::Domain {
            op: "build_d_beta",
            msg: format!("derivative order must lie in (0, 2], got {}", beta.value()),
        });
    }
    let m = basis.degree();
    let b = beta.value();
    let n = beta.n();
    let mut d = Matrix::zeros(m + 1, m + 1);
    for i in 0..=m {
        let mut moments = vec![T::zero(); m + 1];
        for k in n..=m {
            let conv_ik = basis.conv()[(i, k)];
            if conv_ik == T::zero() {
                continue;
            }
            let kf = cast_usize::<T>(k);
            let ratio = gamma_ratio(kf + T::one(), kf + T::one() - b)?;
            for (j, slot) in moments.iter_mut().enumerate() {
                *slot = *slot + conv_ik * ratio * monomial_moment(m, j, kf - b)?;
            }
        }
        let row = basis.project(&moments)?;
        d.row_mut(i).copy_from_slice(&row);
    }
    Ok(d)
}

/// Assembles the full matrix set, lifting `D^beta` to the tensor basis by
/// Kronecker products.
pub fn build_2d_set<T: Real>(
    basis: &BernsteinBasis<T>,
    alpha: &FracOrder<T>,
    beta: &FracOrder<T>,
) -> Result<OperationalMatrixSet<T>> {
    let m = basis.degree();
    let size = (m + 1) * (m + 1);
    if size > 169 {
        return Err(Error::SizeCap {
            op: "build_2d_set",
            rows: size,
            cols: size,
        });
    }
    let p_alpha = build_p_alpha(basis, alpha)?;
    let d_beta = build_d_beta(basis, beta)?;
    let identity = Matrix::identity(m + 1);
    let h_x = d_beta.kron(&identity)?;
    let h_y = identity.kron(&d_beta)?;
    Ok(OperationalMatrixSet {
        alpha: *alpha,
        beta: *beta,
        degree: m,
        p_alpha,
        d_beta,
        h_x,
        h_y,
    })
}

/// Writes a matrix as bare CSV rows of 17-significant-digit floats. Debug
/// aid for inspecting the assembled operator matrices; gated behind a CLI
/// flag rather than emitted by default.
pub fn write_matrix_csv<T: Real, W: std::io::Write>(
    writer: &mut W,
    m: &Matrix<T>,
) -> std::io::Result<()> {
    for i in 0..m.rows() {
        let row: Vec<String> = m
            .row(i)
            .iter()
            .map(|v| format!("{:.16e}", v.to_f64().unwrap_or(f64::NAN)))
            .collect();
        writeln!(writer, "{}", row.join(","))?;
    }
    Ok(())
}
