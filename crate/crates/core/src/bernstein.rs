//! Bernstein basis of degree `M` on `[0, 1]`.
//!
//! The basis member `B_{i,M}(t) = C(M,i) t^i (1-t)^(M-i)` is nonnegative and
//! the members sum to one. The struct precomputes the monomial conversion
//! matrix and the exact Gram matrix; both come from closed forms (Beta
//! integrals), quadrature is used only as a test oracle.

use crate::error::{Error, Result};
use crate::linalg::{LuFactors, Matrix};
use crate::scalar::{cast_usize, Real};
use crate::special;

/// Largest supported degree; conversion/Gram conditioning degrades beyond it
/// in double precision.
pub const MAX_DEGREE: usize = 12;

/// Bernstein basis of fixed degree with cached conversion and Gram matrices.
#[derive(Debug, Clone)]
pub struct BernsteinBasis<T> {
    degree: usize,
    conv: Matrix<T>,
    gram: Matrix<T>,
    gram_lu: LuFactors<T>,
}

/// Integer binomial coefficient evaluated in the scalar type.
fn binomial<T: Real>(n: usize, k: usize) -> T {
    let mut result = T::one();
    for j in 0..k.min(n - k) {
        result = result * cast_usize::<T>(n - j) / cast_usize::<T>(j + 1);
    }
    result
}

impl<T: Real> BernsteinBasis<T> {
    /// Builds the basis of the given degree (at most [`MAX_DEGREE`]).
    pub fn new(degree: usize) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(Error::Domain {
                op: "BernsteinBasis::new",
                msg: format!("degree {degree} exceeds cap {MAX_DEGREE}"),
            });
        }
        let n = degree + 1;
        // conv[i][k] = coefficient of t^k in B_{i,M}: (-1)^(k-i) C(M,i) C(M-i, k-i).
        let mut conv = Matrix::zeros(n, n);
        for i in 0..n {
            let c_mi = binomial::<T>(degree, i);
            for k in i..n {
                let sign = if (k - i) % 2 == 0 { T::one() } else { -T::one() };
                conv[(i, k)] = sign * c_mi * binomial::<T>(degree - i, k - i);
            }
        }
        // gram[i][j] = C(M,i) C(M,j) / ((2M+1) C(2M, i+j)).
        let mut gram = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                gram[(i, j)] = binomial::<T>(degree, i) * binomial::<T>(degree, j)
                    / (cast_usize::<T>(2 * degree + 1) * binomial::<T>(2 * degree, i + j));
            }
        }
        let gram_lu = gram.lu()?;
        Ok(Self {
            degree,
            conv,
            gram,
            gram_lu,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of basis members, `M + 1`.
    pub fn len(&self) -> usize {
        self.degree + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Monomial conversion matrix: row `i` holds the coefficients of
    /// `B_{i,M}` in the monomial basis.
    pub fn conv(&self) -> &Matrix<T> {
        &self.conv
    }

    /// Exact Gram matrix of pairwise L2 inner products.
    pub fn gram(&self) -> &Matrix<T> {
        &self.gram
    }

    /// Evaluates all basis members at `t` in `[0, 1]`.
    pub fn eval_basis(&self, t: T) -> Result<Vec<T>> {
        if !(t >= T::zero() && t <= T::one()) {
            return Err(Error::Domain {
                op: "eval_basis",
                msg: format!("t = {t} outside [0, 1]"),
            });
        }
        let m = self.degree;
        let s = T::one() - t;
        // Powers accumulated iteratively so the endpoints come out exact.
        let mut t_pow = vec![T::one(); m + 1];
        let mut s_pow = vec![T::one(); m + 1];
        for k in 1..=m {
            t_pow[k] = t_pow[k - 1] * t;
            s_pow[k] = s_pow[k - 1] * s;
        }
        Ok((0..=m)
            .map(|i| binomial::<T>(m, i) * t_pow[i] * s_pow[m - i])
            .collect())
    }

    /// Derivatives of all basis members at `t`, via
    /// `B'_{i,M} = M (B_{i-1,M-1} - B_{i,M-1})`.
    pub fn eval_basis_deriv(&self, t: T) -> Result<Vec<T>> {
        if self.degree == 0 {
            // Constant basis.
            if !(t >= T::zero() && t <= T::one()) {
                return Err(Error::Domain {
                    op: "eval_basis_deriv",
                    msg: format!("t = {t} outside [0, 1]"),
                });
            }
            return Ok(vec![T::zero()]);
        }
        let lower = BernsteinBasis::<T>::new(self.degree - 1)?;
        let lower_vals = lower.eval_basis(t)?;
        let mf = cast_usize::<T>(self.degree);
        Ok((0..=self.degree)
            .map(|i| {
                let left = if i > 0 { lower_vals[i - 1] } else { T::zero() };
                let right = if i < self.degree { lower_vals[i] } else { T::zero() };
                mf * (left - right)
            })
            .collect())
    }

    /// Evaluates the polynomial with the given basis coefficients at `t`.
    pub fn eval_with_coeffs(&self, coeffs: &[T], t: T) -> Result<T> {
        let basis = self.eval_basis(t)?;
        Ok(basis
            .iter()
            .zip(coeffs)
            .fold(T::zero(), |acc, (&b, &c)| acc + b * c))
    }

    /// L2 projection: converts the moment vector `b[j] = <g, B_j>` into the
    /// optimal coefficient vector `gram^-1 b`.
    pub fn project(&self, moments: &[T]) -> Result<Vec<T>> {
        self.gram_lu.solve(moments)
    }
}

/// Moment of a monomial against one basis member:
/// `int_0^1 t^mu B_{j,M}(t) dt = C(M,j) B(mu+j+1, M-j+1)` for `mu > -1`.
pub fn monomial_moment<T: Real>(degree: usize, j: usize, mu: T) -> Result<T> {
    if j > degree {
        return Err(Error::Domain {
            op: "monomial_moment",
            msg: format!("index {j} exceeds degree {degree}"),
        });
    }
    if !(mu > -T::one()) {
        return Err(Error::Domain {
            op: "monomial_moment",
            msg: format!("exponent mu = {mu} must exceed -1"),
        });
    }
    let b = special::beta(mu + cast_usize::<T>(j) + T::one(), cast_usize::<T>(degree - j) + T::one())?;
    Ok(binomial::<T>(degree, j) * b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_smooth;

    #[test]
    fn eval_endpoints() {
        let basis = BernsteinBasis::<f64>::new(2).unwrap();
        assert_eq!(basis.eval_basis(0.0).unwrap(), vec![1.0, 0.0, 0.0]);
        assert_eq!(basis.eval_basis(1.0).unwrap(), vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn eval_midpoint() {
        let basis = BernsteinBasis::<f64>::new(2).unwrap();
        let v = basis.eval_basis(0.5).unwrap();
        assert_eq!(v, vec![0.25, 0.5, 0.25]);
    }

    #[test]
    fn eval_outside_domain_rejected() {
        let basis = BernsteinBasis::<f64>::new(2).unwrap();
        assert!(basis.eval_basis(-0.1).is_err());
        assert!(basis.eval_basis(1.1).is_err());
    }

    #[test]
    fn partition_of_unity() {
        let basis = BernsteinBasis::<f64>::new(7).unwrap();
        for k in 0..=20 {
            let t = k as f64 / 20.0;
            let v = basis.eval_basis(t).unwrap();
            let sum: f64 = v.iter().sum();
            assert!((sum - 1.0).abs() < 1e-14, "sum at t = {t} is {sum}");
            assert!(v.iter().all(|&x| x >= 0.0));
        }
    }

    #[test]
    fn direct_and_monomial_evaluation_agree() {
        let basis = BernsteinBasis::<f64>::new(4).unwrap();
        let t = 0.3;
        let direct = basis.eval_basis(t).unwrap();
        for (i, &d) in direct.iter().enumerate() {
            let via_conv: f64 = (0..basis.len())
                .map(|k| basis.conv()[(i, k)] * t.powi(k as i32))
                .sum();
            assert!((d - via_conv).abs() < 1e-12, "member {i}: {d} vs {via_conv}");
        }
    }

    #[test]
    fn conv_matrix_structure() {
        let m = 5;
        let basis = BernsteinBasis::<f64>::new(m).unwrap();
        for i in 0..=m {
            for k in 0..i {
                assert_eq!(basis.conv()[(i, k)], 0.0);
            }
            let mut c_mi = 1.0;
            for j in 0..i {
                c_mi = c_mi * (m - j) as f64 / (j + 1) as f64;
            }
            assert!((basis.conv()[(i, i)] - c_mi).abs() < 1e-12);
        }
    }

    #[test]
    fn gram_matches_quadrature() {
        for m in [2usize, 5, 8] {
            let basis = BernsteinBasis::<f64>::new(m).unwrap();
            for i in 0..=m {
                for j in i..=m {
                    let numeric = integrate_smooth(
                        |t| {
                            let v = basis.eval_basis(t).unwrap();
                            v[i] * v[j]
                        },
                        0.0,
                        1.0,
                        1e-14,
                        "gram oracle",
                    )
                    .unwrap();
                    assert!(
                        (basis.gram()[(i, j)] - numeric).abs() < 1e-12,
                        "M={m} ({i},{j}): closed {} vs quad {numeric}",
                        basis.gram()[(i, j)]
                    );
                }
            }
        }
    }

    #[test]
    fn monomial_moment_trivial_cases() {
        assert!((monomial_moment::<f64>(0, 0, 0.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((monomial_moment::<f64>(1, 1, 1.0).unwrap() - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn monomial_moment_matches_quadrature() {
        let basis = BernsteinBasis::<f64>::new(4).unwrap();
        let mu = 2.5;
        let closed = monomial_moment::<f64>(4, 2, mu).unwrap();
        let numeric = integrate_smooth(
            |t: f64| t.powf(mu) * basis.eval_basis(t).unwrap()[2],
            0.0,
            1.0,
            1e-14,
            "moment oracle",
        )
        .unwrap();
        assert!((closed - numeric).abs() < 1e-12, "{closed} vs {numeric}");
    }

    #[test]
    fn monomial_moment_domain_errors() {
        assert!(monomial_moment::<f64>(3, 4, 1.0).is_err());
        assert!(monomial_moment::<f64>(3, 1, -1.0).is_err());
    }

    #[test]
    fn projection_of_basis_member_is_unit_vector() {
        let m = 3;
        let basis = BernsteinBasis::<f64>::new(m).unwrap();
        // Moments of g = B_1 against the basis: column 1 of the Gram matrix.
        let moments: Vec<f64> = (0..=m).map(|j| basis.gram()[(j, 1)]).collect();
        let coeffs = basis.project(&moments).unwrap();
        for (k, &c) in coeffs.iter().enumerate() {
            let expected = if k == 1 { 1.0 } else { 0.0 };
            assert!((c - expected).abs() < 1e-11, "coeff {k} = {c}");
        }
    }

    #[test]
    fn projection_of_one_is_all_ones() {
        for m in [1usize, 4, 6] {
            let basis = BernsteinBasis::<f64>::new(m).unwrap();
            let moments: Vec<f64> = (0..=m)
                .map(|j| monomial_moment(m, j, 0.0).unwrap())
                .collect();
            let coeffs = basis.project(&moments).unwrap();
            for &c in &coeffs {
                assert!((c - 1.0).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn projection_residual_orthogonal_to_span() {
        // g(t) = sqrt(t) at M = 4: the residual must be orthogonal to
        // every basis member.
        let m = 4;
        let basis = BernsteinBasis::<f64>::new(m).unwrap();
        let moments: Vec<f64> = (0..=m)
            .map(|j| monomial_moment(m, j, 0.5).unwrap())
            .collect();
        let coeffs = basis.project(&moments).unwrap();
        for j in 0..=m {
            // sqrt(t) has an unbounded derivative at 0, so integrate with the
            // singularity-aware scheme.
            let inner = crate::quadrature::integrate_left_singular(
                |t: f64| {
                    let v = basis.eval_basis(t).unwrap();
                    let g = t.sqrt();
                    let p: f64 = v.iter().zip(&coeffs).map(|(&b, &c)| b * c).sum();
                    (g - p) * v[j]
                },
                1.0,
                1e-13,
                "residual oracle",
            )
            .unwrap();
            assert!(inner.abs() < 1e-10, "<residual, B_{j}> = {inner}");
        }
    }

    #[test]
    fn projection_idempotent_on_span() {
        let m = 5;
        let basis = BernsteinBasis::<f64>::new(m).unwrap();
        let coeffs: Vec<f64> = (0..=m).map(|k| 0.3 * k as f64 - 0.7).collect();
        // Moments of the projected polynomial are gram * coeffs.
        let moments = basis.gram().matvec(&coeffs);
        let recovered = basis.project(&moments).unwrap();
        for (a, b) in coeffs.iter().zip(&recovered) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn deriv_matches_conv_route() {
        let m = 4;
        let basis = BernsteinBasis::<f64>::new(m).unwrap();
        let t = 0.62;
        let derivs = basis.eval_basis_deriv(t).unwrap();
        for (i, &d) in derivs.iter().enumerate() {
            let via_conv: f64 = (1..=m)
                .map(|k| basis.conv()[(i, k)] * k as f64 * t.powi(k as i32 - 1))
                .sum();
            assert!((d - via_conv).abs() < 1e-11, "member {i}");
        }
    }

    #[test]
    fn degree_cap_enforced() {
        assert!(BernsteinBasis::<f64>::new(MAX_DEGREE).is_ok());
        assert!(BernsteinBasis::<f64>::new(MAX_DEGREE + 1).is_err());
    }
}
