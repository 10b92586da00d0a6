//! Extended left-hand-sided Erdelyi-Kober operators and the
//! similarity-reduction identities they satisfy.
//!
//! The integral operator is
//!
//! ```text
//! (K^{tau,a}_{g1,g2} w)(z1, z2)
//!     = (1/Gamma(a)) int_1^inf (th-1)^(a-1) th^-(tau+a)
//!                     w(z1 th^(1/g1), z2 th^(1/g2)) dth       (a > 0)
//!     = w(z1, z2)                                             (a = 0)
//! ```
//!
//! and the derivative operator applies Euler factors on top of it:
//! `P^{tau,a} = prod_{j=0}^{n-1} (tau + j - (1/g1) z1 d1 - (1/g2) z2 d2) K^{tau,a}`
//! with `n = floor(a)+1` for fractional `a` (equal to `a` for integer `a`).
//! A gamma of infinity is a sentinel: the corresponding scaling and Euler
//! term drop out.
//!
//! The similarity substitution `u = w(x t^(-b/a), y t^(-b/a))` turns the
//! fractional derivatives of the governing equation into weighted
//! Erdelyi-Kober expressions. Writing the chain rule out (differentiating
//! `t^(n-a) K w` n times) produces Euler factors `(1 - a + j - ...)`, offset
//! by the derivative order relative to the kernel's `tau = 1`, and for the
//! spatial directions the integration variable replaces the *differentiated*
//! coordinate, giving `th^-1` scaling (gamma1 = -1) rather than `th^(+1)`.
//! [`verify_time_identity`] and [`verify_space_identity`] therefore pair the
//! `K^{1, n-order}` kernel with product offset `1 - order` and, in space,
//! `gamma1 = -1`; on the monomial family both sides then agree to quadrature
//! accuracy, which is the check the `verify-reduction` command runs.

use crate::error::{Error, Result};
use crate::fractional::{recip_gamma, rl_derivative_power, FracOrder};
use crate::quadrature::{central_derivative, integrate_unit_two_sided, DerivOrder};
use crate::scalar::{cast, cast_usize, Real};

/// Scaling parameter of one argument slot: finite nonzero, or the infinity
/// sentinel meaning "this slot is untouched by the operator".
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EkGamma<T> {
    Finite(T),
    Infinite,
}

impl<T: Real> EkGamma<T> {
    /// `1/gamma`, with the sentinel mapping to zero.
    pub fn recip(self) -> T {
        match self {
            EkGamma::Finite(g) => g.recip(),
            EkGamma::Infinite => T::zero(),
        }
    }
}

/// Parameter set `(tau, order, gamma1, gamma2)` plus the ceiling integer of
/// the order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EKParams<T> {
    tau: T,
    order: T,
    gamma1: EkGamma<T>,
    gamma2: EkGamma<T>,
    n: usize,
}

impl<T: Real> EKParams<T> {
    pub fn new(tau: T, order: T, gamma1: EkGamma<T>, gamma2: EkGamma<T>) -> Result<Self> {
        if !(order >= T::zero() && order.is_finite() && tau.is_finite()) {
            return Err(Error::Domain {
                op: "EKParams::new",
                msg: format!("need finite tau and order >= 0, got ({tau}, {order})"),
            });
        }
        for g in [gamma1, gamma2] {
            if let EkGamma::Finite(v) = g {
                if v == T::zero() || !v.is_finite() {
                    return Err(Error::Domain {
                        op: "EKParams::new",
                        msg: "gamma parameters must be nonzero finite or infinite".into(),
                    });
                }
            }
        }
        let n = if order.fract() == T::zero() {
            order.to_usize().ok_or_else(|| Error::Domain {
                op: "EKParams::new",
                msg: format!("order {order} too large"),
            })?
        } else {
            order.floor().to_usize().unwrap_or(0) + 1
        };
        Ok(Self {
            tau,
            order,
            gamma1,
            gamma2,
            n,
        })
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    pub fn order(&self) -> T {
        self.order
    }

    pub fn gamma1(&self) -> EkGamma<T> {
        self.gamma1
    }

    pub fn gamma2(&self) -> EkGamma<T> {
        self.gamma2
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Similarity variables of a point, `xi_i = (x or y) t^(-beta/alpha)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityPoint<T> {
    pub xi1: T,
    pub xi2: T,
}

/// One verified reduction identity: both sides and their gap.
#[derive(Debug, Clone, Copy)]
pub struct IdentityCheck<T> {
    pub lhs: T,
    pub rhs: T,
    pub abs_diff: T,
}

/// Maps `(t, x, y)` to similarity variables; `t` must be positive.
pub fn similarity_vars<T: Real>(t: T, x: T, y: T, alpha: T, beta: T) -> Result<SimilarityPoint<T>> {
    if !(t > T::zero()) {
        return Err(Error::Domain {
            op: "similarity_vars",
            msg: format!("t = {t} must be positive"),
        });
    }
    let scale = t.powf(-beta / alpha);
    Ok(SimilarityPoint {
        xi1: x * scale,
        xi2: y * scale,
    })
}

/// The integral operator `K`. For order zero this is the identity branch;
/// otherwise the improper integral is mapped onto `(0, 1]` by
/// `theta = 1/(1-v)` and the `(theta-1)^(order-1)` endpoint singularity is
/// removed by `v = w^(1/order)`, leaving
/// `(1/Gamma(order+1)) int_0^1 (1-v)^(tau-1) w(...) dw`
/// for graded Gauss-Legendre panels.
pub fn ek_k<T: Real>(
    params: &EKParams<T>,
    omega: impl Fn(T, T) -> T,
    z1: T,
    z2: T,
    tol: T,
) -> Result<T> {
    if params.order == T::zero() {
        return Ok(omega(z1, z2));
    }
    let a = params.order;
    let tau = params.tau;
    let rg1 = params.gamma1.recip();
    let rg2 = params.gamma2.recip();
    // The theta -> inf singularity sits at w = 1 (evaluated in u = 1 - w
    // through ln_1p/exp_m1 so 1 - v does not cancel away); the substitution
    // itself leaves a w^(1/order) kink at w = 0. Graded panels on both ends.
    let evaluate = |one_minus_v: T| {
        let ln_omv = one_minus_v.ln();
        let arg1 = z1 * (-ln_omv * rg1).exp();
        let arg2 = z2 * (-ln_omv * rg2).exp();
        (ln_omv * (tau - T::one())).exp() * omega(arg1, arg2)
    };
    let integral = integrate_unit_two_sided(
        |w: T| evaluate(-(w.ln() / a).exp_m1()),
        |u: T| evaluate(-((-u).ln_1p() / a).exp_m1()),
        tol * cast(0.5),
        "ek_k",
    )?;
    Ok(recip_gamma(a + T::one())? * integral)
}

/// Applies `n_steps` Euler factors `(product_tau + j - (1/g1) z1 d1 -
/// (1/g2) z2 d2)`, j = 0..n_steps, to a kernel function of `(z1, z2)`.
/// Derivatives are five-point central differences with Richardson
/// extrapolation on the quadrature-evaluated kernel.
#[allow(clippy::too_many_arguments)]
fn euler_product_apply<T: Real>(
    kernel: &dyn Fn(T, T) -> Result<T>,
    n_steps: usize,
    product_tau: T,
    rg1: T,
    rg2: T,
    z1: T,
    z2: T,
    h: T,
    tol: T,
) -> Result<T> {
    if n_steps == 0 {
        return kernel(z1, z2);
    }
    let j = cast_usize::<T>(n_steps - 1);
    let value = euler_product_apply(kernel, n_steps - 1, product_tau, rg1, rg2, z1, z2, h, tol)?;
    let mut derivative_part = T::zero();
    if rg1 != T::zero() && z1 != T::zero() {
        let d1 = central_derivative(
            |a| euler_product_apply(kernel, n_steps - 1, product_tau, rg1, rg2, a, z2, h, tol),
            z1,
            DerivOrder::First,
            h,
            tol,
            "ek_p",
        )?;
        derivative_part = derivative_part + rg1 * z1 * d1;
    }
    if rg2 != T::zero() && z2 != T::zero() {
        let d2 = central_derivative(
            |b| euler_product_apply(kernel, n_steps - 1, product_tau, rg1, rg2, z1, b, h, tol),
            z2,
            DerivOrder::First,
            h,
            tol,
            "ek_p",
        )?;
        derivative_part = derivative_part + rg2 * z2 * d2;
    }
    Ok((product_tau + j) * value - derivative_part)
}

/// The derivative operator `P`: the Euler product over the `K` kernel at the
/// same parameters. `h` is the finite-difference step; too large a step is
/// reported as a tolerance failure by the Richardson check.
pub fn ek_p<T: Real>(
    params: &EKParams<T>,
    omega: impl Fn(T, T) -> T + Copy,
    z1: T,
    z2: T,
    tol: T,
    h: T,
) -> Result<T> {
    let kernel_tol = kernel_tolerance(tol, h, params.n);
    let kernel = move |a: T, b: T| ek_k(params, omega, a, b, kernel_tol);
    euler_product_apply(
        &kernel,
        params.n,
        params.tau,
        params.gamma1.recip(),
        params.gamma2.recip(),
        z1,
        z2,
        h,
        tol,
    )
}

/// Quadrature tolerance tight enough that differencing noise stays below
/// the requested tolerance after `n` derivative levels.
fn kernel_tolerance<T: Real>(tol: T, h: T, n: usize) -> T {
    let mut k_tol = tol * cast(0.02);
    for _ in 0..n {
        k_tol = k_tol * h * cast(0.1);
    }
    k_tol.max(cast(1e-15))
}

/// Checks the time-direction reduction identity on the monomial
/// `u = x^p y^q t^(-(p+q) beta/alpha)`, whose similarity profile is
/// `w(xi1, xi2) = xi1^p xi2^q`:
///
/// * left side: Riemann-Liouville `D^alpha_t u` by the analytic power rule;
/// * right side: `t^(-alpha)` times the Euler product with offset
///   `1 - alpha` (n = ceil(alpha) factors) over `K^{1, n-alpha}` at
///   `gamma1 = gamma2 = alpha/beta`, evaluated at the similarity point.
#[allow(clippy::too_many_arguments)]
pub fn verify_time_identity<T: Real>(
    p: T,
    q: T,
    alpha: T,
    beta: T,
    t: T,
    x: T,
    y: T,
    tol: T,
) -> Result<IdentityCheck<T>> {
    check_monomial_preconditions(p, q, alpha, beta, t, x, y)?;
    let alpha_order = FracOrder::new(alpha)?;
    let n = alpha_order.n();
    let mu = -(p + q) * beta / alpha;

    let (coef, exponent) = rl_derivative_power(mu, &alpha_order)?;
    let lhs = coef * t.powf(exponent) * x.powf(p) * y.powf(q);

    let point = similarity_vars(t, x, y, alpha, beta)?;
    let kernel_order = cast_usize::<T>(n) - alpha;
    let params = EKParams::new(
        T::one(),
        kernel_order,
        EkGamma::Finite(alpha / beta),
        EkGamma::Finite(alpha / beta),
    )?;
    let omega = move |a: T, b: T| a.powf(p) * b.powf(q);
    let h = fd_step(point.xi1.min(point.xi2));
    let kernel_tol = kernel_tolerance(tol, h, n);
    let kernel = move |a: T, b: T| ek_k(&params, omega, a, b, kernel_tol);
    let reduced = euler_product_apply(
        &kernel,
        n,
        T::one() - alpha,
        beta / alpha,
        beta / alpha,
        point.xi1,
        point.xi2,
        h,
        tol,
    )?;
    let rhs = t.powf(-alpha) * reduced;
    Ok(IdentityCheck {
        lhs,
        rhs,
        abs_diff: (lhs - rhs).abs(),
    })
}

/// Checks the x-direction reduction identity on the same monomial family:
///
/// * left side: Riemann-Liouville `D^beta_x u` by the power rule;
/// * right side: `x^(-beta)` times the Euler product with offset `1 - beta`
///   (n = ceil(beta) factors) over `K^{1, n-beta}` at `gamma1 = -1`,
///   `gamma2 = inf`.
#[allow(clippy::too_many_arguments)]
pub fn verify_space_identity<T: Real>(
    p: T,
    q: T,
    alpha: T,
    beta: T,
    t: T,
    x: T,
    y: T,
    tol: T,
) -> Result<IdentityCheck<T>> {
    check_monomial_preconditions(p, q, alpha, beta, t, x, y)?;
    let beta_order = FracOrder::new(beta)?;
    let n = beta_order.n();
    let mu = -(p + q) * beta / alpha;

    let (coef, exponent) = rl_derivative_power(p, &beta_order)?;
    let lhs = coef * x.powf(exponent) * y.powf(q) * t.powf(mu);

    let point = similarity_vars(t, x, y, alpha, beta)?;
    let kernel_order = cast_usize::<T>(n) - beta;
    let params = EKParams::new(
        T::one(),
        kernel_order,
        EkGamma::Finite(-T::one()),
        EkGamma::Infinite,
    )?;
    let omega = move |a: T, b: T| a.powf(p) * b.powf(q);
    let h = fd_step(point.xi1);
    let kernel_tol = kernel_tolerance(tol, h, n);
    let kernel = move |a: T, b: T| ek_k(&params, omega, a, b, kernel_tol);
    let reduced = euler_product_apply(
        &kernel,
        n,
        T::one() - beta,
        -T::one(),
        T::zero(),
        point.xi1,
        point.xi2,
        h,
        tol,
    )?;
    let rhs = x.powf(-beta) * reduced;
    Ok(IdentityCheck {
        lhs,
        rhs,
        abs_diff: (lhs - rhs).abs(),
    })
}

/// Keeps the finite-difference stencil away from the origin.
fn fd_step<T: Real>(z_min: T) -> T {
    cast::<T>(0.02).min(z_min * cast(0.1)).max(cast(1e-3))
}

fn check_monomial_preconditions<T: Real>(
    p: T,
    q: T,
    alpha: T,
    beta: T,
    t: T,
    x: T,
    y: T,
) -> Result<()> {
    if p < T::zero() || q < T::zero() {
        return Err(Error::Domain {
            op: "verify_identity",
            msg: format!("monomial exponents must be nonnegative, got ({p}, {q})"),
        });
    }
    if !((p + q) * beta / alpha < T::one()) {
        return Err(Error::Domain {
            op: "verify_identity",
            msg: format!(
                "(p+q) beta/alpha = {} must stay below 1",
                (p + q) * beta / alpha
            ),
        });
    }
    for (name, v) in [("t", t), ("x", x), ("y", y)] {
        if !(v > T::zero() && v <= T::one()) {
            return Err(Error::Domain {
                op: "verify_identity",
                msg: format!("{name} = {v} outside (0, 1]"),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma;

    fn params(tau: f64, order: f64, g1: EkGamma<f64>, g2: EkGamma<f64>) -> EKParams<f64> {
        EKParams::new(tau, order, g1, g2).unwrap()
    }

    #[test]
    fn params_ceiling_rule() {
        let fin = EkGamma::Finite(1.0);
        assert_eq!(params(1.0, 0.0, fin, fin).n(), 0);
        assert_eq!(params(1.0, 0.3, fin, fin).n(), 1);
        assert_eq!(params(1.0, 1.0, fin, fin).n(), 1);
        assert_eq!(params(1.0, 1.2, fin, fin).n(), 2);
        assert!(EKParams::new(1.0, -0.1, fin, fin).is_err());
        assert!(EKParams::new(1.0, 0.5, EkGamma::Finite(0.0), fin).is_err());
    }

    #[test]
    fn similarity_vars_cases() {
        let p = similarity_vars(1.0, 0.3, 0.8, 0.7, 1.9).unwrap();
        assert_eq!((p.xi1, p.xi2), (0.3, 0.8));
        let p = similarity_vars(0.5_f64, 0.3, 0.8, 0.9, 0.9).unwrap();
        assert!((p.xi1 - 0.6).abs() < 1e-15);
        assert!((p.xi2 - 1.6).abs() < 1e-15);
        let p = similarity_vars(4.0_f64, 2.0, 1.0, 1.0, 0.5).unwrap();
        assert!((p.xi1 - 1.0).abs() < 1e-15);
        assert!(similarity_vars(0.0, 1.0, 1.0, 0.5, 0.5).is_err());
    }

    #[test]
    fn k_identity_branch() {
        let pr = params(1.3, 0.0, EkGamma::Finite(2.0), EkGamma::Infinite);
        let v = ek_k(&pr, |a, b| a * a + b, 0.7, 0.4, 1e-10).unwrap();
        assert_eq!(v, 0.7 * 0.7 + 0.4);
    }

    #[test]
    fn k_constant_closed_form() {
        // K^{tau,a}(1) = Gamma(tau)/Gamma(tau+a).
        for &(tau, a) in &[(1.0, 0.5), (0.5, 0.2), (2.0, 0.8)] {
            let pr = params(tau, a, EkGamma::Finite(1.5), EkGamma::Finite(2.5));
            let v = ek_k(&pr, |_, _| 1.0, 0.3, 0.9, 1e-10).unwrap();
            let exact = gamma(tau).unwrap() / gamma(tau + a).unwrap();
            assert!(
                (v - exact).abs() < 1e-9,
                "tau={tau}, a={a}: {v} vs {exact}"
            );
        }
    }

    #[test]
    fn k_power_closed_form() {
        // K^{tau,a}(z1^p) = z1^p Gamma(tau - p/g1)/Gamma(tau + a - p/g1).
        let (tau, a, p, g1) = (1.0, 0.6, 0.5, 2.0);
        let pr = params(tau, a, EkGamma::Finite(g1), EkGamma::Infinite);
        let z1 = 0.8;
        let v = ek_k(&pr, |zz1, _| zz1.powf(p), z1, 0.5, 1e-10).unwrap();
        let exact =
            z1.powf(p) * gamma(tau - p / g1).unwrap() / gamma(tau + a - p / g1).unwrap();
        assert!((v - exact).abs() < 1e-9, "{v} vs {exact}");
    }

    #[test]
    fn k_detects_non_integrable_growth() {
        // tau - p/g1 <= 0 makes the integral diverge.
        let pr = params(0.4, 0.5, EkGamma::Finite(1.0), EkGamma::Infinite);
        let r = ek_k(&pr, |z1, _| z1.powf(0.9), 1.0, 1.0, 1e-9);
        assert!(r.is_err());
    }

    #[test]
    fn p_constant_case() {
        // Derivative terms vanish on constants: P = tau * K = tau/Gamma(1+a)
        // at tau = 1 .. K(1) = 1/Gamma(1+a).
        let a = 0.45;
        let pr = params(1.0, a, EkGamma::Finite(1.7), EkGamma::Finite(1.7));
        let v = ek_p(&pr, |_, _| 1.0, 0.6, 0.9, 1e-7, 0.02).unwrap();
        let exact = 1.0 / gamma(1.0 + a).unwrap();
        assert!((v - exact).abs() < 1e-7, "{v} vs {exact}");
    }

    #[test]
    fn p_power_eigenfunction() {
        // On z1^p the single Euler factor acts as (tau - p/g1).
        let (tau, a, p, g1) = (1.2_f64, 0.5, 0.4, 2.0);
        let pr = params(tau, a, EkGamma::Finite(g1), EkGamma::Infinite);
        let z1 = 0.9_f64;
        let k = z1.powf(p) * gamma(tau - p / g1).unwrap() / gamma(tau + a - p / g1).unwrap();
        let v = ek_p(&pr, |zz1, _| zz1.powf(p), z1, 0.4, 1e-7, 0.02).unwrap();
        let exact = (tau - p / g1) * k;
        assert!((v - exact).abs() < 1e-7, "{v} vs {exact}");
    }

    #[test]
    fn p_with_infinite_gammas_reduces_to_scaling() {
        // Both sentinels: K leaves omega's arguments alone and no Euler
        // derivative terms survive; P = tau * Gamma(tau)/Gamma(tau+a) * omega.
        let (tau, a) = (1.5, 0.7);
        let pr = params(tau, a, EkGamma::Infinite, EkGamma::Infinite);
        let omega = |z1: f64, z2: f64| (1.3 * z1).sin() + z2 * z2;
        let v = ek_p(&pr, omega, 0.4, 0.8, 1e-8, 0.02).unwrap();
        let exact = tau * gamma(tau).unwrap() / gamma(tau + a).unwrap() * omega(0.4, 0.8);
        assert!((v - exact).abs() < 1e-8, "{v} vs {exact}");
    }

    #[test]
    fn time_identity_constant() {
        // p = q = 0: both sides are the RL derivative of the constant 1.
        let (alpha, beta, t) = (0.7_f64, 0.5, 0.6);
        let check = verify_time_identity(0.0, 0.0, alpha, beta, t, 0.5, 0.5, 1e-7).unwrap();
        let exact = t.powf(-alpha) / gamma(1.0 - alpha).unwrap();
        assert!((check.lhs - exact).abs() < 1e-12, "lhs {} vs {exact}", check.lhs);
        assert!(check.abs_diff < 1e-7, "diff {}", check.abs_diff);
    }

    #[test]
    fn time_identity_monomial() {
        let check =
            verify_time_identity(0.2, 0.1, 0.8, 0.5, 0.5, 0.5, 0.5, 1e-6).unwrap();
        assert!(check.abs_diff <= 1e-6, "lhs {} rhs {}", check.lhs, check.rhs);
    }

    #[test]
    fn time_identity_classical_limit() {
        // alpha = 1: kernel order 0 (identity branch), one Euler factor;
        // the identity collapses to the classical chain rule.
        let check = verify_time_identity(0.3, 0.2, 1.0, 0.9, 0.7, 0.8, 0.6, 1e-7).unwrap();
        assert!(check.abs_diff <= 1e-7, "lhs {} rhs {}", check.lhs, check.rhs);
    }

    #[test]
    fn time_identity_rejects_bad_exponents() {
        assert!(verify_time_identity(0.8, 0.8, 0.5, 1.0, 0.5, 0.5, 0.5, 1e-6).is_err());
        assert!(verify_time_identity(-0.1, 0.0, 0.8, 0.5, 0.5, 0.5, 0.5, 1e-6).is_err());
        assert!(verify_time_identity(0.1, 0.0, 0.8, 0.5, 0.0, 0.5, 0.5, 1e-6).is_err());
    }

    #[test]
    fn space_identity_monomial() {
        let check =
            verify_space_identity(0.3, 0.0, 1.0, 0.5, 0.6, 0.5, 0.5, 1e-6).unwrap();
        assert!(check.abs_diff <= 1e-6, "lhs {} rhs {}", check.lhs, check.rhs);
    }

    #[test]
    fn space_identity_second_band() {
        // beta in (1, 2): two Euler factors.
        let check =
            verify_space_identity(0.25, 0.1, 0.9, 1.5, 0.7, 0.6, 0.8, 5e-6).unwrap();
        assert!(check.abs_diff <= 5e-6, "lhs {} rhs {}", check.lhs, check.rhs);
    }

    #[test]
    fn space_identity_unaffected_by_second_slot() {
        // gamma2 = inf: the xi2 dependence factors straight through.
        let check =
            verify_space_identity(0.2, 0.4, 1.0, 0.6, 0.8, 0.55, 0.65, 1e-6).unwrap();
        assert!(check.abs_diff <= 1e-6, "lhs {} rhs {}", check.lhs, check.rhs);
    }
}
