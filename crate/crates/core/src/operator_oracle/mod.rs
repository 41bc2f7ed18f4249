//! Numerical Katugampola operators on arbitrary real integrands.
//!
//! These are the ground truth the closed forms are checked against, so none
//! of them use a closed form internally. Integrals are computed after the
//! substitution x = τ^ρ / s^ρ, which leaves a pure algebraic kernel
//! (1 − x)^{γ−1} on [0, 1] for the left operator and (x − 1)^{γ−1} on
//! [1, ∞) for the right operator. Derivatives differentiate the quadratured
//! inner integral numerically in v = s^ρ/ρ, where s^{1−ρ} d/ds = d/dv.

pub mod diff;
pub mod quadrature;

pub use quadrature::Estimate;

use crate::config::QuadratureConfig;
use crate::error::{Error, Result};
use crate::special_fn::gamma;

fn check_order(gamma_order: f64, rho: f64, s: f64, strict: bool) -> Result<()> {
    let ok_gamma = if strict {
        gamma_order > 0.0
    } else {
        gamma_order >= 0.0
    };
    if !(ok_gamma && gamma_order.is_finite()) {
        return Err(Error::Domain(format!(
            "order gamma = {gamma_order} out of range"
        )));
    }
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::Domain(format!("rho must be positive, got {rho}")));
    }
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::Domain(format!("s must be positive, got {s}")));
    }
    Ok(())
}

fn kernel_prefactor(s: f64, gamma_order: f64, rho: f64) -> Result<f64> {
    Ok(rho.powf(-gamma_order) * s.powf(rho * gamma_order) / gamma(gamma_order)?)
}

/// Left-sided integral (ρ^{1−γ}/Γ(γ)) ∫_0^s τ^{ρ−1} f(τ) (s^ρ − τ^ρ)^{γ−1} dτ.
pub fn integral_left<F>(
    f: F,
    s: f64,
    gamma_order: f64,
    rho: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    check_order(gamma_order, rho, s, true)?;
    let pre = kernel_prefactor(s, gamma_order, rho)?;
    let inv_rho = 1.0 / rho;
    let est = quadrature::tanh_sinh(
        |_, x, one_minus_x| {
            let fv = f(s * (x.ln() * inv_rho).exp());
            if fv == 0.0 {
                0.0
            } else {
                one_minus_x.powf(gamma_order - 1.0) * fv
            }
        },
        0.0,
        1.0,
        cfg,
    )?;
    Ok(est.scale(pre))
}

/// Right-sided integral (ρ^{1−γ}/Γ(γ)) ∫_s^∞ τ^{ρ−1} f(τ) (τ^ρ − s^ρ)^{γ−1} dτ.
pub fn integral_right<F>(
    f: F,
    s: f64,
    gamma_order: f64,
    rho: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    check_order(gamma_order, rho, s, true)?;
    let pre = kernel_prefactor(s, gamma_order, rho)?;
    let inv_rho = 1.0 / rho;
    // u = τ^ρ/s^ρ − 1 ∈ (0, ∞)
    let est = quadrature::semi_infinite(
        |u| {
            let fv = f(s * (u.ln_1p() * inv_rho).exp());
            if fv == 0.0 {
                0.0
            } else {
                u.powf(gamma_order - 1.0) * fv
            }
        },
        cfg,
    )?;
    Ok(est.scale(pre))
}

fn derivative_common<I>(
    inner: I,
    s: f64,
    gamma_order: f64,
    rho: f64,
    sign: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate>
where
    I: Fn(f64, f64) -> Result<Estimate>,
{
    check_order(gamma_order, rho, s, false)?;
    let n = 1 + gamma_order.floor() as usize;
    let inner_order = n as f64 - gamma_order;
    let v0 = s.powf(rho) / rho;
    let to_s = |v: f64| (rho * v).powf(1.0 / rho);
    let h0 = cfg.fd_step * v0;
    if n as f64 * h0 / 2.0 >= v0 {
        return Err(Error::Domain(format!(
            "finite-difference stencil reaches s <= 0 at s = {s}"
        )));
    }
    let g = |v: f64| inner(to_s(v), inner_order).map(|e| e.value);
    let d = diff::nth_derivative(g, v0, n, h0, cfg.fd_richardson_levels)?;
    let scale = d.value.abs().max(g(v0)?.abs() / v0.powi(n as i32));
    if d.error > 10.0 * cfg.fd_tol * scale {
        return Err(Error::NonConverged {
            what: format!("Richardson extrapolation of order-{n} derivative at s = {s}"),
            estimate: sign * d.value,
            error: d.error,
        });
    }
    Ok(d.scale(sign.powi(n as i32)))
}

/// Left-sided derivative (s^{1−ρ} d/ds)^n (ρI_{0+}^{n−γ} f)(s), n = 1 + ⌊γ⌋.
pub fn derivative_left<F>(
    f: F,
    s: f64,
    gamma_order: f64,
    rho: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    derivative_common(
        |u, order| integral_left(&f, u, order, rho, cfg),
        s,
        gamma_order,
        rho,
        1.0,
        cfg,
    )
}

/// Right-sided derivative (−s^{1−ρ} d/ds)^n (ρI_−^{n−γ} f)(s), n = 1 + ⌊γ⌋.
pub fn derivative_right<F>(
    f: F,
    s: f64,
    gamma_order: f64,
    rho: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    derivative_common(
        |u, order| integral_right(&f, u, order, rho, cfg),
        s,
        gamma_order,
        rho,
        -1.0,
        cfg,
    )
}
