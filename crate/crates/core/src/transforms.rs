//! Katugampola operators applied to τ^{α/k−1}·Φ(λτ^{w/k}) (left kinds) and
//! τ^{−α/k}·Φ(λτ^{−w/k}) (right kinds), where Φ is a generalized k-Wright
//! function.
//!
//! Each operator maps Φ to a k-Wright function with one extra pair on top and
//! one on the bottom, both with slope w/ρ, times `prefactor · s^exponent`.
//! The rewrites are purely symbolic and generic over [`Scalar`], so they can
//! be checked exactly on rational inputs.

use serde::{Deserialize, Serialize};

use crate::closed_forms::OperatorKind;
use crate::config::QuadratureConfig;
use crate::error::{Error, Result};
use crate::kwright::{KWrightSpec, DELTA_BOUNDARY_TOL};
use crate::scalar::Scalar;

/// The power parameter α, series scale λ and argument exponent scale w of
/// the function being transformed.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerWrightArg<T = f64> {
    pub alpha: T,
    pub lambda: f64,
    pub w: T,
}

impl<T> PowerWrightArg<T> {
    pub fn new(alpha: T, lambda: f64, w: T) -> Self {
        Self { alpha, lambda, w }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformResult<T = f64> {
    pub prefactor: f64,
    pub exponent: T,
    /// +1 when the new argument is λ s^{w/k}, −1 for λ s^{−w/k}.
    pub arg_sign: i8,
    pub spec: KWrightSpec<T>,
}

fn domain(msg: String) -> Error {
    Error::Domain(msg)
}

fn common_checks<T: Scalar>(
    spec: &KWrightSpec<T>,
    arg: &PowerWrightArg<T>,
    gamma: &T,
    rho: &T,
) -> Result<()> {
    if !spec.k.is_positive() {
        return Err(domain(format!("k must be positive, got {:?}", spec.k)));
    }
    if !gamma.is_positive() {
        return Err(domain(format!("gamma > 0 violated: gamma = {:?}", gamma)));
    }
    if !rho.is_positive() {
        return Err(domain(format!("rho > 0 violated: rho = {:?}", rho)));
    }
    if !arg.alpha.is_positive() {
        return Err(domain(format!(
            "alpha > 0 violated: alpha = {:?}",
            arg.alpha
        )));
    }
    if !arg.w.is_positive() {
        return Err(domain(format!("w > 0 violated: w = {:?}", arg.w)));
    }
    if !arg.lambda.is_finite() {
        return Err(domain(format!("lambda must be finite, got {}", arg.lambda)));
    }
    let delta = spec.delta().to_f64();
    if !(delta > -1.0 && (delta + 1.0).abs() > DELTA_BOUNDARY_TOL) {
        return Err(Error::Divergence(format!(
            "Delta > -1 violated: Delta = {delta}"
        )));
    }
    Ok(())
}

fn k_over_rho_pow<T: Scalar>(k: &T, rho: &T, gamma: &T, sign: f64) -> f64 {
    (k.to_f64() / rho.to_f64()).powf(sign * gamma.to_f64())
}

fn left_top<T: Scalar>(alpha: &T, k: &T, rho: &T) -> T {
    (alpha.clone() + (rho.clone() - T::one()) * k.clone()) / rho.clone()
}

fn check_left_inner<T: Scalar>(alpha: &T, k: &T, rho: &T) -> Result<()> {
    if !left_top(alpha, k, rho).is_positive() {
        return Err(domain(format!(
            "alpha + (rho - 1) k > 0 violated: alpha = {alpha:?}, rho = {rho:?}, k = {k:?}"
        )));
    }
    Ok(())
}

/// Left-sided integral of order γ.
pub fn integral_left_transform<T: Scalar>(
    spec: &KWrightSpec<T>,
    arg: &PowerWrightArg<T>,
    gamma: T,
    rho: T,
) -> Result<TransformResult<T>> {
    common_checks(spec, arg, &gamma, &rho)?;
    let k = &spec.k;
    check_left_inner(&arg.alpha, k, &rho)?;
    let slope = arg.w.clone() / rho.clone();
    let top = left_top(&arg.alpha, k, &rho);
    let bottom = (arg.alpha.clone()
        + (rho.clone() * (gamma.clone() + T::one()) - T::one()) * k.clone())
        / rho.clone();
    Ok(TransformResult {
        prefactor: k_over_rho_pow(k, &rho, &gamma, 1.0),
        exponent: arg.alpha.clone() / k.clone() + rho * gamma - T::one(),
        arg_sign: 1,
        spec: spec.with_pairs((top, slope.clone()), (bottom, slope)),
    })
}

/// Right-sided integral of order γ; needs α/(ρk) > γ.
pub fn integral_right_transform<T: Scalar>(
    spec: &KWrightSpec<T>,
    arg: &PowerWrightArg<T>,
    gamma: T,
    rho: T,
) -> Result<TransformResult<T>> {
    common_checks(spec, arg, &gamma, &rho)?;
    let k = &spec.k;
    let ratio = arg.alpha.clone() / (rho.clone() * k.clone());
    if !(ratio > gamma) {
        return Err(domain(format!(
            "alpha/(rho k) > gamma violated: {ratio:?} <= {gamma:?}"
        )));
    }
    let slope = arg.w.clone() / rho.clone();
    let base = arg.alpha.clone() / rho.clone();
    let top = base.clone() - k.clone() * gamma.clone();
    Ok(TransformResult {
        prefactor: k_over_rho_pow(k, &rho, &gamma, 1.0),
        exponent: rho * gamma - arg.alpha.clone() / k.clone(),
        arg_sign: -1,
        spec: spec.with_pairs((top, slope.clone()), (base, slope)),
    })
}

/// Left-sided derivative of order γ.
pub fn derivative_left_transform<T: Scalar>(
    spec: &KWrightSpec<T>,
    arg: &PowerWrightArg<T>,
    gamma: T,
    rho: T,
) -> Result<TransformResult<T>> {
    common_checks(spec, arg, &gamma, &rho)?;
    let k = &spec.k;
    check_left_inner(&arg.alpha, k, &rho)?;
    let slope = arg.w.clone() / rho.clone();
    let top = left_top(&arg.alpha, k, &rho);
    let bottom = (arg.alpha.clone()
        + (rho.clone() * (T::one() - gamma.clone()) - T::one()) * k.clone())
        / rho.clone();
    Ok(TransformResult {
        prefactor: k_over_rho_pow(k, &rho, &gamma, -1.0),
        exponent: arg.alpha.clone() / k.clone() - rho * gamma - T::one(),
        arg_sign: 1,
        spec: spec.with_pairs((top, slope.clone()), (bottom, slope)),
    })
}

/// Right-sided derivative of order γ; needs α/(ρk) > 1 + ⌊γ⌋ − γ.
pub fn derivative_right_transform<T: Scalar>(
    spec: &KWrightSpec<T>,
    arg: &PowerWrightArg<T>,
    gamma: T,
    rho: T,
) -> Result<TransformResult<T>> {
    common_checks(spec, arg, &gamma, &rho)?;
    let k = &spec.k;
    let ratio = arg.alpha.clone() / (rho.clone() * k.clone());
    let bound = T::one() + gamma.floor() - gamma.clone();
    if !(ratio > bound) {
        return Err(domain(format!(
            "alpha/(rho k) > 1 + floor(gamma) - gamma violated: {ratio:?} <= {bound:?}"
        )));
    }
    let slope = arg.w.clone() / rho.clone();
    let base = arg.alpha.clone() / rho.clone();
    let top = base.clone() + k.clone() * gamma.clone();
    Ok(TransformResult {
        prefactor: k_over_rho_pow(k, &rho, &gamma, -1.0),
        exponent: -(rho * gamma) - arg.alpha.clone() / k.clone(),
        arg_sign: -1,
        spec: spec.with_pairs((top, slope.clone()), (base, slope)),
    })
}

/// Dispatches to the transform for `kind`.
pub fn transform<T: Scalar>(
    kind: OperatorKind,
    spec: &KWrightSpec<T>,
    arg: &PowerWrightArg<T>,
    gamma: T,
    rho: T,
) -> Result<TransformResult<T>> {
    match kind {
        OperatorKind::IntegralLeft => integral_left_transform(spec, arg, gamma, rho),
        OperatorKind::IntegralRight => integral_right_transform(spec, arg, gamma, rho),
        OperatorKind::DerivativeLeft => derivative_left_transform(spec, arg, gamma, rho),
        OperatorKind::DerivativeRight => derivative_right_transform(spec, arg, gamma, rho),
    }
}

/// The α for which the power factor of `kind` matches `exponent`:
/// α/k − 1 for left kinds, −α/k for right kinds.
pub fn alpha_for_exponent<T: Scalar>(kind: OperatorKind, exponent: &T, k: &T) -> T {
    if kind.is_left() {
        k.clone() * (exponent.clone() + T::one())
    } else {
        -(k.clone() * exponent.clone())
    }
}

impl<T: Scalar> TransformResult<T> {
    /// Applies a further operator to this result's function, keeping the
    /// accumulated prefactor. α is derived from the current exponent.
    pub fn then(
        &self,
        kind: OperatorKind,
        lambda: f64,
        w: T,
        gamma: T,
        rho: T,
    ) -> Result<TransformResult<T>> {
        let want_sign = if kind.is_left() { 1 } else { -1 };
        if self.arg_sign != want_sign {
            return Err(domain(format!(
                "{} needs an argument of sign {want_sign}, previous result has {}",
                kind.symbol(),
                self.arg_sign
            )));
        }
        let alpha = alpha_for_exponent(kind, &self.exponent, &self.spec.k);
        let arg = PowerWrightArg::new(alpha, lambda, w);
        let mut next = transform(kind, &self.spec, &arg, gamma, rho)?;
        next.prefactor *= self.prefactor;
        Ok(next)
    }
}

/// prefactor · s^exponent · Φ_new(λ s^{±w/k}).
pub fn evaluate_transform(
    result: &TransformResult<f64>,
    arg: &PowerWrightArg<f64>,
    s: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(domain(format!("s must be positive, got {s}")));
    }
    let z = arg.lambda * s.powf(f64::from(result.arg_sign) * arg.w / result.spec.k);
    let phi = result.spec.eval(z, cfg)?;
    Ok(result.prefactor * s.powf(result.exponent) * phi)
}
