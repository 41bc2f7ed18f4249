//! Closed-form images of powers and exponentials under the four Katugampola
//! operators.
//!
//! Derivative coefficients carry the prefactor ρ^{γ}. This is the value
//! obtained by applying (±s^{1−ρ} d/ds)^n to the order-(n−γ) integral image:
//! the n differentiations contribute ρ^n, which cancels the ρ^{−(n−γ)} of the
//! inner integral. Coefficients are assembled in log-magnitude/sign form and
//! exponentiated once.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special_fn::ln_gamma;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OperatorKind {
    IntegralLeft,
    IntegralRight,
    DerivativeLeft,
    DerivativeRight,
}

impl OperatorKind {
    pub fn is_integral(self) -> bool {
        matches!(
            self,
            OperatorKind::IntegralLeft | OperatorKind::IntegralRight
        )
    }

    pub fn is_left(self) -> bool {
        matches!(
            self,
            OperatorKind::IntegralLeft | OperatorKind::DerivativeLeft
        )
    }

    /// Short symbol used on the command line.
    pub fn symbol(self) -> &'static str {
        match self {
            OperatorKind::IntegralLeft => "I0+",
            OperatorKind::IntegralRight => "I-",
            OperatorKind::DerivativeLeft => "D0+",
            OperatorKind::DerivativeRight => "D-",
        }
    }
}

impl std::str::FromStr for OperatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            OperatorKind::IntegralLeft,
            OperatorKind::IntegralRight,
            OperatorKind::DerivativeLeft,
            OperatorKind::DerivativeRight,
        ]
        .into_iter()
        .find(|k| k.symbol() == s)
        .ok_or_else(|| {
            Error::Domain(format!(
                "unknown operator `{s}` (expected I0+, I-, D0+ or D-)"
            ))
        })
    }
}

/// One Katugampola operator: kind, order γ, exponent ρ and n = 1 + ⌊γ⌋.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatorSpec {
    pub kind: OperatorKind,
    pub gamma: f64,
    pub rho: f64,
    pub order_n: u32,
}

impl OperatorSpec {
    pub fn new(kind: OperatorKind, gamma: f64, rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::Domain(format!("rho must be positive, got {rho}")));
        }
        let gamma_ok = if kind.is_integral() {
            gamma > 0.0
        } else {
            gamma >= 0.0
        };
        if !(gamma_ok && gamma.is_finite()) {
            return Err(Error::Domain(format!(
                "order gamma = {gamma} not allowed for {kind:?}"
            )));
        }
        Ok(Self {
            kind,
            gamma,
            rho,
            order_n: 1 + gamma.floor() as u32,
        })
    }
}

/// The image `coefficient · s^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerImage {
    pub coefficient: f64,
    pub exponent: f64,
}

impl PowerImage {
    pub fn at(&self, s: f64) -> f64 {
        self.coefficient * s.powf(self.exponent)
    }
}

/// exp(ln_pre) · ∏Γ(num) / ∏Γ(den); a pole in `den` gives 0.
fn gamma_ratio(ln_pre: f64, num: &[f64], den: &[f64]) -> Result<f64> {
    let mut ln_abs = ln_pre;
    let mut sign = 1.0;
    for &x in num {
        let (lg, sg) = ln_gamma(x)?;
        ln_abs += lg;
        sign *= sg;
    }
    for &x in den {
        match ln_gamma(x) {
            Ok((lg, sg)) => {
                ln_abs -= lg;
                sign *= sg;
            }
            Err(Error::Pole { .. }) => return Ok(0.0),
            Err(e) => return Err(e),
        }
    }
    let v = sign * ln_abs.exp();
    if v.is_infinite() {
        return Err(Error::Overflow(format!(
            "coefficient exp({ln_abs}) exceeds f64 range"
        )));
    }
    Ok(v)
}

fn finite(alpha: f64) -> Result<()> {
    if alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("alpha must be finite, got {alpha}")))
    }
}

/// Image of τ^{α−1}.
///
/// Admissible α (the images are only defined where the underlying integral
/// converges): left kinds need 1 + (α−1)/ρ > 0; `IntegralRight` needs
/// (1−α)/ρ > γ; `DerivativeRight` needs (1−α)/ρ > n − γ.
pub fn power_image(op: &OperatorSpec, alpha: f64) -> Result<PowerImage> {
    finite(alpha)?;
    let OperatorSpec {
        kind,
        gamma,
        rho,
        order_n,
    } = *op;
    let ln_rho = rho.ln();
    match kind {
        OperatorKind::IntegralLeft | OperatorKind::DerivativeLeft => {
            let b = 1.0 + (alpha - 1.0) / rho;
            if !(b > 0.0) {
                return Err(Error::Domain(format!(
                    "left image of tau^(alpha-1) needs 1 + (alpha-1)/rho > 0, got {b} (alpha={alpha}, rho={rho})"
                )));
            }
            if kind == OperatorKind::IntegralLeft {
                Ok(PowerImage {
                    coefficient: gamma_ratio(-gamma * ln_rho, &[b], &[b + gamma])?,
                    exponent: rho * gamma + alpha - 1.0,
                })
            } else {
                Ok(PowerImage {
                    coefficient: gamma_ratio(gamma * ln_rho, &[b], &[b - gamma])?,
                    exponent: alpha - 1.0 - rho * gamma,
                })
            }
        }
        OperatorKind::IntegralRight => {
            let c = (1.0 - alpha) / rho;
            if !(c - gamma > 0.0) {
                return Err(Error::Domain(format!(
                    "right integral of tau^(alpha-1) needs (1-alpha)/rho > gamma, got {c} <= {gamma}"
                )));
            }
            Ok(PowerImage {
                coefficient: gamma_ratio(-gamma * ln_rho, &[c - gamma], &[c])?,
                exponent: rho * gamma + alpha - 1.0,
            })
        }
        OperatorKind::DerivativeRight => {
            let c = (1.0 - alpha) / rho;
            let inner = f64::from(order_n) - gamma;
            if !(c > inner) {
                return Err(Error::Domain(format!(
                    "right derivative of tau^(alpha-1) needs (1-alpha)/rho > n - gamma, got {c} <= {inner}"
                )));
            }
            Ok(PowerImage {
                coefficient: gamma_ratio(gamma * ln_rho, &[c + gamma], &[c])?,
                exponent: alpha - 1.0 - rho * gamma,
            })
        }
    }
}

/// Right integral of τ^{−α}: ρ^{−γ} Γ(α/ρ − γ)/Γ(α/ρ) · s^{ργ−α}, for α/ρ > γ.
pub fn power_image_negative(op: &OperatorSpec, alpha: f64) -> Result<PowerImage> {
    finite(alpha)?;
    if op.kind != OperatorKind::IntegralRight {
        return Err(Error::Domain(format!(
            "image of tau^(-alpha) is defined for IntegralRight only, got {:?}",
            op.kind
        )));
    }
    let a = alpha / op.rho;
    if !(a > op.gamma) {
        return Err(Error::Domain(format!(
            "image of tau^(-alpha) needs alpha/rho > gamma, got {a} <= {}",
            op.gamma
        )));
    }
    Ok(PowerImage {
        coefficient: gamma_ratio(-op.gamma * op.rho.ln(), &[a - op.gamma], &[a])?,
        exponent: op.rho * op.gamma - alpha,
    })
}

/// Image of (τ^ρ/ρ)^{α−1}, returned in the variable u = s^ρ/ρ: the image is
/// `coefficient · u^exponent`.
pub fn power_image_normalized(op: &OperatorSpec, alpha: f64) -> Result<PowerImage> {
    finite(alpha)?;
    let OperatorSpec {
        kind,
        gamma,
        order_n,
        ..
    } = *op;
    match kind {
        OperatorKind::IntegralLeft | OperatorKind::DerivativeLeft => {
            if !(alpha > 0.0) {
                return Err(Error::Domain(format!(
                    "normalized left image needs alpha > 0, got {alpha}"
                )));
            }
            if kind == OperatorKind::IntegralLeft {
                Ok(PowerImage {
                    coefficient: gamma_ratio(0.0, &[alpha], &[alpha + gamma])?,
                    exponent: alpha + gamma - 1.0,
                })
            } else {
                Ok(PowerImage {
                    coefficient: gamma_ratio(0.0, &[alpha], &[alpha - gamma])?,
                    exponent: alpha - gamma - 1.0,
                })
            }
        }
        OperatorKind::IntegralRight => {
            if !(gamma + alpha < 1.0) {
                return Err(Error::Domain(format!(
                    "normalized right integral needs gamma + alpha < 1, got {}",
                    gamma + alpha
                )));
            }
            Ok(PowerImage {
                coefficient: gamma_ratio(0.0, &[1.0 - gamma - alpha], &[1.0 - alpha])?,
                exponent: alpha + gamma - 1.0,
            })
        }
        OperatorKind::DerivativeRight => {
            let inner = f64::from(order_n) - gamma;
            if !(1.0 - alpha > inner) {
                return Err(Error::Domain(format!(
                    "normalized right derivative needs 1 - alpha > n - gamma, got {} <= {inner}",
                    1.0 - alpha
                )));
            }
            Ok(PowerImage {
                coefficient: gamma_ratio(0.0, &[1.0 + gamma - alpha], &[1.0 - alpha])?,
                exponent: alpha - gamma - 1.0,
            })
        }
    }
}

/// Coefficient c of the image c · e^{−λ s^ρ} of e^{−λ τ^ρ} under the right-sided operators.
pub fn exponential_image(op: &OperatorSpec, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!(
            "exponential image needs lambda > 0, got {lambda}"
        )));
    }
    let base = lambda * op.rho;
    match op.kind {
        OperatorKind::IntegralRight => Ok(base.powf(-op.gamma)),
        OperatorKind::DerivativeRight => Ok(base.powf(op.gamma)),
        other => Err(Error::Domain(format!(
            "exponential image is defined for right-sided operators, got {other:?}"
        ))),
    }
}
