//! Double-exponential (tanh-sinh) quadrature.
//!
//! Nodes cluster doubly exponentially at both ends, so integrable algebraic
//! endpoint singularities such as (1 − x)^{γ−1} are handled without special
//! weights. The integrand receives the distances to both endpoints computed
//! directly from the node formula, which keeps (1 − x) accurate all the way
//! down to ~1e-270.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::config::QuadratureConfig;
use crate::error::{Error, Result};

const T_MAX: f64 = 6.0;
const MIN_LEVEL: usize = 3;
// Nodes closer to an endpoint than this fraction of the interval may be
// dropped when the integrand is not finite there.
const DROP_FRACTION: f64 = 1e-100;

/// A numerical value with an a-posteriori error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub fn scale(self, c: f64) -> Self {
        Self {
            value: self.value * c,
            error: self.error * c.abs(),
        }
    }
}

impl std::ops::Add for Estimate {
    type Output = Estimate;

    fn add(self, rhs: Self) -> Self {
        Self {
            value: self.value + rhs.value,
            error: self.error + rhs.error,
        }
    }
}

fn max_level(max_evals: usize) -> usize {
    let mut level = 0;
    while ((2.0 * T_MAX * f64::from(1u32 << (level + 1))) as usize) < max_evals && level < 20 {
        level += 1;
    }
    level
}

/// ∫_a^b f over a finite interval; `f(x, x − a, b − x)`.
pub fn tanh_sinh<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Estimate>
where
    F: Fn(f64, f64, f64) -> f64,
{
    if !(a.is_finite() && b.is_finite() && b > a) {
        return Err(Error::Domain(format!(
            "tanh_sinh needs finite a < b, got [{a}, {b}]"
        )));
    }
    let width = b - a;
    let node = |t: f64| -> Result<f64> {
        let v = FRAC_PI_2 * t.sinh();
        let e = (-2.0 * v.abs()).exp();
        let near = e / (1.0 + e);
        let far = 1.0 / (1.0 + e);
        let weight = PI * t.cosh() * near * far * width;
        let (dl, dr) = if v >= 0.0 {
            (far * width, near * width)
        } else {
            (near * width, far * width)
        };
        if weight == 0.0 || dl == 0.0 || dr == 0.0 {
            return Ok(0.0);
        }
        let x = if v >= 0.0 { b - dr } else { a + dl };
        let fx = f(x, dl, dr);
        let contrib = weight * fx;
        if contrib.is_finite() {
            Ok(contrib)
        } else if near < DROP_FRACTION {
            Ok(0.0)
        } else {
            Err(Error::NonFinite { at: x })
        }
    };

    let top = max_level(cfg.max_subdivisions);
    let n0 = T_MAX as i64;
    let mut h = 1.0;
    let mut sum = 0.0;
    for j in -n0..=n0 {
        sum += node(j as f64)?;
    }
    let mut estimate = h * sum;
    let mut diff = f64::INFINITY;
    for level in 1..=top {
        h *= 0.5;
        let steps = (T_MAX / h) as i64;
        let mut fresh = 0.0;
        let mut j = 1;
        while j <= steps {
            let t = j as f64 * h;
            fresh += node(t)? + node(-t)?;
            j += 2;
        }
        let next = 0.5 * estimate + h * fresh;
        diff = (next - estimate).abs();
        estimate = next;
        if level >= MIN_LEVEL && diff <= (cfg.rel_tol * estimate.abs()).max(cfg.abs_tol) {
            return Ok(Estimate {
                value: estimate,
                error: diff,
            });
        }
    }
    Err(Error::NonConverged {
        what: format!("tanh-sinh on [{a}, {b}] after {top} levels"),
        estimate,
        error: diff,
    })
}

/// Confirms that `u·|g(u)|` falls below `tail_cutoff` times its running
/// maximum somewhere on u = 2^j, j ≤ 1000.
pub fn check_decay<G: Fn(f64) -> f64>(g: &G, cfg: &QuadratureConfig) -> Result<()> {
    let mut peak = 0.0_f64;
    let mut u = 1.0_f64;
    for _ in 0..=1000 {
        let h = u * g(u).abs();
        if !h.is_finite() {
            return Err(Error::Decay(format!(
                "integrand magnitude not finite at u = {u:e}"
            )));
        }
        peak = peak.max(h);
        if h == 0.0 || h < cfg.tail_cutoff * peak {
            return Ok(());
        }
        u *= 2.0;
    }
    Err(Error::Decay(format!(
        "u*|g(u)| still above {:e} of its peak at u = {u:e}",
        cfg.tail_cutoff
    )))
}

/// ∫_0^∞ g(u) du for g with an integrable singularity at u = 0 and decay at ∞.
///
/// Splits at u = 1: the head is a finite-interval rule, the tail is mapped
/// by u = 1/t onto (0, 1].
pub fn semi_infinite<G: Fn(f64) -> f64>(g: G, cfg: &QuadratureConfig) -> Result<Estimate> {
    check_decay(&g, cfg)?;
    let head = tanh_sinh(|_, dl, _| g(dl), 0.0, 1.0, cfg)?;
    let tail = tanh_sinh(
        |_, dl, _| {
            let u = 1.0 / dl;
            let gv = g(u);
            if gv == 0.0 {
                0.0
            } else {
                gv * u * u
            }
        },
        0.0,
        1.0,
        cfg,
    )?;
    Ok(head + tail)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn smooth_integrals() {
        let e = tanh_sinh(|x, _, _| x.exp(), 0.0, 1.0, &cfg()).unwrap();
        assert!((e.value - (1f64.exp() - 1.0)).abs() < 1e-14);
        let p = tanh_sinh(|x, _, _| x * x, -1.0, 2.0, &cfg()).unwrap();
        assert!((p.value - 3.0).abs() < 1e-14);
    }

    #[test]
    fn endpoint_singularities() {
        // ∫_0^1 (1 − x)^{-0.9} dx = 10
        let s = tanh_sinh(|_, _, dr| dr.powf(-0.9), 0.0, 1.0, &cfg()).unwrap();
        assert!((s.value - 10.0).abs() / 10.0 < 1e-12, "{s:?}");
        // ∫_0^1 x^{-1/2} (1 − x)^{-1/2} dx = π
        let s = tanh_sinh(|_, dl, dr| (dl * dr).powf(-0.5), 0.0, 1.0, &cfg()).unwrap();
        assert!((s.value - PI).abs() < 1e-13);
    }

    #[test]
    fn semi_infinite_integrals() {
        let s = semi_infinite(|u| (-u).exp(), &cfg()).unwrap();
        assert!((s.value - 1.0).abs() < 1e-14);
        // ∫_0^∞ u^{-1/2} (1+u)^{-2} du = B(1/2, 3/2) = π/2
        let s = semi_infinite(|u| u.powf(-0.5) * (1.0 + u).powi(-2), &cfg()).unwrap();
        assert!((s.value - PI / 2.0).abs() < 1e-13, "{s:?}");
        // slow algebraic tail: ∫_0^∞ (1+u)^{-1.25} du = 4
        let s = semi_infinite(|u| (1.0 + u).powf(-1.25), &cfg()).unwrap();
        assert!((s.value - 4.0).abs() < 1e-12, "{s:?}");
    }

    #[test]
    fn non_decaying_integrand_is_rejected() {
        let err = semi_infinite(|u| 1.0 + u, &cfg()).unwrap_err();
        assert!(matches!(err, Error::Decay(_)));
        let err = semi_infinite(|u| 1.0 / (1.0 + u), &cfg()).unwrap_err();
        assert!(matches!(err, Error::Decay(_)));
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let tight = QuadratureConfig {
            max_subdivisions: 20,
            ..cfg()
        };
        let err = tanh_sinh(|x, _, _| x.exp(), 0.0, 1.0, &tight).unwrap_err();
        assert!(matches!(err, Error::NonConverged { .. }));
    }

    #[test]
    fn interior_nan_is_an_error() {
        let err = tanh_sinh(
            |x, _, _| if (x - 0.5).abs() < 0.1 { f64::NAN } else { 1.0 },
            0.0,
            1.0,
            &cfg(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonFinite { .. }));
    }
}
