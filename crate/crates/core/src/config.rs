use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances and budgets shared by the series evaluator and the numerical oracles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    /// Target relative error of a quadrature.
    pub rel_tol: f64,
    /// Absolute floor below which quadrature differences count as converged.
    pub abs_tol: f64,
    /// Maximum integrand evaluations for one finite-interval quadrature.
    pub max_subdivisions: usize,
    /// Relative size of a series term below which it counts as negligible.
    pub series_rel_tol: f64,
    /// Hard cap on the number of series terms.
    pub max_terms: usize,
    /// Coarsest finite-difference step, relative to the evaluation point.
    pub fd_step: f64,
    /// Number of step halvings combined by Richardson extrapolation.
    pub fd_richardson_levels: usize,
    /// Requested relative accuracy of a finite-difference derivative.
    pub fd_tol: f64,
    /// Relative integrand magnitude at which a right-sided tail counts as decayed.
    pub tail_cutoff: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_subdivisions: 2000,
            series_rel_tol: 1e-14,
            max_terms: 10_000,
            fd_step: 1e-2,
            fd_richardson_levels: 3,
            fd_tol: 1e-5,
            tail_cutoff: 1e-16,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("series_rel_tol", self.series_rel_tol),
            ("fd_step", self.fd_step),
            ("fd_tol", self.fd_tol),
            ("tail_cutoff", self.tail_cutoff),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!(
                    "config field `{name}` must be positive, got {v}"
                )));
            }
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Domain(
                "config field `max_subdivisions` must be >= 1".into(),
            ));
        }
        if self.max_terms == 0 {
            return Err(Error::Domain(
                "config field `max_terms` must be >= 1".into(),
            ));
        }
        if self.fd_richardson_levels == 0 {
            return Err(Error::Domain(
                "config field `fd_richardson_levels` must be >= 1".into(),
            ));
        }
        if self.fd_step >= 0.5 {
            return Err(Error::Domain(format!(
                "config field `fd_step` must be < 0.5, got {}",
                self.fd_step
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        QuadratureConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_non_positive_fields() {
        let cfg = QuadratureConfig {
            rel_tol: 0.0,
            ..Default::default()
        };
        assert!(cfg.validate().unwrap_err().to_string().contains("rel_tol"));
        let cfg = QuadratureConfig {
            max_subdivisions: 0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn partial_json_fills_defaults() {
        let cfg: QuadratureConfig = serde_json::from_str(r#"{"fd_step": 0.001}"#).unwrap();
        assert_eq!(cfg.fd_step, 0.001);
        assert_eq!(cfg.max_terms, 10_000);
        assert!(serde_json::from_str::<QuadratureConfig>(r#"{"bogus": 1}"#).is_err());
    }
}
