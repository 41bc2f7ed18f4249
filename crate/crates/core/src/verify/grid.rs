use serde::Deserialize;

use crate::error::{Error, Result};

/// Parameter values a suite is expanded over.
///
/// `None` means "use the suite's own default". `alpha` and `lambda` default
/// to values derived per case so that each hypothesis holds with a margin;
/// when given explicitly, inadmissible combinations are reported as skipped.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub k: Option<Vec<f64>>,
    pub gamma: Option<Vec<f64>>,
    pub rho: Option<Vec<f64>>,
    pub s: Option<Vec<f64>>,
    pub alpha: Option<Vec<f64>>,
    pub lambda: Option<Vec<f64>>,
    pub w: Option<Vec<f64>>,
}

impl Grid {
    /// A grid with every axis empty, so every suite expands to no cases.
    pub fn empty() -> Self {
        Grid {
            k: Some(vec![]),
            gamma: Some(vec![]),
            rho: Some(vec![]),
            s: Some(vec![]),
            alpha: Some(vec![]),
            lambda: Some(vec![]),
            w: Some(vec![]),
        }
    }

    /// Parses a grid file. A blank file is an empty grid; a JSON object
    /// overrides the axes it names.
    pub fn from_json(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Ok(Self::empty());
        }
        let grid: Grid = serde_json::from_str(text)
            .map_err(|e| Error::Domain(format!("invalid grid file: {e}")))?;
        for (name, axis) in [
            ("k", &grid.k),
            ("gamma", &grid.gamma),
            ("rho", &grid.rho),
            ("s", &grid.s),
            ("alpha", &grid.alpha),
            ("lambda", &grid.lambda),
            ("w", &grid.w),
        ] {
            if let Some(values) = axis {
                if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
                    return Err(Error::Domain(format!(
                        "field `{name}` contains a non-finite value {bad}"
                    )));
                }
            }
        }
        Ok(grid)
    }

    pub(crate) fn axis(values: &Option<Vec<f64>>, default: &[f64]) -> Vec<f64> {
        values.clone().unwrap_or_else(|| default.to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blank_file_is_empty_grid() {
        assert_eq!(Grid::from_json("  \n").unwrap(), Grid::empty());
    }

    #[test]
    fn partial_grid_keeps_defaults() {
        let g = Grid::from_json(r#"{"gamma": [0.5]}"#).unwrap();
        assert_eq!(g.gamma, Some(vec![0.5]));
        assert_eq!(g.rho, None);
        assert_eq!(Grid::axis(&g.rho, &[1.0, 2.0]), vec![1.0, 2.0]);
    }

    #[test]
    fn rejects_unknown_axes() {
        let err = Grid::from_json(r#"{"nu": [1]}"#).unwrap_err();
        assert!(err.to_string().contains("nu"), "{err}");
    }
}
