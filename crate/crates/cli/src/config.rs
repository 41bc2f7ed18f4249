use std::path::{Path, PathBuf};

use clap::Args;
use kwf_core::QuadratureConfig;

use crate::Failure;

/// Numerical settings. Values given here override the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// TOML or JSON file with quadrature and series settings
    #[arg(long, global = true, env = "KWF_CONFIG")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,
    #[arg(long, global = true)]
    pub max_subdivisions: Option<usize>,
    #[arg(long, global = true)]
    pub series_rel_tol: Option<f64>,
    #[arg(long, global = true)]
    pub max_terms: Option<usize>,
    #[arg(long, global = true)]
    pub fd_step: Option<f64>,
    #[arg(long, global = true)]
    pub fd_richardson_levels: Option<usize>,
    #[arg(long, global = true)]
    pub fd_tol: Option<f64>,
    #[arg(long, global = true)]
    pub tail_cutoff: Option<f64>,
}

fn parse_file(path: &Path) -> Result<QuadratureConfig, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read config {}: {e}", path.display())))?;
    let is_json =
        path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{');
    if is_json {
        serde_json::from_str(&text)
            .map_err(|e| Failure::usage(format!("config {}: {e}", path.display())))
    } else {
        toml::from_str(&text).map_err(|e| Failure::usage(format!("config {}: {e}", path.display())))
    }
}

impl ConfigArgs {
    pub fn resolve(&self) -> Result<QuadratureConfig, Failure> {
        let mut cfg = match &self.config {
            Some(path) => parse_file(path)?,
            None => QuadratureConfig::default(),
        };
        macro_rules! apply {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field { cfg.$field = v; })*
            };
        }
        apply!(
            rel_tol,
            abs_tol,
            max_subdivisions,
            series_rel_tol,
            max_terms,
            fd_step,
            fd_richardson_levels,
            fd_tol,
            tail_cutoff
        );
        cfg.validate().map_err(|e| Failure::usage(e.to_string()))?;
        Ok(cfg)
    }
}
