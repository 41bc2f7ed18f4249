use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use kwf_core::closed_forms::OperatorKind;
use kwf_core::transforms::transform;
use kwf_core::verify::{self, Grid, Status, Suite};
use kwf_core::{
    evaluate_transform, operator_oracle, Error, KWrightSpec, PowerWrightArg, QuadratureConfig,
    TransformResult,
};

mod config;

use config::ConfigArgs;

/// An error with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "kwf",
    version,
    about = "Generalized k-Wright functions under Katugampola fractional operators"
)]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a k-Wright series and report its convergence class
    Eval {
        /// k-Wright spec JSON file
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        z: f64,
    },
    /// Apply an operator symbolically to τ^(α/k-1)Φ(λτ^(w/k)) or τ^(-α/k)Φ(λτ^(-w/k))
    Transform {
        /// k-Wright spec JSON, or the JSON output of a previous transform ("-" reads stdin)
        spec: String,
        #[arg(long, value_parser = parse_op)]
        op: OperatorKind,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        rho: f64,
        /// required for a plain spec; derived from the exponent when chaining
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long)]
        w: f64,
        /// also evaluate the result at this s
        #[arg(long)]
        at: Option<f64>,
    },
    /// Apply an operator numerically by quadrature and finite differences
    Oracle {
        #[arg(long, value_parser = parse_op)]
        op: OperatorKind,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        rho: f64,
        /// integrand τ^(α-1)
        #[arg(long, allow_hyphen_values = true, group = "integrand")]
        power: Option<f64>,
        /// integrand e^(-λτ^ρ)
        #[arg(long, allow_hyphen_values = true, group = "integrand")]
        exp: Option<f64>,
        /// integrand built from a k-Wright spec file with --alpha, --lambda, --w
        #[arg(long, group = "integrand", requires_all = ["alpha", "lambda", "w"])]
        spec: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<f64>,
        #[arg(long)]
        w: Option<f64>,
        #[arg(long)]
        at: f64,
    },
    /// Compare closed forms with the numerical operators on parameter grids
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// JSON object overriding grid axes; a blank file gives an empty grid
        #[arg(long)]
        grid_file: Option<PathBuf>,
        /// report destination (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

fn parse_op(s: &str) -> Result<OperatorKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::usage(format!("reading stdin: {e}")))?;
        Ok(text)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read {path}: {e}")))
    }
}

fn load_spec(path: &Path) -> Result<KWrightSpec, Failure> {
    let text = read_input(&path.to_string_lossy())?;
    KWrightSpec::from_json(&text).map_err(|e| Failure::usage(e.to_string()))
}

/// Exit code for errors raised while computing: 2 for inputs outside a
/// hypothesis, 3 for numerical trouble.
fn compute_failure(e: Error) -> Failure {
    if e.is_numerical() {
        Failure::new(3, e.to_string())
    } else {
        Failure::new(2, e.to_string())
    }
}

fn cmd_eval(
    spec: &Path,
    z: f64,
    cfg: &QuadratureConfig,
    out: &mut impl Write,
) -> Result<(), Failure> {
    let spec = load_spec(spec)?;
    let report = spec.convergence();
    let value = spec.eval_detailed(z, cfg).map_err(|e| match e {
        Error::Divergence(_) => Failure::new(2, e.to_string()),
        Error::Pole { .. } | Error::Domain(_) => Failure::usage(e.to_string()),
        other => Failure::new(3, other.to_string()),
    })?;
    let _ = writeln!(out, "value: {}", value.value);
    let _ = writeln!(out, "terms: {}", value.terms);
    let _ = writeln!(out, "delta: {}", report.delta);
    let _ = writeln!(out, "mu: {}", report.mu);
    let _ = writeln!(out, "nu: {}", report.nu);
    let _ = writeln!(out, "class: {:?}", report.class);
    Ok(())
}

enum TransformInput {
    Spec(KWrightSpec),
    Chained(TransformResult),
}

fn parse_transform_input(text: &str) -> Result<TransformInput, Failure> {
    // only the first JSON value counts, so a previous `--at` value line is ignored
    let mut stream = serde_json::Deserializer::from_str(text).into_iter::<serde_json::Value>();
    let value = match stream.next() {
        Some(Ok(v)) => v,
        Some(Err(e)) => return Err(Failure::usage(format!("invalid JSON input: {e}"))),
        None => {
            return Err(Failure::usage(
                "empty input: expected a k-Wright spec or transform result",
            ))
        }
    };
    if value.get("prefactor").is_some() {
        let result: TransformResult = serde_json::from_value(value)
            .map_err(|e| Failure::usage(format!("invalid transform result JSON: {e}")))?;
        result
            .spec
            .validate()
            .map_err(|e| Failure::usage(e.to_string()))?;
        if result.arg_sign != 1 && result.arg_sign != -1 {
            return Err(Failure::usage(format!(
                "field `arg_sign` must be 1 or -1, got {}",
                result.arg_sign
            )));
        }
        Ok(TransformInput::Chained(result))
    } else {
        KWrightSpec::from_json(&value.to_string())
            .map(TransformInput::Spec)
            .map_err(|e| Failure::usage(e.to_string()))
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_transform(
    input: &str,
    op: OperatorKind,
    gamma: f64,
    rho: f64,
    alpha: Option<f64>,
    lambda: f64,
    w: f64,
    at: Option<f64>,
    cfg: &QuadratureConfig,
    out: &mut impl Write,
) -> Result<(), Failure> {
    let text = read_input(input)?;
    let (result, alpha) = match parse_transform_input(&text)? {
        TransformInput::Spec(spec) => {
            let alpha = alpha
                .ok_or_else(|| Failure::usage("--alpha is required when transforming a spec"))?;
            let arg = PowerWrightArg::new(alpha, lambda, w);
            (
                transform(op, &spec, &arg, gamma, rho).map_err(compute_failure)?,
                alpha,
            )
        }
        TransformInput::Chained(previous) => {
            if alpha.is_some() {
                return Err(Failure::usage(
                    "--alpha is derived from the previous exponent when chaining; omit it",
                ));
            }
            let next = previous
                .then(op, lambda, w, gamma, rho)
                .map_err(compute_failure)?;
            let alpha =
                kwf_core::transforms::alpha_for_exponent(op, &previous.exponent, &previous.spec.k);
            (next, alpha)
        }
    };
    let json = serde_json::to_string(&result).expect("transform result serializes");
    let _ = writeln!(out, "{json}");
    if let Some(s) = at {
        let arg = PowerWrightArg::new(alpha, lambda, w);
        let value = evaluate_transform(&result, &arg, s, cfg).map_err(compute_failure)?;
        let _ = writeln!(out, "value: {value}");
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_oracle(
    op: OperatorKind,
    gamma: f64,
    rho: f64,
    power: Option<f64>,
    exp: Option<f64>,
    spec: Option<&Path>,
    alpha: Option<f64>,
    lambda: Option<f64>,
    w: Option<f64>,
    at: f64,
    cfg: &QuadratureConfig,
    out: &mut impl Write,
) -> Result<(), Failure> {
    let apply = |f: &dyn Fn(f64) -> f64| match op {
        OperatorKind::IntegralLeft => operator_oracle::integral_left(f, at, gamma, rho, cfg),
        OperatorKind::IntegralRight => operator_oracle::integral_right(f, at, gamma, rho, cfg),
        OperatorKind::DerivativeLeft => operator_oracle::derivative_left(f, at, gamma, rho, cfg),
        OperatorKind::DerivativeRight => operator_oracle::derivative_right(f, at, gamma, rho, cfg),
    };
    let estimate = if let Some(a) = power {
        apply(&|t: f64| t.powf(a - 1.0))
    } else if let Some(l) = exp {
        apply(&|t: f64| (-l * t.powf(rho)).exp())
    } else if let Some(path) = spec {
        let spec = load_spec(path)?;
        let (alpha, lambda, w) = (
            alpha.unwrap_or(f64::NAN),
            lambda.unwrap_or(f64::NAN),
            w.unwrap_or(f64::NAN),
        );
        let (power, sign) = if op.is_left() {
            (alpha / spec.k - 1.0, 1.0)
        } else {
            (-alpha / spec.k, -1.0)
        };
        apply(&|t: f64| {
            let scale = t.powf(power);
            if scale == 0.0 {
                return 0.0;
            }
            spec.eval(lambda * t.powf(sign * w / spec.k), cfg)
                .map_or(f64::NAN, |v| scale * v)
        })
    } else {
        return Err(Failure::usage(
            "one of --power, --exp or --spec is required",
        ));
    };
    let estimate = estimate.map_err(compute_failure)?;
    let _ = writeln!(out, "value: {}", estimate.value);
    let _ = writeln!(out, "error: {:e}", estimate.error);
    Ok(())
}

fn cmd_verify(
    suite: &str,
    grid_file: Option<&Path>,
    out_path: Option<&Path>,
    format: Format,
    cfg: &QuadratureConfig,
    out: &mut impl Write,
) -> Result<(), Failure> {
    let suite: Suite = suite
        .parse()
        .map_err(|e: Error| Failure::usage(e.to_string()))?;
    let grid = match grid_file {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Failure::usage(format!("cannot read grid file {}: {e}", path.display()))
            })?;
            Grid::from_json(&text).map_err(|e| Failure::usage(e.to_string()))?
        }
        None => Grid::default(),
    };
    let report = verify::run_suite(suite, &grid, cfg);
    let mut body = Vec::new();
    match format {
        Format::Csv => report
            .write_csv(&mut body)
            .map_err(|e| Failure::usage(e.to_string()))?,
        Format::Json => {
            body = report.to_json().into_bytes();
            body.push(b'\n');
        }
    }
    match out_path {
        Some(path) => {
            std::fs::write(path, &body)
                .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
            let _ = write!(out, "{}", report.summary_table());
        }
        None => {
            let _ = out.write_all(&body);
            eprint!("{}", report.summary_table());
        }
    }
    let total = report.records.len();
    let oracle_errors = report.count(Status::OracleError);
    if total > 0 && oracle_errors * 10 > total {
        return Err(Failure::new(
            3,
            format!("oracle errors on {oracle_errors} of {total} cases"),
        ));
    }
    if !report.all_passed() {
        return Err(Failure::new(
            4,
            format!(
                "{} failed and {} oracle errors out of {total} cases",
                report.count(Status::Fail),
                oracle_errors
            ),
        ));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = cli.config.resolve()?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Eval { spec, z } => cmd_eval(&spec, z, &cfg, &mut out),
        Command::Transform {
            spec,
            op,
            gamma,
            rho,
            alpha,
            lambda,
            w,
            at,
        } => cmd_transform(&spec, op, gamma, rho, alpha, lambda, w, at, &cfg, &mut out),
        Command::Oracle {
            op,
            gamma,
            rho,
            power,
            exp,
            spec,
            alpha,
            lambda,
            w,
            at,
        } => cmd_oracle(
            op,
            gamma,
            rho,
            power,
            exp,
            spec.as_deref(),
            alpha,
            lambda,
            w,
            at,
            &cfg,
            &mut out,
        ),
        Command::Verify {
            suite,
            grid_file,
            out: out_path,
            format,
        } => cmd_verify(
            &suite,
            grid_file.as_deref(),
            out_path.as_deref(),
            format,
            &cfg,
            &mut out,
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
