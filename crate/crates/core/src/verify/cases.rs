use std::collections::BTreeMap;

use super::grid::Grid;
use super::{
    rel_error, Params, Status, Theorem, VerificationRecord, COMPOSITION_TOL, DERIVATIVE_TOL,
    DERIVATIVE_TRANSFORM_TOL, INTEGRAL_TOL, INTEGRAL_TRANSFORM_TOL,
};
use crate::closed_forms::{
    exponential_image, power_image, power_image_negative, power_image_normalized, OperatorKind,
    OperatorSpec,
};
use crate::config::QuadratureConfig;
use crate::error::{Error, Result};
use crate::kwright::KWrightSpec;
use crate::operator_oracle::{self, Estimate};
use crate::transforms::{evaluate_transform, transform, PowerWrightArg, TransformResult};

const LEMMA_GAMMA: [f64; 4] = [0.3, 0.5, 1.0, 1.7];
const LEMMA_RHO: [f64; 3] = [0.5, 1.0, 2.0];
const S_VALUES: [f64; 3] = [0.5, 1.0, 2.0];
const LEFT_ALPHA: [f64; 3] = [0.8, 1.5, 2.5];
const MARGINS: [f64; 2] = [0.5, 1.25];
const EXP_LAMBDA: [f64; 2] = [0.5, 2.0];

const THEOREM_K: [f64; 2] = [1.0, 2.0];
const THEOREM_GAMMA: [f64; 3] = [0.4, 1.0, 1.6];
const THEOREM_RHO: [f64; 2] = [1.0, 2.0];
const THEOREM_LEFT_ALPHA: [f64; 2] = [1.0, 2.0];
const THEOREM_W: [f64; 2] = [1.0, 2.0];
const THEOREM_LAMBDA: [f64; 3] = [-0.5, 0.0, 0.5];

use OperatorKind::*;

/// What a case computes on each side.
#[derive(Debug, Clone, PartialEq)]
pub enum Job {
    /// τ^{α−1}
    Power { kind: OperatorKind, alpha: f64 },
    /// e^{−λτ^ρ}
    Exponential { kind: OperatorKind, lambda: f64 },
    /// (τ^ρ/ρ)^{α−1}
    Normalized { kind: OperatorKind, alpha: f64 },
    /// τ^{−α}
    NegativePower { alpha: f64 },
    /// τ^{α/k−1}Φ(λτ^{w/k}) or τ^{−α/k}Φ(λτ^{−w/k})
    Transform {
        kind: OperatorKind,
        spec: KWrightSpec,
        arg: PowerWrightArg,
    },
    /// `inner` followed by its matching derivative, against the original function
    Composition {
        inner: OperatorKind,
        spec: KWrightSpec,
        arg: PowerWrightArg,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub id: String,
    pub theorem: Theorem,
    pub params: Params,
    pub s: f64,
    pub tolerance: f64,
    pub job: Job,
}

fn kind_tolerance(kind: OperatorKind) -> f64 {
    if kind.is_integral() {
        INTEGRAL_TOL
    } else {
        DERIVATIVE_TOL
    }
}

fn order_n(gamma: f64) -> f64 {
    1.0 + gamma.floor()
}

fn oracle<F: Fn(f64) -> f64>(
    kind: OperatorKind,
    f: F,
    s: f64,
    gamma: f64,
    rho: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    match kind {
        IntegralLeft => operator_oracle::integral_left(f, s, gamma, rho, cfg),
        IntegralRight => operator_oracle::integral_right(f, s, gamma, rho, cfg),
        DerivativeLeft => operator_oracle::derivative_left(f, s, gamma, rho, cfg),
        DerivativeRight => operator_oracle::derivative_right(f, s, gamma, rho, cfg),
    }
}

/// τ^{α/k−1}Φ(λτ^{w/k}) for left kinds, τ^{−α/k}Φ(λτ^{−w/k}) for right kinds.
fn power_wright_fn<'a>(
    kind: OperatorKind,
    spec: &'a KWrightSpec,
    arg: &'a PowerWrightArg,
    cfg: &'a QuadratureConfig,
) -> impl Fn(f64) -> f64 + 'a {
    let (power, sign) = if kind.is_left() {
        (arg.alpha / spec.k - 1.0, 1.0)
    } else {
        (-arg.alpha / spec.k, -1.0)
    };
    move |t: f64| {
        let scale = t.powf(power);
        if scale == 0.0 {
            return 0.0;
        }
        match spec.eval(arg.lambda * t.powf(sign * arg.w / spec.k), cfg) {
            Ok(v) => scale * v,
            Err(_) => f64::NAN,
        }
    }
}

fn same_pairs_approx(a: &KWrightSpec, b: &KWrightSpec) -> bool {
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0);
    // multiset match up to rounding: each pair of `x` claims one close, unused pair of `y`
    let lists_match = |x: &[(f64, f64)], y: &[(f64, f64)]| {
        if x.len() != y.len() {
            return false;
        }
        let mut used = vec![false; y.len()];
        x.iter().all(|p| {
            match (0..y.len()).find(|&j| !used[j] && close(p.0, y[j].0) && close(p.1, y[j].1)) {
                Some(j) => {
                    used[j] = true;
                    true
                }
                None => false,
            }
        })
    };
    close(a.k, b.k) && lists_match(&a.top, &b.top) && lists_match(&a.bottom, &b.bottom)
}

fn checked_transform(
    kind: OperatorKind,
    spec: &KWrightSpec,
    arg: &PowerWrightArg,
    gamma: f64,
    rho: f64,
) -> Result<std::result::Result<TransformResult, String>> {
    let r = transform(kind, spec, arg, gamma, rho)?;
    if r.spec.delta() != spec.delta() {
        return Ok(Err(format!(
            "Delta changed from {} to {} under {}",
            spec.delta(),
            r.spec.delta(),
            kind.symbol()
        )));
    }
    Ok(Ok(r))
}

enum Closed {
    Value(f64),
    Structural(String),
}

type Input<'a> = Box<dyn Fn(f64) -> f64 + Sync + 'a>;

impl Case {
    fn closed(&self, cfg: &QuadratureConfig) -> Result<Closed> {
        let Params { gamma, rho, .. } = self.params;
        let s = self.s;
        Ok(match &self.job {
            Job::Power { kind, alpha } => {
                Closed::Value(power_image(&OperatorSpec::new(*kind, gamma, rho)?, *alpha)?.at(s))
            }
            Job::Exponential { kind, lambda } => {
                let c = exponential_image(&OperatorSpec::new(*kind, gamma, rho)?, *lambda)?;
                Closed::Value(c * (-lambda * s.powf(rho)).exp())
            }
            Job::Normalized { kind, alpha } => {
                let img = power_image_normalized(&OperatorSpec::new(*kind, gamma, rho)?, *alpha)?;
                Closed::Value(img.at(s.powf(rho) / rho))
            }
            Job::NegativePower { alpha } => Closed::Value(
                power_image_negative(&OperatorSpec::new(IntegralRight, gamma, rho)?, *alpha)?.at(s),
            ),
            Job::Transform { kind, spec, arg } => {
                match checked_transform(*kind, spec, arg, gamma, rho)? {
                    Ok(r) => Closed::Value(evaluate_transform(&r, arg, s, cfg)?),
                    Err(msg) => Closed::Structural(msg),
                }
            }
            Job::Composition { inner, spec, arg } => {
                let outer = if inner.is_left() {
                    DerivativeLeft
                } else {
                    DerivativeRight
                };
                let first = match checked_transform(*inner, spec, arg, gamma, rho)? {
                    Ok(r) => r,
                    Err(msg) => return Ok(Closed::Structural(msg)),
                };
                let second = first.then(outer, arg.lambda, arg.w, gamma, rho)?;
                if second.spec.delta() != spec.delta() {
                    return Ok(Closed::Structural(format!(
                        "Delta changed from {} to {} under composition",
                        spec.delta(),
                        second.spec.delta()
                    )));
                }
                let top = *first.spec.top.last().expect("appended pair");
                let bottom = *first.spec.bottom.last().expect("appended pair");
                let expected = spec.with_pairs(top, bottom).with_pairs(bottom, top);
                if !same_pairs_approx(&second.spec, &expected) {
                    return Ok(Closed::Structural(format!(
                        "composite pairs {:?} do not cancel to {:?}",
                        second.spec, expected
                    )));
                }
                Closed::Value(evaluate_transform(&second, arg, s, cfg)?)
            }
        })
    }

    /// The function the operator acts on, or `None` for composition cases,
    /// which compare against the function itself.
    fn input<'a>(&'a self, cfg: &'a QuadratureConfig) -> Option<(OperatorKind, Input<'a>)> {
        let rho = self.params.rho;
        match &self.job {
            Job::Power { kind, alpha } => {
                Some((*kind, Box::new(move |t: f64| t.powf(alpha - 1.0))))
            }
            Job::Exponential { kind, lambda } => {
                Some((*kind, Box::new(move |t: f64| (-lambda * t.powf(rho)).exp())))
            }
            Job::Normalized { kind, alpha } => Some((
                *kind,
                Box::new(move |t: f64| (t.powf(rho) / rho).powf(alpha - 1.0)),
            )),
            Job::NegativePower { alpha } => {
                Some((IntegralRight, Box::new(move |t: f64| t.powf(-alpha))))
            }
            Job::Transform { kind, spec, arg } => {
                Some((*kind, Box::new(power_wright_fn(*kind, spec, arg, cfg))))
            }
            Job::Composition { .. } => None,
        }
    }

    fn oracle(&self, cfg: &QuadratureConfig) -> Result<Estimate> {
        let Params { gamma, rho, .. } = self.params;
        let s = self.s;
        match (&self.job, self.input(cfg)) {
            (Job::Composition { inner, spec, arg }, _) => {
                let value = power_wright_fn(*inner, spec, arg, cfg)(s);
                if value.is_finite() {
                    Ok(Estimate { value, error: 0.0 })
                } else {
                    Err(Error::NonFinite { at: s })
                }
            }
            (_, Some((kind, f))) => oracle(kind, &*f, s, gamma, rho, cfg),
            (_, None) => unreachable!("only composition cases lack an input function"),
        }
    }

    /// Size of a derivative image that is not itself small: the inner
    /// integral of order n − γ divided by v^n, v = s^ρ/ρ. A derivative whose
    /// value crosses zero is compared against this instead of against itself.
    fn derivative_scale(&self, cfg: &QuadratureConfig) -> f64 {
        let Params { gamma, rho, .. } = self.params;
        let Some((kind, f)) = self.input(cfg) else {
            return 0.0;
        };
        if kind.is_integral() {
            return 0.0;
        }
        let n = order_n(gamma);
        let inner_kind = if kind.is_left() {
            IntegralLeft
        } else {
            IntegralRight
        };
        match oracle(inner_kind, &*f, self.s, n - gamma, rho, cfg) {
            Ok(est) => est.value.abs() / (self.s.powf(rho) / rho).powf(n),
            Err(_) => 0.0,
        }
    }

    /// Runs the case. The second value reports, for derivative power images
    /// with ρ ≠ 1, whether the alternative ρ^{γ−n} prefactor would also pass.
    pub fn run(&self, cfg: &QuadratureConfig) -> (VerificationRecord, Option<bool>) {
        let mut rec = VerificationRecord {
            case_id: self.id.clone(),
            theorem: self.theorem,
            params: self.params,
            s: self.s,
            closed_value: f64::NAN,
            oracle_value: f64::NAN,
            rel_error: f64::NAN,
            status: Status::DomainSkipped,
            tolerance: self.tolerance,
            detail: None,
        };
        let closed = match self.closed(cfg) {
            Ok(Closed::Value(v)) => v,
            Ok(Closed::Structural(msg)) => {
                rec.status = Status::Fail;
                rec.detail = Some(msg);
                return (rec, None);
            }
            Err(e) => {
                rec.status = if e.is_numerical() {
                    Status::Fail
                } else {
                    Status::DomainSkipped
                };
                rec.detail = Some(e.to_string());
                return (rec, None);
            }
        };
        rec.closed_value = closed;
        let oracle = match self.oracle(cfg) {
            Ok(est) => est.value,
            Err(e) => {
                rec.status = if e.is_numerical() {
                    Status::OracleError
                } else {
                    Status::DomainSkipped
                };
                rec.detail = Some(e.to_string());
                return (rec, None);
            }
        };
        rec.oracle_value = oracle;
        let floor = self.derivative_scale(cfg);
        let error_of = |c: f64| rel_error(c, oracle, floor);
        rec.rel_error = error_of(closed);
        let passes = |c: f64| c.is_finite() && oracle.is_finite() && error_of(c) <= self.tolerance;
        rec.status = if passes(closed) {
            Status::Pass
        } else {
            Status::Fail
        };
        let alt = match (self.theorem, self.params.rho) {
            (Theorem::Lemma2_2 | Theorem::Lemma2_4, rho) if rho != 1.0 => {
                Some(passes(closed * rho.powf(-order_n(self.params.gamma))))
            }
            _ => None,
        };
        (rec, alt)
    }
}

struct Builder {
    cases: Vec<Case>,
    counts: BTreeMap<Theorem, usize>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            cases: Vec::new(),
            counts: BTreeMap::new(),
        }
    }

    fn push(&mut self, theorem: Theorem, params: Params, s: f64, tolerance: f64, job: Job) {
        let counter = self.counts.entry(theorem).or_default();
        let index = *counter;
        *counter += 1;
        self.cases.push(Case {
            id: format!("{}-{:05}", theorem.name(), index),
            theorem,
            params,
            s,
            tolerance,
            job,
        });
    }
}

/// Admissible α for a power-type case: explicit grid values, or values
/// derived from margins above the relevant bound.
fn alphas(grid: &Grid, derived: impl Fn(f64) -> f64, defaults: Option<&[f64]>) -> Vec<f64> {
    match (&grid.alpha, defaults) {
        (Some(values), _) => values.clone(),
        (None, Some(d)) => d.to_vec(),
        (None, None) => MARGINS.iter().map(|&m| derived(m)).collect(),
    }
}

pub fn lemma2(grid: &Grid) -> Vec<Case> {
    let mut b = Builder::new();
    let gammas = Grid::axis(&grid.gamma, &LEMMA_GAMMA);
    let rhos = Grid::axis(&grid.rho, &LEMMA_RHO);
    let ss = Grid::axis(&grid.s, &S_VALUES);
    let lambdas = Grid::axis(&grid.lambda, &EXP_LAMBDA);
    for &gamma in &gammas {
        for &rho in &rhos {
            let n = order_n(gamma);
            let power_kinds: [(Theorem, OperatorKind, Vec<f64>); 4] = [
                (
                    Theorem::Lemma2_1,
                    IntegralLeft,
                    alphas(grid, |_| 0.0, Some(&LEFT_ALPHA)),
                ),
                (
                    Theorem::Lemma2_2,
                    DerivativeLeft,
                    alphas(grid, |_| 0.0, Some(&LEFT_ALPHA)),
                ),
                (
                    Theorem::Lemma2_3,
                    IntegralRight,
                    alphas(grid, |m| 1.0 - rho * (gamma + m), None),
                ),
                (
                    Theorem::Lemma2_4,
                    DerivativeRight,
                    alphas(grid, |m| 1.0 - rho * (n - gamma + m), None),
                ),
            ];
            for (theorem, kind, alpha_values) in power_kinds {
                for &alpha in &alpha_values {
                    for &s in &ss {
                        let params = Params {
                            gamma,
                            rho,
                            alpha: Some(alpha),
                            ..Default::default()
                        };
                        b.push(
                            theorem,
                            params,
                            s,
                            kind_tolerance(kind),
                            Job::Power { kind, alpha },
                        );
                    }
                }
            }
            for (theorem, kind) in [
                (Theorem::Lemma2_5, IntegralRight),
                (Theorem::Lemma2_6, DerivativeRight),
            ] {
                for &lambda in &lambdas {
                    for &s in &ss {
                        let params = Params {
                            gamma,
                            rho,
                            lambda: Some(lambda),
                            ..Default::default()
                        };
                        b.push(
                            theorem,
                            params,
                            s,
                            kind_tolerance(kind),
                            Job::Exponential { kind, lambda },
                        );
                    }
                }
            }
        }
    }
    b.cases
}

pub fn remark1(grid: &Grid) -> Vec<Case> {
    let mut b = Builder::new();
    let gammas = Grid::axis(&grid.gamma, &LEMMA_GAMMA);
    let rhos = Grid::axis(&grid.rho, &LEMMA_RHO);
    let ss = Grid::axis(&grid.s, &S_VALUES);
    for &gamma in &gammas {
        for &rho in &rhos {
            let n = order_n(gamma);
            let kinds: [(OperatorKind, Vec<f64>); 4] = [
                (IntegralLeft, alphas(grid, |_| 0.0, Some(&LEFT_ALPHA))),
                (DerivativeLeft, alphas(grid, |_| 0.0, Some(&LEFT_ALPHA))),
                (IntegralRight, alphas(grid, |m| 1.0 - gamma - m, None)),
                (
                    DerivativeRight,
                    alphas(grid, |m| 1.0 - (n - gamma) - m, None),
                ),
            ];
            for (kind, alpha_values) in kinds {
                for &alpha in &alpha_values {
                    for &s in &ss {
                        let params = Params {
                            gamma,
                            rho,
                            alpha: Some(alpha),
                            ..Default::default()
                        };
                        b.push(
                            Theorem::Remark1a,
                            params,
                            s,
                            kind_tolerance(kind),
                            Job::Normalized { kind, alpha },
                        );
                    }
                }
            }
            for alpha in alphas(grid, |m| rho * (gamma + m), None) {
                for &s in &ss {
                    let params = Params {
                        gamma,
                        rho,
                        alpha: Some(alpha),
                        ..Default::default()
                    };
                    b.push(
                        Theorem::Remark1b,
                        params,
                        s,
                        INTEGRAL_TOL,
                        Job::NegativePower { alpha },
                    );
                }
            }
        }
    }
    b.cases
}

/// The base functions the theorem suites act on: the exponential series
/// and a spec with unequal slopes and two bottom pairs.
fn base_specs(k: f64) -> [KWrightSpec; 2] {
    [
        KWrightSpec::new(k, vec![(k, k)], vec![(k, k)]),
        KWrightSpec::new(
            k,
            vec![(1.5 * k, 0.5 * k)],
            vec![(2.0 * k, k), (0.7 * k, 0.8 * k)],
        ),
    ]
}

/// (spec, λ, w) variants: λ = 0 is only run once since Φ collapses to its
/// first term whatever the slopes.
fn variants(grid: &Grid, k: f64) -> Vec<(KWrightSpec, f64, f64)> {
    let lambdas = Grid::axis(&grid.lambda, &THEOREM_LAMBDA);
    let ws = Grid::axis(&grid.w, &THEOREM_W);
    let mut out = Vec::new();
    for &lambda in &lambdas {
        if lambda == 0.0 {
            if let Some(&w) = ws.first() {
                out.push((base_specs(k)[0].clone(), lambda, w));
            }
            continue;
        }
        for spec in base_specs(k) {
            for &w in &ws {
                out.push((spec.clone(), lambda, w));
            }
        }
    }
    out
}

fn theorem_alpha(kind: OperatorKind, grid: &Grid, k: f64, gamma: f64, rho: f64) -> Vec<f64> {
    match kind {
        IntegralLeft | DerivativeLeft => alphas(grid, |_| 0.0, Some(&THEOREM_LEFT_ALPHA)),
        IntegralRight => alphas(grid, |m| rho * k * (gamma + m), None),
        DerivativeRight => alphas(grid, |m| rho * k * (1.0 + gamma.floor() - gamma + m), None),
    }
}

pub fn theorems(grid: &Grid) -> Vec<Case> {
    let mut b = Builder::new();
    let ks = Grid::axis(&grid.k, &THEOREM_K);
    let gammas = Grid::axis(&grid.gamma, &THEOREM_GAMMA);
    let rhos = Grid::axis(&grid.rho, &THEOREM_RHO);
    let ss = Grid::axis(&grid.s, &S_VALUES);
    let kinds = [
        (Theorem::Th1, IntegralLeft, INTEGRAL_TRANSFORM_TOL),
        (Theorem::Th2, IntegralRight, INTEGRAL_TRANSFORM_TOL),
        (Theorem::Th3, DerivativeLeft, DERIVATIVE_TRANSFORM_TOL),
        (Theorem::Th4, DerivativeRight, DERIVATIVE_TRANSFORM_TOL),
    ];
    for (theorem, kind, tol) in kinds {
        for &k in &ks {
            for &gamma in &gammas {
                for &rho in &rhos {
                    for alpha in theorem_alpha(kind, grid, k, gamma, rho) {
                        for (spec, lambda, w) in variants(grid, k) {
                            for &s in &ss {
                                let params = Params {
                                    k: Some(k),
                                    gamma,
                                    rho,
                                    alpha: Some(alpha),
                                    lambda: Some(lambda),
                                    w: Some(w),
                                };
                                let arg = PowerWrightArg::new(alpha, lambda, w);
                                b.push(
                                    theorem,
                                    params,
                                    s,
                                    tol,
                                    Job::Transform {
                                        kind,
                                        spec: spec.clone(),
                                        arg,
                                    },
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    b.cases
}

pub fn composition(grid: &Grid) -> Vec<Case> {
    let mut b = Builder::new();
    let ks = Grid::axis(&grid.k, &THEOREM_K);
    let gammas = Grid::axis(&grid.gamma, &THEOREM_GAMMA);
    let rhos = Grid::axis(&grid.rho, &THEOREM_RHO);
    let ss = Grid::axis(&grid.s, &S_VALUES);
    for (theorem, inner) in [
        (Theorem::Th3oTh1, IntegralLeft),
        (Theorem::Th4oTh2, IntegralRight),
    ] {
        for &k in &ks {
            for &gamma in &gammas {
                for &rho in &rhos {
                    // the derivative step sees α − kργ, which must clear its own bound
                    let alpha_values = if inner.is_left() {
                        alphas(grid, |_| 0.0, Some(&THEOREM_LEFT_ALPHA))
                    } else {
                        alphas(grid, |m| rho * k * (1.0 + gamma.floor() + m), None)
                    };
                    for alpha in alpha_values {
                        for (spec, lambda, w) in variants(grid, k) {
                            for &s in &ss {
                                let params = Params {
                                    k: Some(k),
                                    gamma,
                                    rho,
                                    alpha: Some(alpha),
                                    lambda: Some(lambda),
                                    w: Some(w),
                                };
                                let arg = PowerWrightArg::new(alpha, lambda, w);
                                b.push(
                                    theorem,
                                    params,
                                    s,
                                    COMPOSITION_TOL,
                                    Job::Composition {
                                        inner,
                                        spec: spec.clone(),
                                        arg,
                                    },
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    b.cases
}
