//! Generalized k-Wright functions
//!
//! ```text
//!   nΦm^k(z) = Σ_{r≥0} [∏ Γ_k(p_i + α_i r) / ∏ Γ_k(q_j + β_j r)] z^r / r!
//! ```
//!
//! A function is described by a [`KWrightSpec`]: the deformation parameter
//! `k` and the ordered `top` pairs (p_i, α_i) and `bottom` pairs (q_j, β_j).
//! Empty lists are allowed and contribute an empty product of 1.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::config::QuadratureConfig;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::special_fn::{ln_gamma, ln_gamma_k};
use crate::sum::exact_sum;

/// Tolerance on Δ = −1 for the disk-convergent class.
pub const DELTA_BOUNDARY_TOL: f64 = 1e-12;

// Arguments this close to a non-positive integer are treated as poles.
const POLE_TOL: f64 = 64.0 * f64::EPSILON;

/// Parameter data of one generalized k-Wright function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KWrightSpec<T = f64> {
    pub k: T,
    #[serde(default = "Vec::new")]
    pub top: Vec<(T, T)>,
    #[serde(default = "Vec::new")]
    pub bottom: Vec<(T, T)>,
}

impl<T: Scalar> KWrightSpec<T> {
    pub fn new(k: T, top: Vec<(T, T)>, bottom: Vec<(T, T)>) -> Self {
        Self { k, top, bottom }
    }

    /// Δ = Σ β_j/k − Σ α_i/k, summed exactly (floats are correctly rounded).
    pub fn delta(&self) -> T {
        let terms = self
            .bottom
            .iter()
            .map(|(_, b)| b.clone() / self.k.clone())
            .chain(self.top.iter().map(|(_, a)| -(a.clone() / self.k.clone())))
            .collect();
        T::sum_all(terms)
    }

    /// Copy with one pair appended to each list.
    pub fn with_pairs(&self, top: (T, T), bottom: (T, T)) -> Self {
        let mut out = self.clone();
        out.top.push(top);
        out.bottom.push(bottom);
        out
    }

    pub fn to_f64(&self) -> KWrightSpec<f64> {
        let conv = |v: &[(T, T)]| v.iter().map(|(a, b)| (a.to_f64(), b.to_f64())).collect();
        KWrightSpec {
            k: self.k.to_f64(),
            top: conv(&self.top),
            bottom: conv(&self.bottom),
        }
    }

    /// Multiset equality of both pair lists (order-insensitive), same k.
    pub fn same_pairs(&self, other: &Self) -> bool {
        fn sorted<T: Scalar>(v: &[(T, T)]) -> Vec<(T, T)> {
            let mut v = v.to_vec();
            v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
            v
        }
        self.k == other.k
            && sorted(&self.top) == sorted(&other.top)
            && sorted(&self.bottom) == sorted(&other.bottom)
    }
}

/// Convergence class of the series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConvergenceClass {
    /// Δ > −1: converges for every z.
    EntireFunction,
    /// Δ = −1: converges for |z| < μ.
    DiskConvergent,
    Divergent,
}

/// The convergence triple (Δ, μ, ν) and its classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub delta: f64,
    pub mu: f64,
    pub nu: f64,
    pub class: ConvergenceClass,
}

/// A series value together with the number of terms summed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub terms: usize,
}

fn near_pole(x: f64) -> bool {
    x <= 0.5 && (x - x.round()).abs() <= POLE_TOL * x.abs().max(1.0)
}

enum Term {
    Value { ln_abs: f64, sign: f64 },
    // 1/Γ_k vanished at a bottom pole; `terminal` when every later term vanishes too
    BottomPole { terminal: bool },
    Zero,
}

impl KWrightSpec<f64> {
    /// Checks the parameter invariants, naming the offending field.
    pub fn validate(&self) -> Result<()> {
        if !(self.k > 0.0 && self.k.is_finite()) {
            return Err(Error::Domain(format!(
                "field `k` must be positive and finite, got {}",
                self.k
            )));
        }
        for (name, list) in [("top", &self.top), ("bottom", &self.bottom)] {
            for (i, &(p, a)) in list.iter().enumerate() {
                if !p.is_finite() {
                    return Err(Error::Domain(format!(
                        "field `{name}[{i}][0]` must be finite, got {p}"
                    )));
                }
                if !(a.is_finite() && a != 0.0) {
                    return Err(Error::Domain(format!(
                        "field `{name}[{i}][1]` must be a nonzero finite slope, got {a}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Parses and validates the JSON interchange form
    /// `{"k": .., "top": [[p, alpha], ..], "bottom": [[q, beta], ..]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text)
            .map_err(|e| Error::Domain(format!("invalid k-Wright spec JSON: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn convergence(&self) -> ConvergenceReport {
        let k = self.k;
        let delta = self.delta();
        let mu = self
            .top
            .iter()
            .map(|&(_, a)| (a / k).abs().powf(-a / k))
            .product::<f64>()
            * self
                .bottom
                .iter()
                .map(|&(_, b)| (b / k).abs().powf(b / k))
                .product::<f64>();
        let half_diff = (self.top.len() as f64 - self.bottom.len() as f64) / 2.0;
        let nu = exact_sum(
            self.bottom
                .iter()
                .map(|&(q, _)| q / k)
                .chain(self.top.iter().map(|&(p, _)| -(p / k)))
                .chain(std::iter::once(half_diff)),
        );
        let class = if (delta + 1.0).abs() <= DELTA_BOUNDARY_TOL {
            ConvergenceClass::DiskConvergent
        } else if delta > -1.0 {
            ConvergenceClass::EntireFunction
        } else {
            ConvergenceClass::Divergent
        };
        ConvergenceReport {
            delta,
            mu,
            nu,
            class,
        }
    }

    fn term(&self, r: usize, ln_abs_z: f64, z_negative: bool) -> Result<Term> {
        let rf = r as f64;
        let k = self.k;
        let mut ln_abs = 0.0;
        let mut sign = 1.0;
        for &(p, a) in &self.top {
            let arg = p + a * rf;
            if near_pole(arg / k) {
                return Err(Error::Pole { arg: arg / k });
            }
            let (lg, sg) = ln_gamma_k(arg, k)?;
            ln_abs += lg;
            sign *= sg;
        }
        for &(q, b) in &self.bottom {
            let arg = q + b * rf;
            let x = arg / k;
            if near_pole(x) {
                let step = b / k;
                let terminal =
                    step < 0.0 && (step - step.round()).abs() <= POLE_TOL * step.abs().max(1.0);
                return Ok(Term::BottomPole { terminal });
            }
            let (lg, sg) = ln_gamma_k(arg, k)?;
            ln_abs -= lg;
            sign *= sg;
        }
        if r > 0 {
            if ln_abs_z == f64::NEG_INFINITY {
                return Ok(Term::Zero);
            }
            ln_abs += rf * ln_abs_z - ln_gamma(rf + 1.0)?.0;
            if z_negative && r % 2 == 1 {
                sign = -sign;
            }
        }
        Ok(Term::Value { ln_abs, sign })
    }

    fn check_domain(&self, z: f64) -> Result<()> {
        let report = self.convergence();
        match report.class {
            ConvergenceClass::EntireFunction => Ok(()),
            ConvergenceClass::DiskConvergent if z.abs() < report.mu => Ok(()),
            ConvergenceClass::DiskConvergent => Err(Error::Divergence(format!(
                "|z| >= mu (|z| = {}, mu = {})",
                z.abs(),
                report.mu
            ))),
            ConvergenceClass::Divergent => {
                Err(Error::Divergence(format!("Delta = {} < -1", report.delta)))
            }
        }
    }

    /// Sums the series at `z` and reports how many terms were used.
    ///
    /// Stops after the first two consecutive terms that are each at most
    /// `series_rel_tol` times the running sum. Terms that vanish because a
    /// bottom argument sits on a pole neither count toward nor reset that rule.
    pub fn eval_detailed(&self, z: f64, cfg: &QuadratureConfig) -> Result<SeriesValue> {
        self.validate()?;
        if !z.is_finite() {
            return Err(Error::Domain(format!("argument z must be finite, got {z}")));
        }
        self.check_domain(z)?;
        let ln_abs_z = z.abs().ln();
        let mut sum = 0.0;
        let mut small_run = 0;
        let mut last_term = 0.0;
        for r in 0..cfg.max_terms {
            let value = match self.term(r, ln_abs_z, z < 0.0)? {
                Term::Value { ln_abs, sign } => sign * ln_abs.exp(),
                Term::Zero => 0.0,
                Term::BottomPole { terminal: true } => {
                    return Ok(SeriesValue {
                        value: sum,
                        terms: r,
                    })
                }
                Term::BottomPole { terminal: false } => continue,
            };
            sum += value;
            last_term = value;
            if !sum.is_finite() {
                return Err(Error::Overflow(format!(
                    "partial sum not finite after {} terms at z = {z}",
                    r + 1
                )));
            }
            if value.abs() <= cfg.series_rel_tol * sum.abs() {
                small_run += 1;
                if small_run >= 2 {
                    return Ok(SeriesValue {
                        value: sum,
                        terms: r + 1,
                    });
                }
            } else {
                small_run = 0;
            }
        }
        Err(Error::Truncation {
            terms: cfg.max_terms,
            last_term,
            partial_sum: sum,
        })
    }

    pub fn eval(&self, z: f64, cfg: &QuadratureConfig) -> Result<f64> {
        self.eval_detailed(z, cfg).map(|v| v.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_fn::gamma;
    use proptest::prelude::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    // direct Γ products, no log space; valid only for k = 1
    fn naive_sum(spec: &KWrightSpec, z: f64, terms: usize) -> f64 {
        let mut total = 0.0;
        let mut fact = 1.0;
        for r in 0..terms {
            if r > 0 {
                fact *= r as f64;
            }
            let rf = r as f64;
            let num: f64 = spec
                .top
                .iter()
                .map(|&(p, a)| gamma(p + a * rf).unwrap_or(f64::INFINITY))
                .product();
            let den: f64 = spec
                .bottom
                .iter()
                .map(|&(q, b)| gamma(q + b * rf).unwrap_or(f64::INFINITY))
                .product();
            if !(num.is_finite() && den.is_finite()) {
                break;
            }
            let t = num / den * z.powi(r as i32) / fact;
            if !t.is_finite() {
                break;
            }
            total += t;
        }
        total
    }

    #[test]
    fn convergence_examples() {
        let r = KWrightSpec::new(1.0, vec![(1.0, 1.0)], vec![(1.0, 1.0)]).convergence();
        assert_eq!(
            (r.delta, r.mu, r.nu, r.class),
            (0.0, 1.0, 0.0, ConvergenceClass::EntireFunction)
        );
        let r = KWrightSpec::new(2.0, vec![(2.0, 2.0)], vec![(2.0, 2.0)]).convergence();
        assert_eq!(
            (r.delta, r.mu, r.nu, r.class),
            (0.0, 1.0, 0.0, ConvergenceClass::EntireFunction)
        );
        let r = KWrightSpec::new(1.0, vec![(1.0, 2.0)], vec![(1.0, 1.0)]).convergence();
        assert_eq!(
            (r.delta, r.mu, r.class),
            (-1.0, 0.25, ConvergenceClass::DiskConvergent)
        );
        let r = KWrightSpec::new(1.0, vec![(1.0, 3.0)], vec![(1.0, 1.0)]).convergence();
        assert_eq!(r.class, ConvergenceClass::Divergent);
    }

    #[test]
    fn eval_examples() {
        let e = KWrightSpec::new(1.0, vec![(1.0, 1.0)], vec![(1.0, 1.0)]);
        assert!(rel(e.eval(1.0, &cfg()).unwrap(), std::f64::consts::E) < 1e-15);
        let bessel = KWrightSpec::new(1.0, vec![], vec![(1.0, 1.0)]);
        assert!(rel(bessel.eval(1.0, &cfg()).unwrap(), 2.2795853023360672674) < 1e-15);
        let k2 = KWrightSpec::new(2.0, vec![(2.0, 2.0)], vec![(2.0, 2.0)]);
        assert_eq!(k2.eval(0.0, &cfg()).unwrap(), 1.0);
    }

    #[test]
    fn empty_lists_give_exponential() {
        let spec = KWrightSpec::new(1.5, vec![], vec![]);
        for z in [0.0, 1.0, -1.0] {
            assert!((spec.eval(z, &cfg()).unwrap() - f64::exp(z)).abs() <= 1e-13 * f64::exp(z));
        }
    }

    #[test]
    fn disk_and_divergent_domains() {
        let spec = KWrightSpec::new(1.0, vec![(1.0, 2.0)], vec![(1.0, 1.0)]);
        // Σ (2r)!/(r!)^2 z^r = (1 − 4z)^{-1/2}
        let v = spec.eval(0.1, &cfg()).unwrap();
        assert!(rel(v, (1.0f64 - 0.4).powf(-0.5)) < 1e-13);
        assert!(matches!(spec.eval(0.25, &cfg()), Err(Error::Divergence(_))));
        assert!(matches!(
            spec.eval(-0.35, &cfg()),
            Err(Error::Divergence(_))
        ));
        let bad = KWrightSpec::new(1.0, vec![(1.0, 3.0)], vec![(1.0, 1.0)]);
        assert!(matches!(bad.eval(0.01, &cfg()), Err(Error::Divergence(_))));
    }

    #[test]
    fn poles_and_truncation() {
        let spec = KWrightSpec::new(1.0, vec![(-2.0, 1.0)], vec![(1.0, 1.0)]);
        assert!(matches!(spec.eval(0.5, &cfg()), Err(Error::Pole { .. })));
        // bottom (1, -1): every term from r = 1 on is zero, the sum is exactly 1
        let poly = KWrightSpec::new(1.0, vec![], vec![(1.0, -1.0)]);
        let v = poly.eval_detailed(0.5, &cfg()).unwrap();
        assert_eq!((v.value, v.terms), (1.0, 1));
        // bottom (0, 1): r = 0 term vanishes, Σ_{r≥1} z^r/(r!(r−1)!) = √z I_1(2√z)
        let shifted = KWrightSpec::new(1.0, vec![], vec![(0.0, 1.0)]);
        let v = shifted.eval(1.0, &cfg()).unwrap();
        assert!(rel(v, 1.5906368546373290634) < 1e-14, "{v}");
        let tight = QuadratureConfig {
            max_terms: 5,
            ..cfg()
        };
        let e = KWrightSpec::new(1.0, vec![(1.0, 1.0)], vec![(1.0, 1.0)]);
        assert!(matches!(e.eval(1.0, &tight), Err(Error::Truncation { .. })));
    }

    #[test]
    fn json_round_trip_and_validation() {
        let spec = KWrightSpec::from_json(
            r#"{"k": 2, "top": [[1, 0.5]], "bottom": [[3, 1.5], [0.25, 1]]}"#,
        )
        .unwrap();
        assert_eq!(spec.top, vec![(1.0, 0.5)]);
        let back = KWrightSpec::from_json(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);
        let err = KWrightSpec::from_json(r#"{"k": 1, "top": [[1, 0]]}"#).unwrap_err();
        assert!(err.to_string().contains("top[0][1]"));
        let err = KWrightSpec::from_json(r#"{"k": -1}"#).unwrap_err();
        assert!(err.to_string().contains("`k`"));
        let err = KWrightSpec::from_json(r#"{"top": []}"#).unwrap_err();
        assert!(err.to_string().contains("missing field `k`"));
        assert!(KWrightSpec::from_json("{not json").is_err());
    }

    #[test]
    fn matches_naive_summation_for_k1() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let pair = |rng: &mut rand_chacha::ChaCha8Rng| {
                (rng.gen_range(0.5..3.0), rng.gen_range(0.5..2.0))
            };
            let top: Vec<_> = (0..rng.gen_range(0..3)).map(|_| pair(&mut rng)).collect();
            let bottom: Vec<_> = (0..rng.gen_range(1..4)).map(|_| pair(&mut rng)).collect();
            let spec = KWrightSpec::new(1.0, top, bottom);
            if spec.convergence().delta <= -0.5 {
                continue;
            }
            let z = rng.gen_range(-2.0..2.0);
            let got = spec.eval(z, &cfg()).unwrap();
            let want = naive_sum(&spec, z, 120);
            assert!(rel(got, want) <= 1e-12, "{spec:?} z={z}: {got} vs {want}");
        }
    }

    proptest! {
        #[test]
        fn cancelling_pair_leaves_value_unchanged(
            p in 0.5f64..3.0, a in 0.5f64..2.0, q in 0.5f64..3.0, b in 0.8f64..2.0,
            c in 0.3f64..4.0, d in 0.2f64..2.0, z in -2.0f64..2.0, k in prop::sample::select(vec![0.5, 1.0, 2.0]),
        ) {
            let spec = KWrightSpec::new(k, vec![(p, a)], vec![(q, b)]);
            // closer to Δ = −1 the terms peak beyond f64 range before decaying
            prop_assume!(spec.convergence().delta > -0.5);
            let base = spec.eval(z, &cfg()).unwrap();
            let padded = spec.with_pairs((c, d), (c, d)).eval(z, &cfg()).unwrap();
            // all coefficients are positive, so the series at |z| bounds the sum of |terms|
            let magnitude = spec.eval(z.abs(), &cfg()).unwrap();
            prop_assert!((padded - base).abs() <= 1e-12 * magnitude);
        }

        #[test]
        fn doubling_term_budget_is_stable(z in -3.0f64..3.0, q in 0.5f64..3.0, b in 0.5f64..2.0) {
            let spec = KWrightSpec::new(1.0, vec![(1.0, 0.5)], vec![(q, b)]);
            prop_assume!(spec.convergence().delta > 0.0);
            let a = spec.eval(z, &QuadratureConfig { max_terms: 500, ..cfg() }).unwrap();
            let b2 = spec.eval(z, &QuadratureConfig { max_terms: 1000, ..cfg() }).unwrap();
            prop_assert!((a - b2).abs() <= 1e-14 * a.abs().max(1e-300));
        }

        #[test]
        fn appended_equal_slopes_preserve_delta(
            a in 0.1f64..3.0, b in 0.1f64..3.0, x in 0.01f64..5.0, k in 0.3f64..3.0,
        ) {
            let spec = KWrightSpec::new(k, vec![(1.0, a)], vec![(1.0, b)]);
            let grown = spec.with_pairs((0.7, x), (1.9, x));
            prop_assert_eq!(grown.delta(), spec.delta());
        }
    }
}
