//! Limit laws of the local time at zero: which family applies to which path
//! type, the closed-form parameters where they are known, distribution
//! formulas, and maximum-likelihood fits where parameters must be estimated.

use std::f64::consts::{FRAC_2_PI, PI};

use serde::Serialize;
use statrs::function::beta::beta_reg;
use statrs::function::erf::erf;
use statrs::function::gamma::ln_gamma;

use crate::enumerate::DistTable;
use crate::error::{Error, Result};
use crate::stepset::{Sign, StepSet};
use crate::walk::WalkType;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Geometric,
    NegBinomial,
    HalfNormal,
    Rayleigh,
}

impl Family {
    pub fn is_continuous(self) -> bool {
        matches!(self, Family::HalfNormal | Family::Rayleigh)
    }
}

/// A fully parameterized law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Law {
    Geometric { p: f64 },
    NegBinomial { m: f64, p: f64 },
    HalfNormal { lambda: f64 },
    Rayleigh { lambda: f64 },
}

/// How the statistic is normalized before it converges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scaling {
    /// `X_n` itself converges (discrete limit).
    None,
    /// `X_n / sqrt(n)` converges.
    SqrtN,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamSource {
    /// Closed-form expression in the structural constants.
    Formula,
    /// Estimated from distributions ("empirical").
    Fitted,
    Unset,
}

/// A named candidate parameterization (used for the two readings of the
/// half-normal parameter).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Candidate {
    pub label: String,
    pub law: Law,
}

/// The predicted limit law for one (step set, path type) pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawSpec {
    pub family: Family,
    /// `None` while the parameters are unknown.
    pub params: Option<Law>,
    pub param_source: ParamSource,
    pub scaling: Scaling,
    /// The law describes `X - offset` (e.g. returns of excursions start at 1).
    pub offset: u64,
    pub candidates: Vec<Candidate>,
    pub selected_candidate: Option<String>,
    pub warnings: Vec<String>,
}

impl LawSpec {
    fn new(family: Family, scaling: Scaling) -> Self {
        LawSpec {
            family,
            params: None,
            param_source: ParamSource::Unset,
            scaling,
            offset: 0,
            candidates: Vec::new(),
            selected_candidate: None,
            warnings: Vec::new(),
        }
    }

    pub fn with_law(law: Law, source: ParamSource) -> Self {
        let family = law.family();
        let scaling = if family.is_continuous() {
            Scaling::SqrtN
        } else {
            Scaling::None
        };
        LawSpec {
            params: Some(law),
            param_source: source,
            ..Self::new(family, scaling)
        }
    }

    /// The parameterized law, or an error when the parameters are unset.
    pub fn law(&self) -> Result<Law> {
        self.params.ok_or_else(|| {
            Error::InvalidArgument(format!("{:?} law has no parameters yet", self.family))
        })
    }

    /// Switches to the named candidate.
    pub fn select_candidate(&mut self, label: &str) -> Result<()> {
        let cand = self
            .candidates
            .iter()
            .find(|c| c.label == label)
            .ok_or_else(|| Error::InvalidArgument(format!("no candidate named {label:?}")))?;
        self.params = Some(cand.law);
        self.selected_candidate = Some(label.to_string());
        Ok(())
    }
}

/// Half-normal parameter read as `(tau / 2) * sqrt(P(1) / P''(1))`.
pub const HALF_NORMAL_PARSE_A: &str = "tau/2*sqrt(P(1)/P''(1))";
/// Half-normal parameter read as `(tau / 2) * sqrt(P''(1) / P(1))`.
pub const HALF_NORMAL_PARSE_B: &str = "tau/2*sqrt(P''(1)/P(1))";

/// Limit law of the local time at zero for `walk_type` paths over `steps`.
///
/// The drift sign is decided exactly. Discrete families come back with unset
/// parameters; use [`fit_discrete_params`].
pub fn classify(steps: &StepSet, walk_type: WalkType) -> LawSpec {
    let k = steps.structural_constants();
    let drift = steps.drift_sign();
    let mut spec = match (walk_type, drift) {
        (WalkType::Excursion, _) => LawSpec::new(Family::NegBinomial, Scaling::None),
        (WalkType::Meander, Sign::Negative) => LawSpec::new(Family::NegBinomial, Scaling::None),
        (WalkType::Meander, _) => LawSpec::new(Family::Geometric, Scaling::None),
        (WalkType::Walk, Sign::Zero) => {
            let a = k.tau / 2.0 * (k.p_one / k.pp_one).sqrt();
            let b = k.tau / 2.0 * (k.pp_one / k.p_one).sqrt();
            let mut spec = LawSpec::new(Family::HalfNormal, Scaling::SqrtN);
            spec.candidates = vec![
                Candidate {
                    label: HALF_NORMAL_PARSE_A.into(),
                    law: Law::HalfNormal { lambda: a },
                },
                Candidate {
                    label: HALF_NORMAL_PARSE_B.into(),
                    law: Law::HalfNormal { lambda: b },
                },
            ];
            spec.params = Some(Law::HalfNormal { lambda: a });
            spec.selected_candidate = Some(HALF_NORMAL_PARSE_A.into());
            spec.param_source = ParamSource::Formula;
            spec
        }
        (WalkType::Walk, _) => LawSpec::new(Family::Geometric, Scaling::None),
        (WalkType::Bridge, _) => {
            let mut spec = LawSpec::new(Family::Rayleigh, Scaling::SqrtN);
            spec.params = Some(Law::Rayleigh {
                lambda: (k.pp_one / k.p_one).sqrt(),
            });
            spec.param_source = ParamSource::Formula;
            spec
        }
    };
    if walk_type == WalkType::Excursion {
        spec.offset = 1;
    }
    if !k.aperiodic {
        spec.warnings.push(format!(
            "step set has period {}; the limit law assumes an aperiodic model",
            k.period
        ));
    }
    spec
}

/// Point evaluation of a law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LawEval {
    pub pdf: f64,
    pub cdf: f64,
    pub mean: f64,
    pub variance: f64,
}

impl Law {
    pub fn family(&self) -> Family {
        match self {
            Law::Geometric { .. } => Family::Geometric,
            Law::NegBinomial { .. } => Family::NegBinomial,
            Law::HalfNormal { .. } => Family::HalfNormal,
            Law::Rayleigh { .. } => Family::Rayleigh,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Law::Geometric { p } => p > 0.0 && p <= 1.0,
            Law::NegBinomial { m, p } => m > 0.0 && p > 0.0 && p <= 1.0,
            Law::HalfNormal { lambda } | Law::Rayleigh { lambda } => lambda > 0.0 && lambda.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("invalid parameters {self:?}")))
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            Law::Geometric { p } => (1.0 - p) / p,
            Law::NegBinomial { m, p } => m * (1.0 - p) / p,
            Law::HalfNormal { lambda } => lambda * FRAC_2_PI.sqrt(),
            Law::Rayleigh { lambda } => lambda * (PI / 2.0).sqrt(),
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            Law::Geometric { p } => (1.0 - p) / (p * p),
            Law::NegBinomial { m, p } => m * (1.0 - p) / (p * p),
            Law::HalfNormal { lambda } => lambda * lambda * (1.0 - 2.0 / PI),
            Law::Rayleigh { lambda } => lambda * lambda * (2.0 - PI / 2.0),
        }
    }

    /// Density (continuous) or mass (discrete, `x` a nonnegative integer).
    pub fn pdf(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(self.pdf_unchecked(x))
    }

    fn pdf_unchecked(&self, x: f64) -> f64 {
        match *self {
            Law::Geometric { p } => (1.0 - p).powf(x) * p,
            Law::NegBinomial { m, p } => {
                if p == 1.0 {
                    return if x == 0.0 { 1.0 } else { 0.0 };
                }
                (ln_gamma(m + x) - ln_gamma(x + 1.0) - ln_gamma(m) + x * (1.0 - p).ln() + m * p.ln()).exp()
            }
            Law::HalfNormal { lambda } => {
                (2.0 / (PI * lambda * lambda)).sqrt() * (-x * x / (2.0 * lambda * lambda)).exp()
            }
            Law::Rayleigh { lambda } => {
                x / (lambda * lambda) * (-x * x / (2.0 * lambda * lambda)).exp()
            }
        }
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(self.cdf_unchecked(x))
    }

    pub(crate) fn cdf_unchecked(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        match *self {
            Law::Geometric { p } => 1.0 - (1.0 - p).powf(x.floor() + 1.0),
            Law::NegBinomial { m, p } => {
                if p == 1.0 {
                    1.0
                } else {
                    beta_reg(m, x.floor() + 1.0, p)
                }
            }
            Law::HalfNormal { lambda } => erf(x / (lambda * std::f64::consts::SQRT_2)),
            Law::Rayleigh { lambda } => 1.0 - (-x * x / (2.0 * lambda * lambda)).exp(),
        }
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        self.validate()?;
        if !x.is_finite() || x < 0.0 {
            return Err(Error::InvalidArgument(format!("x must be >= 0, got {x}")));
        }
        if !self.family().is_continuous() && x.fract() != 0.0 {
            return Err(Error::InvalidArgument(format!(
                "discrete law evaluated at non-integer {x}"
            )));
        }
        Ok(())
    }
}

pub fn law_eval(law: &Law, x: f64) -> Result<LawEval> {
    Ok(LawEval {
        pdf: law.pdf(x)?,
        cdf: law.cdf(x)?,
        mean: law.mean(),
        variance: law.variance(),
    })
}

/// Result of [`fit_discrete_params`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteFit {
    /// Fit on the largest length, labelled [`ParamSource::Fitted`].
    pub spec: LawSpec,
    /// Fit at every supplied length, in increasing `n`.
    pub per_length: Vec<(usize, Law)>,
    /// Largest relative parameter change between consecutive lengths.
    pub drifts: Vec<f64>,
    /// Whether every drift is below [`FIT_STABILITY_THRESHOLD`].
    pub stable: bool,
}

/// Relative parameter change tolerated between consecutive lengths.
pub const FIT_STABILITY_THRESHOLD: f64 = 0.05;

fn shifted_probabilities(table: &DistTable, offset: u64) -> Vec<(f64, f64)> {
    table
        .probabilities()
        .into_iter()
        .map(|(v, p)| ((v - offset) as f64, p))
        .collect()
}

fn fit_geometric(probs: &[(f64, f64)]) -> Law {
    let mean: f64 = probs.iter().map(|(k, p)| k * p).sum();
    Law::Geometric { p: 1.0 / (1.0 + mean) }
}

fn nb_log_likelihood(probs: &[(f64, f64)], m: f64, mean: f64) -> f64 {
    let p = m / (m + mean);
    probs
        .iter()
        .map(|&(k, w)| {
            w * (ln_gamma(m + k) - ln_gamma(m) - ln_gamma(k + 1.0) + m * p.ln() + k * (1.0 - p).ln())
        })
        .sum()
}

fn fit_negative_binomial(probs: &[(f64, f64)]) -> Law {
    let mean: f64 = probs.iter().map(|(k, p)| k * p).sum();
    // golden-section search on log m; p = m / (m + mean) maximizes the likelihood for fixed m
    let f = |log_m: f64| -nb_log_likelihood(probs, log_m.exp(), mean);
    let (mut a, mut b) = ((1e-3f64).ln(), (1e5f64).ln());
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
        if (b - a).abs() < 1e-12 {
            break;
        }
    }
    let m = (0.5 * (a + b)).exp();
    Law::NegBinomial {
        m,
        p: m / (m + mean),
    }
}

fn law_params(law: &Law) -> Vec<f64> {
    match *law {
        Law::Geometric { p } => vec![p],
        Law::NegBinomial { m, p } => vec![m, p],
        Law::HalfNormal { lambda } | Law::Rayleigh { lambda } => vec![lambda],
    }
}

/// Maximum-likelihood fit of a discrete family on exact or sampled tables at
/// (at least three) increasing lengths.
///
/// Values are shifted by the smallest value occurring in any table, so
/// excursion returns (always at least 1) fit a law on `{0, 1, ...}`.
pub fn fit_discrete_params(tables: &[DistTable], family: Family) -> Result<DiscreteFit> {
    if family.is_continuous() {
        return Err(Error::InvalidArgument(format!("{family:?} is not a discrete family")));
    }
    if tables.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "need at least 3 lengths, got {}",
            tables.len()
        )));
    }
    let mut tables: Vec<&DistTable> = tables.iter().collect();
    tables.sort_by_key(|t| t.n);
    let offset = tables
        .iter()
        .filter_map(|t| t.counts.keys().next().copied())
        .min()
        .ok_or_else(|| Error::Degenerate("all tables are empty".into()))?;
    let mut per_length = Vec::new();
    for t in &tables {
        let probs = shifted_probabilities(t, offset);
        if probs.iter().all(|(k, _)| *k == 0.0) {
            return Err(Error::Degenerate(format!(
                "all mass at {offset} for n = {}",
                t.n
            )));
        }
        let law = match family {
            Family::Geometric => fit_geometric(&probs),
            _ => fit_negative_binomial(&probs),
        };
        per_length.push((t.n, law));
    }
    let drifts: Vec<f64> = per_length
        .windows(2)
        .map(|w| {
            law_params(&w[0].1)
                .iter()
                .zip(law_params(&w[1].1))
                .map(|(a, b)| ((b - a) / b).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    let stable = drifts.iter().all(|d| *d < FIT_STABILITY_THRESHOLD);
    let mut spec = LawSpec::with_law(per_length.last().unwrap().1, ParamSource::Fitted);
    spec.offset = offset;
    if !stable {
        spec.warnings.push(format!(
            "fitted parameters drift with n (max relative change {:.3}); the law may degenerate",
            drifts.iter().cloned().fold(0.0, f64::max)
        ));
    }
    Ok(DiscreteFit {
        spec,
        per_length,
        drifts,
        stable,
    })
}

/// Maximum-likelihood scale of a continuous family for `X / sqrt(n)`, from
/// `(value, probability)` pairs of `X` at length `n`.
///
/// Half-normal: `lambda^2 = E[Y^2]`; Rayleigh: `lambda^2 = E[Y^2] / 2`.
pub fn fit_continuous_scale(probabilities: &[(u64, f64)], n: usize, family: Family) -> Result<Law> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let second: f64 = probabilities
        .iter()
        .map(|&(k, p)| p * (k as f64) * (k as f64) / n as f64)
        .sum();
    if second <= 0.0 {
        return Err(Error::Degenerate("all mass at 0".into()));
    }
    match family {
        Family::HalfNormal => Ok(Law::HalfNormal {
            lambda: second.sqrt(),
        }),
        Family::Rayleigh => Ok(Law::Rayleigh {
            lambda: (second / 2.0).sqrt(),
        }),
        other => Err(Error::InvalidArgument(format!("{other:?} is not continuous"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use std::collections::BTreeMap;

    use crate::stepset::parse_stepset;
    use crate::walk::Statistic;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn classify_basketball() {
        let bb = StepSet::basketball();
        let bridge = classify(&bb, WalkType::Bridge);
        assert_eq!(bridge.family, Family::Rayleigh);
        assert_eq!(bridge.scaling, Scaling::SqrtN);
        let Some(Law::Rayleigh { lambda }) = bridge.params else { panic!() };
        assert!(close(lambda, 2f64.sqrt(), 1e-15));

        let walk = classify(&bb, WalkType::Walk);
        assert_eq!(walk.family, Family::HalfNormal);
        assert_eq!(walk.candidates.len(), 2);
        let lambdas: Vec<f64> = walk
            .candidates
            .iter()
            .map(|c| match c.law {
                Law::HalfNormal { lambda } => lambda,
                _ => unreachable!(),
            })
            .collect();
        assert!(close(lambdas[0], 0.5 * 0.5f64.sqrt(), 1e-15));
        assert!(close(lambdas[1], 0.5 * 2f64.sqrt(), 1e-15));
        assert!(walk.warnings.is_empty());
    }

    #[test]
    fn classify_by_drift() {
        let neg = parse_stepset("-1:2,1:1").unwrap();
        let m = classify(&neg, WalkType::Meander);
        assert_eq!((m.family, m.scaling, m.params), (Family::NegBinomial, Scaling::None, None));
        assert_eq!(classify(&neg, WalkType::Walk).family, Family::Geometric);
        // period 2
        assert!(!m.warnings.is_empty());
        let pos = parse_stepset("-1:1,0:1,1:2").unwrap();
        assert_eq!(classify(&pos, WalkType::Meander).family, Family::Geometric);
        assert_eq!(classify(&StepSet::motzkin(), WalkType::Meander).family, Family::Geometric);
        assert_eq!(classify(&StepSet::motzkin(), WalkType::Walk).family, Family::HalfNormal);
        assert_eq!(classify(&pos, WalkType::Excursion).family, Family::NegBinomial);
        // drift decided exactly: 1/3 - 2 * (1/6) = 0
        let zero = parse_stepset("-2:1/6,0:1,1:1/3").unwrap();
        assert_eq!(classify(&zero, WalkType::Walk).family, Family::HalfNormal);
    }

    #[test]
    fn bridge_parameter_is_scale_invariant() {
        let s = parse_stepset("-3:1,-1:2,0:1,2:3").unwrap();
        let scaled = s.scaled(&num_rational::BigRational::new(7.into(), 3.into())).unwrap();
        let a = classify(&s, WalkType::Bridge).params.unwrap();
        let b = classify(&scaled, WalkType::Bridge).params.unwrap();
        let (Law::Rayleigh { lambda: la }, Law::Rayleigh { lambda: lb }) = (a, b) else { panic!() };
        assert!(close(la, lb, 1e-14));
    }

    #[test]
    fn table_two_values() {
        let lambda = 1.3;
        let r = Law::Rayleigh { lambda };
        assert!(close(r.pdf(lambda).unwrap(), (-0.5f64).exp() / lambda, 1e-15));
        let h = Law::HalfNormal { lambda };
        assert!(close(h.mean(), lambda * (2.0 / PI).sqrt(), 1e-15));
        assert!(close(h.variance(), lambda * lambda * (1.0 - 2.0 / PI), 1e-15));
        let g = Law::Geometric { p: 0.3 };
        assert!(close(g.pdf(0.0).unwrap(), 0.3, 1e-15));
        assert!(g.pdf(1.5).is_err());
        assert!(h.pdf(-1.0).is_err());
        assert!(Law::Rayleigh { lambda: -1.0 }.pdf(1.0).is_err());
        let nb = Law::NegBinomial { m: 2.0, p: 0.5 };
        // C(3, 2) 0.5^2 0.5^2
        assert!(close(nb.pdf(2.0).unwrap(), 3.0 / 16.0, 1e-13));
        assert!(close(nb.cdf(2.0).unwrap(), 0.25 + 0.25 + 3.0 / 16.0, 1e-12));
    }

    /// Moments of every family against numeric summation / Simpson quadrature.
    #[test]
    fn moments_match_numeric_integration() {
        let laws = [
            Law::Geometric { p: 0.3 },
            Law::NegBinomial { m: 2.5, p: 0.4 },
            Law::HalfNormal { lambda: 0.8 },
            Law::Rayleigh { lambda: 1.7 },
        ];
        for law in laws {
            let (mass, m1, m2) = if law.family().is_continuous() {
                let upper = 40.0;
                let steps = 200_000;
                let h = upper / steps as f64;
                let mut acc = [0.0f64; 3];
                for i in 0..=steps {
                    let x = i as f64 * h;
                    let w = if i == 0 || i == steps { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
                    let f = law.pdf(x).unwrap();
                    acc[0] += w * f;
                    acc[1] += w * f * x;
                    acc[2] += w * f * x * x;
                }
                (acc[0] * h / 3.0, acc[1] * h / 3.0, acc[2] * h / 3.0)
            } else {
                (0..2000).fold((0.0, 0.0, 0.0), |(a, b, c), k| {
                    let k = k as f64;
                    let f = law.pdf(k).unwrap();
                    (a + f, b + f * k, c + f * k * k)
                })
            };
            assert!((mass - 1.0).abs() < 1e-10, "{law:?} mass {mass}");
            assert!((m1 - law.mean()).abs() < 1e-8, "{law:?}");
            assert!((m2 - m1 * m1 - law.variance()).abs() < 1e-8, "{law:?}");
            assert!((law.cdf(1e6).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    fn synthetic(n: usize, law: Law, scale: f64) -> DistTable {
        // counts proportional to law masses, scaled to integers
        let counts: BTreeMap<u64, BigUint> = (0..400u64)
            .filter_map(|k| {
                let c = (law.pdf(k as f64).unwrap() * scale).round();
                (c > 0.0).then(|| (k, BigUint::from(c as u64)))
            })
            .collect();
        DistTable::from_counts(n, Statistic::LocalTime, WalkType::Walk, counts, BigUint::from(1u32))
    }

    #[test]
    fn geometric_self_consistency() {
        let law = Law::Geometric { p: 0.3 };
        let tables: Vec<_> = [10, 20, 30].iter().map(|&n| synthetic(n, law, 1e12)).collect();
        let fit = fit_discrete_params(&tables, Family::Geometric).unwrap();
        let Law::Geometric { p } = fit.spec.params.unwrap() else { panic!() };
        assert!((p - 0.3).abs() < 0.01);
        assert!(fit.stable);
        assert_eq!(fit.spec.param_source, ParamSource::Fitted);
    }

    #[test]
    fn negative_binomial_self_consistency() {
        let law = Law::NegBinomial { m: 2.0, p: 0.5 };
        let tables: Vec<_> = [10, 20, 30].iter().map(|&n| synthetic(n, law, 1e12)).collect();
        let fit = fit_discrete_params(&tables, Family::NegBinomial).unwrap();
        let Law::NegBinomial { m, p } = fit.spec.params.unwrap() else { panic!() };
        assert!((m - 2.0).abs() < 1e-3 && (p - 0.5).abs() < 1e-3, "{m} {p}");
    }

    #[test]
    fn fit_errors() {
        let point = DistTable::from_counts(
            5,
            Statistic::Crossings,
            WalkType::Walk,
            [(0u64, BigUint::from(9u32))].into_iter().collect(),
            BigUint::from(1u32),
        );
        let tables = vec![point.clone(), point.clone(), point];
        assert!(matches!(
            fit_discrete_params(&tables, Family::Geometric),
            Err(Error::Degenerate(_))
        ));
        assert!(fit_discrete_params(&tables[..2], Family::Geometric).is_err());
        assert!(fit_discrete_params(&tables, Family::Rayleigh).is_err());
    }
}
