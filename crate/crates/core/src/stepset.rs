//! Weighted step sets `P(u) = sum_j p_j u^j` and their structural constants.
//!
//! A step set is stored exactly (rational weights). Everything the asymptotic
//! analysis needs (drift, the saddle point `tau`, the dominant singularity
//! `rho`, the square-root constant and the period) is derived here.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Relative tolerance targeted by the `tau` solver.
pub const TAU_TOLERANCE: f64 = 1e-14;

/// A finite set of weighted jumps encoding the Laurent polynomial `P(u)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepSet {
    jumps: BTreeMap<i64, BigRational>,
}

/// Step weights cleared to integers: `P(u) = (sum_j w_j u^j) / denominator`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClearedWeights {
    pub weights: Vec<(i64, BigInt)>,
    pub denominator: BigInt,
}

impl ClearedWeights {
    /// `sum_j w_j`, the integer counterpart of `P(1)`.
    pub fn total(&self) -> BigInt {
        self.weights.iter().map(|(_, w)| w).sum()
    }

    pub fn weight(&self, jump: i64) -> Option<&BigInt> {
        self.weights.iter().find(|(j, _)| *j == jump).map(|(_, w)| w)
    }
}

/// Sign of a real quantity, computed exactly where it matters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl StepSet {
    /// Builds a step set from `(offset, weight)` pairs.
    pub fn new<I>(jumps: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, BigRational)>,
    {
        let mut map = BTreeMap::new();
        for (offset, weight) in jumps {
            if !weight.is_positive() {
                return Err(Error::StepSet(format!(
                    "weight of offset {offset} must be positive, got {weight}"
                )));
            }
            if map.insert(offset, weight).is_some() {
                return Err(Error::StepSet(format!("duplicate offset {offset}")));
            }
        }
        if map.is_empty() {
            return Err(Error::StepSet("empty step set".into()));
        }
        let set = StepSet { jumps: map };
        if set.c() < 1 {
            return Err(Error::StepSet("no negative jump".into()));
        }
        if set.d() < 1 {
            return Err(Error::StepSet("no positive jump".into()));
        }
        Ok(set)
    }

    /// Unit-weight step set on the given offsets.
    pub fn unit<I: IntoIterator<Item = i64>>(offsets: I) -> Result<Self> {
        Self::new(offsets.into_iter().map(|j| (j, BigRational::one())))
    }

    /// Jumps `-2, -1, 0, 1, 2` with unit weights.
    pub fn basketball() -> Self {
        Self::unit(-2..=2).expect("valid step set")
    }

    /// Jumps `-1, 1` with unit weights.
    pub fn dyck() -> Self {
        Self::unit([-1, 1]).expect("valid step set")
    }

    /// Jumps `-1, 0, 1` with unit weights.
    pub fn motzkin() -> Self {
        Self::unit(-1..=1).expect("valid step set")
    }

    /// Largest downward amplitude.
    pub fn c(&self) -> i64 {
        -*self.jumps.keys().next().expect("nonempty")
    }

    /// Largest upward amplitude.
    pub fn d(&self) -> i64 {
        *self.jumps.keys().next_back().expect("nonempty")
    }

    pub fn jumps(&self) -> impl Iterator<Item = (i64, &BigRational)> + '_ {
        self.jumps.iter().map(|(j, w)| (*j, w))
    }

    pub fn support(&self) -> Vec<i64> {
        self.jumps.keys().copied().collect()
    }

    pub fn weight(&self, jump: i64) -> Option<&BigRational> {
        self.jumps.get(&jump)
    }

    pub fn contains(&self, jump: i64) -> bool {
        self.jumps.contains_key(&jump)
    }

    pub fn len(&self) -> usize {
        self.jumps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jumps.is_empty()
    }

    /// Weights as `f64`, in offset order.
    pub fn float_weights(&self) -> Vec<(i64, f64)> {
        self.jumps
            .iter()
            .map(|(j, w)| (*j, w.to_f64().expect("finite weight")))
            .collect()
    }

    /// Multiplies every weight by the common denominator of all weights.
    pub fn cleared(&self) -> ClearedWeights {
        let denominator = self
            .jumps
            .values()
            .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let weights = self
            .jumps
            .iter()
            .map(|(j, w)| {
                let scaled = w * BigRational::from_integer(denominator.clone());
                debug_assert!(scaled.is_integer());
                (*j, scaled.to_integer())
            })
            .collect();
        ClearedWeights {
            weights,
            denominator,
        }
    }

    /// Returns a copy with every weight multiplied by `factor > 0`.
    pub fn scaled(&self, factor: &BigRational) -> Result<Self> {
        Self::new(self.jumps.iter().map(|(j, w)| (*j, w * factor)))
    }

    /// Exact value of `P^(order)(u)` at a rational point.
    pub fn eval_exact(&self, u: &BigRational, order: u32) -> Result<BigRational> {
        if !u.is_positive() {
            return Err(Error::InvalidArgument(format!("u must be positive, got {u}")));
        }
        let mut acc = BigRational::zero();
        for (&j, w) in &self.jumps {
            let factor = falling_factorial(j, order);
            if factor == 0 {
                continue;
            }
            let power = rational_pow(u, j - order as i64);
            acc += w * BigRational::from_integer(factor.into()) * power;
        }
        Ok(acc)
    }

    /// `P(u)`, `P'(u)` or `P''(u)` (any derivative order) at a positive real point.
    ///
    /// Terms are accumulated with Neumaier compensation.
    pub fn eval_p(&self, u: f64, order: u32) -> Result<f64> {
        if !u.is_finite() || u <= 0.0 {
            return Err(Error::InvalidArgument(format!("u must be positive, got {u}")));
        }
        Ok(self.eval_unchecked(u, order))
    }

    fn eval_unchecked(&self, u: f64, order: u32) -> f64 {
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for (&j, w) in &self.jumps {
            let factor = falling_factorial(j, order);
            if factor == 0 {
                continue;
            }
            let term = w.to_f64().unwrap() * factor as f64 * u.powi((j - order as i64) as i32);
            let t = sum + term;
            if sum.abs() >= term.abs() {
                comp += (sum - t) + term;
            } else {
                comp += (term - t) + sum;
            }
            sum = t;
        }
        sum + comp
    }

    /// `P(1)`, exactly.
    pub fn total_weight(&self) -> BigRational {
        self.jumps.values().sum()
    }

    /// The drift `P'(1) = sum_j j p_j`, exactly.
    pub fn drift(&self) -> BigRational {
        self.jumps
            .iter()
            .map(|(j, w)| w * BigRational::from_integer((*j).into()))
            .sum()
    }

    pub fn drift_sign(&self) -> Sign {
        let drift = self.drift();
        if drift.is_zero() {
            Sign::Zero
        } else if drift.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    /// Gcd of all pairwise differences of supported offsets.
    pub fn period(&self) -> u64 {
        let offsets: Vec<i64> = self.support();
        let first = offsets[0];
        offsets[1..]
            .iter()
            .fold(0u64, |g, &j| g.gcd(&((j - first).unsigned_abs())))
    }

    pub fn is_aperiodic(&self) -> bool {
        self.period() == 1
    }

    /// Locates `tau > 0` with `P'(tau) = 0`.
    ///
    /// `P''` is positive on `(0, inf)` as soon as a negative jump exists, so
    /// `P'` is increasing there and runs from `-inf` to `+inf`.
    pub fn tau(&self) -> f64 {
        if self.drift().is_zero() {
            return 1.0;
        }
        let dp = |u: f64| self.eval_unchecked(u, 1);
        let (mut lo, mut hi) = (1.0f64, 1.0f64);
        while dp(lo) >= 0.0 {
            lo *= 0.5;
        }
        while dp(hi) <= 0.0 {
            hi *= 2.0;
        }
        // safeguarded Newton: fall back to bisection whenever the step leaves the bracket
        let mut x = 0.5 * (lo + hi);
        for _ in 0..200 {
            let f = dp(x);
            if f == 0.0 {
                return x;
            }
            if f < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let slope = self.eval_unchecked(x, 2);
            let newton = x - f / slope;
            let next = if newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if (next - x).abs() <= TAU_TOLERANCE * 0.25 * x || hi - lo <= TAU_TOLERANCE * 0.25 * x {
                return next;
            }
            x = next;
        }
        x
    }

    pub fn structural_constants(&self) -> Constants {
        let tau = self.tau();
        let p_tau = self.eval_unchecked(tau, 0);
        let pp_tau = self.eval_unchecked(tau, 2);
        let period = self.period();
        Constants {
            p_one: self.total_weight().to_f64().unwrap(),
            drift: self.drift().to_f64().unwrap(),
            drift_sign: self.drift_sign(),
            pp_one: self.eval_unchecked(1.0, 2),
            tau,
            rho: 1.0 / p_tau,
            p_tau,
            pp_tau,
            sing_const: (2.0 * p_tau / pp_tau).sqrt(),
            period,
            aperiodic: period == 1,
        }
    }
}

/// Numeric constants driving every asymptotic statement about a step set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants {
    #[serde(rename = "P1")]
    pub p_one: f64,
    pub drift: f64,
    pub drift_sign: Sign,
    #[serde(rename = "Ppp1")]
    pub pp_one: f64,
    pub tau: f64,
    pub rho: f64,
    #[serde(rename = "Ptau")]
    pub p_tau: f64,
    #[serde(rename = "Ppptau")]
    pub pp_tau: f64,
    /// `sqrt(2 P(tau) / P''(tau))`, the square-root coefficient of the small and large roots at `rho`.
    pub sing_const: f64,
    pub period: u64,
    pub aperiodic: bool,
}

fn falling_factorial(j: i64, order: u32) -> i64 {
    (0..order as i64).map(|i| j - i).product()
}

fn rational_pow(u: &BigRational, exp: i64) -> BigRational {
    let base = if exp < 0 { u.recip() } else { u.clone() };
    num_traits::pow(base, exp.unsigned_abs() as usize)
}

fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = || Error::StepSet(format!("weight {text:?} is not a rational number"));
    match text.split_once('/') {
        Some((num, den)) => {
            let num: BigInt = num.trim().parse().map_err(|_| bad())?;
            let den: BigInt = den.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(num, den))
        }
        None => Ok(BigRational::from_integer(text.parse().map_err(|_| bad())?)),
    }
}

/// Parses `"offset:weight,offset:weight,..."`, e.g. `"-1:2,1:1"` or `"-1:1/2,1:3/2"`.
pub fn parse_stepset(spec: &str) -> Result<StepSet> {
    if spec.trim().is_empty() {
        return Err(Error::StepSet("empty step set".into()));
    }
    let mut jumps = Vec::new();
    for entry in spec.split(',') {
        let (offset, weight) = entry
            .split_once(':')
            .ok_or_else(|| Error::StepSet(format!("entry {entry:?} is not offset:weight")))?;
        let offset: i64 = offset
            .trim()
            .parse()
            .map_err(|_| Error::StepSet(format!("offset {offset:?} is not an integer")))?;
        jumps.push((offset, parse_rational(weight)?));
    }
    StepSet::new(jumps)
}

impl FromStr for StepSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_stepset(s)
    }
}

impl fmt::Display for StepSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (j, w)) in self.jumps.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{j}:{w}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parse_basketball() {
        let s = parse_stepset("-2:1,-1:1,0:1,1:1,2:1").unwrap();
        assert_eq!((s.c(), s.d()), (2, 2));
        assert_eq!(s, StepSet::basketball());
        assert_eq!(s.to_string(), "-2:1,-1:1,0:1,1:1,2:1");
    }

    #[test]
    fn parse_dyck_and_rationals() {
        let s = parse_stepset("-1:1,1:1").unwrap();
        assert_eq!((s.c(), s.d()), (1, 1));
        let s = parse_stepset("-1:1/2, 1:3/2").unwrap();
        assert_eq!(s.weight(1), Some(&rat(3, 2)));
        let cleared = s.cleared();
        assert_eq!(cleared.denominator, BigInt::from(2));
        assert_eq!(cleared.weights, vec![(-1, 1.into()), (1, 3.into())]);
    }

    #[test]
    fn parse_errors() {
        assert!(parse_stepset("-1:1,0:0,1:1").is_err());
        assert!(parse_stepset("").is_err());
        assert!(parse_stepset("-1:1,-1:2,1:1").is_err());
        assert!(parse_stepset("0:1,1:1").is_err());
        assert!(parse_stepset("-1:1,0:1").is_err());
        assert!(parse_stepset("-1:x,1:1").is_err());
        assert!(parse_stepset("-1:1.5,1:1").is_err());
        assert!(parse_stepset("-1:1/0,1:1").is_err());
        assert!(parse_stepset("-1:-1,1:1").is_err());
    }

    #[test]
    fn eval_basketball() {
        let s = StepSet::basketball();
        assert_eq!(s.eval_p(1.0, 0).unwrap(), 5.0);
        assert_eq!(s.eval_p(1.0, 1).unwrap(), 0.0);
        assert_eq!(s.eval_p(1.0, 2).unwrap(), 10.0);
        assert!(s.eval_p(0.0, 0).is_err());
        assert!(s.eval_p(-1.0, 1).is_err());
        let one = BigRational::one();
        assert_eq!(s.eval_exact(&one, 2).unwrap(), rat(10, 1));
        // P(1/2) = 4 + 2 + 1 + 1/2 + 1/4
        assert_eq!(s.eval_exact(&rat(1, 2), 0).unwrap(), rat(31, 4));
    }

    #[test]
    fn constants_basketball() {
        let k = StepSet::basketball().structural_constants();
        assert_eq!(k.tau, 1.0);
        assert_eq!(k.p_one, 5.0);
        assert_eq!(k.drift, 0.0);
        assert!((k.rho - 0.2).abs() < 1e-15);
        assert!((k.sing_const - 1.0).abs() < 1e-15);
        assert_eq!(k.period, 1);
    }

    #[test]
    fn constants_negative_drift() {
        let k = parse_stepset("-1:2,1:1").unwrap().structural_constants();
        assert_eq!(k.drift, -1.0);
        assert_eq!(k.drift_sign, Sign::Negative);
        assert!((k.tau - 2f64.sqrt()).abs() < 1e-14);
        assert!((k.rho - 1.0 / (2.0 * 2f64.sqrt())).abs() < 1e-14);
        assert_eq!(k.period, 2);
    }

    #[test]
    fn periods() {
        assert_eq!(parse_stepset("-2:1,2:1").unwrap().period(), 4);
        assert_eq!(StepSet::dyck().period(), 2);
        assert_eq!(StepSet::motzkin().period(), 1);
        assert_eq!(StepSet::basketball().period(), 1);
        assert_eq!(parse_stepset("-3:1,1:1").unwrap().period(), 4);
        assert_eq!(parse_stepset("-3:1,2:1").unwrap().period(), 5);
        assert_eq!(parse_stepset("-3:1,0:1,2:1").unwrap().period(), 1);
    }
}
