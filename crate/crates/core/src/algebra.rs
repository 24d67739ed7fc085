//! Exact nested algebra: polynomials in `q` over big integers, Laurent
//! polynomials in the altitude variable `u` with `QPoly` coefficients, and
//! power series in `z` truncated at a fixed order.
//!
//! No floating point enters any arithmetic here; `eval_f64` helpers only read
//! results out.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stepset::StepSet;

/// Polynomial in the marker variable `q` with big-integer coefficients.
///
/// Stored densely, lowest degree first, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<BigInt>,
}

static ZERO_QPOLY: QPoly = QPoly { coeffs: Vec::new() };

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_coeffs(vec![c.into()])
    }

    /// `c * q^degree`.
    pub fn monomial(c: impl Into<BigInt>, degree: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = c.into();
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| c.into()).collect())
    }

    /// Coefficients, constant term first.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, degree: usize) -> BigInt {
        self.coeffs.get(degree).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, other: &QPoly, factor: &BigInt) {
        if other.coeffs.len() > self.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), BigInt::zero());
        }
        for (dst, src) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *dst += src * factor;
        }
        self.trim();
    }

    /// `self += factor * q^shift * other`.
    pub fn add_scaled_shifted(&mut self, other: &QPoly, factor: &BigInt, shift: usize) {
        if other.is_zero() {
            return;
        }
        let len = other.coeffs.len() + shift;
        if len > self.coeffs.len() {
            self.coeffs.resize(len, BigInt::zero());
        }
        for (dst, src) in self.coeffs[shift..].iter_mut().zip(&other.coeffs) {
            *dst += src * factor;
        }
        self.trim();
    }

    /// Multiplication by `q^k`.
    pub fn shift_up(&self, k: usize) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        QPoly { coeffs }
    }

    /// Division by `q^k`; fails when a coefficient below `q^k` is nonzero.
    pub fn shift_down(&self, k: usize) -> Result<QPoly> {
        if self.coeffs.iter().take(k).any(|c| !c.is_zero()) {
            return Err(Error::Computation(format!("{self} is not divisible by q^{k}")));
        }
        Ok(QPoly {
            coeffs: self.coeffs.iter().skip(k).cloned().collect(),
        })
    }

    pub fn scale(&self, factor: &BigInt) -> QPoly {
        if factor.is_zero() {
            return QPoly::zero();
        }
        QPoly {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Value at `q = 1`.
    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// `d/dq` at `q = 1`.
    pub fn derivative_at_one(&self) -> BigInt {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * BigInt::from(i))
            .sum()
    }

    pub fn eval_f64(&self, q: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * q + c.to_f64().unwrap_or(f64::NAN))
    }
}

impl fmt::Display for QPoly {
    /// Highest degree first, e.g. `2*q^2+14*q+109`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if c.is_negative() {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            first = false;
            let mag = c.abs();
            match deg {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if deg == 1 {
                        f.write_str("q")?;
                    } else {
                        write!(f, "q^{deg}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl AddAssign<&QPoly> for QPoly {
    fn add_assign(&mut self, rhs: &QPoly) {
        self.add_scaled(rhs, &BigInt::one());
    }
}

impl SubAssign<&QPoly> for QPoly {
    fn sub_assign(&mut self, rhs: &QPoly) {
        self.add_scaled(rhs, &-BigInt::one());
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        self.scale(&-BigInt::one())
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(coeffs)
    }
}

/// Which exponents of `u` survive [`LaurentU::part_extract`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Positive,
    Negative,
    Zero,
}

/// Laurent polynomial in `u` with `QPoly` coefficients.
///
/// Dense storage: `coeffs[i]` is the coefficient of `u^(low + i)`. Leading
/// and trailing zero coefficients are trimmed, so the zero polynomial has no
/// coefficients at all.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentU {
    low: i64,
    coeffs: Vec<QPoly>,
}

impl LaurentU {
    pub fn zero() -> Self {
        LaurentU::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, QPoly::one())
    }

    pub fn monomial(k: i64, c: QPoly) -> Self {
        let mut out = LaurentU {
            low: k,
            coeffs: vec![c],
        };
        out.trim();
        out
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I: IntoIterator<Item = (i64, QPoly)>>(terms: I) -> Self {
        let mut out = LaurentU::zero();
        for (k, c) in terms {
            out.add_term(k, &c);
        }
        out
    }

    /// Constant-coefficient Laurent polynomial from `(exponent, integer)` pairs.
    pub fn from_ints<I: IntoIterator<Item = (i64, i64)>>(terms: I) -> Self {
        Self::from_terms(terms.into_iter().map(|(k, c)| (k, QPoly::constant(c))))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Inclusive exponent range of the nonzero terms.
    pub fn support(&self) -> Option<(i64, i64)> {
        if self.is_zero() {
            None
        } else {
            Some((self.low, self.low + self.coeffs.len() as i64 - 1))
        }
    }

    pub fn coeff(&self, k: i64) -> &QPoly {
        let idx = k - self.low;
        if idx < 0 {
            return &ZERO_QPOLY;
        }
        self.coeffs.get(idx as usize).unwrap_or(&ZERO_QPOLY)
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &QPoly)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i64, c))
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(QPoly::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    /// Makes room for exponents in `lo..=hi` without trimming.
    fn reserve_range(&mut self, lo: i64, hi: i64) {
        if self.coeffs.is_empty() {
            self.low = lo;
            self.coeffs = vec![QPoly::zero(); (hi - lo + 1) as usize];
            return;
        }
        let cur_hi = self.low + self.coeffs.len() as i64 - 1;
        if lo < self.low {
            let extra = (self.low - lo) as usize;
            self.coeffs.splice(0..0, std::iter::repeat_n(QPoly::zero(), extra));
            self.low = lo;
        }
        if hi > cur_hi {
            self.coeffs
                .resize(self.coeffs.len() + (hi - cur_hi) as usize, QPoly::zero());
        }
    }

    fn slot(&mut self, k: i64) -> &mut QPoly {
        &mut self.coeffs[(k - self.low) as usize]
    }

    pub fn add_term(&mut self, k: i64, c: &QPoly) {
        if c.is_zero() {
            return;
        }
        self.reserve_range(k, k);
        *self.slot(k) += c;
        self.trim();
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, other: &LaurentU, factor: &QPoly) {
        let Some((lo, hi)) = other.support() else {
            return;
        };
        if factor.is_zero() {
            return;
        }
        self.reserve_range(lo, hi);
        for (k, c) in other.terms() {
            let prod = c * factor;
            *self.slot(k) += &prod;
        }
        self.trim();
    }

    pub fn scale_q(&self, factor: &QPoly) -> LaurentU {
        let mut out = LaurentU::zero();
        out.add_scaled(self, factor);
        out
    }

    /// Multiplication by `u^k`.
    pub fn shift_u(&self, k: i64) -> LaurentU {
        if self.is_zero() {
            return LaurentU::zero();
        }
        LaurentU {
            low: self.low + k,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Keeps the exponents in `lo..=hi`.
    pub fn restrict(&self, lo: i64, hi: i64) -> LaurentU {
        LaurentU::from_terms(
            self.terms()
                .filter(|(k, _)| (lo..=hi).contains(k))
                .map(|(k, c)| (k, c.clone())),
        )
    }

    /// The `{u^>0}`, `{u^<0}` and `[u^0]` operators.
    pub fn part_extract(&self, region: Region) -> LaurentU {
        match region {
            Region::Positive => self.restrict(1, i64::MAX),
            Region::Negative => self.restrict(i64::MIN, -1),
            Region::Zero => self.restrict(0, 0),
        }
    }

    /// Specialization `u = 1`.
    pub fn eval_at_u1(&self) -> QPoly {
        let mut out = QPoly::zero();
        for c in &self.coeffs {
            out += c;
        }
        out
    }

    /// Every coefficient evaluated at `q`, as `(exponent, value)` pairs.
    pub fn eval_q(&self, q: f64) -> Vec<(i64, f64)> {
        self.terms().map(|(k, c)| (k, c.eval_f64(q))).collect()
    }
}

impl AddAssign<&LaurentU> for LaurentU {
    fn add_assign(&mut self, rhs: &LaurentU) {
        self.add_scaled(rhs, &QPoly::one());
    }
}

impl SubAssign<&LaurentU> for LaurentU {
    fn sub_assign(&mut self, rhs: &LaurentU) {
        self.add_scaled(rhs, &QPoly::constant(-1));
    }
}

impl Add for &LaurentU {
    type Output = LaurentU;
    fn add(self, rhs: &LaurentU) -> LaurentU {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &LaurentU {
    type Output = LaurentU;
    fn sub(self, rhs: &LaurentU) -> LaurentU {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &LaurentU {
    type Output = LaurentU;
    fn mul(self, rhs: &LaurentU) -> LaurentU {
        let (Some((alo, ahi)), Some((blo, bhi))) = (self.support(), rhs.support()) else {
            return LaurentU::zero();
        };
        let mut out = LaurentU::zero();
        out.reserve_range(alo + blo, ahi + bhi);
        for (i, a) in self.terms() {
            for (j, b) in rhs.terms() {
                let prod = a * b;
                *out.slot(i + j) += &prod;
            }
        }
        out.trim();
        out
    }
}

impl fmt::Display for LaurentU {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.terms().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})*u^{k}")?;
        }
        Ok(())
    }
}

/// `P(u)` with weights cleared to integers: `P(u) = laurent / denominator`.
///
/// Series computed with the integer polynomial count each weighted path of
/// length `n` multiplied by `denominator^n`.
#[derive(Debug, Clone)]
pub struct StepPolynomial {
    weights: Vec<(i64, BigInt)>,
    laurent: LaurentU,
    denominator: BigInt,
    c: i64,
    d: i64,
}

impl StepPolynomial {
    pub fn new(steps: &StepSet) -> Self {
        let cleared = steps.cleared();
        let laurent = LaurentU::from_terms(
            cleared
                .weights
                .iter()
                .map(|(j, w)| (*j, QPoly::constant(w.clone()))),
        );
        StepPolynomial {
            weights: cleared.weights,
            laurent,
            denominator: cleared.denominator,
            c: steps.c(),
            d: steps.d(),
        }
    }

    pub fn laurent(&self) -> &LaurentU {
        &self.laurent
    }

    pub fn weights(&self) -> &[(i64, BigInt)] {
        &self.weights
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn d(&self) -> i64 {
        self.d
    }
}

/// The product `P(u) * f`, one step applied to every altitude of `f`.
pub fn step_convolve(f: &LaurentU, step: &StepPolynomial) -> LaurentU {
    let Some((lo, hi)) = f.support() else {
        return LaurentU::zero();
    };
    let mut out = LaurentU::zero();
    out.reserve_range(lo - step.c, hi + step.d);
    for (k, c) in f.terms() {
        for (j, w) in &step.weights {
            out.slot(k + j).add_scaled(c, w);
        }
    }
    out.trim();
    out
}

/// Free-function form of [`LaurentU::part_extract`].
pub fn part_extract(f: &LaurentU, region: Region) -> LaurentU {
    f.part_extract(region)
}

/// Power series in `z` truncated after `z^order`, with `LaurentU` coefficients.
///
/// When produced from a weighted step set, `[z^n]` holds weighted counts
/// multiplied by `weight_denominator^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesZ {
    order: usize,
    coeffs: Vec<LaurentU>,
    weight_denominator: BigInt,
}

impl SeriesZ {
    /// All coefficients zero.
    pub fn zero(order: usize) -> Self {
        SeriesZ {
            order,
            coeffs: vec![LaurentU::zero(); order + 1],
            weight_denominator: BigInt::one(),
        }
    }

    pub fn from_coeffs(coeffs: Vec<LaurentU>, weight_denominator: BigInt) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("a series needs at least one coefficient".into()));
        }
        Ok(SeriesZ {
            order: coeffs.len() - 1,
            coeffs,
            weight_denominator,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, n: usize) -> &LaurentU {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[LaurentU] {
        &self.coeffs
    }

    /// Replaces `[z^n]`; `n` beyond the truncation order is rejected.
    pub fn set_coeff(&mut self, n: usize, value: LaurentU) -> Result<()> {
        if n > self.order {
            return Err(Error::InvalidArgument(format!(
                "z^{n} is beyond the truncation order {}",
                self.order
            )));
        }
        self.coeffs[n] = value;
        Ok(())
    }

    pub fn weight_denominator(&self) -> &BigInt {
        &self.weight_denominator
    }

    pub fn with_weight_denominator(mut self, d: BigInt) -> Self {
        self.weight_denominator = d;
        self
    }

    /// `[z^n] W(z, 1, q)` for every `n`.
    pub fn eval_at_u1(&self) -> Vec<QPoly> {
        self.coeffs.iter().map(LaurentU::eval_at_u1).collect()
    }

    /// `[z^n] W_k(z, q)` for every `n`.
    pub fn altitude(&self, k: i64) -> Vec<QPoly> {
        self.coeffs.iter().map(|c| c.coeff(k).clone()).collect()
    }
}

/// Free-function form of [`SeriesZ::eval_at_u1`].
pub fn series_eval_at_u1(series: &SeriesZ) -> Vec<QPoly> {
    series.eval_at_u1()
}

/// Evaluates `sum_n a_n(q) z^n` for a list of `QPoly` coefficients.
pub fn eval_qseries(coeffs: &[QPoly], z: f64, q: f64) -> f64 {
    coeffs
        .iter()
        .rev()
        .fold(0.0, |acc, c| acc * z + c.eval_f64(q))
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    k: i64,
    qcoeffs: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct SliceJson {
    n: usize,
    terms: Vec<TermJson>,
}

impl Serialize for SeriesZ {
    /// `[{n, terms: [{k, qcoeffs: ["c0", "c1", ...]}]}]`, integers as decimal strings.
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let slices: Vec<SliceJson> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, slice)| SliceJson {
                n,
                terms: slice
                    .terms()
                    .map(|(k, c)| TermJson {
                        k,
                        qcoeffs: c.coeffs().iter().map(ToString::to_string).collect(),
                    })
                    .collect(),
            })
            .collect();
        slices.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SeriesZ {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let slices = Vec::<SliceJson>::deserialize(deserializer)?;
        if slices.is_empty() {
            return Err(D::Error::custom("empty series"));
        }
        let order = slices.iter().map(|s| s.n).max().unwrap_or(0);
        let mut coeffs = vec![LaurentU::zero(); order + 1];
        for slice in slices {
            for term in slice.terms {
                let q = term
                    .qcoeffs
                    .iter()
                    .map(|s| s.parse::<BigInt>().map_err(D::Error::custom))
                    .collect::<std::result::Result<Vec<_>, _>>()?;
                coeffs[slice.n].add_term(term.k, &QPoly::from_coeffs(q));
            }
        }
        Ok(SeriesZ {
            order,
            coeffs,
            weight_denominator: BigInt::one(),
        })
    }
}
