//! The boundary system of the bilateral kernel method.
//!
//! Writing `C(u) = sum_{-d<k<0} {u^>0}(P u^k) W_k + sum_{0<k<c} {u^<0}(P u^k) W_k`,
//! the walk generating function satisfies
//! `(1 - z P(u)) W(z, u, q) = 1 - z (1 - q) C(u)`. Extracting `{u^>0}` and
//! substituting each small root, extracting `{u^<0}` and substituting each
//! large root, and extracting `[u^0]` gives `c + d + 1` linear equations in
//! `W_{-d}, ..., W_c`. For an unknown `W_k` the coefficient in a
//! positive-part row is
//! `-{u^>0}((1 - z P) u^k) - z (1 - q) [-d < k < 0] {u^>0}(P u^k)`,
//! symmetrically for negative-part rows, and `delta_{k0} - z p_{-k}` in the
//! `[u^0]` row.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::roots::{kernel_roots, KernelRoots};
use crate::error::{Error, Result};
use crate::stepset::StepSet;

/// Condition numbers above this are reported as ill-conditioned.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Relative residual bound for the solved system.
pub const SYSTEM_RESIDUAL_BOUND: f64 = 1e-9;

/// A coefficient `constant + z_coeff * z + zq_coeff * z * q`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ZqCoeff {
    pub constant: BigRational,
    pub z: BigRational,
    pub zq: BigRational,
}

impl ZqCoeff {
    pub fn new(constant: i64, z: i64, zq: i64) -> Self {
        let r = |x: i64| BigRational::from_integer(x.into());
        ZqCoeff {
            constant: r(constant),
            z: r(z),
            zq: r(zq),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.z.is_zero() && self.zq.is_zero()
    }

    pub fn eval(&self, z: f64, q: f64) -> f64 {
        let f = |r: &BigRational| r.to_f64().unwrap();
        f(&self.constant) + f(&self.z) * z + f(&self.zq) * z * q
    }

    fn add(&mut self, other: &ZqCoeff) {
        self.constant += &other.constant;
        self.z += &other.z;
        self.zq += &other.zq;
    }
}

/// A Laurent polynomial in the substituted root with `ZqCoeff` coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RootTemplate {
    terms: BTreeMap<i64, ZqCoeff>,
}

impl RootTemplate {
    pub fn from_terms<I: IntoIterator<Item = (i64, ZqCoeff)>>(terms: I) -> Self {
        let mut out = RootTemplate::default();
        for (k, c) in terms {
            out.add_term(k, &c);
        }
        out
    }

    fn add_term(&mut self, k: i64, c: &ZqCoeff) {
        let slot = self.terms.entry(k).or_default();
        slot.add(c);
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn terms(&self) -> &BTreeMap<i64, ZqCoeff> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Multiplication by `u^k`.
    pub fn shift(&self, k: i64) -> RootTemplate {
        RootTemplate {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn eval(&self, u: Complex64, z: f64, q: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| u.powi(*e as i32) * c.eval(z, q))
            .sum()
    }
}

impl fmt::Display for RootTemplate {
    /// Highest power first, e.g. `z*u^3+z*u^2+z*u+z-u`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut pieces: Vec<(bool, String)> = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let power = match e {
                0 => String::new(),
                1 => "u".to_string(),
                _ => format!("u^{e}"),
            };
            for (coef, sym) in [(&c.zq, "q*z"), (&c.z, "z"), (&c.constant, "")] {
                if coef.is_zero() {
                    continue;
                }
                let mag = coef.abs();
                let mut factors: Vec<String> = Vec::new();
                if !mag.is_one() || (sym.is_empty() && power.is_empty()) {
                    factors.push(mag.to_string());
                }
                if !sym.is_empty() {
                    factors.push(sym.to_string());
                }
                if !power.is_empty() {
                    factors.push(power.clone());
                }
                pieces.push((coef.is_negative(), factors.join("*")));
            }
        }
        if pieces.is_empty() {
            return f.write_str("0");
        }
        for (i, (neg, body)) in pieces.iter().enumerate() {
            match (i, neg) {
                (_, true) => f.write_str("-")?,
                (0, false) => {}
                (_, false) => f.write_str("+")?,
            }
            f.write_str(body)?;
        }
        Ok(())
    }
}

/// Coefficient templates of the boundary system, built once per step set.
///
/// Rows are indexed by unknown `W_k`, `k = -d..=c`.
#[derive(Debug, Clone)]
pub struct BoundarySystem {
    c: i64,
    d: i64,
    /// Row substituted at every small root.
    pub small_row: Vec<RootTemplate>,
    /// Row substituted at every large root.
    pub large_row: Vec<RootTemplate>,
    /// The `[u^0]` row (no root dependence).
    pub zero_row: Vec<ZqCoeff>,
    /// `({u^>0}(P u^k))(1)` for `-d<k<0` and `({u^<0}(P u^k))(1)` for `0<k<c`.
    pub corrections_at_one: Vec<(i64, f64)>,
    p_one: f64,
}

impl BoundarySystem {
    pub fn new(steps: &StepSet) -> Self {
        let (c, d) = (steps.c(), steps.d());
        let weights: Vec<(i64, BigRational)> = steps.jumps().map(|(j, w)| (j, w.clone())).collect();
        let zero = BigRational::zero();
        let coeff = |constant: &BigRational, z: &BigRational, zq: &BigRational| ZqCoeff {
            constant: constant.clone(),
            z: z.clone(),
            zq: zq.clone(),
        };
        let one = BigRational::one();

        // -{u^>0}((1 - zP) u^k) - z(1-q)[-d<k<0] {u^>0}(P u^k), as a template in u
        let part_row = |positive: bool| -> Vec<RootTemplate> {
            let keep = |e: i64| if positive { e > 0 } else { e < 0 };
            (-d..=c)
                .map(|k| {
                    let mut t = RootTemplate::default();
                    if keep(k) {
                        t.add_term(k, &coeff(&-one.clone(), &zero, &zero));
                    }
                    let marked = if positive { k < 0 && k > -d } else { k > 0 && k < c };
                    for (j, w) in &weights {
                        let e = j + k;
                        if !keep(e) {
                            continue;
                        }
                        // +z p_j from -(-z P), then -z(1-q) p_j = -z p_j + z q p_j when marked
                        let entry = if marked {
                            coeff(&zero, &zero, w)
                        } else {
                            coeff(&zero, w, &zero)
                        };
                        t.add_term(e, &entry);
                    }
                    t
                })
                .collect()
        };

        let zero_row = (-d..=c)
            .map(|k| {
                let constant = if k == 0 { one.clone() } else { zero.clone() };
                let z = steps.weight(-k).map(|w| -w.clone()).unwrap_or_default();
                coeff(&constant, &z, &zero)
            })
            .collect();

        let float_weights = steps.float_weights();
        let corrections_at_one = ((-d + 1)..=-1)
            .map(|k| (k, float_weights.iter().filter(|(j, _)| j + k > 0).map(|(_, w)| w).sum()))
            .chain((1..c).map(|k| (k, float_weights.iter().filter(|(j, _)| j + k < 0).map(|(_, w)| w).sum())))
            .collect();

        BoundarySystem {
            c,
            d,
            small_row: part_row(true),
            large_row: part_row(false),
            zero_row,
            corrections_at_one,
            p_one: steps.total_weight().to_f64().unwrap(),
        }
    }

    pub fn unknowns(&self) -> std::ops::RangeInclusive<i64> {
        -self.d..=self.c
    }

    pub fn size(&self) -> usize {
        (self.c + self.d + 1) as usize
    }

    /// A row multiplied through by the power of `u` that makes its lowest exponent zero.
    pub fn normalized(row: &[RootTemplate]) -> Vec<RootTemplate> {
        let low = row.iter().filter_map(RootTemplate::min_exponent).min().unwrap_or(0);
        row.iter().map(|t| t.shift(-low)).collect()
    }

    /// `W(z, 1, q)` from the boundary values, via the functional equation at `u = 1`.
    pub fn walk_value(&self, wk: &[f64], z: f64, q: f64) -> f64 {
        let correction: f64 = self
            .corrections_at_one
            .iter()
            .map(|(k, v)| v * wk[(k + self.d) as usize])
            .sum();
        (1.0 - z * (1.0 - q) * correction) / (1.0 - z * self.p_one)
    }

    fn complex_matrix(&self, roots: &KernelRoots, z: f64, q: f64) -> DMatrix<Complex64> {
        let n = self.size();
        let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
        let rows = roots
            .small
            .iter()
            .map(|r| (&self.small_row, *r))
            .chain(roots.large.iter().map(|r| (&self.large_row, *r)));
        for (i, (templates, root)) in rows.enumerate() {
            for (col, t) in templates.iter().enumerate() {
                m[(i, col)] = t.eval(root, z, q);
            }
        }
        for (col, c) in self.zero_row.iter().enumerate() {
            m[(n - 1, col)] = Complex64::new(c.eval(z, q), 0.0);
        }
        m
    }
}

/// The boundary unknowns and derived generating-function values at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericKernel {
    pub z: f64,
    pub q: f64,
    /// Index of the first entry of `wk`, i.e. `-d`.
    pub first_index: i64,
    /// `W_{-d}, ..., W_c`.
    pub wk: Vec<f64>,
    /// Beyond `z = 1/P(1)` (below `rho` when the drift is nonzero) this is
    /// the analytic continuation, not the sum of the walk series.
    pub w_walk: f64,
    /// Whether `z P(1) < 1`, i.e. the walk series converges at `z`.
    pub walk_converges: bool,
    pub w_bridge: f64,
    pub condition_number: f64,
    pub residual: f64,
    pub real_fast_path: bool,
}

impl NumericKernel {
    /// `W_k` for `-d <= k <= c`.
    pub fn w(&self, k: i64) -> Option<f64> {
        usize::try_from(k - self.first_index)
            .ok()
            .and_then(|i| self.wk.get(i).copied())
    }
}

/// Conjugate pairing of a root list: `Some(partners)` when every non-real root's
/// conjugate is present, `None` otherwise.
fn conjugate_partners(roots: &[Complex64]) -> Option<Vec<Option<usize>>> {
    let tol = |r: &Complex64| 1e-9 * r.norm().max(1e-300);
    let mut partner = vec![None; roots.len()];
    for i in 0..roots.len() {
        if roots[i].im.abs() <= tol(&roots[i]) || partner[i].is_some() {
            continue;
        }
        let j = (0..roots.len()).find(|&j| {
            j != i && partner[j].is_none() && (roots[j] - roots[i].conj()).norm() <= 1e-8 * roots[i].norm()
        })?;
        partner[i] = Some(j);
        partner[j] = Some(i);
    }
    Some(partner)
}

fn condition_number_real(m: &DMatrix<f64>) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    max / min
}

fn condition_number_complex(m: &DMatrix<Complex64>) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    max / min
}

/// Solves the boundary system at real `0 < z < rho`, `0 < q <= 2`.
pub fn solve_bilateral_system(steps: &StepSet, z: f64, q: f64) -> Result<NumericKernel> {
    let system = BoundarySystem::new(steps);
    solve_with(&system, steps, z, q)
}

/// Same as [`solve_bilateral_system`] with prebuilt templates.
pub fn solve_with(system: &BoundarySystem, steps: &StepSet, z: f64, q: f64) -> Result<NumericKernel> {
    let rho = steps.structural_constants().rho;
    if !(z > 0.0 && z < rho) {
        return Err(Error::InvalidArgument(format!("z must lie in (0, rho = {rho}), got {z}")));
    }
    if !(q > 0.0 && q <= 2.0) {
        return Err(Error::InvalidArgument(format!("q must lie in (0, 2], got {q}")));
    }
    let roots = kernel_roots(steps, z)?;
    let n = system.size();
    let cm = system.complex_matrix(&roots, z, q);
    let mut rhs = vec![0.0; n];
    rhs[n - 1] = 1.0;

    let all_roots: Vec<Complex64> = roots.all().copied().collect();
    let (wk, condition_number, residual, real_fast_path) = match conjugate_partners(&all_roots) {
        Some(partners) => {
            // rows of a conjugate pair (r, conj r) become (Re row(r), Im row(r))
            let mut m = DMatrix::<f64>::zeros(n, n);
            for i in 0..n - 1 {
                let source = match partners[i] {
                    Some(j) if j < i => j,
                    _ => i,
                };
                let use_imag = matches!(partners[i], Some(j) if j < i);
                for col in 0..n {
                    let v = cm[(source, col)];
                    m[(i, col)] = if use_imag { v.im } else { v.re };
                }
            }
            for col in 0..n {
                m[(n - 1, col)] = cm[(n - 1, col)].re;
            }
            let b = DVector::from_vec(rhs.clone());
            let sol = m
                .clone()
                .lu()
                .solve(&b)
                .ok_or_else(|| Error::Computation("singular boundary system".into()))?;
            let res = (&m * &sol - &b).norm() / b.norm();
            (sol.iter().copied().collect::<Vec<_>>(), condition_number_real(&m), res, true)
        }
        None => {
            let b = DVector::from_iterator(n, rhs.iter().map(|&x| Complex64::new(x, 0.0)));
            let sol = cm
                .clone()
                .lu()
                .solve(&b)
                .ok_or_else(|| Error::Computation("singular boundary system".into()))?;
            let res = (&cm * &sol - &b).norm() / b.norm();
            let max_imag = sol.iter().map(|w| w.im.abs()).fold(0.0, f64::max);
            let max_norm = sol.iter().map(|w| w.norm()).fold(0.0, f64::max);
            if max_imag > 1e-8 * max_norm.max(1.0) {
                return Err(Error::Computation(format!(
                    "boundary values have imaginary part {max_imag:.3e} at real (z, q)"
                )));
            }
            (sol.iter().map(|w| w.re).collect(), condition_number_complex(&cm), res, false)
        }
    };
    if condition_number > CONDITION_LIMIT {
        return Err(Error::IllConditioned(condition_number));
    }
    if residual > SYSTEM_RESIDUAL_BOUND {
        return Err(Error::Computation(format!(
            "boundary system residual {residual:.3e} exceeds {SYSTEM_RESIDUAL_BOUND:.0e}"
        )));
    }
    let d = steps.d();
    Ok(NumericKernel {
        z,
        q,
        w_walk: system.walk_value(&wk, z, q),
        walk_converges: z * steps.structural_constants().p_one < 1.0,
        w_bridge: wk[d as usize],
        first_index: -d,
        wk,
        condition_number,
        residual,
        real_fast_path,
    })
}
