//! Roots of the kernel `1 - z P(u)`, i.e. of the cleared polynomial
//! `u^c - z u^c P(u)` of degree `c + d`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::stepset::StepSet;

/// Largest accepted backward error `|Q(r)| / sum_i |a_i| |r|^i` of a root.
pub const ROOT_RESIDUAL_BOUND: f64 = 1e-10;

/// Smallest accepted modulus ratio between the smallest large root and the
/// largest small root.
pub const MIN_GAP_RATIO: f64 = 1.01;

/// The `c` small and `d` large roots of the kernel at one point `z`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelRoots {
    #[serde(serialize_with = "ser_complex")]
    pub z: Complex64,
    /// Sorted by increasing modulus.
    #[serde(serialize_with = "ser_complex_vec")]
    pub small: Vec<Complex64>,
    /// Sorted by increasing modulus.
    #[serde(serialize_with = "ser_complex_vec")]
    pub large: Vec<Complex64>,
    pub max_residual: f64,
    pub gap_ratio: f64,
}

impl KernelRoots {
    /// The real positive small root with the largest modulus (`u_1` for real `z > 0`).
    pub fn u1(&self) -> Option<f64> {
        self.small
            .iter()
            .filter(|r| is_real_positive(r))
            .map(|r| r.re)
            .fold(None, |acc, x| Some(acc.map_or(x, |a: f64| a.max(x))))
    }

    /// The real positive large root with the smallest modulus (`v_1` for real `z > 0`).
    pub fn v1(&self) -> Option<f64> {
        self.large
            .iter()
            .filter(|r| is_real_positive(r))
            .map(|r| r.re)
            .fold(None, |acc, x| Some(acc.map_or(x, |a: f64| a.min(x))))
    }

    pub fn all(&self) -> impl Iterator<Item = &Complex64> {
        self.small.iter().chain(self.large.iter())
    }
}

fn is_real_positive(r: &Complex64) -> bool {
    r.re > 0.0 && r.im.abs() <= 1e-9 * r.norm()
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

fn ser_complex_vec<S: serde::Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>().serialize(s)
}

/// Coefficients `a_0..a_{c+d}` of `u^c (1 - z P(u))`, constant term first.
pub fn kernel_polynomial(steps: &StepSet, z: Complex64) -> Vec<Complex64> {
    let c = steps.c();
    let d = steps.d();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); (c + d + 1) as usize];
    coeffs[c as usize] += 1.0;
    for (j, w) in steps.float_weights() {
        coeffs[(j + c) as usize] -= z * w;
    }
    coeffs
}

pub fn horner(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * x + a)
}

fn horner_with_derivative(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    coeffs.iter().rev().fold((zero, zero), |(p, dp), a| (p * x + a, dp * x + p))
}

/// Backward error of `x` as a root of `coeffs`.
pub fn relative_residual(coeffs: &[Complex64], x: Complex64) -> f64 {
    let scale: f64 = coeffs
        .iter()
        .enumerate()
        .map(|(i, a)| a.norm() * x.norm().powi(i as i32))
        .sum();
    horner(coeffs, x).norm() / scale
}

/// All roots of a polynomial by Aberth-Ehrlich iteration, each finished with
/// one Newton step.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let degree = coeffs.len().saturating_sub(1);
    if degree == 0 || coeffs[degree].norm() == 0.0 {
        return Err(Error::Computation("degenerate polynomial".into()));
    }
    let deriv: Vec<Complex64> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, a)| a * i as f64)
        .collect();

    // initial guesses on a circle of radius (|a_0| / |a_n|)^(1/n), rotated off the axes
    let radius = (coeffs[0].norm() / coeffs[degree].norm()).powf(1.0 / degree as f64);
    let radius = if radius.is_finite() && radius > 0.0 { radius } else { 1.0 };
    let mut roots: Vec<Complex64> = (0..degree)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / degree as f64 + 0.4;
            Complex64::from_polar(radius, angle)
        })
        .collect();

    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..degree {
            let p = horner(coeffs, roots[i]);
            let dp = horner(&deriv, roots[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..degree)
                .filter(|&j| j != i)
                .map(|j| (roots[i] - roots[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                roots[i] -= step;
                max_step = max_step.max(step.norm() / roots[i].norm().max(f64::MIN_POSITIVE));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }

    for root in roots.iter_mut() {
        let (p, dp) = horner_with_derivative(coeffs, *root);
        let step = p / dp;
        if step.is_finite() && relative_residual(coeffs, *root - step) <= relative_residual(coeffs, *root) {
            *root -= step;
        }
    }
    if roots.iter().any(|r| !r.is_finite()) {
        return Err(Error::Computation("root iteration diverged".into()));
    }
    Ok(roots)
}

/// Elementary symmetric functions `e_1..e_n` of `roots`.
pub fn elementary_symmetric(roots: &[Complex64]) -> Vec<Complex64> {
    let mut e = vec![Complex64::new(0.0, 0.0); roots.len() + 1];
    e[0] = Complex64::new(1.0, 0.0);
    for (m, r) in roots.iter().enumerate() {
        for k in (1..=m + 1).rev() {
            let prev = e[k - 1];
            e[k] += prev * r;
        }
    }
    e
}

/// Largest deviation between the roots' elementary symmetric functions and
/// the normalized coefficients (`e_k = (-1)^k a_{n-k} / a_n`), relative to
/// the size of each coefficient.
pub fn vieta_deviation(coeffs: &[Complex64], roots: &[Complex64]) -> f64 {
    let n = coeffs.len() - 1;
    let e = elementary_symmetric(roots);
    (1..=n)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let expected = coeffs[n - k] / coeffs[n] * sign;
            (e[k] - expected).norm() / expected.norm().max(1.0)
        })
        .fold(0.0, f64::max)
}

/// The `c + d` roots of the kernel at `z`, split into small and large by modulus.
///
/// The split is accepted only when the modulus ratio across it is at least
/// [`MIN_GAP_RATIO`]; this fails at and beyond `rho` on the real axis, where
/// `u_1` and `v_1` meet.
pub fn kernel_roots(steps: &StepSet, z: impl Into<Complex64>) -> Result<KernelRoots> {
    let z = z.into();
    if z.norm() == 0.0 || !z.is_finite() {
        return Err(Error::InvalidArgument(format!("z must be nonzero and finite, got {z}")));
    }
    let coeffs = kernel_polynomial(steps, z);
    let mut roots = polynomial_roots(&coeffs)?;
    roots.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    let max_residual = roots
        .iter()
        .map(|r| relative_residual(&coeffs, *r))
        .fold(0.0, f64::max);
    if max_residual > ROOT_RESIDUAL_BOUND {
        return Err(Error::Computation(format!(
            "kernel root residual {max_residual:.3e} exceeds {ROOT_RESIDUAL_BOUND:.0e}"
        )));
    }
    let c = steps.c() as usize;
    let gap_ratio = roots[c].norm() / roots[c - 1].norm();
    if gap_ratio < MIN_GAP_RATIO {
        return Err(Error::Unclassifiable {
            z: format!("{z}"),
            reason: format!("modulus gap ratio {gap_ratio:.6} below {MIN_GAP_RATIO}"),
        });
    }
    let large = roots.split_off(c);
    Ok(KernelRoots {
        z,
        small: roots,
        large,
        max_residual,
        gap_ratio,
    })
}

/// The two real positive roots `u_1 < tau < v_1` of `1 - z P(u)` for real
/// `0 < z < rho`.
///
/// On the positive axis `z P(u)` is convex with minimum `z P(tau) < 1`, so
/// each root is bracketed on its side of `tau`; no modulus classification is
/// involved, which keeps this usable arbitrarily close to `rho`.
pub fn real_branches(steps: &StepSet, z: f64) -> Result<(f64, f64)> {
    let constants = steps.structural_constants();
    if !(z > 0.0 && z < constants.rho) {
        return Err(Error::Unclassifiable {
            z: z.to_string(),
            reason: format!("real branches u1 < v1 only exist for 0 < z < rho = {}", constants.rho),
        });
    }
    let tau = constants.tau;
    let f = |u: f64| 1.0 - z * steps.eval_p(u, 0).expect("positive u");
    let df = |u: f64| -z * steps.eval_p(u, 1).expect("positive u");

    // f < 0 near 0 and f(tau) > 0
    let mut lo = tau * 0.5;
    while f(lo) >= 0.0 {
        lo *= 0.5;
    }
    let u1 = bracketed_root(&f, &df, lo, tau);
    let mut hi = tau * 2.0;
    while f(hi) >= 0.0 {
        hi *= 2.0;
    }
    let v1 = bracketed_root(&f, &df, tau, hi);
    Ok((u1, v1))
}

fn bracketed_root(f: &dyn Fn(f64) -> f64, df: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (mut lo, mut hi) = (a, b);
    let f_lo_negative = f(lo) < 0.0;
    let mut x = 0.5 * (lo + hi);
    for _ in 0..300 {
        let fx = f(x);
        if fx == 0.0 {
            return x;
        }
        if (fx < 0.0) == f_lo_negative {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - fx / df(x);
        let next = if newton > lo.min(hi) && newton < lo.max(hi) {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= 1e-16 * x.abs() || (hi - lo).abs() <= 2e-16 * x.abs() {
            return next;
        }
        x = next;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basketball_at_one_tenth() {
        let roots = kernel_roots(&StepSet::basketball(), 0.1).unwrap();
        assert_eq!((roots.small.len(), roots.large.len()), (2, 2));
        // oracle: bisection on -z(1 + u + u^2 + u^3 + u^4) + u^2 over (0, 1)
        let g = |u: f64| u * u - 0.1 * (1.0 + u + u * u + u * u * u + u * u * u * u);
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) < 0.0 { lo = mid } else { hi = mid }
        }
        let u1 = roots.u1().unwrap();
        assert!((u1 - lo).abs() < 1e-12, "{u1} vs {lo}");
        // independent check: numpy.roots on the same quartic gives 0.40897706221458763
        assert!((u1 - 0.408_977_062_214_587_6).abs() < 1e-12);
        assert!(roots.max_residual <= ROOT_RESIDUAL_BOUND);
    }

    #[test]
    fn dyck_closed_form() {
        let roots = kernel_roots(&StepSet::dyck(), 0.25).unwrap();
        let expected = (1.0 - (1.0f64 - 4.0 * 0.0625).sqrt()) / (2.0 * 0.25);
        assert!((roots.u1().unwrap() - expected).abs() < 1e-14);
        assert!((expected - (2.0 - 3f64.sqrt())).abs() < 1e-15);
        assert!((roots.v1().unwrap() - 1.0 / expected).abs() < 1e-12);
    }

    #[test]
    fn split_degenerates_at_rho() {
        let bb = StepSet::basketball();
        assert!(matches!(kernel_roots(&bb, 0.2), Err(Error::Unclassifiable { .. })));
        assert!(matches!(kernel_roots(&bb, 0.25), Err(Error::Unclassifiable { .. })));
        assert!(kernel_roots(&bb, 0.0).is_err());
        let (u1, v1) = real_branches(&bb, 0.2 * (1.0 - 1e-10)).unwrap();
        assert!((u1 - 1.0).abs() < 1e-4 && (v1 - 1.0).abs() < 1e-4);
        assert!(u1 < 1.0 && v1 > 1.0);
    }

    #[test]
    fn real_branches_match_polynomial_roots() {
        let s: StepSet = "-3:1,-1:2,0:1,2:3".parse().unwrap();
        let rho = s.structural_constants().rho;
        for frac in [0.25, 0.5, 0.75, 0.95] {
            let roots = kernel_roots(&s, frac * rho).unwrap();
            let (u1, v1) = real_branches(&s, frac * rho).unwrap();
            assert!((roots.u1().unwrap() - u1).abs() < 1e-12 * u1);
            assert!((roots.v1().unwrap() - v1).abs() < 1e-12 * v1);
        }
    }

    #[test]
    fn vieta_identity() {
        let s = StepSet::basketball();
        for frac in [0.25, 0.5, 0.75, 0.95] {
            let z = Complex64::new(0.2 * frac, 0.0);
            let roots = kernel_roots(&s, z).unwrap();
            let all: Vec<_> = roots.all().copied().collect();
            assert!(vieta_deviation(&kernel_polynomial(&s, z), &all) < 1e-9);
        }
    }

    #[test]
    fn complex_point() {
        let roots = kernel_roots(&StepSet::basketball(), Complex64::new(0.05, 0.05)).unwrap();
        assert_eq!(roots.small.len(), 2);
        assert!(roots.u1().is_none());
    }
}
