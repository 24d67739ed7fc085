//! Numeric instantiation of the bilateral kernel method: kernel roots at a
//! point `z`, the boundary linear system, and the square-root behaviour of
//! the real branches at `rho`.

mod roots;
mod system;

pub use roots::{
    elementary_symmetric, kernel_polynomial, kernel_roots, polynomial_roots, real_branches,
    relative_residual, vieta_deviation, KernelRoots, MIN_GAP_RATIO, ROOT_RESIDUAL_BOUND,
};
pub use system::{
    solve_bilateral_system, solve_with, BoundarySystem, NumericKernel, RootTemplate, ZqCoeff,
    CONDITION_LIMIT, SYSTEM_RESIDUAL_BOUND,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::stepset::StepSet;

/// One row of [`validate_puiseux`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PuiseuxRow {
    pub epsilon: f64,
    pub z: f64,
    pub u1: f64,
    pub v1: f64,
    /// `(tau - u1) / (sing_const sqrt(epsilon))`.
    pub small_ratio: f64,
    /// `(v1 - tau) / (sing_const sqrt(epsilon))`.
    pub large_ratio: f64,
}

/// Compares `u_1`, `v_1` at `z = rho (1 - epsilon)` with
/// `tau -/+ sqrt(2 P(tau) / P''(tau)) sqrt(epsilon)`; both ratios tend to 1.
pub fn validate_puiseux(steps: &StepSet, epsilons: &[f64]) -> Result<Vec<PuiseuxRow>> {
    let k = steps.structural_constants();
    epsilons
        .iter()
        .map(|&eps| {
            if !(eps > 0.0 && eps < 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "epsilon must lie in (0, 1), got {eps}"
                )));
            }
            let z = k.rho * (1.0 - eps);
            let (u1, v1) = real_branches(steps, z)?;
            let scale = k.sing_const * eps.sqrt();
            Ok(PuiseuxRow {
                epsilon: eps,
                z,
                u1,
                v1,
                small_ratio: (k.tau - u1) / scale,
                large_ratio: (v1 - k.tau) / scale,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::eval_qseries;
    use crate::kernel_series::{bridge_series, solve_walk_series, MarkerConfig};

    fn template(terms: &[(i64, i64, i64, i64)]) -> RootTemplate {
        RootTemplate::from_terms(terms.iter().map(|&(e, c, z, zq)| (e, ZqCoeff::new(c, z, zq))))
    }

    #[test]
    fn basketball_printed_system() {
        let sys = BoundarySystem::new(&StepSet::basketball());
        assert_eq!(sys.size(), 5);
        // columns W_-2, W_-1, W_0, W_1, W_2; entries (exponent, constant, z, z*q)
        let small = [
            template(&[]),
            template(&[(0, 0, 0, 1)]),
            template(&[(1, 0, 1, 0), (0, 0, 1, 0)]),
            template(&[(2, 0, 1, 0), (1, 0, 1, 0), (0, -1, 1, 0)]),
            template(&[(3, 0, 1, 0), (2, 0, 1, 0), (1, -1, 1, 0), (0, 0, 1, 0)]),
        ];
        assert_eq!(BoundarySystem::normalized(&sys.small_row), small);
        let large = [
            template(&[(3, 0, 1, 0), (2, -1, 1, 0), (1, 0, 1, 0), (0, 0, 1, 0)]),
            template(&[(3, -1, 1, 0), (2, 0, 1, 0), (1, 0, 1, 0)]),
            template(&[(3, 0, 1, 0), (2, 0, 1, 0)]),
            template(&[(3, 0, 0, 1)]),
            template(&[]),
        ];
        assert_eq!(BoundarySystem::normalized(&sys.large_row), large);
        // W_0 = 1 + z (W_-2 + W_-1 + W_0 + W_1 + W_2)
        for (i, c) in sys.zero_row.iter().enumerate() {
            let expected = if i == 2 { ZqCoeff::new(1, -1, 0) } else { ZqCoeff::new(0, -1, 0) };
            assert_eq!(c, &expected);
        }
        assert_eq!(
            BoundarySystem::normalized(&sys.small_row)[4].to_string(),
            "z*u^3+z*u^2+z*u-u+z"
        );
    }

    #[test]
    fn q_one_is_geometric() {
        let k = solve_bilateral_system(&StepSet::basketball(), 0.1, 1.0).unwrap();
        assert!((k.w_walk - 2.0).abs() < 1e-12);
        assert!(k.real_fast_path);
        assert!(k.residual < 1e-12);
    }

    #[test]
    fn matches_truncated_series() {
        let bb = StepSet::basketball();
        let series = solve_walk_series(&bb, 60, MarkerConfig::CROSSINGS).unwrap();
        let walks = series.eval_at_u1();
        let bridges = bridge_series(&series);
        let (z, q) = (0.1, 0.5);
        let k = solve_bilateral_system(&bb, z, q).unwrap();
        let expected_walk = eval_qseries(&walks, z, q);
        let expected_bridge = eval_qseries(&bridges, z, q);
        assert!(((k.w_walk - expected_walk) / expected_walk).abs() < 1e-9);
        assert!(((k.w_bridge - expected_bridge) / expected_bridge).abs() < 1e-9);
        assert_eq!(k.w(0), Some(k.w_bridge));
        assert_eq!(k.w(3), None);
    }

    #[test]
    fn rejects_out_of_range() {
        let bb = StepSet::basketball();
        assert!(solve_bilateral_system(&bb, 0.2, 1.0).is_err());
        assert!(solve_bilateral_system(&bb, -0.1, 1.0).is_err());
        assert!(solve_bilateral_system(&bb, 0.1, 2.5).is_err());
    }

    #[test]
    fn puiseux_ratios() {
        for steps in [StepSet::basketball(), StepSet::dyck()] {
            let rows = validate_puiseux(&steps, &[1e-6]).unwrap();
            assert!((0.98..=1.02).contains(&rows[0].small_ratio), "{rows:?}");
            assert!((0.98..=1.02).contains(&rows[0].large_ratio), "{rows:?}");
        }
        assert!(validate_puiseux(&StepSet::basketball(), &[0.0]).is_err());
    }
}
