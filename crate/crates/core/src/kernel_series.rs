//! Exact solution of the functional equation for `W(z, u, q)` in the ring of
//! truncated power series.
//!
//! One step from a slice of altitudes is `P(u)` times that slice; steps that
//! cross the axis are removed and re-added with a factor `q` through the
//! correction terms `{u^>0}(P(u) u^k) W_k` (for `-d < k < 0`) and
//! `{u^<0}(P(u) u^k) W_k` (for `0 < k < c`). Landing markers add
//! `(q - 1) [u^0](P(u) W)`.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

use crate::algebra::{step_convolve, LaurentU, QPoly, Region, SeriesZ, StepPolynomial};
use crate::enumerate::DistTable;
use crate::error::{Error, Result};
use crate::stepset::StepSet;
use crate::walk::{Statistic, WalkType};

/// Which events the marker `q` records.
///
/// At series level `touches` and `returns` produce the same recurrence (every
/// step landing on zero gets a `q`); the strict-interior convention for
/// touches is applied when a distribution is read off the series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MarkerConfig {
    pub mark_crossings: bool,
    pub mark_touches: bool,
    pub mark_returns: bool,
}

impl MarkerConfig {
    pub const NONE: MarkerConfig = MarkerConfig {
        mark_crossings: false,
        mark_touches: false,
        mark_returns: false,
    };

    pub const CROSSINGS: MarkerConfig = MarkerConfig {
        mark_crossings: true,
        ..Self::NONE
    };

    pub const RETURNS: MarkerConfig = MarkerConfig {
        mark_returns: true,
        ..Self::NONE
    };

    pub const TOUCHES: MarkerConfig = MarkerConfig {
        mark_touches: true,
        ..Self::NONE
    };

    pub const LOCAL_TIME: MarkerConfig = MarkerConfig {
        mark_crossings: true,
        mark_touches: true,
        mark_returns: false,
    };

    /// Markers needed to read `statistic` off the series.
    pub fn for_statistic(statistic: Statistic) -> Self {
        match statistic {
            Statistic::Crossings => Self::CROSSINGS,
            Statistic::Touches => Self::TOUCHES,
            Statistic::Returns => Self::RETURNS,
            Statistic::LocalTime => Self::LOCAL_TIME,
        }
    }

    pub fn validate(self) -> Result<Self> {
        if self.mark_touches && self.mark_returns {
            return Err(Error::InvalidArgument(
                "touches and returns markers are mutually exclusive".into(),
            ));
        }
        Ok(self)
    }

    fn marks_landings(self) -> bool {
        self.mark_touches || self.mark_returns
    }
}

/// The operator `W -> 1 + z P(u) W - z (1 - q) (crossing corrections) + ...`
/// whose unique fixed point is the generating function.
#[derive(Debug, Clone)]
pub struct FunctionalEquation {
    step: StepPolynomial,
    markers: MarkerConfig,
    nonnegative: bool,
    /// `(k, {u^>0}(P u^k))` for `-d < k < 0` and `(k, {u^<0}(P u^k))` for `0 < k < c`.
    corrections: Vec<(i64, LaurentU)>,
}

impl FunctionalEquation {
    /// Equation for unconstrained walks.
    pub fn walks(steps: &StepSet, markers: MarkerConfig) -> Result<Self> {
        Self::build(steps, markers.validate()?, false)
    }

    /// Equation restricted to nonnegative altitudes (meanders). Crossings are
    /// impossible there, so only landing markers matter.
    pub fn nonnegative(steps: &StepSet, markers: MarkerConfig) -> Result<Self> {
        Self::build(steps, markers.validate()?, true)
    }

    fn build(steps: &StepSet, markers: MarkerConfig, nonnegative: bool) -> Result<Self> {
        let step = StepPolynomial::new(steps);
        let (c, d) = (steps.c(), steps.d());
        let mut corrections = Vec::new();
        if markers.mark_crossings && !nonnegative {
            for k in (-d + 1)..=-1 {
                let part = step.laurent().shift_u(k).part_extract(Region::Positive);
                corrections.push((k, part));
            }
            for k in 1..c {
                let part = step.laurent().shift_u(k).part_extract(Region::Negative);
                corrections.push((k, part));
            }
        }
        Ok(FunctionalEquation {
            step,
            markers,
            nonnegative,
            corrections,
        })
    }

    pub fn step(&self) -> &StepPolynomial {
        &self.step
    }

    /// `[z^(n+1)]` of the operator's output given `[z^n]` of its input.
    pub fn apply_slice(&self, prev: &LaurentU) -> LaurentU {
        let q_minus_one = QPoly::from_i64s(&[-1, 1]);
        let mut moved = step_convolve(prev, &self.step);
        if self.nonnegative {
            moved = moved.restrict(0, i64::MAX);
        }
        let mut marked = LaurentU::zero();
        for (k, part) in &self.corrections {
            let wk = prev.coeff(*k);
            if !wk.is_zero() {
                marked.add_scaled(part, wk);
            }
        }
        if self.markers.marks_landings() {
            marked += &moved.part_extract(Region::Zero);
        }
        moved.add_scaled(&marked, &q_minus_one);
        moved
    }

    /// Applies the operator to a whole truncated series.
    pub fn apply(&self, w: &SeriesZ) -> SeriesZ {
        let order = w.order();
        let mut coeffs = Vec::with_capacity(order + 1);
        coeffs.push(LaurentU::one());
        for n in 0..order {
            coeffs.push(self.apply_slice(w.coeff(n)));
        }
        SeriesZ::from_coeffs(coeffs, self.step.denominator().clone()).expect("nonempty")
    }

    /// Fixed point truncated at `z^order`.
    ///
    /// Iterating from `W = 1`, pass `m + 1` only changes `[z^(m+1)]`, so the
    /// passes are carried out one order at a time.
    pub fn solve(&self, order: usize) -> SeriesZ {
        let mut coeffs = Vec::with_capacity(order + 1);
        coeffs.push(LaurentU::one());
        for n in 0..order {
            let next = self.apply_slice(&coeffs[n]);
            coeffs.push(next);
        }
        SeriesZ::from_coeffs(coeffs, self.step.denominator().clone()).expect("nonempty")
    }

    /// The plain iterates `W^(0) = 1, W^(m+1) = Phi(W^(m))`, `passes + 1` of them.
    pub fn iterates(&self, order: usize, passes: usize) -> Vec<SeriesZ> {
        let mut current = SeriesZ::zero(order);
        current
            .set_coeff(0, LaurentU::one())
            .expect("order 0 always exists");
        let mut out = vec![current.clone()];
        for _ in 0..passes {
            current = self.apply(&current);
            out.push(current.clone());
        }
        out
    }
}

/// `W(z, u, q)` truncated at `z^order`, with `q` marking what `markers` asks for.
pub fn solve_walk_series(steps: &StepSet, order: usize, markers: MarkerConfig) -> Result<SeriesZ> {
    Ok(FunctionalEquation::walks(steps, markers)?.solve(order))
}

/// `W_0(z, q)`: the bridge coefficients of a walk series.
pub fn bridge_series(walks: &SeriesZ) -> Vec<QPoly> {
    walks.altitude(0)
}

/// Meander and excursion series with `q` marking returns to zero (or nothing).
pub fn nonneg_series(
    steps: &StepSet,
    order: usize,
    mark_returns: bool,
) -> Result<(Vec<QPoly>, Vec<QPoly>)> {
    let markers = if mark_returns {
        MarkerConfig::RETURNS
    } else {
        MarkerConfig::NONE
    };
    let series = FunctionalEquation::nonnegative(steps, markers)?.solve(order);
    Ok((series.eval_at_u1(), series.altitude(0)))
}

/// The series from which `statistic` over `walk_type` can be read.
pub fn series_for(
    steps: &StepSet,
    walk_type: WalkType,
    statistic: Statistic,
    order: usize,
) -> Result<SeriesZ> {
    let markers = MarkerConfig::for_statistic(statistic);
    let eq = if walk_type.is_nonnegative() {
        FunctionalEquation::nonnegative(steps, markers)?
    } else {
        FunctionalEquation::walks(steps, markers)?
    };
    Ok(eq.solve(order))
}

/// `[z^n]` of the series restricted to `walk_type` (all altitudes, or
/// altitude 0), as a polynomial in `q`.
///
/// With `strict_interior`, the landing marker of the final step onto zero is
/// removed, turning returns into interior touches.
pub fn type_coefficient(
    series: &SeriesZ,
    walk_type: WalkType,
    n: usize,
    strict_interior: bool,
) -> Result<QPoly> {
    if n > series.order() {
        return Err(Error::InvalidArgument(format!(
            "length {n} beyond series order {}",
            series.order()
        )));
    }
    let mut poly = QPoly::zero();
    for (k, c) in series.coeff(n).terms() {
        let keep = match walk_type {
            WalkType::Walk | WalkType::Meander => true,
            WalkType::Bridge | WalkType::Excursion => k == 0,
        };
        if !keep {
            continue;
        }
        if k == 0 && n > 0 && strict_interior {
            // the final landing on zero is not an interior touch
            poly += &c.shift_down(1)?;
        } else {
            poly += c;
        }
    }
    Ok(poly)
}

/// Reads the exact distribution of `statistic` at length `n` off a series
/// produced by [`series_for`] with the same statistic and walk type.
pub fn distribution_from_series(
    series: &SeriesZ,
    walk_type: WalkType,
    statistic: Statistic,
    n: usize,
) -> Result<DistTable> {
    let strict_interior = matches!(statistic, Statistic::Touches | Statistic::LocalTime);
    let poly = type_coefficient(series, walk_type, n, strict_interior)?;
    let counts = poly
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(value, c)| {
            if c.is_negative() {
                Err(Error::Computation(format!("negative count {c} in series")))
            } else {
                Ok((value as u64, c.magnitude().clone()))
            }
        })
        .collect::<Result<_>>()?;
    Ok(DistTable::from_counts(
        n,
        statistic,
        walk_type,
        counts,
        to_biguint(series.weight_denominator()),
    ))
}

fn to_biguint(x: &BigInt) -> BigUint {
    x.magnitude().clone()
}
