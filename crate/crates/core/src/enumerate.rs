//! Exact counting oracles: statistics of explicit paths, a dynamic program
//! over (altitude, statistic value), and brute-force enumeration.
//!
//! These share no code with the series solver.

use std::collections::BTreeMap;
use std::io::Write;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::stepset::StepSet;
use crate::walk::{Statistic, WalkType};

/// Largest number of paths [`exhaustive_distribution`] will visit.
pub const EXHAUSTIVE_LIMIT: f64 = 1e8;

/// Statistics of one explicit path starting at altitude 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct PathStats {
    pub touches: u64,
    pub crossings: u64,
    pub returns: u64,
    pub local_time: u64,
    pub final_altitude: i64,
    pub min_altitude: i64,
}

impl PathStats {
    pub fn get(&self, statistic: Statistic) -> u64 {
        match statistic {
            Statistic::Crossings => self.crossings,
            Statistic::Touches => self.touches,
            Statistic::Returns => self.returns,
            Statistic::LocalTime => self.local_time,
        }
    }
}

pub fn path_statistics(jumps: &[i64], steps: &StepSet) -> Result<PathStats> {
    if let Some(position) = jumps.iter().position(|j| !steps.contains(*j)) {
        return Err(Error::JumpNotInSupport {
            jump: jumps[position],
            position,
        });
    }
    let n = jumps.len();
    let mut stats = PathStats::default();
    let mut y = 0i64;
    for (t, &jump) in jumps.iter().enumerate() {
        let next = y + jump;
        if (y > 0 && next < 0) || (y < 0 && next > 0) {
            stats.crossings += 1;
        }
        y = next;
        stats.min_altitude = stats.min_altitude.min(y);
        if y == 0 {
            stats.returns += 1;
            if t + 1 < n {
                stats.touches += 1;
            }
        }
    }
    stats.final_altitude = y;
    stats.local_time = stats.touches + stats.crossings;
    Ok(stats)
}

/// Exact distribution of a statistic over all paths of one length and type.
///
/// Counts are weighted by the integer-cleared step weights, so for a step set
/// with weight denominator `D` the probability of a value is `count / total`
/// and the weighted count is `count / D^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistTable {
    pub n: usize,
    pub statistic: Statistic,
    pub walk_type: WalkType,
    pub counts: BTreeMap<u64, BigUint>,
    pub total: BigUint,
    pub weight_denominator: BigUint,
}

impl DistTable {
    /// Drops zero counts and computes the total.
    pub fn from_counts(
        n: usize,
        statistic: Statistic,
        walk_type: WalkType,
        mut counts: BTreeMap<u64, BigUint>,
        weight_denominator: BigUint,
    ) -> Self {
        counts.retain(|_, c| !c.is_zero());
        let total = counts.values().sum();
        DistTable {
            n,
            statistic,
            walk_type,
            counts,
            total,
            weight_denominator,
        }
    }

    pub fn count(&self, value: u64) -> BigUint {
        self.counts.get(&value).cloned().unwrap_or_default()
    }

    pub fn probability(&self, value: u64) -> f64 {
        ratio_f64(&self.count(value), &self.total)
    }

    /// `(value, probability)` over the nonzero support.
    pub fn probabilities(&self) -> Vec<(u64, f64)> {
        self.counts
            .iter()
            .map(|(v, c)| (*v, ratio_f64(c, &self.total)))
            .collect()
    }

    /// `sum_k k * counts[k]`, exactly.
    pub fn first_moment(&self) -> BigUint {
        self.counts
            .iter()
            .map(|(v, c)| c * BigUint::from(*v))
            .sum()
    }

    pub fn mean(&self) -> f64 {
        ratio_f64(&self.first_moment(), &self.total)
    }

    pub fn max_value(&self) -> Option<u64> {
        self.counts.keys().next_back().copied()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["value", "count", "probability"])?;
        for (v, c) in &self.counts {
            w.write_record([
                v.to_string(),
                c.to_string(),
                format!("{:.16e}", ratio_f64(c, &self.total)),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "statistic": self.statistic,
            "walk_type": self.walk_type,
            "total": self.total.to_string(),
            "weight_denominator": self.weight_denominator.to_string(),
            "counts": self.counts.iter().map(|(v, c)| serde_json::json!({
                "value": v,
                "count": c.to_string(),
                "probability": ratio_f64(c, &self.total),
            })).collect::<Vec<_>>(),
        })
    }
}

/// `a / b` as `f64` without overflowing on huge operands.
pub fn ratio_f64(a: &BigUint, b: &BigUint) -> f64 {
    if b.is_zero() {
        return f64::NAN;
    }
    let shift = b.bits().saturating_sub(64);
    let a_s = a >> shift;
    let b_s = b >> shift;
    let exact = a_s.to_f64().unwrap_or(f64::INFINITY) / b_s.to_f64().unwrap();
    if exact.is_finite() {
        exact
    } else {
        let extra = a.bits() - b.bits();
        ratio_f64(&(a >> extra), b) * 2f64.powi(extra as i32)
    }
}

pub(crate) fn landing_counts(statistic: Statistic, t_after: usize, n: usize) -> bool {
    match statistic {
        Statistic::Crossings => false,
        Statistic::Returns => true,
        Statistic::Touches | Statistic::LocalTime => t_after < n,
    }
}

pub(crate) fn crossing_counts(statistic: Statistic) -> bool {
    matches!(statistic, Statistic::Crossings | Statistic::LocalTime)
}

/// Exact distribution by dynamic programming over (altitude, statistic value).
///
/// Altitudes that cannot be reached from 0 in `t` steps, or (for paths ending
/// at 0) cannot get back to 0 in the remaining `n - t` steps, are pruned.
pub fn dp_distribution(steps: &StepSet, walk_type: WalkType, n: usize, statistic: Statistic) -> DistTable {
    let cleared = steps.cleared();
    let (c, d) = (steps.c(), steps.d());
    let n_i = n as i64;
    let lo_all = if walk_type.is_nonnegative() { 0 } else { -c * n_i };
    let hi_all = d * n_i;
    let width = (hi_all - lo_all + 1) as usize;
    let weights: Vec<(i64, BigUint, bool)> = cleared
        .weights
        .iter()
        .map(|(j, w)| (*j, w.magnitude().clone(), w.magnitude().is_one()))
        .collect();

    // rows[y - lo_all][value]
    let mut rows: Vec<Vec<BigUint>> = vec![Vec::new(); width];
    rows[(-lo_all) as usize] = vec![BigUint::one()];
    let ends_at_zero = walk_type.ends_at_zero();

    for t in 0..n {
        let remaining = (n - t - 1) as i64;
        let t1 = (t + 1) as i64;
        let mut lo = (-c * t1).max(lo_all);
        let mut hi = d * t1;
        if ends_at_zero {
            lo = lo.max(-d * remaining);
            hi = hi.min(c * remaining);
        }
        let mut next: Vec<Vec<BigUint>> = vec![Vec::new(); width];
        for (idx, row) in rows.iter().enumerate() {
            if row.is_empty() {
                continue;
            }
            let y = lo_all + idx as i64;
            for (jump, w, unit) in &weights {
                let y2 = y + jump;
                if y2 < lo || y2 > hi {
                    continue;
                }
                let mut bump = 0usize;
                if crossing_counts(statistic) && ((y > 0 && y2 < 0) || (y < 0 && y2 > 0)) {
                    bump += 1;
                }
                if y2 == 0 && landing_counts(statistic, t + 1, n) {
                    bump += 1;
                }
                let dst = &mut next[(y2 - lo_all) as usize];
                if dst.len() < row.len() + bump {
                    dst.resize(row.len() + bump, BigUint::zero());
                }
                for (v, count) in row.iter().enumerate() {
                    if count.is_zero() {
                        continue;
                    }
                    if *unit {
                        dst[v + bump] += count;
                    } else {
                        dst[v + bump] += count * w;
                    }
                }
            }
        }
        rows = next;
    }

    let mut counts: BTreeMap<u64, BigUint> = BTreeMap::new();
    for (idx, row) in rows.iter().enumerate() {
        let y = lo_all + idx as i64;
        if ends_at_zero && y != 0 {
            continue;
        }
        for (v, count) in row.iter().enumerate() {
            if !count.is_zero() {
                *counts.entry(v as u64).or_default() += count;
            }
        }
    }
    if let Some(max) = counts.keys().next_back() {
        debug_assert!(*max as usize <= n);
    }
    DistTable::from_counts(
        n,
        statistic,
        walk_type,
        counts,
        cleared.denominator.magnitude().clone(),
    )
}

/// Distribution by visiting every path of length `n` depth-first.
pub fn exhaustive_distribution(
    steps: &StepSet,
    walk_type: WalkType,
    n: usize,
    statistic: Statistic,
) -> Result<DistTable> {
    let paths = (steps.len() as f64).powi(n as i32);
    if paths > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge {
            paths,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let cleared = steps.cleared();
    let weights: Vec<(i64, u128)> = cleared
        .weights
        .iter()
        .map(|(j, w)| {
            w.to_u128()
                .map(|w| (*j, w))
                .ok_or_else(|| Error::Computation(format!("weight {w} too large for enumeration")))
        })
        .collect::<Result<_>>()?;

    struct Walker<'a> {
        weights: &'a [(i64, u128)],
        n: usize,
        statistic: Statistic,
        walk_type: WalkType,
        counts: BTreeMap<u64, u128>,
        overflow: bool,
    }

    impl Walker<'_> {
        fn visit(&mut self, t: usize, y: i64, value: u64, weight: u128) {
            if t == self.n {
                if self.walk_type.ends_at_zero() && y != 0 {
                    return;
                }
                let slot = self.counts.entry(value).or_insert(0);
                match slot.checked_add(weight) {
                    Some(v) => *slot = v,
                    None => self.overflow = true,
                }
                return;
            }
            for &(jump, w) in self.weights {
                let y2 = y + jump;
                if self.walk_type.is_nonnegative() && y2 < 0 {
                    continue;
                }
                let crossed = (y > 0 && y2 < 0) || (y < 0 && y2 > 0);
                let landed = y2 == 0;
                let bump = match self.statistic {
                    Statistic::Crossings => crossed as u64,
                    Statistic::Returns => landed as u64,
                    Statistic::Touches => (landed && t + 1 < self.n) as u64,
                    Statistic::LocalTime => crossed as u64 + (landed && t + 1 < self.n) as u64,
                };
                match weight.checked_mul(w) {
                    Some(w2) => self.visit(t + 1, y2, value + bump, w2),
                    None => self.overflow = true,
                }
            }
        }
    }

    let mut walker = Walker {
        weights: &weights,
        n,
        statistic,
        walk_type,
        counts: BTreeMap::new(),
        overflow: false,
    };
    walker.visit(0, 0, 0, 1);
    if walker.overflow {
        return Err(Error::Computation("weighted path count overflowed u128".into()));
    }
    let counts = walker
        .counts
        .into_iter()
        .map(|(v, c)| (v, BigUint::from(c)))
        .collect();
    Ok(DistTable::from_counts(
        n,
        statistic,
        walk_type,
        counts,
        cleared.denominator.magnitude().clone(),
    ))
}
