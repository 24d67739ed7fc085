//! Large-n distributions (windowed floating-point DP and a seeded sampler),
//! distances to the predicted limit laws, and CSV/SVG figure output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::enumerate::{crossing_counts, landing_counts, DistTable};
use crate::error::{Error, Result};
use crate::limitlaw::{Law, LawSpec, Scaling};
use crate::stepset::StepSet;
use crate::walk::{Statistic, WalkType};

/// Largest length accepted by [`windowed_distribution`].
pub const MAX_WINDOWED_LENGTH: usize = 10_000;
/// Default window factor `K`.
pub const DEFAULT_WINDOW_K: f64 = 6.0;
/// Largest neglected probability mass a windowed distribution may carry.
pub const NEGLECTED_MASS_BOUND: f64 = 1e-9;
/// Rejection sampling of nonnegative paths is only offered up to this length.
pub const MAX_REJECTION_NONNEG_LENGTH: usize = 200;
/// Number of independent generator streams per sampling call.
pub const SAMPLER_STREAMS: u64 = 16;
/// Identifier of the generator recorded in sampler metadata.
pub const SAMPLER_ALGORITHM: &str = "chacha8/stream-per-worker/u64-threshold";

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Source {
    ExactDp,
    WindowedFloatDp {
        window_k: f64,
        half_width: i64,
        statistic_cap: u64,
        neglected_mass: f64,
    },
    Sampler {
        seed: u64,
        count: u64,
        algorithm: String,
        streams: u64,
        attempts: u64,
        acceptance_rate: f64,
    },
}

/// A distribution of a statistic at one length, from any source.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalDist {
    pub n: usize,
    pub walk_type: WalkType,
    pub statistic: Statistic,
    pub source: Source,
    pub probabilities: BTreeMap<u64, f64>,
}

impl EmpiricalDist {
    pub fn from_table(table: &DistTable) -> Self {
        EmpiricalDist {
            n: table.n,
            walk_type: table.walk_type,
            statistic: table.statistic,
            source: Source::ExactDp,
            probabilities: table.probabilities().into_iter().collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    pub fn probability(&self, value: u64) -> f64 {
        self.probabilities.get(&value).copied().unwrap_or(0.0)
    }

    pub fn mass(&self) -> f64 {
        self.probabilities.values().sum()
    }

    pub fn mean(&self) -> f64 {
        self.probabilities.iter().map(|(k, p)| *k as f64 * p).sum()
    }

    pub fn max_value(&self) -> Option<u64> {
        self.probabilities.keys().next_back().copied()
    }
}

/// `(1/2) sum |p_k - q_k|` over the union of supports.
pub fn total_variation(a: &EmpiricalDist, b: &EmpiricalDist) -> f64 {
    let keys: std::collections::BTreeSet<u64> =
        a.probabilities.keys().chain(b.probabilities.keys()).copied().collect();
    0.5 * keys
        .into_iter()
        .map(|k| (a.probability(k) - b.probability(k)).abs())
        .sum::<f64>()
}

fn normalized_weights(steps: &StepSet) -> Vec<(i64, f64)> {
    let w = steps.float_weights();
    let total: f64 = w.iter().map(|(_, x)| x).sum();
    w.into_iter().map(|(j, x)| (j, x / total)).collect()
}

/// Standard deviation of one step under the normalized weights.
pub fn step_std_dev(steps: &StepSet) -> f64 {
    let w = normalized_weights(steps);
    let mean: f64 = w.iter().map(|(j, p)| *j as f64 * p).sum();
    let second: f64 = w.iter().map(|(j, p)| (*j as f64).powi(2) * p).sum();
    (second - mean * mean).max(0.0).sqrt()
}

/// Distribution in double precision, restricted to `|y| <= K sigma sqrt(n ln n)`
/// and statistic values up to a cap of order `K sqrt(n ln n) / sigma`.
///
/// Every bit of probability pushed outside the window is accumulated. For
/// bridges the loss is reported relative to the probability of ending at 0.
pub fn windowed_distribution(
    steps: &StepSet,
    walk_type: WalkType,
    n: usize,
    statistic: Statistic,
    window_k: f64,
) -> Result<EmpiricalDist> {
    if !matches!(walk_type, WalkType::Walk | WalkType::Bridge) {
        return Err(Error::InvalidArgument(format!(
            "windowed distributions cover walks and bridges, not {walk_type}"
        )));
    }
    if n > MAX_WINDOWED_LENGTH {
        return Err(Error::InvalidArgument(format!(
            "n = {n} exceeds {MAX_WINDOWED_LENGTH}"
        )));
    }
    if window_k.is_nan() || window_k <= 0.0 {
        return Err(Error::InvalidArgument(format!("window factor must be positive, got {window_k}")));
    }
    let (c, d) = (steps.c(), steps.d());
    let n_i = n as i64;
    let sigma = step_std_dev(steps);
    let spread = (n as f64 * (n as f64).ln().max(1.0)).sqrt();
    let half_width = (window_k * sigma * spread).ceil() as i64;
    let lo = (-half_width).max(-c * n_i);
    let hi = half_width.min(d * n_i);
    let period = steps.period() as f64;
    let stat_cap = ((2.0 * window_k * period * spread / sigma.max(1e-3)).ceil() as u64).min(n as u64);
    let width = (hi - lo + 1) as usize;
    let s = stat_cap as usize + 1;
    let weights = normalized_weights(steps);
    let bridge = walk_type == WalkType::Bridge;

    let mut cur = vec![0.0f64; width * s];
    let mut active = vec![false; width];
    cur[(-lo) as usize * s] = 1.0;
    active[(-lo) as usize] = true;
    let mut lost = 0.0f64;

    for t in 0..n {
        let remaining = (n - t - 1) as i64;
        let mut next = vec![0.0f64; width * s];
        let mut next_active = vec![false; width];
        for idx in 0..width {
            if !active[idx] {
                continue;
            }
            let y = lo + idx as i64;
            let row = &cur[idx * s..(idx + 1) * s];
            let mut row_sum: Option<f64> = None;
            for &(jump, p) in &weights {
                let y2 = y + jump;
                // unable to return to 0: contributes nothing to bridges
                if bridge && (y2 > c * remaining || y2 < -d * remaining) {
                    continue;
                }
                if y2 < lo || y2 > hi {
                    lost += p * *row_sum.get_or_insert_with(|| row.iter().sum());
                    continue;
                }
                let mut bump = 0usize;
                if crossing_counts(statistic) && ((y > 0 && y2 < 0) || (y < 0 && y2 > 0)) {
                    bump += 1;
                }
                if y2 == 0 && landing_counts(statistic, t + 1, n) {
                    bump += 1;
                }
                let didx = (y2 - lo) as usize;
                next_active[didx] = true;
                let dst = &mut next[didx * s..(didx + 1) * s];
                for v in 0..s - bump {
                    dst[v + bump] += p * row[v];
                }
                lost += p * row[s - bump..].iter().sum::<f64>();
            }
        }
        cur = next;
        active = next_active;
    }

    let mut probabilities = BTreeMap::new();
    let mut kept = 0.0;
    for idx in 0..width {
        let y = lo + idx as i64;
        if !active[idx] || (bridge && y != 0) {
            continue;
        }
        for (v, p) in cur[idx * s..(idx + 1) * s].iter().enumerate() {
            if *p > 0.0 {
                *probabilities.entry(v as u64).or_insert(0.0) += p;
                kept += p;
            }
        }
    }
    if kept <= 0.0 {
        return Err(Error::Degenerate(format!("no {walk_type} of length {n} exists")));
    }
    let neglected = if bridge { lost / kept } else { lost };
    if neglected > NEGLECTED_MASS_BOUND {
        return Err(Error::WindowOverflow {
            mass: neglected,
            bound: NEGLECTED_MASS_BOUND,
        });
    }
    if bridge {
        for p in probabilities.values_mut() {
            *p /= kept;
        }
    }
    Ok(EmpiricalDist {
        n,
        walk_type,
        statistic,
        source: Source::WindowedFloatDp {
            window_k,
            half_width,
            statistic_cap: stat_cap,
            neglected_mass: neglected,
        },
        probabilities,
    })
}

/// Whether at least one path of the given type and length exists.
pub fn paths_exist(steps: &StepSet, walk_type: WalkType, n: usize) -> bool {
    let (c, d) = (steps.c(), steps.d());
    let lo = if walk_type.is_nonnegative() { 0 } else { -c * n as i64 };
    let hi = d * n as i64;
    let width = (hi - lo + 1) as usize;
    let mut reach = vec![false; width];
    reach[(-lo) as usize] = true;
    let support = steps.support();
    for _ in 0..n {
        let mut next = vec![false; width];
        for (idx, r) in reach.iter().enumerate() {
            if !r {
                continue;
            }
            for j in &support {
                let y2 = lo + idx as i64 + j;
                if y2 >= lo && y2 <= hi {
                    next[(y2 - lo) as usize] = true;
                }
            }
        }
        reach = next;
    }
    if walk_type.ends_at_zero() {
        reach[(-lo) as usize]
    } else {
        reach.iter().any(|r| *r)
    }
}

/// Cumulative thresholds `floor(2^64 * cum_i / total)` so that a uniform
/// 64-bit draw `r` selects step `i` iff `threshold[i-1] <= r < threshold[i]`.
fn step_thresholds(steps: &StepSet) -> (Vec<i64>, Vec<u128>) {
    let cleared = steps.cleared();
    let total: BigUint = cleared.weights.iter().map(|(_, w)| w.magnitude().clone()).sum();
    let mut cum = BigUint::from(0u32);
    let mut jumps = Vec::new();
    let mut thresholds = Vec::new();
    for (j, w) in &cleared.weights {
        cum += w.magnitude();
        let t: BigUint = (&cum << 64u32) / &total;
        jumps.push(*j);
        thresholds.push(t.to_u128().expect("threshold fits in 65 bits"));
    }
    (jumps, thresholds)
}

fn sample_stream(
    jumps: &[i64],
    thresholds: &[u128],
    walk_type: WalkType,
    n: usize,
    statistic: Statistic,
    quota: u64,
    rng: &mut ChaCha8Rng,
) -> (Vec<u64>, u64) {
    let mut hist: Vec<u64> = Vec::new();
    let mut attempts = 0u64;
    let mut accepted = 0u64;
    while accepted < quota {
        attempts += 1;
        let mut y = 0i64;
        let mut value = 0usize;
        let mut ok = true;
        for t in 0..n {
            let r = rng.next_u64() as u128;
            let i = thresholds.partition_point(|&th| th <= r);
            let y2 = y + jumps[i];
            if walk_type.is_nonnegative() && y2 < 0 {
                ok = false;
                break;
            }
            if crossing_counts(statistic) && ((y > 0 && y2 < 0) || (y < 0 && y2 > 0)) {
                value += 1;
            }
            if y2 == 0 && landing_counts(statistic, t + 1, n) {
                value += 1;
            }
            y = y2;
        }
        if !ok || (walk_type.ends_at_zero() && y != 0) {
            continue;
        }
        if hist.len() <= value {
            hist.resize(value + 1, 0);
        }
        hist[value] += 1;
        accepted += 1;
    }
    (hist, attempts)
}

/// Empirical distribution from `count` independent paths.
///
/// Paths are drawn step by step from [`SAMPLER_STREAMS`] ChaCha8 streams of
/// one seed; bridges, meanders and excursions by rejection. Stream results
/// are merged in stream order, so output depends only on the arguments.
pub fn sample_paths(
    steps: &StepSet,
    walk_type: WalkType,
    n: usize,
    statistic: Statistic,
    count: u64,
    seed: u64,
) -> Result<EmpiricalDist> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    if walk_type.is_nonnegative() && n > MAX_REJECTION_NONNEG_LENGTH {
        return Err(Error::InvalidArgument(format!(
            "rejection sampling of {walk_type}s is limited to n <= {MAX_REJECTION_NONNEG_LENGTH}"
        )));
    }
    if !paths_exist(steps, walk_type, n) {
        return Err(Error::InvalidArgument(format!(
            "no {walk_type} of length {n} exists for this step set"
        )));
    }
    let (jumps, thresholds) = step_thresholds(steps);
    let results: Vec<(Vec<u64>, u64)> = (0..SAMPLER_STREAMS)
        .into_par_iter()
        .map(|stream| {
            let quota = count / SAMPLER_STREAMS + u64::from(stream < count % SAMPLER_STREAMS);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream);
            sample_stream(&jumps, &thresholds, walk_type, n, statistic, quota, &mut rng)
        })
        .collect();
    let mut merged: BTreeMap<u64, u64> = BTreeMap::new();
    let mut attempts = 0;
    for (hist, a) in results {
        attempts += a;
        for (v, k) in hist.into_iter().enumerate() {
            if k > 0 {
                *merged.entry(v as u64).or_insert(0) += k;
            }
        }
    }
    Ok(EmpiricalDist {
        n,
        walk_type,
        statistic,
        source: Source::Sampler {
            seed,
            count,
            algorithm: SAMPLER_ALGORITHM.into(),
            streams: SAMPLER_STREAMS,
            attempts,
            acceptance_rate: count as f64 / attempts as f64,
        },
        probabilities: merged
            .into_iter()
            .map(|(v, k)| (v, k as f64 / count as f64))
            .collect(),
    })
}

/// Pearson chi-square of a sampled distribution against exact probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    /// `P(chi2_dof >= statistic)`.
    pub p_value: f64,
}

/// Bins with expected count below 5 are pooled with their neighbours.
pub fn chi_square(sample: &EmpiricalDist, exact: &EmpiricalDist, count: u64) -> Result<ChiSquare> {
    let n = count as f64;
    let keys: std::collections::BTreeSet<u64> =
        sample.probabilities.keys().chain(exact.probabilities.keys()).copied().collect();
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut obs, mut exp) = (0.0, 0.0);
    for k in keys {
        obs += sample.probability(k) * n;
        exp += exact.probability(k) * n;
        if exp >= 5.0 {
            bins.push((obs, exp));
            obs = 0.0;
            exp = 0.0;
        }
    }
    if let Some(last) = bins.last_mut() {
        last.0 += obs;
        last.1 += exp;
    } else {
        return Err(Error::Degenerate("too few expected counts for a chi-square test".into()));
    }
    if bins.len() < 2 {
        return Err(Error::Degenerate("chi-square needs at least two bins".into()));
    }
    let statistic = bins.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    let dof = bins.len() - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::Computation(e.to_string()))?;
    Ok(ChiSquare {
        statistic,
        dof,
        p_value: 1.0 - dist.cdf(statistic),
    })
}

/// Distance of a distribution from a predicted law.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    pub law: LawSpec,
    pub n: usize,
    pub tv_distance: f64,
    /// Sup-distance of densities (continuous, after rescaling) or masses.
    pub sup_pdf_distance: f64,
    pub mean_empirical: f64,
    pub mean_predicted: f64,
    pub n_series: Vec<(usize, f64)>,
    /// Total variation of every candidate parameterization, when several exist.
    pub candidate_tv: Vec<(String, f64)>,
}

/// Mass of the law on each value `k`, after rescaling when the law is
/// continuous: the bin of `k` is `[(k - 1/2), (k + 1/2)] / sqrt(n)`, clipped at 0.
fn law_mass(law: &Law, scaling: Scaling, n: usize, offset: u64, k: u64) -> f64 {
    match scaling {
        Scaling::SqrtN => {
            let r = (n as f64).sqrt();
            let lo = ((k as f64 - 0.5) / r).max(0.0);
            let hi = (k as f64 + 0.5) / r;
            law.cdf_unchecked(hi) - law.cdf_unchecked(lo)
        }
        Scaling::None => {
            if k < offset {
                0.0
            } else {
                law.pdf((k - offset) as f64).unwrap_or(0.0)
            }
        }
    }
}

fn law_density(law: &Law, scaling: Scaling, n: usize, offset: u64, k: u64) -> f64 {
    match scaling {
        Scaling::SqrtN => law.pdf(k as f64 / (n as f64).sqrt()).unwrap_or(0.0),
        Scaling::None => law_mass(law, scaling, n, offset, k),
    }
}

fn distances(dist: &EmpiricalDist, law: &Law, spec: &LawSpec) -> (f64, f64) {
    let n = dist.n;
    let max = dist.max_value().unwrap_or(0);
    let mut tv = 0.0;
    let mut sup: f64 = 0.0;
    let mut covered = 0.0;
    let density_scale = match spec.scaling {
        Scaling::SqrtN => (n as f64).sqrt(),
        Scaling::None => 1.0,
    };
    for k in 0..=max {
        let m = law_mass(law, spec.scaling, n, spec.offset, k);
        covered += m;
        tv += (dist.probability(k) - m).abs();
        let emp_density = dist.probability(k) * density_scale;
        sup = sup.max((emp_density - law_density(law, spec.scaling, n, spec.offset, k)).abs());
    }
    // law mass beyond the largest observed value
    tv += (1.0 - covered).max(0.0);
    ((0.5 * tv).clamp(0.0, 1.0), sup)
}

fn check_compatible(dist: &EmpiricalDist, spec: &LawSpec) -> Result<()> {
    if dist.is_empty() {
        return Err(Error::InvalidArgument("empty distribution".into()));
    }
    if spec.scaling == Scaling::SqrtN && dist.n == 0 {
        return Err(Error::InvalidArgument("a sqrt(n)-scaled law needs n > 0".into()));
    }
    if spec.family.is_continuous() != (spec.scaling == Scaling::SqrtN) {
        return Err(Error::InvalidArgument(format!(
            "{:?} law is incompatible with scaling {:?}",
            spec.family, spec.scaling
        )));
    }
    Ok(())
}

/// Compares one distribution with a law. When the law carries several
/// candidate parameterizations, the one with the smallest distance is selected.
pub fn compare(dist: &EmpiricalDist, spec: &LawSpec) -> Result<FitReport> {
    compare_series(std::slice::from_ref(dist), spec)
}

/// Compares distributions at several lengths; the headline numbers refer to
/// the largest `n`, and candidate selection is made there.
pub fn compare_series(dists: &[EmpiricalDist], spec: &LawSpec) -> Result<FitReport> {
    let last = dists
        .iter()
        .max_by_key(|d| d.n)
        .ok_or_else(|| Error::InvalidArgument("no distributions to compare".into()))?;
    for d in dists {
        check_compatible(d, spec)?;
    }
    let mut spec = spec.clone();
    let mut candidate_tv = Vec::new();
    if !spec.candidates.is_empty() {
        for cand in &spec.candidates {
            candidate_tv.push((cand.label.clone(), distances(last, &cand.law, &spec).0));
        }
        let best = candidate_tv
            .iter()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(l, _)| l.clone())
            .expect("nonempty");
        spec.select_candidate(&best)?;
    }
    let law = spec.law()?;
    law.validate()?;
    let mut n_series: Vec<(usize, f64)> = dists.iter().map(|d| (d.n, distances(d, &law, &spec).0)).collect();
    n_series.sort_by_key(|(n, _)| *n);
    let (tv, sup) = distances(last, &law, &spec);
    let (mean_empirical, mean_predicted) = match spec.scaling {
        Scaling::SqrtN => (last.mean() / (last.n as f64).sqrt(), law.mean()),
        Scaling::None => (last.mean(), law.mean() + spec.offset as f64),
    };
    Ok(FitReport {
        law: spec,
        n: last.n,
        tv_distance: tv,
        sup_pdf_distance: sup,
        mean_empirical,
        mean_predicted,
        n_series,
        candidate_tv,
    })
}

/// Paths of the files written by [`emit_figure`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FigureFiles {
    pub csv: PathBuf,
    pub svg: PathBuf,
}

struct FigureData {
    /// (x, empirical density, law density) at each value.
    rows: Vec<(f64, f64, f64)>,
    /// Smooth law curve for the overlay.
    curve: Vec<(f64, f64)>,
    bar_width: f64,
}

fn figure_data(report: &FitReport, dist: &EmpiricalDist) -> Result<FigureData> {
    let spec = &report.law;
    let law = spec.law()?;
    let max = dist.max_value().unwrap_or(0);
    let (scale, bar_width) = match spec.scaling {
        Scaling::SqrtN => ((dist.n as f64).sqrt(), 1.0 / (dist.n as f64).sqrt()),
        Scaling::None => (1.0, 1.0),
    };
    let rows: Vec<(f64, f64, f64)> = (0..=max)
        .map(|k| {
            (
                k as f64 / scale,
                dist.probability(k) * scale,
                law_density(&law, spec.scaling, dist.n, spec.offset, k),
            )
        })
        .collect();
    let curve = match spec.scaling {
        Scaling::SqrtN => {
            let x_max = (max as f64 + 0.5) / scale;
            (0..=400)
                .map(|i| {
                    let x = x_max * i as f64 / 400.0;
                    (x, law.pdf(x).unwrap_or(0.0))
                })
                .collect()
        }
        Scaling::None => rows.iter().map(|(x, _, l)| (*x, *l)).collect(),
    };
    Ok(FigureData {
        rows,
        curve,
        bar_width,
    })
}

fn render_svg(report: &FitReport, dist: &EmpiricalDist, data: &FigureData) -> String {
    const W: f64 = 720.0;
    const H: f64 = 450.0;
    const ML: f64 = 60.0;
    const MR: f64 = 20.0;
    const MT: f64 = 40.0;
    const MB: f64 = 50.0;
    let x_max = data
        .rows
        .last()
        .map(|r| r.0 + data.bar_width / 2.0)
        .unwrap_or(1.0)
        .max(data.curve.last().map(|c| c.0).unwrap_or(0.0))
        .max(1e-9);
    let y_max = data
        .rows
        .iter()
        .map(|r| r.1.max(r.2))
        .chain(data.curve.iter().map(|c| c.1))
        .fold(0.0f64, f64::max)
        .max(1e-12)
        * 1.1;
    let px = |x: f64| ML + (W - ML - MR) * x / x_max;
    let py = |y: f64| H - MB - (H - MT - MB) * y / y_max;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let title = format!(
        "{} of {}s, n = {}, vs {:?} (tv = {:.4})",
        dist.statistic, dist.walk_type, dist.n, report.law.family, report.tv_distance
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="24" font-family="sans-serif" font-size="15" text-anchor="middle">{title}</text>"#,
        W / 2.0
    );
    for (x, emp, _) in &data.rows {
        let left = px(x - data.bar_width / 2.0).max(ML);
        let right = px(x + data.bar_width / 2.0);
        let _ = writeln!(
            s,
            r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#d62728" fill-opacity="0.55"/>"##,
            left,
            py(*emp),
            (right - left).max(0.0),
            (H - MB - py(*emp)).max(0.0)
        );
    }
    let points: Vec<String> = data
        .curve
        .iter()
        .map(|(x, y)| format!("{:.2},{:.2}", px(*x), py(*y)))
        .collect();
    let _ = writeln!(
        s,
        r##"<polyline points="{}" fill="none" stroke="#2ca02c" stroke-width="2"/>"##,
        points.join(" ")
    );
    let _ = writeln!(
        s,
        r#"<line x1="{ML}" y1="{0:.1}" x2="{1:.1}" y2="{0:.1}" stroke="black"/>"#,
        H - MB,
        W - MR
    );
    let _ = writeln!(
        s,
        r#"<line x1="{ML}" y1="{MT}" x2="{ML}" y2="{:.1}" stroke="black"/>"#,
        H - MB
    );
    for i in 0..=5 {
        let x = x_max * i as f64 / 5.0;
        let y = y_max * i as f64 / 5.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="middle">{:.2}</text>"#,
            px(x),
            H - MB + 16.0,
            x
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="end">{:.3}</text>"#,
            ML - 6.0,
            py(y) + 4.0,
            y
        );
    }
    let xlabel = match report.law.scaling {
        Scaling::SqrtN => "value / sqrt(n)",
        Scaling::None => "value",
    };
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle">{xlabel}</text>"#,
        (ML + W - MR) / 2.0,
        H - 10.0
    );
    s.push_str("</svg>\n");
    s
}

/// Writes `<prefix>.csv` (columns `x, empirical_density, law_density`) and
/// `<prefix>.svg` (histogram with the law overlaid).
pub fn emit_figure(report: &FitReport, dist: &EmpiricalDist, prefix: &Path) -> Result<FigureFiles> {
    if dist.is_empty() || report.n_series.is_empty() {
        return Err(Error::InvalidArgument("nothing to plot: empty distribution".into()));
    }
    let data = figure_data(report, dist)?;
    let csv_path = prefix.with_extension("csv");
    let svg_path = prefix.with_extension("svg");
    if let Some(dir) = csv_path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut w = csv::Writer::from_path(&csv_path)?;
    w.write_record(["x", "empirical_density", "law_density"])?;
    for (x, emp, law) in &data.rows {
        w.write_record([format!("{x:.10e}"), format!("{emp:.10e}"), format!("{law:.10e}")])?;
    }
    w.flush()?;
    fs::write(&svg_path, render_svg(report, dist, &data))?;
    Ok(FigureFiles {
        csv: csv_path,
        svg: svg_path,
    })
}

/// Exact distribution as an [`EmpiricalDist`].
pub fn exact_distribution(
    steps: &StepSet,
    walk_type: WalkType,
    n: usize,
    statistic: Statistic,
) -> EmpiricalDist {
    EmpiricalDist::from_table(&crate::enumerate::dp_distribution(steps, walk_type, n, statistic))
}

/// Synthetic histogram of a continuous law at length `n`: bin masses of the
/// rescaled law, as produced by an ideal sample.
pub fn discretized_law(law: &Law, n: usize) -> EmpiricalDist {
    let r = (n as f64).sqrt();
    let mut probabilities = BTreeMap::new();
    let mut k = 0u64;
    loop {
        let m = law_mass(law, Scaling::SqrtN, n, 0, k);
        if m > 0.0 {
            probabilities.insert(k, m);
        }
        if law.cdf_unchecked((k as f64 + 0.5) / r) >= 1.0 - 1e-15 || k > 1_000_000 {
            break;
        }
        k += 1;
    }
    EmpiricalDist {
        n,
        walk_type: WalkType::Bridge,
        statistic: Statistic::LocalTime,
        source: Source::ExactDp,
        probabilities,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limitlaw::{classify, ParamSource};
    use crate::stepset::parse_stepset;

    #[test]
    fn windowed_matches_exact_bridge() {
        let bb = StepSet::basketball();
        let exact = exact_distribution(&bb, WalkType::Bridge, 200, Statistic::LocalTime);
        let win = windowed_distribution(&bb, WalkType::Bridge, 200, Statistic::LocalTime, DEFAULT_WINDOW_K).unwrap();
        assert!((win.mass() - 1.0).abs() < 1e-9);
        for k in 0..=200 {
            assert!((win.probability(k) - exact.probability(k)).abs() < 1e-9, "k = {k}");
        }
    }

    #[test]
    fn windowed_matches_exact_small_cases() {
        let s = parse_stepset("-2:1,-1:3,1:2,3:1").unwrap();
        for wt in [WalkType::Walk, WalkType::Bridge] {
            for stat in Statistic::ALL {
                let exact = exact_distribution(&s, wt, 40, stat);
                let win = windowed_distribution(&s, wt, 40, stat, DEFAULT_WINDOW_K).unwrap();
                assert!(total_variation(&exact, &win) < 1e-9, "{wt} {stat}");
            }
        }
    }

    #[test]
    fn windowed_edge_cases() {
        let bb = StepSet::basketball();
        let zero = windowed_distribution(&bb, WalkType::Walk, 0, Statistic::LocalTime, 6.0).unwrap();
        assert_eq!(zero.probabilities, BTreeMap::from([(0, 1.0)]));
        assert!(matches!(
            windowed_distribution(&bb, WalkType::Walk, 4000, Statistic::LocalTime, 1.0),
            Err(Error::WindowOverflow { .. })
        ));
        assert!(windowed_distribution(&bb, WalkType::Meander, 10, Statistic::Returns, 6.0).is_err());
        assert!(windowed_distribution(&bb, WalkType::Walk, 10_001, Statistic::Returns, 6.0).is_err());
    }

    #[test]
    fn thresholds_partition_the_draws() {
        let s = parse_stepset("-1:1/3,0:1/6,2:1/2").unwrap();
        let (jumps, th) = step_thresholds(&s);
        assert_eq!(jumps, vec![-1, 0, 2]);
        assert_eq!(*th.last().unwrap(), 1u128 << 64);
        let third = (1u128 << 64) / 3;
        assert_eq!(th[0], third);
        assert_eq!(th[1], (1u128 << 64) / 2);
    }

    #[test]
    fn sampler_is_deterministic() {
        let bb = StepSet::basketball();
        let a = sample_paths(&bb, WalkType::Bridge, 30, Statistic::LocalTime, 5000, 7).unwrap();
        let b = sample_paths(&bb, WalkType::Bridge, 30, Statistic::LocalTime, 5000, 7).unwrap();
        assert_eq!(a, b);
        let c = sample_paths(&bb, WalkType::Bridge, 30, Statistic::LocalTime, 5000, 8).unwrap();
        assert_ne!(a.probabilities, c.probabilities);
        assert!((a.mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sampler_close_to_exact() {
        let bb = StepSet::basketball();
        let exact = exact_distribution(&bb, WalkType::Walk, 200, Statistic::LocalTime);
        let sampled = sample_paths(&bb, WalkType::Walk, 200, Statistic::LocalTime, 100_000, 42).unwrap();
        assert!(total_variation(&exact, &sampled) <= 0.02);
        let exc = exact_distribution(&StepSet::motzkin(), WalkType::Excursion, 12, Statistic::Returns);
        let sexc = sample_paths(&StepSet::motzkin(), WalkType::Excursion, 12, Statistic::Returns, 50_000, 1).unwrap();
        assert!(total_variation(&exc, &sexc) <= 0.02);
    }

    #[test]
    fn sampler_guards() {
        let dyck = StepSet::dyck();
        assert!(sample_paths(&dyck, WalkType::Bridge, 7, Statistic::Returns, 10, 1).is_err());
        assert!(sample_paths(&dyck, WalkType::Meander, 201, Statistic::Returns, 10, 1).is_err());
        assert!(sample_paths(&dyck, WalkType::Walk, 7, Statistic::Returns, 0, 1).is_err());
        assert!(!paths_exist(&parse_stepset("-2:1,3:1").unwrap(), WalkType::Bridge, 4));
        assert!(paths_exist(&parse_stepset("-2:1,3:1").unwrap(), WalkType::Bridge, 5));
    }

    #[test]
    fn self_comparison() {
        let law = Law::Rayleigh {
            lambda: 2f64.sqrt(),
        };
        let synthetic = discretized_law(&law, 400);
        let report = compare(&synthetic, &LawSpec::with_law(law, ParamSource::Formula)).unwrap();
        assert!(report.tv_distance <= 0.01, "{}", report.tv_distance);
        assert!((report.mean_empirical - report.mean_predicted).abs() < 0.01);
    }

    #[test]
    fn compare_rejects_empty_and_unset() {
        let bb = StepSet::basketball();
        let mut d = exact_distribution(&bb, WalkType::Bridge, 10, Statistic::LocalTime);
        let unset = classify(&bb, WalkType::Excursion);
        assert!(compare(&d, &unset).is_err());
        d.probabilities.clear();
        assert!(compare(&d, &classify(&bb, WalkType::Bridge)).is_err());
    }

    #[test]
    fn candidates_are_arbitrated() {
        let bb = StepSet::basketball();
        let d = windowed_distribution(&bb, WalkType::Walk, 100, Statistic::LocalTime, 6.0).unwrap();
        let report = compare(&d, &classify(&bb, WalkType::Walk)).unwrap();
        assert_eq!(report.candidate_tv.len(), 2);
        let best = report
            .candidate_tv
            .iter()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        assert_eq!(report.law.selected_candidate.as_deref(), Some(best.0.as_str()));
        assert_eq!(report.tv_distance, best.1);
    }

    #[test]
    fn figure_files() {
        let dir = tempfile::tempdir().unwrap();
        let bb = StepSet::basketball();
        let d = exact_distribution(&bb, WalkType::Bridge, 40, Statistic::LocalTime);
        let report = compare(&d, &classify(&bb, WalkType::Bridge)).unwrap();
        let files = emit_figure(&report, &d, &dir.path().join("fig")).unwrap();
        let csv = fs::read_to_string(&files.csv).unwrap();
        assert!(csv.starts_with("x,empirical_density,law_density\n"));
        assert_eq!(csv.lines().count(), d.max_value().unwrap() as usize + 2);
        let svg = fs::read_to_string(&files.svg).unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        let again = emit_figure(&report, &d, &dir.path().join("fig2")).unwrap();
        assert_eq!(svg, fs::read_to_string(again.svg).unwrap());
        let mut empty = d.clone();
        empty.probabilities.clear();
        assert!(emit_figure(&report, &empty, &dir.path().join("x")).is_err());
    }
}
