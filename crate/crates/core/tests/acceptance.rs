//! Acceptance criteria, one line each. Runs as a plain binary (no libtest
//! harness) so every PASS/FAIL line is printed regardless of outcome; exits
//! nonzero when any criterion fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use lattice_localtime::algebra::{eval_qseries, QPoly};
use lattice_localtime::enumerate::{dp_distribution, exhaustive_distribution, DistTable};
use lattice_localtime::experiments::{
    compare, exact_distribution, sample_paths, windowed_distribution, EmpiricalDist, DEFAULT_WINDOW_K,
};
use lattice_localtime::kernel_numeric::{solve_bilateral_system, validate_puiseux, BoundarySystem, RootTemplate, ZqCoeff};
use lattice_localtime::kernel_series::{
    distribution_from_series, series_for, solve_walk_series, MarkerConfig,
};
use lattice_localtime::limitlaw::{classify, fit_continuous_scale, fit_discrete_params, Family, Law};
use lattice_localtime::stepset::{parse_stepset, StepSet};
use lattice_localtime::walk::{Statistic, WalkType};
use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Coefficients of `W(z, 1, q)` for the basketball walk with q marking
/// crossings, z^0 through z^9, constant term first.
const BASKETBALL_CROSSINGS: [&[u64]; 10] = [
    &[1],
    &[5],
    &[23, 2],
    &[109, 14, 2],
    &[519, 88, 16, 2],
    &[2489, 504, 112, 18, 2],
    &[11989, 2776, 700, 138, 20, 2],
    &[57959, 14896, 4150, 930, 166, 22, 2],
    &[280995, 78614, 23720, 5878, 1196, 196, 24, 2],
    &[1365537, 410046, 132264, 35518, 8004, 1500, 228, 26, 2],
];

fn criterion_1() -> Outcome {
    let s = solve_walk_series(&StepSet::basketball(), 9, MarkerConfig::CROSSINGS).unwrap();
    let got = s.eval_at_u1();
    let mut mismatches = Vec::new();
    for (n, expected) in BASKETBALL_CROSSINGS.iter().enumerate() {
        let expected = QPoly::from_coeffs(expected.iter().map(|&c| c.into()).collect());
        if got[n] != expected {
            mismatches.push(format!("z^{n}: got {} want {expected}", got[n]));
        }
    }
    outcome(
        mismatches.is_empty(),
        if mismatches.is_empty() {
            format!("z^0..z^9 exact, [z^9] = {}", got[9])
        } else {
            mismatches.join("; ")
        },
    )
}

fn random_stepset(rng: &mut ChaCha8Rng) -> StepSet {
    loop {
        let mut spec = Vec::new();
        for j in -3i64..=3 {
            if rng.random_bool(0.5) {
                spec.push(format!("{j}:{}", rng.random_range(1..=3)));
            }
        }
        if let Ok(s) = parse_stepset(&spec.join(",")) {
            return s;
        }
    }
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20240917);
    let mut checked = 0usize;
    let mut failures = Vec::new();
    let mut sets = Vec::new();
    for _ in 0..10 {
        let steps = random_stepset(&mut rng);
        sets.push(steps.to_string());
        for wt in WalkType::ALL {
            for stat in Statistic::ALL {
                let series = series_for(&steps, wt, stat, 30).unwrap();
                for n in 0..=30 {
                    let dp = dp_distribution(&steps, wt, n, stat);
                    let from_series = distribution_from_series(&series, wt, stat, n).unwrap();
                    if dp != from_series {
                        failures.push(format!("{steps} {wt} {stat} n={n}: series != dp"));
                    }
                    if n <= 8 {
                        let ex = exhaustive_distribution(&steps, wt, n, stat).unwrap();
                        if ex != dp {
                            failures.push(format!("{steps} {wt} {stat} n={n}: exhaustive != dp"));
                        }
                    }
                    checked += 1;
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            format!("{checked} (set, type, statistic, n) cases; sets: {}", sets.join(" | "))
        } else {
            failures[..failures.len().min(5)].join("; ")
        },
    )
}

fn template(terms: &[(i64, i64, i64, i64)]) -> RootTemplate {
    RootTemplate::from_terms(terms.iter().map(|&(e, c, z, zq)| (e, ZqCoeff::new(c, z, zq))))
}

/// The printed 5-equation basketball system, normalized to polynomial rows
/// in the root. Entries are (exponent of u, constant, z, z q).
fn printed_system_matches() -> bool {
    let sys = BoundarySystem::new(&StepSet::basketball());
    let small = [
        template(&[]),
        template(&[(0, 0, 0, 1)]),
        template(&[(1, 0, 1, 0), (0, 0, 1, 0)]),
        template(&[(2, 0, 1, 0), (1, 0, 1, 0), (0, -1, 1, 0)]),
        template(&[(3, 0, 1, 0), (2, 0, 1, 0), (1, -1, 1, 0), (0, 0, 1, 0)]),
    ];
    let large = [
        template(&[(3, 0, 1, 0), (2, -1, 1, 0), (1, 0, 1, 0), (0, 0, 1, 0)]),
        template(&[(3, -1, 1, 0), (2, 0, 1, 0), (1, 0, 1, 0)]),
        template(&[(3, 0, 1, 0), (2, 0, 1, 0)]),
        template(&[(3, 0, 0, 1)]),
        template(&[]),
    ];
    let zero_ok = sys.zero_row.iter().enumerate().all(|(i, c)| {
        *c == if i == 2 {
            ZqCoeff::new(1, -1, 0)
        } else {
            ZqCoeff::new(0, -1, 0)
        }
    });
    sys.size() == 5
        && BoundarySystem::normalized(&sys.small_row) == small
        && BoundarySystem::normalized(&sys.large_row) == large
        && zero_ok
}

fn criterion_3() -> Outcome {
    let bb = StepSet::basketball();
    let rho = bb.structural_constants().rho;
    let structural = printed_system_matches();
    let mut worst: f64 = 0.0;
    let mut lines = Vec::new();
    for z in [0.05, 0.10, 0.15] {
        let order = ((1e-12f64).ln() / (z / rho).ln()).ceil() as usize;
        let series = solve_walk_series(&bb, order, MarkerConfig::CROSSINGS).unwrap();
        let walks = series.eval_at_u1();
        let bridges = series.altitude(0);
        for q in [0.5, 1.0, 1.5] {
            let k = solve_bilateral_system(&bb, z, q).unwrap();
            let sw = eval_qseries(&walks, z, q);
            let sb = eval_qseries(&bridges, z, q);
            let ew = ((k.w_walk - sw) / sw).abs();
            let eb = ((k.w_bridge - sb) / sb).abs();
            worst = worst.max(ew).max(eb);
            lines.push(format!("z={z} q={q} N={order}: {ew:.1e}/{eb:.1e}"));
        }
    }
    outcome(
        structural && worst < 1e-9,
        format!(
            "structural match {structural}; worst relative error {worst:.2e} ({})",
            lines.join(", ")
        ),
    )
}

fn criterion_4() -> Outcome {
    let eps = [1e-4, 1e-5, 1e-6];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, steps) in [("basketball", StepSet::basketball()), ("dyck", StepSet::dyck())] {
        let rows = validate_puiseux(&steps, &eps).unwrap();
        let mut prev_small = f64::INFINITY;
        let mut prev_large = f64::INFINITY;
        for r in &rows {
            let in_band = |x: f64| (0.95..=1.05).contains(&x);
            ok &= in_band(r.small_ratio) && in_band(r.large_ratio);
            let (ds, dl) = ((r.small_ratio - 1.0).abs(), (r.large_ratio - 1.0).abs());
            ok &= ds < prev_small && dl < prev_large;
            prev_small = ds;
            prev_large = dl;
            parts.push(format!("{name} eps={:.0e}: {:.6}/{:.6}", r.epsilon, r.small_ratio, r.large_ratio));
        }
    }
    outcome(ok, parts.join(", "))
}

fn strictly_decreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] < w[0])
}

fn scale_mle(d: &EmpiricalDist, family: Family) -> f64 {
    let p: Vec<(u64, f64)> = d.probabilities.iter().map(|(k, v)| (*k, *v)).collect();
    match fit_continuous_scale(&p, d.n, family).unwrap() {
        Law::HalfNormal { lambda } | Law::Rayleigh { lambda } => lambda,
        _ => unreachable!(),
    }
}

fn criterion_5() -> Outcome {
    let bb = StepSet::basketball();
    let spec = classify(&bb, WalkType::Bridge);
    let dists: Vec<EmpiricalDist> = [100, 200, 400]
        .iter()
        .map(|&n| windowed_distribution(&bb, WalkType::Bridge, n, Statistic::LocalTime, DEFAULT_WINDOW_K).unwrap())
        .collect();
    let tvs: Vec<f64> = dists.iter().map(|d| compare(d, &spec).unwrap().tv_distance).collect();
    let report = compare(&dists[2], &spec).unwrap();
    let target = 2f64.sqrt() * (std::f64::consts::PI / 2.0).sqrt();
    let mean_err = (report.mean_empirical - target).abs() / target;
    let decreasing = strictly_decreasing(&tvs);
    let pass = decreasing && tvs[2] < 0.10 && mean_err <= 0.10;
    outcome(
        pass,
        format!(
            "tv(100,200,400) = {:.4}, {:.4}, {:.4} (strictly decreasing: {decreasing}, need tv(400) < 0.10); \
             mean/sqrt(n) = {:.4} vs {target:.4} ({:.1}% off, need <= 10%); \
             diagnostic: maximum-likelihood Rayleigh scale at n=400 is {:.4}, law uses {:.4}",
            tvs[0],
            tvs[1],
            tvs[2],
            report.mean_empirical,
            mean_err * 100.0,
            scale_mle(&dists[2], Family::Rayleigh),
            2f64.sqrt()
        ),
    )
}

fn criterion_6() -> Outcome {
    let bb = StepSet::basketball();
    let spec = classify(&bb, WalkType::Walk);
    let dists: Vec<EmpiricalDist> = [100, 200, 400]
        .iter()
        .map(|&n| windowed_distribution(&bb, WalkType::Walk, n, Statistic::LocalTime, DEFAULT_WINDOW_K).unwrap())
        .collect();
    let report = compare(&dists[2], &spec).unwrap();
    let chosen = report.law.selected_candidate.clone().unwrap_or_default();
    let series: Vec<f64> = dists.iter().map(|d| compare(d, &report.law).unwrap().tv_distance).collect();

    // stability between sources at n = 200 against the chosen parameterization
    let exact = exact_distribution(&bb, WalkType::Walk, 200, Statistic::LocalTime);
    let sampled = sample_paths(&bb, WalkType::Walk, 200, Statistic::LocalTime, 100_000, 42).unwrap();
    let tv_exact = compare(&exact, &report.law).unwrap().tv_distance;
    let tv_sampled = compare(&sampled, &report.law).unwrap().tv_distance;
    let stable = (tv_exact - tv_sampled).abs() < 0.02;

    let pass = report.tv_distance < 0.10 && stable;
    outcome(
        pass,
        format!(
            "candidates at n=400: {}; selected {chosen:?}; tv(100,200,400) = {:.4}, {:.4}, {:.4} (need tv(400) < 0.10); \
             source stability at n=200: exact {tv_exact:.4} vs sampler {tv_sampled:.4} (|diff| {:.4}, need < 0.02); \
             diagnostic: maximum-likelihood half-normal scale at n=400 is {:.4}",
            report
                .candidate_tv
                .iter()
                .map(|(l, t)| format!("{l} -> {t:.4}"))
                .collect::<Vec<_>>()
                .join(", "),
            series[0],
            series[1],
            series[2],
            (tv_exact - tv_sampled).abs(),
            scale_mle(&dists[2], Family::HalfNormal),
        ),
    )
}

fn criterion_7() -> Outcome {
    let neg = parse_stepset("-1:2,1:1").unwrap();
    let crossing_tables: Vec<DistTable> = [100, 200, 400]
        .iter()
        .map(|&n| dp_distribution(&neg, WalkType::Walk, n, Statistic::Crossings))
        .collect();
    let geometric = fit_discrete_params(&crossing_tables, Family::Geometric);
    let (geo_ok, geo_detail) = match &geometric {
        Ok(fit) => (
            fit.drifts.last().is_some_and(|d| *d < 0.05),
            format!("crossings fit {:?}, drift(200->400) {:.2e}", fit.spec.params, fit.drifts.last().unwrap()),
        ),
        Err(e) => (
            false,
            format!(
                "crossings of \"-1:2,1:1\" walks: {e} (unit steps never jump over 0; every path has 0 crossings)"
            ),
        ),
    };
    // same model, local time instead of crossings, for information
    let lt_tables: Vec<DistTable> = [100, 200, 400]
        .iter()
        .map(|&n| dp_distribution(&neg, WalkType::Walk, n, Statistic::LocalTime))
        .collect();
    let lt = fit_discrete_params(&lt_tables, Family::Geometric).unwrap();

    let dyck = StepSet::dyck();
    let tables: Vec<DistTable> = [40, 80, 160]
        .iter()
        .map(|&n| dp_distribution(&dyck, WalkType::Excursion, n, Statistic::Returns))
        .collect();
    let series = series_for(&dyck, WalkType::Excursion, Statistic::Returns, 160).unwrap();
    let cross_checked = [40, 80, 160]
        .iter()
        .zip(&tables)
        .all(|(&n, t)| distribution_from_series(&series, WalkType::Excursion, Statistic::Returns, n).unwrap() == *t);
    let nb = fit_discrete_params(&tables, Family::NegBinomial).unwrap();
    let ms: Vec<f64> = nb
        .per_length
        .iter()
        .map(|(_, l)| match l {
            Law::NegBinomial { m, .. } => *m,
            _ => unreachable!(),
        })
        .collect();
    let m_last = *ms.last().unwrap();
    let nb_ok = (m_last - 2.0).abs() <= 0.2 && cross_checked && nb.drifts.windows(2).all(|w| w[1] < w[0]);
    outcome(
        geo_ok && nb_ok,
        format!(
            "{geo_detail}; [info] local time of the same walks fits Geometric p = {:.6} with drift(200->400) {:.2e}; \
             Dyck excursion returns - 1 fit NegBinomial m(40,80,160) = {:.4}, {:.4}, {:.4} \
             (|m-2|/2 = {:.1}% at n=160, need <= 10%; drifts {:.3}, {:.3} shrinking), series cross-check {cross_checked}",
            match lt.spec.params {
                Some(Law::Geometric { p }) => p,
                _ => f64::NAN,
            },
            lt.drifts.last().unwrap(),
            ms[0],
            ms[1],
            ms[2],
            (m_last - 2.0).abs() / 2.0 * 100.0,
            nb.drifts[0],
            nb.drifts[1],
        ),
    )
}

fn criterion_8() -> Outcome {
    let bb = StepSet::basketball();
    let mut ok = true;
    let mut tested = Vec::new();
    for n in [0usize, 1, 2, 5, 10, 20, 50] {
        for stat in Statistic::ALL {
            let t = dp_distribution(&bb, WalkType::Walk, n, stat);
            ok &= t.total == BigUint::from(5u32).pow(n as u32);
            ok &= t.weight_denominator.is_one();
        }
        tested.push(n);
    }
    let series = solve_walk_series(&bb, 20, MarkerConfig::LOCAL_TIME).unwrap();
    for (n, c) in series.eval_at_u1().iter().enumerate() {
        ok &= c.eval_at_one() == num_bigint::BigInt::from(5u32).pow(n as u32);
    }
    outcome(ok, format!("walk totals = 5^n for n in {tested:?} (all statistics, DP) and n <= 20 (series)"))
}

fn main() {
    type Criterion = (&'static str, Duration, fn() -> Outcome);
    let criteria: Vec<Criterion> = vec![
        ("1 paper series golden", Duration::from_secs(5), criterion_1),
        ("2 triple-oracle equivalence", Duration::from_secs(300), criterion_2),
        ("3 bilateral system", Duration::from_secs(30), criterion_3),
        ("4 square-root expansion", Duration::from_secs(5), criterion_4),
        ("5 Rayleigh convergence", Duration::from_secs(600), criterion_5),
        ("6 half-normal convergence", Duration::from_secs(600), criterion_6),
        ("7 discrete-law fits", Duration::from_secs(300), criterion_7),
        ("8 sanity totals", Duration::from_secs(5), criterion_8),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    let mut results = BTreeMap::new();
    for (name, budget, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run));
        let elapsed = start.elapsed();
        let (pass, detail) = match result {
            Ok(o) => (o.pass && elapsed <= budget, o.detail),
            Err(e) => (
                false,
                format!(
                    "panicked: {}",
                    e.downcast_ref::<String>()
                        .cloned()
                        .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                        .unwrap_or_default()
                ),
            ),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {name}: {} [{:.2}s of {}s] {detail}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
        results.insert(name, pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.values().filter(|p| **p).count()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
