//! Local time of basketball walks against the half-normal law. Both readings
//! of the parameter are compared and the closer one is kept; n = 4000 uses
//! the seeded sampler, smaller n the windowed DP.
//!
//!     cargo run --release --example half_normal_walks
//!
//! Figures go to $LOCALTIME_OUT_DIR (default target/figures).

use std::path::PathBuf;

use lattice_localtime::experiments::{
    compare, emit_figure, exact_distribution, sample_paths, total_variation, windowed_distribution,
    DEFAULT_WINDOW_K,
};
use lattice_localtime::limitlaw::classify;
use lattice_localtime::stepset::StepSet;
use lattice_localtime::walk::{Statistic, WalkType};

fn main() -> lattice_localtime::error::Result<()> {
    let out = std::env::var_os("LOCALTIME_OUT_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("target/figures"));
    let steps = StepSet::basketball();
    let spec = classify(&steps, WalkType::Walk);
    for n in [100, 200, 400] {
        let dist = windowed_distribution(&steps, WalkType::Walk, n, Statistic::LocalTime, DEFAULT_WINDOW_K)?;
        let report = compare(&dist, &spec)?;
        let cands: Vec<String> = report
            .candidate_tv
            .iter()
            .map(|(l, t)| format!("{l}: {t:.4}"))
            .collect();
        println!("n = {n}: {} -> keep {:?}", cands.join(", "), report.law.selected_candidate.unwrap());
    }

    let exact = exact_distribution(&steps, WalkType::Walk, 200, Statistic::LocalTime);
    let sampled = sample_paths(&steps, WalkType::Walk, 200, Statistic::LocalTime, 100_000, 42)?;
    println!("sampler vs exact at n = 200: tv {:.4}", total_variation(&exact, &sampled));

    let big = sample_paths(&steps, WalkType::Walk, 4000, Statistic::LocalTime, 100_000, 42)?;
    let report = compare(&big, &spec)?;
    println!(
        "n = 4000 (sampled): tv {:.4} with {:?}",
        report.tv_distance,
        report.law.selected_candidate.as_deref().unwrap_or("")
    );
    let files = emit_figure(&report, &big, &out.join("walks-local-time-n4000"))?;
    println!("wrote {} and {}", files.csv.display(), files.svg.display());
    Ok(())
}
