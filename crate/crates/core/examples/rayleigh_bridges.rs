//! Local time of basketball bridges against the Rayleigh law: distances at
//! growing n from the windowed DP, plus a histogram/law overlay at n = 200.
//!
//!     cargo run --release --example rayleigh_bridges
//!
//! Figures go to $LOCALTIME_OUT_DIR (default target/figures).

use std::path::PathBuf;

use lattice_localtime::experiments::{compare, emit_figure, windowed_distribution, DEFAULT_WINDOW_K};
use lattice_localtime::limitlaw::{classify, fit_continuous_scale, Family, LawSpec, ParamSource};
use lattice_localtime::stepset::StepSet;
use lattice_localtime::walk::{Statistic, WalkType};

fn main() -> lattice_localtime::error::Result<()> {
    let out = std::env::var_os("LOCALTIME_OUT_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("target/figures"));
    let steps = StepSet::basketball();
    let spec = classify(&steps, WalkType::Bridge);
    println!("predicted: {:?}", spec.params.unwrap());
    for n in [100, 200, 400, 800] {
        let dist = windowed_distribution(&steps, WalkType::Bridge, n, Statistic::LocalTime, DEFAULT_WINDOW_K)?;
        let report = compare(&dist, &spec)?;
        let probs: Vec<(u64, f64)> = dist.probabilities.iter().map(|(k, p)| (*k, *p)).collect();
        let fitted = fit_continuous_scale(&probs, n, Family::Rayleigh)?;
        let refit = compare(&dist, &LawSpec::with_law(fitted, ParamSource::Fitted))?;
        println!(
            "n = {n:>4}: tv {:.4}, mean/sqrt(n) {:.4} (law {:.4}); fitted {:?} has tv {:.4}",
            report.tv_distance, report.mean_empirical, report.mean_predicted, fitted, refit.tv_distance
        );
        if n == 200 {
            let files = emit_figure(&report, &dist, &out.join("bridges-local-time-n200"))?;
            println!("           wrote {} and {}", files.csv.display(), files.svg.display());
        }
    }
    Ok(())
}
