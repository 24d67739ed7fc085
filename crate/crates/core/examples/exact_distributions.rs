//! Exact distributions of the four statistics, computed three ways (series
//! coefficients, altitude DP, brute force) and checked against each other.
//!
//!     cargo run --example exact_distributions

use lattice_localtime::enumerate::{dp_distribution, exhaustive_distribution};
use lattice_localtime::kernel_series::{distribution_from_series, series_for};
use lattice_localtime::stepset::parse_stepset;
use lattice_localtime::walk::{Statistic, WalkType};

fn main() -> lattice_localtime::error::Result<()> {
    let steps = parse_stepset("-2:1/2,-1:1,1:3/2,3:1")?;
    let n = 8;
    println!("steps {steps}, n = {n}");
    for wt in WalkType::ALL {
        for stat in Statistic::ALL {
            let dp = dp_distribution(&steps, wt, n, stat);
            let series = distribution_from_series(&series_for(&steps, wt, stat, n)?, wt, stat, n)?;
            let brute = exhaustive_distribution(&steps, wt, n, stat)?;
            assert!(dp == series && dp == brute);
            let probs: Vec<String> = dp
                .probabilities()
                .iter()
                .map(|(k, p)| format!("{k}:{p:.4}"))
                .collect();
            println!("  {wt:<9} {stat:<10} mean {:>7.4}  {}", dp.mean(), probs.join(" "));
        }
    }
    let table = dp_distribution(&steps, WalkType::Bridge, 12, Statistic::LocalTime);
    println!("\nbridge local time at n = 12 as CSV:");
    table.write_csv(std::io::stdout())?;
    Ok(())
}
