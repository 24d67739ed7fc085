//! Seeded, reproducible sampling of walks, bridges and excursions, with a
//! chi-square comparison against the exact distribution.
//!
//!     cargo run --release --example sampler

use lattice_localtime::experiments::{chi_square, exact_distribution, sample_paths, Source};
use lattice_localtime::stepset::parse_stepset;
use lattice_localtime::walk::{Statistic, WalkType};

fn main() -> lattice_localtime::error::Result<()> {
    let steps = parse_stepset("-2:1,-1:2,1:2,2:1/2")?;
    let count = 200_000;
    for (wt, n) in [(WalkType::Walk, 60), (WalkType::Bridge, 60), (WalkType::Excursion, 24)] {
        let sampled = sample_paths(&steps, wt, n, Statistic::Returns, count, 1234)?;
        let again = sample_paths(&steps, wt, n, Statistic::Returns, count, 1234)?;
        assert_eq!(sampled, again);
        let exact = exact_distribution(&steps, wt, n, Statistic::Returns);
        let chi = chi_square(&sampled, &exact, count)?;
        let Source::Sampler { acceptance_rate, algorithm, .. } = &sampled.source else { unreachable!() };
        println!(
            "{wt:<9} n = {n}: mean {:.4} (exact {:.4}), chi2 {:.1} on {} dof (p = {:.3}), acceptance {:.4}, {algorithm}",
            sampled.mean(),
            exact.mean(),
            chi.statistic,
            chi.dof,
            chi.p_value,
            acceptance_rate
        );
    }
    Ok(())
}
