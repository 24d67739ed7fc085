//! Which limit law the local time follows for each path type, with
//! closed-form parameters where available and maximum-likelihood fits on
//! exact distributions for the discrete families.
//!
//!     cargo run --release --example limit_laws

use lattice_localtime::enumerate::dp_distribution;
use lattice_localtime::limitlaw::{classify, fit_discrete_params};
use lattice_localtime::stepset::{parse_stepset, StepSet};
use lattice_localtime::walk::{Statistic, WalkType};

fn main() -> lattice_localtime::error::Result<()> {
    let models = [
        ("basketball", StepSet::basketball()),
        ("motzkin", StepSet::motzkin()),
        ("drift -1", parse_stepset("-1:2,1:1,0:1")?),
        ("drift +1", parse_stepset("-1:1,0:1,1:2")?),
    ];
    for (name, steps) in &models {
        println!("{name} ({steps}):");
        for wt in WalkType::ALL {
            let spec = classify(steps, wt);
            let shown = match spec.params {
                Some(law) => format!("{law:?} from the formula"),
                None => {
                    let stat = if wt.is_nonnegative() { Statistic::Returns } else { Statistic::LocalTime };
                    let tables: Vec<_> = [50, 100, 200]
                        .iter()
                        .map(|&n| dp_distribution(steps, wt, n, stat))
                        .collect();
                    let fit = fit_discrete_params(&tables, spec.family)?;
                    format!(
                        "{:?} fitted (offset {}), drift between lengths {:?}{}",
                        fit.spec.params.unwrap(),
                        fit.spec.offset,
                        fit.drifts.iter().map(|d| format!("{d:.2e}")).collect::<Vec<_>>(),
                        if fit.stable { "" } else { "  [parameters still moving]" }
                    )
                }
            };
            println!("  {wt:<9} {:?}: {shown}", spec.family);
            for c in &spec.candidates {
                println!("            candidate {}: {:?}", c.label, c.law);
            }
        }
    }
    Ok(())
}
