//! Drift, tau, rho, the square-root constant and the period of a few models.
//!
//!     cargo run --example structural_constants [-- "-3:1,-1:2,2:1/2"]

use lattice_localtime::stepset::{parse_stepset, StepSet};

fn main() -> lattice_localtime::error::Result<()> {
    let mut models = vec![
        ("basketball", StepSet::basketball()),
        ("dyck", StepSet::dyck()),
        ("motzkin", StepSet::motzkin()),
        ("drift -1", parse_stepset("-1:2,1:1")?),
    ];
    if let Some(arg) = std::env::args().nth(1) {
        models.push(("argument", parse_stepset(&arg)?));
    }
    println!(
        "{:<12} {:<24} {:>8} {:>10} {:>10} {:>10} {:>6}",
        "model", "steps", "drift", "tau", "rho", "sing", "period"
    );
    for (name, s) in models {
        let k = s.structural_constants();
        println!(
            "{name:<12} {:<24} {:>8} {:>10.6} {:>10.6} {:>10.6} {:>6}",
            s.to_string(),
            s.drift().to_string(),
            k.tau,
            k.rho,
            k.sing_const,
            k.period
        );
    }
    Ok(())
}
