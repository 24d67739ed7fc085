//! Crossings of the x-axis by basketball walks (jumps -2..2): the q-marked
//! generating function W(z, 1, q) through z^9, and the bridge part W_0.
//!
//!     cargo run --example series_golden

use lattice_localtime::kernel_series::{solve_walk_series, MarkerConfig};
use lattice_localtime::stepset::StepSet;

fn main() -> lattice_localtime::error::Result<()> {
    let steps = StepSet::basketball();
    let series = solve_walk_series(&steps, 9, MarkerConfig::CROSSINGS)?;
    println!("walks, q marks crossings:");
    for (n, c) in series.eval_at_u1().iter().enumerate() {
        println!("  z^{n}: {c}");
    }
    println!("bridges, q marks crossings:");
    for (n, c) in series.altitude(0).iter().enumerate() {
        println!("  z^{n}: {c}");
    }
    Ok(())
}
