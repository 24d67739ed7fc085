//! The linear system for the boundary unknowns W_{-d}, ..., W_c, shown for the
//! basketball model and solved numerically against the truncated series.
//!
//!     cargo run --example boundary_system

use lattice_localtime::algebra::eval_qseries;
use lattice_localtime::kernel_numeric::{solve_bilateral_system, BoundarySystem};
use lattice_localtime::kernel_series::{solve_walk_series, MarkerConfig};
use lattice_localtime::stepset::StepSet;

fn main() -> lattice_localtime::error::Result<()> {
    let steps = StepSet::basketball();
    let sys = BoundarySystem::new(&steps);
    let unknowns: Vec<String> = sys.unknowns().map(|k| format!("W_{k}")).collect();
    println!("unknowns: {}", unknowns.join(", "));
    println!("equation at a small root u (rows as polynomials in u):");
    for (k, t) in sys.unknowns().zip(BoundarySystem::normalized(&sys.small_row)) {
        println!("  W_{k:<3} * ({t})");
    }
    println!("equation at a large root v:");
    for (k, t) in sys.unknowns().zip(BoundarySystem::normalized(&sys.large_row)) {
        println!("  W_{k:<3} * ({t})");
    }

    let series = solve_walk_series(&steps, 100, MarkerConfig::CROSSINGS)?;
    let (walks, bridges) = (series.eval_at_u1(), series.altitude(0));
    println!("\n  z     q     W_walk system/series                  W_bridge system/series                cond");
    for z in [0.05, 0.1, 0.15] {
        for q in [0.5, 1.0, 1.5] {
            let k = solve_bilateral_system(&steps, z, q)?;
            println!(
                "  {z:<5} {q:<5} {:<18.15} {:<18.15} {:<18.15} {:<18.15} {:.1e}",
                k.w_walk,
                eval_qseries(&walks, z, q),
                k.w_bridge,
                eval_qseries(&bridges, z, q),
                k.condition_number
            );
        }
    }
    Ok(())
}
