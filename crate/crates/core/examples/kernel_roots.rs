//! Small and large roots of the kernel 1 - z P(u), and the square-root
//! behaviour of the two real branches as z approaches rho.
//!
//!     cargo run --example kernel_roots

use lattice_localtime::kernel_numeric::{kernel_roots, validate_puiseux};
use lattice_localtime::stepset::StepSet;

fn main() -> lattice_localtime::error::Result<()> {
    let steps = StepSet::basketball();
    for z in [0.05, 0.1, 0.19] {
        let r = kernel_roots(&steps, z)?;
        let fmt = |v: &[num_complex::Complex64]| {
            v.iter()
                .map(|c| format!("{:.6}{:+.6}i", c.re, c.im))
                .collect::<Vec<_>>()
                .join(", ")
        };
        println!("z = {z}: small [{}], large [{}]", fmt(&r.small), fmt(&r.large));
        println!("        residual {:.1e}, modulus gap {:.3}", r.max_residual, r.gap_ratio);
    }
    for (name, s) in [("basketball", StepSet::basketball()), ("dyck", StepSet::dyck())] {
        println!("\n{name}: ratio of (tau - u1) and (v1 - tau) to the square-root prediction");
        for row in validate_puiseux(&s, &[1e-2, 1e-3, 1e-4, 1e-5, 1e-6])? {
            println!(
                "  eps = {:.0e}: u1 = {:.8}, v1 = {:.8}, ratios {:.6} / {:.6}",
                row.epsilon, row.u1, row.v1, row.small_ratio, row.large_ratio
            );
        }
    }
    Ok(())
}
