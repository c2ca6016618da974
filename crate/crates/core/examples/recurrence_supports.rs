//! Supports of the limiting measures of the three-term recurrences: roots of
//! the finite recurrence against the equimodular curves and their endpoints.
//!
//! ```bash
//! cargo run --release --example recurrence_supports -- 1+1i
//! ```

use num_complex::Complex64;
use qes::bkw::{branch_points, recurrence_roots, support_endpoints, union_support, uniform_tau_grid, SupportOptions};
use qes::cli::parse_complex;
use qes::pointset::max_matching_distance;

fn main() -> qes::Result<()> {
    let a = match std::env::args().nth(1) {
        Some(s) => parse_complex(&s)?,
        None => Complex64::new(1.0, 1.0),
    };

    for tau in [0.25, 0.5, 0.75] {
        let roots = recurrence_roots(tau, Complex64::new(0.0, 0.0), 150)?;
        let reach = (6.75 * (tau * (1.0 - tau)).powi(2)).cbrt();
        println!(
            "a = 0, τ = {tau}: {} roots, max |β| = {:.4}, branch point modulus {reach:.4}",
            roots.len(),
            roots.max_modulus()
        );
    }

    let sup = union_support(a, &uniform_tau_grid(100), &[], &SupportOptions::default());
    let cloud = sup.cloud();
    let ends = support_endpoints(a);
    let half = branch_points(a, 0.5);
    println!("\na = {a}: {} support samples over {} values of τ", cloud.len(), sup.tau_grid.len());
    let shown: Vec<String> = ends.iter().map(|z| format!("{z:.5}")).collect();
    println!("support endpoints: {}", shown.join(", "));
    println!("branch points at τ = 1/2 agree to {:.2e}", max_matching_distance(&ends, &half));

    let real = union_support(Complex64::new(3.0, 0.0), &uniform_tau_grid(100), &[], &SupportOptions::default());
    println!("\na = 3: union support is the real interval {:?}", real.real_interval(1e-9));
    Ok(())
}
