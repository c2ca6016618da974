//! The Cauchy transform of the limiting measure at `a = 0` against the
//! empirical transform of a scaled spectrum.
//!
//! ```bash
//! cargo run --release --example cauchy_transform -- 200
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;
use qes::bkw::{cauchy_nu, CauchyOptions};
use qes::spectral::{empirical_cauchy, scaled_spectrum, ARule, EigenOptions};

fn main() -> qes::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200);
    let zero = Complex64::new(0.0, 0.0);
    let spectrum = scaled_spectrum(n, ARule::Constant(zero), &EigenOptions::default())?;
    println!("{:>24} {:>26} {:>26} {:>10}", "β", "limit", "empirical", "|diff|");
    for k in 0..8 {
        let beta = Complex64::from_polar(2.0, 2.0 * PI * k as f64 / 8.0 + 0.1);
        let limit = cauchy_nu(beta, zero, &CauchyOptions::default())?;
        let emp = empirical_cauchy(&spectrum, beta, 1e-12)?;
        println!("{beta:>24.4} {limit:>26.8} {emp:>26.8} {:>10.2e}", (limit - emp).norm());
    }
    let far = Complex64::new(50.0, 30.0);
    let c = cauchy_nu(far, zero, &CauchyOptions::default())?;
    println!("\nβ·C(β) at β = {far}: {:.6} (total mass 1)", c * far);
    Ok(())
}
