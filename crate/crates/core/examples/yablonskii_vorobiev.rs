//! Yablonskii–Vorob'ev polynomials, their zero loci and the rational
//! solutions of Painlevé II they produce.
//!
//! ```bash
//! cargo run --release --example yablonskii_vorobiev -- 20
//! ```

use num_complex::Complex64;
use qes::yv::{painleve_residuals, scaled_zeros, yv_degree, yv_generate, DEFAULT_ZEROS_CAP};

fn main() -> qes::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let seq = yv_generate(n)?;
    for k in 0..=4.min(n) {
        println!("YV_{k} = {}", seq.get(k).expect("generated"));
    }
    let p = seq.get(n).expect("generated");
    println!("\nYV_{n}: degree {} (expected {}), {} bits in the largest coefficient", p.degree().unwrap_or(0), yv_degree(n), p.max_bits());

    let z = scaled_zeros(n, DEFAULT_ZEROS_CAP.max(n))?;
    println!("scaled zeros: {} points, max modulus {:.4}", z.len(), z.max_modulus());

    let samples = [Complex64::new(0.3, 0.2), Complex64::new(-1.7, 2.1), Complex64::new(4.0, -3.5)];
    for k in 1..=5 {
        let r = painleve_residuals(k, &samples)?;
        let r: Vec<String> = r.iter().map(|x| format!("{x:.1e}")).collect();
        println!("Painlevé II residuals for n = {k}: {}", r.join(", "));
    }
    Ok(())
}
