//! Scaled spectra of the spectral matrix and their growth.
//!
//! ```bash
//! cargo run --release --example spectra -- 200
//! ```

use std::time::Instant;

use num_complex::Complex64;
use qes::spectral::{scaled_spectrum, ARule, EigenOptions};

fn main() -> qes::Result<()> {
    let ns: Vec<usize> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let ns = if ns.is_empty() { vec![50, 100, 200] } else { ns };
    let opts = EigenOptions::default();
    for n in ns {
        let t = Instant::now();
        let s = scaled_spectrum(n, ARule::Constant(Complex64::new(0.0, 0.0)), &opts)?;
        let rot = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let rotated = qes::pointset::PointSet::new("rotated", s.points.iter().map(|z| z * rot).collect());
        let sym = qes::pointset::max_matching_distance(&s.points, &rotated.points);
        println!(
            "n = {n:4}: max |λ|/n^(4/3) = {:.6}  (limit 0.75)  Z3 defect = {sym:.2e}  [{:.2?}]",
            s.max_modulus(),
            t.elapsed()
        );
    }
    Ok(())
}
