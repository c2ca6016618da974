//! Stabilisation of the branching lattice near the origin from `n` to
//! `n + 3`.
//!
//! ```bash
//! cargo run --release --example lattice -- 16
//! ```

use qes::branching::{lattice_probe, Window, DEFAULT_SIGMA_CAP};
use qes::cache::Cache;

fn main() -> qes::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(16);
    let cache = Cache::from_env();
    let window = Window { re_min: -3.0, re_max: 3.0, im_min: -3.0, im_max: 3.0 };
    let probe = lattice_probe(n, window, DEFAULT_SIGMA_CAP, Some(&cache))?;
    println!(
        "n = {n} against n + 3: {} points in the window, spacing {:.4}, largest drift {:.4}",
        probe.pairs.len(),
        probe.spacing,
        probe.max_drift()
    );
    for (z, w, d) in probe.pairs.iter().take(8) {
        println!("  {z:.4} -> {w:.4}  ({d:.2e})");
    }
    Ok(())
}
