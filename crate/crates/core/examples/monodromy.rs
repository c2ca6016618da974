//! Eigenvalue monodromy: the standard loop around every branching point, the
//! large circle and the equispaced limit at large `|a|`.
//!
//! ```bash
//! cargo run --release --example monodromy -- 4
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;
use qes::monodromy::{compose_word, kac_limit_check, monodromy_table, track_path, APath, TrackOptions, TranspositionRule};

fn main() -> qes::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);

    let table = monodromy_table(n, None, None)?;
    println!("n = {n}, base point {:.3}", table.base);
    for e in &table.entries {
        println!(
            "  σ[{},{}] = {:>22.5}: {}  (min gap {:.1e}, clearance {:.3})",
            e.index.i,
            e.index.j,
            e.sigma,
            e.permutation,
            e.min_gap,
            e.clearance
        );
    }
    for rule in [TranspositionRule::Column, TranspositionRule::MirroredColumn] {
        println!("entries contradicting {rule:?}: {}", table.exceptions(rule).len());
    }
    println!("product of the loops: {}", compose_word(n + 1, table.big_circle_word()));

    let big = track_path(n, &APath::circle(500.0), &TrackOptions::default())?;
    println!("circle |a| = 500: {}", big.permutation);

    for phi in [4.0 * PI / 5.0, 6.0 * PI / 5.0] {
        let r = kac_limit_check(8, Complex64::from_polar(500.0, phi))?;
        println!("n = 8, a = 500·e^({:.3}i): deviation from the equispaced grid {:.4}", phi, r.max_deviation);
    }
    Ok(())
}
