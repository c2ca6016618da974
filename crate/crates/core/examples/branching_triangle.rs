//! The branching set over the parameter plane: its triangular grid, the
//! multiple-root witness and the comparison with the scaled
//! Yablonskii–Vorob'ev zeros.
//!
//! ```bash
//! cargo run --release --example branching_triangle -- 10
//! ```

use qes::branching::{compare_sets, multiple_root_gap, scaled_sigma, sigma_points, DEFAULT_SIGMA_CAP};
use qes::pointset::PointSet;
use qes::yv::{scaled_zeros, DEFAULT_ZEROS_CAP};

fn main() -> qes::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    let set = sigma_points(n, DEFAULT_SIGMA_CAP, None)?;
    println!("Σ_{n}: {} points, discriminant of degree {:?}", set.points.len(), set.disc_poly.degree());

    if let Some(grid) = &set.grid_index {
        for j in 1..=n {
            let column: Vec<String> = grid
                .iter()
                .zip(&set.points.points)
                .filter(|(g, _)| g.j == j)
                .map(|(g, z)| format!("σ[{},{}] = {z:.3}", g.i, g.j))
                .collect();
            println!("column {j}: {}", column.join("  "));
        }
    }
    let worst = set.points.points.iter().map(|&s| multiple_root_gap(n, s)).fold(0.0, f64::max);
    println!("largest gap between the two closest eigenvalues over Σ_{n}: {worst:.2e}");

    let sigma = scaled_sigma(n, DEFAULT_SIGMA_CAP, None)?;
    let zeros = scaled_zeros(n, DEFAULT_ZEROS_CAP)?;
    let raw = compare_sets(&sigma, &zeros);
    let reflected = compare_sets(&sigma, &PointSet::new("reflected", zeros.points.iter().map(|z| -z).collect()));
    println!("\nscaled Σ_{n} against scaled zeros: mean NN {:.4}, Hausdorff {:.4}", raw.mean_nn, raw.hausdorff);
    println!("against the reflected zeros: mean NN {:.4}, Hausdorff {:.4}", reflected.mean_nn, reflected.hausdorff);
    Ok(())
}
