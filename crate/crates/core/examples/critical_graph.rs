//! Critical graphs of the quadratic differential `−P(Θ) dΘ²` and the shape
//! of the support read off a scaled spectrum.
//!
//! ```bash
//! cargo run --release --example critical_graph -- 0.5-0.5i 200
//! ```

use num_complex::Complex64;
use qes::bkw::support_endpoints;
use qes::cli::parse_complex;
use qes::quaddiff::{critical_graph, support_topology, turning_points, TopologyOptions, TraceOptions};

fn main() -> qes::Result<()> {
    let mut args = std::env::args().skip(1);
    let a = match args.next() {
        Some(s) => parse_complex(&s)?,
        None => Complex64::new(0.5, -0.5),
    };
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(200);

    let zero = Complex64::new(0.0, 0.0);
    let star = critical_graph(zero, zero, &TraceOptions::default())?;
    println!(
        "a = 0, Λ = 0: {} turning points, joined pairs {:?}, worst horizontality {:.1e}",
        star.turning_points.len(),
        star.connectivity,
        star.worst_horizontality()
    );

    for lambda in support_endpoints(a) {
        let g = critical_graph(a, lambda, &TraceOptions::default())?;
        let mults: Vec<usize> = turning_points(a, lambda).iter().map(|t| t.multiplicity).collect();
        println!(
            "a = {a}, Λ = {lambda:.5}: multiplicities {mults:?}, {} trajectories, critical {}",
            g.trajectories.len(),
            g.all_critical
        );
    }

    let report = support_topology(a, n, &TopologyOptions::default())?;
    println!(
        "\nsupport at a = {a} from n = {n}: {} ({} endpoints, {} junctions)",
        report.topology, report.endpoints, report.junctions
    );
    Ok(())
}
