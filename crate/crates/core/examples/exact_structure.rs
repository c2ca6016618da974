//! Exact structure of the spectral polynomial at `a = 0`: the `ℤ₃` splitting
//! `Sp_n(0, λ) = λ^r q(λ³)` and the interlacing certificate of its minors.
//!
//! ```bash
//! cargo run --release --example exact_structure -- 12
//! ```

use qes::spectral::spectral_polynomial;
use qes::zcase::{certify, factor_structure, pqr_sequences};
use rug::Rational;

fn main() -> qes::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(12);

    for k in 1..=4 {
        println!("Sp_{k}(a, λ) at a = 1/2: {}", spectral_polynomial(k, &Rational::from((1, 2))));
    }

    let fs = factor_structure(n)?;
    println!("\nSp_{n}(0, λ) = λ^{} · q(λ³) with q = {}", fs.r, fs.q);

    let seq = pqr_sequences(n)?;
    let last = seq.last().expect("at least one triple");
    println!("P_{l} = {}\nQ_{l} = {}\nR_{l} = {}", last.p, last.q, last.r, l = last.l);

    let cert = certify(n, true)?;
    let failed: Vec<_> = cert.checks.iter().filter(|c| !c.pass).collect();
    println!(
        "\ncertificate for n = {n}: {} checks, {} failed, {:.3} s",
        cert.checks.len(),
        failed.len(),
        cert.seconds.unwrap_or(0.0)
    );
    for c in failed {
        println!("  {} (l = {}): {}", c.name, c.l, c.detail.as_deref().unwrap_or(""));
    }
    Ok(())
}
