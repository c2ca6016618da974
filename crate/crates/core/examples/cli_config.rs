//! Driving the command-line layer from code: a configuration file, flag
//! overrides and a figure written to a temporary directory.
//!
//! ```bash
//! cargo run --release --example cli_config
//! ```

use qes::cache::Cache;
use qes::cli::{run_figure, ConfigFile, Figure, RunConfig};

fn main() -> qes::Result<()> {
    let file: ConfigFile = toml::from_str("n = 30\ngrid = 40\na = \"0.5-0.5i\"\n")
        .map_err(|e| qes::Error::InvalidInput(e.to_string()))?;
    let out = std::env::temp_dir().join("qes-cli-config-example");
    let flags = ConfigFile { n: Some(24), out: Some(out.clone()), ..Default::default() };
    let cfg = RunConfig::resolve(&flags, &file, Some(out.join("cache")));
    println!("{}", serde_json::to_string_pretty(&cfg)?);

    let cache = Cache::new(&cfg.cache_dir);
    for fig in [Figure::Fig1, Figure::FigAtau] {
        let manifest = run_figure(fig, &cfg, &cache)?;
        println!("{fig}: {} -> {}", fig.describe(), manifest.display());
    }
    Ok(())
}
