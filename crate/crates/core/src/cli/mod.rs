//! Command-line interface: figures, verification suites, sweeps over `n`
//! and cache maintenance.

pub mod config;
pub mod figure;
pub mod output;
pub mod verify;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

pub use config::{parse_complex, ConfigFile, RunConfig};
pub use figure::{run_figure, Figure};
pub use output::Bundle;
pub use verify::{run_suite, Report, Suite, SuiteSizes};

use crate::branching::{scaled_sigma, DEFAULT_SIGMA_CAP};
use crate::cache::Cache;
use crate::error::{Error, Result};
use crate::spectral::{format_complex, scaled_spectrum, ARule};
use crate::yv::{scaled_zeros, DEFAULT_ZEROS_CAP};
use crate::zcase::certify;

#[derive(Debug, Parser)]
#[command(name = "qes", version, about = "Spectral polynomials of the quasi-exactly solvable quartic")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Default, Args)]
pub struct GlobalArgs {
    /// Size parameter (each command has its own default)
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Matrix parameter as `re+imi`
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_complex_arg)]
    pub a: Option<Complex64>,
    /// Number of τ samples for supports and curves
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Residual bound for double-precision eigenvalues
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Output directory
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Cache directory (falls back to QES_CACHE_DIR, then .qes-cache)
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads; 0 uses every core
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Fixed working precision in bits
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    /// TOML file with any of the settings above
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Report wall-clock times on stderr
    #[arg(long, global = true)]
    pub timing: bool,
}

fn parse_complex_arg(s: &str) -> std::result::Result<Complex64, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the data behind a figure
    Figure {
        /// fig1, figTau, figA1, triangle, figA3, figAtau, figA, triangle10, figslopes or lattice
        name: String,
    },
    /// Run a verification suite; exits nonzero on failure
    Verify {
        /// exact, asymptotic, monodromy or all
        #[arg(default_value = "all")]
        suite: String,
    },
    /// Compute one quantity for a range of n
    Sweep {
        #[arg(value_enum)]
        quantity: SweepQuantity,
        #[arg(long, default_value_t = 2)]
        from: usize,
        /// Last n (defaults to --n, then 20)
        #[arg(long)]
        to: Option<usize>,
        #[arg(long, default_value_t = 1)]
        step: usize,
    },
    /// Inspect or empty the cache
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepQuantity {
    /// Scaled spectrum with a_n = a·n^(2/3)
    Spectrum,
    /// Scaled branching set
    Sigma,
    /// Scaled Yablonskii–Vorob'ev zeros
    Zeros,
    /// Exact certificate of the a = 0 structure
    Certify,
}

impl SweepQuantity {
    fn name(&self) -> &'static str {
        match self {
            SweepQuantity::Spectrum => "spectrum",
            SweepQuantity::Sigma => "sigma",
            SweepQuantity::Zeros => "zeros",
            SweepQuantity::Certify => "certify",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum CacheAction {
    /// List cached entries
    Ls,
    /// Remove every cached entry
    Clear,
}

impl GlobalArgs {
    fn as_overrides(&self) -> ConfigFile {
        ConfigFile {
            n: self.n,
            a: self.a,
            grid: self.grid,
            tol: self.tol,
            out: self.out.clone(),
            cache_dir: self.cache_dir.clone(),
            jobs: self.jobs,
            precision: self.precision,
        }
    }

    /// Layers the flags over the config file and the defaults.
    pub fn resolve(&self) -> Result<RunConfig> {
        let file = match &self.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        Ok(RunConfig::resolve(&self.as_overrides(), &file, RunConfig::env_cache_dir()))
    }
}

fn sweep(quantity: SweepQuantity, ns: &[usize], cfg: &RunConfig, cache: &Cache) -> Result<PathBuf> {
    let mut b = Bundle::create(cfg, &format!("sweep-{}", quantity.name()), json!({ "sweep": quantity.name(), "n": ns }))?;
    let mut rows = Vec::new();
    for &n in ns {
        match quantity {
            SweepQuantity::Certify => {
                b.op("certify", json!({ "n": n }));
                let c = certify(n, false)?;
                rows.push(json!({ "n": n, "pass": c.pass(), "checks": c.checks.len() }));
                continue;
            }
            SweepQuantity::Spectrum => {
                let a = cfg.a.unwrap_or_default();
                b.op("scaled_spectrum", json!({ "n": n, "a": format_complex(a), "rule": "scaled" }));
                let s = scaled_spectrum(n, ARule::Scaled(a), &cfg.eigen_options())?;
                b.csv(&format!("n{n}.csv"), &s)?;
                rows.push(json!({ "n": n, "count": s.len(), "max_modulus": s.max_modulus() }));
            }
            SweepQuantity::Sigma => {
                b.op("scaled_sigma", json!({ "n": n }));
                let s = scaled_sigma(n, DEFAULT_SIGMA_CAP.max(n), Some(cache))?;
                b.csv(&format!("n{n}.csv"), &s)?;
                rows.push(json!({ "n": n, "count": s.len(), "max_modulus": s.max_modulus() }));
            }
            SweepQuantity::Zeros => {
                b.op("scaled_zeros", json!({ "n": n }));
                let s = scaled_zeros(n, DEFAULT_ZEROS_CAP.max(n))?;
                b.csv(&format!("n{n}.csv"), &s)?;
                rows.push(json!({ "n": n, "count": s.len(), "max_modulus": s.max_modulus() }));
            }
        }
    }
    b.json("summary.json", &rows)?;
    b.finish()
}

/// Executes a parsed command line; `Ok(false)` signals a failed check.
pub fn run(cli: &Cli) -> Result<bool> {
    let cfg = cli.global.resolve()?;
    if cfg.jobs > 0 {
        // a pool may already exist when called more than once in a process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build_global();
    }
    let cache = Cache::new(&cfg.cache_dir);
    let start = Instant::now();
    let mut ok = true;
    let label = match &cli.command {
        Command::Figure { name } => {
            let fig: Figure = name.parse()?;
            let manifest = run_figure(fig, &cfg, &cache)?;
            println!("{}", manifest.display());
            format!("figure {fig}")
        }
        Command::Verify { suite } => {
            let suite: Suite = suite.parse()?;
            let sizes = SuiteSizes { exact_n: cfg.n, probe_n: cfg.n, monodromy_n: cfg.n };
            let report = run_suite(suite, sizes, &cache);
            for c in &report.checks {
                println!("{} {}/{}: {}", if c.pass { "PASS" } else { "FAIL" }, c.suite, c.name, c.detail);
            }
            let mut b = Bundle::create(&cfg, &format!("verify-{suite}"), json!({ "verify": suite.name() }))?;
            b.op("run_suite", json!({ "suite": suite.name(), "sizes": sizes }));
            b.json("report.json", &report)?;
            println!("{}", b.finish()?.display());
            ok = report.pass;
            format!("verify {suite}")
        }
        Command::Sweep { quantity, from, to, step } => {
            let to = to.or(cfg.n).unwrap_or(20);
            if *step == 0 || *from > to {
                return Err(Error::InvalidInput(format!("empty sweep range {from}..={to} step {step}")));
            }
            let ns: Vec<usize> = (*from..=to).step_by(*step).collect();
            println!("{}", sweep(*quantity, &ns, &cfg, &cache)?.display());
            format!("sweep {}", quantity.name())
        }
        Command::Cache { action } => {
            match action {
                CacheAction::Ls => {
                    for e in cache.list()? {
                        println!("{}\t{}", e.bytes, e.name);
                    }
                }
                CacheAction::Clear => println!("removed {} entries", cache.clear()?),
            }
            "cache".to_string()
        }
    };
    if cli.global.timing {
        eprintln!("{label}: {:.3} s", start.elapsed().as_secs_f64());
    }
    Ok(ok)
}

/// Entry point of the `qes` binary.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_line_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn parses_flags_after_subcommand() {
        let cli = Cli::try_parse_from(["qes", "figure", "fig1", "--n", "30", "--a", "-1+2i", "--timing"]).unwrap();
        assert_eq!(cli.global.n, Some(30));
        assert_eq!(cli.global.a, Some(Complex64::new(-1.0, 2.0)));
        assert!(cli.global.timing);
        assert!(matches!(cli.command, Command::Figure { ref name } if name == "fig1"));
        let cli = Cli::try_parse_from(["qes", "cache", "ls", "--cache-dir", "/tmp/x"]).unwrap();
        assert_eq!(cli.global.cache_dir, Some(PathBuf::from("/tmp/x")));
        assert!(Cli::try_parse_from(["qes", "sweep", "volume"]).is_err());
    }

    #[test]
    fn unknown_figure_is_an_error() {
        let tmp = tempfile::tempdir().unwrap();
        let out = tmp.path().to_str().unwrap();
        let cli = Cli::try_parse_from(["qes", "figure", "fig2", "--out", out, "--cache-dir", out]).unwrap();
        assert!(matches!(run(&cli), Err(Error::UnknownFigure(_))));
    }

    #[test]
    fn sweep_and_cache() {
        let tmp = tempfile::tempdir().unwrap();
        let out = tmp.path().join("out");
        let cache_dir = tmp.path().join("cache");
        let args = |v: &[&str]| {
            let mut a = vec!["qes"];
            a.extend_from_slice(v);
            a.extend_from_slice(&["--out", out.to_str().unwrap(), "--cache-dir", cache_dir.to_str().unwrap()]);
            Cli::try_parse_from(a).unwrap()
        };
        assert!(run(&args(&["sweep", "sigma", "--from", "3", "--to", "5"])).unwrap());
        let summary = std::fs::read_to_string(out.join("sweep-sigma/summary.json")).unwrap();
        assert!(summary.contains("\"count\": 15"));
        assert_eq!(Cache::new(&cache_dir).list().unwrap().len(), 3);
        assert!(run(&args(&["sweep", "certify", "--to", "4"])).unwrap());
        assert!(run(&args(&["cache", "clear"])).unwrap());
        assert!(Cache::new(&cache_dir).list().unwrap().is_empty());
        assert!(matches!(run(&args(&["sweep", "zeros", "--from", "5", "--to", "3"])), Err(Error::InvalidInput(_))));
    }
}
