//! `theta-lab`: verification CLI for theta-function line-bundle geometry
//! on a complex torus.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use theta_lab::config::RunConfig;
use theta_lab::{dump, suites};

#[derive(Parser)]
#[command(name = "theta-lab", version)]
#[command(about = "Verify theta-basis norms, cocycle relations, curvature forms and \
adiabatic curvature on a complex torus", long_about = None)]
#[command(after_help = "The environment variable THETA_LAB_SEED is reserved; runs are \
deterministic and sampling uses a fixed counter-based sequence.")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and emit a JSON report
    Verify {
        /// Suite: lemma4, cocycles, curvature-forms, adiabatic, holonomy,
        /// p2p, splitting, or all
        suite: String,
        #[command(flatten)]
        flags: ConfigFlags,
    },
    /// Sample a Gram field over the mu grid to CSV
    DumpGram {
        /// Which family weight backs the Gram matrices
        #[arg(long, value_enum, default_value_t = MetricArg::Translated)]
        metric: MetricArg,
        #[command(flatten)]
        flags: ConfigFlags,
    },
    /// Sample the theta basis over the fundamental domain to CSV
    DumpTheta {
        #[command(flatten)]
        flags: ConfigFlags,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MetricArg {
    /// Translated weight h(z+mu); the flat family field
    Translated,
    /// Direct-image weight of the spectral bundle
    DirectImage,
}

impl From<MetricArg> for theta_core::l2::GramMetric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Translated => theta_core::l2::GramMetric::Translated,
            MetricArg::DirectImage => theta_core::l2::GramMetric::DirectImage,
        }
    }
}

#[derive(Args)]
struct ConfigFlags {
    /// JSON config file; explicit flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Degree of the reference bundle (delta >= 1)
    #[arg(long)]
    delta: Option<u32>,
    /// Lattice shape tau as "re,im" with im > 0
    #[arg(long, value_parser = parse_f64_pair)]
    tau: Option<[f64; 2]>,
    /// Theta truncation target in (0, 1e-6]
    #[arg(long)]
    eps: Option<f64>,
    /// Quadrature nodes as "N1,N2" (each >= 16)
    #[arg(long, value_parser = parse_usize_pair)]
    quad: Option<[usize; 2]>,
    /// Finite-difference step in (0, 0.1]
    #[arg(long = "fd-step")]
    fd_step: Option<f64>,
    /// Side of the mu grid
    #[arg(long)]
    grid: Option<usize>,
    /// Output path (JSON report or CSV dump); stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run suites concurrently (report order stays fixed by suite name)
    #[arg(long)]
    parallel: bool,
}

fn parse_f64_pair(s: &str) -> Result<[f64; 2], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected \"re,im\"".to_string());
    }
    let a = parts[0].trim().parse::<f64>().map_err(|e| e.to_string())?;
    let b = parts[1].trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok([a, b])
}

fn parse_usize_pair(s: &str) -> Result<[usize; 2], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected \"N1,N2\"".to_string());
    }
    let a = parts[0].trim().parse::<usize>().map_err(|e| e.to_string())?;
    let b = parts[1].trim().parse::<usize>().map_err(|e| e.to_string())?;
    Ok([a, b])
}

impl ConfigFlags {
    fn into_config(self, suite: Option<String>) -> anyhow::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)
                .with_context(|| format!("reading config {}", path.display()))?,
            None => RunConfig::default(),
        };
        if let Some(d) = self.delta {
            cfg.delta = d;
        }
        if let Some(t) = self.tau {
            cfg.tau = t;
        }
        if let Some(e) = self.eps {
            cfg.eps = e;
        }
        if let Some(q) = self.quad {
            cfg.quad = q;
        }
        if let Some(h) = self.fd_step {
            cfg.fd_step = h;
        }
        if let Some(g) = self.grid {
            cfg.grid = g;
        }
        if let Some(o) = self.out {
            cfg.out = Some(o);
        }
        if self.parallel {
            cfg.parallel = true;
        }
        if let Some(s) = suite {
            cfg.suites = vec![s];
        }
        Ok(cfg)
    }
}

fn write_output(out: &Option<PathBuf>, content: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{content}"),
    }
    Ok(())
}

/// Exit codes: 0 all checks pass, 1 a check failed (report still written),
/// 2 configuration/usage error.
fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Verify { suite, flags } => {
            let cfg = flags.into_config(Some(suite))?;
            cfg.validate()?;
            let report = suites::run(&cfg)?;
            for s in &report.suites {
                eprintln!(
                    "suite {:<16} {} ({} items)",
                    s.name,
                    if s.pass { "PASS" } else { "FAIL" },
                    s.items.len()
                );
                for item in s.items.iter().filter(|i| !i.pass) {
                    eprintln!("  FAIL {} [{}]", item.name, item.paper_anchor);
                }
            }
            eprintln!(
                "summary: {}/{} checks passed in {:.2}s",
                report.summary.passed, report.summary.total, report.runtime_seconds
            );
            let json = report.to_json();
            write_output(&cfg.out, &(json + "\n"))?;
            Ok(if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::DumpGram { metric, flags } => {
            let cfg = flags.into_config(None)?;
            cfg.validate()?;
            let csv = dump::gram_csv(&cfg, metric.into())?;
            write_output(&cfg.out, &csv)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::DumpTheta { flags } => {
            let cfg = flags.into_config(None)?;
            cfg.validate()?;
            let csv = dump::theta_csv(&cfg)?;
            write_output(&cfg.out, &csv)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
