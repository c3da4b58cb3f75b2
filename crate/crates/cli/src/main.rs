//! Command line driver: root-system and orbit dumps, spectral measures,
//! verification suites, and the mode-degeneration table.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use eisenstein::harness::{
    limit_report, measure_report, orbits_json, run_cohomology_suite, run_g2_regression,
    run_main_identity_suite, run_positivity_suite, run_structural_suite, Config,
    VerificationReport,
};
use std::fs;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "eis",
    about = "Two-sided verification of the spherical spectral decomposition for rank <= 2 split groups",
    version
)]
struct Cli {
    /// Path to a JSON configuration file; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Overrides {
    /// Group type: A1, A1xA1, A2, B2, C2, G2
    #[arg(long)]
    group: Option<String>,
    /// Lattice: adjoint or simply_connected
    #[arg(long)]
    lattice: Option<String>,
    /// Scaling parameter, real and greater than one
    #[arg(long)]
    q: Option<f64>,
    /// Quadrature nodes per torus dimension
    #[arg(long)]
    nodes: Option<usize>,
    /// Contour shift factor (times q)
    #[arg(long)]
    shift: Option<f64>,
    /// Node phase offset in turns
    #[arg(long)]
    offset: Option<f64>,
    /// Truncation half-height for vertical-line integrals
    #[arg(long)]
    trunc_height: Option<f64>,
    /// Seed for the random test functions
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the root datum as JSON.
    Roots {
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Print the nilpotent-orbit catalog as JSON.
    Orbits {
        #[command(flatten)]
        overrides: Overrides,
        /// emit JSON (the default; kept for symmetry with other tools)
        #[arg(long)]
        json: bool,
    },
    /// Print per-orbit spectral supports and densities on a grid.
    Measure {
        #[command(flatten)]
        overrides: Overrides,
        /// grid points per torus dimension
        #[arg(long, default_value_t = 16)]
        grid: usize,
    },
    /// Run verification suites; exits nonzero on any failure.
    Verify {
        #[command(flatten)]
        overrides: Overrides,
        /// main | structural | regression | positivity | cohomology | all
        #[arg(long, default_value = "main")]
        suite: String,
        /// number of test-function pairs for the main suite
        #[arg(long, default_value_t = 10)]
        pairs: usize,
        /// relative tolerance for the main suite
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
        /// number of random functions for the positivity suite
        #[arg(long, default_value_t = 100)]
        functions: usize,
        /// also run the rank-two additive identity (slower stretch check)
        #[arg(long)]
        include_rank_two: bool,
        /// write the JSON report here
        #[arg(long)]
        json_out: Option<PathBuf>,
        /// write the CSV table here
        #[arg(long)]
        csv_out: Option<PathBuf>,
    },
    /// Degeneration table: rescaled multiplicative values against the
    /// additive value as q decreases to one.
    Limit {
        #[command(flatten)]
        overrides: Overrides,
    },
}

fn load_config(path: &Option<PathBuf>, ov: &Overrides) -> Result<Config> {
    let mut cfg: Config = match path {
        Some(p) => {
            let text = fs::read_to_string(p)
                .with_context(|| format!("cannot read config file {}", p.display()))?;
            serde_json::from_str(&text).map_err(|e| {
                anyhow!("malformed config {}: {} (check the reported key path)", p.display(), e)
            })?
        }
        None => Config::default(),
    };
    if let Some(g) = &ov.group {
        cfg.group = g.clone();
    }
    if let Some(l) = &ov.lattice {
        cfg.lattice = l.clone();
    }
    if let Some(q) = ov.q {
        if q <= 1.0 {
            bail!("q must be greater than one");
        }
        cfg.q = q;
    }
    if let Some(n) = ov.nodes {
        cfg.nodes = n;
    }
    if let Some(s) = ov.shift {
        cfg.shift_factor = s;
    }
    if let Some(o) = ov.offset {
        cfg.offset = o;
    }
    if let Some(t) = ov.trunc_height {
        cfg.trunc_height = t;
    }
    if let Some(s) = ov.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn emit_report(
    report: &VerificationReport,
    json_out: &Option<PathBuf>,
    csv_out: &Option<PathBuf>,
) -> Result<()> {
    print!("{}", report.human_table());
    if let Some(p) = json_out {
        fs::write(p, report.to_json()).with_context(|| format!("writing {}", p.display()))?;
    }
    if let Some(p) = csv_out {
        fs::write(p, report.to_csv()).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(passed) => {
            if passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Roots { overrides } => {
            let cfg = load_config(&cli.config, &overrides)?;
            let rd = cfg.root_datum().map_err(|e| anyhow!(e))?;
            println!("{}", serde_json::to_string_pretty(&rd.describe())?);
            Ok(true)
        }
        Command::Orbits { overrides, json: _ } => {
            let cfg = load_config(&cli.config, &overrides)?;
            println!("{}", orbits_json(&cfg).map_err(|e| anyhow!(e))?);
            Ok(true)
        }
        Command::Measure { overrides, grid } => {
            let cfg = load_config(&cli.config, &overrides)?;
            let report = measure_report(&cfg, grid).map_err(|e| anyhow!(e))?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(true)
        }
        Command::Verify {
            overrides,
            suite,
            pairs,
            tolerance,
            functions,
            include_rank_two,
            json_out,
            csv_out,
        } => {
            let cfg = load_config(&cli.config, &overrides)?;
            let mut all = Vec::new();
            let suites: Vec<&str> = if suite == "all" {
                vec!["main", "structural", "regression", "positivity", "cohomology"]
            } else {
                vec![suite.as_str()]
            };
            for s in suites {
                let report = match s {
                    "main" => run_main_identity_suite(&cfg, pairs, tolerance),
                    "structural" => run_structural_suite(&cfg),
                    "regression" => run_g2_regression(&cfg),
                    "positivity" => run_positivity_suite(&cfg, functions),
                    "cohomology" => run_cohomology_suite(&cfg, include_rank_two),
                    other => bail!("unknown suite: {other}"),
                }
                .map_err(|e| anyhow!(e))?;
                emit_report(&report, &json_out, &csv_out)?;
                all.push(report.passed);
            }
            Ok(all.iter().all(|&p| p))
        }
        Command::Limit { overrides } => {
            let cfg = load_config(&cli.config, &overrides)?;
            let report = limit_report(&cfg).map_err(|e| anyhow!(e))?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(report.monotone)
        }
    }
}
