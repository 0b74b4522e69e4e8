use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use gup_core::eigenbasis::{Family, LatticeSpec};
use gup_core::experiments::{self, Experiment, ExperimentConfig, GupStates, OutputFormat};
use gup_core::{Measure, QuadratureConfig};

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_IO: u8 = 1;

/// Numerical experiments for quantum mechanics with a minimal length.
#[derive(Debug, Parser)]
#[command(name = "gup", version, allow_negative_numbers = true)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Deformation parameter beta.
    #[arg(long, global = true, default_value_t = 1.0)]
    beta: f64,
    /// Reduced Planck constant.
    #[arg(long, global = true, default_value_t = 1.0)]
    hbar: f64,
    #[arg(long, global = true, default_value_t = QuadratureConfig::default().rel_tol)]
    rel_tol: f64,
    #[arg(long, global = true, default_value_t = QuadratureConfig::default().abs_tol)]
    abs_tol: f64,
    #[arg(long, global = true, default_value_t = QuadratureConfig::default().max_subdivisions)]
    max_subdivisions: usize,
    /// Output directory [default: gup-out]
    #[arg(long, global = true, env = "GUP_OUT_DIR")]
    out_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    SymEigen,
    KmmEigen,
    MaxLoc,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MeasureArg {
    Standard,
    Kmm,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StateArg {
    Maxloc,
    Gaussian,
    All,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Gram matrices of lattice states for each family and measure.
    Gram {
        /// Restrict to these families (default: all).
        #[arg(long, value_enum, value_delimiter = ',')]
        family: Vec<FamilyArg>,
        /// Restrict to these measures (default: both).
        #[arg(long, value_enum, value_delimiter = ',')]
        measure: Vec<MeasureArg>,
        /// Lattice offset in [0, 1).
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        /// Inclusive index window `a..b`.
        #[arg(long, default_value = "-5..5", allow_hyphen_values = true)]
        n: String,
    },
    /// Truncated completeness sums against the truncation order.
    Parseval {
        #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.37, 1.0], allow_hyphen_values = true)]
        eps: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [1u64, 10, 100, 1000])]
        n: Vec<u64>,
    },
    /// Maximally localized overlaps: closed forms against quadrature.
    MlOverlaps {
        #[arg(long, default_value_t = 4)]
        max_separation: u32,
        #[arg(long, value_delimiter = ',', default_values_t = [0u64, 1, 2, 10, 50])]
        span: Vec<u64>,
    },
    /// Position-space profiles in both phase conventions.
    Profiles {
        /// Centres in units of hbar sqrt(beta).
        #[arg(long, value_delimiter = ',', default_values_t = [0.0, 4.0], allow_hyphen_values = true)]
        xi: Vec<f64>,
        #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
        offset_min: f64,
        #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
        offset_max: f64,
        #[arg(long, default_value_t = 41)]
        count: usize,
        #[arg(long, default_value_t = 30.0)]
        plancherel_half_width: f64,
        #[arg(long, default_value_t = 4001)]
        plancherel_count: usize,
    },
    /// Uncertainty relation for maximally localized and Gaussian states.
    Gup {
        #[arg(long, value_enum, default_value_t = StateArg::All)]
        state: StateArg,
        /// Centres in units of hbar sqrt(beta).
        #[arg(long, value_delimiter = ',', default_values_t = [0.0, 5.0], allow_hyphen_values = true)]
        xi: Vec<f64>,
        /// Gaussian widths in units of 1/sqrt(beta).
        #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0])]
        sigma: Vec<f64>,
    },
    /// Symmetry defects for each operator, measure and pair of test states.
    Symmetry,
    /// Vacuum energy density with and without the deformed measure.
    Vacuum {
        #[arg(long, default_value_t = 0.0)]
        mass: f64,
        /// Only the deformed-measure integral.
        #[arg(long, conflicts_with = "unmodified")]
        modified: bool,
        /// Only the plain integral with cutoffs.
        #[arg(long)]
        unmodified: bool,
        /// Divergence-scan cutoffs (momenta).
        #[arg(long, value_delimiter = ',', default_values_t = [10.0, 100.0, 1000.0, 10000.0])]
        cutoffs: Vec<f64>,
        /// Skip the divergence scan.
        #[arg(long, conflicts_with = "cutoffs")]
        no_scan: bool,
    },
    /// Re-run the configuration recorded in a manifest.
    Replay { manifest: PathBuf },
}

fn parse_window(s: &str) -> anyhow::Result<(i64, i64)> {
    let (a, b) = s
        .split_once("..")
        .with_context(|| format!("index window must look like a..b, got {s:?}"))?;
    let a: i64 = a
        .trim()
        .parse()
        .with_context(|| format!("bad window start {a:?}"))?;
    let b: i64 = b
        .trim()
        .parse()
        .with_context(|| format!("bad window end {b:?}"))?;
    if a > b {
        bail!("index window {s:?} is empty");
    }
    Ok((a, b))
}

fn experiment(command: Command) -> anyhow::Result<Experiment> {
    Ok(match command {
        Command::Gram {
            family,
            measure,
            eps,
            n,
        } => {
            let (n_min, n_max) = parse_window(&n)?;
            let families = if family.is_empty() {
                Family::ALL.to_vec()
            } else {
                family
                    .into_iter()
                    .map(|f| match f {
                        FamilyArg::SymEigen => Family::SymEigen,
                        FamilyArg::KmmEigen => Family::KmmEigen,
                        FamilyArg::MaxLoc => Family::MaxLoc,
                    })
                    .collect()
            };
            let measures = if measure.is_empty() {
                vec![Measure::Standard, Measure::Kmm]
            } else {
                measure
                    .into_iter()
                    .map(|m| match m {
                        MeasureArg::Standard => Measure::Standard,
                        MeasureArg::Kmm => Measure::Kmm,
                    })
                    .collect()
            };
            Experiment::Gram {
                families,
                measures,
                lattice: LatticeSpec {
                    epsilon: eps,
                    n_min,
                    n_max,
                },
            }
        }
        Command::Parseval { eps, n } => Experiment::Parseval {
            epsilons: eps,
            truncations: n,
        },
        Command::MlOverlaps {
            max_separation,
            span,
        } => Experiment::MlOverlaps {
            max_separation,
            span_truncations: span,
        },
        Command::Profiles {
            xi,
            offset_min,
            offset_max,
            count,
            plancherel_half_width,
            plancherel_count,
        } => Experiment::Profiles {
            xis: xi,
            offset_min,
            offset_max,
            offset_count: count,
            plancherel_half_width,
            plancherel_count,
        },
        Command::Gup { state, xi, sigma } => Experiment::Gup {
            states: match state {
                StateArg::Maxloc => GupStates::Maxloc,
                StateArg::Gaussian => GupStates::Gaussian,
                StateArg::All => GupStates::All,
            },
            xis: xi,
            sigmas: sigma,
        },
        Command::Symmetry => Experiment::Symmetry,
        Command::Vacuum {
            mass,
            modified,
            unmodified,
            cutoffs,
            no_scan,
        } => Experiment::Vacuum {
            mass,
            include_modified: !unmodified,
            include_unmodified: !modified,
            cutoffs: if no_scan { Vec::new() } else { cutoffs },
        },
        Command::Replay { .. } => unreachable!("replay is resolved from its manifest"),
    })
}

fn resolve(cli: Cli) -> anyhow::Result<ExperimentConfig> {
    let g = cli.global;
    if let Command::Replay { manifest } = &cli.command {
        let text = std::fs::read_to_string(manifest)
            .with_context(|| format!("cannot read manifest {}", manifest.display()))?;
        let mut config = experiments::config_from_manifest(&text)
            .with_context(|| format!("{} is not a gup manifest", manifest.display()))?;
        if let Some(dir) = g.out_dir {
            config.output_dir = dir;
        }
        return Ok(config);
    }
    Ok(ExperimentConfig {
        beta: g.beta,
        hbar: g.hbar,
        quadrature: QuadratureConfig {
            rel_tol: g.rel_tol,
            abs_tol: g.abs_tol,
            max_subdivisions: g.max_subdivisions,
            oscillation_hint: None,
        },
        output_dir: g.out_dir.unwrap_or_else(|| PathBuf::from("gup-out")),
        format: match g.format {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        },
        experiment: experiment(cli.command)?,
    })
}

fn fail(kind: &str, message: String, code: u8) -> ExitCode {
    eprintln!("{}", json!({ "error": kind, "message": message }));
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            return fail(
                "config",
                e.render().to_string().trim_end().to_string(),
                EXIT_CONFIG,
            )
        }
    };
    let config = match resolve(cli) {
        Ok(c) => c,
        Err(e) => return fail("config", format!("{e:#}"), EXIT_CONFIG),
    };
    let output = match experiments::run(&config) {
        Ok(o) => o,
        Err(e) => return fail("config", e.to_string(), EXIT_CONFIG),
    };
    let files = match experiments::write_outputs(&config, &output) {
        Ok(f) => f,
        Err(e) => return fail("io", format!("cannot write results: {e}"), EXIT_IO),
    };
    println!("{}", files.table.display());
    println!("{}", files.manifest.display());
    if output.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!(
            "{}",
            json!({
                "error": "numerical",
                "message": format!("{} row(s) failed", output.failures.len()),
                "failures": output.failures,
                "table": files.table,
            })
        );
        ExitCode::from(EXIT_NUMERICAL)
    }
}
