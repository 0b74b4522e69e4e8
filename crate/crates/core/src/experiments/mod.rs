//! Experiment runner behind the `gup` binary: resolved configurations,
//! result tables and manifests.

mod config;
mod suite;
mod table;

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub use config::{Experiment, ExperimentConfig, GupStates, OutputFormat};
pub use table::{format_real, Cell, Table, SIGNIFICANT_DIGITS};

use crate::error::Result;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub table: Table,
    pub summary: Value,
    /// One message per failed row; non-empty means a numerical failure.
    pub failures: Vec<String>,
}

/// Validates `config` and runs its experiment. Numerical failures do not
/// abort the run; they are flagged in the affected rows and in `failures`.
pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    config.validate()?;
    let params = config.params()?;
    let cfg = &config.quadrature;
    let p = match &config.experiment {
        Experiment::Gram {
            families,
            measures,
            lattice,
        } => suite::gram(families, measures, lattice, &params, cfg),
        Experiment::Parseval {
            epsilons,
            truncations,
        } => suite::parseval(epsilons, truncations),
        Experiment::MlOverlaps {
            max_separation,
            span_truncations,
        } => suite::ml_overlaps(*max_separation, span_truncations, &params, cfg),
        Experiment::Profiles {
            xis,
            offset_min,
            offset_max,
            offset_count,
            plancherel_half_width,
            plancherel_count,
        } => suite::profiles(
            xis,
            *offset_min,
            *offset_max,
            *offset_count,
            *plancherel_half_width,
            *plancherel_count,
            &params,
            cfg,
        ),
        Experiment::Gup {
            states,
            xis,
            sigmas,
        } => suite::gup(*states, xis, sigmas, &params, cfg),
        Experiment::Symmetry => suite::symmetry(&params, cfg),
        Experiment::Vacuum {
            mass,
            include_modified,
            include_unmodified,
            cutoffs,
        } => suite::vacuum(
            *mass,
            *include_modified,
            *include_unmodified,
            cutoffs,
            &params,
            cfg,
        ),
    };
    Ok(RunOutput {
        table: p.table,
        summary: p.summary,
        failures: p.failures,
    })
}

/// SHA-256 of the canonical JSON of everything that affects the numbers
/// (the output directory and format are excluded).
pub fn config_hash(config: &ExperimentConfig) -> String {
    let mut v = serde_json::to_value(config).expect("config serializes");
    if let Value::Object(m) = &mut v {
        m.remove("output_dir");
        m.remove("format");
    }
    let digest = Sha256::digest(v.to_string().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn error_summary(table: &Table) -> Value {
    let mut out = serde_json::Map::new();
    for (i, name) in table.columns.iter().enumerate() {
        if *name == "error" || name.ends_with("_error") {
            let max = table
                .rows
                .iter()
                .filter_map(|r| match r[i] {
                    Cell::Num(x) => Some(x),
                    _ => None,
                })
                .fold(None, |acc: Option<f64>, x| {
                    Some(acc.map_or(x, |a| a.max(x)))
                });
            out.insert(format!("max_{name}"), json!(max));
        }
    }
    Value::Object(out)
}

pub fn manifest(config: &ExperimentConfig, output: &RunOutput) -> Value {
    json!({
        "tool": "gup",
        "version": VERSION,
        "experiment": config.experiment.name(),
        "config_hash": config_hash(config),
        "config": config,
        "table": table_file_name(config),
        "rows": output.table.rows.len(),
        "failed_rows": output.failures.len(),
        "failures": output.failures,
        "error_estimates": error_summary(&output.table),
        "summary": output.summary,
    })
}

/// Recovers the configuration echoed in a manifest.
pub fn config_from_manifest(
    text: &str,
) -> std::result::Result<ExperimentConfig, serde_json::Error> {
    #[derive(serde::Deserialize)]
    struct Manifest {
        config: ExperimentConfig,
    }
    serde_json::from_str::<Manifest>(text).map(|m| m.config)
}

fn table_file_name(config: &ExperimentConfig) -> String {
    format!("{}.{}", config.experiment.name(), config.format.extension())
}

pub fn render_table(config: &ExperimentConfig, output: &RunOutput) -> String {
    let metadata = [
        ("tool", "gup".to_string()),
        ("version", VERSION.to_string()),
        ("experiment", config.experiment.name().to_string()),
        ("config_hash", config_hash(config)),
        ("beta", format_real(config.beta)),
        ("hbar", format_real(config.hbar)),
        ("failed_rows", output.failures.len().to_string()),
    ];
    match config.format {
        OutputFormat::Csv => output.table.to_csv(&metadata),
        OutputFormat::Json => output.table.to_json(&metadata),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WrittenFiles {
    pub table: PathBuf,
    pub manifest: PathBuf,
}

pub fn write_outputs(
    config: &ExperimentConfig,
    output: &RunOutput,
) -> std::io::Result<WrittenFiles> {
    let dir: &Path = &config.output_dir;
    fs::create_dir_all(dir)?;
    let table = dir.join(table_file_name(config));
    fs::write(&table, render_table(config, output))?;
    let manifest_path = dir.join(format!("{}.manifest.json", config.experiment.name()));
    let mut text =
        serde_json::to_string_pretty(&manifest(config, output)).expect("manifest serializes");
    text.push('\n');
    fs::write(&manifest_path, text)?;
    Ok(WrittenFiles {
        table,
        manifest: manifest_path,
    })
}
