use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::eigenbasis::{Family, LatticeSpec};
use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::quadrature::QuadratureConfig;
use crate::state::Measure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// Which states the `gup` experiment reports on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GupStates {
    Maxloc,
    Gaussian,
    All,
}

/// Per-experiment parameters. Positions (`xi`, offsets) are in units of
/// `hbar sqrt(beta)` and Gaussian widths in units of `1/sqrt(beta)`; the
/// vacuum mass and cutoffs are plain momenta.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Experiment {
    Gram {
        families: Vec<Family>,
        measures: Vec<Measure>,
        lattice: LatticeSpec,
    },
    Parseval {
        epsilons: Vec<f64>,
        truncations: Vec<u64>,
    },
    MlOverlaps {
        /// Largest lattice separation `|n - n'|` tabulated.
        max_separation: u32,
        span_truncations: Vec<u64>,
    },
    Profiles {
        xis: Vec<f64>,
        /// Offsets `x - xi` sampled on `[offset_min, offset_max]`.
        offset_min: f64,
        offset_max: f64,
        offset_count: usize,
        plancherel_half_width: f64,
        plancherel_count: usize,
    },
    Gup {
        states: GupStates,
        xis: Vec<f64>,
        sigmas: Vec<f64>,
    },
    Symmetry,
    Vacuum {
        mass: f64,
        include_modified: bool,
        include_unmodified: bool,
        cutoffs: Vec<f64>,
    },
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Gram { .. } => "gram",
            Experiment::Parseval { .. } => "parseval",
            Experiment::MlOverlaps { .. } => "ml-overlaps",
            Experiment::Profiles { .. } => "profiles",
            Experiment::Gup { .. } => "gup",
            Experiment::Symmetry => "symmetry",
            Experiment::Vacuum { .. } => "vacuum",
        }
    }

    pub fn default_gram() -> Self {
        Experiment::Gram {
            families: Family::ALL.to_vec(),
            measures: vec![Measure::Standard, Measure::Kmm],
            lattice: LatticeSpec {
                epsilon: 0.0,
                n_min: -5,
                n_max: 5,
            },
        }
    }

    pub fn default_parseval() -> Self {
        Experiment::Parseval {
            epsilons: vec![0.0, 0.37, 1.0],
            truncations: vec![1, 10, 100, 1000],
        }
    }

    pub fn default_ml_overlaps() -> Self {
        Experiment::MlOverlaps {
            max_separation: 4,
            span_truncations: vec![0, 1, 2, 10, 50],
        }
    }

    pub fn default_profiles() -> Self {
        Experiment::Profiles {
            xis: vec![0.0, 4.0],
            offset_min: -5.0,
            offset_max: 5.0,
            offset_count: 41,
            plancherel_half_width: 30.0,
            plancherel_count: 4001,
        }
    }

    pub fn default_gup() -> Self {
        Experiment::Gup {
            states: GupStates::All,
            xis: vec![0.0, 5.0],
            sigmas: vec![0.5, 1.0, 2.0],
        }
    }

    pub fn default_vacuum() -> Self {
        Experiment::Vacuum {
            mass: 0.0,
            include_modified: true,
            include_unmodified: true,
            cutoffs: vec![10.0, 100.0, 1000.0, 10000.0],
        }
    }
}

/// Fully resolved configuration of one run; echoed verbatim in the manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub beta: f64,
    pub hbar: f64,
    pub quadrature: QuadratureConfig,
    pub output_dir: PathBuf,
    pub format: OutputFormat,
    pub experiment: Experiment,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self {
            beta: 1.0,
            hbar: 1.0,
            quadrature: QuadratureConfig::default(),
            output_dir: PathBuf::from("gup-out"),
            format: OutputFormat::Csv,
            experiment,
        }
    }

    pub fn params(&self) -> Result<ModelParams> {
        ModelParams::new(self.beta, self.hbar)
    }

    pub fn validate(&self) -> Result<()> {
        self.params()?;
        self.quadrature.validate()?;
        if self.quadrature.oscillation_hint.is_some() {
            return Err(invalid(
                "oscillation hints are chosen per integral, not per run",
            ));
        }
        let finite = |xs: &[f64], what: &str| {
            if xs.iter().all(|x| x.is_finite()) {
                Ok(())
            } else {
                Err(invalid(&format!("{what} must be finite")))
            }
        };
        match &self.experiment {
            Experiment::Gram {
                families,
                measures,
                lattice,
            } => {
                lattice.validate()?;
                if families.is_empty() || measures.is_empty() {
                    return Err(invalid("gram needs at least one family and one measure"));
                }
                if lattice.len() > 401 {
                    return Err(invalid("gram lattice window is limited to 401 sites"));
                }
            }
            Experiment::Parseval {
                epsilons,
                truncations,
            } => {
                if epsilons.is_empty() || truncations.is_empty() {
                    return Err(invalid("parseval needs offsets and truncations"));
                }
                if epsilons
                    .iter()
                    .any(|e| !(e.is_finite() && (-1.0..=1.0).contains(e)))
                {
                    return Err(invalid("lattice offsets must lie in [-1, 1]"));
                }
                if truncations.iter().any(|&n| n > 100_000_000) {
                    return Err(invalid("truncation is limited to 1e8"));
                }
            }
            Experiment::MlOverlaps {
                max_separation,
                span_truncations,
            } => {
                if *max_separation > 200 {
                    return Err(invalid("max separation is limited to 200"));
                }
                if span_truncations.iter().any(|&n| n > 100_000_000) {
                    return Err(invalid("truncation is limited to 1e8"));
                }
            }
            Experiment::Profiles {
                xis,
                offset_min,
                offset_max,
                offset_count,
                plancherel_half_width,
                plancherel_count,
            } => {
                finite(xis, "profile centres")?;
                finite(
                    &[*offset_min, *offset_max, *plancherel_half_width],
                    "profile window",
                )?;
                if xis.is_empty() {
                    return Err(invalid("profiles need at least one centre"));
                }
                if !(offset_max >= offset_min) || *offset_count < 1 {
                    return Err(invalid("profile offsets need min <= max and count >= 1"));
                }
                if offset_min.abs().max(offset_max.abs()) > 20.0 {
                    return Err(invalid("profile offsets are capped at 20 hbar sqrt(beta)"));
                }
                if *offset_count > 100_000 || *plancherel_count > 100_000 {
                    return Err(invalid("point counts are limited to 1e5"));
                }
                if !(*plancherel_half_width > 0.0) || *plancherel_count < 3 {
                    return Err(invalid("Plancherel window needs width > 0 and >= 3 points"));
                }
            }
            Experiment::Gup { xis, sigmas, .. } => {
                finite(xis, "xi values")?;
                if sigmas.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
                    return Err(invalid("gaussian widths must be finite and > 0"));
                }
            }
            Experiment::Symmetry => {}
            Experiment::Vacuum {
                mass,
                include_modified,
                include_unmodified,
                cutoffs,
            } => {
                if !(mass.is_finite() && *mass >= 0.0) {
                    return Err(invalid("mass must be finite and >= 0"));
                }
                if !include_modified && !include_unmodified {
                    return Err(invalid(
                        "vacuum needs the modified or the unmodified integral",
                    ));
                }
                if !cutoffs.is_empty() {
                    if cutoffs.len() < 4 {
                        return Err(invalid("divergence scan needs at least 4 cutoffs"));
                    }
                    if cutoffs
                        .iter()
                        .any(|c| !(c.is_finite() && *c > *mass && *c > 0.0))
                    {
                        return Err(invalid("cutoffs must be finite and exceed the mass"));
                    }
                    let lo = cutoffs.iter().copied().fold(f64::INFINITY, f64::min);
                    let hi = cutoffs.iter().copied().fold(0.0, f64::max);
                    if hi / lo < 100.0 {
                        return Err(invalid("cutoffs must span at least two decades"));
                    }
                }
            }
        }
        Ok(())
    }
}

fn invalid(msg: &str) -> Error {
    Error::InvalidParameter(msg.to_string())
}
