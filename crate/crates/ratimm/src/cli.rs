//! Argument parsing and command dispatch for the `ratimm` binary.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ratimm_core::bundle::{framed_bundle_model, is_rationally_trivial, stiefel_model, unreduced_framed_model, ManifoldModel};
use ratimm_core::immersion::immersion_components;
use ratimm_core::mapping::map_into_sphere;
use ratimm_core::morphism::is_quasi_iso;
use ratimm_core::{AlgebraError, Cdga};

use crate::format::{CdgaSpec, ManifoldSpec};
use crate::parallel::{available_threads, cohomology_parallel};
use crate::report::{exit, to_json, FramedReport, ImmersionReport, MapSphereReport, ModelReport, VerifyReport};
use crate::verify::{self, Suite};

#[derive(Debug, Parser)]
#[command(name = "ratimm", version, about = "Rational models of framed bundles, Stiefel manifolds and immersion spaces")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Highest degree computed.
    #[arg(long, global = true, default_value_t = 20)]
    pub max_degree: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimal model of the Stiefel manifold SO(m+k)/SO(k).
    Stiefel {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        k: u32,
    },
    /// Model of the framed bundle of a manifold and the triviality check.
    FramedModel {
        #[arg(long)]
        manifold: PathBuf,
        #[arg(long)]
        k: u32,
        /// Show the model before reduction and check the reduction map.
        #[arg(long)]
        unreduced: bool,
    },
    /// Components of the space of immersions into R^{m+k}.
    Immersion {
        #[arg(long)]
        manifold: PathBuf,
        #[arg(long)]
        k: u32,
    },
    /// The mapping space Map(M, S^k).
    MapSphere {
        #[arg(long)]
        manifold: PathBuf,
        #[arg(long)]
        k: u32,
    },
    /// Betti numbers of a CDGA file.
    Cohomology { file: PathBuf },
    /// Run the built-in invariant suites.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Core,
    Models,
    Immersion,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Core => Suite::Core,
            SuiteArg::Models => Suite::Models,
            SuiteArg::Immersion => Suite::Immersion,
            SuiteArg::All => Suite::All,
        }
    }
}

/// What a command produced: the rendered report and the exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

/// A command that could not produce a report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub message: String,
    pub code: i32,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self { message: message.into(), code: exit::INPUT_ERROR }
    }
}

impl From<AlgebraError> for Failure {
    fn from(e: AlgebraError) -> Self {
        let code = match e {
            AlgebraError::InvalidParameter(_) => exit::INPUT_ERROR,
            _ => exit::FAILURE,
        };
        Self { message: e.to_string(), code }
    }
}

fn render<T: serde::Serialize>(format: Format, value: &T, table: impl FnOnce(&T) -> String) -> String {
    match format {
        Format::Table => table(value),
        Format::Json => to_json(value),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_manifold(path: &Path) -> Result<ManifoldModel, Failure> {
    let text = read(path)?;
    ManifoldSpec::load(&text).map(|(_, m)| m).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn check_k(k: u32) -> Result<(), Failure> {
    if k < 2 {
        return Err(Failure::input(format!("k >= 2 required (got {k})")));
    }
    Ok(())
}

fn model_report(cdga: &Cdga, max_degree: u32) -> ModelReport {
    ModelReport::new(cdga, &cohomology_parallel(cdga, max_degree, available_threads()))
}

pub fn run(cli: &Cli) -> Result<Output, Failure> {
    let Common { max_degree: n, format, .. } = cli.common;
    let resolved = |text: String| Ok(Output { text, code: exit::RESOLVED });
    match &cli.command {
        Command::Stiefel { m, k } => {
            if *m < 1 {
                return Err(Failure::input(format!("m >= 1 required (got {m})")));
            }
            check_k(*k)?;
            let model = stiefel_model(*m, *k)?;
            resolved(render(format, &model_report(model.as_cdga(), n), ModelReport::to_table))
        }
        Command::FramedModel { manifold, k, unreduced } => {
            check_k(*k)?;
            let manifold = load_manifold(manifold)?;
            let (model, quasi_iso) = if *unreduced {
                let (model, phi) = unreduced_framed_model(&manifold, *k)?;
                (model.into_cdga(), Some(is_quasi_iso(&phi, n)?.is_quasi_iso()))
            } else {
                (framed_bundle_model(&manifold, *k)?.into_cdga(), None)
            };
            let triviality = is_rationally_trivial(&manifold, *k, n)?;
            let report = FramedReport::new(&manifold, *k, model_report(&model, n), &triviality, quasi_iso);
            let code = if quasi_iso == Some(false) { exit::FAILURE } else { exit::RESOLVED };
            Ok(Output { text: render(format, &report, FramedReport::to_table), code })
        }
        Command::Immersion { manifold, k } => {
            check_k(*k)?;
            let manifold = load_manifold(manifold)?;
            let outcome = immersion_components(&manifold, *k, n)?;
            let report = ImmersionReport::new(&manifold, *k, n, &outcome).map_err(|e| Failure { message: e.to_string(), code: exit::FAILURE })?;
            Ok(Output { text: render(format, &report, ImmersionReport::to_table), code: report.exit_code() })
        }
        Command::MapSphere { manifold, k } => {
            check_k(*k)?;
            let manifold = load_manifold(manifold)?;
            let d = map_into_sphere(manifold.model(), *k)?;
            let betti = d.model.as_ref().map(|m| cohomology_parallel(m.as_cdga(), n, available_threads()));
            let report = MapSphereReport::new(&manifold, *k, n, &d, betti.as_ref());
            Ok(Output { text: render(format, &report, MapSphereReport::to_table), code: report.exit_code() })
        }
        Command::Cohomology { file } => {
            let text = read(file)?;
            let (_, cdga) = CdgaSpec::load(&text).map_err(|e| Failure::input(format!("{}: {e}", file.display())))?;
            resolved(render(format, &model_report(&cdga.into_cdga(), n), ModelReport::to_table))
        }
        Command::Verify { suite } => {
            let checks = verify::run_suite((*suite).into());
            let report = VerifyReport::new(&checks);
            let code = if report.failed == 0 { exit::RESOLVED } else { exit::FAILURE };
            let text = match format {
                Format::Table => verify::render(&checks),
                Format::Json => to_json(&report),
            };
            Ok(Output { text, code })
        }
    }
}
