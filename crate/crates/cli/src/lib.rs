//! Command line front end: input loading, dispatch and reports.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;
use whitehead_core::dgl::FreeDgl;
use whitehead_core::fixtures;
use whitehead_core::retract::{random_retract, retract_from_decomposition, Decomposition, Retract};
use whitehead_core::syntax::{self, DglDocument, ExtensionDocument};
use whitehead_core::whitehead::{build_fat_wedge, WedgeModel};

pub mod commands;
pub mod report;

use report::Report;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] whitehead_core::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "dglw", version, about = "Free DGLs over the rationals, transferred brackets and Whitehead products")]
pub struct Cli {
    /// Degree cap for every free Lie algebra built
    #[arg(long, global = true)]
    pub max_degree: Option<u32>,
    /// Seed for sampling and random retracts
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the JSON report here
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    /// Decomposition to build the retract from
    #[arg(long, global = true)]
    pub retract_file: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// d² = 0, graded Jacobi and the derivation rule on samples
    Check {
        input: String,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Homology dimensions and representative cycles
    Homology {
        input: String,
        /// Print representative cycles
        #[arg(long)]
        representatives: bool,
    },
    /// Build a retract and check its identities
    Retract {
        input: String,
        /// Write the decomposition here
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Transferred brackets on homology and the generalized Jacobi identity
    Transfer {
        input: String,
        #[arg(long, default_value_t = 3)]
        arity: usize,
    },
    /// δ² = 0 on the Quillen chains and on the transferred coalgebra
    Coalgebra {
        input: String,
        /// Longest wedge word checked
        #[arg(long, default_value_t = 3)]
        length: usize,
    },
    /// Fat-wedge model of a product of spheres
    Whitehead {
        /// Sphere dimensions, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        spheres: Vec<i64>,
        /// Write the model as a DGL document here
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Check one of the statements relating brackets and Whitehead products
    Verify {
        #[arg(long, value_enum)]
        theorem: Theorem,
        /// Target DGL (omit to use the fat-wedge model of --spheres)
        input: Option<String>,
        /// Sphere dimensions for the identity extension of a fat wedge
        #[arg(long, value_delimiter = ',')]
        spheres: Option<Vec<i64>>,
        /// Extension of the fat-wedge model into the input
        #[arg(long)]
        extension: Option<PathBuf>,
        /// Number of random retracts for the investigation (seeds 1..=n)
        #[arg(long, default_value_t = 20)]
        seeds: u64,
    },
    /// Isomorphism classes of binary trees with automorphism orders
    Trees {
        #[arg(long)]
        leaves: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    Main1,
    Elprime,
    Elsegundo,
    Example37,
}

/// A loaded DGL with the text it came from.
pub struct Input {
    pub name: String,
    pub text: String,
    pub dgl: Arc<FreeDgl>,
    /// Set when the input is a fat-wedge model.
    pub model: Option<WedgeModel>,
}

impl Input {
    /// Stem of the input name, used to find bundled companions.
    pub fn stem(&self) -> &str {
        Path::new(&self.name).file_stem().and_then(|s| s.to_str()).unwrap_or("")
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn parse_spheres(text: &str) -> CliResult<Vec<i64>> {
    text.split(',')
        .map(|s| s.trim().parse::<i64>().map_err(|_| CliError::Usage(format!("bad sphere dimension `{s}`"))))
        .collect()
}

pub fn fat_wedge_input(spheres: &[i64], cap: Option<u32>) -> CliResult<Input> {
    let model = build_fat_wedge(spheres, cap)?;
    let dims: Vec<String> = spheres.iter().map(|d| d.to_string()).collect();
    let title = format!("fat wedge of spheres {}", dims.join(","));
    let text = DglDocument::from_dgl(model.dgl(), Some(title)).to_string();
    Ok(Input {
        name: format!("spheres:{}", dims.join(",")),
        text,
        dgl: model.dgl().clone(),
        model: Some(model),
    })
}

/// Reads a DGL document. A path that does not exist but names a bundled
/// fixture (`example37`, `t0`, `t1`, `t2`) loads the fixture; `spheres:3,3,3`
/// builds a fat-wedge model.
pub fn load_input(name: &str, cap: Option<u32>) -> CliResult<Input> {
    if let Some(list) = name.strip_prefix("spheres:") {
        return fat_wedge_input(&parse_spheres(list)?, cap);
    }
    let path = Path::new(name);
    let text = if path.exists() {
        read(path)?
    } else {
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("");
        match stem {
            "example37" => fixtures::EXAMPLE37_DGL.to_string(),
            "t0" => fixtures::T0_DGL.to_string(),
            "t1" => fixtures::T1_DGL.to_string(),
            "t2" => return fat_wedge_input(&[3, 3, 3], cap),
            _ => {
                return Err(CliError::Io {
                    path: path.to_path_buf(),
                    source: std::io::Error::new(std::io::ErrorKind::NotFound, "no such file or bundled fixture"),
                })
            }
        }
    };
    let doc = syntax::parse_dgl(&text)?;
    let dgl = Arc::new(doc.build(cap, 10)?);
    Ok(Input {
        name: name.to_string(),
        text,
        dgl,
        model: None,
    })
}

/// Reads a retract or extension document, falling back to the bundled ones
/// by file name.
fn read_companion(path: &Path) -> CliResult<String> {
    if path.exists() {
        return read(path);
    }
    match path.file_name().and_then(|s| s.to_str()) {
        Some("example37_table.retract") => Ok(fixtures::EXAMPLE37_TABLE.to_string()),
        Some("example37_phi.ext") => Ok(fixtures::EXAMPLE37_PHI.to_string()),
        _ => read(path),
    }
}

pub struct Session {
    pub cli_cap: Option<u32>,
    pub seed: Option<u64>,
    pub retract_file: Option<PathBuf>,
}

impl Session {
    /// `--retract-file`, else a random retract for `--seed`, else the bundled
    /// table for the twisted example, else the standard one.
    pub fn retract(&self, input: &Input, report: &mut Report) -> CliResult<(String, Retract)> {
        let dgl = input.dgl.clone();
        if let Some(path) = &self.retract_file {
            let text = read_companion(path)?;
            report.input(path.display().to_string(), text.clone());
            let doc = syntax::parse_retract(&text)?;
            let choice = Decomposition::from_document(&dgl, &doc)?;
            return Ok((format!("file {}", path.display()), retract_from_decomposition(dgl, &choice)?));
        }
        if let Some(seed) = self.seed {
            return Ok((format!("random seed {seed}"), random_retract(dgl, seed)?));
        }
        if input.stem() == "example37" {
            return Ok(("bundled table".into(), fixtures::example37_table_retract(dgl)?));
        }
        Ok(("standard".into(), Retract::standard(dgl)?))
    }

    pub fn extension(&self, path: Option<&Path>, input: &Input, report: &mut Report) -> CliResult<ExtensionDocument> {
        let text = match path {
            Some(p) => {
                let t = read_companion(p)?;
                report.input(p.display().to_string(), t.clone());
                t
            }
            None if input.stem() == "example37" => fixtures::EXAMPLE37_PHI.to_string(),
            None => return Err(CliError::Usage("--extension is required for this input".into())),
        };
        Ok(syntax::parse_extension(&text)?)
    }
}

/// The outcome of one invocation.
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Option<Report>,
}

/// Parses the arguments and runs the command. Never exits the process.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            return Outcome {
                code,
                stdout: if code == EXIT_PASS { text.clone() } else { String::new() },
                stderr: if code == EXIT_PASS { String::new() } else { text },
                report: None,
            };
        }
    };
    let echo: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let start = Instant::now();
    match commands::dispatch(&cli, echo) {
        Ok(mut report) => {
            report.elapsed = start.elapsed();
            let mut stderr = String::new();
            if let Some(path) = &cli.json {
                let body = serde_json::to_string_pretty(&report.to_json()).expect("report serializes");
                if let Err(e) = std::fs::write(path, body + "\n") {
                    stderr = format!("error: cannot write `{}`: {e}\n", path.display());
                    return Outcome {
                        code: EXIT_USAGE,
                        stdout: report.text(),
                        stderr,
                        report: Some(report),
                    };
                }
            }
            let code = if report.passed() { EXIT_PASS } else { EXIT_FAIL };
            if code == EXIT_FAIL {
                stderr.push_str("verdict: FAIL\n");
            }
            Outcome {
                code,
                stdout: report.text(),
                stderr,
                report: Some(report),
            }
        }
        Err(e) => Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            report: None,
        },
    }
}
