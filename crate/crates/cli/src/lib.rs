//! Argument parsing and dispatch for the `ancillary` binary.

use std::fs;
use std::path::{Path, PathBuf};

use ancillary_core::ancillary::Limits;
use ancillary_core::rational::parse_rational;
use ancillary_core::reports::{
    analyze_report, audit_report, compare_report, evidence_report, reproduce_report,
    EvidenceFunction, Reproduction,
};
use ancillary_core::{parse_model, Error, FiniteModel, InferenceBase, Relation, ReportDocument};
use clap::{ArgAction, Parser, Subcommand, ValueEnum};

pub const EXIT_OK: i32 = 0;
/// The command ran but the outcome was not the expected one.
pub const EXIT_UNEXPECTED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;

/// Sufficiency and ancillarity structure of finite statistical models.
#[derive(Debug, Parser)]
#[command(name = "ancillary", version)]
pub struct Cli {
    /// Directory receiving `report.txt` and any CSV attachments.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimal sufficient partition, ancillary taxonomy and witnesses.
    Analyze {
        model: PathBuf,
        /// Restrict the search to functions of the minimal sufficient statistic.
        #[arg(long, default_value_t = true, action = ArgAction::Set)]
        within_mss: bool,
        /// Largest number of base blocks to enumerate partitions over.
        #[arg(long, default_value_t = Limits::default().partition_cap)]
        cap: usize,
    },
    /// Evidence base of an observation.
    Evidence {
        model: PathBuf,
        #[arg(long)]
        observed: String,
        #[arg(long, value_enum, default_value_t = FunctionArg::Sc)]
        function: FunctionArg,
        #[arg(long, default_value_t = Limits::default().partition_cap)]
        cap: usize,
    },
    /// Decides S- or SC-equivalence of two inference bases.
    Compare {
        model1: PathBuf,
        #[arg(long)]
        observed1: String,
        model2: PathBuf,
        #[arg(long)]
        observed2: String,
        #[arg(long, value_enum, default_value_t = CompareArg::Sc)]
        relation: CompareArg,
    },
    /// Regenerates the worked examples with PASS/FAIL checks.
    Reproduce {
        #[arg(value_enum)]
        which: WhichArg,
        #[arg(long, default_value = "1/100")]
        epsilon: String,
    },
    /// Checks equivalence-relation laws on a seeded corpus.
    Audit {
        #[arg(long, default_value_t = 0)]
        corpus_seed: u64,
        #[arg(long, default_value_t = 30)]
        corpus_size: usize,
        #[arg(long, value_enum)]
        relation: RelationArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FunctionArg {
    Ms,
    Sc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CompareArg {
    S,
    Sc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RelationArg {
    S,
    Sc,
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WhichArg {
    Example1,
    Example2,
    Example3,
    All,
}

/// A finished command: the report and the process exit code.
#[derive(Debug)]
pub struct Outcome {
    pub report: ReportDocument,
    pub exit_code: i32,
}

/// Failure before a report could be produced.
#[derive(Debug)]
pub struct Failure {
    pub message: String,
    pub exit_code: i32,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            exit_code: if e.is_input_error() {
                EXIT_INPUT
            } else {
                EXIT_CAP
            },
            message: e.to_string(),
        }
    }
}

fn read_model(path: &Path) -> Result<FiniteModel, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure {
        message: format!("{}: {e}", path.display()),
        exit_code: EXIT_INPUT,
    })?;
    parse_model(&text).map_err(|e| Failure {
        exit_code: EXIT_INPUT,
        message: format!("{}: {e}", path.display()),
    })
}

fn limits(cap: usize) -> Limits {
    Limits {
        partition_cap: cap,
        ..Limits::default()
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let ok = |report| Outcome {
        report,
        exit_code: EXIT_OK,
    };
    let expect = |(report, fine): (ReportDocument, bool)| Outcome {
        report,
        exit_code: if fine { EXIT_OK } else { EXIT_UNEXPECTED },
    };
    match &cli.command {
        Command::Analyze {
            model,
            within_mss,
            cap,
        } => Ok(ok(analyze_report(
            &read_model(model)?,
            *within_mss,
            limits(*cap),
        )?)),
        Command::Evidence {
            model,
            observed,
            function,
            cap,
        } => {
            let ib = InferenceBase::from_label(read_model(model)?, observed)?;
            let function = match function {
                FunctionArg::Ms => EvidenceFunction::Ms,
                FunctionArg::Sc => EvidenceFunction::Sc,
            };
            Ok(ok(evidence_report(&ib, function, limits(*cap))?))
        }
        Command::Compare {
            model1,
            observed1,
            model2,
            observed2,
            relation,
        } => {
            let ib1 = InferenceBase::from_label(read_model(model1)?, observed1)?;
            let ib2 = InferenceBase::from_label(read_model(model2)?, observed2)?;
            let relation = match relation {
                CompareArg::S => Relation::S,
                CompareArg::Sc => Relation::Sc,
            };
            Ok(ok(compare_report(&ib1, &ib2, relation)?.0))
        }
        Command::Reproduce { which, epsilon } => {
            let eps = parse_rational(epsilon)?;
            let which = match which {
                WhichArg::Example1 => Reproduction::Example1,
                WhichArg::Example2 => Reproduction::Example2,
                WhichArg::Example3 => Reproduction::Example3,
                WhichArg::All => Reproduction::All,
            };
            let report = reproduce_report(which, &eps)?;
            let exit_code = if report.all_checks_pass() {
                EXIT_OK
            } else {
                EXIT_UNEXPECTED
            };
            Ok(Outcome { report, exit_code })
        }
        Command::Audit {
            corpus_seed,
            corpus_size,
            relation,
        } => {
            if *corpus_size == 0 {
                return Err(Failure {
                    message: "corpus size must be at least 1".into(),
                    exit_code: EXIT_INPUT,
                });
            }
            let relation = match relation {
                RelationArg::S => Relation::S,
                RelationArg::Sc => Relation::Sc,
                RelationArg::C => Relation::C,
            };
            Ok(expect(audit_report(*corpus_seed, *corpus_size, relation)?))
        }
    }
}

/// Writes `report.txt` and the CSV attachments into `dir`.
pub fn write_outputs(dir: &Path, report: &ReportDocument) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("report.txt"), report.render())?;
    for csv in &report.csv_attachments {
        fs::write(dir.join(&csv.name), &csv.content)?;
    }
    Ok(())
}
