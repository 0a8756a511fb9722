//! `tspec`: exact twisted fixed-point spectra, zeta functions, heights,
//! orbit structure, growth classification, and independent cross-validation
//! for endomorphisms given by rational affine data.
//!
//! Exit codes: 0 success, 2 unreadable/ill-formed input, 3 invalid spec,
//! 4 window or reconstruction failure, 5 infinite count in a computation
//! that needs finite ones, 6 cross-validation mismatch.

mod commands;
mod report;
mod spec_file;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use spec_file::{LoadError, LoadedSpec, RunParams};
use tspec_core::Error;

#[derive(Parser)]
#[command(
    name = "tspec",
    version,
    about = "Exact twisted fixed-point spectra and zeta functions of affine group specs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct CommonArgs {
    /// Spec file (TOML)
    file: PathBuf,
    /// Highest iterate to analyze (overrides the file's run section)
    #[arg(long)]
    kmax: Option<u64>,
    /// Write the JSON report to this path instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Count table with the divisor-sum layer and congruence checks
    Spectrum {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Exact rational zeta function reconstructed from the counts
    Zeta {
        #[command(flatten)]
        common: CommonArgs,
        /// Extra window terms demanded beyond twice the recurrence order
        #[arg(long)]
        guard: Option<usize>,
    },
    /// Levels at which new classes appear
    Heights {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Enumerate classes at one level and decompose them into orbits
    Orbits {
        #[command(flatten)]
        common: CommonArgs,
        /// The level to enumerate
        #[arg(long, default_value_t = 1)]
        k: u64,
        /// Cap on lattice cosets visited during enumeration
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Growth classification and asymptotic invariants
    Classify {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        guard: Option<usize>,
    },
    /// Re-derive every level independently and compare
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        guard: Option<usize>,
        /// Cap on lattice cosets visited during enumeration
        #[arg(long)]
        budget: Option<u64>,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::SpecInvalid(_)
        | Error::SpecInconsistent(_)
        | Error::UnsupportedSpec(_)
        | Error::InvalidArgument(_)
        | Error::NonSquare { .. }
        | Error::DimensionMismatch(_)
        | Error::MissingDivisor { .. }
        | Error::ZeroPolynomial => 3,
        Error::WindowExhausted(_)
        | Error::WindowTooSmall(_)
        | Error::NonIntegerRecurrence { .. }
        | Error::RepeatedFactor { .. }
        | Error::Decomposition(_)
        | Error::RootFinding(_)
        | Error::DegreeCapExceeded { .. } => 4,
        Error::InfiniteValue { .. } => 5,
        Error::OracleMismatch { .. } | Error::AssertionViolated(_) => 6,
    }
}

fn load(path: &Path, kmax: Option<u64>) -> Result<LoadedSpec, i32> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("tspec: cannot read {}: {e}", path.display());
        2
    })?;
    let mut loaded = spec_file::load_spec(&text).map_err(|e| match e {
        LoadError::Parse(p) => {
            eprintln!("tspec: {}: {p}", path.display());
            2
        }
        LoadError::Semantic(s) => {
            eprintln!("tspec: {}: {s}", path.display());
            exit_code(&s)
        }
    })?;
    if let Some(k) = kmax {
        loaded.run.kmax = k;
    }
    if loaded.run.kmax == 0 {
        eprintln!("tspec: kmax must be at least 1");
        return Err(2);
    }
    for w in &loaded.validation.warnings {
        eprintln!("tspec: warning: {w}");
    }
    Ok(loaded)
}

fn emit(value: &serde_json::Value, out: Option<&Path>) -> Result<(), i32> {
    let rendered = report::render(value);
    match out {
        Some(path) => {
            std::fs::write(path, rendered).map_err(|e| {
                eprintln!("tspec: cannot write {}: {e}", path.display());
                2
            })?;
            eprintln!("tspec: report written to {}", path.display());
        }
        None => print!("{rendered}"),
    }
    Ok(())
}

fn apply_overrides(run: &mut RunParams, guard: Option<usize>, budget: Option<u64>) {
    if let Some(g) = guard {
        run.guard = g;
    }
    if let Some(b) = budget {
        run.budget = b;
    }
}

type Runner = Box<dyn FnOnce(&LoadedSpec) -> Result<serde_json::Value, Error>>;

fn dispatch(cli: Cli) -> i32 {
    let (common, runner): (&CommonArgs, Runner) = match &cli.command {
        Command::Spectrum { common } => (common, Box::new(commands::run_spectrum)),
        Command::Zeta { common, guard } => {
            let guard = *guard;
            (
                common,
                Box::new(move |l: &LoadedSpec| {
                    let mut l2 = LoadedSpec {
                        spec: l.spec.clone(),
                        validation: l.validation.clone(),
                        run: l.run,
                    };
                    apply_overrides(&mut l2.run, guard, None);
                    commands::run_zeta(&l2)
                }),
            )
        }
        Command::Heights { common } => (common, Box::new(commands::run_heights)),
        Command::Orbits { common, k, budget } => {
            let (k, budget) = (*k, *budget);
            (
                common,
                Box::new(move |l: &LoadedSpec| {
                    let mut l2 = LoadedSpec {
                        spec: l.spec.clone(),
                        validation: l.validation.clone(),
                        run: l.run,
                    };
                    apply_overrides(&mut l2.run, None, budget);
                    commands::run_orbits(&l2, k)
                }),
            )
        }
        Command::Classify { common, guard } => {
            let guard = *guard;
            (
                common,
                Box::new(move |l: &LoadedSpec| {
                    let mut l2 = LoadedSpec {
                        spec: l.spec.clone(),
                        validation: l.validation.clone(),
                        run: l.run,
                    };
                    apply_overrides(&mut l2.run, guard, None);
                    commands::run_classify(&l2)
                }),
            )
        }
        Command::Verify {
            common,
            guard,
            budget,
        } => {
            let (guard, budget) = (*guard, *budget);
            (
                common,
                Box::new(move |l: &LoadedSpec| {
                    let mut l2 = LoadedSpec {
                        spec: l.spec.clone(),
                        validation: l.validation.clone(),
                        run: l.run,
                    };
                    apply_overrides(&mut l2.run, guard, budget);
                    commands::run_verify(&l2)
                }),
            )
        }
    };

    let loaded = match load(&common.file, common.kmax) {
        Ok(l) => l,
        Err(code) => return code,
    };
    match runner(&loaded) {
        Ok(value) => match emit(&value, common.out.as_deref()) {
            Ok(()) => 0,
            Err(code) => code,
        },
        Err(e) => {
            eprintln!("tspec: {e}");
            exit_code(&e)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(dispatch(cli));
}
