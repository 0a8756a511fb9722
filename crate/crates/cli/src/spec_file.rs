//! TOML spec files: parsing, entry conversion, and run-parameter resolution.
//!
//! A spec file describes the group presentation and the endomorphism:
//!
//! ```toml
//! [group]
//! rank = 2
//! holonomy = [[["1", "0"], ["0", "1"]], [["1", "0"], ["0", "-1"]]]
//! affine = [["0", "0"], ["1/2", "0"]]        # optional: concrete presentation
//!
//! [endo]
//! linear = [["3", "0"], ["0", "2"]]
//! translation = ["0", "0"]                   # optional, defaults to zero
//! holonomy_map = [0, 1]                      # optional, derived if absent
//!
//! [run]                                      # optional defaults for the run
//! kmax = 30
//! guard = 5
//! prime_horizon = 100
//! degree_cap = 64
//! budget = 1000000
//! ```
//!
//! Matrix and vector entries are integers or strings; strings may carry
//! rationals ("1/2", "-7/3") and integers beyond the i64 range.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Deserialize;
use std::str::FromStr;

use tspec_core::exactla::RatMatrix;
use tspec_core::spectrum::{EndoSpec, ValidationReport};

/// A matrix/vector entry straight out of the TOML: integer or string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Entry {
    Int(i64),
    Str(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    group: GroupSection,
    endo: EndoSection,
    #[serde(default)]
    run: RunSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupSection {
    rank: usize,
    holonomy: Vec<Vec<Vec<Entry>>>,
    affine: Option<Vec<Vec<Entry>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EndoSection {
    linear: Vec<Vec<Entry>>,
    translation: Option<Vec<Entry>>,
    holonomy_map: Option<Vec<usize>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunSection {
    kmax: Option<u64>,
    guard: Option<usize>,
    prime_horizon: Option<u64>,
    degree_cap: Option<usize>,
    budget: Option<u64>,
}

/// Effective run parameters after merging defaults, the file's `[run]`
/// section, and command-line overrides (strongest last).
#[derive(Debug, Clone, Copy)]
pub struct RunParams {
    pub kmax: u64,
    pub guard: usize,
    pub prime_horizon: u64,
    pub degree_cap: usize,
    pub budget: u64,
}

impl Default for RunParams {
    fn default() -> Self {
        RunParams {
            kmax: 12,
            guard: tspec_core::zeta::DEFAULT_GUARD,
            prime_horizon: 100,
            degree_cap: tspec_core::exactla::DEFAULT_DEGREE_CAP,
            budget: tspec_core::classes::DEFAULT_COSET_BUDGET,
        }
    }
}

/// A parse-level failure, reported with the offending field's path.
#[derive(Debug)]
pub struct ParseError(pub String);

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ParseError {}

fn rational_entry(e: &Entry, path: &str) -> Result<BigRational, ParseError> {
    match e {
        Entry::Int(v) => Ok(BigRational::from(BigInt::from(*v))),
        Entry::Str(s) => {
            let s = s.trim();
            let parse_int = |t: &str, what: &str| {
                BigInt::from_str(t).map_err(|_| {
                    ParseError(format!("{path}: invalid {what} '{t}' in rational '{s}'"))
                })
            };
            match s.split_once('/') {
                Some((num, den)) => {
                    let n = parse_int(num.trim(), "numerator")?;
                    let d = parse_int(den.trim(), "denominator")?;
                    if d.is_zero() {
                        return Err(ParseError(format!("{path}: zero denominator in '{s}'")));
                    }
                    Ok(BigRational::new(n, d))
                }
                None => Ok(BigRational::from(parse_int(s, "integer")?)),
            }
        }
    }
}

fn rational_matrix(rows: &[Vec<Entry>], rank: usize, path: &str) -> Result<RatMatrix, ParseError> {
    if rows.len() != rank {
        return Err(ParseError(format!(
            "{path}: expected {rank} rows, found {}",
            rows.len()
        )));
    }
    let mut data = Vec::with_capacity(rank * rank);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != rank {
            return Err(ParseError(format!(
                "{path}[{i}]: expected {rank} entries, found {}",
                row.len()
            )));
        }
        for (j, e) in row.iter().enumerate() {
            data.push(rational_entry(e, &format!("{path}[{i}][{j}]"))?);
        }
    }
    RatMatrix::new(rank, rank, data).map_err(|e| ParseError(format!("{path}: {e}")))
}

fn rational_vector(
    entries: &[Entry],
    rank: usize,
    path: &str,
) -> Result<Vec<BigRational>, ParseError> {
    if entries.len() != rank {
        return Err(ParseError(format!(
            "{path}: expected {rank} entries, found {}",
            entries.len()
        )));
    }
    entries
        .iter()
        .enumerate()
        .map(|(i, e)| rational_entry(e, &format!("{path}[{i}]")))
        .collect()
}

/// Everything a command needs from one spec file.
#[derive(Debug)]
pub struct LoadedSpec {
    pub spec: EndoSpec,
    pub validation: ValidationReport,
    pub run: RunParams,
}

/// Parse TOML text into a validated spec plus its run parameters. Parse and
/// conversion problems come back as `Err(Ok(ParseError))`-style: the outer
/// error distinguishes file-shape problems (`ParseError`) from semantic
/// validation failures (`tspec_core::Error`).
pub fn load_spec(text: &str) -> Result<LoadedSpec, LoadError> {
    let file: SpecFile = toml::from_str(text)
        .map_err(|e| LoadError::Parse(ParseError(format!("spec file: {}", e.message()))))?;
    let rank = file.group.rank;
    if rank == 0 {
        return Err(LoadError::Parse(ParseError(
            "group.rank: must be at least 1".into(),
        )));
    }
    let mut holonomy = Vec::with_capacity(file.group.holonomy.len());
    for (i, m) in file.group.holonomy.iter().enumerate() {
        holonomy.push(rational_matrix(m, rank, &format!("group.holonomy[{i}]"))?);
    }
    let affine = match &file.group.affine {
        Some(rows) => {
            if rows.len() != holonomy.len() {
                return Err(LoadError::Parse(ParseError(format!(
                    "group.affine: expected one row per holonomy element ({}), found {}",
                    holonomy.len(),
                    rows.len()
                ))));
            }
            let mut out = Vec::with_capacity(rows.len());
            for (i, row) in rows.iter().enumerate() {
                out.push(rational_vector(row, rank, &format!("group.affine[{i}]"))?);
            }
            Some(out)
        }
        None => None,
    };
    let d_lin = rational_matrix(&file.endo.linear, rank, "endo.linear")?;
    let d_trans = match &file.endo.translation {
        Some(v) => rational_vector(v, rank, "endo.translation")?,
        None => vec![BigRational::zero(); rank],
    };
    let (spec, validation) = EndoSpec::new(
        rank,
        holonomy,
        affine,
        d_lin,
        d_trans,
        file.endo.holonomy_map.clone(),
    )
    .map_err(LoadError::Semantic)?;

    let defaults = RunParams::default();
    let run = RunParams {
        kmax: file.run.kmax.unwrap_or(defaults.kmax),
        guard: file.run.guard.unwrap_or(defaults.guard),
        prime_horizon: file.run.prime_horizon.unwrap_or(defaults.prime_horizon),
        degree_cap: file.run.degree_cap.unwrap_or(defaults.degree_cap),
        budget: file.run.budget.unwrap_or(defaults.budget),
    };
    Ok(LoadedSpec {
        spec,
        validation,
        run,
    })
}

/// File-shape problems vs. semantic validation failures; the two map to
/// different exit codes.
#[derive(Debug)]
pub enum LoadError {
    Parse(ParseError),
    Semantic(tspec_core::Error),
}

impl From<ParseError> for LoadError {
    fn from(e: ParseError) -> Self {
        LoadError::Parse(e)
    }
}

impl std::fmt::Display for LoadError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LoadError::Parse(e) => write!(f, "{e}"),
            LoadError::Semantic(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for LoadError {}
