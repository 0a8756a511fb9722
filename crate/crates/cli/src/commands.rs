//! Command pipelines: each takes a loaded spec and produces a JSON report,
//! or the error that decides the exit code.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use num_bigint::BigInt;
use serde_json::Value;

use tspec_core::asymptotics::analyze_asymptotics;
use tspec_core::classes::orbit_decomposition;
use tspec_core::numth::{gauss_congruence_check, ExtNat};
use tspec_core::spectrum::{heights_set, reidemeister_sequence};
use tspec_core::zeta::{analyze_counts, verify_series_roundtrip};
use tspec_core::Error;

use crate::report::{self, LevelOutcome};
use crate::spec_file::LoadedSpec;

pub fn run_spectrum(loaded: &LoadedSpec) -> Result<Value, Error> {
    let seq = reidemeister_sequence(&loaded.spec, loaded.run.kmax)?;
    let gauss = gauss_congruence_check(&seq.ext_map(), loaded.run.kmax)?;
    Ok(report::spectrum_report(
        &loaded.spec,
        &loaded.validation.warnings,
        &seq,
        &gauss,
    ))
}

/// The exact integer window, or the first infinite level.
fn finite_window(loaded: &LoadedSpec) -> Result<Vec<BigInt>, Error> {
    let seq = reidemeister_sequence(&loaded.spec, loaded.run.kmax)?;
    for k in 1..=seq.kmax {
        if let ExtNat::Infinite = seq.value(k) {
            return Err(Error::InfiniteValue { k });
        }
    }
    Ok(seq.finite_map().values().cloned().collect())
}

pub fn run_zeta(loaded: &LoadedSpec) -> Result<Value, Error> {
    let window = finite_window(loaded)?;
    let zr = analyze_counts(&window, loaded.run.guard, loaded.run.degree_cap)?;
    verify_series_roundtrip(&zr)?;
    Ok(report::zeta_report(
        &loaded.spec,
        &loaded.validation.warnings,
        &zr,
    ))
}

pub fn run_heights(loaded: &LoadedSpec) -> Result<Value, Error> {
    let seq = reidemeister_sequence(&loaded.spec, loaded.run.kmax)?;
    let basic = heights_set(&seq)?;
    // the corollary layer needs a finite window; omit it otherwise
    let corollaries = if seq.all_finite() {
        let window: Vec<BigInt> = seq.finite_map().values().cloned().collect();
        match analyze_counts(&window, loaded.run.guard, loaded.run.degree_cap) {
            Ok(zr) => {
                let tri = tspec_core::asymptotics::classify_trichotomy(&zr);
                Some(tspec_core::asymptotics::height_corollaries(
                    &seq,
                    &zr,
                    &tri,
                    loaded.run.prime_horizon,
                )?)
            }
            Err(_) => None,
        }
    } else {
        None
    };
    Ok(report::heights_report(
        &loaded.spec,
        &loaded.validation.warnings,
        &seq,
        &basic,
        corollaries.as_ref(),
    ))
}

pub fn run_orbits(loaded: &LoadedSpec, k: u64) -> Result<Value, Error> {
    let seq = reidemeister_sequence(&loaded.spec, k)?;
    let dec = orbit_decomposition(&loaded.spec, &seq, k, loaded.run.budget)?;
    Ok(report::orbits_report(
        &loaded.spec,
        &loaded.validation.warnings,
        &dec,
    ))
}

pub fn run_classify(loaded: &LoadedSpec) -> Result<Value, Error> {
    let seq = reidemeister_sequence(&loaded.spec, loaded.run.kmax)?;
    let window = finite_window(loaded)?;
    let zr = analyze_counts(&window, loaded.run.guard, loaded.run.degree_cap)?;
    verify_series_roundtrip(&zr)?;
    let asym = analyze_asymptotics(&loaded.spec, &seq, &zr, loaded.run.prime_horizon)?;
    Ok(report::classify_report(
        &loaded.spec,
        &loaded.validation.warnings,
        &zr,
        &asym,
    ))
}

/// Worker-thread cap: TSPEC_THREADS when set, otherwise the machine's
/// available parallelism, always at least 1.
pub fn thread_cap() -> usize {
    if let Ok(v) = std::env::var("TSPEC_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            return n.max(1);
        }
    }
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

pub fn run_verify(loaded: &LoadedSpec) -> Result<Value, Error> {
    let spec = &loaded.spec;
    let kmax = loaded.run.kmax;
    let seq = reidemeister_sequence(spec, kmax)?;

    // cross-validate each level by independent enumeration, in parallel
    let threads = thread_cap().min(kmax as usize).max(1);
    let next = AtomicU64::new(1);
    let results: Mutex<Vec<(u64, Result<LevelOutcome, Error>)>> =
        Mutex::new(Vec::with_capacity(kmax as usize));
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                if k > kmax {
                    break;
                }
                let outcome = match orbit_decomposition(spec, &seq, k, loaded.run.budget) {
                    Ok(dec) => match seq.value(k) {
                        ExtNat::Finite(avg) => Ok(LevelOutcome::Ok {
                            enumerated: BigInt::from(dec.class_count),
                            averaged: avg.clone(),
                        }),
                        ExtNat::Infinite => Err(Error::AssertionViolated(format!(
                            "level {k}: enumeration finished but the average is infinite"
                        ))),
                    },
                    Err(Error::InfiniteValue { .. }) => Ok(LevelOutcome::SkippedInfinite),
                    Err(Error::UnsupportedSpec(msg))
                        if msg.contains("budget") || msg.contains("too large") =>
                    {
                        Ok(LevelOutcome::SkippedBudget)
                    }
                    Err(Error::UnsupportedSpec(msg)) => Ok(LevelOutcome::SkippedUnsupported(msg)),
                    Err(e) => Err(e),
                };
                results.lock().expect("worker poisoned").push((k, outcome));
            });
        }
    });
    let mut collected = results.into_inner().expect("worker poisoned");
    collected.sort_by_key(|(k, _)| *k);
    let mut levels = Vec::with_capacity(collected.len());
    for (k, outcome) in collected {
        levels.push((k, outcome?));
    }

    // zeta round-trip and the trace identity on a finite window; a window
    // too short to certify a recurrence is a skip, not a failure
    let zeta_status = if seq.all_finite() {
        let window: Vec<BigInt> = seq.finite_map().values().cloned().collect();
        match analyze_counts(&window, loaded.run.guard, loaded.run.degree_cap) {
            Ok(zr) => {
                verify_series_roundtrip(&zr)?;
                "ok"
            }
            Err(Error::WindowExhausted(_)) | Err(Error::WindowTooSmall(_)) => "skipped_window",
            Err(e) => return Err(e),
        }
    } else {
        "skipped_infinite"
    };

    Ok(report::verify_report(
        spec,
        &loaded.validation.warnings,
        &levels,
        zeta_status,
        threads,
    ))
}
