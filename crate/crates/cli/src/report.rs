//! Deterministic JSON report construction. Exact integers and rationals are
//! emitted as decimal strings (`"12"`, `"5/3"`, `"inf"`) so no precision is
//! lost; floating-point diagnostics stay JSON numbers. Key order is fixed by
//! construction, making byte-identical output reproducible.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Map, Value};

use tspec_core::asymptotics::{
    AsymptoticReport, Confidence, GrowthClass, HeightCorollaries, ParityOutcome,
};
use tspec_core::classes::OrbitDecomposition;
use tspec_core::exactla::IntPoly;
use tspec_core::numth::{ExtNat, GaussReport};
use tspec_core::spectrum::{EndoSpec, HeightsReport, SpectrumSeq};
use tspec_core::zeta::ZetaReport;

pub fn big(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

pub fn rational(x: &BigRational) -> Value {
    if x.denom().is_one() {
        Value::String(x.numer().to_string())
    } else {
        Value::String(format!("{}/{}", x.numer(), x.denom()))
    }
}

pub fn ext(x: &ExtNat) -> Value {
    match x {
        ExtNat::Finite(v) => big(v),
        ExtNat::Infinite => Value::String("inf".into()),
    }
}

/// Ascending coefficient list, constant term first.
pub fn poly(p: &IntPoly) -> Value {
    Value::Array(p.coeffs().iter().map(big).collect())
}

fn obj(pairs: Vec<(&str, Value)>) -> Value {
    let mut m = Map::new();
    for (k, v) in pairs {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}

fn header(command: &str, spec: &EndoSpec, warnings: &[String]) -> Vec<(&'static str, Value)> {
    let mut pairs = vec![
        ("command", Value::String(command.to_string())),
        ("rank", json!(spec.rank)),
        ("holonomy_order", json!(spec.order())),
        (
            "presentation",
            Value::String(
                if spec.affine.is_some() {
                    "concrete"
                } else {
                    "linear"
                }
                .into(),
            ),
        ),
    ];
    pairs.push((
        "warnings",
        Value::Array(warnings.iter().map(|w| Value::String(w.clone())).collect()),
    ));
    pairs
}

fn gauss(report: &GaussReport) -> Value {
    obj(vec![
        ("holds", json!(report.holds())),
        (
            "violations",
            Value::Array(
                report
                    .violations
                    .iter()
                    .map(|(k, why)| obj(vec![("k", json!(k)), ("reason", json!(why))]))
                    .collect(),
            ),
        ),
        ("undefined", json!(report.undefined)),
    ])
}

pub fn spectrum_report(
    spec: &EndoSpec,
    warnings: &[String],
    seq: &SpectrumSeq,
    gauss_report: &GaussReport,
) -> Value {
    let finite = seq.finite_map();
    let mut rows = Vec::new();
    for k in 1..=seq.kmax {
        let r = seq.value(k);
        let mut pairs = vec![("k", json!(k)), ("count", ext(r))];
        match tspec_core::numth::dold_and_algebraic(k, &finite) {
            Ok(inv) => {
                pairs.push(("new_classes", big(&inv.i_k)));
                pairs.push(("per_period", rational(&inv.a_k)));
                pairs.push(("per_period_integral", json!(inv.a_k_integral)));
                pairs.push((
                    "periodic_point_count",
                    match tspec_core::spectrum::np_k(seq, k) {
                        Ok(v) => big(&v),
                        Err(_) => Value::Null,
                    },
                ));
                pairs.push((
                    "fixed_point_count",
                    match tspec_core::spectrum::nf_k(seq, k) {
                        Ok(v) => big(&v),
                        Err(_) => Value::Null,
                    },
                ));
            }
            Err(_) => {
                pairs.push(("new_classes", Value::Null));
                pairs.push(("per_period", Value::Null));
                pairs.push(("per_period_integral", Value::Null));
                pairs.push(("periodic_point_count", Value::Null));
                pairs.push(("fixed_point_count", Value::Null));
            }
        }
        rows.push(obj(pairs));
    }
    let mut pairs = header("spectrum", spec, warnings);
    pairs.push(("kmax", json!(seq.kmax)));
    pairs.push(("levels", Value::Array(rows)));
    pairs.push(("gauss", gauss(gauss_report)));
    obj(pairs)
}

pub fn zeta_report(spec: &EndoSpec, warnings: &[String], report: &ZetaReport) -> Value {
    let components: Vec<Value> = report
        .decomposition
        .components
        .iter()
        .map(|c| obj(vec![("factor", poly(&c.factor)), ("weight", big(&c.rho))]))
        .collect();
    let roots: Vec<Value> = report
        .roots
        .iter()
        .map(|r| {
            obj(vec![
                ("re", json!(r.value.re)),
                ("im", json!(r.value.im)),
                ("modulus", json!(r.value.norm())),
                ("radius", json!(r.radius)),
            ])
        })
        .collect();
    let mut pairs = header("zeta", spec, warnings);
    pairs.push(("window_length", json!(report.window.len())));
    pairs.push((
        "window",
        Value::Array(report.window.iter().map(big).collect()),
    ));
    pairs.push(("minimal_poly", poly(&report.decomposition.minimal_poly)));
    pairs.push(("components", Value::Array(components)));
    pairs.push((
        "zeta",
        obj(vec![
            ("numerator", poly(&report.zeta.numerator)),
            ("denominator", poly(&report.zeta.denominator)),
        ]),
    ));
    pairs.push(("roots", Value::Array(roots)));
    pairs.push(("growth_rate", json!(report.lambda)));
    pairs.push(("dominant_count", json!(report.dominant_count)));
    pairs.push(("net_degree", big(&report.net_degree)));
    pairs.push(("degree_max", json!(report.degree_max)));
    pairs.push(("order", json!(report.order)));
    obj(pairs)
}

fn height_corollaries(c: &HeightCorollaries) -> Value {
    obj(vec![
        ("strictly_increasing", json!(c.strictly_increasing)),
        ("primes_certified", json!(c.primes_certified)),
        ("prime_powers_certified", json!(c.prime_powers_certified)),
        ("dominance_certified", json!(c.dominance_certified)),
        ("progression_verified", json!(c.progression_verified)),
        ("progression_unverified", json!(c.progression_unverified)),
    ])
}

pub fn heights_report(
    spec: &EndoSpec,
    warnings: &[String],
    seq: &SpectrumSeq,
    basic: &HeightsReport,
    corollaries: Option<&HeightCorollaries>,
) -> Value {
    let mut pairs = header("heights", spec, warnings);
    pairs.push(("kmax", json!(seq.kmax)));
    pairs.push((
        "heights",
        json!(basic.heights.iter().copied().collect::<Vec<u64>>()),
    ));
    pairs.push(("undefined_levels", json!(basic.undefined)));
    pairs.push((
        "corollaries",
        match corollaries {
            Some(c) => height_corollaries(c),
            None => Value::Null,
        },
    ));
    obj(pairs)
}

pub fn orbits_report(spec: &EndoSpec, warnings: &[String], dec: &OrbitDecomposition) -> Value {
    let orbits: Vec<Value> = dec
        .orbits
        .iter()
        .enumerate()
        .map(|(i, members)| {
            obj(vec![
                ("orbit", json!(i)),
                ("length", json!(members.len())),
                ("members", json!(members)),
                ("depth", json!(dec.depths[i])),
            ])
        })
        .collect();
    let heights: Vec<Value> = dec
        .height_counts
        .iter()
        .map(|(m, c)| obj(vec![("level", json!(m)), ("classes", json!(c))]))
        .collect();
    let mut pairs = header("orbits", spec, warnings);
    pairs.push(("k", json!(dec.k)));
    pairs.push(("class_count", json!(dec.class_count)));
    pairs.push(("orbits", Value::Array(orbits)));
    pairs.push(("height_counts", Value::Array(heights)));
    obj(pairs)
}

fn growth_class(c: &GrowthClass) -> Value {
    match c {
        GrowthClass::TrivialZeta => obj(vec![("kind", json!("trivial"))]),
        GrowthClass::Periodic { q } => obj(vec![("kind", json!("periodic")), ("q", json!(q))]),
        GrowthClass::IntervalDense => obj(vec![("kind", json!("interval_dense"))]),
    }
}

fn confidence(c: Confidence) -> Value {
    Value::String(
        match c {
            Confidence::Exact => "exact",
            Confidence::WindowVerified => "window_verified",
            Confidence::Heuristic => "heuristic",
            Confidence::HeuristicUnresolved => "heuristic_unresolved",
        }
        .into(),
    )
}

fn parity_outcome(o: &ParityOutcome) -> Value {
    match o {
        ParityOutcome::Inapplicable { reason } => obj(vec![
            ("verdict", json!("inapplicable")),
            ("reason", json!(reason)),
        ]),
        ParityOutcome::Holds => obj(vec![("verdict", json!("holds"))]),
        ParityOutcome::Violated => obj(vec![("verdict", json!("violated"))]),
        ParityOutcome::Undefined => obj(vec![("verdict", json!("undefined"))]),
    }
}

pub fn classify_report(
    spec: &EndoSpec,
    warnings: &[String],
    zeta: &ZetaReport,
    asym: &AsymptoticReport,
) -> Value {
    let parity: Vec<Value> = asym
        .parity
        .iter()
        .map(|(k, o)| {
            let mut m = obj(vec![("k", json!(k))]);
            if let (Value::Object(dst), Value::Object(src)) = (&mut m, parity_outcome(o)) {
                for (key, v) in src {
                    dst.insert(key, v);
                }
            }
            m
        })
        .collect();
    let mut pairs = header("classify", spec, warnings);
    pairs.push((
        "trichotomy",
        obj(vec![
            ("class", growth_class(&asym.trichotomy.class)),
            ("confidence", confidence(asym.trichotomy.confidence)),
            ("detail", json!(asym.trichotomy.detail)),
        ]),
    ));
    pairs.push((
        "mod2",
        obj(vec![
            ("period", json!(asym.r2.period)),
            ("lfsr_order", json!(asym.r2.lfsr_order)),
        ]),
    ));
    pairs.push(("parity", Value::Array(parity)));
    pairs.push((
        "density",
        obj(vec![
            ("empirical", rational(&asym.density.empirical)),
            (
                "theoretical_bound",
                match &asym.density.theoretical_bound {
                    Some(b) => rational(b),
                    None => Value::Null,
                },
            ),
            ("undefined_levels", json!(asym.density.undefined_levels)),
        ]),
    ));
    pairs.push(("height_corollaries", height_corollaries(&asym.heights)));
    pairs.push((
        "essential_bound",
        match &asym.essential {
            Some(e) => obj(vec![
                ("gamma", json!(e.gamma)),
                ("n0", json!(e.n0)),
                ("checked_levels", json!(e.checked_levels)),
            ]),
            None => Value::Null,
        },
    ));
    pairs.push((
        "orbit_bound",
        obj(vec![
            ("n0", json!(asym.orbit_bound.n0)),
            ("order", json!(asym.orbit_bound.order)),
        ]),
    ));
    pairs.push(("entropy_bound", json!(asym.entropy_bound)));
    pairs.push(("one_is_eigenvalue", json!(asym.one_is_eigenvalue)));
    pairs.push(("growth_rate", json!(zeta.lambda)));
    pairs.push(("count_radius", json!(asym.r_infinity)));
    obj(pairs)
}

/// One level's outcome in the verification run.
pub enum LevelOutcome {
    Ok {
        enumerated: BigInt,
        averaged: BigInt,
    },
    SkippedInfinite,
    SkippedBudget,
    SkippedUnsupported(String),
}

pub fn verify_report(
    spec: &EndoSpec,
    warnings: &[String],
    levels: &[(u64, LevelOutcome)],
    zeta_status: &str,
    threads: usize,
) -> Value {
    let rows: Vec<Value> = levels
        .iter()
        .map(|(k, outcome)| match outcome {
            LevelOutcome::Ok {
                enumerated,
                averaged,
            } => obj(vec![
                ("k", json!(k)),
                ("status", json!("ok")),
                ("enumerated", big(enumerated)),
                ("averaged", big(averaged)),
            ]),
            LevelOutcome::SkippedInfinite => {
                obj(vec![("k", json!(k)), ("status", json!("skipped_infinite"))])
            }
            LevelOutcome::SkippedBudget => {
                obj(vec![("k", json!(k)), ("status", json!("skipped_budget"))])
            }
            LevelOutcome::SkippedUnsupported(why) => obj(vec![
                ("k", json!(k)),
                ("status", json!("skipped_unsupported")),
                ("reason", json!(why)),
            ]),
        })
        .collect();
    let checked = levels
        .iter()
        .filter(|(_, o)| matches!(o, LevelOutcome::Ok { .. }))
        .count();
    let mut pairs = header("verify", spec, warnings);
    pairs.push(("levels", Value::Array(rows)));
    pairs.push(("levels_checked", json!(checked)));
    pairs.push(("zeta_roundtrip", json!(zeta_status)));
    pairs.push(("threads", json!(threads)));
    obj(pairs)
}

/// Render a report to its canonical byte form: two-space indentation and a
/// trailing newline.
pub fn render(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization");
    s.push('\n');
    s
}
