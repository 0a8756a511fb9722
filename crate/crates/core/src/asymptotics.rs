//! Asymptotic structure of a twisted fixed-point count sequence: the growth
//! trichotomy of the normalized counts, the mod-2 period and the parity
//! theorem built on it, density of nonzero levels, height-set corollaries,
//! and lower bounds for counts and orbit classes.

use std::collections::BTreeMap;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::numth::{divisors, dold_and_algebraic, is_prime, primes_in_progression};
use crate::spectrum::SpectrumSeq;
use crate::zeta::ZetaReport;
use crate::Result;

/// Largest denominator tried when testing a dominant root angle for
/// rationality, and the cap on the combined period.
const ANGLE_DENOM_MAX: u64 = 720;
const PERIOD_LCM_CAP: u64 = 86_400;
/// Base tolerance for the periodicity window verification.
const PERIODIC_TOL: f64 = 1e-6;
/// Budget for sequence extension in height-progression verification.
const PROGRESSION_BUDGET: u64 = 400;

/// How the normalized counts R(k)/λ^k behave for large k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GrowthClass {
    /// identically zero counts (empty decomposition)
    TrivialZeta,
    /// eventually periodic with period q
    Periodic { q: u64 },
    /// dense in a positive-length interval
    IntervalDense,
}

/// How the classification was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Confidence {
    /// exact reasoning (real dominant roots, or no roots at all)
    Exact,
    /// rational dominant angles, confirmed against the window
    WindowVerified,
    /// numeric evidence only (window too short, or apparent irrationality)
    Heuristic,
    /// the numeric evidence was contradictory; classification is a fallback
    HeuristicUnresolved,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrichotomyReport {
    pub class: GrowthClass,
    pub confidence: Confidence,
    pub detail: String,
}

/// Classify the normalized growth of the analyzed window.
pub fn classify_trichotomy(report: &ZetaReport) -> TrichotomyReport {
    if report.decomposition.is_empty() {
        return TrichotomyReport {
            class: GrowthClass::TrivialZeta,
            confidence: Confidence::Exact,
            detail: "all counts vanish".into(),
        };
    }
    let lambda = report.lambda;
    // dominant roots with certified radii
    let dominant: Vec<_> = report
        .roots
        .iter()
        .filter(|r| r.value.norm() + r.radius >= lambda - r.radius - 1e-9 * lambda.max(1.0))
        .collect();

    // all dominant roots real: the normalized sequence is exactly eventually
    // periodic with period 1 (all positive) or 2 (some negative)
    let real_tol = 1e-9 * lambda.max(1.0);
    if dominant.iter().all(|r| r.value.im.abs() <= real_tol) {
        let q = if dominant.iter().any(|r| r.value.re < 0.0) {
            2
        } else {
            1
        };
        return TrichotomyReport {
            class: GrowthClass::Periodic { q },
            confidence: Confidence::Exact,
            detail: format!("{} real dominant root(s)", dominant.len()),
        };
    }

    // rational-angle probe for the complex dominant roots
    let mut lcm_q: u64 = 1;
    let mut all_rational = true;
    for r in &dominant {
        let theta = r.value.im.atan2(r.value.re) / std::f64::consts::TAU;
        let theta = theta.rem_euclid(1.0);
        match rational_angle(theta) {
            Some(q) => {
                lcm_q = num_integer::lcm(lcm_q, q);
                if lcm_q > PERIOD_LCM_CAP {
                    all_rational = false;
                    break;
                }
            }
            None => {
                all_rational = false;
                break;
            }
        }
    }
    if !all_rational {
        return TrichotomyReport {
            class: GrowthClass::IntervalDense,
            confidence: Confidence::Heuristic,
            detail: "a dominant root angle resists small-denominator rational approximation".into(),
        };
    }

    // window verification of the claimed period, with a subdominant envelope
    match verify_period(report, lcm_q) {
        Some(true) => TrichotomyReport {
            class: GrowthClass::Periodic { q: lcm_q },
            confidence: Confidence::WindowVerified,
            detail: format!("dominant angles rational; window confirms period {lcm_q}"),
        },
        None => TrichotomyReport {
            class: GrowthClass::Periodic { q: lcm_q },
            confidence: Confidence::Heuristic,
            detail: format!("dominant angles rational; window too short to confirm {lcm_q}"),
        },
        Some(false) => TrichotomyReport {
            class: GrowthClass::IntervalDense,
            confidence: Confidence::HeuristicUnresolved,
            detail: format!(
                "dominant angles looked rational with period {lcm_q} but the window disagrees"
            ),
        },
    }
}

/// Smallest q ≤ ANGLE_DENOM_MAX with θ·q within certification slack of an
/// integer; `None` when no small denominator fits.
fn rational_angle(theta: f64) -> Option<u64> {
    for q in 1..=ANGLE_DENOM_MAX {
        let scaled = theta * q as f64;
        if (scaled - scaled.round()).abs() <= 1e-7 * q as f64 {
            return Some(q);
        }
    }
    None
}

/// Check |R(k+q)/λ^{k+q} − R(k)/λ^k| against tolerance plus the subdominant
/// envelope on every pair the window affords. `None` when no pair fits.
fn verify_period(report: &ZetaReport, q: u64) -> Option<bool> {
    let lambda = report.lambda;
    let window = &report.window;
    let q = q as usize;
    if window.len() <= q {
        return None;
    }
    // subdominant coefficient mass and modulus ratio
    let mut sub_mass = 0.0f64;
    let mut sub_ratio = 0.0f64;
    for (c, r) in report
        .decomposition
        .components
        .iter()
        .flat_map(|c| report.roots.iter().map(move |r| (c, r)))
    {
        // associate roots to components by evaluating the factor — cheap and
        // exact enough: instead use modulus comparison only
        let _ = c;
        let m = r.value.norm();
        if m < lambda - 1e-9 * lambda.max(1.0) {
            sub_ratio = sub_ratio.max(m / lambda);
        }
    }
    for c in &report.decomposition.components {
        let w = c.rho.abs().to_f64().unwrap_or(f64::INFINITY);
        sub_mass += w * c.factor.degree().unwrap_or(0) as f64;
    }
    let mut checked = false;
    for k in 0..window.len() - q {
        let a = normalized_term(&window[k], lambda, k as u64 + 1)?;
        let b = normalized_term(&window[k + q], lambda, (k + q) as u64 + 1)?;
        let envelope = 2.0 * sub_mass * sub_ratio.powi(k as i32 + 1);
        checked = true;
        if (a - b).abs() > PERIODIC_TOL + envelope {
            return Some(false);
        }
    }
    if checked {
        Some(true)
    } else {
        None
    }
}

fn normalized_term(r: &BigInt, lambda: f64, k: u64) -> Option<f64> {
    let v = r.to_f64()?;
    if !v.is_finite() {
        return None;
    }
    let scale = lambda.powi(k as i32);
    if !scale.is_finite() || scale == 0.0 {
        return None;
    }
    Some(v / scale)
}

/// The pure period of the counts taken mod 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct R2Report {
    /// period of the mod-2 sequence (the theorem guarantees it is odd)
    pub period: u64,
    /// length of the minimal mod-2 linear generator
    pub lfsr_order: usize,
}

/// Minimal F₂ LFSR (Berlekamp–Massey). Returns the connection coefficients
/// c_1..c_L with s_k = Σ c_i·s_{k−i} (mod 2).
fn berlekamp_massey_f2(s: &[u8]) -> Vec<u8> {
    let n = s.len();
    let mut c = vec![0u8; n + 1];
    let mut b = vec![0u8; n + 1];
    c[0] = 1;
    b[0] = 1;
    let mut l = 0usize;
    let mut m = 1usize;
    for i in 0..n {
        let mut d = s[i] & 1;
        for j in 1..=l {
            d ^= c[j] & s[i - j];
        }
        if d == 0 {
            m += 1;
        } else if 2 * l <= i {
            let t = c.clone();
            for j in 0..=(n - m) {
                c[j + m] ^= b[j];
            }
            l = i + 1 - l;
            b = t;
            m = 1;
        } else {
            for j in 0..=(n - m) {
                c[j + m] ^= b[j];
            }
            m += 1;
        }
    }
    c[1..=l].to_vec()
}

/// Period of the counts mod 2. The window is first extended through the
/// minimal integer recurrence so the mod-2 generator is determined, then the
/// state walk of the minimal LFSR is followed until it returns to the start.
/// The theorem this feeds requires a pure (no-preperiod) odd period, and both
/// properties are asserted.
pub fn r2_period(report: &ZetaReport) -> Result<R2Report> {
    let order = report.order;
    let need = (2 * order + 16).max(report.window.len());
    let extended = extend_counts(&report.window, &report.decomposition.minimal_poly, need)?;
    let bits: Vec<u8> = extended
        .iter()
        .map(|x| {
            if (x % BigInt::from(2)).is_zero() {
                0
            } else {
                1
            }
        })
        .collect();
    let conn = berlekamp_massey_f2(&bits);
    let t = conn.len();
    if t == 0 {
        // identically zero mod 2
        return Ok(R2Report {
            period: 1,
            lfsr_order: 0,
        });
    }
    // walk states until any repeat; certify the repeat is the initial state
    let cap: u64 = 3u64 * (1u64 << t.min(16));
    let mut state: Vec<u8> = bits[..t].to_vec();
    let initial = state.clone();
    let mut seen: HashMap<Vec<u8>, u64> = HashMap::new();
    seen.insert(state.clone(), 0);
    for step in 1..=cap {
        let mut next_bit = 0u8;
        for (i, &ci) in conn.iter().enumerate() {
            next_bit ^= ci & state[t - 1 - i];
        }
        state.rotate_left(1);
        state[t - 1] = next_bit;
        if state == initial {
            let period = step;
            if period % 2 == 0 {
                return Err(Error::AssertionViolated(format!(
                    "mod-2 period {period} is even"
                )));
            }
            return Ok(R2Report {
                period,
                lfsr_order: t,
            });
        }
        if let Some(first) = seen.get(&state) {
            return Err(Error::AssertionViolated(format!(
                "mod-2 sequence has a preperiod (state at step {step} first seen at {first})"
            )));
        }
        seen.insert(state.clone(), step);
    }
    Err(Error::AssertionViolated(format!(
        "mod-2 state walk exceeded its cap of {cap} steps"
    )))
}

/// Extend a window along its minimal monic recurrence to `len` terms.
pub fn extend_counts(
    window: &[BigInt],
    rec: &crate::exactla::IntPoly,
    len: usize,
) -> Result<Vec<BigInt>> {
    let mut out = window.to_vec();
    if out.len() >= len {
        out.truncate(len);
        return Ok(out);
    }
    let Some(t) = rec.degree() else {
        return Err(Error::ZeroPolynomial);
    };
    if t == 0 {
        // empty recurrence: the zero sequence
        out.resize(len, BigInt::zero());
        return Ok(out);
    }
    if out.len() < t {
        return Err(Error::WindowTooSmall(format!(
            "cannot extend a {}-term window with an order-{t} recurrence",
            out.len()
        )));
    }
    while out.len() < len {
        let k = out.len();
        let mut acc = BigInt::zero();
        for i in 0..t {
            // r_k = −Σ rec_i · r_{k−t+i} for monic rec
            acc -= rec.coeff(i) * &out[k - t + i];
        }
        out.push(acc);
    }
    Ok(out)
}

/// Verdict of the parity theorem at one level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParityOutcome {
    /// the level does not meet the theorem's hypotheses
    Inapplicable { reason: String },
    /// hypotheses met and the averaged count is even
    Holds,
    /// hypotheses met but the averaged count is odd
    Violated,
    /// the averaged count is undefined at this level
    Undefined,
}

/// Apply the parity theorem at every odd level 3..=kmax: when α² divides k,
/// or some prime divisor of k is a power of 2 modulo α, the per-period
/// average A_k must be even. Level 1 is degenerate and always inapplicable.
pub fn parity_check(seq: &SpectrumSeq, alpha: u64, kmax: u64) -> Result<Vec<(u64, ParityOutcome)>> {
    let finite = seq.finite_map();
    let mut out = Vec::new();
    for k in 1..=kmax.min(seq.kmax) {
        if k == 1 {
            out.push((
                k,
                ParityOutcome::Inapplicable {
                    reason: "level 1 is degenerate for the parity theorem".into(),
                },
            ));
            continue;
        }
        if k % 2 == 0 {
            out.push((
                k,
                ParityOutcome::Inapplicable {
                    reason: "the parity theorem addresses odd levels".into(),
                },
            ));
            continue;
        }
        if divisors(k).iter().any(|d| !seq.value(*d).is_finite()) {
            out.push((k, ParityOutcome::Undefined));
            continue;
        }
        let applicable = alpha_applicable(k, alpha);
        if !applicable {
            out.push((
                k,
                ParityOutcome::Inapplicable {
                    reason: format!(
                        "neither α² | k nor any prime divisor of {k} is a power of 2 mod {alpha}"
                    ),
                },
            ));
            continue;
        }
        let inv = dold_and_algebraic(k, &finite)?;
        if !inv.a_k_integral {
            out.push((k, ParityOutcome::Violated));
            continue;
        }
        let a_k = inv.a_k.to_integer();
        if (&a_k % BigInt::from(2)).is_zero() {
            out.push((k, ParityOutcome::Holds));
        } else {
            out.push((k, ParityOutcome::Violated));
        }
    }
    Ok(out)
}

/// Hypothesis test: α² | k, or some prime p | k with p ≡ 2^i (mod α).
fn alpha_applicable(k: u64, alpha: u64) -> bool {
    if alpha == 0 {
        return false;
    }
    if (alpha * alpha) != 0 && k.is_multiple_of(alpha * alpha) {
        return true;
    }
    // powers of two mod alpha
    let mut powers = Vec::new();
    let mut x = 1u64 % alpha;
    loop {
        if powers.contains(&x) {
            break;
        }
        powers.push(x);
        x = (x * 2) % alpha;
    }
    let mut m = k;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            if powers.contains(&(p % alpha)) {
                return true;
            }
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 && powers.contains(&(m % alpha)) {
        return true;
    }
    false
}

/// Density of levels carrying new classes, with the theoretical floor that
/// applies when the growth rate exceeds 1.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    /// #{k ≤ kmax : A_k defined and nonzero} / kmax
    pub empirical: BigRational,
    /// theoretical lower bound on the density (λ > 1 only): 1/q when the
    /// profile is periodic, 1 when dense, 1/n(φ) otherwise
    pub theoretical_bound: Option<BigRational>,
    /// levels with undefined invariants (infinite count at a divisor)
    pub undefined_levels: u64,
}

pub fn density_estimates(
    seq: &SpectrumSeq,
    report: &ZetaReport,
    trichotomy: &TrichotomyReport,
) -> Result<DensityReport> {
    let finite = seq.finite_map();
    let mut nonzero = 0u64;
    let mut undefined = 0u64;
    'levels: for k in 1..=seq.kmax {
        for d in divisors(k) {
            if !seq.value(d).is_finite() {
                undefined += 1;
                continue 'levels;
            }
        }
        if !dold_and_algebraic(k, &finite)?.i_k.is_zero() {
            nonzero += 1;
        }
    }
    let empirical = BigRational::new(BigInt::from(nonzero), BigInt::from(seq.kmax));
    let theoretical_bound = if report.lambda > 1.0 + 1e-9 {
        Some(match &trichotomy.class {
            GrowthClass::Periodic { q } => BigRational::new(BigInt::from(1), BigInt::from(*q)),
            GrowthClass::IntervalDense => BigRational::from(BigInt::from(1)),
            GrowthClass::TrivialZeta => unreachable!("λ > 1 has roots"),
        })
        .map(|b| {
            // never claim more than 1/n(φ) without the profile's help
            let n_bound =
                BigRational::new(BigInt::from(1), BigInt::from(report.dominant_count.max(1)));
            if matches!(
                trichotomy.confidence,
                Confidence::Heuristic | Confidence::HeuristicUnresolved
            ) {
                n_bound
            } else {
                b
            }
        })
    } else {
        None
    };
    Ok(DensityReport {
        empirical,
        theoretical_bound,
        undefined_levels: undefined,
    })
}

/// Height-set corollaries checkable from the window and its recurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightCorollaries {
    /// the counts strictly increase over the extended horizon
    pub strictly_increasing: bool,
    /// primes certified as heights by strict increase (up to the horizon)
    pub primes_certified: Vec<u64>,
    /// prime powers p^n ≤ kmax with p beyond the largest empty level
    pub prime_powers_certified: Vec<u64>,
    /// levels m certified by Σ_{k = m/p} R(k) < R(m) over prime p | m
    pub dominance_certified: Vec<u64>,
    /// for a periodic profile with period q: the first primes ≡ 1 (mod q)
    /// verified to be heights, within the extension budget
    pub progression_verified: Vec<u64>,
    /// primes ≡ 1 (mod q) that exceeded the extension budget
    pub progression_unverified: Vec<u64>,
}

pub fn height_corollaries(
    seq: &SpectrumSeq,
    report: &ZetaReport,
    trichotomy: &TrichotomyReport,
    prime_horizon: u64,
) -> Result<HeightCorollaries> {
    let finite = seq.finite_map();
    let kmax = seq.kmax;

    // extension along the recurrence for looks beyond the window
    let horizon = prime_horizon.max(kmax).min(PROGRESSION_BUDGET);
    let extended = if seq.all_finite() {
        extend_counts(
            &report.window,
            &report.decomposition.minimal_poly,
            horizon as usize,
        )
        .ok()
    } else {
        None
    };

    // strict increase over the extended horizon
    let strictly_increasing = extended
        .as_ref()
        .map(|e| e.windows(2).all(|w| w[0] < w[1]))
        .unwrap_or(false);
    let mut primes_certified = Vec::new();
    if strictly_increasing {
        for p in 2..=horizon {
            if is_prime(p) {
                primes_certified.push(p);
            }
        }
    }

    // prime powers p^n ≤ kmax with p larger than every empty level
    let mut largest_empty = 0u64;
    let mut defined_levels: Vec<u64> = Vec::new();
    'lv: for k in 1..=kmax {
        for d in divisors(k) {
            if !seq.value(d).is_finite() {
                continue 'lv;
            }
        }
        defined_levels.push(k);
        if dold_and_algebraic(k, &finite)?.i_k.is_zero() {
            largest_empty = k;
        }
    }
    let mut prime_powers_certified = Vec::new();
    for p in (largest_empty + 1)..=kmax {
        if !is_prime(p) {
            continue;
        }
        let mut pw = p;
        while pw <= kmax {
            if defined_levels.contains(&pw) && !dold_and_algebraic(pw, &finite)?.i_k.is_zero() {
                prime_powers_certified.push(pw);
            }
            pw = match pw.checked_mul(p) {
                Some(x) => x,
                None => break,
            };
        }
    }
    prime_powers_certified.sort_unstable();
    prime_powers_certified.dedup();

    // dominance criterion: Σ over maximal proper divisor levels < R(m)
    let mut dominance_certified = Vec::new();
    for &m in &defined_levels {
        if m == 1 {
            if let Some(r1) = finite.get(&1) {
                if !r1.is_zero() {
                    dominance_certified.push(1);
                }
            }
            continue;
        }
        let rm = finite.get(&m).expect("defined");
        let mut sum = BigInt::zero();
        let mut all_present = true;
        let mut mm = m;
        let mut prime_divs = Vec::new();
        let mut p = 2u64;
        while p * p <= mm {
            if mm % p == 0 {
                prime_divs.push(p);
                while mm % p == 0 {
                    mm /= p;
                }
            }
            p += 1;
        }
        if mm > 1 {
            prime_divs.push(mm);
        }
        for p in prime_divs {
            match finite.get(&(m / p)) {
                Some(v) => sum += v,
                None => {
                    all_present = false;
                    break;
                }
            }
        }
        if all_present && &sum < rm {
            dominance_certified.push(m);
        }
    }

    // periodic profiles: the progression 1 + ℓq should consist of heights;
    // verify the first five primes ≡ 1 (mod q) within the budget
    let mut progression_verified = Vec::new();
    let mut progression_unverified = Vec::new();
    if let GrowthClass::Periodic { q } = trichotomy.class {
        if report.lambda > 1.0 + 1e-9 {
            if let Some(ext) = &extended {
                let primes = primes_in_progression(1 % q.max(1), q.max(1), 5);
                for p in primes {
                    if p as usize > ext.len() {
                        progression_unverified.push(p);
                        continue;
                    }
                    // I_p over the extension (p prime: I_p = R(p) − R(1))
                    let i_p = &ext[p as usize - 1] - &ext[0];
                    if !i_p.is_zero() {
                        progression_verified.push(p);
                    } else {
                        progression_unverified.push(p);
                    }
                }
            }
        }
    }

    Ok(HeightCorollaries {
        strictly_increasing,
        primes_certified,
        prime_powers_certified,
        dominance_certified,
        progression_verified,
        progression_unverified,
    })
}

/// Empirical exponential lower bound for the new-class counts:
/// |I_m| ≥ (γ/2)·λ^m for all m ≥ n0 across the window.
#[derive(Debug, Clone, PartialEq)]
pub struct EssentialBound {
    pub gamma: f64,
    pub n0: u64,
    /// number of window levels the bound was checked on
    pub checked_levels: u64,
}

pub fn essential_orbit_bound(
    seq: &SpectrumSeq,
    report: &ZetaReport,
) -> Result<Option<EssentialBound>> {
    if report.lambda <= 1.0 + 1e-12 || !seq.all_finite() {
        return Ok(None);
    }
    let finite = seq.finite_map();
    let mut ratios: Vec<(u64, f64)> = Vec::new();
    for k in 1..=seq.kmax {
        let i_k = dold_and_algebraic(k, &finite)?.i_k;
        let v = i_k.magnitude().to_f64().unwrap_or(f64::INFINITY);
        let scale = report.lambda.powi(k as i32);
        if !v.is_finite() || !scale.is_finite() {
            return Ok(None);
        }
        ratios.push((k, v / scale));
    }
    // smallest n0 from which every ratio is positive
    let n0 = match ratios.iter().rev().find(|(_, r)| *r == 0.0) {
        Some((k, _)) if *k == seq.kmax => return Ok(None),
        Some((k, _)) => k + 1,
        None => 1,
    };
    let tail: Vec<f64> = ratios
        .iter()
        .filter(|(k, _)| *k >= n0)
        .map(|(_, r)| *r)
        .collect();
    let min_ratio = tail.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(Some(EssentialBound {
        gamma: 2.0 * min_ratio,
        n0,
        checked_levels: tail.len() as u64,
    }))
}

/// Lower bound on the number of orbit classes with period ≤ k:
/// Σ_{m ≤ k} A_m ≥ (k − n0)/r with r the recurrence order and n0 minimal
/// over the window.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitBoundReport {
    /// minimal shift making the bound hold on every window level
    pub n0: u64,
    /// recurrence order r in the bound's denominator
    pub order: u64,
    /// cumulative orbit counts Σ_{m≤k} A_m per level (defined levels only)
    pub cumulative: Vec<(u64, BigRational)>,
}

pub fn orbit_lower_bound(seq: &SpectrumSeq, report: &ZetaReport) -> Result<OrbitBoundReport> {
    let finite = seq.finite_map();
    let r = report.order.max(1) as u64;
    let mut cumulative = Vec::new();
    let mut acc = BigRational::zero();
    let mut n0: u64 = 0;
    'levels: for k in 1..=seq.kmax {
        for d in divisors(k) {
            if !seq.value(d).is_finite() {
                continue 'levels;
            }
        }
        acc += dold_and_algebraic(k, &finite)?.a_k;
        cumulative.push((k, acc.clone()));
        // need k − n0 ≤ r·acc, i.e. n0 ≥ k − r·acc
        let bound = BigRational::from(BigInt::from(k)) - BigRational::from(BigInt::from(r)) * &acc;
        if bound.is_positive() {
            let need = bound.ceil().to_integer().to_u64().unwrap_or(u64::MAX);
            n0 = n0.max(need);
        }
    }
    Ok(OrbitBoundReport {
        n0,
        order: r,
        cumulative,
    })
}

/// Everything the asymptotic layer can say about one analyzed spec.
#[derive(Debug, Clone)]
pub struct AsymptoticReport {
    pub trichotomy: TrichotomyReport,
    pub r2: R2Report,
    pub parity: Vec<(u64, ParityOutcome)>,
    pub density: DensityReport,
    pub heights: HeightCorollaries,
    pub essential: Option<EssentialBound>,
    pub orbit_bound: OrbitBoundReport,
    /// Π max(1, |μ|) over the eigenvalues μ of the linear part — an upper
    /// bound for the growth rate, attained when 1 is not an eigenvalue
    pub entropy_bound: f64,
    /// whether 1 is an eigenvalue of the linear part (exact test)
    pub one_is_eigenvalue: bool,
    /// asymptotic count radius max(1, λ)
    pub r_infinity: f64,
}

/// Assemble the asymptotic report for an all-finite spectrum window.
pub fn analyze_asymptotics(
    spec: &crate::spectrum::EndoSpec,
    seq: &SpectrumSeq,
    report: &ZetaReport,
    prime_horizon: u64,
) -> Result<AsymptoticReport> {
    let trichotomy = classify_trichotomy(report);
    let r2 = r2_period(report)?;
    let parity = parity_check(seq, r2.period, seq.kmax)?;
    let density = density_estimates(seq, report, &trichotomy)?;
    let heights = height_corollaries(seq, report, &trichotomy, prime_horizon)?;
    let essential = essential_orbit_bound(seq, report)?;
    let orbit_bound = orbit_lower_bound(seq, report)?;

    // exact eigenvalue-1 test and the exterior-product growth bound
    let charpoly = spec.d_lin.charpoly()?;
    let at_one: BigRational = charpoly.iter().fold(BigRational::zero(), |acc, c| acc + c);
    let one_is_eigenvalue = at_one.is_zero();
    let cleared = crate::exactla::RatMatrix::clear_denominators(&charpoly);
    let mut entropy_bound = 1.0f64;
    for root in crate::zeta::certified_roots(&cleared, crate::zeta::ROOT_REL_TOL)? {
        let m = root.value.norm();
        if m > 1.0 {
            entropy_bound *= m;
        }
    }
    if report.lambda > entropy_bound * (1.0 + 1e-9) + 1e-9 {
        return Err(Error::AssertionViolated(format!(
            "growth rate {} exceeds the exterior eigenvalue bound {}",
            report.lambda, entropy_bound
        )));
    }

    Ok(AsymptoticReport {
        trichotomy,
        r2,
        parity,
        density,
        heights,
        essential,
        orbit_bound,
        entropy_bound,
        one_is_eigenvalue,
        r_infinity: report.lambda.max(1.0),
    })
}

/// Convenience: counts of levels by parity outcome, for report surfaces.
pub fn parity_summary(parity: &[(u64, ParityOutcome)]) -> BTreeMap<&'static str, u64> {
    let mut out = BTreeMap::new();
    for (_, o) in parity {
        let key = match o {
            ParityOutcome::Inapplicable { .. } => "inapplicable",
            ParityOutcome::Holds => "holds",
            ParityOutcome::Violated => "violated",
            ParityOutcome::Undefined => "undefined",
        };
        *out.entry(key).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::RatMatrix;
    use crate::spectrum::reidemeister_sequence;
    use crate::spectrum::EndoSpec;
    use crate::zeta::{analyze_counts, DEFAULT_GUARD};
    use num_traits::FromPrimitive;
    use num_traits::One;

    fn seq_of(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn z_spec(d: i64) -> EndoSpec {
        EndoSpec::new(
            1,
            vec![RatMatrix::identity(1)],
            None,
            RatMatrix::new(1, 1, vec![BigRational::from_i64(d).unwrap()]).unwrap(),
            vec![BigRational::zero()],
            None,
        )
        .unwrap()
        .0
    }

    fn fib_square() -> EndoSpec {
        EndoSpec::new(
            2,
            vec![RatMatrix::identity(2)],
            None,
            RatMatrix::new(
                2,
                2,
                [2i64, 1, 1, 1]
                    .iter()
                    .map(|&x| BigRational::from_i64(x).unwrap())
                    .collect(),
            )
            .unwrap(),
            vec![BigRational::zero(), BigRational::zero()],
            None,
        )
        .unwrap()
        .0
    }

    #[test]
    fn doubling_full_asymptotics() {
        let spec = z_spec(2);
        let seq = reidemeister_sequence(&spec, 15).unwrap();
        let window: Vec<BigInt> = seq.finite_map().values().cloned().collect();
        let zr = analyze_counts(&window, DEFAULT_GUARD, 64).unwrap();
        let rep = analyze_asymptotics(&spec, &seq, &zr, 40).unwrap();

        assert_eq!(rep.trichotomy.class, GrowthClass::Periodic { q: 1 });
        assert_eq!(rep.trichotomy.confidence, Confidence::Exact);
        assert_eq!(rep.r2.period, 1);
        // parity: every applicable odd level 3..15 must hold
        for (k, o) in &rep.parity {
            if *k >= 3 && *k % 2 == 1 {
                assert_eq!(*o, ParityOutcome::Holds, "level {k}");
            }
        }
        // every level carries new classes
        assert_eq!(rep.density.empirical, BigRational::one());
        assert_eq!(rep.density.theoretical_bound, Some(BigRational::one()));
        assert!(rep.heights.strictly_increasing);
        assert!(rep.heights.primes_certified.contains(&37));
        assert!(!rep.one_is_eigenvalue);
        assert!((rep.entropy_bound - 2.0).abs() < 1e-9);
        assert!((rep.r_infinity - 2.0).abs() < 1e-12);
        let ebd = rep.essential.unwrap();
        assert!(ebd.gamma > 0.0);
        assert_eq!(ebd.n0, 1);
        // Σ A_m grows like k here, so the shift stays 0 with order 2
        assert_eq!(rep.orbit_bound.n0, 0);
    }

    #[test]
    fn trace_difference_full_asymptotics() {
        let spec = fib_square();
        let seq = reidemeister_sequence(&spec, 15).unwrap();
        let window: Vec<BigInt> = seq.finite_map().values().cloned().collect();
        let zr = analyze_counts(&window, DEFAULT_GUARD, 64).unwrap();
        let rep = analyze_asymptotics(&spec, &seq, &zr, 40).unwrap();

        assert_eq!(rep.trichotomy.class, GrowthClass::Periodic { q: 1 });
        assert_eq!(rep.r2.period, 3);
        // α = 3: level 3 must be inapplicable (A_3 = 5 is odd), 5, 9, 15 hold
        let by_k: std::collections::HashMap<u64, &ParityOutcome> =
            rep.parity.iter().map(|(k, o)| (*k, o)).collect();
        assert!(matches!(by_k[&3], ParityOutcome::Inapplicable { .. }));
        assert_eq!(*by_k[&5], ParityOutcome::Holds);
        assert_eq!(*by_k[&9], ParityOutcome::Holds);
        assert_eq!(*by_k[&15], ParityOutcome::Holds);
        let phi2 = (3.0 + 5.0f64.sqrt()) / 2.0;
        assert!((rep.entropy_bound - phi2).abs() < 1e-9);
        assert!(!rep.one_is_eigenvalue);
    }

    #[test]
    fn alternating_period_two() {
        // counts 2^k − (−1)^k: dominant root 2 (positive real), but the
        // subdominant −1 keeps λ = 2 → periodic q = 1 exactly
        let spec = z_spec(-2);
        let seq = reidemeister_sequence(&spec, 12).unwrap();
        let window: Vec<BigInt> = seq.finite_map().values().cloned().collect();
        let zr = analyze_counts(&window, DEFAULT_GUARD, 64).unwrap();
        let t = classify_trichotomy(&zr);
        assert_eq!(t.class, GrowthClass::Periodic { q: 1 });
        assert_eq!(t.confidence, Confidence::Exact);
        let r2 = r2_period(&zr).unwrap();
        assert_eq!(r2.period, 1); // 2^k − (−1)^k is always odd
    }

    #[test]
    fn purely_imaginary_dominant_angles() {
        // r_k = 2^k + (−2)^k + 0·…: use (z−2)(z+2): window 0, 8, 0, 32, …
        // r_k = 2^k + (−2)^k: 0, 8, 0, 32, 0, 128 … all even; dominant roots
        // ±2 are real → periodic q = 2 exactly.
        let w = seq_of(&[0, 8, 0, 32, 0, 128, 0, 512, 0, 2048, 0, 8192]);
        let zr = analyze_counts(&w, DEFAULT_GUARD, 64).unwrap();
        let t = classify_trichotomy(&zr);
        assert_eq!(t.class, GrowthClass::Periodic { q: 2 });
        assert_eq!(t.confidence, Confidence::Exact);
    }

    #[test]
    fn rotation_angles_verified_periodic() {
        // r_k = (1+i)^k + (1−i)^k + 4^k: minimal poly (z²−2z+2)(z−4);
        // dominant root 4 real → Exact periodic q = 1
        let mut w = Vec::new();
        let mut a = num_complex::Complex64::new(1.0, 1.0).powi(0);
        for k in 1..=14 {
            a *= num_complex::Complex64::new(1.0, 1.0);
            let v = 2.0 * a.re + 4.0f64.powi(k);
            w.push(BigInt::from(v.round() as i64));
        }
        let zr = analyze_counts(&w, DEFAULT_GUARD, 64).unwrap();
        let t = classify_trichotomy(&zr);
        assert_eq!(t.class, GrowthClass::Periodic { q: 1 });
    }

    #[test]
    fn complex_dominant_rational_angle() {
        // r_k = (2i)^k + (−2i)^k = 2·2^k·cos(kπ/2): 0, −8, 0, 32, 0, −128 …
        // dominant roots ±2i: angle 1/4 and 3/4 → q = 4, window verified
        let w = seq_of(&[0, -8, 0, 32, 0, -128, 0, 512, 0, -2048, 0, 8192, 0, -32768]);
        let zr = analyze_counts(&w, DEFAULT_GUARD, 64).unwrap();
        let t = classify_trichotomy(&zr);
        assert_eq!(t.class, GrowthClass::Periodic { q: 4 });
        assert_eq!(t.confidence, Confidence::WindowVerified);
    }

    #[test]
    fn dense_profile_detected() {
        // r_k = p_k(z³ − z − 1): the plastic-number companion traces; the
        // dominant real root is unique BUT its two complex conjugates are
        // smaller — use a poly whose dominant roots are complex with
        // irrational angle: z² − 3z + 3 has roots (3 ± i√3)/2, angle
        // atan(√3/3)/2π = 1/12 — rational! Pick z² − 4z + 5: roots 2 ± i,
        // angle atan(1/2)/2π irrational.
        let f = crate::exactla::IntPoly::from_i64(&[5, -4, 1]);
        let sums = crate::zeta::power_sums(&f, 16).unwrap();
        let zr = analyze_counts(&sums, DEFAULT_GUARD, 64).unwrap();
        let t = classify_trichotomy(&zr);
        assert_eq!(t.class, GrowthClass::IntervalDense);
        assert_eq!(t.confidence, Confidence::Heuristic);
    }

    #[test]
    fn parity_alpha_one_on_glide() {
        // 6^k − 2^k ≡ 0 mod 2 → α = 1; all odd k ≥ 3 applicable and even
        let w = seq_of(&[
            4, 32, 208, 1280, 7744, 46592, 279808, 1679360, 10077184, 60465152,
        ]);
        let zr = analyze_counts(&w, DEFAULT_GUARD, 64).unwrap();
        let r2 = r2_period(&zr).unwrap();
        assert_eq!(r2.period, 1);
        assert_eq!(r2.lfsr_order, 0);
    }

    #[test]
    fn extension_matches_closed_form() {
        let w = seq_of(&[1, 3, 7, 15, 31]);
        let rec = crate::exactla::IntPoly::from_i64(&[2, -3, 1]);
        let ext = extend_counts(&w, &rec, 10).unwrap();
        let expect: Vec<BigInt> = (1..=10u32).map(|k| BigInt::from(2u64.pow(k) - 1)).collect();
        assert_eq!(ext, expect);
    }

    #[test]
    fn undefined_levels_partial_reports() {
        // d = −1: counts 2, ∞, 2, ∞, …: parity undefined on odd levels > 1?
        // no — odd levels have finite divisors only (1 and odd), so parity
        // there is defined; density counts the even levels as undefined.
        let spec = z_spec(-1);
        let seq = reidemeister_sequence(&spec, 8).unwrap();
        let parity = parity_check(&seq, 1, 8).unwrap();
        let by_k: std::collections::HashMap<u64, &ParityOutcome> =
            parity.iter().map(|(k, o)| (*k, o)).collect();
        // I_k = 0 for odd k ≥ 3 → A_k = 0 even → Holds
        assert_eq!(*by_k[&3], ParityOutcome::Holds);
        assert!(matches!(by_k[&2], ParityOutcome::Inapplicable { .. }));
    }

    #[test]
    fn orbit_bound_on_fixed_count() {
        // counts ≡ 1: A_1 = 1, A_k = 0 after; Σ A stalls at 1 while k grows,
        // so n0 = kmax − r·1 at the end of the window
        let spec = z_spec(0);
        let seq = reidemeister_sequence(&spec, 10).unwrap();
        let window: Vec<BigInt> = seq.finite_map().values().cloned().collect();
        let zr = analyze_counts(&window, DEFAULT_GUARD, 64).unwrap();
        let ob = orbit_lower_bound(&seq, &zr).unwrap();
        assert_eq!(ob.order, 1);
        assert_eq!(ob.n0, 9);
        let last = &ob.cumulative.last().unwrap().1;
        assert_eq!(*last, BigRational::one());
    }
}
