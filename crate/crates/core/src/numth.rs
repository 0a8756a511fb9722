//! Number-theoretic layer: extended natural numbers (finite or infinite
//! counts), Möbius inversion of fixed-point-count sequences, Gauss-congruence
//! auditing, and deterministic primality / progression utilities.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::Error;
use crate::Result;

/// A count that is either a finite non-negative integer or infinite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtNat {
    Finite(BigInt),
    Infinite,
}

impl ExtNat {
    pub fn finite(v: impl Into<BigInt>) -> Self {
        let v = v.into();
        debug_assert!(!v.is_negative(), "finite counts are non-negative");
        ExtNat::Finite(v)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtNat::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&BigInt> {
        match self {
            ExtNat::Finite(v) => Some(v),
            ExtNat::Infinite => None,
        }
    }
}

impl PartialOrd for ExtNat {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtNat {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use ExtNat::*;
        match (self, other) {
            (Infinite, Infinite) => std::cmp::Ordering::Equal,
            (Infinite, Finite(_)) => std::cmp::Ordering::Greater,
            (Finite(_), Infinite) => std::cmp::Ordering::Less,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Finite(v) => write!(f, "{v}"),
            ExtNat::Infinite => write!(f, "inf"),
        }
    }
}

impl From<BigInt> for ExtNat {
    fn from(v: BigInt) -> Self {
        ExtNat::Finite(v)
    }
}

/// Möbius function μ(n); μ(1) = 1, 0 on non-squarefree n.
pub fn mobius(n: u64) -> i64 {
    assert!(n >= 1, "mobius needs n >= 1");
    let mut n = n;
    let mut mu = 1i64;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            mu = -mu;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Divisors of n, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors needs n >= 1");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Möbius-inverted count and its per-period average for one level k:
/// `i_k = Σ_{d|k} μ(k/d)·r(d)` and `a_k = i_k / k` as an exact rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationInvariants {
    pub k: u64,
    pub i_k: BigInt,
    pub a_k: BigRational,
    /// whether a_k is an integer (k | i_k)
    pub a_k_integral: bool,
}

/// Compute `i_k` and `a_k` from finite counts at every divisor level of k.
/// A missing divisor level is an error; an infinite level makes the
/// invariants undefined, which callers encode by omitting the level.
pub fn dold_and_algebraic(k: u64, r: &BTreeMap<u64, BigInt>) -> Result<IterationInvariants> {
    assert!(k >= 1);
    let mut i_k = BigInt::zero();
    for d in divisors(k) {
        let rd = r.get(&d).ok_or(Error::MissingDivisor { k: d })?;
        let mu = mobius(k / d);
        if mu != 0 {
            i_k += rd * BigInt::from(mu);
        }
    }
    let a_k = BigRational::new(i_k.clone(), BigInt::from(k));
    let a_k_integral = a_k.is_integer();
    Ok(IterationInvariants {
        k,
        i_k,
        a_k,
        a_k_integral,
    })
}

/// Outcome of auditing `i_k ≥ 0` and `k | i_k` across all levels with
/// finite data; levels with an infinite divisor level are reported as
/// undefined rather than checked.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GaussReport {
    /// (k, human-readable reason) for each violated level
    pub violations: Vec<(u64, String)>,
    /// levels whose invariants are undefined because a divisor level is infinite
    pub undefined: Vec<u64>,
}

impl GaussReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check the divisibility and positivity congruences on all levels 1..=kmax.
pub fn gauss_congruence_check(values: &BTreeMap<u64, ExtNat>, kmax: u64) -> Result<GaussReport> {
    let mut report = GaussReport::default();
    let mut finite: BTreeMap<u64, BigInt> = BTreeMap::new();
    for (k, v) in values.iter() {
        if let ExtNat::Finite(x) = v {
            finite.insert(*k, x.clone());
        }
    }
    'levels: for k in 1..=kmax {
        for d in divisors(k) {
            match values.get(&d) {
                None => return Err(Error::MissingDivisor { k: d }),
                Some(ExtNat::Infinite) => {
                    report.undefined.push(k);
                    continue 'levels;
                }
                Some(ExtNat::Finite(_)) => {}
            }
        }
        let inv = dold_and_algebraic(k, &finite)?;
        if inv.i_k.is_negative() {
            report
                .violations
                .push((k, format!("negative Möbius-inverted count {}", inv.i_k)));
        } else if !inv.a_k_integral {
            report
                .violations
                .push((k, format!("{} not divisible by {}", inv.i_k, k)));
        }
    }
    Ok(report)
}

/// Deterministic Miller–Rabin over u64 (complete witness set).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod_u64(r, a, m);
        }
        a = mul_mod_u64(a, a, m);
        e >>= 1;
    }
    r
}

/// First `count` primes p ≡ a (mod q), ascending.
pub fn primes_in_progression(a: u64, q: u64, count: usize) -> Vec<u64> {
    assert!(q >= 1);
    let mut out = Vec::with_capacity(count);
    let mut n = 2u64;
    while out.len() < count {
        if n % q == a % q && is_prime(n) {
            out.push(n);
        }
        n += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mobius_small_values() {
        let expect = [1i64, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0];
        for (i, &m) in expect.iter().enumerate() {
            assert_eq!(mobius(i as u64 + 1), m, "mu({})", i + 1);
        }
    }

    #[test]
    fn divisors_ascending() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(36), vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);
        assert_eq!(divisors(13), vec![1, 13]);
    }

    #[test]
    fn mobius_inversion_doubling_counts() {
        // r(k) = 2^k - 1: exact per-level counts 1, 2, 6, 12, 30, 54 and
        // averages 1, 1, 2, 3, 6, 9 for k = 1..6.
        let mut r = BTreeMap::new();
        for k in 1u64..=6 {
            r.insert(k, BigInt::from((1u64 << k) - 1));
        }
        let i_expect = [1i64, 2, 6, 12, 30, 54];
        let a_expect = [1i64, 1, 2, 3, 6, 9];
        for k in 1u64..=6 {
            let inv = dold_and_algebraic(k, &r).unwrap();
            assert_eq!(inv.i_k, BigInt::from(i_expect[k as usize - 1]));
            assert!(inv.a_k_integral);
            assert_eq!(
                inv.a_k,
                BigRational::from(BigInt::from(a_expect[k as usize - 1]))
            );
        }
    }

    #[test]
    fn missing_divisor_detected() {
        let mut r = BTreeMap::new();
        r.insert(2u64, BigInt::from(3));
        assert_eq!(
            dold_and_algebraic(2, &r).unwrap_err(),
            Error::MissingDivisor { k: 1 }
        );
    }

    #[test]
    fn gauss_check_flags_violation_and_undefined() {
        let mut vals = BTreeMap::new();
        vals.insert(1u64, ExtNat::finite(1));
        vals.insert(2u64, ExtNat::finite(2)); // i_2 = 1, not divisible by 2
        vals.insert(3u64, ExtNat::Infinite);
        vals.insert(4u64, ExtNat::finite(7)); // i_4 = 5, not divisible by 4
        let rep = gauss_congruence_check(&vals, 4).unwrap();
        assert!(!rep.holds());
        assert_eq!(
            rep.violations.iter().map(|v| v.0).collect::<Vec<_>>(),
            vec![2, 4]
        );
        assert_eq!(rep.undefined, vec![3]);
    }

    #[test]
    fn gauss_check_passes_on_power_counts() {
        // r(k) = 3^k satisfies the congruences (counts of period-k points
        // of the full 3-shift), with i_k the periodic-orbit multiples.
        let mut vals = BTreeMap::new();
        let mut pw = BigInt::from(1);
        for k in 1u64..=12 {
            pw *= 3;
            vals.insert(k, ExtNat::Finite(pw.clone()));
        }
        assert!(gauss_congruence_check(&vals, 12).unwrap().holds());
    }

    #[test]
    fn primality_edge_cases() {
        assert!(is_prime(2));
        assert!(is_prime(3));
        assert!(!is_prime(1));
        assert!(!is_prime(0));
        assert!(is_prime(2_305_843_009_213_693_951)); // 2^61 - 1
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to 2,3,5,7
        assert!(!is_prime(25326001));
    }

    #[test]
    fn progression_primes() {
        assert_eq!(primes_in_progression(1, 4, 5), vec![5, 13, 17, 29, 37]);
        assert_eq!(primes_in_progression(2, 3, 4), vec![2, 5, 11, 17]);
    }
}
