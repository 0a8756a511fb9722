//! Ready-made specs for tests, benchmarks, and the verification harness:
//! named small constructions with known count sequences, plus deterministic
//! seeded generators for random linear and crystallographic specs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::exactla::RatMatrix;
use crate::spectrum::EndoSpec;
use crate::Result;

fn rat(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

fn half() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(2))
}

fn rat_matrix(n: usize, entries: &[i64]) -> RatMatrix {
    RatMatrix::new(n, n, entries.iter().map(|&x| rat(x)).collect()).expect("square data")
}

/// Degree-d self-map of the circle group: rank 1, trivial holonomy,
/// linear part `[d]`. Counts are |d^k − 1| when d ≠ ±1.
pub fn z_endo(d: i64) -> EndoSpec {
    EndoSpec::new(
        1,
        vec![RatMatrix::identity(1)],
        Some(vec![vec![BigRational::zero()]]),
        rat_matrix(1, &[d]),
        vec![BigRational::zero()],
        Some(vec![0]),
    )
    .expect("valid by construction")
    .0
}

/// Torus self-map given by an integer matrix (row-major). Counts are
/// |det(I − M^k)| with 0 ↦ infinite.
pub fn torus(n: usize, entries: &[i64]) -> Result<EndoSpec> {
    let d_lin = RatMatrix::new(n, n, entries.iter().map(|&x| rat(x)).collect())?;
    Ok(EndoSpec::new(
        n,
        vec![RatMatrix::identity(n)],
        Some(vec![vec![BigRational::zero(); n]]),
        d_lin,
        vec![BigRational::zero(); n],
        Some(vec![0]),
    )?
    .0)
}

/// Klein-bottle self-map with diagonal linear part diag(p, q); p must be odd
/// for the glide relation to be respected. With p = 3, q = 2 the counts are
/// 6^k − 2^k.
pub fn klein_bottle(p: i64, q: i64) -> Result<EndoSpec> {
    let flip = rat_matrix(2, &[1, 0, 0, -1]);
    Ok(EndoSpec::new(
        2,
        vec![RatMatrix::identity(2), flip],
        Some(vec![
            vec![BigRational::zero(), BigRational::zero()],
            vec![half(), BigRational::zero()],
        ]),
        rat_matrix(2, &[p, 0, 0, q]),
        vec![BigRational::zero(), BigRational::zero()],
        Some(vec![0, 1]),
    )?
    .0)
}

/// Bare linear data with point group {±1} and rational linear part 1/2:
/// every count equals 1. Exercises the rational-linear-part path (no
/// concrete presentation attached).
pub fn rational_contraction() -> EndoSpec {
    EndoSpec::new(
        1,
        vec![RatMatrix::identity(1), rat_matrix(1, &[-1])],
        None,
        RatMatrix::new(1, 1, vec![half()]).expect("1x1"),
        vec![BigRational::zero()],
        Some(vec![0, 1]),
    )
    .expect("valid by construction")
    .0
}

/// SplitMix64: tiny, deterministic, seedable. Used so every randomized test
/// is reproducible from its seed alone.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform value in 0..n (n > 0), via rejection to avoid modulo bias.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % n;
            }
        }
    }

    /// Uniform integer in lo..=hi.
    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi);
        lo + self.below((hi - lo + 1) as u64) as i64
    }
}

/// Random bare linear data: rank ≤ 3, point group of order ≤ 4, integer
/// entries in [−3, 3]. All constructions satisfy the holonomy-compatibility
/// condition by design; the connecting map is supplied explicitly.
pub fn random_linear_spec(rng: &mut SplitMix64) -> EndoSpec {
    for _ in 0..32 {
        let family = rng.below(5);
        let candidate = match family {
            // trivial point group, any integer matrix
            0 => {
                let n = 1 + rng.below(3) as usize;
                let entries: Vec<i64> = (0..n * n).map(|_| rng.int_in(-3, 3)).collect();
                EndoSpec::new(
                    n,
                    vec![RatMatrix::identity(n)],
                    None,
                    RatMatrix::new(n, n, entries.iter().map(|&x| rat(x)).collect()).unwrap(),
                    vec![BigRational::zero(); n],
                    Some(vec![0]),
                )
            }
            // {I, −I}: every linear part commutes with the center
            1 => {
                let n = 1 + rng.below(3) as usize;
                let entries: Vec<i64> = (0..n * n).map(|_| rng.int_in(-3, 3)).collect();
                let neg: Vec<i64> = {
                    let mut m = vec![0i64; n * n];
                    for i in 0..n {
                        m[i * n + i] = -1;
                    }
                    m
                };
                EndoSpec::new(
                    n,
                    vec![RatMatrix::identity(n), rat_matrix(n, &neg)],
                    None,
                    RatMatrix::new(n, n, entries.iter().map(|&x| rat(x)).collect()).unwrap(),
                    vec![BigRational::zero(); n],
                    Some(vec![0, 1]),
                )
            }
            // order-4 rotation in rank 2 with a commuting linear part
            // a·I + b·R, connecting map the identity
            2 => {
                let (a, b) = (rng.int_in(-3, 3), rng.int_in(-3, 3));
                let r = rat_matrix(2, &[0, -1, 1, 0]);
                let r2 = rat_matrix(2, &[-1, 0, 0, -1]);
                let r3 = rat_matrix(2, &[0, 1, -1, 0]);
                EndoSpec::new(
                    2,
                    vec![RatMatrix::identity(2), r, r2, r3],
                    None,
                    rat_matrix(2, &[a, -b, b, a]),
                    vec![BigRational::zero(); 2],
                    Some(vec![0, 1, 2, 3]),
                )
            }
            // order-4 rotation with an anti-commuting linear part
            // [[a, b], [b, −a]]: D·R = R⁻¹·D, connecting map inverts
            3 => {
                let (a, b) = (rng.int_in(-3, 3), rng.int_in(-3, 3));
                let r = rat_matrix(2, &[0, -1, 1, 0]);
                let r2 = rat_matrix(2, &[-1, 0, 0, -1]);
                let r3 = rat_matrix(2, &[0, 1, -1, 0]);
                EndoSpec::new(
                    2,
                    vec![RatMatrix::identity(2), r, r2, r3],
                    None,
                    rat_matrix(2, &[a, b, b, -a]),
                    vec![BigRational::zero(); 2],
                    Some(vec![0, 3, 2, 1]),
                )
            }
            // coordinate swap in rank 2 with a symmetric circulant part
            _ => {
                let (a, b) = (rng.int_in(-3, 3), rng.int_in(-3, 3));
                EndoSpec::new(
                    2,
                    vec![RatMatrix::identity(2), rat_matrix(2, &[0, 1, 1, 0])],
                    None,
                    rat_matrix(2, &[a, b, b, a]),
                    vec![BigRational::zero(); 2],
                    Some(vec![0, 1]),
                )
            }
        };
        if let Ok((spec, _)) = candidate {
            return spec;
        }
    }
    z_endo(2)
}

/// Random concrete presentation suitable for class enumeration: rank ≤ 3,
/// integer data, torsion-free by construction. Linear parts are kept small
/// (signed permutations, nilpotents, or small diagonals) so low iterates
/// stay within enumeration budgets.
pub fn random_crystallographic_spec(rng: &mut SplitMix64) -> EndoSpec {
    for _ in 0..32 {
        let candidate = match rng.below(4) {
            // trivial holonomy, signed permutation linear part
            0 => {
                let n = 1 + rng.below(3) as usize;
                let d = signed_permutation(rng, n);
                EndoSpec::new(
                    n,
                    vec![RatMatrix::identity(n)],
                    Some(vec![vec![BigRational::zero(); n]]),
                    d,
                    (0..n).map(|_| rat(rng.int_in(-2, 2))).collect(),
                    Some(vec![0]),
                )
            }
            // trivial holonomy, small integer matrix (growth allowed)
            1 => {
                let n = 1 + rng.below(2) as usize;
                let entries: Vec<i64> = (0..n * n).map(|_| rng.int_in(-1, 1)).collect();
                EndoSpec::new(
                    n,
                    vec![RatMatrix::identity(n)],
                    Some(vec![vec![BigRational::zero(); n]]),
                    RatMatrix::new(n, n, entries.iter().map(|&x| rat(x)).collect()).unwrap(),
                    (0..n).map(|_| rat(rng.int_in(-2, 2))).collect(),
                    Some(vec![0]),
                )
            }
            // Klein-type flip in rank 2: diag(p, q) with p odd
            2 => {
                let p = 2 * rng.int_in(-1, 1) + 1;
                let q = rng.int_in(-2, 2);
                klein_bottle(p, q).map(|s| {
                    (
                        s,
                        crate::spectrum::ValidationReport {
                            warnings: Vec::new(),
                        },
                    )
                })
            }
            // rank-3 flip: diag(1, −1, ε) with glide (1/2, 0, 0), diagonal
            // linear part with odd leading entry
            _ => {
                let eps = if rng.below(2) == 0 { 1 } else { -1 };
                let d1 = 2 * rng.int_in(-1, 1) + 1;
                let d2 = rng.int_in(-2, 2);
                let d3 = rng.int_in(-2, 2);
                let flip = rat_matrix(3, &[1, 0, 0, 0, -1, 0, 0, 0, eps]);
                EndoSpec::new(
                    3,
                    vec![RatMatrix::identity(3), flip],
                    Some(vec![
                        vec![BigRational::zero(); 3],
                        vec![half(), BigRational::zero(), BigRational::zero()],
                    ]),
                    rat_matrix(3, &[d1, 0, 0, 0, d2, 0, 0, 0, d3]),
                    vec![BigRational::zero(); 3],
                    Some(vec![0, 1]),
                )
            }
        };
        if let Ok((spec, _)) = candidate {
            return spec;
        }
    }
    klein_bottle(3, 2).expect("fallback is valid")
}

/// Random signed permutation matrix: finite order, determinant ±1.
fn signed_permutation(rng: &mut SplitMix64, n: usize) -> RatMatrix {
    let mut perm: Vec<usize> = (0..n).collect();
    // Fisher–Yates
    for i in (1..n).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        perm.swap(i, j);
    }
    let mut entries = vec![BigRational::zero(); n * n];
    for (i, &p) in perm.iter().enumerate() {
        let sign = if rng.below(2) == 0 { 1 } else { -1 };
        entries[i * n + p] = rat(sign);
    }
    RatMatrix::new(n, n, entries).expect("square data")
}

/// A random affine conjugator compatible with a spec's holonomy: a section
/// element (b, B) with B in the point group and b an integer vector (plus
/// the section offset of B when the presentation has one).
pub fn random_conjugator(rng: &mut SplitMix64, spec: &EndoSpec) -> crate::classes::AffineElement {
    let idx = rng.below(spec.order() as u64) as usize;
    let mut translation: Vec<BigRational> =
        (0..spec.rank).map(|_| rat(rng.int_in(-2, 2))).collect();
    if let Some(parts) = &spec.affine {
        for (t, a) in translation.iter_mut().zip(&parts[idx]) {
            *t += a;
        }
    }
    crate::classes::AffineElement {
        holonomy_index: idx,
        translation,
    }
}
