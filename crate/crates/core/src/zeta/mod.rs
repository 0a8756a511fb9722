//! Exact reconstruction of the generating function of a twisted fixed-point
//! count sequence. From a finite window the minimal monic integer recurrence
//! is found, its characteristic polynomial is factored into irreducibles,
//! and each irreducible block's integer multiplicity (residue) is solved for
//! through Newton power sums. The sequence is then exactly
//! `r_k = Σ_α ρ_α · (power sum of the roots of f_α at exponent k)`, the
//! generating function `exp(Σ r_k z^k / k)` is the rational function
//! `Π rev(f_α)^{−ρ_α}`, and a pair of integer companion-block matrices
//! realizes the window as a difference of traces.

mod recurrence;
mod roots;

pub use recurrence::{find_min_recurrence, MinimalRecurrence, DEFAULT_GUARD};
pub use roots::{certified_roots, dominant_modulus, CertifiedRoot, ROOT_REL_TOL};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::exactla::{factor_int_poly, IntMatrix, IntPoly, RatMatrix};
use crate::Result;

/// One irreducible block of the sequence: an irreducible monic factor of the
/// minimal recurrence polynomial together with its integer multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralComponent {
    pub factor: IntPoly,
    pub rho: BigInt,
}

/// The sequence written over the roots of its minimal recurrence:
/// `r_k = Σ_α rho_α · p_k(factor_α)` with `p_k` the root power sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralDecomposition {
    pub minimal_poly: IntPoly,
    pub components: Vec<SpectralComponent>,
}

impl SpectralDecomposition {
    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Net signed degree Σ rho_α · deg f_α.
    pub fn net_degree(&self) -> BigInt {
        let mut acc = BigInt::zero();
        for c in &self.components {
            acc += &c.rho * BigInt::from(c.factor.degree().unwrap_or(0) as u64);
        }
        acc
    }
}

/// Power sums p_1..p_m of the roots of a monic integer polynomial, by
/// Newton's identities (exact integers).
pub fn power_sums(f: &IntPoly, m: usize) -> Result<Vec<BigInt>> {
    let g = f.degree().ok_or(Error::ZeroPolynomial)?;
    if !f.is_monic() {
        return Err(Error::InvalidArgument(
            "power sums need a monic polynomial".into(),
        ));
    }
    // e_i = (−1)^i · coeff(g − i)
    let e: Vec<BigInt> = (1..=g)
        .map(|i| {
            let c = f.coeff(g - i).clone();
            if i % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect();
    let mut p: Vec<BigInt> = Vec::with_capacity(m);
    for k in 1..=m {
        let mut acc = BigInt::zero();
        let upper = k.min(g);
        for i in 1..upper.min(k) {
            let term = &e[i - 1] * &p[k - 1 - i];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        if k <= g {
            // trailing term (−1)^{k−1} · k · e_k
            let term = &e[k - 1] * BigInt::from(k as u64);
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        } else {
            // k > g: the sum above must also include i = g
            let term = &e[g - 1] * &p[k - 1 - g];
            if g % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        p.push(acc);
    }
    Ok(p)
}

/// Decompose a finite window into irreducible blocks with integer residues.
pub fn spectral_decomposition(
    seq: &[BigInt],
    guard: usize,
    degree_cap: usize,
) -> Result<SpectralDecomposition> {
    let rec = find_min_recurrence(seq, guard)?;
    if rec.order == 0 {
        return Ok(SpectralDecomposition {
            minimal_poly: IntPoly::one(),
            components: Vec::new(),
        });
    }
    let fac = factor_int_poly(&rec.poly, degree_cap)?;
    debug_assert!(fac.content.is_one(), "monic input has unit content");
    let mut factors = Vec::with_capacity(fac.factors.len());
    for (f, mult) in fac.factors {
        if mult > 1 {
            return Err(Error::RepeatedFactor {
                factor: format!("{f:?}"),
            });
        }
        if f.constant_term().is_zero() {
            return Err(Error::Decomposition(
                "minimal recurrence has a zero root (transient behavior); the window is not a pure \
                 exponential sum"
                    .into(),
            ));
        }
        factors.push(f);
    }

    // solve  seq[k] = Σ_α rho_α · p^{(α)}_{k+1}  over the whole window
    let l = seq.len();
    let m = factors.len();
    let sums: Vec<Vec<BigInt>> = factors
        .iter()
        .map(|f| power_sums(f, l))
        .collect::<Result<Vec<_>>>()?;
    let mut data = Vec::with_capacity(l * m);
    for k in 0..l {
        for s in &sums {
            data.push(BigRational::from(s[k].clone()));
        }
    }
    let a = RatMatrix::new(l, m, data)?;
    let rhs: Vec<BigRational> = seq.iter().map(|x| BigRational::from(x.clone())).collect();
    let rho = a.solve_consistent(&rhs).ok_or_else(|| {
        Error::Decomposition("window is inconsistent with its own recurrence factors".into())
    })?;
    let mut components = Vec::with_capacity(m);
    for (f, r) in factors.into_iter().zip(rho) {
        if !r.is_integer() {
            return Err(Error::Decomposition(format!(
                "block multiplicity {r} is not an integer"
            )));
        }
        let r = r.to_integer();
        if r.is_zero() {
            return Err(Error::Decomposition(
                "a minimal-recurrence factor carries multiplicity zero".into(),
            ));
        }
        components.push(SpectralComponent { factor: f, rho: r });
    }
    Ok(SpectralDecomposition {
        minimal_poly: rec.poly,
        components,
    })
}

/// The generating function as a reduced pair of integer polynomials with
/// constant term one: `Π_{ρ<0} rev(f)^[−ρ] / Π_{ρ>0} rev(f)^ρ` — reversal
/// turns monic `Π (z − λ)` into `Π (1 − λz)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReidZeta {
    pub numerator: IntPoly,
    pub denominator: IntPoly,
}

pub fn zeta_rational(dec: &SpectralDecomposition) -> Result<ReidZeta> {
    let mut num = IntPoly::one();
    let mut den = IntPoly::one();
    for c in &dec.components {
        let e = c
            .rho
            .abs()
            .to_u32()
            .ok_or_else(|| Error::Decomposition("block multiplicity too large".into()))?;
        let rev = c.factor.reverse().pow(e);
        if c.rho.is_negative() {
            num = num.mul(&rev);
        } else {
            den = den.mul(&rev);
        }
    }
    Ok(ReidZeta {
        numerator: num,
        denominator: den,
    })
}

/// Two integer matrices realizing the window as tr M₊^k − tr M₋^k:
/// companion blocks of each factor, repeated |rho| times on the side of the
/// multiplicity's sign.
pub fn companion_pair(dec: &SpectralDecomposition) -> Result<(IntMatrix, IntMatrix)> {
    let mut plus: Vec<IntMatrix> = Vec::new();
    let mut minus: Vec<IntMatrix> = Vec::new();
    for c in &dec.components {
        let block = IntMatrix::companion(&c.factor)?;
        let copies = c
            .rho
            .abs()
            .to_u64()
            .ok_or_else(|| Error::Decomposition("block multiplicity too large".into()))?;
        for _ in 0..copies {
            if c.rho.is_negative() {
                minus.push(block.clone());
            } else {
                plus.push(block.clone());
            }
        }
    }
    let plus_refs: Vec<&IntMatrix> = plus.iter().collect();
    let minus_refs: Vec<&IntMatrix> = minus.iter().collect();
    Ok((
        IntMatrix::direct_sum(&plus_refs)?,
        IntMatrix::direct_sum(&minus_refs)?,
    ))
}

/// tr M₊^k − tr M₋^k for k = 1..=kmax.
pub fn trace_counts(m_plus: &IntMatrix, m_minus: &IntMatrix, kmax: u64) -> Result<Vec<BigInt>> {
    let mut out = Vec::with_capacity(kmax as usize);
    let mut pp = IntMatrix::identity(m_plus.rows());
    let mut pm = IntMatrix::identity(m_minus.rows());
    for _ in 1..=kmax {
        pp = pp.mul(m_plus)?;
        pm = pm.mul(m_minus)?;
        out.push(pp.trace()? - pm.trace()?);
    }
    Ok(out)
}

/// Power-series coefficients c_0..c_terms of `exp(Σ_{k≥1} s_k z^k / k)`.
pub fn series_from_counts(counts: &[BigInt], terms: usize) -> Vec<BigRational> {
    let mut c = Vec::with_capacity(terms + 1);
    c.push(BigRational::one());
    for m in 1..=terms.min(counts.len()) {
        let mut acc = BigRational::zero();
        for j in 1..=m {
            acc += BigRational::from(counts[j - 1].clone()) * &c[m - j];
        }
        c.push(acc / BigRational::from(BigInt::from(m as u64)));
    }
    c
}

/// Power-series coefficients c_0..c_terms of num/den (den(0) must be 1).
pub fn series_from_rational(
    num: &IntPoly,
    den: &IntPoly,
    terms: usize,
) -> Result<Vec<BigRational>> {
    if !den.constant_term().is_one() {
        return Err(Error::InvalidArgument(
            "series expansion needs denominator with constant term 1".into(),
        ));
    }
    let mut out: Vec<BigRational> = Vec::with_capacity(terms + 1);
    for m in 0..=terms {
        let mut acc = BigRational::from(num.coeff(m).clone());
        for i in 1..=m {
            let d = den.coeff(i);
            if !d.is_zero() {
                acc -= BigRational::from(d.clone()) * &out[m - i];
            }
        }
        out.push(acc);
    }
    Ok(out)
}

/// Full exact analysis of a finite count window.
#[derive(Debug, Clone)]
pub struct ZetaReport {
    /// the analyzed window r_1..r_L
    pub window: Vec<BigInt>,
    pub decomposition: SpectralDecomposition,
    pub zeta: ReidZeta,
    /// certified roots of the minimal recurrence polynomial
    pub roots: Vec<CertifiedRoot>,
    /// growth rate: largest root modulus (0 for the empty decomposition)
    pub lambda: f64,
    /// number of dominant roots, weighted by block multiplicity |rho|
    pub dominant_count: u64,
    /// net signed degree Σ rho_α·deg f_α
    pub net_degree: BigInt,
    /// max(deg numerator, deg denominator) of the generating function
    pub degree_max: u64,
    /// order of the minimal recurrence
    pub order: usize,
}

/// Analyze a window of finite counts end to end, verifying on the way that
/// the companion-trace realization reproduces the window exactly.
pub fn analyze_counts(seq: &[BigInt], guard: usize, degree_cap: usize) -> Result<ZetaReport> {
    let decomposition = spectral_decomposition(seq, guard, degree_cap)?;
    let zeta = zeta_rational(&decomposition)?;
    let (m_plus, m_minus) = companion_pair(&decomposition)?;
    let realized = trace_counts(&m_plus, &m_minus, seq.len() as u64)?;
    if realized != seq {
        return Err(Error::AssertionViolated(
            "companion-trace realization disagrees with the window".into(),
        ));
    }

    let mut roots = Vec::new();
    let mut lambda = 0.0f64;
    let mut per_root: Vec<(f64, f64, u64)> = Vec::new(); // (modulus, radius, weight)
    for c in &decomposition.components {
        let weight = c.rho.abs().to_u64().unwrap_or(u64::MAX);
        let rs = certified_roots(&c.factor, ROOT_REL_TOL)?;
        for r in &rs {
            let m = r.value.norm();
            if m > lambda {
                lambda = m;
            }
            per_root.push((m, r.radius, weight));
        }
        roots.extend(rs);
    }
    if !decomposition.is_empty() && lambda < 1.0 - 1e-9 {
        return Err(Error::AssertionViolated(format!(
            "growth rate {lambda} below 1 for a nonempty decomposition"
        )));
    }
    let dominant_count: u64 = per_root
        .iter()
        .filter(|(m, rad, _)| m + rad >= lambda - rad - 1e-9 * lambda.max(1.0))
        .map(|(_, _, w)| w)
        .sum();

    let degree_max = zeta
        .numerator
        .degree()
        .unwrap_or(0)
        .max(zeta.denominator.degree().unwrap_or(0)) as u64;
    Ok(ZetaReport {
        window: seq.to_vec(),
        net_degree: decomposition.net_degree(),
        order: decomposition.minimal_poly.degree().unwrap_or(0),
        decomposition,
        zeta,
        roots,
        lambda,
        dominant_count,
        degree_max,
    })
}

/// Exact round trip: the series of the reconstructed rational function must
/// match the series built directly from the counts, term by term.
pub fn verify_series_roundtrip(report: &ZetaReport) -> Result<()> {
    let terms = report.window.len();
    let direct = series_from_counts(&report.window, terms);
    let rational = series_from_rational(&report.zeta.numerator, &report.zeta.denominator, terms)?;
    if direct != rational {
        return Err(Error::AssertionViolated(
            "generating-function series disagrees with the count series".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn p(coeffs: &[i64]) -> IntPoly {
        IntPoly::from_i64(coeffs)
    }

    #[test]
    fn newton_power_sums() {
        // z² − 3z + 1: p = 3, 7, 18, 47, 123
        let f = p(&[1, -3, 1]);
        let sums = power_sums(&f, 5).unwrap();
        let expect: Vec<BigInt> = seq(&[3, 7, 18, 47, 123]);
        assert_eq!(sums, expect);

        // z − 2: p_k = 2^k
        let f = p(&[-2, 1]);
        assert_eq!(power_sums(&f, 4).unwrap(), seq(&[2, 4, 8, 16]));

        // z³ − 4z² + 4z − 1: roots 1, (3±√5)/2, so p_k = 1 + L_{2k} (Lucas)
        let f = p(&[-1, 4, -4, 1]);
        assert_eq!(power_sums(&f, 6).unwrap(), seq(&[4, 8, 19, 48, 124, 323]));
    }

    #[test]
    fn doubling_analysis() {
        let s = seq(&[1, 3, 7, 15, 31, 63, 127, 255, 511, 1023, 2047, 4095]);
        let rep = analyze_counts(&s, DEFAULT_GUARD, 64).unwrap();
        assert_eq!(rep.decomposition.minimal_poly, p(&[2, -3, 1]));
        assert_eq!(
            rep.decomposition.components,
            vec![
                SpectralComponent {
                    factor: p(&[-2, 1]),
                    rho: BigInt::from(1)
                },
                SpectralComponent {
                    factor: p(&[-1, 1]),
                    rho: BigInt::from(-1)
                },
            ]
        );
        assert_eq!(rep.zeta.numerator, p(&[1, -1]));
        assert_eq!(rep.zeta.denominator, p(&[1, -2]));
        assert!((rep.lambda - 2.0).abs() < 1e-10);
        assert_eq!(rep.dominant_count, 1);
        assert_eq!(rep.net_degree, BigInt::zero());
        assert_eq!(rep.degree_max, 1);
        assert_eq!(rep.order, 2);
        verify_series_roundtrip(&rep).unwrap();
    }

    #[test]
    fn trace_difference_analysis() {
        // tr(D^k) − 2 for D = [[2,1],[1,1]]
        let s = seq(&[
            1, 5, 16, 45, 121, 320, 841, 2205, 5776, 15125, 39601, 103680,
        ]);
        let rep = analyze_counts(&s, DEFAULT_GUARD, 64).unwrap();
        assert_eq!(rep.decomposition.minimal_poly, p(&[-1, 4, -4, 1]));
        assert_eq!(
            rep.decomposition.components,
            vec![
                SpectralComponent {
                    factor: p(&[-1, 1]),
                    rho: BigInt::from(-2)
                },
                SpectralComponent {
                    factor: p(&[1, -3, 1]),
                    rho: BigInt::from(1)
                },
            ]
        );
        assert_eq!(rep.zeta.numerator, p(&[1, -2, 1])); // (1 − z)²
        assert_eq!(rep.zeta.denominator, p(&[1, -3, 1]));
        let phi2 = (3.0 + 5.0f64.sqrt()) / 2.0;
        assert!((rep.lambda - phi2).abs() < 1e-10);
        assert_eq!(rep.dominant_count, 1);
        assert_eq!(rep.net_degree, BigInt::zero());
        assert_eq!(rep.degree_max, 2);
        verify_series_roundtrip(&rep).unwrap();
    }

    #[test]
    fn alternating_analysis() {
        // 2^k − (−1)^k
        let s = seq(&[3, 3, 9, 15, 33, 63, 129, 255, 513, 1023]);
        let rep = analyze_counts(&s, DEFAULT_GUARD, 64).unwrap();
        assert_eq!(rep.zeta.numerator, p(&[1, 1]));
        assert_eq!(rep.zeta.denominator, p(&[1, -2]));
        verify_series_roundtrip(&rep).unwrap();
    }

    #[test]
    fn glide_analysis() {
        // 6^k − 2^k
        let s = seq(&[
            4, 32, 208, 1280, 7744, 46592, 279808, 1679360, 10077184, 60465152,
        ]);
        let rep = analyze_counts(&s, DEFAULT_GUARD, 64).unwrap();
        assert_eq!(rep.decomposition.minimal_poly, p(&[12, -8, 1]));
        assert_eq!(rep.zeta.numerator, p(&[1, -2]));
        assert_eq!(rep.zeta.denominator, p(&[1, -6]));
        assert!((rep.lambda - 6.0).abs() < 1e-9);
        verify_series_roundtrip(&rep).unwrap();
    }

    #[test]
    fn constant_analysis() {
        let s = seq(&[1, 1, 1, 1, 1, 1, 1, 1]);
        let rep = analyze_counts(&s, DEFAULT_GUARD, 64).unwrap();
        assert_eq!(rep.zeta.numerator, IntPoly::one());
        assert_eq!(rep.zeta.denominator, p(&[1, -1]));
        assert!((rep.lambda - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_window_analysis() {
        let s = seq(&[0, 0, 0, 0, 0, 0]);
        let rep = analyze_counts(&s, DEFAULT_GUARD, 64).unwrap();
        assert!(rep.decomposition.is_empty());
        assert!(rep.zeta.numerator.is_one() && rep.zeta.denominator.is_one());
        assert_eq!(rep.lambda, 0.0);
        assert_eq!(rep.dominant_count, 0);
    }

    #[test]
    fn repeated_factor_rejected() {
        // k·2^k satisfies (z − 2)²
        let s = seq(&[2, 8, 24, 64, 160, 384, 896, 2048, 4608, 10240]);
        assert!(matches!(
            spectral_decomposition(&s, DEFAULT_GUARD, 64),
            Err(Error::RepeatedFactor { .. })
        ));
    }

    #[test]
    fn transient_rejected() {
        // 5, 1, 1, 1, …: annihilator z² − z has the root 0
        let s = seq(&[5, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1]);
        assert!(matches!(
            spectral_decomposition(&s, DEFAULT_GUARD, 64),
            Err(Error::Decomposition(_))
        ));
    }

    #[test]
    fn fractional_multiplicity_rejected() {
        // (3^k + 1)/2 has monic integer annihilator but residues 1/2
        let s = seq(&[2, 5, 14, 41, 122, 365, 1094, 3281, 9842, 29525]);
        assert!(matches!(
            spectral_decomposition(&s, DEFAULT_GUARD, 64),
            Err(Error::Decomposition(_))
        ));
    }

    #[test]
    fn trace_identity_matches_by_construction() {
        let s = seq(&[
            1, 5, 16, 45, 121, 320, 841, 2205, 5776, 15125, 39601, 103680,
        ]);
        let dec = spectral_decomposition(&s, DEFAULT_GUARD, 64).unwrap();
        let (mp, mm) = companion_pair(&dec).unwrap();
        assert_eq!(mp.rows(), 2); // one copy of the quadratic block
        assert_eq!(mm.rows(), 2); // two copies of (z − 1)
        assert_eq!(trace_counts(&mp, &mm, 12).unwrap(), s);
    }

    #[test]
    fn series_helpers_agree_on_geometric() {
        // counts 2^k: series of 1/(1 − 2z) ... exp(Σ 2^k z^k / k) = 1/(1−2z)
        let counts = seq(&[2, 4, 8, 16, 32, 64]);
        let direct = series_from_counts(&counts, 6);
        let rational = series_from_rational(&IntPoly::one(), &p(&[1, -2]), 6).unwrap();
        assert_eq!(direct, rational);
    }
}
