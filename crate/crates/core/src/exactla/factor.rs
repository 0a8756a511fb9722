//! Exact factorization of integer polynomials into irreducibles over Z:
//! squarefree split (Yun), modular factorization at a good odd prime,
//! linear multifactor Hensel lifting past a Landau–Mignotte-style coefficient
//! bound, and deterministic subset recombination.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::modp::{factor_squarefree_monic_modp, inv_mod, PolyP};
use super::poly::IntPoly;
use crate::error::Error;
use crate::Result;

/// Default degree cap for charpoly-sized inputs; guards the 2^r recombination.
pub const DEFAULT_DEGREE_CAP: usize = 64;

/// Complete factorization over Z: `content * prod factors[i].0 ^ factors[i].1`
/// with each factor primitive, irreducible, positive leading coefficient, and
/// the list sorted by (degree, coefficients) for deterministic output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyFactorization {
    pub content: BigInt,
    pub factors: Vec<(IntPoly, u32)>,
}

impl PolyFactorization {
    pub fn reconstruct(&self) -> IntPoly {
        let mut acc = IntPoly::from_coeffs(vec![self.content.clone()]);
        for (f, m) in &self.factors {
            acc = acc.mul(&f.pow(*m));
        }
        acc
    }
}

/// Factor a nonzero integer polynomial into irreducibles over Z.
pub fn factor_int_poly(f: &IntPoly, degree_cap: usize) -> Result<PolyFactorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let deg = f.degree().unwrap_or(0);
    if deg > degree_cap {
        return Err(Error::DegreeCapExceeded {
            cap: degree_cap,
            got: deg,
        });
    }
    let (content, squarefree_parts) = f.squarefree_decomposition()?;
    let mut factors: Vec<(IntPoly, u32)> = Vec::new();
    for (part, mult) in squarefree_parts {
        for irr in factor_squarefree(&part)? {
            factors.push((irr, mult));
        }
    }
    factors
        .sort_by(|a, b| (a.0.degree(), a.0.coeffs(), a.1).cmp(&(b.0.degree(), b.0.coeffs(), b.1)));
    Ok(PolyFactorization { content, factors })
}

/// Factor a primitive squarefree polynomial with positive leading coefficient.
fn factor_squarefree(g: &IntPoly) -> Result<Vec<IntPoly>> {
    let deg = match g.degree() {
        None | Some(0) => return Ok(Vec::new()),
        Some(d) => d,
    };
    if deg == 1 {
        return Ok(vec![g.clone()]);
    }

    // Choose, among the first few usable odd primes, the one giving the
    // fewest modular factors (deterministic tie-break: smallest prime).
    let lc = g.leading().expect("nonzero").clone();
    let mut best: Option<(u64, Vec<PolyP>)> = None;
    let mut tried = 0u32;
    let mut p = 3u64;
    while tried < 5 {
        if prime_usable(g, p) {
            tried += 1;
            let gp = PolyP::from_int_poly(g, p).monic();
            let parts = factor_squarefree_monic_modp(&gp);
            if parts.len() == 1 {
                return Ok(vec![g.clone()]);
            }
            let better = match &best {
                None => true,
                Some((_, cur)) => parts.len() < cur.len(),
            };
            if better {
                best = Some((p, parts));
            }
        }
        p = next_prime(p);
    }
    let (p, modular) = best.expect("at least one usable prime among the first five");
    if modular.len() > 26 {
        return Err(Error::InvalidArgument(format!(
            "too many modular factors ({}) for subset recombination",
            modular.len()
        )));
    }

    // Lift the modular factorization past twice the factor-coefficient bound.
    let bound = coefficient_bound(g);
    let target: BigInt = bound * 2;
    let (modulus, lifted) = hensel_lift(g, p, &modular, &target);

    Ok(recombine(g.clone(), lifted, &modulus, &lc))
}

/// p is usable when it keeps the degree (p ∤ lc) and g stays squarefree mod p.
fn prime_usable(g: &IntPoly, p: u64) -> bool {
    let pm = BigInt::from(p);
    if (g.leading().expect("nonzero") % &pm).is_zero() {
        return false;
    }
    let gp = PolyP::from_int_poly(g, p);
    let dp = gp.derivative();
    if dp.is_zero() {
        return false;
    }
    gp.gcd(&dp).deg() == Some(0)
}

fn next_prime(p: u64) -> u64 {
    let mut q = p + 2;
    while !is_prime_u64(q) {
        q += 2;
    }
    q
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Upper bound on |coeff| of any factor of g over Z, times |lc(g)|:
/// (floor(sqrt(n+1)) + 1) * 2^n * max|coeff(g)| * |lc(g)|.
fn coefficient_bound(g: &IntPoly) -> BigInt {
    let n = g.degree().unwrap_or(0);
    let root = BigInt::from(isqrt_u64(n as u64 + 1) + 1);
    let two_n = BigInt::one() << n;
    let height = g.height();
    let lc = g.leading().expect("nonzero").abs();
    root * two_n * height * lc
}

fn isqrt_u64(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = n;
    let mut y = x.div_ceil(2);
    while y < x {
        x = y;
        y = (x + n / x) / 2;
    }
    x
}

/// Linear multifactor Hensel lifting. Input: g ≡ lc(g)·∏ modular[i] (mod p)
/// with the modular factors monic and pairwise coprime. Output: (p^K, lifts)
/// with p^K > target, g ≡ lc(g)·∏ lifts[i] (mod p^K), lifts monic over Z with
/// coefficients in [0, p^K).
fn hensel_lift(g: &IntPoly, p: u64, modular: &[PolyP], target: &BigInt) -> (BigInt, Vec<IntPoly>) {
    let pm = BigInt::from(p);
    // Fixed mod-p Bezout data: s_i * ∏_{j≠i} g_j ≡ 1 (mod g_i), folded with
    // 1/lc so each correction step is a single product-and-reduce.
    let inv_lc = inv_mod(
        u64::try_from(&((g.leading().expect("nonzero") % &pm + &pm) % &pm))
            .expect("residue fits u64"),
        p,
    );
    let mut bezout: Vec<PolyP> = Vec::with_capacity(modular.len());
    for (i, gi) in modular.iter().enumerate() {
        let mut u = PolyP::one(p);
        for (j, gj) in modular.iter().enumerate() {
            if j != i {
                u = u.mul(gj).rem(gi);
            }
        }
        let (one, s, _t) = u.ext_gcd(gi);
        debug_assert!(one.deg() == Some(0), "modular factors must be coprime");
        bezout.push(s.rem(gi).scalar_mul(inv_lc));
    }

    let lc = g.leading().expect("nonzero").clone();
    let mut modulus = pm.clone();
    let mut lifts: Vec<IntPoly> = modular.iter().map(poly_p_to_int).collect();
    while modulus <= *target {
        let mut prod = IntPoly::from_coeffs(vec![lc.clone()]);
        for l in &lifts {
            prod = prod.mul(l);
        }
        let err = g.sub(&prod);
        if err.is_zero() {
            // exact factorization already; keep lifting the modulus only
            modulus *= &pm;
            continue;
        }
        // err ≡ 0 (mod modulus); reduce err/modulus mod p
        let err_over: Vec<u64> = err
            .coeffs()
            .iter()
            .map(|c| {
                debug_assert!((c % &modulus).is_zero(), "lifting invariant");
                let q = c / &modulus;
                let r = ((&q % &pm) + &pm) % &pm;
                u64::try_from(&r).expect("residue fits u64")
            })
            .collect();
        let e_p = PolyP::new(p, err_over);
        for (i, gi) in modular.iter().enumerate() {
            let delta = e_p.mul(&bezout[i]).rem(gi);
            if delta.is_zero() {
                continue;
            }
            let delta_int = poly_p_to_int(&delta).mul_scalar(&modulus);
            lifts[i] = lifts[i].add(&delta_int);
        }
        modulus *= &pm;
    }
    (modulus, lifts)
}

fn poly_p_to_int(f: &PolyP) -> IntPoly {
    IntPoly::from_coeffs(f.c.iter().map(|&c| BigInt::from(c)).collect())
}

/// Map coefficients into the symmetric range (-m/2, m/2].
fn symmetric_reduce(f: &IntPoly, m: &BigInt) -> IntPoly {
    let half = m / 2;
    IntPoly::from_coeffs(
        f.coeffs()
            .iter()
            .map(|c| {
                let mut r = ((c % m) + m) % m;
                if r > half {
                    r -= m;
                }
                r
            })
            .collect(),
    )
}

/// Zassenhaus recombination: sweep subsets of the lifted factors by size then
/// lexicographic index order; a subset whose symmetric product divides the
/// remaining polynomial is extracted as a true irreducible factor.
fn recombine(
    mut rem: IntPoly,
    lifted: Vec<IntPoly>,
    modulus: &BigInt,
    _lc: &BigInt,
) -> Vec<IntPoly> {
    let mut pool: Vec<IntPoly> = lifted;
    let mut out: Vec<IntPoly> = Vec::new();
    let mut size = 1usize;
    'outer: while 2 * size <= pool.len() {
        for subset in super::index_subsets(pool.len(), size) {
            let lc = rem.leading().expect("nonzero").clone();
            let mut prod = IntPoly::from_coeffs(vec![lc]);
            for &i in &subset {
                prod = prod.mul(&pool[i]);
                prod = IntPoly::from_coeffs(
                    prod.coeffs()
                        .iter()
                        .map(|c| ((c % modulus) + modulus) % modulus)
                        .collect(),
                );
            }
            let cand = symmetric_reduce(&prod, modulus).primitive_part();
            if cand.degree().is_none() || cand.degree() == Some(0) {
                continue;
            }
            if let Some(q) = rem.div_exact(&cand) {
                out.push(cand);
                rem = q;
                let mut keep = Vec::with_capacity(pool.len() - size);
                for (i, f) in pool.into_iter().enumerate() {
                    if !subset.contains(&i) {
                        keep.push(f);
                    }
                }
                pool = keep;
                size = 1;
                continue 'outer;
            }
        }
        size += 1;
    }
    if rem.degree().is_some_and(|d| d > 0) {
        out.push(rem.primitive_part());
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coeffs: &[i64]) -> IntPoly {
        IntPoly::from_i64(coeffs)
    }

    #[test]
    fn splits_rational_roots() {
        // 2z^2 - 3z + 1 = (z - 1)(2z - 1)
        let f = p(&[1, -3, 2]);
        let fac = factor_int_poly(&f, DEFAULT_DEGREE_CAP).unwrap();
        assert_eq!(fac.content, BigInt::from(1));
        assert_eq!(fac.factors, vec![(p(&[-1, 1]), 1), (p(&[-1, 2]), 1)]);
        assert_eq!(fac.reconstruct(), f);
    }

    #[test]
    fn splits_linear_times_quadratic() {
        // z^3 - 4z^2 + 4z - 1 = (z - 1)(z^2 - 3z + 1)
        let f = p(&[-1, 4, -4, 1]);
        let fac = factor_int_poly(&f, DEFAULT_DEGREE_CAP).unwrap();
        assert_eq!(fac.factors, vec![(p(&[-1, 1]), 1), (p(&[1, -3, 1]), 1)]);
        assert_eq!(fac.reconstruct(), f);
    }

    #[test]
    fn splits_two_linears() {
        // z^2 - 3z + 2 = (z - 1)(z - 2)
        let f = p(&[2, -3, 1]);
        let fac = factor_int_poly(&f, DEFAULT_DEGREE_CAP).unwrap();
        assert_eq!(fac.factors, vec![(p(&[-2, 1]), 1), (p(&[-1, 1]), 1)]);
    }

    #[test]
    fn keeps_irreducibles_whole() {
        // z^2 - z - 1 is irreducible over Z
        let f = p(&[-1, -1, 1]);
        let fac = factor_int_poly(&f, DEFAULT_DEGREE_CAP).unwrap();
        assert_eq!(fac.factors, vec![(f.clone(), 1)]);

        // z^4 + 1 factors mod every prime but is irreducible over Z;
        // exercises the recombination stage rejecting all proper subsets.
        let f = p(&[1, 0, 0, 0, 1]);
        let fac = factor_int_poly(&f, DEFAULT_DEGREE_CAP).unwrap();
        assert_eq!(fac.factors, vec![(f.clone(), 1)]);
    }

    #[test]
    fn cyclotomic_product() {
        // z^6 - 1 = (z-1)(z+1)(z^2-z+1)(z^2+z+1)
        let f = p(&[-1, 0, 0, 0, 0, 0, 1]);
        let fac = factor_int_poly(&f, DEFAULT_DEGREE_CAP).unwrap();
        assert_eq!(
            fac.factors,
            vec![
                (p(&[-1, 1]), 1),
                (p(&[1, 1]), 1),
                (p(&[1, -1, 1]), 1),
                (p(&[1, 1, 1]), 1),
            ]
        );
        assert_eq!(fac.reconstruct(), f);
    }

    #[test]
    fn multiplicities_and_content() {
        // 12 (z-1)^2 (z+2)^3
        let f = p(&[-1, 1])
            .pow(2)
            .mul(&p(&[2, 1]).pow(3))
            .mul_scalar(&BigInt::from(12));
        let fac = factor_int_poly(&f, DEFAULT_DEGREE_CAP).unwrap();
        assert_eq!(fac.content, BigInt::from(12));
        assert_eq!(fac.factors, vec![(p(&[-1, 1]), 2), (p(&[2, 1]), 3)]);
        assert_eq!(fac.reconstruct(), f);
    }

    #[test]
    fn degree_cap_enforced() {
        let f = IntPoly::monomial(BigInt::from(1), 65).sub(&p(&[2]));
        let err = factor_int_poly(&f, DEFAULT_DEGREE_CAP).unwrap_err();
        assert_eq!(err, Error::DegreeCapExceeded { cap: 64, got: 65 });
    }

    #[test]
    fn zero_rejected() {
        assert_eq!(
            factor_int_poly(&IntPoly::zero(), DEFAULT_DEGREE_CAP).unwrap_err(),
            Error::ZeroPolynomial
        );
    }

    #[test]
    fn negative_leading_content() {
        // -(z - 1)(z - 2) has content -1
        let f = p(&[2, -3, 1]).neg();
        let fac = factor_int_poly(&f, DEFAULT_DEGREE_CAP).unwrap();
        assert_eq!(fac.content, BigInt::from(-1));
        assert_eq!(fac.reconstruct(), f);
    }
}
