//! Certified complex roots of integer polynomials: a deterministic
//! Aberth–Ehrlich iteration in f64 produces candidates, and an exact
//! rational evaluation turns each candidate into a rigorous enclosure via
//! the bound  min_i |z − ρ_i| ≤ n·|f(z)/f′(z)|. Candidates whose enclosure
//! is too wide are refined by exact Newton steps rounded back to dyadics.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, ToPrimitive, Zero};

use crate::error::Error;
use crate::exactla::IntPoly;
use crate::Result;

/// Relative enclosure width accepted without escalation.
pub const ROOT_REL_TOL: f64 = 1e-12;

/// One root with a rigorous error radius: the true root lies within
/// `radius` of `value`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifiedRoot {
    pub value: Complex64,
    pub radius: f64,
}

/// Complex number with exact rational parts, for rigorous evaluation.
#[derive(Clone, Debug)]
struct CxRat {
    re: BigRational,
    im: BigRational,
}

impl CxRat {
    fn from_c64(z: Complex64) -> Option<Self> {
        Some(CxRat {
            re: BigRational::from_f64(z.re)?,
            im: BigRational::from_f64(z.im)?,
        })
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    fn mul(&self, o: &Self) -> Self {
        CxRat {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn add_int(&self, c: &BigInt) -> Self {
        CxRat {
            re: &self.re + BigRational::from(c.clone()),
            im: self.im.clone(),
        }
    }

    fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// self − w/v for complex rationals w, v (v ≠ 0): one exact Newton step.
    fn sub_ratio(&self, w: &Self, v: &Self) -> Self {
        let den = v.norm_sqr();
        let num_re = (&w.re * &v.re + &w.im * &v.im) / &den;
        let num_im = (&w.im * &v.re - &w.re * &v.im) / &den;
        CxRat {
            re: &self.re - num_re,
            im: &self.im - num_im,
        }
    }
}

fn eval_exact(f: &IntPoly, z: &CxRat) -> CxRat {
    let mut acc = CxRat {
        re: BigRational::zero(),
        im: BigRational::zero(),
    };
    for c in f.coeffs().iter().rev() {
        acc = acc.mul(z).add_int(c);
    }
    acc
}

fn eval_f64(coeffs: &[f64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// All complex roots of `f` with rigorous radii; the enclosure target is
/// `rel_tol` relative to each root's modulus (with a lower-bound floor for
/// roots away from zero). Zero roots are split off exactly.
pub fn certified_roots(f: &IntPoly, rel_tol: f64) -> Result<Vec<CertifiedRoot>> {
    let Some(mut deg) = f.degree() else {
        return Err(Error::ZeroPolynomial);
    };
    if deg == 0 {
        return Ok(Vec::new());
    }
    // split off exact zero roots
    let mut out = Vec::new();
    let mut work = f.clone();
    while work.coeff(0).is_zero() {
        out.push(CertifiedRoot {
            value: Complex64::new(0.0, 0.0),
            radius: 0.0,
        });
        let shifted: Vec<BigInt> = work.coeffs()[1..].to_vec();
        work = IntPoly::from_coeffs(shifted);
        deg -= 1;
        if deg == 0 {
            return Ok(out);
        }
    }

    let coeffs_f64: Vec<f64> = work
        .coeffs()
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::INFINITY))
        .collect();
    if coeffs_f64.iter().any(|c| !c.is_finite()) {
        return Err(Error::RootFinding(
            "coefficients exceed the floating-point range".into(),
        ));
    }
    let deriv = work.derivative();
    let deriv_f64: Vec<f64> = deriv
        .coeffs()
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::INFINITY))
        .collect();

    // deterministic start: centroid plus a golden-angle circle of Cauchy radius
    let lead = *coeffs_f64.last().expect("nonzero");
    let cauchy = 1.0
        + coeffs_f64[..deg]
            .iter()
            .map(|c| (c / lead).abs())
            .fold(0.0f64, f64::max);
    let centroid = -coeffs_f64[deg - 1] / (deg as f64 * lead);
    let golden = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
    let mut z: Vec<Complex64> = (0..deg)
        .map(|i| {
            let theta = golden * i as f64 + 0.4;
            Complex64::new(centroid, 0.0)
                + Complex64::new(theta.cos(), theta.sin()) * (cauchy * 0.9)
        })
        .collect();

    // Aberth–Ehrlich simultaneous iteration
    for _ in 0..400 {
        let mut max_step = 0.0f64;
        for i in 0..deg {
            let fv = eval_f64(&coeffs_f64, z[i]);
            let dv = eval_f64(&deriv_f64, z[i]);
            if dv.norm() == 0.0 {
                continue;
            }
            let w = fv / dv;
            let mut s = Complex64::new(0.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    s += (z[i] - zj).finv();
                }
            }
            let denom = Complex64::new(1.0, 0.0) - w * s;
            let step = if denom.norm() > 1e-290 { w / denom } else { w };
            z[i] -= step;
            let rel = step.norm() / (1.0 + z[i].norm());
            if rel > max_step {
                max_step = rel;
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }

    // lower bound on |root|: |a0| / (|a0| + max |a_i|), valid since a0 ≠ 0
    let a0 = coeffs_f64[0].abs();
    let amax = coeffs_f64.iter().map(|c| c.abs()).fold(0.0f64, f64::max);
    let root_floor = a0 / (a0 + amax);

    for zi in z {
        out.push(certify_one(&work, &deriv, deg, zi, rel_tol, root_floor)?);
    }
    Ok(out)
}

/// Certify (and, when needed, refine) one candidate.
fn certify_one(
    f: &IntPoly,
    deriv: &IntPoly,
    deg: usize,
    mut z: Complex64,
    rel_tol: f64,
    root_floor: f64,
) -> Result<CertifiedRoot> {
    for _ in 0..60 {
        let zr = CxRat::from_c64(z)
            .ok_or_else(|| Error::RootFinding("candidate escaped to a non-finite value".into()))?;
        let fv = eval_exact(f, &zr);
        if fv.is_zero() {
            return Ok(CertifiedRoot {
                value: z,
                radius: 0.0,
            });
        }
        let dv = eval_exact(deriv, &zr);
        if !dv.is_zero() {
            // rigorous: some root lies within deg · |f(z)/f′(z)|
            let bound_sqr = fv.norm_sqr() / dv.norm_sqr()
                * BigRational::from_f64((deg * deg) as f64).expect("finite");
            let radius = bound_sqr.to_f64().unwrap_or(f64::INFINITY).sqrt();
            let tol = rel_tol * z.norm().max(root_floor);
            if radius <= tol {
                return Ok(CertifiedRoot { value: z, radius });
            }
            // exact Newton step, rounded back to a dyadic point
            let refined = zr.sub_ratio(&fv, &dv);
            let next = refined.to_c64();
            if !next.re.is_finite() || !next.im.is_finite() {
                return Err(Error::RootFinding("refinement diverged".into()));
            }
            z = next;
        } else {
            // derivative vanished exactly: nudge off the critical point
            z += Complex64::new(1e-7, 1e-7) * (1.0 + z.norm());
        }
    }
    Err(Error::RootFinding(format!(
        "could not certify a root near {z} to relative tolerance {rel_tol}"
    )))
}

/// Largest root modulus with its certified uncertainty, and the number of
/// roots whose modulus is indistinguishable from the maximum.
pub fn dominant_modulus(roots: &[CertifiedRoot]) -> (f64, usize) {
    let mut lambda = 0.0f64;
    for r in roots {
        let m = r.value.norm();
        if m > lambda {
            lambda = m;
        }
    }
    let count = roots
        .iter()
        .filter(|r| r.value.norm() + r.radius >= lambda - r.radius - 1e-9 * lambda.max(1.0))
        .count();
    (lambda, count)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_golden() {
        // z² − 3z + 1: roots (3 ± √5)/2
        let f = IntPoly::from_i64(&[1, -3, 1]);
        let roots = certified_roots(&f, ROOT_REL_TOL).unwrap();
        assert_eq!(roots.len(), 2);
        let mut mods: Vec<f64> = roots.iter().map(|r| r.value.norm()).collect();
        mods.sort_by(f64::total_cmp);
        let phi2 = (3.0 + 5.0f64.sqrt()) / 2.0;
        assert!((mods[1] - phi2).abs() < 1e-10, "{mods:?}");
        assert!((mods[0] - 1.0 / phi2).abs() < 1e-10, "{mods:?}");
        for r in &roots {
            assert!(r.radius <= 1e-10);
        }
    }

    #[test]
    fn complex_conjugate_pair() {
        // z² + 1: roots ±i
        let f = IntPoly::from_i64(&[1, 0, 1]);
        let roots = certified_roots(&f, ROOT_REL_TOL).unwrap();
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert!((r.value.norm() - 1.0).abs() < 1e-10);
            assert!(r.value.re.abs() < 1e-10);
        }
    }

    #[test]
    fn zero_roots_split_exactly() {
        // z³ − 2z² = z²(z − 2) — the zero roots are exact even though the
        // polynomial itself is not squarefree
        let f = IntPoly::from_i64(&[0, 0, -2, 1]);
        let roots = certified_roots(&f, ROOT_REL_TOL).unwrap();
        let zeros = roots.iter().filter(|r| r.value.norm() == 0.0).count();
        assert_eq!(zeros, 2);
        let two = roots.iter().find(|r| r.value.norm() > 1.0).unwrap();
        assert!((two.value.re - 2.0).abs() < 1e-10);
    }

    #[test]
    fn dominant_count_degree_six() {
        // (z² − 3z + 2)(z⁴ − 16) = roots 1, 2, ±2, ±2i: modulus 2 has
        // multiplicity 5 in the multiset {1, 2, 2, -2, 2i, -2i}
        let f = IntPoly::from_i64(&[2, -3, 1]).mul(&IntPoly::from_i64(&[-16, 0, 0, 0, 1]));
        let roots = certified_roots(&f, ROOT_REL_TOL).unwrap();
        assert_eq!(roots.len(), 6);
        let (lambda, count) = dominant_modulus(&roots);
        assert!((lambda - 2.0).abs() < 1e-10);
        assert_eq!(count, 5);
    }

    #[test]
    fn large_coefficient_spread() {
        // z² − 1000000z + 1: extreme modulus spread still certifies
        let f = IntPoly::from_i64(&[1, -1_000_000, 1]);
        let roots = certified_roots(&f, ROOT_REL_TOL).unwrap();
        let (lambda, _) = dominant_modulus(&roots);
        assert!((lambda - 999_999.999_999).abs() < 1e-4);
        for r in &roots {
            assert!(r.radius <= ROOT_REL_TOL * r.value.norm().max(1e-7));
        }
    }
}
