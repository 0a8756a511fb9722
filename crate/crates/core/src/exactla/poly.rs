use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use crate::{Error, Result};

/// Integer polynomial, coefficients ascending (`coeffs[i]` multiplies `z^i`),
/// with no trailing zero coefficients (the zero polynomial has no
/// coefficients at all).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly {
            coeffs: vec![BigInt::one()],
        }
    }

    /// The monomial `c * z^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        if c.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        IntPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> &BigInt {
        static ZERO: std::sync::OnceLock<BigInt> = std::sync::OnceLock::new();
        self.coeffs
            .get(i)
            .unwrap_or_else(|| ZERO.get_or_init(BigInt::zero))
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0).clone()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect();
        IntPoly::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - other.coeff(i)).collect();
        IntPoly::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> Self {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs(coeffs)
    }

    pub fn mul_scalar(&self, s: &BigInt) -> Self {
        IntPoly::from_coeffs(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = IntPoly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rat(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, a: &IntMatrix) -> Result<IntMatrix> {
        if !a.is_square() {
            return Err(Error::NonSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        let n = a.rows();
        let mut acc = IntMatrix::zero(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(a)?;
            for i in 0..n {
                *acc.entry_mut(i, i) += c;
            }
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return IntPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        IntPoly::from_coeffs(coeffs)
    }

    /// Degree reversal `z^deg * p(1/z)` (coefficients reversed). The zero
    /// polynomial reverses to itself.
    pub fn reverse(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        IntPoly::from_coeffs(coeffs)
    }

    /// Content: gcd of the coefficients with the sign of the leading
    /// coefficient (so the primitive part has a positive leading
    /// coefficient). Zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = num_integer::Integer::gcd(&g, c);
        }
        if self.leading().is_some_and(|l| l.is_negative()) {
            g = -g;
        }
        g
    }

    pub fn primitive_part(&self) -> Self {
        let c = self.content();
        if c.is_zero() {
            return IntPoly::zero();
        }
        IntPoly::from_coeffs(self.coeffs.iter().map(|x| x / &c).collect())
    }

    /// Division over the rationals: returns `(q, r)` with
    /// `self = q * div + r` and `deg r < deg div`.
    pub fn divrem_rat(&self, div: &Self) -> Result<(Vec<BigRational>, Vec<BigRational>)> {
        let dd = div.degree().ok_or(Error::ZeroPolynomial)?;
        let mut rem: Vec<BigRational> = self
            .coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let lead = BigRational::from_integer(div.leading().unwrap().clone());
        let mut quot = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1; // current degree of the remainder
            let q = &rem[k] / &lead;
            if !q.is_zero() {
                for i in 0..=dd {
                    let t = &q * &BigRational::from_integer(div.coeff(i).clone());
                    rem[k - dd + i] -= t;
                }
            }
            quot[k - dd] = q;
            debug_assert!(rem[k].is_zero());
            rem.pop();
        }
        while rem.last().is_some_and(|c| c.is_zero()) {
            rem.pop();
        }
        Ok((quot, rem))
    }

    /// Exact integer quotient if `div` divides `self` over the integers,
    /// `None` otherwise.
    pub fn div_exact(&self, div: &Self) -> Option<IntPoly> {
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let (q, r) = self.divrem_rat(div).ok()?;
        if !r.is_empty() {
            return None;
        }
        let mut coeffs = Vec::with_capacity(q.len());
        for c in q {
            if !c.is_integer() {
                return None;
            }
            coeffs.push(c.to_integer());
        }
        Some(IntPoly::from_coeffs(coeffs))
    }

    /// Pseudo-remainder: `lc(div)^(deg self - deg div + 1) * self mod div`,
    /// computed fraction-free.
    fn pseudo_rem(&self, div: &Self) -> IntPoly {
        let dd = div.degree().expect("pseudo_rem by zero");
        let lead = div.leading().unwrap().clone();
        let mut rem = self.clone();
        while rem.degree().is_some_and(|d| d >= dd) {
            let d = rem.degree().unwrap();
            let c = rem.leading().unwrap().clone();
            rem = rem.mul_scalar(&lead);
            let t = div.mul(&IntPoly::monomial(c, d - dd));
            rem = rem.sub(&t);
            debug_assert!(rem.degree().is_none_or(|nd| nd < d));
        }
        rem
    }

    /// Polynomial gcd over Z (primitive PRS), normalized primitive with a
    /// positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> IntPoly {
        if self.is_zero() {
            return normalize_gcd(other.clone());
        }
        if other.is_zero() {
            return normalize_gcd(self.clone());
        }
        let content_gcd = num_integer::Integer::gcd(&self.content(), &other.content());
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        normalize_gcd(a.mul_scalar(&content_gcd.abs()))
    }

    /// Squarefree decomposition (Yun): returns `(a_i, i)` pairs with
    /// `self = content * prod a_i^i`, each `a_i` primitive squarefree with a
    /// positive leading coefficient, listed with increasing multiplicity.
    pub fn squarefree_decomposition(&self) -> Result<(BigInt, Vec<(IntPoly, u32)>)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let content = self.content();
        let f = self.primitive_part();
        if f.degree() == Some(0) {
            return Ok((content, Vec::new()));
        }
        let df = f.derivative();
        let g = f.gcd(&df);
        let mut out = Vec::new();
        if g.degree() == Some(0) {
            out.push((f, 1));
            return Ok((content, out));
        }
        let mut c = f.div_exact(&g).ok_or_else(|| {
            Error::AssertionViolated("squarefree decomposition: non-exact division".into())
        })?;
        let mut d = df
            .div_exact(&g)
            .ok_or_else(|| {
                Error::AssertionViolated("squarefree decomposition: non-exact division".into())
            })?
            .sub(&c.derivative());
        let mut mult = 1u32;
        loop {
            let a = c.gcd(&d);
            if a.degree().is_some_and(|deg| deg > 0) {
                out.push((a.clone(), mult));
            }
            let c_next = c.div_exact(&a).ok_or_else(|| {
                Error::AssertionViolated("squarefree decomposition: non-exact division".into())
            })?;
            if c_next.degree() == Some(0) {
                break;
            }
            d = d
                .div_exact(&a)
                .ok_or_else(|| {
                    Error::AssertionViolated("squarefree decomposition: non-exact division".into())
                })?
                .sub(&c_next.derivative());
            c = c_next;
            mult += 1;
        }
        Ok((content, out))
    }

    /// Largest absolute value among the coefficients.
    pub fn height(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

fn normalize_gcd(p: IntPoly) -> IntPoly {
    if p.leading().is_some_and(|l| l.is_negative()) {
        p.neg()
    } else {
        p
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                first = false;
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if i == 0 {
                write!(f, "{}", a)?;
            } else {
                if !a.is_one() {
                    write!(f, "{}*", a)?;
                }
                if i == 1 {
                    write!(f, "z")?;
                } else {
                    write!(f, "z^{}", i)?;
                }
            }
        }
        Ok(())
    }
}
