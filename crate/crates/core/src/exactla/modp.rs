//! Polynomial arithmetic over F_p (odd prime, p < 2^31) and factorization of
//! squarefree polynomials mod p by distinct-degree / equal-degree splitting.
//! Used only as the modular stage of integer polynomial factorization.

use num_bigint::BigUint;
use num_traits::One;

use super::poly::IntPoly;
use num_bigint::BigInt;

/// Dense polynomial over F_p, coefficients ascending and reduced, trimmed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct PolyP {
    pub p: u64,
    pub c: Vec<u64>,
}

fn addm(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

fn subm(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powm(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, a, p);
        }
        a = mulm(a, a, p);
        e >>= 1;
    }
    r
}

fn invm(a: u64, p: u64) -> u64 {
    powm(a, p - 2, p)
}

/// Inverse of `a` modulo the odd prime `p` (for use by the lifting stage).
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    invm(a % p, p)
}

impl PolyP {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut c: Vec<u64> = coeffs.into_iter().map(|x| x % p).collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        PolyP { p, c }
    }

    pub fn zero(p: u64) -> Self {
        PolyP { p, c: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        PolyP { p, c: vec![1] }
    }

    pub fn x(p: u64) -> Self {
        PolyP { p, c: vec![0, 1] }
    }

    pub fn from_int_poly(f: &IntPoly, p: u64) -> Self {
        let pm = BigInt::from(p);
        let c = f
            .coeffs()
            .iter()
            .map(|x| {
                let m = ((x % &pm) + &pm) % &pm;
                u64::try_from(&m).expect("reduced residue fits u64")
            })
            .collect();
        PolyP::new(p, c)
    }

    pub fn deg(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn lead(&self) -> u64 {
        *self.c.last().unwrap_or(&0)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| {
                subm(
                    self.c.get(i).copied().unwrap_or(0),
                    o.c.get(i).copied().unwrap_or(0),
                    self.p,
                )
            })
            .collect();
        PolyP::new(self.p, c)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return PolyP::zero(self.p);
        }
        let mut c = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = addm(c[i + j], mulm(a, b, self.p), self.p);
            }
        }
        PolyP::new(self.p, c)
    }

    pub fn scalar_mul(&self, s: u64) -> Self {
        PolyP::new(self.p, self.c.iter().map(|&a| mulm(a, s, self.p)).collect())
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial mod p");
        let dd = d.deg().unwrap();
        let inv_lead = invm(d.lead(), self.p);
        let mut rem = self.c.clone();
        let mut quot = vec![0u64; self.c.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1;
            let q = mulm(rem[k], inv_lead, self.p);
            if q != 0 {
                for i in 0..=dd {
                    rem[k - dd + i] = subm(rem[k - dd + i], mulm(q, d.c[i], self.p), self.p);
                }
            }
            quot[k - dd] = q;
            rem.pop();
        }
        (PolyP::new(self.p, quot), PolyP::new(self.p, rem))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scalar_mul(invm(self.lead(), self.p))
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        if self.c.len() <= 1 {
            return PolyP::zero(self.p);
        }
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| mulm(a, (i as u64) % self.p, self.p))
            .collect();
        PolyP::new(self.p, c)
    }

    /// `self^e mod m` by square-and-multiply over the bits of `e`.
    pub fn powmod(&self, e: &BigUint, m: &Self) -> Self {
        let mut result = PolyP::one(self.p);
        let mut base = self.rem(m);
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                result = result.mul(&base).rem(m);
            }
            if i + 1 < bits {
                base = base.mul(&base).rem(m);
            }
        }
        result
    }

    /// Extended Euclid: returns (g, s, t) monic g with s*self + t*o = g.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (PolyP::one(p), PolyP::zero(p));
        let (mut t0, mut t1) = (PolyP::zero(p), PolyP::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        // normalize to monic gcd
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = invm(r0.lead(), p);
        (r0.scalar_mul(inv), s0.scalar_mul(inv), t0.scalar_mul(inv))
    }
}

/// Factor a squarefree monic polynomial mod p into monic irreducibles
/// (deterministic; the equal-degree stage sweeps a fixed candidate sequence).
pub(crate) fn factor_squarefree_monic_modp(f: &PolyP) -> Vec<PolyP> {
    let p = f.p;
    let mut out = Vec::new();
    let mut fstar = f.clone();
    // distinct-degree decomposition
    let mut h = PolyP::x(p).rem(&fstar);
    let mut d = 0usize;
    let pbig = BigUint::from(p);
    while fstar.deg().is_some_and(|deg| deg > 0) {
        d += 1;
        if fstar.deg().unwrap() < 2 * d {
            // what is left is irreducible
            out.push(fstar.monic());
            break;
        }
        h = h.powmod(&pbig, &fstar);
        let g = h.sub(&PolyP::x(p)).gcd(&fstar);
        if g.deg().is_some_and(|deg| deg > 0) {
            equal_degree_split(&g, d, &mut out);
            fstar = fstar.divrem(&g).0;
            h = h.rem(&fstar);
        }
    }
    out.sort_by(|a, b| (a.c.len(), &a.c).cmp(&(b.c.len(), &b.c)));
    out
}

/// Split a monic product of distinct irreducibles, all of degree `d`.
fn equal_degree_split(f: &PolyP, d: usize, out: &mut Vec<PolyP>) {
    let deg = f.deg().unwrap_or(0);
    if deg == 0 {
        return;
    }
    if deg == d {
        out.push(f.monic());
        return;
    }
    let p = f.p;
    // exponent (p^d - 1) / 2, p odd
    let e = (BigUint::from(p).pow(d as u32) - BigUint::one()) >> 1;
    let mut counter = 1u64;
    loop {
        let a = candidate(p, counter, 2 * d + 1);
        counter += 1;
        if a.deg().is_none() {
            continue;
        }
        let g0 = a.gcd(f);
        if g0.deg().is_some_and(|g| g > 0 && g < deg) {
            equal_degree_split(&g0, d, out);
            equal_degree_split(&f.divrem(&g0).0, d, out);
            return;
        }
        let w = a.powmod(&e, f);
        let g = w.sub(&PolyP::one(p)).gcd(f);
        if g.deg().is_some_and(|gd| gd > 0 && gd < deg) {
            equal_degree_split(&g, d, out);
            equal_degree_split(&f.divrem(&g).0, d, out);
            return;
        }
    }
}

/// Deterministic candidate sweep: coefficients are the base-p digits of the
/// counter, so every polynomial of bounded degree is eventually visited.
fn candidate(p: u64, counter: u64, max_len: usize) -> PolyP {
    let mut c = Vec::new();
    let mut n = counter;
    while n > 0 && c.len() < max_len {
        c.push(n % p);
        n /= p;
    }
    PolyP::new(p, c)
}
