use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::poly::IntPoly;
use crate::{Error, Result};

/// Dense integer matrix with arbitrary-precision entries, row-major.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {}x{}={} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn from_rows_i64(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged row lengths".into()));
        }
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| BigInt::from(x)))
            .collect();
        IntMatrix::new(r, c, data)
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            *m.entry_mut(i, i) = BigInt::one();
        }
        m
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        let mut m = IntMatrix::zero(n, n);
        for (i, e) in entries.iter().enumerate() {
            *m.entry_mut(i, i) = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    fn require_square(&self) -> Result<usize> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(self.rows)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == IntMatrix::identity(self.rows)
    }

    pub fn transpose(&self) -> Self {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.entry_mut(j, i) = self.entry(i, j).clone();
            }
        }
        t
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix add".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        IntMatrix::new(self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix sub".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        IntMatrix::new(self.rows, self.cols, data)
    }

    pub fn neg(&self) -> Self {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }

    pub fn scalar_mul(&self, s: &BigInt) -> Self {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "matrix mul {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a * other.entry(k, j);
                    *out.entry_mut(i, j) += t;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch("matrix-vector mul".into()));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.entry(i, j) * &v[j]).sum())
            .collect())
    }

    pub fn trace(&self) -> Result<BigInt> {
        let n = self.require_square()?;
        Ok((0..n).map(|i| self.entry(i, i).clone()).sum())
    }

    /// Binary powering. `pow(0)` is the identity.
    pub fn pow(&self, mut e: u64) -> Result<Self> {
        let n = self.require_square()?;
        let mut result = IntMatrix::identity(n);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Exact determinant via fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        let n = self.require_square()?;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut m = self.data.clone();
        let idx = |i: usize, j: usize| i * n + j;
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[idx(k, k)].is_zero() {
                // pivot search below the diagonal
                let mut found = None;
                for r in k + 1..n {
                    if !m[idx(r, k)].is_zero() {
                        found = Some(r);
                        break;
                    }
                }
                match found {
                    Some(r) => {
                        for j in 0..n {
                            m.swap(idx(k, j), idx(r, j));
                        }
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &m[idx(k, k)] * &m[idx(i, j)] - &m[idx(i, k)] * &m[idx(k, j)];
                    // Bareiss guarantees exact divisibility by the previous pivot
                    m[idx(i, j)] = &t / &prev;
                }
                m[idx(i, k)] = BigInt::zero();
            }
            prev = m[idx(k, k)].clone();
        }
        let d = m[idx(n - 1, n - 1)].clone();
        Ok(if sign < 0 { -d } else { d })
    }

    /// Characteristic polynomial `det(zI - A)`, monic, via the
    /// Faddeev–LeVerrier recurrence (all divisions exact over Z).
    pub fn charpoly(&self) -> Result<IntPoly> {
        let n = self.require_square()?;
        if n == 0 {
            return Ok(IntPoly::one());
        }
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut m = self.clone();
        let mut c = -m.trace()?;
        coeffs[n - 1] = c.clone();
        for k in 2..=n {
            // M <- A (M + c I)
            let mut shifted = m;
            for i in 0..n {
                *shifted.entry_mut(i, i) += &c;
            }
            m = self.mul(&shifted)?;
            let t = -m.trace()?;
            let kk = BigInt::from(k);
            debug_assert!((&t % &kk).is_zero());
            c = &t / &kk;
            coeffs[n - k] = c.clone();
        }
        Ok(IntPoly::from_coeffs(coeffs))
    }

    /// Companion matrix of a monic polynomial: ones on the subdiagonal and
    /// the negated coefficients in the last column, so that
    /// `charpoly(companion(p)) == p`.
    pub fn companion(p: &IntPoly) -> Result<Self> {
        let deg = p.degree().ok_or(Error::ZeroPolynomial)?;
        if deg == 0 {
            return Err(Error::InvalidArgument(
                "companion matrix needs degree >= 1".into(),
            ));
        }
        if !p.is_monic() {
            return Err(Error::InvalidArgument(
                "companion matrix needs a monic polynomial".into(),
            ));
        }
        let mut m = IntMatrix::zero(deg, deg);
        for i in 1..deg {
            *m.entry_mut(i, i - 1) = BigInt::one();
        }
        for i in 0..deg {
            *m.entry_mut(i, deg - 1) = -p.coeff(i).clone();
        }
        Ok(m)
    }

    /// Block diagonal sum.
    pub fn direct_sum(blocks: &[&IntMatrix]) -> Result<Self> {
        for b in blocks {
            b.require_square()?;
        }
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = IntMatrix::zero(n, n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.rows {
                    *m.entry_mut(off + i, off + j) = b.entry(i, j).clone();
                }
            }
            off += b.rows;
        }
        Ok(m)
    }

    /// Maximum absolute value over the entries.
    pub fn max_abs(&self) -> BigInt {
        self.data
            .iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.entry(i, j))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}
