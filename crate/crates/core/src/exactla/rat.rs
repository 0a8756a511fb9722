use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::IntMatrix;
use super::{index_subsets, IntPoly};
use crate::{Error, Result};

/// Dense rational matrix, row-major, entries kept reduced by `BigRational`.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigRational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {}x{}={} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        Ok(RatMatrix { rows, cols, data })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zero(n, n);
        for i in 0..n {
            *m.entry_mut(i, i) = BigRational::one();
        }
        m
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        RatMatrix {
            rows: m.rows(),
            cols: m.cols(),
            data: m
                .entries()
                .iter()
                .map(|e| BigRational::from_integer(e.clone()))
                .collect(),
        }
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

    pub fn entry(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
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

    pub fn is_integer(&self) -> bool {
        self.data.iter().all(|e| e.is_integer())
    }

    pub fn to_int(&self) -> Option<IntMatrix> {
        if !self.is_integer() {
            return None;
        }
        IntMatrix::new(
            self.rows,
            self.cols,
            self.data.iter().map(|e| e.to_integer()).collect(),
        )
        .ok()
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
        RatMatrix::new(self.rows, self.cols, data)
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
        RatMatrix::new(self.rows, self.cols, data)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "matrix mul {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = RatMatrix::zero(self.rows, other.cols);
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

    pub fn mul_vec(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch("matrix-vector mul".into()));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.entry(i, j) * &v[j]).sum())
            .collect())
    }

    pub fn pow(&self, mut e: u64) -> Result<Self> {
        let n = self.require_square()?;
        let mut result = RatMatrix::identity(n);
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

    /// Exact determinant: clear row denominators, run fraction-free
    /// elimination over Z, divide back out.
    pub fn det(&self) -> Result<BigRational> {
        let n = self.require_square()?;
        if n == 0 {
            return Ok(BigRational::one());
        }
        let mut scale = BigInt::one();
        let mut int_rows = Vec::with_capacity(n * n);
        for i in 0..n {
            let mut lcm = BigInt::one();
            for j in 0..n {
                lcm = num_integer::Integer::lcm(&lcm, self.entry(i, j).denom());
            }
            for j in 0..n {
                let e = self.entry(i, j);
                int_rows.push(e.numer() * (&lcm / e.denom()));
            }
            scale *= lcm;
        }
        let d = IntMatrix::new(n, n, int_rows)?.det()?;
        Ok(BigRational::new(d, scale))
    }

    /// Monic characteristic polynomial `det(zI - A)` with rational
    /// coefficients (ascending), via Faddeev–LeVerrier.
    pub fn charpoly(&self) -> Result<Vec<BigRational>> {
        let n = self.require_square()?;
        let mut coeffs = vec![BigRational::zero(); n + 1];
        coeffs[n] = BigRational::one();
        if n == 0 {
            return Ok(coeffs);
        }
        let trace =
            |m: &RatMatrix| -> BigRational { (0..m.rows).map(|i| m.entry(i, i).clone()).sum() };
        let mut m = self.clone();
        let mut c = -trace(&m);
        coeffs[n - 1] = c.clone();
        for k in 2..=n {
            let mut shifted = m;
            for i in 0..n {
                *shifted.entry_mut(i, i) += &c;
            }
            m = self.mul(&shifted)?;
            c = -trace(&m) / BigRational::from_integer(BigInt::from(k));
            coeffs[n - k] = c.clone();
        }
        Ok(coeffs)
    }

    /// Integer polynomial with the same roots as the given rational monic
    /// polynomial (coefficients scaled by the common denominator).
    pub fn clear_denominators(coeffs: &[BigRational]) -> IntPoly {
        let mut lcm = BigInt::one();
        for c in coeffs {
            lcm = num_integer::Integer::lcm(&lcm, c.denom());
        }
        IntPoly::from_coeffs(
            coeffs
                .iter()
                .map(|c| c.numer() * (&lcm / c.denom()))
                .collect(),
        )
    }

    /// The `j`-th exterior power: the matrix of all `j x j` minors, rows and
    /// columns indexed by the size-`j` index subsets in lexicographic order.
    /// `j = 0` gives the 1x1 identity.
    pub fn exterior_power(&self, j: usize) -> Result<RatMatrix> {
        let n = self.require_square()?;
        if j > n {
            return Err(Error::InvalidArgument(format!(
                "exterior power {} exceeds dimension {}",
                j, n
            )));
        }
        let subsets = index_subsets(n, j);
        let m = subsets.len();
        let mut out = RatMatrix::zero(m, m);
        for (a, rows) in subsets.iter().enumerate() {
            for (b, cols) in subsets.iter().enumerate() {
                let mut sub = RatMatrix::zero(j, j);
                for (ri, &r) in rows.iter().enumerate() {
                    for (ci, &c) in cols.iter().enumerate() {
                        *sub.entry_mut(ri, ci) = self.entry(r, c).clone();
                    }
                }
                *out.entry_mut(a, b) = sub.det()?;
            }
        }
        Ok(out)
    }

    /// Solve A·x = b exactly when the (possibly overdetermined or rank-
    /// deficient) system is consistent; free variables are set to zero, so
    /// the answer is deterministic. Returns `None` when inconsistent.
    pub fn solve_consistent(&self, b: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let (rows, cols) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut rhs = b.to_vec();
        let mut pivot_cols: Vec<usize> = Vec::new();
        let mut row = 0usize;
        for col in 0..cols {
            let Some(p) = (row..rows).find(|&r| !a.entry(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..cols {
                    let tmp = a.entry(p, j).clone();
                    *a.entry_mut(p, j) = a.entry(row, j).clone();
                    *a.entry_mut(row, j) = tmp;
                }
                rhs.swap(p, row);
            }
            let pv = a.entry(row, col).clone();
            for j in 0..cols {
                *a.entry_mut(row, j) /= &pv;
            }
            rhs[row] /= &pv;
            for r in 0..rows {
                if r == row || a.entry(r, col).is_zero() {
                    continue;
                }
                let f = a.entry(r, col).clone();
                for j in 0..cols {
                    let t = &f * a.entry(row, j);
                    *a.entry_mut(r, j) -= t;
                }
                let t = &f * &rhs[row];
                rhs[r] -= t;
            }
            pivot_cols.push(col);
            row += 1;
            if row == rows {
                break;
            }
        }
        // consistency: zero rows of A must have zero rhs
        if rhs[row..].iter().any(|v| !v.is_zero()) {
            return None;
        }
        let mut x = vec![BigRational::zero(); cols];
        for (r, &col) in pivot_cols.iter().enumerate() {
            x[col] = rhs[r].clone();
        }
        Some(x)
    }

    /// Inverse via Gauss–Jordan elimination; errors if singular.
    pub fn inverse(&self) -> Result<RatMatrix> {
        let n = self.require_square()?;
        let mut a = self.clone();
        let mut inv = RatMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a.entry(r, col).is_zero())
                .ok_or_else(|| Error::InvalidArgument("matrix is singular".into()))?;
            if pivot != col {
                for j in 0..n {
                    let tmp = a.entry(pivot, j).clone();
                    *a.entry_mut(pivot, j) = a.entry(col, j).clone();
                    *a.entry_mut(col, j) = tmp;
                    let tmp = inv.entry(pivot, j).clone();
                    *inv.entry_mut(pivot, j) = inv.entry(col, j).clone();
                    *inv.entry_mut(col, j) = tmp;
                }
            }
            let p = a.entry(col, col).clone();
            for j in 0..n {
                *a.entry_mut(col, j) /= &p;
                *inv.entry_mut(col, j) /= &p;
            }
            for r in 0..n {
                if r == col || a.entry(r, col).is_zero() {
                    continue;
                }
                let f = a.entry(r, col).clone();
                for j in 0..n {
                    let t = &f * a.entry(col, j);
                    *a.entry_mut(r, j) -= t;
                    let t = &f * inv.entry(col, j);
                    *inv.entry_mut(r, j) -= t;
                }
            }
        }
        Ok(inv)
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
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

#[cfg(test)]
mod tests {
    use super::*;

    fn rm(rows: &[Vec<i64>]) -> RatMatrix {
        RatMatrix::from_int(&IntMatrix::from_rows_i64(rows).unwrap())
    }

    #[test]
    fn det_and_charpoly() {
        let a = rm(&[vec![2, 1], vec![1, 1]]);
        assert_eq!(a.det().unwrap(), BigRational::from_integer(BigInt::one()));
        let cp = a.charpoly().unwrap();
        assert_eq!(
            RatMatrix::clear_denominators(&cp),
            IntPoly::from_i64(&[1, -3, 1])
        );
    }

    #[test]
    fn det_with_denominators() {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let m = RatMatrix::new(
            2,
            2,
            vec![
                half.clone(),
                BigRational::one(),
                BigRational::zero(),
                half.clone(),
            ],
        )
        .unwrap();
        assert_eq!(m.det().unwrap(), &half * &half);
    }

    #[test]
    fn exterior_power_top_is_det() {
        let a = rm(&[vec![2, 1], vec![1, 1]]);
        let e2 = a.exterior_power(2).unwrap();
        assert_eq!(e2.rows(), 1);
        assert_eq!(*e2.entry(0, 0), BigRational::from_integer(BigInt::one()));
        let e0 = a.exterior_power(0).unwrap();
        assert_eq!(*e0.entry(0, 0), BigRational::one());
        let e1 = a.exterior_power(1).unwrap();
        assert_eq!(e1, a);
    }

    #[test]
    fn exterior_power_multiplicative() {
        let a = rm(&[vec![1, 2, 0], vec![0, 1, -1], vec![3, 0, 1]]);
        let b = rm(&[vec![2, 0, 1], vec![1, 1, 0], vec![0, -2, 1]]);
        let ab = a.mul(&b).unwrap();
        for j in 0..=3 {
            let left = ab.exterior_power(j).unwrap();
            let right = a
                .exterior_power(j)
                .unwrap()
                .mul(&b.exterior_power(j).unwrap())
                .unwrap();
            assert_eq!(left, right, "exterior power {} not multiplicative", j);
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let a = rm(&[vec![2, 1], vec![1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), RatMatrix::identity(2));
        let singular = rm(&[vec![1, 2], vec![2, 4]]);
        assert!(singular.inverse().is_err());
    }
}
