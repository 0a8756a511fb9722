//! Minimal linear recurrence of an integer sequence, found exactly: the
//! smallest order t whose Hankel system is consistent across the whole
//! window, accepted only when the window leaves `guard` surplus terms beyond
//! the 2t needed to pin the recurrence down.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::exactla::{IntPoly, RatMatrix};
use crate::Result;

/// Default surplus terms required beyond 2·order.
pub const DEFAULT_GUARD: usize = 5;

/// The minimal monic annihilator of the observed window:
/// `poly = z^t − c_{t−1} z^{t−1} − … − c_0` with
/// `seq[k+t] = Σ c_j seq[k+j]` on every window position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalRecurrence {
    pub order: usize,
    pub poly: IntPoly,
}

/// Find the minimal-order monic integer recurrence satisfied by the whole
/// window. The all-zero sequence yields the empty recurrence (poly 1). A
/// consistent recurrence with non-integer coefficients is rejected, and a
/// window too short to certify any order up to its capacity errors out.
pub fn find_min_recurrence(seq: &[BigInt], guard: usize) -> Result<MinimalRecurrence> {
    let l = seq.len();
    if seq.iter().all(Zero::is_zero) {
        return Ok(MinimalRecurrence {
            order: 0,
            poly: IntPoly::one(),
        });
    }
    if l < 2 + guard {
        return Err(Error::WindowTooSmall(format!(
            "window of {l} terms cannot certify any recurrence with guard {guard}"
        )));
    }
    let rat_seq: Vec<BigRational> = seq.iter().map(|x| BigRational::from(x.clone())).collect();
    let t_cap = (l - guard) / 2;
    for t in 1..=t_cap {
        let rows = l - t;
        let mut data = Vec::with_capacity(rows * t);
        for k in 0..rows {
            data.extend(rat_seq[k..k + t].iter().cloned());
        }
        let a = RatMatrix::new(rows, t, data).expect("shape by construction");
        let rhs: Vec<BigRational> = rat_seq[t..].to_vec();
        let Some(c) = a.solve_consistent(&rhs) else {
            continue;
        };
        // minimal poly z^t − c_{t−1} z^{t−1} − … − c_0, must be integer
        if c.iter().any(|x| !x.is_integer()) {
            return Err(Error::NonIntegerRecurrence { order: t });
        }
        let mut coeffs: Vec<BigInt> = c.iter().map(|x| -x.to_integer()).collect();
        coeffs.push(BigInt::one());
        return Ok(MinimalRecurrence {
            order: t,
            poly: IntPoly::from_coeffs(coeffs),
        });
    }
    Err(Error::WindowExhausted(format!(
        "no recurrence of order up to {t_cap} fits the {l}-term window (guard {guard})"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn doubling_window() {
        // 2^k − 1 satisfies z^2 − 3z + 2
        let s = seq(&[1, 3, 7, 15, 31, 63, 127, 255, 511, 1023]);
        let rec = find_min_recurrence(&s, DEFAULT_GUARD).unwrap();
        assert_eq!(rec.order, 2);
        assert_eq!(rec.poly, IntPoly::from_i64(&[2, -3, 1]));
    }

    #[test]
    fn trace_window() {
        // tr(D^k) − 2 for D = [[2,1],[1,1]]: annihilator (z−1)(z²−3z+1)
        let s = seq(&[
            1, 5, 16, 45, 121, 320, 841, 2205, 5776, 15125, 39601, 103680,
        ]);
        let rec = find_min_recurrence(&s, DEFAULT_GUARD).unwrap();
        assert_eq!(rec.order, 3);
        assert_eq!(rec.poly, IntPoly::from_i64(&[-1, 4, -4, 1]));
    }

    #[test]
    fn constant_window() {
        let s = seq(&[1, 1, 1, 1, 1, 1, 1, 1]);
        let rec = find_min_recurrence(&s, DEFAULT_GUARD).unwrap();
        assert_eq!(rec.order, 1);
        assert_eq!(rec.poly, IntPoly::from_i64(&[-1, 1]));
    }

    #[test]
    fn alternating_window() {
        // 2^k − (−1)^k: z² − z − 2
        let s = seq(&[3, 3, 9, 15, 33, 63, 129, 255, 513, 1023]);
        let rec = find_min_recurrence(&s, DEFAULT_GUARD).unwrap();
        assert_eq!(rec.poly, IntPoly::from_i64(&[-2, -1, 1]));
    }

    #[test]
    fn zero_window() {
        let s = seq(&[0, 0, 0, 0]);
        let rec = find_min_recurrence(&s, 5).unwrap();
        assert_eq!(rec.order, 0);
        assert!(rec.poly.is_one());
    }

    #[test]
    fn window_exhaustion() {
        // generic-looking data with no short recurrence
        let s = seq(&[1, 2, 4, 9, 21, 52, 131]);
        assert!(matches!(
            find_min_recurrence(&s, 3),
            Err(Error::WindowExhausted(_))
        ));
    }

    #[test]
    fn window_too_small() {
        let s = seq(&[1, 2]);
        assert!(matches!(
            find_min_recurrence(&s, 5),
            Err(Error::WindowTooSmall(_))
        ));
    }

    #[test]
    fn guard_blocks_undertrained_fit() {
        // 6 terms of the order-3 sequence: 2·3 + 5 > 6, so the guard must
        // refuse even though a consistent order-3 fit exists
        let s = seq(&[1, 5, 16, 45, 121, 320]);
        assert!(matches!(
            find_min_recurrence(&s, 5),
            Err(Error::WindowExhausted(_) | Error::WindowTooSmall(_))
        ));
    }
}
