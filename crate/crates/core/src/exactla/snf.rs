use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;
use crate::Result;

/// Smith normal form `U * M * V = diag(d_1, .., d_r)` with unimodular `U`,
/// `V`, non-negative diagonal and divisibility chain `d_1 | d_2 | ..`
/// (zeros, if any, at the end).
#[derive(Debug, Clone)]
pub struct SNFResult {
    pub diagonal: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SNFResult {
    /// The diagonal matrix itself, in the shape of the original input.
    pub fn diagonal_matrix(&self, rows: usize, cols: usize) -> IntMatrix {
        let mut m = IntMatrix::zero(rows, cols);
        for (i, d) in self.diagonal.iter().enumerate() {
            *m.entry_mut(i, i) = d.clone();
        }
        m
    }
}

/// Compute the Smith normal form with its unimodular transforms by
/// elementary row/column operations.
pub fn smith_normal_form(m: &IntMatrix) -> Result<SNFResult> {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    let r = rows.min(cols);
    for t in 0..r {
        'pivot: loop {
            // smallest nonzero entry of the trailing submatrix becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a.entry(i, j).is_zero() {
                        continue;
                    }
                    match best {
                        Some((bi, bj)) if a.entry(bi, bj).abs() <= a.entry(i, j).abs() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break 'pivot; // trailing submatrix is zero
            };
            if pi != t {
                swap_rows(&mut a, &mut u, t, pi);
            }
            if pj != t {
                swap_cols(&mut a, &mut v, t, pj);
            }

            // clear column t below the pivot and row t to its right
            let mut residue = false;
            for i in t + 1..rows {
                if a.entry(i, t).is_zero() {
                    continue;
                }
                let q = a.entry(i, t) / a.entry(t, t);
                if !q.is_zero() {
                    row_op(&mut a, &mut u, i, t, &-q);
                }
                if !a.entry(i, t).is_zero() {
                    residue = true;
                }
            }
            for j in t + 1..cols {
                if a.entry(t, j).is_zero() {
                    continue;
                }
                let q = a.entry(t, j) / a.entry(t, t);
                if !q.is_zero() {
                    col_op(&mut a, &mut v, j, t, &-q);
                }
                if !a.entry(t, j).is_zero() {
                    residue = true;
                }
            }
            if residue {
                continue 'pivot; // smaller entries appeared; re-pick the pivot
            }

            // pivot must divide every remaining entry for the chain to hold
            let pivot = a.entry(t, t).clone();
            let mut fix = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(a.entry(i, j) % &pivot).is_zero() {
                        fix = Some(i);
                        break 'scan;
                    }
                }
            }
            match fix {
                Some(i) => {
                    // folding that row into row t exposes a smaller pivot
                    let one = BigInt::from(1);
                    row_op(&mut a, &mut u, t, i, &one);
                    continue 'pivot;
                }
                None => break 'pivot,
            }
        }
        if a.entry(t, t).is_negative() {
            negate_row(&mut a, &mut u, t);
        }
    }

    let diagonal = (0..r).map(|i| a.entry(i, i).clone()).collect();
    Ok(SNFResult { diagonal, u, v })
}

fn swap_rows(a: &mut IntMatrix, u: &mut IntMatrix, r1: usize, r2: usize) {
    for j in 0..a.cols() {
        let t = a.entry(r1, j).clone();
        *a.entry_mut(r1, j) = a.entry(r2, j).clone();
        *a.entry_mut(r2, j) = t;
    }
    for j in 0..u.cols() {
        let t = u.entry(r1, j).clone();
        *u.entry_mut(r1, j) = u.entry(r2, j).clone();
        *u.entry_mut(r2, j) = t;
    }
}

fn swap_cols(a: &mut IntMatrix, v: &mut IntMatrix, c1: usize, c2: usize) {
    for i in 0..a.rows() {
        let t = a.entry(i, c1).clone();
        *a.entry_mut(i, c1) = a.entry(i, c2).clone();
        *a.entry_mut(i, c2) = t;
    }
    for i in 0..v.rows() {
        let t = v.entry(i, c1).clone();
        *v.entry_mut(i, c1) = v.entry(i, c2).clone();
        *v.entry_mut(i, c2) = t;
    }
}

/// row[dst] += q * row[src], applied to the working matrix and to U.
fn row_op(a: &mut IntMatrix, u: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    for j in 0..a.cols() {
        let t = q * a.entry(src, j);
        *a.entry_mut(dst, j) += t;
    }
    for j in 0..u.cols() {
        let t = q * u.entry(src, j);
        *u.entry_mut(dst, j) += t;
    }
}

/// col[dst] += q * col[src], applied to the working matrix and to V.
fn col_op(a: &mut IntMatrix, v: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    for i in 0..a.rows() {
        let t = q * a.entry(i, src);
        *a.entry_mut(i, dst) += t;
    }
    for i in 0..v.rows() {
        let t = q * v.entry(i, src);
        *v.entry_mut(i, dst) += t;
    }
}

fn negate_row(a: &mut IntMatrix, u: &mut IntMatrix, r: usize) {
    for j in 0..a.cols() {
        let t = -a.entry(r, j).clone();
        *a.entry_mut(r, j) = t;
    }
    for j in 0..u.cols() {
        let t = -u.entry(r, j).clone();
        *u.entry_mut(r, j) = t;
    }
}
