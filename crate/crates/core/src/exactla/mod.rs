//! Exact linear algebra over the integers and rationals, plus integer
//! polynomial factorization. Everything here is exact; floating point never
//! enters this module.

mod factor;
mod matrix;
mod modp;
mod poly;
mod rat;
mod snf;

pub use factor::{factor_int_poly, PolyFactorization, DEFAULT_DEGREE_CAP};
pub use matrix::IntMatrix;
pub use poly::IntPoly;
pub use rat::RatMatrix;
pub use snf::{smith_normal_form, SNFResult};

/// All `k`-element subsets of `{0, .., n-1}` in lexicographic order of the
/// sorted index tuples. Used for exterior powers and tested against them.
pub(crate) fn index_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_lexicographic() {
        assert_eq!(
            index_subsets(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(index_subsets(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(index_subsets(2, 3), Vec::<Vec<usize>>::new());
    }
}
