//! Endomorphism specifications for lattice-by-finite groups and the averaging
//! formula for twisted fixed-point counts.
//!
//! A spec holds a finite matrix group Φ ⊂ GL_n(Q) (the holonomy), optional
//! rational affine parts turning Z^n and Φ into a concrete torsion-free
//! space-group presentation, and an endomorphism given by its linear part D,
//! translation part d, and the induced map on Φ. The count at level k is
//! `R(k) = (1/#Φ) · Σ_{A∈Φ} σ(det(I − A·D^k))` with `σ(0) = ∞`, `σ(x) = |x|`,
//! so any vanishing determinant makes the whole level infinite.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::exactla::{smith_normal_form, RatMatrix};
use crate::numth::{divisors, dold_and_algebraic, ExtNat};
use crate::Result;

/// An endomorphism of a lattice-by-finite group, in linearized form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndoSpec {
    /// lattice rank n
    pub rank: usize,
    /// the finite holonomy group as distinct invertible matrices; must be
    /// closed under products and contain the identity
    pub holonomy: Vec<RatMatrix>,
    /// affine translation parts, one per holonomy element, when the spec is a
    /// concrete space-group presentation; `None` for bare linear data
    pub affine: Option<Vec<Vec<BigRational>>>,
    /// linear part D of the endomorphism
    pub d_lin: RatMatrix,
    /// translation part d of the endomorphism
    pub d_trans: Vec<BigRational>,
    /// induced holonomy map by index: A_i ↦ A_{holonomy_map[i]}
    pub holonomy_map: Vec<usize>,
}

/// Non-fatal observations produced while validating a spec.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub warnings: Vec<String>,
}

/// Linearized data of the k-th iterate: D^k, its translation part
/// d_k = (I + D + … + D^{k−1})·d, and the k-fold holonomy map.
#[derive(Debug, Clone)]
pub struct IterateData {
    pub k: u64,
    pub d_lin: RatMatrix,
    pub d_trans: Vec<BigRational>,
    pub holonomy_map: Vec<usize>,
}

impl EndoSpec {
    /// Assemble and validate a spec. When `holonomy_map` is `None` it is
    /// derived from the compatibility condition A′·D = D·A (first solution in
    /// listing order; a warning is recorded if any level admits several).
    pub fn new(
        rank: usize,
        holonomy: Vec<RatMatrix>,
        affine: Option<Vec<Vec<BigRational>>>,
        d_lin: RatMatrix,
        d_trans: Vec<BigRational>,
        holonomy_map: Option<Vec<usize>>,
    ) -> Result<(Self, ValidationReport)> {
        let mut warnings = Vec::new();
        let map = match holonomy_map {
            Some(m) => m,
            None => derive_holonomy_map(rank, &holonomy, &d_lin, &mut warnings)?,
        };
        let spec = EndoSpec {
            rank,
            holonomy,
            affine,
            d_lin,
            d_trans,
            holonomy_map: map,
        };
        let mut report = spec.validate()?;
        warnings.append(&mut report.warnings);
        Ok((spec, ValidationReport { warnings }))
    }

    pub fn order(&self) -> usize {
        self.holonomy.len()
    }

    /// Index of the identity matrix in the holonomy listing.
    pub fn identity_index(&self) -> Result<usize> {
        let id = RatMatrix::identity(self.rank);
        self.holonomy
            .iter()
            .position(|a| *a == id)
            .ok_or_else(|| Error::SpecInvalid(vec!["holonomy lacks the identity".into()]))
    }

    /// Index of A_i · A_j, for all pairs; errors if the listing is not closed.
    pub fn mult_table(&self) -> Result<Vec<Vec<usize>>> {
        let n = self.order();
        let mut table = vec![vec![0usize; n]; n];
        for (i, row) in table.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                let prod = self.holonomy[i].mul(&self.holonomy[j])?;
                *slot = self
                    .holonomy
                    .iter()
                    .position(|a| *a == prod)
                    .ok_or_else(|| {
                        Error::SpecInvalid(vec![format!(
                            "holonomy not closed: element {i} * element {j} missing from listing"
                        )])
                    })?;
            }
        }
        Ok(table)
    }

    /// Whether holonomy and D all have integer entries (needed for any
    /// lattice-level computation).
    pub fn is_integral(&self) -> bool {
        self.d_lin.is_integer() && self.holonomy.iter().all(|a| a.is_integer())
    }

    /// Affine translation parts, defaulting to zero vectors for bare linear
    /// data presented as a split extension.
    pub fn affine_parts(&self) -> Vec<Vec<BigRational>> {
        match &self.affine {
            Some(a) => a.clone(),
            None => vec![vec![BigRational::zero(); self.rank]; self.order()],
        }
    }

    /// Full validation. Hard failures come back as `Error::SpecInvalid` with
    /// every detected problem listed; soft observations land in the report.
    pub fn validate(&self) -> Result<ValidationReport> {
        let mut errors: Vec<String> = Vec::new();
        let mut warnings: Vec<String> = Vec::new();
        let n = self.rank;
        if n == 0 {
            return Err(Error::SpecInvalid(vec!["rank must be at least 1".into()]));
        }
        if self.holonomy.is_empty() {
            return Err(Error::SpecInvalid(vec!["holonomy listing is empty".into()]));
        }
        for (i, a) in self.holonomy.iter().enumerate() {
            if a.rows() != n || a.cols() != n {
                errors.push(format!(
                    "holonomy element {i} is {}x{}, expected {n}x{n}",
                    a.rows(),
                    a.cols()
                ));
            }
        }
        if self.d_lin.rows() != n || self.d_lin.cols() != n {
            errors.push(format!(
                "linear part is {}x{}, expected {n}x{n}",
                self.d_lin.rows(),
                self.d_lin.cols()
            ));
        }
        if self.d_trans.len() != n {
            errors.push(format!(
                "translation part has length {}, expected {n}",
                self.d_trans.len()
            ));
        }
        if !errors.is_empty() {
            return Err(Error::SpecInvalid(errors));
        }

        // distinctness and group axioms
        for i in 0..self.order() {
            for j in (i + 1)..self.order() {
                if self.holonomy[i] == self.holonomy[j] {
                    errors.push(format!("holonomy elements {i} and {j} coincide"));
                }
            }
        }
        let id_idx = match self.identity_index() {
            Ok(i) => i,
            Err(_) => {
                errors.push("holonomy lacks the identity".into());
                if !errors.is_empty() {
                    return Err(Error::SpecInvalid(errors));
                }
                unreachable!()
            }
        };
        let table = match self.mult_table() {
            Ok(t) => t,
            Err(Error::SpecInvalid(mut e)) => {
                errors.append(&mut e);
                return Err(Error::SpecInvalid(errors));
            }
            Err(e) => return Err(e),
        };
        for (i, row) in table.iter().enumerate() {
            if !row.contains(&id_idx) {
                errors.push(format!(
                    "holonomy element {i} has no inverse in the listing"
                ));
            }
        }

        // holonomy map shape, unit preservation, homomorphism, compatibility
        if self.holonomy_map.len() != self.order() {
            errors.push(format!(
                "holonomy map has length {}, expected {}",
                self.holonomy_map.len(),
                self.order()
            ));
            return Err(Error::SpecInvalid(errors));
        }
        if self.holonomy_map.iter().any(|&m| m >= self.order()) {
            errors.push("holonomy map index out of range".into());
            return Err(Error::SpecInvalid(errors));
        }
        if self.holonomy_map[id_idx] != id_idx {
            errors.push("holonomy map must fix the identity".into());
        }
        for i in 0..self.order() {
            for j in 0..self.order() {
                if self.holonomy_map[table[i][j]]
                    != table[self.holonomy_map[i]][self.holonomy_map[j]]
                {
                    errors.push(format!(
                        "holonomy map is not multiplicative at pair ({i}, {j})"
                    ));
                }
            }
        }
        for i in 0..self.order() {
            let lhs = self.holonomy[self.holonomy_map[i]].mul(&self.d_lin)?;
            let rhs = self.d_lin.mul(&self.holonomy[i])?;
            if lhs != rhs {
                errors.push(format!(
                    "compatibility A'·D = D·A fails at holonomy element {i}"
                ));
            }
        }

        // concrete affine presentation, when present
        if let Some(aff) = &self.affine {
            if aff.len() != self.order() {
                errors.push(format!(
                    "affine listing has length {}, expected {}",
                    aff.len(),
                    self.order()
                ));
                return Err(Error::SpecInvalid(errors));
            }
            if aff.iter().any(|v| v.len() != n) {
                errors.push("affine translation of wrong length".into());
                return Err(Error::SpecInvalid(errors));
            }
            if !self.d_lin.is_integer() {
                errors.push(
                    "a concrete presentation needs an integer linear part (it must map the lattice into itself)"
                        .into(),
                );
            }
            for a in &self.holonomy {
                if !a.is_integer() {
                    errors.push("a concrete presentation needs integer holonomy matrices".into());
                    break;
                }
            }
            if !aff[id_idx].iter().all(|x| x.is_integer()) {
                errors.push("affine part of the identity must be a lattice vector".into());
            }
            // group closure: a_i + A_i a_j ≡ a_{i·j} (mod Z^n)
            for i in 0..self.order() {
                for j in 0..self.order() {
                    let moved = self.holonomy[i].mul_vec(&aff[j])?;
                    let sum = vec_add(&aff[i], &moved);
                    let diff = vec_sub(&sum, &aff[table[i][j]]);
                    if !vec_is_integral(&diff) {
                        errors.push(format!(
                            "affine data not closed under the product of elements {i} and {j}"
                        ));
                    }
                }
            }
            // endomorphism condition on sections: d + D a_i − A'_i d ≡ a_{h(i)}
            for i in 0..self.order() {
                let da = self.d_lin.mul_vec(&aff[i])?;
                let apd = self.holonomy[self.holonomy_map[i]].mul_vec(&self.d_trans)?;
                let img = vec_sub(&vec_add(&self.d_trans, &da), &apd);
                let diff = vec_sub(&img, &aff[self.holonomy_map[i]]);
                if !vec_is_integral(&diff) {
                    errors.push(format!(
                        "image of the section over holonomy element {i} leaves the group"
                    ));
                }
            }
            // torsion-freeness of the presented group
            if errors.is_empty() {
                for i in 0..self.order() {
                    if i == id_idx {
                        continue;
                    }
                    if element_order_has_torsion(self, i, id_idx, &table, aff)? {
                        errors.push(format!(
                            "presented group has torsion over holonomy element {i}"
                        ));
                    }
                }
            }
        } else if !self.is_integral() {
            warnings.push(
                "rational linear data: lattice-level class enumeration is unavailable".into(),
            );
        }

        if errors.is_empty() {
            Ok(ValidationReport { warnings })
        } else {
            Err(Error::SpecInvalid(errors))
        }
    }

    /// Linearized data of φ^k (k ≥ 1).
    pub fn iterate(&self, k: u64) -> Result<IterateData> {
        assert!(k >= 1, "iterate needs k >= 1");
        let mut d_lin = self.d_lin.clone();
        let mut d_trans = self.d_trans.clone();
        let mut map = self.holonomy_map.clone();
        for _ in 1..k {
            // φ^{m+1} = φ ∘ φ^m: translation d + D·d_m, linear D·D_m
            let moved = self.d_lin.mul_vec(&d_trans)?;
            d_trans = vec_add(&self.d_trans, &moved);
            d_lin = self.d_lin.mul(&d_lin)?;
            map = map.iter().map(|&i| self.holonomy_map[i]).collect();
        }
        Ok(IterateData {
            k,
            d_lin,
            d_trans,
            holonomy_map: map,
        })
    }
}

fn derive_holonomy_map(
    rank: usize,
    holonomy: &[RatMatrix],
    d_lin: &RatMatrix,
    warnings: &mut Vec<String>,
) -> Result<Vec<usize>> {
    let id = RatMatrix::identity(rank);
    let mut map = Vec::with_capacity(holonomy.len());
    let mut ambiguous = false;
    for (i, a) in holonomy.iter().enumerate() {
        let rhs = d_lin.mul(a)?;
        let mut solutions = holonomy
            .iter()
            .enumerate()
            .filter(|(_, ap)| ap.mul(d_lin).map(|m| m == rhs).unwrap_or(false))
            .map(|(j, _)| j);
        let first = solutions.next().ok_or_else(|| {
            Error::SpecInvalid(vec![format!(
                "no holonomy image satisfies A'·D = D·A for element {i}"
            )])
        })?;
        if solutions.next().is_some() {
            ambiguous = true;
        }
        // the identity must map to the identity even when D is singular
        if *a == id {
            let id_idx = holonomy.iter().position(|m| *m == id).unwrap();
            map.push(id_idx);
        } else {
            map.push(first);
        }
    }
    if ambiguous {
        warnings.push(
            "holonomy image not unique (singular linear part); using the first solution in listing order"
                .into(),
        );
    }
    Ok(map)
}

/// Does the cyclic subgroup generated over holonomy element `i` contain
/// torsion? Tests integer solvability of N·z = −N·a_i with N = Σ A_i^j.
fn element_order_has_torsion(
    spec: &EndoSpec,
    i: usize,
    id_idx: usize,
    table: &[Vec<usize>],
    aff: &[Vec<BigRational>],
) -> Result<bool> {
    let n = spec.rank;
    // order of A_i in the finite group and the norm sum N = Σ_{j<m} A_i^j
    let mut norm = RatMatrix::identity(n);
    let mut power = i;
    let mut acc = spec.holonomy[i].clone();
    let mut m = 1usize;
    while power != id_idx {
        norm = norm.add(&acc)?;
        power = table[power][i];
        acc = acc.mul(&spec.holonomy[i])?;
        m += 1;
        if m > spec.order() + 1 {
            return Err(Error::SpecInvalid(vec![format!(
                "holonomy element {i} does not have finite order within the listing"
            )]));
        }
    }
    let target: Vec<BigRational> = norm.mul_vec(&aff[i])?.iter().map(|x| -x).collect();
    // clear denominators across N and the target, then solve over Z via SNF
    let mut denom_lcm = BigInt::one();
    for r in 0..n {
        for c in 0..n {
            denom_lcm = num_integer::lcm(denom_lcm, norm.entry(r, c).denom().clone());
        }
    }
    for t in &target {
        denom_lcm = num_integer::lcm(denom_lcm, t.denom().clone());
    }
    let scale = BigRational::from(denom_lcm);
    let mut int_rows = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            int_rows.push((norm.entry(r, c) * &scale).to_integer());
        }
    }
    let nmat = crate::exactla::IntMatrix::new(n, n, int_rows)?;
    let b: Vec<BigInt> = target.iter().map(|t| (t * &scale).to_integer()).collect();
    let snf = smith_normal_form(&nmat)?;
    let ub = snf.u.mul_vec(&b)?;
    for (d, u) in snf.diagonal.iter().zip(&ub) {
        if d.is_zero() {
            if !u.is_zero() {
                return Ok(false);
            }
        } else if (u % d) != BigInt::zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub(crate) fn vec_add(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn vec_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn vec_is_integral(a: &[BigRational]) -> bool {
    a.iter().all(|x| x.is_integer())
}

/// Twisted fixed-point counts R(1..=kmax) from the averaging formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumSeq {
    pub kmax: u64,
    values: Vec<ExtNat>,
}

impl SpectrumSeq {
    pub fn value(&self, k: u64) -> &ExtNat {
        assert!(k >= 1 && k <= self.kmax, "level {k} out of range");
        &self.values[k as usize - 1]
    }

    pub fn values(&self) -> &[ExtNat] {
        &self.values
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(ExtNat::is_finite)
    }

    /// Map k ↦ R(k) over the finite levels only.
    pub fn finite_map(&self) -> BTreeMap<u64, BigInt> {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.as_finite().map(|x| (i as u64 + 1, x.clone())))
            .collect()
    }

    pub fn ext_map(&self) -> BTreeMap<u64, ExtNat> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| (i as u64 + 1, v.clone()))
            .collect()
    }
}

/// Evaluate the averaging formula for k = 1..=kmax.
pub fn reidemeister_sequence(spec: &EndoSpec, kmax: u64) -> Result<SpectrumSeq> {
    assert!(kmax >= 1, "kmax must be at least 1");
    let n = spec.rank;
    let order = BigInt::from(spec.order() as u64);
    let id = RatMatrix::identity(n);
    let mut values = Vec::with_capacity(kmax as usize);
    let mut dk = RatMatrix::identity(n);
    for k in 1..=kmax {
        dk = dk.mul(&spec.d_lin)?;
        let mut sum = BigRational::zero();
        let mut infinite = false;
        for a in &spec.holonomy {
            let det = id.sub(&a.mul(&dk)?)?.det()?;
            if det.is_zero() {
                infinite = true;
                break;
            }
            sum += det.abs();
        }
        if infinite {
            values.push(ExtNat::Infinite);
            continue;
        }
        let avg = sum / BigRational::from(order.clone());
        if !avg.is_integer() || avg.is_negative() {
            return Err(Error::SpecInconsistent(format!(
                "averaged count at level {k} is {avg}, not a non-negative integer"
            )));
        }
        values.push(ExtNat::Finite(avg.to_integer()));
    }
    Ok(SpectrumSeq { kmax, values })
}

/// Möbius-inverted count at level k (requires finite counts at all divisor
/// levels; an infinite divisor level makes the value undefined).
pub fn np_k(seq: &SpectrumSeq, k: u64) -> Result<BigInt> {
    for d in divisors(k) {
        if d <= seq.kmax && !seq.value(d).is_finite() {
            return Err(Error::InfiniteValue { k: d });
        }
        if d > seq.kmax {
            return Err(Error::MissingDivisor { k: d });
        }
    }
    Ok(dold_and_algebraic(k, &seq.finite_map())?.i_k)
}

/// Cumulative count at level k: R(k) itself when finite.
pub fn nf_k(seq: &SpectrumSeq, k: u64) -> Result<BigInt> {
    match seq.value(k) {
        ExtNat::Finite(v) => Ok(v.clone()),
        ExtNat::Infinite => Err(Error::InfiniteValue { k }),
    }
}

/// Levels at which new classes appear, plus levels left undefined by an
/// infinite count at some divisor.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HeightsReport {
    pub heights: BTreeSet<u64>,
    pub undefined: Vec<u64>,
}

pub fn heights_set(seq: &SpectrumSeq) -> Result<HeightsReport> {
    let mut report = HeightsReport::default();
    let finite = seq.finite_map();
    'levels: for k in 1..=seq.kmax {
        for d in divisors(k) {
            if !seq.value(d).is_finite() {
                report.undefined.push(k);
                continue 'levels;
            }
        }
        let inv = dold_and_algebraic(k, &finite)?;
        if !inv.i_k.is_zero() {
            report.heights.insert(k);
        }
    }
    Ok(report)
}
