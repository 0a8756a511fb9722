//! Exact enumeration of twisted conjugacy classes at a fixed iteration level,
//! by brute force on the group presentation: classes over each holonomy
//! element are lattice cosets of `(I − A·D^k)·Z^n` labeled through the Smith
//! normal form, then fused under twisted conjugation by the holonomy sections
//! with a union–find pass. On top of the class tables sit the level-raising
//! map (boosting), the permutation induced by the endomorphism itself, and
//! the resulting orbit/height bookkeeping with its consistency checks.

use std::collections::BTreeMap;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::Error;
use crate::exactla::{smith_normal_form, IntMatrix, RatMatrix};
use crate::numth::{divisors, dold_and_algebraic, ExtNat};
use crate::spectrum::{vec_add, vec_is_integral, vec_sub, EndoSpec, IterateData, SpectrumSeq};
use crate::Result;

/// Default ceiling on the total number of lattice cosets a single level may
/// enumerate before the computation is declared out of budget.
pub const DEFAULT_COSET_BUDGET: u64 = 1_000_000;

/// A group element (v, A_h): holonomy listing index plus rational translation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineElement {
    pub holonomy_index: usize,
    pub translation: Vec<BigRational>,
}

impl AffineElement {
    /// Construct and check membership: the translation must be a lattice
    /// translate of the affine part attached to the holonomy element.
    pub fn new_checked(
        spec: &EndoSpec,
        holonomy_index: usize,
        translation: Vec<BigRational>,
    ) -> Result<Self> {
        if holonomy_index >= spec.order() {
            return Err(Error::InvalidArgument(format!(
                "holonomy index {holonomy_index} out of range"
            )));
        }
        if translation.len() != spec.rank {
            return Err(Error::InvalidArgument(format!(
                "translation has length {}, expected {}",
                translation.len(),
                spec.rank
            )));
        }
        let aff = spec.affine_parts();
        let diff = vec_sub(&translation, &aff[holonomy_index]);
        if !vec_is_integral(&diff) {
            return Err(Error::InvalidArgument(
                "translation is not a lattice translate of the section".into(),
            ));
        }
        Ok(AffineElement {
            holonomy_index,
            translation,
        })
    }
}

/// Group law (a, A)(b, B) = (a + A·b, AB).
pub fn compose(
    spec: &EndoSpec,
    table: &[Vec<usize>],
    x: &AffineElement,
    y: &AffineElement,
) -> Result<AffineElement> {
    let moved = spec.holonomy[x.holonomy_index].mul_vec(&y.translation)?;
    Ok(AffineElement {
        holonomy_index: table[x.holonomy_index][y.holonomy_index],
        translation: vec_add(&x.translation, &moved),
    })
}

/// Image of an element under the iterate described by `it`:
/// (v, A) ↦ (d_k + D^k·v − A'·d_k, A') with A' the k-fold holonomy image.
pub fn endo_image(spec: &EndoSpec, it: &IterateData, x: &AffineElement) -> Result<AffineElement> {
    let hp = it.holonomy_map[x.holonomy_index];
    let dv = it.d_lin.mul_vec(&x.translation)?;
    let ad = spec.holonomy[hp].mul_vec(&it.d_trans)?;
    Ok(AffineElement {
        holonomy_index: hp,
        translation: vec_sub(&vec_add(&it.d_trans, &dv), &ad),
    })
}

/// Level-raising map for m | n:
/// [α] at level m ↦ [α · φ^m(α) · φ^{2m}(α) ⋯ φ^{n−m}(α)] at level n.
pub fn boost(
    spec: &EndoSpec,
    table: &[Vec<usize>],
    alpha: &AffineElement,
    m: u64,
    n: u64,
) -> Result<AffineElement> {
    assert!(m >= 1 && n.is_multiple_of(m), "boost needs m | n");
    let mut acc = alpha.clone();
    let mut j = m;
    while j < n {
        let it = spec.iterate(j)?;
        let img = endo_image(spec, &it, alpha)?;
        acc = compose(spec, table, &acc, &img)?;
        j += m;
    }
    Ok(acc)
}

/// Per-holonomy coset-labeling data at a fixed level.
#[derive(Debug)]
struct SectionData {
    /// diag of the Smith normal form of I − A_h·D^k (all positive here)
    diag: Vec<BigInt>,
    /// unimodular row transform U with U·M·V = diag
    u: IntMatrix,
    /// integer inverse of U (decodes labels back to lattice vectors)
    u_inv: IntMatrix,
    /// mixed-radix strides so that rank order equals lex order on labels
    strides: Vec<u64>,
    /// number of cosets = product of the diagonal
    count: u64,
    /// first global id of this holonomy block
    offset: u64,
}

/// The twisted conjugacy classes of one iteration level.
#[derive(Debug)]
pub struct ClassTable {
    pub k: u64,
    /// canonical representatives, one per class, in canonical label order
    pub classes: Vec<AffineElement>,
    sections: Vec<SectionData>,
    /// resolved union–find: global lattice-coset id → class index
    membership: Vec<u32>,
    affine: Vec<Vec<BigRational>>,
}

impl ClassTable {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Class index of an arbitrary group element.
    pub fn class_of(&self, elem: &AffineElement) -> Result<usize> {
        let h = elem.holonomy_index;
        let z = vec_sub(&elem.translation, &self.affine[h]);
        if !vec_is_integral(&z) {
            return Err(Error::InvalidArgument(
                "element is not a lattice translate of its section".into(),
            ));
        }
        let z: Vec<BigInt> = z.iter().map(|x| x.to_integer()).collect();
        let id = self.lattice_id(h, &z)?;
        Ok(self.membership[id as usize] as usize)
    }

    fn lattice_id(&self, h: usize, z: &[BigInt]) -> Result<u64> {
        let sec = &self.sections[h];
        let uz = sec.u.mul_vec(z)?;
        let mut id = sec.offset;
        for (i, x) in uz.iter().enumerate() {
            let d = &sec.diag[i];
            let r = ((x % d) + d) % d;
            let r = u64::try_from(&r).expect("residue below budget fits u64");
            id += r * sec.strides[i];
        }
        Ok(id)
    }

    /// Decode a global lattice-coset id back to a group element.
    fn decode(&self, id: u64) -> Result<AffineElement> {
        let h = self
            .sections
            .iter()
            .rposition(|s| s.offset <= id)
            .expect("id within range");
        let sec = &self.sections[h];
        let mut rem = id - sec.offset;
        let mut r = vec![BigInt::zero(); sec.diag.len()];
        for (slot, stride) in r.iter_mut().zip(&sec.strides) {
            *slot = BigInt::from(rem / stride);
            rem %= stride;
        }
        let z = sec.u_inv.mul_vec(&r)?;
        let v = vec_add(
            &self.affine[h],
            &z.iter()
                .map(|x| BigRational::from(x.clone()))
                .collect::<Vec<_>>(),
        );
        Ok(AffineElement {
            holonomy_index: h,
            translation: v,
        })
    }
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let gp = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = gp;
            x = gp;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller id as root so roots are canonical minima
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

/// Enumerate the twisted conjugacy classes at level k by lattice cosets plus
/// holonomy fusion. Requires integer holonomy and linear part; specs given as
/// bare linear data are only accepted when the holonomy is trivial (a split
/// presentation with nontrivial holonomy would have torsion).
pub fn enumerate_classes(spec: &EndoSpec, k: u64, budget: u64) -> Result<ClassTable> {
    if !spec.is_integral() {
        return Err(Error::UnsupportedSpec(
            "class enumeration needs integer holonomy and linear part".into(),
        ));
    }
    if spec.affine.is_none() && spec.order() > 1 {
        return Err(Error::UnsupportedSpec(
            "class enumeration needs affine data when the holonomy is nontrivial".into(),
        ));
    }
    let n = spec.rank;
    let it = spec.iterate(k)?;
    let dk = it.d_lin.to_int().expect("integral checked");
    let affine = spec.affine_parts();
    let table = spec.mult_table()?;

    // per-holonomy coset labeling via Smith normal form of I − A_h·D^k
    let mut sections = Vec::with_capacity(spec.order());
    let mut total: u64 = 0;
    for h in 0..spec.order() {
        let a = spec.holonomy[h].to_int().expect("integral checked");
        let m = IntMatrix::identity(n).sub(&a.mul(&dk)?)?;
        let snf = smith_normal_form(&m)?;
        if snf.diagonal.iter().any(|d| d.is_zero()) {
            return Err(Error::InfiniteValue { k });
        }
        let mut count: u64 = 1;
        for d in &snf.diagonal {
            let d = u64::try_from(d).map_err(|_| {
                Error::UnsupportedSpec(format!("coset group too large at level {k}"))
            })?;
            count = count.checked_mul(d).ok_or_else(|| {
                Error::UnsupportedSpec(format!("coset group too large at level {k}"))
            })?;
        }
        let mut strides = vec![1u64; n];
        for i in (0..n.saturating_sub(1)).rev() {
            let d = u64::try_from(&snf.diagonal[i + 1]).expect("checked above");
            strides[i] = strides[i + 1] * d;
        }
        let u_inv = RatMatrix::from_int(&snf.u)
            .inverse()?
            .to_int()
            .expect("unimodular inverse is integral");
        sections.push(SectionData {
            diag: snf.diagonal,
            u: snf.u,
            u_inv,
            strides,
            count,
            offset: total,
        });
        total = total
            .checked_add(count)
            .ok_or_else(|| Error::UnsupportedSpec(format!("coset group too large at level {k}")))?;
    }
    if total > budget {
        return Err(Error::UnsupportedSpec(format!(
            "level {k} needs {total} lattice cosets, over the budget of {budget}"
        )));
    }

    let mut uf = UnionFind::new(total as usize);

    // fusion by the holonomy sections: conjugating a class over A_h by the
    // section s_C = (a_C, C) sends lattice offsets z ↦ C·z + offset(h, C)
    // and holonomy h ↦ h' = C·A_h·(C')^{-1}; precompute both per (h, C).
    let id_idx = spec.identity_index()?;
    let scaled_affine: Vec<Vec<BigRational>> = affine.clone();
    for c in 0..spec.order() {
        if c == id_idx {
            continue;
        }
        let cp = it.holonomy_map[c];
        // t_C = d_k + D^k·a_C − A_{C'}·d_k, the translation of φ^k(s_C)
        let t_c = {
            let da = it.d_lin.mul_vec(&scaled_affine[c])?;
            let ad = spec.holonomy[cp].mul_vec(&it.d_trans)?;
            vec_sub(&vec_add(&it.d_trans, &da), &ad)
        };
        // inverse index of C'
        let cp_inv = (0..spec.order())
            .find(|&j| table[cp][j] == id_idx)
            .expect("group closure validated");
        let c_int = spec.holonomy[c].to_int().expect("integral checked");
        for h in 0..spec.order() {
            let hp = table[table[c][h]][cp_inv];
            // offset(h,C) = a_C + C·a_h − (C·A_h·C'^{-1})·t_C − a_{h'}
            let ca = spec.holonomy[c].mul_vec(&scaled_affine[h])?;
            let wt = spec.holonomy[hp].mul_vec(&t_c)?;
            let off = vec_sub(
                &vec_sub(&vec_add(&scaled_affine[c], &ca), &wt),
                &scaled_affine[hp],
            );
            if !vec_is_integral(&off) {
                return Err(Error::AssertionViolated(format!(
                    "fusion offset not integral at holonomy {h} under section {c}"
                )));
            }
            let off: Vec<BigInt> = off.iter().map(|x| x.to_integer()).collect();
            fuse_block(&sections, &mut uf, h, hp, &c_int, &off)?;
        }
    }

    // resolve components; roots are the minimal global ids of each class
    let mut root_to_class: HashMap<u32, u32> = HashMap::new();
    let mut membership = vec![0u32; total as usize];
    let mut class_roots: Vec<u64> = Vec::new();
    for id in 0..total {
        let root = uf.find(id as u32);
        let next = root_to_class.len() as u32;
        let idx = *root_to_class.entry(root).or_insert_with(|| {
            class_roots.push(root as u64);
            next
        });
        membership[id as usize] = idx;
    }

    let mut out = ClassTable {
        k,
        classes: Vec::new(),
        sections,
        membership,
        affine,
    };
    out.classes = class_roots
        .iter()
        .map(|&root| out.decode(root))
        .collect::<Result<Vec<_>>>()?;
    Ok(out)
}

/// Union every coset over holonomy h with its twisted conjugate over h',
/// where the conjugation acts on lattice offsets as z ↦ C·z + off.
fn fuse_block(
    sections: &[SectionData],
    uf: &mut UnionFind,
    h: usize,
    hp: usize,
    c_int: &IntMatrix,
    off: &[BigInt],
) -> Result<()> {
    let n = sections[h].diag.len();
    let src = &sections[h];
    let dst = &sections[hp];
    // enumerate labels r in lex order, decode z = U_h^{-1} r, map, re-encode
    let mut digits = vec![0u64; n];
    for local in 0..src.count {
        let mut rem = local;
        for (digit, stride) in digits.iter_mut().zip(&src.strides) {
            *digit = rem / stride;
            rem %= stride;
        }
        let r: Vec<BigInt> = digits.iter().map(|&d| BigInt::from(d)).collect();
        let z = src.u_inv.mul_vec(&r)?;
        let mut zp = c_int.mul_vec(&z)?;
        for (i, o) in off.iter().enumerate() {
            zp[i] += o;
        }
        let uz = dst.u.mul_vec(&zp)?;
        let mut target = dst.offset;
        for (i, x) in uz.iter().enumerate() {
            let d = &dst.diag[i];
            let rr = ((x % d) + d) % d;
            target += u64::try_from(&rr).expect("residue fits u64") * dst.strides[i];
        }
        uf.union((src.offset + local) as u32, target as u32);
    }
    Ok(())
}

/// Orbit and height structure of the classes at one level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitDecomposition {
    pub k: u64,
    /// number of classes at this level (must equal the averaged count)
    pub class_count: u64,
    /// orbits of the induced permutation [α] ↦ [φ(α)], as class-index cycles
    pub orbits: Vec<Vec<usize>>,
    /// per class: the minimal divisor level it lifts from
    pub depths: Vec<u64>,
    /// height m ↦ number of classes of height m (Σ = class_count)
    pub height_counts: BTreeMap<u64, u64>,
}

/// Enumerate level k, the permutation induced by the endomorphism, and the
/// minimal origin level of every class, cross-checking each piece:
/// the class count must match the averaged count, per-height totals must
/// match the Möbius-inverted counts, and each class's origin level must
/// equal its orbit length.
pub fn orbit_decomposition(
    spec: &EndoSpec,
    seq: &SpectrumSeq,
    k: u64,
    budget: u64,
) -> Result<OrbitDecomposition> {
    assert!(
        k >= 1 && k <= seq.kmax,
        "level out of range of the sequence"
    );
    for d in divisors(k) {
        if let ExtNat::Infinite = seq.value(d) {
            return Err(Error::InfiniteValue { k: d });
        }
    }
    let table = spec.mult_table()?;
    let level_k = enumerate_classes(spec, k, budget)?;

    // oracle cross-check: enumerated count vs averaged count
    let expected = seq
        .value(k)
        .as_finite()
        .expect("checked finite above")
        .clone();
    let got = BigInt::from(level_k.class_count() as u64);
    if got != expected {
        return Err(Error::OracleMismatch {
            k,
            enumerated: got,
            expected,
        });
    }

    // permutation induced by φ on level-k classes
    let it1 = spec.iterate(1)?;
    let mut perm = Vec::with_capacity(level_k.class_count());
    for rep in &level_k.classes {
        let img = endo_image(spec, &it1, rep)?;
        perm.push(level_k.class_of(&img)?);
    }
    let mut seen = vec![false; perm.len()];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut cur = perm[start];
        while cur != start {
            seen[cur] = true;
            cycle.push(cur);
            cur = perm[cur];
        }
        if !k.is_multiple_of(cycle.len() as u64) {
            return Err(Error::AssertionViolated(format!(
                "orbit length {} does not divide the level {k}",
                cycle.len()
            )));
        }
        orbits.push(cycle);
    }

    // minimal origin level by boosting every lower divisor level up to k
    let mut depths = vec![k; level_k.class_count()];
    for m in divisors(k) {
        if m == k {
            break;
        }
        let level_m = enumerate_classes(spec, m, budget)?;
        for rep in &level_m.classes {
            let boosted = boost(spec, &table, rep, m, k)?;
            let idx = level_k.class_of(&boosted)?;
            if depths[idx] > m {
                depths[idx] = m;
            }
        }
    }

    // heights bookkeeping and consistency checks
    let mut height_counts: BTreeMap<u64, u64> = BTreeMap::new();
    for &d in &depths {
        *height_counts.entry(d).or_insert(0) += 1;
    }
    let finite = seq.finite_map();
    for m in divisors(k) {
        let expected_m = dold_and_algebraic(m, &finite)?.i_k;
        let got_m = BigInt::from(height_counts.get(&m).copied().unwrap_or(0));
        if got_m != expected_m {
            return Err(Error::AssertionViolated(format!(
                "level {k}: {got_m} classes of height {m}, Möbius count expects {expected_m}"
            )));
        }
    }
    for orbit in &orbits {
        let len = orbit.len() as u64;
        for &idx in orbit {
            if depths[idx] != len {
                return Err(Error::AssertionViolated(format!(
                    "class {idx} at level {k} has height {} but orbit length {len}",
                    depths[idx]
                )));
            }
        }
    }

    Ok(OrbitDecomposition {
        k,
        class_count: level_k.class_count() as u64,
        orbits,
        depths,
        height_counts,
    })
}

/// Compose the endomorphism with conjugation by a group element β = (b, B):
/// g ↦ β·φ(g)·β^{-1}. The twisted-conjugacy counts at every level are
/// invariant under this change.
pub fn conjugate_endo(spec: &EndoSpec, beta: &AffineElement) -> Result<EndoSpec> {
    // membership check
    let beta = AffineElement::new_checked(spec, beta.holonomy_index, beta.translation.clone())?;
    let b_idx = beta.holonomy_index;
    let b_mat = &spec.holonomy[b_idx];
    let table = spec.mult_table()?;
    let id_idx = spec.identity_index()?;
    let b_inv = (0..spec.order())
        .find(|&j| table[b_idx][j] == id_idx)
        .expect("group closure validated");

    let d_lin = b_mat.mul(&spec.d_lin)?;
    let moved = b_mat.mul_vec(&spec.d_trans)?;
    let d_trans = vec_add(&beta.translation, &moved);
    let holonomy_map: Vec<usize> = (0..spec.order())
        .map(|i| table[table[b_idx][spec.holonomy_map[i]]][b_inv])
        .collect();

    let (out, _report) = EndoSpec::new(
        spec.rank,
        spec.holonomy.clone(),
        spec.affine.clone(),
        d_lin,
        d_trans,
        Some(holonomy_map),
    )?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::reidemeister_sequence;
    use num_bigint::BigInt;
    use num_traits::FromPrimitive;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn rmat(n: usize, entries: &[i64]) -> RatMatrix {
        RatMatrix::new(
            n,
            n,
            entries
                .iter()
                .map(|&e| BigRational::from_i64(e).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn fib_square() -> EndoSpec {
        EndoSpec::new(
            2,
            vec![RatMatrix::identity(2)],
            None,
            rmat(2, &[2, 1, 1, 1]),
            vec![BigRational::zero(), BigRational::zero()],
            None,
        )
        .unwrap()
        .0
    }

    fn klein_spec() -> EndoSpec {
        let b = rmat(2, &[1, 0, 0, -1]);
        let affine = vec![
            vec![BigRational::zero(), BigRational::zero()],
            vec![rat(1, 2), BigRational::zero()],
        ];
        EndoSpec::new(
            2,
            vec![RatMatrix::identity(2), b],
            Some(affine),
            rmat(2, &[3, 0, 0, 2]),
            vec![BigRational::zero(), BigRational::zero()],
            None,
        )
        .unwrap()
        .0
    }

    fn z_spec(d: i64) -> EndoSpec {
        EndoSpec::new(
            1,
            vec![RatMatrix::identity(1)],
            None,
            rmat(1, &[d]),
            vec![BigRational::zero()],
            None,
        )
        .unwrap()
        .0
    }

    #[test]
    fn torus_counts_by_enumeration() {
        let spec = fib_square();
        for (k, expect) in [(1u64, 1usize), (2, 5), (3, 16), (4, 45)] {
            let t = enumerate_classes(&spec, k, DEFAULT_COSET_BUDGET).unwrap();
            assert_eq!(t.class_count(), expect, "level {k}");
        }
    }

    #[test]
    fn glide_counts_by_enumeration() {
        let spec = klein_spec();
        for (k, expect) in [(1u64, 4usize), (2, 32), (3, 208)] {
            let t = enumerate_classes(&spec, k, DEFAULT_COSET_BUDGET).unwrap();
            assert_eq!(t.class_count(), expect, "level {k}");
        }
    }

    #[test]
    fn orbit_structure_doubling() {
        let spec = z_spec(2);
        let seq = reidemeister_sequence(&spec, 6).unwrap();
        let dec = orbit_decomposition(&spec, &seq, 2, DEFAULT_COSET_BUDGET).unwrap();
        assert_eq!(dec.class_count, 3);
        // one fixed class lifted from level 1, one 2-cycle new at level 2
        assert_eq!(dec.height_counts.get(&1), Some(&1));
        assert_eq!(dec.height_counts.get(&2), Some(&2));
        let mut lens: Vec<usize> = dec.orbits.iter().map(|o| o.len()).collect();
        lens.sort();
        assert_eq!(lens, vec![1, 2]);
    }

    #[test]
    fn orbit_structure_torus() {
        let spec = fib_square();
        let seq = reidemeister_sequence(&spec, 4).unwrap();
        let dec = orbit_decomposition(&spec, &seq, 4, DEFAULT_COSET_BUDGET).unwrap();
        assert_eq!(dec.class_count, 45);
        assert_eq!(dec.height_counts.get(&1), Some(&1));
        assert_eq!(dec.height_counts.get(&2), Some(&4));
        assert_eq!(dec.height_counts.get(&4), Some(&40));
    }

    #[test]
    fn orbit_structure_glide() {
        let spec = klein_spec();
        let seq = reidemeister_sequence(&spec, 2).unwrap();
        let dec = orbit_decomposition(&spec, &seq, 2, DEFAULT_COSET_BUDGET).unwrap();
        assert_eq!(dec.class_count, 32);
        assert_eq!(dec.height_counts.get(&1), Some(&4));
        assert_eq!(dec.height_counts.get(&2), Some(&28));
    }

    #[test]
    fn infinite_level_is_rejected() {
        let spec = z_spec(-1);
        let seq = reidemeister_sequence(&spec, 2).unwrap();
        assert_eq!(
            orbit_decomposition(&spec, &seq, 2, DEFAULT_COSET_BUDGET).unwrap_err(),
            Error::InfiniteValue { k: 2 }
        );
    }

    #[test]
    fn budget_is_enforced() {
        let spec = klein_spec();
        let err = enumerate_classes(&spec, 5, 100).unwrap_err();
        match err {
            Error::UnsupportedSpec(msg) => assert!(msg.contains("budget"), "{msg}"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn membership_is_checked() {
        let spec = klein_spec();
        let err =
            AffineElement::new_checked(&spec, 1, vec![rat(1, 3), BigRational::zero()]).unwrap_err();
        match err {
            Error::InvalidArgument(msg) => assert!(msg.contains("lattice"), "{msg}"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn conjugation_preserves_counts() {
        let spec = klein_spec();
        // conjugate by the glide section itself
        let beta =
            AffineElement::new_checked(&spec, 1, vec![rat(1, 2), BigRational::zero()]).unwrap();
        let conj = conjugate_endo(&spec, &beta).unwrap();
        let seq1 = reidemeister_sequence(&spec, 4).unwrap();
        let seq2 = reidemeister_sequence(&conj, 4).unwrap();
        assert_eq!(seq1, seq2);
        for k in 1..=3u64 {
            let a = enumerate_classes(&spec, k, DEFAULT_COSET_BUDGET).unwrap();
            let b = enumerate_classes(&conj, k, DEFAULT_COSET_BUDGET).unwrap();
            assert_eq!(a.class_count(), b.class_count(), "level {k}");
        }
    }

    #[test]
    fn conjugation_by_lattice_shift_preserves_counts() {
        let spec = fib_square();
        let beta = AffineElement::new_checked(
            &spec,
            0,
            vec![
                BigRational::from_i64(1).unwrap(),
                BigRational::from_i64(-2).unwrap(),
            ],
        )
        .unwrap();
        let conj = conjugate_endo(&spec, &beta).unwrap();
        let seq1 = reidemeister_sequence(&spec, 5).unwrap();
        let seq2 = reidemeister_sequence(&conj, 5).unwrap();
        assert_eq!(seq1, seq2);
    }

    #[test]
    fn boost_lands_in_fixed_class() {
        // doubling map: the single level-1 class boosts into the level-2
        // class fixed by the induced permutation
        let spec = z_spec(2);
        let table = spec.mult_table().unwrap();
        let level2 = enumerate_classes(&spec, 2, DEFAULT_COSET_BUDGET).unwrap();
        let alpha = AffineElement::new_checked(&spec, 0, vec![BigRational::zero()]).unwrap();
        let boosted = boost(&spec, &table, &alpha, 1, 2).unwrap();
        let idx = level2.class_of(&boosted).unwrap();
        let it1 = spec.iterate(1).unwrap();
        let img = endo_image(&spec, &it1, &level2.classes[idx]).unwrap();
        assert_eq!(level2.class_of(&img).unwrap(), idx);
    }
}
