//! BFS enumeration of finitely generated matrix groups.
//!
//! Elements are stored as packed canonical keys (not full matrices) so that
//! groups with a couple of million elements stay cheap; matrices are decoded
//! on demand. BFS order is fixed — FIFO queue, generators in the given order
//! followed by their inverses — so element indices, and everything exported
//! from them, are reproducible bit-for-bit.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::ff::FieldDesc;

use super::table::{packed_canon, packed_det, packed_mul, FieldTable, PACKED_MAX};
use super::{pack_codes, unpack_codes, Mat, ProjMatrix};

/// Group element usable by the enumerator: multiplication, inversion and a
/// packed canonical key.
pub trait CayleyElement: Clone {
    /// Whether products must be reduced to projective canonical form.
    const PROJECTIVE: bool;
    fn mul_elem(&self, other: &Self) -> Self;
    fn inv_elem(&self) -> Result<Self>;
    fn elem_key(&self) -> Result<u128>;
    fn decode(field: &FieldDesc, dim: usize, key: u128) -> Self;
    fn is_identity_elem(&self) -> bool;
    fn identity(field: &FieldDesc, dim: usize) -> Self;
    fn field(&self) -> &FieldDesc;
    fn dim(&self) -> usize;
}

impl CayleyElement for ProjMatrix {
    const PROJECTIVE: bool = true;
    fn mul_elem(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn inv_elem(&self) -> Result<Self> {
        Ok(self.inverse())
    }
    fn elem_key(&self) -> Result<u128> {
        self.key()
    }
    fn decode(field: &FieldDesc, dim: usize, key: u128) -> Self {
        ProjMatrix::from_key(field, dim, key)
    }
    fn is_identity_elem(&self) -> bool {
        self.is_identity()
    }
    fn identity(field: &FieldDesc, dim: usize) -> Self {
        ProjMatrix::identity(field, dim)
    }
    fn field(&self) -> &FieldDesc {
        ProjMatrix::field(self)
    }
    fn dim(&self) -> usize {
        ProjMatrix::dim(self)
    }
}

impl CayleyElement for Mat {
    const PROJECTIVE: bool = false;
    fn mul_elem(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn inv_elem(&self) -> Result<Self> {
        self.inverse()
    }
    fn elem_key(&self) -> Result<u128> {
        self.key()
    }
    fn decode(field: &FieldDesc, dim: usize, key: u128) -> Self {
        Mat::from_key(field, dim, key)
    }
    fn is_identity_elem(&self) -> bool {
        self.is_identity()
    }
    fn identity(field: &FieldDesc, dim: usize) -> Self {
        Mat::identity(field, dim)
    }
    fn field(&self) -> &FieldDesc {
        Mat::field(self)
    }
    fn dim(&self) -> usize {
        Mat::dim(self)
    }
}

/// A BFS-enumerated matrix group. Index 0 is the identity; discovery order
/// is deterministic.
pub struct GroupEnum<E: CayleyElement> {
    field: FieldDesc,
    dim: usize,
    generators: Vec<E>,
    /// generators followed by the inverses not already present (dedup by key)
    mult_set: Vec<E>,
    keys: Vec<u128>,
    index: HashMap<u128, u32>,
    complete: bool,
    cap: usize,
}

/// Default enumeration cap.
pub const DEFAULT_ENUM_CAP: usize = 2_000_000;

impl<E: CayleyElement> GroupEnum<E> {
    /// BFS closure of the generators and their inverses.
    ///
    /// If the closure exceeds `cap`, enumeration stops and the result is
    /// marked incomplete — an explicit first-class outcome, not an error.
    pub fn generate(gens: &[E], cap: usize) -> Result<GroupEnum<E>> {
        if gens.is_empty() {
            return Err(Error::Internal("generator list is empty".into()));
        }
        let field = gens[0].field().clone();
        let dim = gens[0].dim();
        for g in gens {
            if g.field() != &field || g.dim() != dim {
                return Err(Error::IncompatibleFields(
                    "generators must share one field and dimension".into(),
                ));
            }
        }
        // multiplication set: generators in order, then inverses, dedup by key
        let mut mult_set: Vec<E> = Vec::new();
        let mut seen: HashMap<u128, ()> = HashMap::new();
        for g in gens {
            let k = g.elem_key()?;
            if seen.insert(k, ()).is_none() {
                mult_set.push(g.clone());
            }
        }
        for g in gens {
            let gi = g.inv_elem()?;
            let k = gi.elem_key()?;
            if seen.insert(k, ()).is_none() {
                mult_set.push(gi);
            }
        }

        let identity = E::identity(&field, dim);
        let id_key = identity.elem_key()?;
        let mut keys = vec![id_key];
        let mut index = HashMap::new();
        index.insert(id_key, 0u32);
        let mut queue: VecDeque<u128> = VecDeque::new();
        queue.push_back(id_key);
        let mut complete = true;

        let table = if dim * dim <= PACKED_MAX {
            FieldTable::build(&field)
        } else {
            None
        };
        if let Some(t) = &table {
            // hot path: BFS on packed entry codes, identical discovery order
            let order = field.order();
            let mult_codes: Vec<Vec<u32>> = mult_set
                .iter()
                .map(|s| {
                    Ok(unpack_codes(s.elem_key()?, order, dim)
                        .iter()
                        .map(|&c| c as u32)
                        .collect())
                })
                .collect::<Result<Vec<_>>>()?;
            let mut prod = vec![0u32; dim * dim];
            'packed: while let Some(key) = queue.pop_front() {
                let x: Vec<u32> = unpack_codes(key, order, dim)
                    .iter()
                    .map(|&c| c as u32)
                    .collect();
                for s in &mult_codes {
                    packed_mul(t, dim, &x, s, &mut prod);
                    if E::PROJECTIVE {
                        packed_canon(t, dim, &mut prod);
                    }
                    let codes64: Vec<u64> = prod.iter().map(|&c| c as u64).collect();
                    let yk = pack_codes(&codes64, order, dim)?;
                    if let std::collections::hash_map::Entry::Vacant(e) = index.entry(yk) {
                        if keys.len() >= cap {
                            complete = false;
                            break 'packed;
                        }
                        e.insert(keys.len() as u32);
                        keys.push(yk);
                        queue.push_back(yk);
                    }
                }
            }
        } else {
            'bfs: while let Some(key) = queue.pop_front() {
                let x = E::decode(&field, dim, key);
                for s in &mult_set {
                    let y = x.mul_elem(s);
                    let yk = y.elem_key()?;
                    if let std::collections::hash_map::Entry::Vacant(e) = index.entry(yk) {
                        if keys.len() >= cap {
                            complete = false;
                            break 'bfs;
                        }
                        e.insert(keys.len() as u32);
                        keys.push(yk);
                        queue.push_back(yk);
                    }
                }
            }
        }

        Ok(GroupEnum {
            field,
            dim,
            generators: gens.to_vec(),
            mult_set,
            keys,
            index,
            complete,
            cap,
        })
    }

    /// Adjacency rows of the Cayley graph with respect to an explicit
    /// multiplication multiset: row v lists index(v * s) for each s, sorted.
    pub fn adjacency_rows(&self, mult: &[E]) -> Result<Vec<u32>> {
        if !self.complete {
            return Err(Error::IncompleteEnumeration { cap: self.cap });
        }
        let n = self.keys.len();
        let k = mult.len();
        let mut rows = vec![0u32; n * k];
        let table = if self.dim * self.dim <= PACKED_MAX {
            FieldTable::build(&self.field)
        } else {
            None
        };
        if let Some(t) = &table {
            let order = self.field.order();
            let dim = self.dim;
            let mult_codes: Vec<Vec<u32>> = mult
                .iter()
                .map(|s| {
                    Ok(unpack_codes(s.elem_key()?, order, dim)
                        .iter()
                        .map(|&c| c as u32)
                        .collect())
                })
                .collect::<Result<Vec<_>>>()?;
            let mut prod = vec![0u32; dim * dim];
            for (i, &key) in self.keys.iter().enumerate() {
                let x: Vec<u32> = unpack_codes(key, order, dim)
                    .iter()
                    .map(|&c| c as u32)
                    .collect();
                let row = &mut rows[i * k..(i + 1) * k];
                for (slot, s) in row.iter_mut().zip(&mult_codes) {
                    packed_mul(t, dim, &x, s, &mut prod);
                    if E::PROJECTIVE {
                        packed_canon(t, dim, &mut prod);
                    }
                    let codes64: Vec<u64> = prod.iter().map(|&c| c as u64).collect();
                    let yk = pack_codes(&codes64, order, dim)?;
                    *slot = *self.index.get(&yk).ok_or(Error::NotInGroup)?;
                }
                row.sort_unstable();
            }
        } else {
            for i in 0..n {
                let x = self.element(i as u32);
                let row = &mut rows[i * k..(i + 1) * k];
                for (slot, s) in row.iter_mut().zip(mult) {
                    let y = x.mul_elem(s);
                    *slot = self.index_of(&y)?;
                }
                row.sort_unstable();
            }
        }
        Ok(rows)
    }

    /// Determinant codes of every element, in index order.
    pub fn element_det_codes(&self) -> Result<Vec<u64>> {
        let table = if self.dim * self.dim <= PACKED_MAX {
            FieldTable::build(&self.field)
        } else {
            None
        };
        if let Some(t) = &table {
            let order = self.field.order();
            let dim = self.dim;
            Ok(self
                .keys
                .iter()
                .map(|&key| {
                    let x: Vec<u32> = unpack_codes(key, order, dim)
                        .iter()
                        .map(|&c| c as u32)
                        .collect();
                    packed_det(t, dim, &x) as u64
                })
                .collect())
        } else {
            // the key encodes the canonical representative's entries, so a
            // plain matrix decode gives the right determinant either way
            Ok(self
                .keys
                .iter()
                .map(|&key| Mat::from_key(&self.field, self.dim, key).det().code())
                .collect())
        }
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[E] {
        &self.generators
    }

    /// Generators and inverses, deduplicated, in the fixed BFS multiplication
    /// order.
    pub fn mult_set(&self) -> &[E] {
        &self.mult_set
    }

    /// Decode element `i`.
    pub fn element(&self, i: u32) -> E {
        E::decode(&self.field, self.dim, self.keys[i as usize])
    }

    pub fn keys(&self) -> &[u128] {
        &self.keys
    }

    /// Element list as row-major entry tables, index-stable across runs
    /// with the same generators.
    pub fn export_elements(&self) -> Vec<Vec<Vec<crate::ff::CoeffRepr>>> {
        self.keys
            .iter()
            .map(|&key| Mat::from_key(&self.field, self.dim, key).serial())
            .collect()
    }

    pub fn index_of(&self, e: &E) -> Result<u32> {
        let k = e.elem_key()?;
        self.index.get(&k).copied().ok_or(Error::NotInGroup)
    }

    pub fn contains(&self, e: &E) -> bool {
        e.elem_key()
            .map(|k| self.index.contains_key(&k))
            .unwrap_or(false)
    }

    /// Index of `elements[i] * elements[j]`.
    pub fn mul_indices(&self, i: u32, j: u32) -> Result<u32> {
        let prod = self.element(i).mul_elem(&self.element(j));
        self.index_of(&prod)
    }

    pub fn iter_elements(&self) -> impl Iterator<Item = E> + '_ {
        self.keys
            .iter()
            .map(move |&k| E::decode(&self.field, self.dim, k))
    }
}

/// Classification of an enumerated subgroup of PGL_d against the orders of
/// PSL_d and PGL_d.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectiveClass {
    Psl,
    Pgl,
    Other(u64),
}

impl ProjectiveClass {
    pub fn label(&self, dim: usize, ell: u64) -> String {
        match self {
            ProjectiveClass::Psl => format!("PSL{}({})", dim, ell),
            ProjectiveClass::Pgl => format!("PGL{}({})", dim, ell),
            ProjectiveClass::Other(n) => format!("OTHER(order {n})"),
        }
    }
}

/// |PGL_d(l)| = |GL_d(l)| / (l - 1).
pub fn pgl_order(dim: usize, ell: u64) -> u64 {
    let ell = ell as u128;
    let mut gl: u128 = 1;
    let ell_d = ell.pow(dim as u32);
    for i in 0..dim as u32 {
        gl *= ell_d - ell.pow(i);
    }
    (gl / (ell - 1)) as u64
}

/// |PSL_d(l)| = |PGL_d(l)| / gcd(d, l - 1).
pub fn psl_order(dim: usize, ell: u64) -> u64 {
    pgl_order(dim, ell) / gcd(dim as u64, ell - 1)
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Compare |G| against the PSL_2 / PGL_2 orders for the field order `ell`.
/// When the two orders coincide (characteristic 2) the PSL tag is preferred.
pub fn classify_quotient(group: &GroupEnum<ProjMatrix>, ell: u64) -> Result<ProjectiveClass> {
    if !group.is_complete() {
        return Err(Error::IncompleteEnumeration { cap: group.cap() });
    }
    if group.dim() != 2 {
        return Err(Error::Unsupported(
            "classify_quotient is defined for dimension 2; use classify_projective".into(),
        ));
    }
    Ok(classify_projective(group.len() as u64, 2, ell))
}

/// General-dimension order comparison.
pub fn classify_projective(order: u64, dim: usize, ell: u64) -> ProjectiveClass {
    let psl = psl_order(dim, ell);
    let pgl = pgl_order(dim, ell);
    if order == psl {
        ProjectiveClass::Psl
    } else if order == pgl {
        ProjectiveClass::Pgl
    } else {
        ProjectiveClass::Other(order)
    }
}

/// Result of a product-coverage computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coverage {
    pub covered: bool,
    pub reached: u64,
}

/// Compute |S_1 * S_2 * ... * S_l| over element indices of `group` and
/// whether the product set covers the whole group.
pub fn product_coverage<E: CayleyElement>(
    group: &GroupEnum<E>,
    factors: &[Vec<u32>],
) -> Result<Coverage> {
    if !group.is_complete() {
        return Err(Error::IncompleteEnumeration { cap: group.cap() });
    }
    let n = group.len();
    if factors.is_empty() {
        return Ok(Coverage {
            covered: n == 1,
            reached: 1,
        });
    }
    let words = n.div_ceil(64);
    let mut current = vec![0u64; words];
    for &i in &factors[0] {
        current[i as usize / 64] |= 1 << (i % 64);
    }
    for factor in &factors[1..] {
        let decoded: Vec<E> = factor.iter().map(|&j| group.element(j)).collect();
        let mut next = vec![0u64; words];
        for (w, &bits) in current.iter().enumerate() {
            let mut b = bits;
            while b != 0 {
                let bit = b.trailing_zeros() as usize;
                b &= b - 1;
                let i = (w * 64 + bit) as u32;
                let a = group.element(i);
                for d in &decoded {
                    let prod = a.mul_elem(d);
                    let idx = group.index_of(&prod)?;
                    next[idx as usize / 64] |= 1 << (idx % 64);
                }
            }
        }
        current = next;
    }
    let reached: u64 = current.iter().map(|w| w.count_ones() as u64).sum();
    Ok(Coverage {
        covered: reached == n as u64,
        reached,
    })
}

/// Partition `s` into orbits under conjugation by the elements of `h`
/// (which must be closed under multiplication). Orbits are ordered by their
/// smallest member index and each orbit lists member indices ascending.
pub fn conjugate_orbits(s: &[ProjMatrix], h: &[ProjMatrix]) -> Result<Vec<Vec<usize>>> {
    let mut key_to_pos: HashMap<u128, usize> = HashMap::new();
    for (i, x) in s.iter().enumerate() {
        key_to_pos.insert(x.key()?, i);
    }
    let mut assigned = vec![false; s.len()];
    let mut orbits = Vec::new();
    for start in 0..s.len() {
        if assigned[start] {
            continue;
        }
        let mut members = Vec::new();
        for t in h {
            let conj = s[start].conjugate_by(t);
            if let Some(&pos) = key_to_pos.get(&conj.key()?) {
                if !assigned[pos] {
                    assigned[pos] = true;
                    members.push(pos);
                }
            }
        }
        if !assigned[start] {
            // h need not contain the identity explicitly
            assigned[start] = true;
            members.push(start);
        }
        members.sort_unstable();
        orbits.push(members);
    }
    Ok(orbits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgrp::proj_canonical;

    fn proj(field: &FieldDesc, dim: usize, rows: &[i64]) -> ProjMatrix {
        proj_canonical(&Mat::from_int_rows(field, dim, rows).unwrap()).unwrap()
    }

    fn sl2_gens(field: &FieldDesc) -> Vec<ProjMatrix> {
        vec![
            proj(field, 2, &[1, 1, 0, 1]),
            proj(field, 2, &[0, 1, -1, 0]),
        ]
    }

    #[test]
    fn identity_alone() {
        let f = FieldDesc::prime(5).unwrap();
        let g = GroupEnum::generate(&[ProjMatrix::identity(&f, 2)], 100).unwrap();
        assert_eq!(g.len(), 1);
        assert!(g.is_complete());
    }

    #[test]
    fn psl2_3_has_order_12() {
        let f = FieldDesc::prime(3).unwrap();
        let g = GroupEnum::generate(&sl2_gens(&f), 10_000).unwrap();
        assert_eq!(g.len(), 12);
        assert_eq!(classify_quotient(&g, 3).unwrap(), ProjectiveClass::Psl);
    }

    #[test]
    fn export_is_index_stable() {
        let f = FieldDesc::prime(3).unwrap();
        let g1 = GroupEnum::generate(&sl2_gens(&f), 10_000).unwrap();
        let g2 = GroupEnum::generate(&sl2_gens(&f), 10_000).unwrap();
        let e1 = g1.export_elements();
        assert_eq!(e1.len(), 12);
        assert_eq!(e1, g2.export_elements());
        // identity sits at index 0
        assert_eq!(e1[0], Mat::identity(&f, 2).serial());
        let json = serde_json::to_string(&e1).unwrap();
        assert!(json.starts_with("[[["));
    }

    #[test]
    fn unipotent_is_cyclic_of_order_p() {
        let f = FieldDesc::prime(5).unwrap();
        let a = proj(&f, 2, &[1, 1, 0, 1]);
        let g = GroupEnum::generate(&[a], 100).unwrap();
        assert_eq!(g.len(), 5);
    }

    #[test]
    fn psl2_order_formula_cross_check() {
        for p in [3u64, 5, 7, 11, 13] {
            let f = FieldDesc::prime(p).unwrap();
            let g = GroupEnum::generate(&sl2_gens(&f), 2_000_000).unwrap();
            assert_eq!(g.len() as u64, p * (p * p - 1) / 2, "p = {p}");
            assert_eq!(g.len() as u64, psl_order(2, p));
        }
    }

    #[test]
    fn closure_property() {
        let f = FieldDesc::prime(5).unwrap();
        let g = GroupEnum::generate(&sl2_gens(&f), 10_000).unwrap();
        for i in 0..g.len() as u32 {
            let x = g.element(i);
            for s in g.mult_set() {
                let y = x.mul(s);
                assert!(g.contains(&y));
            }
        }
    }

    #[test]
    fn cap_exceeded_is_flagged_not_error() {
        let f = FieldDesc::prime(7).unwrap();
        let g = GroupEnum::generate(&sl2_gens(&f), 50).unwrap();
        assert!(!g.is_complete());
        assert!(classify_quotient(&g, 7).is_err());
    }

    #[test]
    fn deterministic_order() {
        let f = FieldDesc::prime(5).unwrap();
        let a = GroupEnum::generate(&sl2_gens(&f), 10_000).unwrap();
        let b = GroupEnum::generate(&sl2_gens(&f), 10_000).unwrap();
        assert_eq!(a.keys(), b.keys());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_projective(60, 2, 5), ProjectiveClass::Psl);
        assert_eq!(classify_projective(24, 2, 3), ProjectiveClass::Pgl);
        // char 2: orders coincide and PSL is preferred
        assert_eq!(classify_projective(504, 2, 8), ProjectiveClass::Psl);
        assert_eq!(classify_projective(100, 2, 5), ProjectiveClass::Other(100));
        // d = 3 orders
        assert_eq!(psl_order(3, 4), 20160);
        assert_eq!(pgl_order(3, 4), 60480);
    }

    #[test]
    fn mat_group_sl2_5() {
        // non-projective enumeration: |SL_2(5)| = 120
        let f = FieldDesc::prime(5).unwrap();
        let a = Mat::from_int_rows(&f, 2, &[1, 1, 0, 1]).unwrap();
        let b = Mat::from_int_rows(&f, 2, &[0, 1, -1, 0]).unwrap();
        let g = GroupEnum::generate(&[a, b], 10_000).unwrap();
        assert_eq!(g.len(), 120);
    }

    #[test]
    fn coverage_gl2_2_from_cyclic_factors() {
        // GL_2(2) (= S_3, 6 elements) is covered by <order-2> * <order-3>
        let f = FieldDesc::prime(2).unwrap();
        let swap = Mat::from_int_rows(&f, 2, &[0, 1, 1, 0]).unwrap();
        let rot = Mat::from_int_rows(&f, 2, &[0, 1, 1, 1]).unwrap();
        let g = GroupEnum::generate(&[swap.clone(), rot.clone()], 100).unwrap();
        assert_eq!(g.len(), 6);

        let sub2 = GroupEnum::generate(&[swap], 100).unwrap();
        let sub3 = GroupEnum::generate(&[rot], 100).unwrap();
        assert_eq!(sub2.len(), 2);
        assert_eq!(sub3.len(), 3);
        let f2: Vec<u32> = sub2
            .iter_elements()
            .map(|e| g.index_of(&e).unwrap())
            .collect();
        let f3: Vec<u32> = sub3
            .iter_elements()
            .map(|e| g.index_of(&e).unwrap())
            .collect();
        let cov = product_coverage(&g, &[f2.clone(), f3.clone()]).unwrap();
        assert!(cov.covered);
        assert_eq!(cov.reached, 6);

        // oracle: enumerate all 2*3 products directly
        let mut seen = std::collections::HashSet::new();
        for &i in &f2 {
            for &j in &f3 {
                seen.insert(g.mul_indices(i, j).unwrap());
            }
        }
        assert_eq!(seen.len() as u64, cov.reached);

        // identity-only factors never cover a nontrivial group
        let trivial = vec![vec![0u32], vec![0u32]];
        let cov2 = product_coverage(&g, &trivial).unwrap();
        assert!(!cov2.covered);
        assert_eq!(cov2.reached, 1);

        // the whole group as a single factor covers
        let all: Vec<u32> = (0..g.len() as u32).collect();
        let cov3 = product_coverage(&g, &[all]).unwrap();
        assert!(cov3.covered);
    }

    #[test]
    fn coverage_matches_bfs_diameter() {
        // S ∪ S^{-1} ∪ {id}, multiplied diameter-many times, covers the group
        let f = FieldDesc::prime(5).unwrap();
        let g = GroupEnum::generate(&sl2_gens(&f), 10_000).unwrap();
        let mut factor: Vec<u32> = vec![0];
        for s in g.mult_set() {
            factor.push(g.index_of(s).unwrap());
        }
        let mut factors = Vec::new();
        let mut covered = false;
        for _ in 0..40 {
            factors.push(factor.clone());
            let cov = product_coverage(&g, &factors).unwrap();
            if cov.covered {
                covered = true;
                break;
            }
        }
        assert!(covered);
    }

    #[test]
    fn orbits_under_trivial_and_full_group() {
        let f = FieldDesc::prime(5).unwrap();
        let g = GroupEnum::generate(&sl2_gens(&f), 10_000).unwrap();
        let s: Vec<ProjMatrix> = (0..4).map(|i| g.element(i)).collect();
        // conjugation by the identity only: singleton orbits
        let orbits = conjugate_orbits(&s, &[ProjMatrix::identity(&f, 2)]).unwrap();
        assert_eq!(orbits.len(), s.len());
        // conjugation by the full group: orbits are conjugacy-class
        // intersections; the identity is alone in its class
        let all: Vec<ProjMatrix> = g.iter_elements().collect();
        let orbits_full = conjugate_orbits(&s, &all).unwrap();
        assert!(orbits_full[0] == vec![0]);
        // orbit sizes partition the set
        let total: usize = orbits_full.iter().map(|o| o.len()).sum();
        assert_eq!(total, s.len());
        // an element commuting with all of H sits in a size-1 orbit
        let a = proj(&f, 2, &[1, 1, 0, 1]);
        let cyclic: Vec<ProjMatrix> = GroupEnum::generate(std::slice::from_ref(&a), 100)
            .unwrap()
            .iter_elements()
            .collect();
        let orbit_a = conjugate_orbits(std::slice::from_ref(&a), &cyclic).unwrap();
        assert_eq!(orbit_a, vec![vec![0]]);
    }

    #[test]
    fn det_square_class_constant_on_conjugacy_classes() {
        let f = FieldDesc::prime(5).unwrap();
        let g = GroupEnum::generate(&sl2_gens(&f), 10_000).unwrap();
        let x = g.element(3);
        let class = x.det_square_class();
        for h in g.iter_elements().take(20) {
            assert_eq!(x.conjugate_by(&h).det_square_class(), class);
        }
    }
}
