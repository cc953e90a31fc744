//! Flat lookup tables for small-field arithmetic on canonical codes.
//!
//! Group enumeration and adjacency construction multiply millions of small
//! matrices; doing that through `FieldElem` means heap traffic on every
//! product. For fields up to `TABLE_CAP` elements the full multiplication,
//! addition, negation and inverse tables fit comfortably in memory, so the
//! hot loops can run on packed entry codes instead. The tables are built
//! once per field from the exact `FieldElem` arithmetic, which stays the
//! single source of truth.

use crate::ff::FieldDesc;

/// Largest field order for which tables are built (mul table is order^2 u32s).
pub const TABLE_CAP: u64 = 2048;

pub struct FieldTable {
    pub order: u32,
    mul: Vec<u32>,
    add: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

impl FieldTable {
    /// Build tables from the exact field arithmetic; `None` above the cap.
    pub fn build(field: &FieldDesc) -> Option<FieldTable> {
        let order = field.order();
        if order > TABLE_CAP {
            return None;
        }
        let n = order as usize;
        let elems: Vec<_> = (0..order).map(|c| field.element_from_code(c)).collect();
        let mut mul = vec![0u32; n * n];
        let mut add = vec![0u32; n * n];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate().skip(i) {
                let m = a.mul(b).code() as u32;
                let s = a.add(b).code() as u32;
                mul[i * n + j] = m;
                mul[j * n + i] = m;
                add[i * n + j] = s;
                add[j * n + i] = s;
            }
        }
        let neg: Vec<u32> = elems.iter().map(|a| a.neg().code() as u32).collect();
        let mut inv = vec![0u32; n];
        for (i, a) in elems.iter().enumerate().skip(1) {
            inv[i] = a.inv().expect("nonzero").code() as u32;
        }
        Some(FieldTable {
            order: order as u32,
            mul,
            add,
            neg,
            inv,
        })
    }

    #[inline(always)]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.order as usize + b as usize]
    }

    #[inline(always)]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.order as usize + b as usize]
    }

    #[inline(always)]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    #[inline(always)]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline(always)]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }
}

/// Maximum supported dim*dim for packed matrices.
pub const PACKED_MAX: usize = 16;

/// c = a * b on packed row-major code matrices.
#[inline]
pub fn packed_mul(t: &FieldTable, dim: usize, a: &[u32], b: &[u32], c: &mut [u32]) {
    for slot in c[..dim * dim].iter_mut() {
        *slot = 0;
    }
    for i in 0..dim {
        for k in 0..dim {
            let aik = a[i * dim + k];
            if aik == 0 {
                continue;
            }
            for j in 0..dim {
                let bkj = b[k * dim + j];
                if bkj != 0 {
                    let idx = i * dim + j;
                    c[idx] = t.add(c[idx], t.mul(aik, bkj));
                }
            }
        }
    }
}

/// Scale the matrix so its first nonzero entry is 1 (projective canonical).
#[inline]
pub fn packed_canon(t: &FieldTable, dim: usize, m: &mut [u32]) {
    let first = m[..dim * dim]
        .iter()
        .copied()
        .find(|&c| c != 0)
        .unwrap_or(0);
    if first <= 1 {
        return;
    }
    let s = t.inv(first);
    for c in m[..dim * dim].iter_mut() {
        if *c != 0 {
            *c = t.mul(*c, s);
        }
    }
}

/// Determinant of a packed matrix (cofactors up to 3x3, elimination beyond).
pub fn packed_det(t: &FieldTable, dim: usize, m: &[u32]) -> u32 {
    match dim {
        1 => m[0],
        2 => t.sub(t.mul(m[0], m[3]), t.mul(m[1], m[2])),
        3 => {
            let a = t.mul(m[0], t.sub(t.mul(m[4], m[8]), t.mul(m[5], m[7])));
            let b = t.mul(m[1], t.sub(t.mul(m[3], m[8]), t.mul(m[5], m[6])));
            let c = t.mul(m[2], t.sub(t.mul(m[3], m[7]), t.mul(m[4], m[6])));
            t.add(t.sub(a, b), c)
        }
        _ => {
            let mut w = m.to_vec();
            let mut det = 1u32;
            for col in 0..dim {
                let pivot = (col..dim).find(|&r| w[r * dim + col] != 0);
                let Some(p) = pivot else { return 0 };
                if p != col {
                    for j in 0..dim {
                        w.swap(col * dim + j, p * dim + j);
                    }
                    det = t.neg(det);
                }
                let pv = w[col * dim + col];
                det = t.mul(det, pv);
                let pv_inv = t.inv(pv);
                for r in col + 1..dim {
                    let f = w[r * dim + col];
                    if f == 0 {
                        continue;
                    }
                    let f = t.mul(f, pv_inv);
                    for j in col..dim {
                        let s = t.mul(f, w[col * dim + j]);
                        w[r * dim + j] = t.sub(w[r * dim + j], s);
                    }
                }
            }
            det
        }
    }
}
