//! Matrices over finite fields and canonical projective representatives.
//!
//! `Mat` is a plain d-by-d matrix with `FieldElem` entries. `ProjMatrix`
//! wraps a matrix in canonical projective form: the first nonzero entry in
//! row-major order is scaled to 1, so equal projective classes have equal
//! representations and can be hashed. Both pack into a `u128` key (entry
//! codes, fixed bit width) for group enumeration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::{CoeffRepr, FieldDesc, FieldElem};

pub mod enumerate;
pub mod table;

pub use enumerate::{
    classify_projective, classify_quotient, conjugate_orbits, pgl_order, product_coverage,
    psl_order, Coverage, GroupEnum, ProjectiveClass,
};

/// Row-major d-by-d matrix over a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    field: FieldDesc,
    dim: usize,
    entries: Vec<FieldElem>,
}

impl Mat {
    pub fn new(field: &FieldDesc, dim: usize, entries: Vec<FieldElem>) -> Result<Mat> {
        if entries.len() != dim * dim {
            return Err(Error::Internal(format!(
                "expected {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        for e in &entries {
            if e.field() != field {
                return Err(Error::IncompatibleFields(
                    "matrix entries must lie in the stated field".into(),
                ));
            }
        }
        Ok(Mat {
            field: field.clone(),
            dim,
            entries,
        })
    }

    pub fn identity(field: &FieldDesc, dim: usize) -> Mat {
        let mut entries = vec![field.zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = field.one();
        }
        Mat {
            field: field.clone(),
            dim,
            entries,
        }
    }

    pub fn scalar(field: &FieldDesc, dim: usize, s: &FieldElem) -> Mat {
        let mut entries = vec![field.zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = s.clone();
        }
        Mat {
            field: field.clone(),
            dim,
            entries,
        }
    }

    /// Matrix from integer entries reduced into the field (row-major).
    pub fn from_int_rows(field: &FieldDesc, dim: usize, rows: &[i64]) -> Result<Mat> {
        if rows.len() != dim * dim {
            return Err(Error::Internal("wrong number of integer entries".into()));
        }
        Ok(Mat {
            field: field.clone(),
            dim,
            entries: rows.iter().map(|&v| field.from_prime_int(v)).collect(),
        })
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> &FieldElem {
        &self.entries[row * self.dim + col]
    }

    pub fn set_entry(&mut self, row: usize, col: usize, v: FieldElem) {
        self.entries[row * self.dim + col] = v;
    }

    pub fn entries(&self) -> &[FieldElem] {
        &self.entries
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        debug_assert_eq!(self.dim, other.dim);
        debug_assert!(self.field == other.field);
        let d = self.dim;
        let mut entries = vec![self.field.zero(); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = other.entry(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    entries[i * d + j] = entries[i * d + j].add(&a.mul(b));
                }
            }
        }
        Mat {
            field: self.field.clone(),
            dim: d,
            entries,
        }
    }

    pub fn add(&self, other: &Mat) -> Mat {
        debug_assert_eq!(self.dim, other.dim);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect();
        Mat {
            field: self.field.clone(),
            dim: self.dim,
            entries,
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        debug_assert_eq!(self.dim, other.dim);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.sub(b))
            .collect();
        Mat {
            field: self.field.clone(),
            dim: self.dim,
            entries,
        }
    }

    pub fn scale(&self, s: &FieldElem) -> Mat {
        Mat {
            field: self.field.clone(),
            dim: self.dim,
            entries: self.entries.iter().map(|e| e.mul(s)).collect(),
        }
    }

    pub fn pow(&self, mut exp: u64) -> Mat {
        let mut result = Mat::identity(&self.field, self.dim);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> FieldElem {
        let d = self.dim;
        let mut m: Vec<Vec<FieldElem>> = (0..d)
            .map(|i| self.entries[i * d..(i + 1) * d].to_vec())
            .collect();
        let mut det = self.field.one();
        for col in 0..d {
            let pivot = (col..d).find(|&r| !m[r][col].is_zero());
            let Some(p) = pivot else {
                return self.field.zero();
            };
            if p != col {
                m.swap(col, p);
                det = det.neg();
            }
            let pv = m[col][col].clone();
            det = det.mul(&pv);
            let inv = pv.inv().expect("pivot nonzero");
            for r in col + 1..d {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = m[r][col].mul(&inv);
                for c in col..d {
                    let sub = factor.mul(&m[col][c]);
                    m[r][c] = m[r][c].sub(&sub);
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Mat> {
        let d = self.dim;
        let mut m: Vec<Vec<FieldElem>> = (0..d)
            .map(|i| {
                let mut row = self.entries[i * d..(i + 1) * d].to_vec();
                for j in 0..d {
                    row.push(if i == j {
                        self.field.one()
                    } else {
                        self.field.zero()
                    });
                }
                row
            })
            .collect();
        for col in 0..d {
            let pivot = (col..d).find(|&r| !m[r][col].is_zero());
            let Some(p) = pivot else {
                return Err(Error::SingularMatrix);
            };
            m.swap(col, p);
            let inv = m[col][col].inv().expect("pivot nonzero");
            for c in 0..2 * d {
                m[col][c] = m[col][c].mul(&inv);
            }
            for r in 0..d {
                if r != col && !m[r][col].is_zero() {
                    let factor = m[r][col].clone();
                    for c in 0..2 * d {
                        let sub = factor.mul(&m[col][c]);
                        m[r][c] = m[r][c].sub(&sub);
                    }
                }
            }
        }
        let mut entries = Vec::with_capacity(d * d);
        for row in m {
            entries.extend_from_slice(&row[d..]);
        }
        Ok(Mat {
            field: self.field.clone(),
            dim: d,
            entries,
        })
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat::identity(&self.field, self.dim)
    }

    /// Whether the matrix is a scalar multiple of the identity.
    pub fn is_scalar(&self) -> bool {
        let d = self.dim;
        let s = self.entry(0, 0);
        for i in 0..d {
            for j in 0..d {
                let e = self.entry(i, j);
                if i == j {
                    if e != s {
                        return false;
                    }
                } else if !e.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn entry_codes(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.code()).collect()
    }

    /// Packed canonical key: entry codes at fixed bit width, row-major.
    pub fn key(&self) -> Result<u128> {
        pack_codes(&self.entry_codes(), self.field.order(), self.dim)
    }

    pub fn from_key(field: &FieldDesc, dim: usize, key: u128) -> Mat {
        let codes = unpack_codes(key, field.order(), dim);
        Mat {
            field: field.clone(),
            dim,
            entries: codes.iter().map(|&c| field.element_from_code(c)).collect(),
        }
    }

    pub fn serial(&self) -> Vec<Vec<CoeffRepr>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.entry(i, j).serial()).collect())
            .collect()
    }

    pub fn from_serial(field: &FieldDesc, dim: usize, rows: &[Vec<CoeffRepr>]) -> Result<Mat> {
        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Parse("matrix shape mismatch".into()));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            for repr in row {
                entries.push(CoeffRepr::to_elem(repr, field)?);
            }
        }
        Mat::new(field, dim, entries)
    }
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "Mat{}x{} over F_{} [",
            self.dim,
            self.dim,
            self.field.order()
        )?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                write!(f, "{:?} ", self.entry(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl std::hash::Hash for Mat {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        for e in &self.entries {
            e.code().hash(state);
        }
    }
}

pub(crate) fn bits_per_entry(order: u64) -> u32 {
    64 - (order - 1).leading_zeros().min(63)
}

pub(crate) fn pack_codes(codes: &[u64], order: u64, dim: usize) -> Result<u128> {
    let bits = bits_per_entry(order);
    let total = bits * (dim * dim) as u32;
    if total > 128 {
        return Err(Error::KeyOverflow {
            bits: total,
            dim,
            order,
        });
    }
    let mut key: u128 = 0;
    for &c in codes.iter().rev() {
        key = (key << bits) | c as u128;
    }
    Ok(key)
}

pub(crate) fn unpack_codes(mut key: u128, order: u64, dim: usize) -> Vec<u64> {
    let bits = bits_per_entry(order);
    let mask: u128 = (1u128 << bits) - 1;
    (0..dim * dim)
        .map(|_| {
            let c = (key & mask) as u64;
            key >>= bits;
            c
        })
        .collect()
}

/// Matrix in canonical projective form: the first nonzero entry in row-major
/// order equals 1, so `canonical(s*M) == canonical(M)` for every nonzero
/// scalar s.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjMatrix {
    mat: Mat,
}

/// Canonicalize an invertible matrix into its projective representative.
pub fn proj_canonical(m: &Mat) -> Result<ProjMatrix> {
    if m.det().is_zero() {
        return Err(Error::SingularMatrix);
    }
    Ok(canonicalize_unchecked(m))
}

fn canonicalize_unchecked(m: &Mat) -> ProjMatrix {
    let first = m
        .entries()
        .iter()
        .find(|e| !e.is_zero())
        .expect("invertible matrix is nonzero");
    if first.is_one() {
        return ProjMatrix { mat: m.clone() };
    }
    let inv = first.inv().expect("nonzero entry");
    ProjMatrix { mat: m.scale(&inv) }
}

impl ProjMatrix {
    pub fn identity(field: &FieldDesc, dim: usize) -> ProjMatrix {
        ProjMatrix {
            mat: Mat::identity(field, dim),
        }
    }

    pub fn mat(&self) -> &Mat {
        &self.mat
    }

    pub fn field(&self) -> &FieldDesc {
        self.mat.field()
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn mul(&self, other: &ProjMatrix) -> ProjMatrix {
        canonicalize_unchecked(&self.mat.mul(&other.mat))
    }

    pub fn inverse(&self) -> ProjMatrix {
        canonicalize_unchecked(&self.mat.inverse().expect("projective class is invertible"))
    }

    pub fn conjugate_by(&self, h: &ProjMatrix) -> ProjMatrix {
        h.mul(self).mul(&h.inverse())
    }

    pub fn is_identity(&self) -> bool {
        self.mat.is_scalar() && !self.mat.entry(0, 0).is_zero()
    }

    pub fn key(&self) -> Result<u128> {
        self.mat.key()
    }

    pub fn from_key(field: &FieldDesc, dim: usize, key: u128) -> ProjMatrix {
        ProjMatrix {
            mat: Mat::from_key(field, dim, key),
        }
    }

    /// Whether det of the canonical representative is a square in the field.
    ///
    /// Well-defined on projective classes in dimension 2 because scaling by
    /// s multiplies the determinant by s^2.
    pub fn det_square_class(&self) -> bool {
        self.mat.det().is_square()
    }

    pub fn serial(&self) -> Vec<Vec<CoeffRepr>> {
        self.mat.serial()
    }

    pub fn from_serial(
        field: &FieldDesc,
        dim: usize,
        rows: &[Vec<CoeffRepr>],
    ) -> Result<ProjMatrix> {
        let mat = Mat::from_serial(field, dim, rows)?;
        proj_canonical(&mat)
    }
}

impl std::fmt::Debug for ProjMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Proj{:?}", self.mat)
    }
}

/// Serializable matrix: row-major entry table of recursive coefficients.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatSerial {
    pub rows: Vec<Vec<CoeffRepr>>,
}
