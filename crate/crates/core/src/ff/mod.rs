//! Exact arithmetic in finite-field towers.
//!
//! Fields are nested quotients: a prime field `F_p`, then extension steps
//! `F[x]/(m(x))` with a monic irreducible modulus over the previous step.
//! Elements carry a reference to their field and store a coefficient vector
//! over the immediate base field, so "lies in the `F_q`-subfield" questions
//! stay exact. Cross-field arithmetic without an explicit embedding is a bug
//! and panics; fallible operations (Frobenius over a field not in the tower,
//! norm equations, ...) return `Result`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod embed;
pub mod poly;
pub mod solve;

pub use embed::Embedding;
pub use poly::Poly;

/// Description of a finite field: either a prime field or an extension step.
#[derive(Clone)]
pub struct FieldDesc {
    inner: Arc<FieldInner>,
}

struct FieldInner {
    kind: FieldKind,
    order: u64,
    characteristic: u64,
}

enum FieldKind {
    Prime,
    Ext {
        base: FieldDesc,
        modulus: Poly,
        degree: usize,
    },
}

impl FieldDesc {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<FieldDesc> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldDesc {
            inner: Arc::new(FieldInner {
                kind: FieldKind::Prime,
                order: p,
                characteristic: p,
            }),
        })
    }

    /// Extension of `base` by a monic irreducible `modulus`.
    pub fn extend(base: &FieldDesc, modulus: Poly) -> Result<FieldDesc> {
        if modulus.field() != base {
            return Err(Error::IncompatibleFields(
                "modulus coefficients must lie in the base field".into(),
            ));
        }
        let degree = match modulus.degree() {
            Some(d) if d >= 1 => d,
            _ => return Err(Error::BadModulus),
        };
        if !modulus.is_monic() {
            return Err(Error::BadModulus);
        }
        if !modulus.is_irreducible() {
            return Err(Error::ReducibleModulus);
        }
        let mut order: u64 = 1;
        for _ in 0..degree {
            order = order
                .checked_mul(base.order())
                .ok_or(Error::TowerTooLarge)?;
        }
        Ok(FieldDesc {
            inner: Arc::new(FieldInner {
                kind: FieldKind::Ext {
                    base: base.clone(),
                    modulus,
                    degree,
                },
                order,
                characteristic: base.characteristic(),
            }),
        })
    }

    pub fn order(&self) -> u64 {
        self.inner.order
    }

    pub fn characteristic(&self) -> u64 {
        self.inner.characteristic
    }

    pub fn is_prime_field(&self) -> bool {
        matches!(self.inner.kind, FieldKind::Prime)
    }

    /// Immediate base field of the top extension step, if any.
    pub fn base(&self) -> Option<&FieldDesc> {
        match &self.inner.kind {
            FieldKind::Prime => None,
            FieldKind::Ext { base, .. } => Some(base),
        }
    }

    /// Degree of the top extension step (1 for a prime field).
    pub fn step_degree(&self) -> usize {
        match &self.inner.kind {
            FieldKind::Prime => 1,
            FieldKind::Ext { degree, .. } => *degree,
        }
    }

    /// Modulus of the top extension step.
    pub fn modulus(&self) -> Option<&Poly> {
        match &self.inner.kind {
            FieldKind::Prime => None,
            FieldKind::Ext { modulus, .. } => Some(modulus),
        }
    }

    /// Whether `sub` appears in this field's tower (including itself).
    pub fn has_in_tower(&self, sub: &FieldDesc) -> bool {
        let mut cur = self.clone();
        loop {
            if &cur == sub {
                return true;
            }
            match cur.base() {
                Some(b) => cur = b.clone(),
                None => return false,
            }
        }
    }

    /// Extension degree over `sub`, which must be in the tower.
    pub fn degree_over(&self, sub: &FieldDesc) -> Result<usize> {
        let mut deg = 1usize;
        let mut cur = self.clone();
        loop {
            if &cur == sub {
                return Ok(deg);
            }
            match cur.base() {
                Some(b) => {
                    deg *= cur.step_degree();
                    cur = b.clone();
                }
                None => {
                    return Err(Error::IncompatibleFields(format!(
                        "field of order {} is not in the tower of the field of order {}",
                        sub.order(),
                        self.order()
                    )))
                }
            }
        }
    }

    pub fn zero(&self) -> FieldElem {
        match &self.inner.kind {
            FieldKind::Prime => FieldElem {
                field: self.clone(),
                repr: Repr::Prime(0),
            },
            FieldKind::Ext { base, degree, .. } => FieldElem {
                field: self.clone(),
                repr: Repr::Ext(vec![base.zero(); *degree]),
            },
        }
    }

    pub fn one(&self) -> FieldElem {
        self.from_prime_int(1)
    }

    /// Canonical image of an integer (reduced mod p, lifted through the tower).
    pub fn from_prime_int(&self, v: i64) -> FieldElem {
        let p = self.characteristic() as i64;
        let r = v.rem_euclid(p) as u64;
        match &self.inner.kind {
            FieldKind::Prime => FieldElem {
                field: self.clone(),
                repr: Repr::Prime(r),
            },
            FieldKind::Ext { base, degree, .. } => {
                let mut coeffs = vec![base.zero(); *degree];
                coeffs[0] = base.from_prime_int(v);
                FieldElem {
                    field: self.clone(),
                    repr: Repr::Ext(coeffs),
                }
            }
        }
    }

    /// The class of the adjoined variable of the top extension step.
    ///
    /// For a degree-1 step `F[x]/(x - a)` this is the image `a`.
    pub fn gen(&self) -> Result<FieldElem> {
        match &self.inner.kind {
            FieldKind::Prime => Err(Error::IncompatibleFields(
                "prime field has no adjoined generator".into(),
            )),
            FieldKind::Ext {
                base,
                modulus,
                degree,
            } => {
                if *degree == 1 {
                    // x == -m_0 in F[x]/(x + m_0)
                    let a = modulus.coeff(0).neg();
                    let mut coeffs = vec![base.zero(); 1];
                    coeffs[0] = a;
                    Ok(FieldElem {
                        field: self.clone(),
                        repr: Repr::Ext(coeffs),
                    })
                } else {
                    let mut coeffs = vec![base.zero(); *degree];
                    coeffs[1] = base.one();
                    Ok(FieldElem {
                        field: self.clone(),
                        repr: Repr::Ext(coeffs),
                    })
                }
            }
        }
    }

    /// Element with the given canonical code, `code < order`.
    pub fn element_from_code(&self, code: u64) -> FieldElem {
        debug_assert!(code < self.order());
        match &self.inner.kind {
            FieldKind::Prime => FieldElem {
                field: self.clone(),
                repr: Repr::Prime(code),
            },
            FieldKind::Ext { base, degree, .. } => {
                let b = base.order();
                let mut rem = code;
                let mut coeffs = Vec::with_capacity(*degree);
                for _ in 0..*degree {
                    coeffs.push(base.element_from_code(rem % b));
                    rem /= b;
                }
                FieldElem {
                    field: self.clone(),
                    repr: Repr::Ext(coeffs),
                }
            }
        }
    }

    /// Build an element of this field from coefficients over the immediate base.
    pub fn from_coeffs(&self, mut coeffs: Vec<FieldElem>) -> Result<FieldElem> {
        match &self.inner.kind {
            FieldKind::Prime => Err(Error::IncompatibleFields(
                "prime field elements have no coefficient vector".into(),
            )),
            FieldKind::Ext { base, degree, .. } => {
                if coeffs.len() > *degree {
                    return Err(Error::IncompatibleFields(
                        "coefficient vector longer than the extension degree".into(),
                    ));
                }
                for c in &coeffs {
                    if c.field() != base {
                        return Err(Error::IncompatibleFields(
                            "coefficients must lie in the immediate base field".into(),
                        ));
                    }
                }
                while coeffs.len() < *degree {
                    coeffs.push(base.zero());
                }
                Ok(FieldElem {
                    field: self.clone(),
                    repr: Repr::Ext(coeffs),
                })
            }
        }
    }

    /// Serializable description: characteristic plus the tower of moduli.
    pub fn descriptor(&self) -> FieldDescriptor {
        let mut steps = Vec::new();
        let mut cur = self.clone();
        while let FieldKind::Ext { base, modulus, .. } = &cur.inner.kind {
            steps.push(modulus.coeff_reprs());
            let next = base.clone();
            cur = next;
        }
        steps.reverse();
        FieldDescriptor {
            characteristic: self.characteristic(),
            tower: steps,
        }
    }

    /// Rebuild a field from its descriptor.
    pub fn from_descriptor(desc: &FieldDescriptor) -> Result<FieldDesc> {
        let mut field = FieldDesc::prime(desc.characteristic)?;
        for step in &desc.tower {
            let coeffs = step
                .iter()
                .map(|c| CoeffRepr::to_elem(c, &field))
                .collect::<Result<Vec<_>>>()?;
            let modulus = Poly::from_coeffs(&field, coeffs);
            field = FieldDesc::extend(&field, modulus)?;
        }
        Ok(field)
    }
}

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.inner, &other.inner) {
            return true;
        }
        if self.order() != other.order() || self.characteristic() != other.characteristic() {
            return false;
        }
        match (&self.inner.kind, &other.inner.kind) {
            (FieldKind::Prime, FieldKind::Prime) => true,
            (
                FieldKind::Ext {
                    base: b1,
                    modulus: m1,
                    degree: d1,
                },
                FieldKind::Ext {
                    base: b2,
                    modulus: m2,
                    degree: d2,
                },
            ) => d1 == d2 && b1 == b2 && m1.coeff_codes() == m2.coeff_codes(),
            _ => false,
        }
    }
}

impl Eq for FieldDesc {}

impl fmt::Debug for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.order())
    }
}

/// Serializable field description: tower of modulus coefficient lists
/// (ascending degree, leading coefficient included), innermost step first.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FieldDescriptor {
    pub characteristic: u64,
    pub tower: Vec<Vec<CoeffRepr>>,
}

/// Recursive coefficient representation: an integer at the prime level, a
/// list of coefficients over the base field otherwise.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum CoeffRepr {
    Int(u64),
    Vec(Vec<CoeffRepr>),
}

impl CoeffRepr {
    pub fn from_elem(x: &FieldElem) -> CoeffRepr {
        match &x.repr {
            Repr::Prime(v) => CoeffRepr::Int(*v),
            Repr::Ext(coeffs) => CoeffRepr::Vec(coeffs.iter().map(CoeffRepr::from_elem).collect()),
        }
    }

    pub fn to_elem(repr: &CoeffRepr, field: &FieldDesc) -> Result<FieldElem> {
        match (repr, &field.inner.kind) {
            (CoeffRepr::Int(v), FieldKind::Prime) => {
                if *v >= field.order() {
                    return Err(Error::Parse(format!(
                        "coefficient {v} out of range for F_{}",
                        field.order()
                    )));
                }
                Ok(FieldElem {
                    field: field.clone(),
                    repr: Repr::Prime(*v),
                })
            }
            (CoeffRepr::Vec(cs), FieldKind::Ext { base, degree, .. }) => {
                if cs.len() != *degree {
                    return Err(Error::Parse(format!(
                        "expected {degree} coefficients, got {}",
                        cs.len()
                    )));
                }
                let coeffs = cs
                    .iter()
                    .map(|c| CoeffRepr::to_elem(c, base))
                    .collect::<Result<Vec<_>>>()?;
                Ok(FieldElem {
                    field: field.clone(),
                    repr: Repr::Ext(coeffs),
                })
            }
            _ => Err(Error::Parse(
                "coefficient nesting does not match the field tower".into(),
            )),
        }
    }
}

/// An element of a finite field, owned by its `FieldDesc`.
#[derive(Clone)]
pub struct FieldElem {
    field: FieldDesc,
    repr: Repr,
}

#[derive(Clone)]
enum Repr {
    Prime(u64),
    Ext(Vec<FieldElem>),
}

impl FieldElem {
    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Prime(v) => *v == 0,
            Repr::Ext(c) => c.iter().all(|x| x.is_zero()),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.field.one()
    }

    /// Coefficient vector over the immediate base field.
    pub fn coeffs(&self) -> Result<&[FieldElem]> {
        match &self.repr {
            Repr::Prime(_) => Err(Error::IncompatibleFields(
                "prime-field element has no coefficient vector".into(),
            )),
            Repr::Ext(c) => Ok(c),
        }
    }

    /// Value of a prime-field element.
    pub fn prime_value(&self) -> Result<u64> {
        match &self.repr {
            Repr::Prime(v) => Ok(*v),
            Repr::Ext(_) => Err(Error::IncompatibleFields(
                "not a prime-field element".into(),
            )),
        }
    }

    /// Canonical integer code in `0..order`.
    pub fn code(&self) -> u64 {
        match &self.repr {
            Repr::Prime(v) => *v,
            Repr::Ext(coeffs) => {
                let b = self
                    .field
                    .base()
                    .expect("ext element has a base field")
                    .order();
                let mut code = 0u64;
                for c in coeffs.iter().rev() {
                    code = code * b + c.code();
                }
                code
            }
        }
    }

    fn assert_same_field(&self, other: &FieldElem, op: &str) {
        assert!(
            self.field == other.field,
            "cross-field {op} without an explicit embedding (F_{} vs F_{})",
            self.field.order(),
            other.field.order()
        );
    }

    pub fn add(&self, other: &FieldElem) -> FieldElem {
        self.assert_same_field(other, "add");
        let repr = match (&self.repr, &other.repr) {
            (Repr::Prime(a), Repr::Prime(b)) => Repr::Prime((a + b) % self.field.characteristic()),
            (Repr::Ext(a), Repr::Ext(b)) => {
                Repr::Ext(a.iter().zip(b).map(|(x, y)| x.add(y)).collect())
            }
            _ => unreachable!("same field implies same representation"),
        };
        FieldElem {
            field: self.field.clone(),
            repr,
        }
    }

    pub fn neg(&self) -> FieldElem {
        let repr = match &self.repr {
            Repr::Prime(a) => {
                let p = self.field.characteristic();
                Repr::Prime(if *a == 0 { 0 } else { p - a })
            }
            Repr::Ext(a) => Repr::Ext(a.iter().map(|x| x.neg()).collect()),
        };
        FieldElem {
            field: self.field.clone(),
            repr,
        }
    }

    pub fn sub(&self, other: &FieldElem) -> FieldElem {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &FieldElem) -> FieldElem {
        self.assert_same_field(other, "mul");
        match (&self.repr, &other.repr) {
            (Repr::Prime(a), Repr::Prime(b)) => FieldElem {
                field: self.field.clone(),
                repr: Repr::Prime((a * b) % self.field.characteristic()),
            },
            (Repr::Ext(a), Repr::Ext(b)) => {
                let base = self.field.base().expect("ext has base");
                let d = a.len();
                // schoolbook product, then reduction by the monic modulus
                let mut prod = vec![base.zero(); 2 * d - 1];
                for (i, x) in a.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in b.iter().enumerate() {
                        if y.is_zero() {
                            continue;
                        }
                        prod[i + j] = prod[i + j].add(&x.mul(y));
                    }
                }
                let modulus = self.field.modulus().expect("ext has modulus");
                for k in (d..2 * d - 1).rev() {
                    if prod[k].is_zero() {
                        continue;
                    }
                    let c = prod[k].clone();
                    prod[k] = base.zero();
                    for j in 0..d {
                        let m = modulus.coeff(j);
                        if !m.is_zero() {
                            prod[k - d + j] = prod[k - d + j].sub(&c.mul(&m));
                        }
                    }
                }
                prod.truncate(d);
                FieldElem {
                    field: self.field.clone(),
                    repr: Repr::Ext(prod),
                }
            }
            _ => unreachable!("same field implies same representation"),
        }
    }

    pub fn square(&self) -> FieldElem {
        self.mul(self)
    }

    pub fn pow(&self, mut exp: u64) -> FieldElem {
        let mut result = self.field.one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.square();
            }
        }
        result
    }

    pub fn inv(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        // x^(|F|-2) = x^(-1); fields at desk scale make this cheap enough.
        Ok(self.pow(self.field.order() - 2))
    }

    /// Whether the element is a square in the multiplicative group.
    pub fn is_square(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        let n = self.field.order() - 1;
        if n % 2 == 1 {
            // odd group order: every element is a square
            return true;
        }
        self.pow(n / 2).is_one()
    }

    /// Injection into `target` assuming this element's field is the immediate
    /// base of `target`.
    pub fn inject_constant(&self, target: &FieldDesc) -> Result<FieldElem> {
        let base = target
            .base()
            .ok_or_else(|| Error::IncompatibleFields("target has no base field".into()))?;
        if base != &self.field {
            return Err(Error::IncompatibleFields(
                "element is not in the immediate base of the target".into(),
            ));
        }
        let mut coeffs = vec![base.zero(); target.step_degree()];
        coeffs[0] = self.clone();
        Ok(FieldElem {
            field: target.clone(),
            repr: Repr::Ext(coeffs),
        })
    }

    /// Canonical lift through tower steps: `self.field` must be in the tower
    /// of `target`.
    pub fn lift_to(&self, target: &FieldDesc) -> Result<FieldElem> {
        if &self.field == target {
            return Ok(self.clone());
        }
        // collect the chain of fields from target down to self.field
        let mut chain = Vec::new();
        let mut cur = target.clone();
        loop {
            if cur == self.field {
                break;
            }
            chain.push(cur.clone());
            match cur.base() {
                Some(b) => cur = b.clone(),
                None => {
                    return Err(Error::IncompatibleFields(
                        "element's field is not in the target tower".into(),
                    ))
                }
            }
        }
        let mut x = self.clone();
        for step in chain.into_iter().rev() {
            x = x.inject_constant(&step)?;
        }
        Ok(x)
    }

    /// Retract to the immediate base field if all higher coefficients vanish.
    pub fn retract(&self) -> Result<FieldElem> {
        match &self.repr {
            Repr::Prime(_) => Err(Error::IncompatibleFields(
                "prime-field element has no base to retract to".into(),
            )),
            Repr::Ext(coeffs) => {
                if coeffs[1..].iter().all(|c| c.is_zero()) {
                    Ok(coeffs[0].clone())
                } else {
                    Err(Error::IncompatibleFields(
                        "element does not lie in the base-field image".into(),
                    ))
                }
            }
        }
    }

    /// Whether the element lies in the canonical image of `sub` (a field in
    /// the tower), i.e. is fixed by the `|sub|`-power Frobenius.
    pub fn is_in_subfield(&self, sub: &FieldDesc) -> Result<bool> {
        if !self.field.has_in_tower(sub) {
            return Err(Error::IncompatibleFields(
                "subfield is not in the tower".into(),
            ));
        }
        Ok(self.pow(sub.order()) == *self)
    }

    pub fn serial(&self) -> CoeffRepr {
        CoeffRepr::from_elem(self)
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        if self.field != other.field {
            return false;
        }
        match (&self.repr, &other.repr) {
            (Repr::Prime(a), Repr::Prime(b)) => a == b,
            (Repr::Ext(a), Repr::Ext(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for FieldElem {}

impl std::hash::Hash for FieldElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.code().hash(state);
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Prime(v) => write!(f, "{v}"),
            Repr::Ext(coeffs) => {
                write!(f, "[")?;
                for (i, c) in coeffs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c:?}")?;
                }
                write!(f, "]")
            }
        }
    }
}

/// `x ↦ x^|base|`, the Frobenius of the extension over `base`.
///
/// `base` must appear in the tower of `x`'s field.
pub fn frobenius(x: &FieldElem, base: &FieldDesc) -> Result<FieldElem> {
    if !x.field().has_in_tower(base) {
        return Err(Error::IncompatibleFields(
            "frobenius base is not in the element's tower".into(),
        ));
    }
    Ok(x.pow(base.order()))
}

/// Galois norm of `x` from `top` down to `base`: the product of all
/// `|base|`-power Frobenius conjugates. The result lies in the image of
/// `base` inside `top`.
pub fn norm(x: &FieldElem, top: &FieldDesc, base: &FieldDesc) -> Result<FieldElem> {
    galois_fold(x, top, base, |a, b| a.mul(b))
}

/// Galois trace of `x` from `top` down to `base`.
pub fn trace(x: &FieldElem, top: &FieldDesc, base: &FieldDesc) -> Result<FieldElem> {
    galois_fold(x, top, base, |a, b| a.add(b))
}

fn galois_fold(
    x: &FieldElem,
    top: &FieldDesc,
    base: &FieldDesc,
    combine: impl Fn(&FieldElem, &FieldElem) -> FieldElem,
) -> Result<FieldElem> {
    if x.field() != top {
        return Err(Error::IncompatibleFields(
            "element does not lie in the stated top field".into(),
        ));
    }
    let deg = top.degree_over(base)?;
    let q = base.order();
    let mut acc = x.clone();
    let mut result = x.clone();
    for _ in 1..deg {
        acc = acc.pow(q);
        result = combine(&result, &acc);
    }
    Ok(result)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}
