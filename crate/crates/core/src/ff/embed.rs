//! Materialized field embeddings.
//!
//! An `Embedding` maps a source extension field into a target field by
//! sending the source's adjoined generator to a root of its modulus in the
//! target. Coefficients of source elements live in the source's immediate
//! base, which must already sit inside the target tower (so they lift
//! canonically).

use super::{FieldDesc, FieldElem, Poly};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Embedding {
    source: FieldDesc,
    target: FieldDesc,
    gen_image: FieldElem,
}

impl Embedding {
    /// Find an embedding by scanning the target for a root of the source
    /// modulus. The first root in canonical code order is taken, so the
    /// result is deterministic.
    pub fn new(source: &FieldDesc, target: &FieldDesc) -> Result<Embedding> {
        let modulus = source
            .modulus()
            .ok_or_else(|| Error::IncompatibleFields("source must be an extension field".into()))?;
        let base = source.base().expect("extension has a base");
        if !target.has_in_tower(base) {
            return Err(Error::IncompatibleFields(
                "source base field is not in the target tower".into(),
            ));
        }
        if target.order() == source.order() && target == source {
            // identity embedding
            return Ok(Embedding {
                source: source.clone(),
                target: target.clone(),
                gen_image: source.gen()?,
            });
        }
        // lift the modulus coefficients into the target, then scan for a root
        let lifted: Vec<FieldElem> = modulus
            .coeffs()
            .iter()
            .map(|c| c.lift_to(target))
            .collect::<Result<Vec<_>>>()?;
        let lifted_poly = Poly::from_coeffs(target, lifted);
        for code in 0..target.order() {
            let cand = target.element_from_code(code);
            if lifted_poly.eval(&cand).is_zero() {
                return Ok(Embedding {
                    source: source.clone(),
                    target: target.clone(),
                    gen_image: cand,
                });
            }
        }
        Err(Error::IncompatibleFields(
            "source modulus has no root in the target".into(),
        ))
    }

    /// Rebuild an embedding from a stored generator image, verifying that it
    /// is a root of the source modulus.
    pub fn from_parts(
        source: &FieldDesc,
        target: &FieldDesc,
        gen_image: FieldElem,
    ) -> Result<Embedding> {
        let modulus = source
            .modulus()
            .ok_or_else(|| Error::IncompatibleFields("source must be an extension field".into()))?;
        if gen_image.field() != target {
            return Err(Error::IncompatibleFields(
                "generator image must lie in the target field".into(),
            ));
        }
        let lifted: Vec<FieldElem> = modulus
            .coeffs()
            .iter()
            .map(|c| c.lift_to(target))
            .collect::<Result<Vec<_>>>()?;
        let lifted_poly = Poly::from_coeffs(target, lifted);
        if !lifted_poly.eval(&gen_image).is_zero() {
            return Err(Error::IncompatibleFields(
                "stored generator image is not a root of the source modulus".into(),
            ));
        }
        Ok(Embedding {
            source: source.clone(),
            target: target.clone(),
            gen_image,
        })
    }

    pub fn source(&self) -> &FieldDesc {
        &self.source
    }

    pub fn target(&self) -> &FieldDesc {
        &self.target
    }

    pub fn gen_image(&self) -> &FieldElem {
        &self.gen_image
    }

    /// Apply the embedding to an element of the source field.
    pub fn apply(&self, x: &FieldElem) -> Result<FieldElem> {
        if x.field() != &self.source {
            return Err(Error::IncompatibleFields(
                "element is not in the embedding's source field".into(),
            ));
        }
        let coeffs = x.coeffs()?;
        // Horner evaluation at the generator image
        let mut acc = self.target.zero();
        for c in coeffs.iter().rev() {
            let lifted = c.lift_to(&self.target)?;
            acc = acc.mul(&self.gen_image).add(&lifted);
        }
        Ok(acc)
    }
}
