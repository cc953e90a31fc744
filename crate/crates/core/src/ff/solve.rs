//! Multiplicative-group utilities: generators, discrete logs, norm-equation
//! solving and normal-basis search.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

use super::poly::prime_factors;
use super::{frobenius, norm, FieldDesc, FieldElem};
use crate::error::{Error, Result};

/// Seeded search for a generator of the multiplicative group.
pub fn multiplicative_generator(field: &FieldDesc, seed: u64) -> FieldElem {
    let n = field.order() - 1;
    if n == 1 {
        return field.one();
    }
    let factors = prime_factors(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let code = rng.random_range(1..field.order());
        let cand = field.element_from_code(code);
        if factors.iter().all(|&p| !cand.pow(n / p).is_one()) {
            return cand;
        }
    }
}

/// Discrete log in the cyclic group generated by `g` of order `n`:
/// returns t with g^t = target. Baby-step/giant-step.
pub fn dlog_bsgs(g: &FieldElem, target: &FieldElem, n: u64) -> Result<u64> {
    if target.is_zero() {
        return Err(Error::ZeroInverse);
    }
    let m = (n as f64).sqrt().ceil() as u64;
    let mut baby: HashMap<u64, u64> = HashMap::with_capacity(m as usize);
    let mut cur = g.field().one();
    for j in 0..m {
        baby.entry(cur.code()).or_insert(j);
        cur = cur.mul(g);
    }
    // giant step: target * (g^-m)^i
    let g_inv_m = g.pow(m).inv()?;
    let mut gamma = target.clone();
    for i in 0..=m {
        if let Some(&j) = baby.get(&gamma.code()) {
            let t = (i * m + j) % n;
            return Ok(t);
        }
        gamma = gamma.mul(&g_inv_m);
    }
    Err(Error::Internal(format!(
        "dlog not found: target {} not in the subgroup of order {n}",
        target.code()
    )))
}

/// Solve N_{top/base}(c) = a for c in top, where base is the immediate base
/// field of top and a lies in the base-field image.
///
/// Strategy: a generator g of top* has N(g) = g^s with s = (|top|-1)/(|base|-1),
/// and N(g) generates base*. Solving N(g)^t = a by baby-step/giant-step gives
/// c = g^t.
pub fn solve_norm_equation(
    top: &FieldDesc,
    base: &FieldDesc,
    a: &FieldElem,
    seed: u64,
) -> Result<FieldElem> {
    if a.is_zero() {
        return Err(Error::ZeroInverse);
    }
    if a.field() != top {
        return Err(Error::IncompatibleFields(
            "norm-equation target must be given inside the top field".into(),
        ));
    }
    let base_in_tower = top.has_in_tower(base);
    if !base_in_tower {
        return Err(Error::IncompatibleFields(
            "base field is not in the top field's tower".into(),
        ));
    }
    let base_units = base.order() - 1;
    if base_units > 0 && !a.pow(base_units).is_one() {
        return Err(Error::IncompatibleFields(
            "target does not lie in the base-field image".into(),
        ));
    }
    if top == base {
        return Ok(a.clone());
    }
    let g = multiplicative_generator(top, seed);
    let s = (top.order() - 1) / base_units;
    let ng = g.pow(s);
    let t = dlog_bsgs(&ng, a, base_units)?;
    // N(g^t) = g^(t*s) = ng^t = a
    let c = g.pow(t);
    debug_assert_eq!(norm(&c, top, base)?, *a);
    Ok(c)
}

/// Find xi such that {xi, phi(xi), ..., phi^(d-1)(xi)} is a basis of `top`
/// over its immediate base `base` (a normal basis). Seeded random search
/// capped at 10*|top| attempts, then an exhaustive scan.
pub fn find_normal_basis_generator(
    top: &FieldDesc,
    base: &FieldDesc,
    seed: u64,
) -> Result<FieldElem> {
    if top == base {
        return Ok(top.one());
    }
    if top.base() != Some(base) {
        return Err(Error::IncompatibleFields(
            "normal-basis search requires the immediate base field".into(),
        ));
    }
    let d = top.step_degree();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = 10 * top.order();
    for _ in 0..cap {
        let cand = top.element_from_code(rng.random_range(1..top.order()));
        if is_normal_basis_generator(&cand, top, base)? {
            return Ok(cand);
        }
    }
    for code in 1..top.order() {
        let cand = top.element_from_code(code);
        if is_normal_basis_generator(&cand, top, base)? {
            return Ok(cand);
        }
    }
    Err(Error::Internal(format!(
        "no normal basis generator found for degree {d} over F_{}",
        base.order()
    )))
}

/// Rank check: the Frobenius orbit of `xi` must be linearly independent over
/// the base field.
pub fn is_normal_basis_generator(
    xi: &FieldElem,
    top: &FieldDesc,
    base: &FieldDesc,
) -> Result<bool> {
    let d = top.step_degree();
    let mut rows: Vec<Vec<FieldElem>> = Vec::with_capacity(d);
    let mut cur = xi.clone();
    for i in 0..d {
        rows.push(cur.coeffs()?.to_vec());
        if i + 1 < d {
            cur = frobenius(&cur, base)?;
        }
    }
    Ok(rank(&mut rows, base) == d)
}

/// Row rank by Gaussian elimination over the field.
fn rank(rows: &mut [Vec<FieldElem>], field: &FieldDesc) -> usize {
    let nrows = rows.len();
    let ncols = if nrows == 0 { 0 } else { rows[0].len() };
    let mut rank = 0;
    for col in 0..ncols {
        let pivot = (rank..nrows).find(|&r| !rows[r][col].is_zero());
        let Some(p) = pivot else { continue };
        rows.swap(rank, p);
        let inv = rows[rank][col].inv().expect("pivot nonzero");
        for c in col..ncols {
            rows[rank][c] = rows[rank][c].mul(&inv);
        }
        for r in 0..nrows {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in col..ncols {
                    let sub = factor.mul(&rows[rank][c]);
                    rows[r][c] = rows[r][c].sub(&sub);
                }
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    let _ = field;
    rank
}
