//! Dense univariate polynomials over a finite field, with just enough
//! machinery for modulus construction: arithmetic mod a monic polynomial,
//! gcd, Rabin's irreducibility test and seeded searches for irreducible
//! polynomials.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{CoeffRepr, FieldDesc, FieldElem};
use crate::error::{Error, Result};

/// Polynomial with coefficients in a fixed field, ascending degree, no
/// trailing zeros (the zero polynomial has an empty coefficient vector).
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: FieldDesc,
    coeffs: Vec<FieldElem>,
}

impl Poly {
    pub fn zero(field: &FieldDesc) -> Poly {
        Poly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &FieldDesc) -> Poly {
        Poly {
            field: field.clone(),
            coeffs: vec![field.one()],
        }
    }

    /// The monomial `x`.
    pub fn x(field: &FieldDesc) -> Poly {
        Poly {
            field: field.clone(),
            coeffs: vec![field.zero(), field.one()],
        }
    }

    pub fn from_coeffs(field: &FieldDesc, mut coeffs: Vec<FieldElem>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn from_int_coeffs(field: &FieldDesc, coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(
            field,
            coeffs.iter().map(|&c| field.from_prime_int(c)).collect(),
        )
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff_codes(&self) -> Vec<u64> {
        self.coeffs.iter().map(|c| c.code()).collect()
    }

    pub fn coeff_reprs(&self) -> Vec<CoeffRepr> {
        self.coeffs.iter().map(|c| c.serial()).collect()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i).add(&other.coeff(i)));
        }
        Poly::from_coeffs(&self.field, coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i).sub(&other.coeff(i)));
        }
        Poly::from_coeffs(&self.field, coeffs)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut coeffs = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        Poly::from_coeffs(&self.field, coeffs)
    }

    pub fn scale(&self, s: &FieldElem) -> Poly {
        Poly::from_coeffs(&self.field, self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    /// Remainder modulo a monic polynomial.
    pub fn rem(&self, modulus: &Poly) -> Poly {
        let md = modulus.degree().expect("modulus must be nonzero");
        assert!(modulus.is_monic(), "rem requires a monic modulus");
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() > md {
            let k = coeffs.len() - 1;
            let c = coeffs[k].clone();
            coeffs.pop();
            if c.is_zero() {
                continue;
            }
            for j in 0..md {
                let m = modulus.coeff(j);
                if !m.is_zero() {
                    coeffs[k - md + j] = coeffs[k - md + j].sub(&c.mul(&m));
                }
            }
        }
        Poly::from_coeffs(&self.field, coeffs)
    }

    pub fn mul_mod(&self, other: &Poly, modulus: &Poly) -> Poly {
        self.mul(other).rem(modulus)
    }

    pub fn pow_mod(&self, mut exp: u64, modulus: &Poly) -> Poly {
        let mut result = Poly::one(&self.field).rem(modulus);
        let mut base = self.rem(modulus);
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.mul_mod(&base, modulus);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul_mod(&base, modulus);
            }
        }
        result
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let lead_inv = b.coeffs.last().unwrap().inv().expect("nonzero lead");
            let b_monic = b.scale(&lead_inv);
            let r = a.rem(&b_monic);
            a = b_monic;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lead_inv = a.coeffs.last().unwrap().inv().expect("nonzero lead");
        a.scale(&lead_inv)
    }

    pub fn eval(&self, x: &FieldElem) -> FieldElem {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Rabin's irreducibility test for a monic polynomial of degree n over
    /// F_q: x^(q^n) = x mod g, and gcd(x^(q^(n/r)) - x, g) = 1 for every
    /// prime r dividing n.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            Some(0) | None => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        if !self.is_monic() {
            // test the monic associate
            let lead_inv = self.coeffs.last().unwrap().inv().expect("nonzero lead");
            return self.scale(&lead_inv).is_irreducible();
        }
        let q = self.field.order();
        let x = Poly::x(&self.field);
        // frob_powers[k] = x^(q^k) mod self
        let mut frob = x.rem(self);
        let mut frob_powers = vec![frob.clone()];
        for _ in 0..n {
            frob = frob.pow_mod(q, self);
            frob_powers.push(frob.clone());
        }
        if frob_powers[n] != x.rem(self) {
            return false;
        }
        for r in prime_factors(n as u64) {
            let m = n / r as usize;
            let diff = frob_powers[m].sub(&x);
            let g = self.gcd(&diff);
            if g.degree() != Some(0) {
                return false;
            }
        }
        true
    }
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c:?}")?,
                1 => write!(f, "{c:?}*x")?,
                _ => write!(f, "{c:?}*x^{i}")?,
            }
        }
        Ok(())
    }
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut factors = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            factors.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        factors.push(n);
    }
    factors
}

/// Seeded search for a monic irreducible polynomial of the given degree.
pub fn find_irreducible(field: &FieldDesc, degree: usize, seed: u64) -> Poly {
    assert!(degree >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut coeffs: Vec<FieldElem> = (0..degree)
            .map(|_| field.element_from_code(rng.random_range(0..field.order())))
            .collect();
        coeffs.push(field.one());
        let candidate = Poly::from_coeffs(field, coeffs);
        if candidate.is_irreducible() {
            return candidate;
        }
    }
}

/// Build the degree-`degree` extension of `base` with a seeded random
/// irreducible modulus. Degree 1 returns the base field itself.
pub fn make_extension(base: &FieldDesc, degree: usize, seed: u64) -> Result<FieldDesc> {
    if degree == 0 {
        return Err(Error::Unsupported("extension degree must be >= 1".into()));
    }
    if degree == 1 {
        return Ok(base.clone());
    }
    let modulus = find_irreducible(base, degree, seed);
    FieldDesc::extend(base, modulus)
}

/// Monic irreducible g of degree e over F_q with g(0) != 0 and g(-1) != 0,
/// so that y and 1+y stay invertible in `F_q[y]/(g)`.
pub fn irreducible_ideal_poly(fq: &FieldDesc, e: usize, seed: u64) -> Result<Poly> {
    if e == 0 {
        return Err(Error::Unsupported("ideal degree must be >= 1".into()));
    }
    let zero = fq.zero();
    let minus_one = fq.from_prime_int(-1);
    if e == 1 {
        // candidates y - a with a != 0 and a != -1
        if fq.order() == 2 {
            return Err(Error::Unsupported(
                "no admissible degree-1 ideal over F_2: y and y+1 are excluded".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let a = fq.element_from_code(rng.random_range(0..fq.order()));
            if a.is_zero() || a == minus_one {
                continue;
            }
            let g = Poly::from_coeffs(fq, vec![a.neg(), fq.one()]);
            debug_assert!(!g.eval(&zero).is_zero() && !g.eval(&minus_one).is_zero());
            return Ok(g);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut coeffs: Vec<FieldElem> = (0..e)
            .map(|_| fq.element_from_code(rng.random_range(0..fq.order())))
            .collect();
        coeffs.push(fq.one());
        let g = Poly::from_coeffs(fq, coeffs);
        if g.eval(&zero).is_zero() || g.eval(&minus_one).is_zero() {
            continue;
        }
        if g.is_irreducible() {
            return Ok(g);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FieldDesc {
        FieldDesc::prime(2).unwrap()
    }

    /// Brute-force irreducibility over a small field: try all monic divisors
    /// of smaller degree. Independent of the Rabin path.
    fn irreducible_bruteforce(g: &Poly) -> bool {
        let n = g.degree().unwrap();
        if n == 1 {
            return true;
        }
        let field = g.field().clone();
        let q = field.order();
        for d in 1..=(n / 2) {
            // all monic polynomials of degree d
            let count = q.pow(d as u32);
            for code in 0..count {
                let mut coeffs = Vec::with_capacity(d + 1);
                let mut rem = code;
                for _ in 0..d {
                    coeffs.push(field.element_from_code(rem % q));
                    rem /= q;
                }
                coeffs.push(field.one());
                let divisor = Poly::from_coeffs(&field, coeffs);
                if g.rem(&divisor).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn rabin_agrees_with_bruteforce_over_f2_and_f3() {
        for p in [2u64, 3] {
            let f = FieldDesc::prime(p).unwrap();
            for deg in 1..=4usize {
                let count = p.pow(deg as u32);
                for code in 0..count {
                    let mut coeffs = Vec::with_capacity(deg + 1);
                    let mut rem = code;
                    for _ in 0..deg {
                        coeffs.push(f.element_from_code(rem % p));
                        rem /= p;
                    }
                    coeffs.push(f.one());
                    let g = Poly::from_coeffs(&f, coeffs);
                    assert_eq!(
                        g.is_irreducible(),
                        irreducible_bruteforce(&g),
                        "disagreement at p={p}, poly {g:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn unique_irreducible_quadratic_over_f2() {
        let f2 = f2();
        let field4 = make_extension(&f2, 2, 7).unwrap();
        // y^2 + y + 1 is the only monic irreducible quadratic over F_2
        let expected = Poly::from_int_coeffs(&f2, &[1, 1, 1]);
        assert_eq!(field4.modulus().unwrap(), &expected);
        assert_eq!(field4.order(), 4);
    }

    #[test]
    fn degree_one_extension_is_identity() {
        let f3 = FieldDesc::prime(3).unwrap();
        let same = make_extension(&f3, 1, 99).unwrap();
        assert_eq!(same, f3);
    }

    #[test]
    fn cubic_extension_over_f2_uses_one_of_two_moduli() {
        let f2 = f2();
        // oracle: enumerate all monic cubics over F_2 and keep the irreducible ones
        let mut irreducibles = Vec::new();
        for code in 0..8u64 {
            let g = Poly::from_coeffs(
                &f2,
                vec![
                    f2.element_from_code(code & 1),
                    f2.element_from_code((code >> 1) & 1),
                    f2.element_from_code((code >> 2) & 1),
                    f2.one(),
                ],
            );
            if irreducible_bruteforce(&g) {
                irreducibles.push(g);
            }
        }
        assert_eq!(irreducibles.len(), 2); // y^3+y+1 and y^3+y^2+1
        for seed in 0..5 {
            let field8 = make_extension(&f2, 3, seed).unwrap();
            assert!(irreducibles.contains(field8.modulus().unwrap()));
        }
    }

    #[test]
    fn extension_deterministic_per_seed() {
        let f5 = FieldDesc::prime(5).unwrap();
        let a = make_extension(&f5, 3, 42).unwrap();
        let b = make_extension(&f5, 3, 42).unwrap();
        assert_eq!(a.modulus().unwrap(), b.modulus().unwrap());
    }

    #[test]
    fn ideal_poly_admissibility() {
        let f2 = f2();
        let g = irreducible_ideal_poly(&f2, 3, 1).unwrap();
        assert_eq!(g.degree(), Some(3));
        assert!(!g.eval(&f2.zero()).is_zero());
        assert!(!g.eval(&f2.from_prime_int(-1)).is_zero());
        assert!(g.is_irreducible());

        // e = 1 over F_3: y - 1 is the only admissible candidate
        let f3 = FieldDesc::prime(3).unwrap();
        let g1 = irreducible_ideal_poly(&f3, 1, 5).unwrap();
        assert_eq!(g1.degree(), Some(1));
        assert!(!g1.eval(&f3.zero()).is_zero());
        assert!(!g1.eval(&f3.from_prime_int(-1)).is_zero());

        // e = 1 over F_2: impossible
        assert!(irreducible_ideal_poly(&f2, 1, 0).is_err());
    }

    #[test]
    fn gcd_and_rem() {
        let f3 = FieldDesc::prime(3).unwrap();
        let a = Poly::from_int_coeffs(&f3, &[2, 0, 1]); // x^2 + 2
        let b = Poly::from_int_coeffs(&f3, &[1, 1]); // x + 1
        let prod = a.mul(&b);
        assert!(prod.rem(&b).is_zero());
        assert_eq!(prod.gcd(&a), a);
    }
}
