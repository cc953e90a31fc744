//! Restarted Krylov iteration for the extreme eigenvalues of a symmetric
//! operator, with full reorthogonalization and explicit deflation.
//!
//! The basis is kept orthonormal against both the deflation space and
//! itself; the projected matrix H = V^T A V is assembled incrementally and
//! solved densely at each restart (thick restart: the extreme Ritz vectors
//! are retained, the Krylov recurrence continues from the residual
//! direction). Residuals of the reported extremes are computed exactly via
//! an extra operator application, never estimated.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::dense::sym_eig_full;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct IterativeOpts {
    /// Maximum Krylov basis size between restarts.
    pub basis: usize,
    /// Restart budget before giving up.
    pub max_restarts: usize,
    /// Convergence threshold on the exact residual ||A y - theta y||.
    pub tol: f64,
    /// Seed for the start vector (and any re-seeding on invariant subspaces).
    pub seed: u64,
}

impl Default for IterativeOpts {
    fn default() -> Self {
        IterativeOpts {
            basis: 48,
            max_restarts: 600,
            tol: 1e-8,
            seed: 1,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ExtremeEigs {
    pub lambda_high: f64,
    pub lambda_low: f64,
    pub residual_high: f64,
    pub residual_low: f64,
    pub matvecs: usize,
    pub restarts: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Two passes of classical Gram-Schmidt against `basis_sets`, recording the
/// first-pass coefficients against the *last* set (the Krylov basis).
fn orthogonalize(w: &mut [f64], deflate: &[Vec<f64>], basis: &[Vec<f64>]) -> Vec<f64> {
    let mut coeffs = vec![0.0; basis.len()];
    for pass in 0..2 {
        for d in deflate {
            let c = dot(w, d);
            axpy(w, -c, d);
        }
        for (j, v) in basis.iter().enumerate() {
            let c = dot(w, v);
            if pass == 0 {
                coeffs[j] = c;
            }
            axpy(w, -c, v);
        }
    }
    coeffs
}

/// Extreme eigenvalues of a symmetric operator restricted to the orthogonal
/// complement of the deflation vectors.
pub fn extreme_eigs(
    n: usize,
    matvec: &dyn Fn(&[f64], &mut [f64]),
    deflate: &[Vec<f64>],
    opts: &IterativeOpts,
) -> Result<ExtremeEigs> {
    // orthonormalize the deflation set
    let mut defl: Vec<Vec<f64>> = Vec::new();
    for d in deflate {
        let mut v = d.clone();
        let _ = orthogonalize(&mut v, &defl, &[]);
        let nv = norm2(&v);
        if nv > 1e-12 {
            for t in v.iter_mut() {
                *t /= nv;
            }
            defl.push(v);
        }
    }
    let n_free = n.saturating_sub(defl.len());
    if n_free == 0 {
        return Err(Error::Internal(
            "deflation space covers the whole space".into(),
        ));
    }
    let m_max = opts.basis.min(n_free).max(4);
    let keep = (m_max / 5).clamp(2, 12);

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut random_unit = |defl: &[Vec<f64>], basis: &[Vec<f64>]| -> Option<Vec<f64>> {
        for _ in 0..8 {
            let mut v: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
            let _ = orthogonalize(&mut v, defl, basis);
            let nv = norm2(&v);
            if nv > 1e-9 {
                for t in v.iter_mut() {
                    *t /= nv;
                }
                return Some(v);
            }
        }
        None
    };

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m_max);
    // H is stored dense over the current basis (row-major, m_max^2 scratch).
    let mut h = vec![0.0; m_max * m_max];
    let start = random_unit(&defl, &basis)
        .ok_or_else(|| Error::Internal("could not draw a start vector".into()))?;
    basis.push(start);

    let mut matvecs = 0usize;
    let mut av = vec![0.0; n];

    for restart in 0..opts.max_restarts {
        // extend the basis to m_max, filling H column by column
        while basis.len() < m_max {
            let j = basis.len() - 1;
            matvec(&basis[j], &mut av);
            matvecs += 1;
            let mut w = av.clone();
            let coeffs = orthogonalize(&mut w, &defl, &basis);
            for (i, c) in coeffs.iter().enumerate() {
                h[i * m_max + j] = *c;
                h[j * m_max + i] = *c;
            }
            let nw = norm2(&w);
            if nw > 1e-10 {
                for t in w.iter_mut() {
                    *t /= nw;
                }
                basis.push(w);
            } else if basis.len() < n_free {
                // invariant subspace hit: continue in a fresh direction
                match random_unit(&defl, &basis) {
                    Some(v) => basis.push(v),
                    None => break,
                }
            } else {
                break;
            }
        }
        // close the final H column
        let j = basis.len() - 1;
        matvec(&basis[j], &mut av);
        matvecs += 1;
        let mut w = av.clone();
        let coeffs = orthogonalize(&mut w, &defl, &basis);
        for (i, c) in coeffs.iter().enumerate() {
            h[i * m_max + j] = *c;
            h[j * m_max + i] = *c;
        }

        let m = basis.len();
        let mut hm = vec![0.0; m * m];
        for r in 0..m {
            for c in 0..m {
                hm[r * m + c] = h[r * m_max + c];
            }
        }
        let (theta, s) = sym_eig_full(&mut hm, m)?;

        // Ritz vectors for the two extremes, exact residuals
        let ritz = |col: usize, s: &[f64]| -> Vec<f64> {
            let mut y = vec![0.0; n];
            for (i, v) in basis.iter().enumerate() {
                axpy(&mut y, s[i * m + col], v);
            }
            y
        };
        let y_high = ritz(0, &s);
        let y_low = ritz(m - 1, &s);
        let resid = |y: &Vec<f64>, th: f64, av: &mut Vec<f64>| -> f64 {
            matvec(y, av);
            let mut r2 = 0.0;
            for i in 0..n {
                let r = av[i] - th * y[i];
                r2 += r * r;
            }
            r2.sqrt()
        };
        let r_high = resid(&y_high, theta[0], &mut av);
        matvecs += 1;
        let r_low = resid(&y_low, theta[m - 1], &mut av);
        matvecs += 1;

        let exhausted = m >= n_free;
        if (r_high <= opts.tol && r_low <= opts.tol) || exhausted {
            return Ok(ExtremeEigs {
                lambda_high: theta[0],
                lambda_low: theta[m - 1],
                residual_high: r_high,
                residual_low: r_low,
                matvecs,
                restarts: restart,
            });
        }

        // thick restart: keep the extreme Ritz vectors, continue from the
        // residual direction w
        let keep_high = keep.min(m);
        let keep_low = keep.min(m - keep_high);
        let mut kept_cols: Vec<usize> = (0..keep_high).collect();
        kept_cols.extend((m - keep_low..m).rev());
        let mut new_basis: Vec<Vec<f64>> = Vec::with_capacity(m_max);
        let mut new_theta = Vec::with_capacity(kept_cols.len());
        for &col in &kept_cols {
            new_basis.push(ritz(col, &s));
            new_theta.push(theta[col]);
        }
        // re-orthonormalize the kept set for numerical hygiene
        let mut cleaned: Vec<Vec<f64>> = Vec::with_capacity(new_basis.len() + 1);
        let mut cleaned_theta = Vec::new();
        for (y, th) in new_basis.into_iter().zip(new_theta) {
            let mut v = y;
            let _ = orthogonalize(&mut v, &defl, &cleaned);
            let nv = norm2(&v);
            if nv > 1e-8 {
                for t in v.iter_mut() {
                    *t /= nv;
                }
                cleaned.push(v);
                cleaned_theta.push(th);
            }
        }
        h = vec![0.0; m_max * m_max];
        for (i, th) in cleaned_theta.iter().enumerate() {
            h[i * m_max + i] = *th;
        }
        let nw = norm2(&w);
        if nw > 1e-10 {
            for t in w.iter_mut() {
                *t /= nw;
            }
            cleaned.push(w);
        } else if let Some(v) = random_unit(&defl, &cleaned) {
            cleaned.push(v);
        }
        basis = cleaned;
        if basis.is_empty() {
            return Err(Error::Internal("restart lost the whole basis".into()));
        }
    }

    Err(Error::NonConvergence {
        residual: f64::NAN,
        iterations: opts.max_restarts,
    })
}
