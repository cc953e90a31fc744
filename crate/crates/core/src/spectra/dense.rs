//! Dense symmetric eigensolver: Householder reduction to tridiagonal form
//! followed by implicit-shift QL iteration. Used directly for full spectra
//! of graphs up to the dense cap and, with eigenvector accumulation, for the
//! small projected matrices inside the iterative path.

use crate::error::{Error, Result};

/// Householder vector for x: returns (v, beta) with v[0] = 1 such that
/// (I - beta v v^T) x = ||x|| * (+-e1).
fn house(x: &[f64]) -> (Vec<f64>, f64) {
    let sigma: f64 = x[1..].iter().map(|&t| t * t).sum();
    let mut v = x.to_vec();
    v[0] = 1.0;
    if sigma == 0.0 {
        return (v, 0.0);
    }
    let mu = (x[0] * x[0] + sigma).sqrt();
    let v0 = if x[0] <= 0.0 {
        x[0] - mu
    } else {
        -sigma / (x[0] + mu)
    };
    let beta = 2.0 * v0 * v0 / (sigma + v0 * v0);
    for t in v.iter_mut() {
        *t /= v0;
    }
    v[0] = 1.0;
    (v, beta)
}

/// In-place Householder tridiagonalization of a symmetric matrix
/// (row-major, n x n). Returns (diagonal, subdiagonal); when `reflectors`
/// is provided the (v, beta) pairs are stored for later Q accumulation.
fn tridiagonalize(
    a: &mut [f64],
    n: usize,
    mut reflectors: Option<&mut Vec<(usize, Vec<f64>, f64)>>,
) -> (Vec<f64>, Vec<f64>) {
    let idx = |i: usize, j: usize| i * n + j;
    let mut e = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1; // size of the column below the diagonal
        let x: Vec<f64> = (0..m).map(|i| a[idx(k + 1 + i, k)]).collect();
        let (v, beta) = house(&x);
        if beta != 0.0 {
            // p = beta * B v over the trailing block B = a[k+1.., k+1..]
            let mut p = vec![0.0; m];
            for i in 0..m {
                let mut acc = 0.0;
                let row = idx(k + 1 + i, k + 1);
                for j in 0..m {
                    acc += a[row + j] * v[j];
                }
                p[i] = beta * acc;
            }
            let pv: f64 = p.iter().zip(&v).map(|(pi, vi)| pi * vi).sum();
            // w = p - (beta * p.v / 2) v
            let c = 0.5 * beta * pv;
            let w: Vec<f64> = p.iter().zip(&v).map(|(pi, vi)| pi - c * vi).collect();
            // B -= v w^T + w v^T
            for i in 0..m {
                let row = idx(k + 1 + i, k + 1);
                for j in 0..m {
                    a[row + j] -= v[i] * w[j] + w[i] * v[j];
                }
            }
            // new subdiagonal entry: (P x)[0] = x0 - beta * (v.x)
            let vx: f64 = v.iter().zip(&x).map(|(vi, xi)| vi * xi).sum();
            let sub = x[0] - beta * vx;
            a[idx(k + 1, k)] = sub;
            a[idx(k, k + 1)] = sub;
            e[k] = sub;
        } else {
            e[k] = x[0];
        }
        if let Some(rs) = reflectors.as_deref_mut() {
            rs.push((k, v, beta));
        }
    }
    if n >= 2 {
        e[n - 2] = a[idx(n - 1, n - 2)];
    }
    let d: Vec<f64> = (0..n).map(|i| a[idx(i, i)]).collect();
    (d, e)
}

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix.
/// `d` is the diagonal, `e[i]` couples i and i+1 (e[n-1] is scratch).
/// When `z` is given (row-major n x n), it is rotated alongside, so passing
/// the tridiagonalizing Q yields full eigenvectors.
fn tql_implicit(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 64 {
                return Err(Error::NonConvergence {
                    residual: e[l].abs(),
                    iterations: iter,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            let denom = g + if g >= 0.0 { r.abs() } else { -r.abs() };
            g = d[m] - d[l] + e[l] / denom;
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(zm) = z.as_deref_mut() {
                    for k in 0..n {
                        f = zm[k * n + i + 1];
                        zm[k * n + i + 1] = s * zm[k * n + i] + c * f;
                        zm[k * n + i] = c * zm[k * n + i] - s * f;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// All eigenvalues of a symmetric matrix (row-major, destroyed), descending.
pub fn sym_eigvals(a: &mut [f64], n: usize) -> Result<Vec<f64>> {
    debug_assert_eq!(a.len(), n * n);
    let (mut d, mut e) = tridiagonalize(a, n, None);
    tql_implicit(&mut d, &mut e, None)?;
    d.sort_by(|x, y| y.total_cmp(x));
    Ok(d)
}

/// Eigenvalues (descending) and matching eigenvectors of a symmetric matrix.
/// Column j of the returned matrix is the eigenvector for eigenvalue j.
/// Intended for small matrices (projected systems); O(n^3) memory-naive.
pub fn sym_eig_full(a: &mut [f64], n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    debug_assert_eq!(a.len(), n * n);
    let mut reflectors = Vec::new();
    let (mut d, mut e) = tridiagonalize(a, n, Some(&mut reflectors));
    // accumulate Q = P_0 P_1 ... by applying reflections to I in reverse
    let mut q = vec![0.0; n * n];
    for i in 0..n {
        q[i * n + i] = 1.0;
    }
    for (k, v, beta) in reflectors.iter().rev() {
        if *beta == 0.0 {
            continue;
        }
        let m = n - k - 1;
        // Q[k+1.., :] -= beta v (v^T Q[k+1.., :])
        for j in 0..n {
            let mut acc = 0.0;
            for i in 0..m {
                acc += v[i] * q[(k + 1 + i) * n + j];
            }
            acc *= beta;
            for i in 0..m {
                q[(k + 1 + i) * n + j] -= v[i] * acc;
            }
        }
    }
    tql_implicit(&mut d, &mut e, Some(&mut q))?;
    // sort descending, permuting columns alongside
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[j].total_cmp(&d[i]));
    let vals: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let mut vecs = vec![0.0; n * n];
    for (new_j, &old_j) in order.iter().enumerate() {
        for k in 0..n {
            vecs[k * n + new_j] = q[k * n + old_j];
        }
    }
    Ok((vals, vecs))
}
