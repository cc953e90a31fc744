//! Cayley-graph assembly and spectral/combinatorial verification.
//!
//! The graph is stored as compressed adjacency rows (k neighbor indices per
//! vertex). Spectra come from the dense symmetric eigensolver up to a cap
//! and from the restarted Krylov path with explicit deflation above it.
//! Expansion at tiny sizes is brute-forced from the definition, which gives
//! the ground truth the spectral surrogates are checked against.

use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::solve::multiplicative_generator;
use crate::matgrp::enumerate::CayleyElement;
use crate::matgrp::{GroupEnum, Mat, ProjMatrix};

pub mod dense;
pub mod lanczos;

pub use lanczos::{ExtremeEigs, IterativeOpts};

/// Default cap for the dense full-spectrum path.
pub const DEFAULT_DENSE_CAP: usize = 5000;
/// Default eigenvalue comparison tolerance.
pub const DEFAULT_EIG_TOL: f64 = 1e-8;

/// A finite k-regular multigraph given by its adjacency rows, together with
/// the group data needed for trivial-eigenvalue analysis when it came from a
/// Cayley construction.
pub struct CayleyGraph {
    n: usize,
    k: usize,
    /// flattened n*k neighbor indices, each row sorted ascending
    rows: Vec<u32>,
    connected: bool,
    /// determinant classes of the vertices in Z_class_modulus (projective
    /// Cayley graphs with gcd(dim, |K*|) > 1 only)
    vertex_class: Option<Vec<u16>>,
    /// classes of the *given* generator list (same order)
    gen_class: Option<Vec<u16>>,
    class_modulus: u64,
    group: Option<Arc<GroupEnum<ProjMatrix>>>,
}

impl std::fmt::Debug for CayleyGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "CayleyGraph(n={}, k={}, connected={})",
            self.n, self.k, self.connected
        )
    }
}

impl CayleyGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    pub fn row(&self, v: usize) -> &[u32] {
        &self.rows[v * self.k..(v + 1) * self.k]
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn group(&self) -> Option<&Arc<GroupEnum<ProjMatrix>>> {
        self.group.as_ref()
    }

    /// Sorted, deduplicated undirected edge list (u, v, multiplicity), u <= v.
    pub fn edge_list(&self) -> Vec<(u32, u32, u32)> {
        let mut edges = Vec::new();
        for u in 0..self.n {
            for &v in self.row(u) {
                if (v as usize) >= u {
                    edges.push((u as u32, v));
                }
            }
        }
        edges.sort_unstable();
        let mut out: Vec<(u32, u32, u32)> = Vec::new();
        for (u, v) in edges {
            match out.last_mut() {
                Some((lu, lv, m)) if *lu == u && *lv == v => *m += 1,
                _ => out.push((u, v, 1)),
            }
        }
        // a loop (u, u) contributes twice to its own row count; normalize
        for (u, v, m) in out.iter_mut() {
            if u == v {
                *m /= 2;
            }
        }
        out
    }

    fn matvec_normalized(&self, x: &[f64], y: &mut [f64]) {
        let k = self.k as f64;
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for &j in self.row(i) {
                acc += x[j as usize];
            }
            *yi = acc / k;
        }
    }

    /// Dense normalized adjacency, row-major.
    pub fn dense_normalized(&self) -> Vec<f64> {
        let n = self.n;
        let mut a = vec![0.0; n * n];
        let w = 1.0 / self.k as f64;
        for u in 0..n {
            for &v in self.row(u) {
                a[u * n + v as usize] += w;
            }
        }
        a
    }
}

fn bfs_reach(rows: &[u32], n: usize, k: usize) -> usize {
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0u32];
    let mut count = 1usize;
    while let Some(u) = stack.pop() {
        for &v in &rows[u as usize * k..(u as usize + 1) * k] {
            if !seen[v as usize] {
                seen[v as usize] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    count
}

/// 2-coloring check; returns the +-1 sign vector if the graph is bipartite.
fn bipartition(rows: &[u32], n: usize, k: usize) -> Option<Vec<f64>> {
    let mut color = vec![-1i8; n];
    let mut stack = Vec::new();
    for start in 0..n {
        if color[start] >= 0 {
            continue;
        }
        color[start] = 0;
        stack.push(start as u32);
        while let Some(u) = stack.pop() {
            let cu = color[u as usize];
            for &v in &rows[u as usize * k..(u as usize + 1) * k] {
                let cv = color[v as usize];
                if cv < 0 {
                    color[v as usize] = 1 - cu;
                    stack.push(v);
                } else if cv == cu {
                    return None;
                }
            }
        }
    }
    Some(
        color
            .iter()
            .map(|&c| if c == 0 { 1.0 } else { -1.0 })
            .collect(),
    )
}

/// Determinant-class data for a projective matrix group: the class of g is
/// dlog(det g) mod gcd(dim, |K*|), well-defined on projective classes.
fn det_classes(
    group: &GroupEnum<ProjMatrix>,
    gens: &[ProjMatrix],
) -> Result<Option<(Vec<u16>, Vec<u16>, u64)>> {
    let field = group.field().clone();
    let m_full = crate::matgrp::enumerate::gcd(group.dim() as u64, field.order() - 1);
    if m_full <= 1 {
        return Ok(None);
    }
    // discrete-log table over the fixed generator of K*
    let g = multiplicative_generator(&field, 0);
    let order = field.order();
    let mut log = vec![0u32; order as usize];
    let mut cur = field.one();
    for t in 0..order - 1 {
        log[cur.code() as usize] = t as u32;
        cur = cur.mul(&g);
    }
    let vertex: Vec<u16> = group
        .element_det_codes()?
        .iter()
        .map(|&det| (log[det as usize] as u64 % m_full) as u16)
        .collect();
    let gen_class: Vec<u16> = gens
        .iter()
        .map(|m| (log[m.mat().det().code() as usize] as u64 % m_full) as u16)
        .collect();
    Ok(Some((vertex, gen_class, m_full)))
}

fn build_rows<E: CayleyElement>(
    group: &GroupEnum<E>,
    mult: &[E],
) -> Result<(Vec<u32>, usize, bool)> {
    if !group.is_complete() {
        return Err(Error::IncompleteEnumeration { cap: group.cap() });
    }
    let n = group.len();
    let k = mult.len();
    if k == 0 {
        return Err(Error::GraphInvariant("empty generating set".into()));
    }
    for s in mult {
        group.index_of(s)?;
    }
    let rows = group.adjacency_rows(mult)?;
    let reached = bfs_reach(&rows, n, k);
    Ok((rows, reached, reached == n))
}

/// Deduplicate gens ∪ inverses keeping the given order (generators first,
/// then inverses); a projective involution therefore contributes once.
fn symmetrized_multiset<E: CayleyElement>(gens: &[E]) -> Result<Vec<E>> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for g in gens {
        let k = g.elem_key()?;
        if !seen.insert(k) {
            return Err(Error::GraphInvariant(
                "two distinct generators map to the same group element".into(),
            ));
        }
        out.push(g.clone());
    }
    for g in gens {
        let gi = g.inv_elem()?;
        let k = gi.elem_key()?;
        if seen.insert(k) {
            out.push(gi);
        }
    }
    Ok(out)
}

/// Cayley graph of an enumerated projective matrix group with respect to
/// S ∪ S^{-1} (involutions counted once). Errors if S does not generate.
pub fn cayley_graph(
    group: &Arc<GroupEnum<ProjMatrix>>,
    gens: &[ProjMatrix],
) -> Result<CayleyGraph> {
    let mult = symmetrized_multiset(gens)?;
    let (rows, reached, connected) = build_rows(group.as_ref(), &mult)?;
    if !connected {
        return Err(Error::DoesNotGenerate {
            reached,
            total: group.len(),
        });
    }
    let classes = det_classes(group.as_ref(), &mult)?;
    let (vertex_class, gen_class, class_modulus) = match classes {
        Some((v, g, m)) => (Some(v), Some(g), m),
        None => (None, None, 1),
    };
    Ok(CayleyGraph {
        n: group.len(),
        k: mult.len(),
        rows,
        connected,
        vertex_class,
        gen_class,
        class_modulus,
        group: Some(Arc::clone(group)),
    })
}

/// Cayley graph over a plain (non-projective) matrix group.
pub fn cayley_graph_mat(group: &GroupEnum<Mat>, gens: &[Mat]) -> Result<CayleyGraph> {
    let mult = symmetrized_multiset(gens)?;
    let (rows, reached, connected) = build_rows(group, &mult)?;
    if !connected {
        return Err(Error::DoesNotGenerate {
            reached,
            total: group.len(),
        });
    }
    Ok(CayleyGraph {
        n: group.len(),
        k: mult.len(),
        rows,
        connected,
        vertex_class: None,
        gen_class: None,
        class_modulus: 1,
        group: None,
    })
}

/// Cayley multigraph with an explicit, already-symmetrized generator
/// multiset (repeats deliberate). Used for covering-map comparisons, where
/// the projection of an involution-free symmetric set doubles up.
pub fn cayley_graph_multiset(
    group: &Arc<GroupEnum<ProjMatrix>>,
    mult: &[ProjMatrix],
) -> Result<CayleyGraph> {
    let (rows, reached, connected) = build_rows(group.as_ref(), mult)?;
    if !connected {
        return Err(Error::DoesNotGenerate {
            reached,
            total: group.len(),
        });
    }
    let classes = det_classes(group.as_ref(), mult)?;
    let (vertex_class, gen_class, class_modulus) = match classes {
        Some((v, g, m)) => (Some(v), Some(g), m),
        None => (None, None, 1),
    };
    Ok(CayleyGraph {
        n: group.len(),
        k: mult.len(),
        rows,
        connected,
        vertex_class,
        gen_class,
        class_modulus,
        group: Some(Arc::clone(group)),
    })
}

/// Rebuild a graph from raw adjacency rows (e.g. a parsed edge list),
/// validating regularity and multiset symmetry. Connectivity is recorded,
/// not required, so invariant failures can be reported downstream.
pub fn from_rows(n: usize, k: usize, rows: Vec<u32>) -> Result<CayleyGraph> {
    if rows.len() != n * k {
        return Err(Error::GraphInvariant(format!(
            "regularity violated: expected {} adjacency entries ({} x {}), got {}",
            n * k,
            n,
            k,
            rows.len()
        )));
    }
    if let Some(&bad) = rows.iter().find(|&&v| v as usize >= n) {
        return Err(Error::GraphInvariant(format!(
            "neighbor index {bad} out of range"
        )));
    }
    let mut sorted_rows = rows;
    for i in 0..n {
        sorted_rows[i * k..(i + 1) * k].sort_unstable();
    }
    // multiset symmetry: v appears in row u as often as u appears in row v
    let count_in_row = |u: usize, v: u32| -> usize {
        let row = &sorted_rows[u * k..(u + 1) * k];
        let lo = row.partition_point(|&x| x < v);
        let hi = row.partition_point(|&x| x <= v);
        hi - lo
    };
    for u in 0..n {
        let row = &sorted_rows[u * k..(u + 1) * k];
        let mut j = 0;
        while j < k {
            let v = row[j];
            let mut mult = 1;
            while j + mult < k && row[j + mult] == v {
                mult += 1;
            }
            if (v as usize) != u && count_in_row(v as usize, u as u32) != mult {
                return Err(Error::GraphInvariant(format!(
                    "symmetry violated between vertices {u} and {v}"
                )));
            }
            j += mult;
        }
    }
    let connected = bfs_reach(&sorted_rows, n, k) == n;
    Ok(CayleyGraph {
        n,
        k,
        rows: sorted_rows,
        connected,
        vertex_class: None,
        gen_class: None,
        class_modulus: 1,
        group: None,
    })
}

/// One analytically-known eigenpair.
#[derive(Clone, Debug)]
pub struct TrivialEig {
    pub value: f64,
    pub vector: Vec<f64>,
}

/// Analytically-known "trivial" eigenpairs of the normalized adjacency:
/// the constant vector at 1; the character lifts of the determinant-class
/// quotient when every generator shares one nonzero class (values in E_d);
/// and the bipartition sign vector at -1 when the graph is 2-colorable.
pub fn trivial_eigendata(graph: &CayleyGraph) -> Vec<TrivialEig> {
    let n = graph.n;
    let mut out = vec![TrivialEig {
        value: 1.0,
        vector: vec![1.0; n],
    }];
    if let (Some(vclass), Some(gclass)) = (&graph.vertex_class, &graph.gen_class) {
        let m_full = graph.class_modulus;
        let sigma = gclass[0] as u64;
        // character lifts exist exactly when the whole generating set maps
        // to a single class sigma (inverses then map to -sigma)
        let uniform = gclass
            .iter()
            .all(|&c| c as u64 == sigma || (m_full - c as u64) % m_full == sigma % m_full);
        if uniform && sigma != 0 {
            let g0 = crate::matgrp::enumerate::gcd(sigma, m_full);
            let m = m_full / g0;
            if m > 1 {
                // relabel classes as multiples of sigma: t with t*sigma = class
                let sigma_red = sigma / g0;
                let inv = mod_inverse(sigma_red, m).expect("sigma_red invertible mod m");
                let t_of = |c: u16| -> u64 { (c as u64 / g0) * inv % m };
                for j in 1..=m / 2 {
                    let angle = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
                    let value = angle.cos();
                    let cos_vec: Vec<f64> = vclass
                        .iter()
                        .map(|&c| (angle * t_of(c) as f64).cos())
                        .collect();
                    out.push(TrivialEig {
                        value,
                        vector: cos_vec,
                    });
                    if 2 * j != m {
                        let sin_vec: Vec<f64> = vclass
                            .iter()
                            .map(|&c| (angle * t_of(c) as f64).sin())
                            .collect();
                        out.push(TrivialEig {
                            value,
                            vector: sin_vec,
                        });
                    }
                }
            }
        }
    }
    // structural bipartiteness (covers graphs without class data too)
    if !out.iter().any(|t| (t.value + 1.0).abs() < 1e-12) {
        if let Some(sign) = bipartition(&graph.rows, n, graph.k) {
            out.push(TrivialEig {
                value: -1.0,
                vector: sign,
            });
        }
    }
    out
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(m as i128) as u64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveMethod {
    Dense,
    Iterative,
}

/// Spectral data of one graph, from either solve path.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectralReport {
    pub n: usize,
    pub k: usize,
    pub method: SolveMethod,
    /// largest eigenvalue strictly below 1 - eig_tol
    pub lambda_second: f64,
    /// smallest eigenvalue of the raw spectrum (dense) or of the deflated
    /// operator (iterative)
    pub lambda_min: f64,
    /// largest |.| over the nontrivial spectrum
    pub lambda_x: f64,
    /// trivial eigenvalues detected/deflated, with multiplicities
    pub trivial: Vec<(f64, usize)>,
    /// the eigenvalues every bound is checked against: the full spectrum
    /// with one copy of each trivial eigenvalue removed (dense), or the two
    /// deflated extremes (iterative)
    pub checkable: Vec<f64>,
    /// full spectrum, descending (dense path only)
    pub spectrum: Option<Vec<f64>>,
    pub eig_tol: f64,
    /// exact residual of the worst extreme (iterative path only)
    pub residual: Option<f64>,
    #[serde(skip)]
    pub runtime_ms: u128,
}

#[derive(Clone, Copy, Debug)]
pub struct SpectraOpts {
    pub dense_cap: usize,
    pub eig_tol: f64,
    pub iterative: IterativeOpts,
}

impl Default for SpectraOpts {
    fn default() -> Self {
        SpectraOpts {
            dense_cap: DEFAULT_DENSE_CAP,
            eig_tol: DEFAULT_EIG_TOL,
            iterative: IterativeOpts::default(),
        }
    }
}

/// Full dense spectrum of the normalized adjacency (n <= dense cap).
pub fn full_spectrum_dense(graph: &CayleyGraph, opts: &SpectraOpts) -> Result<SpectralReport> {
    if graph.n > opts.dense_cap {
        return Err(Error::DenseCapExceeded {
            n: graph.n,
            cap: opts.dense_cap,
        });
    }
    let start = Instant::now();
    let mut a = graph.dense_normalized();
    let spectrum = dense::sym_eigvals(&mut a, graph.n)?;
    drop(a);
    // sanity: eigenvalues of the normalized adjacency live in [-1, 1] and
    // the top one is 1
    if (spectrum[0] - 1.0).abs() > 1e-9 {
        return Err(Error::GraphInvariant(format!(
            "top eigenvalue {} is not 1",
            spectrum[0]
        )));
    }
    if spectrum
        .iter()
        .any(|&v| !(-1.0 - 1e-9..=1.0 + 1e-9).contains(&v))
    {
        return Err(Error::GraphInvariant("spectrum leaves [-1, 1]".into()));
    }
    let trivial_pairs = trivial_eigendata(graph);
    let (checkable, trivial) = remove_trivial(&spectrum, &trivial_pairs, opts.eig_tol)?;
    let lambda_second = spectrum
        .iter()
        .copied()
        .find(|&v| v < 1.0 - opts.eig_tol)
        .unwrap_or(1.0);
    let lambda_min = *spectrum.last().unwrap();
    let lambda_x = checkable.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    Ok(SpectralReport {
        n: graph.n,
        k: graph.k,
        method: SolveMethod::Dense,
        lambda_second,
        lambda_min,
        lambda_x,
        trivial,
        checkable,
        spectrum: Some(spectrum),
        eig_tol: opts.eig_tol,
        residual: None,
        runtime_ms: start.elapsed().as_millis(),
    })
}

/// Remove one copy of each predicted trivial eigenvalue from the spectrum;
/// a missing trivial eigenvalue signals a construction bug.
fn remove_trivial(
    spectrum: &[f64],
    trivial_pairs: &[TrivialEig],
    tol: f64,
) -> Result<(Vec<f64>, Vec<(f64, usize)>)> {
    let mut remaining = spectrum.to_vec();
    let mut summary: Vec<(f64, usize)> = Vec::new();
    for t in trivial_pairs {
        let pos = remaining
            .iter()
            .position(|&v| (v - t.value).abs() <= tol)
            .ok_or(Error::MissingTrivialEigenvalue { value: t.value })?;
        remaining.remove(pos);
        match summary
            .iter_mut()
            .find(|(v, _)| (*v - t.value).abs() <= tol)
        {
            Some((_, m)) => *m += 1,
            None => summary.push((t.value, 1)),
        }
    }
    Ok((remaining, summary))
}

/// Largest |eigenvalue| after removing one copy of each predicted trivial
/// eigenvalue from a full spectrum. A predicted value with no match within
/// the tolerance signals a construction bug and is an error.
pub fn lambda_nontrivial(spectrum: &[f64], trivial_pairs: &[TrivialEig], tol: f64) -> Result<f64> {
    let (remaining, _) = remove_trivial(spectrum, trivial_pairs, tol)?;
    Ok(remaining.iter().fold(0.0f64, |m, &v| m.max(v.abs())))
}

/// Extreme nontrivial eigenvalues via the deflated iterative path.
pub fn lambda_extremes_iterative(
    graph: &CayleyGraph,
    opts: &SpectraOpts,
) -> Result<SpectralReport> {
    let start = Instant::now();
    let trivial_pairs = trivial_eigendata(graph);
    let deflate: Vec<Vec<f64>> = trivial_pairs.iter().map(|t| t.vector.clone()).collect();
    let mv = |x: &[f64], y: &mut [f64]| graph.matvec_normalized(x, y);
    let extremes = lanczos::extreme_eigs(graph.n, &mv, &deflate, &opts.iterative)?;
    let trivial: Vec<(f64, usize)> = {
        let mut summary: Vec<(f64, usize)> = Vec::new();
        for t in &trivial_pairs {
            match summary
                .iter_mut()
                .find(|(v, _)| (*v - t.value).abs() <= opts.eig_tol)
            {
                Some((_, m)) => *m += 1,
                None => summary.push((t.value, 1)),
            }
        }
        summary
    };
    let lambda_x = extremes.lambda_high.abs().max(extremes.lambda_low.abs());
    Ok(SpectralReport {
        n: graph.n,
        k: graph.k,
        method: SolveMethod::Iterative,
        lambda_second: extremes.lambda_high,
        lambda_min: extremes.lambda_low,
        lambda_x,
        trivial,
        checkable: vec![extremes.lambda_high, extremes.lambda_low],
        spectrum: None,
        eig_tol: opts.eig_tol,
        residual: Some(extremes.residual_high.max(extremes.residual_low)),
        runtime_ms: start.elapsed().as_millis(),
    })
}

/// Dense path when it fits, iterative otherwise.
pub fn analyze(graph: &CayleyGraph, opts: &SpectraOpts) -> Result<SpectralReport> {
    if graph.n <= opts.dense_cap {
        full_spectrum_dense(graph, opts)
    } else {
        lambda_extremes_iterative(graph, opts)
    }
}

/// The Ramanujan bound 2 sqrt(q) / (q + 1) for (q+1)-regular graphs.
pub fn ramanujan_bound(q: u64) -> f64 {
    2.0 * (q as f64).sqrt() / (q as f64 + 1.0)
}

/// The general-dimension bound d q^((d-1)/2) / ((q^d - 1)/(q - 1)).
pub fn general_bound(q: u64, d: usize) -> f64 {
    let m = (q.pow(d as u32) - 1) / (q - 1);
    d as f64 * (q as f64).powf((d as f64 - 1.0) / 2.0) / m as f64
}

/// The set E_d = {cos(2 pi j / d)}, deduplicated, descending.
pub fn trivial_eigs(d: usize) -> Vec<f64> {
    let mut vals: Vec<f64> = (0..d)
        .map(|j| (2.0 * std::f64::consts::PI * j as f64 / d as f64).cos())
        .collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    vals.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    vals
}

/// Check every eigenvalue in `report.checkable` against `bound` (+tol), with
/// an optional escape set of allowed exact values (E_d matching within tol).
/// Returns (all pass, worst offender if any).
pub fn check_within_bound(
    report: &SpectralReport,
    bound: f64,
    escape: Option<&[f64]>,
    tol: f64,
) -> (bool, Option<f64>) {
    let mut worst: Option<f64> = None;
    for &v in &report.checkable {
        let ok_bound = v.abs() <= bound + tol;
        let ok_escape = escape
            .map(|es| es.iter().any(|&e| (v - e).abs() <= tol))
            .unwrap_or(false);
        if !(ok_bound || ok_escape) {
            match worst {
                Some(w) if w.abs() >= v.abs() => {}
                _ => worst = Some(v),
            }
        }
    }
    (worst.is_none(), worst)
}

/// Exact vertex expansion from the definition: min over nonempty A with
/// |A| <= n/2 of |boundary(A)| / |A|, with a minimizing witness set.
pub fn vertex_expansion_bruteforce(graph: &CayleyGraph) -> Result<(f64, Vec<u32>)> {
    let n = graph.n;
    if n > 24 {
        return Err(Error::ExpansionCapExceeded { n, cap: 24 });
    }
    let nbr_mask: Vec<u32> = (0..n)
        .map(|v| {
            let mut m = 0u32;
            for &w in graph.row(v) {
                m |= 1 << w;
            }
            m
        })
        .collect();
    let half = n / 2;
    let mut best = f64::INFINITY;
    let mut witness = 0u32;
    for a in 1u32..(1u32 << n) {
        let size = a.count_ones() as usize;
        if size > half {
            continue;
        }
        let mut reach = 0u32;
        let mut bits = a;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            reach |= nbr_mask[v];
        }
        let boundary = (reach & !a).count_ones();
        let ratio = boundary as f64 / size as f64;
        if ratio < best {
            best = ratio;
            witness = a;
            if best == 0.0 {
                break;
            }
        }
    }
    let set: Vec<u32> = (0..n as u32).filter(|&v| witness & (1 << v) != 0).collect();
    Ok((best, set))
}

/// Exact normalized edge expansion: min over nonempty A with |A| <= n/2 of
/// |E(A, complement)| / (k |A|), counting edge multiplicities.
pub fn edge_expansion_bruteforce(graph: &CayleyGraph) -> Result<(f64, Vec<u32>)> {
    let n = graph.n;
    if n > 24 {
        return Err(Error::ExpansionCapExceeded { n, cap: 24 });
    }
    let half = n / 2;
    let k = graph.k as f64;
    let mut best = f64::INFINITY;
    let mut witness = 0u32;
    for a in 1u32..(1u32 << n) {
        let size = a.count_ones() as usize;
        if size > half {
            continue;
        }
        let mut cut = 0usize;
        let mut bits = a;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            for &w in graph.row(v) {
                if a & (1 << w) == 0 {
                    cut += 1;
                }
            }
        }
        let ratio = cut as f64 / (k * size as f64);
        if ratio < best {
            best = ratio;
            witness = a;
        }
    }
    let set: Vec<u32> = (0..n as u32).filter(|&v| witness & (1 << v) != 0).collect();
    Ok((best, set))
}

/// The Cheeger sandwich on normalized edge expansion:
/// (1 - lambda_2)/2 <= h <= sqrt(2 (1 - lambda_2)).
pub fn cheeger_bounds(lambda_second: f64) -> (f64, f64) {
    let gap = (1.0 - lambda_second).max(0.0);
    (gap / 2.0, (2.0 * gap).sqrt())
}

/// Total-variation distance to uniform of the lazy random walk
/// ((I + Delta)/2)^t started at vertex 0.
pub fn mixing_tv(graph: &CayleyGraph, t: usize) -> f64 {
    let n = graph.n;
    let mut p = vec![0.0; n];
    p[0] = 1.0;
    let mut q = vec![0.0; n];
    for _ in 0..t {
        graph.matvec_normalized(&p, &mut q);
        for i in 0..n {
            p[i] = 0.5 * (p[i] + q[i]);
        }
    }
    let uniform = 1.0 / n as f64;
    0.5 * p.iter().map(|&x| (x - uniform).abs()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::FieldDesc;
    use crate::matgrp::proj_canonical;

    fn proj(field: &FieldDesc, rows: &[i64]) -> ProjMatrix {
        proj_canonical(&Mat::from_int_rows(field, 2, rows).unwrap()).unwrap()
    }

    /// 5-cycle as the Cayley graph of the unipotent cyclic group of order 5.
    fn five_cycle() -> CayleyGraph {
        let f = FieldDesc::prime(5).unwrap();
        let a = proj(&f, &[1, 1, 0, 1]);
        let g = Arc::new(GroupEnum::generate(&[a.clone()], 100).unwrap());
        cayley_graph(&g, &[a]).unwrap()
    }

    fn psl2_graph(p: u64) -> CayleyGraph {
        let f = FieldDesc::prime(p).unwrap();
        let a = proj(&f, &[1, 1, 0, 1]);
        let b = proj(&f, &[0, 1, -1, 0]);
        let g = Arc::new(GroupEnum::generate(&[a.clone(), b.clone()], 100_000).unwrap());
        cayley_graph(&g, &[a, b]).unwrap()
    }

    #[test]
    fn five_cycle_shape_and_spectrum() {
        let g = five_cycle();
        assert_eq!(g.n(), 5);
        assert_eq!(g.k(), 2);
        assert!(g.is_connected());
        let report = full_spectrum_dense(&g, &SpectraOpts::default()).unwrap();
        let spec = report.spectrum.as_ref().unwrap();
        let mut expected: Vec<f64> = (0..5)
            .map(|j| (2.0 * std::f64::consts::PI * j as f64 / 5.0).cos())
            .collect();
        expected.sort_by(|a, b| b.total_cmp(a));
        for (v, e) in spec.iter().zip(&expected) {
            assert!((v - e).abs() < 1e-10);
        }
    }

    #[test]
    fn selberg_graph_is_3_regular() {
        // B has projective order 2, so S ∪ S^{-1} = {A, A^{-1}, B}
        let g = psl2_graph(3);
        assert_eq!(g.n(), 12);
        assert_eq!(g.k(), 3);
        assert!(g.is_connected());
    }

    #[test]
    fn trivial_eigendata_psl_is_constant_only() {
        let g = psl2_graph(5);
        let t = trivial_eigendata(&g);
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].value, 1.0);
    }

    #[test]
    fn six_cycle_trivials_include_sign() {
        // 6-cycle: unipotent group of order 7 is odd, so build from rows
        let n = 6;
        let mut rows = Vec::new();
        for i in 0..n as u32 {
            let mut r = vec![(i + 1) % 6, (i + 5) % 6];
            r.sort_unstable();
            rows.extend(r);
        }
        let g = from_rows(n, 2, rows).unwrap();
        let t = trivial_eigendata(&g);
        assert_eq!(t.len(), 2);
        assert_eq!(t[0].value, 1.0);
        assert_eq!(t[1].value, -1.0);
        // K4 from rows: not bipartite, only the constant
        let k4_rows: Vec<u32> = (0..4u32)
            .flat_map(|i| (0..4u32).filter(move |&j| j != i))
            .collect();
        let k4 = from_rows(4, 3, k4_rows).unwrap();
        let t4 = trivial_eigendata(&k4);
        assert_eq!(t4.len(), 1);
        // and its lambda(X) is 1/3
        let report = full_spectrum_dense(&k4, &SpectraOpts::default()).unwrap();
        assert!((report.lambda_x - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn from_rows_validation() {
        // wrong row count
        assert!(from_rows(4, 3, vec![0; 11]).is_err());
        // asymmetric: 0 -> 1 but 1 -> 2 (never back to 0)
        let bad = vec![1, 1, 2, 2, 0, 0];
        assert!(from_rows(3, 2, bad).is_err());
        // disconnected but valid: two disjoint edges, 1-regular
        let ok = from_rows(4, 1, vec![1, 0, 3, 2]).unwrap();
        assert!(!ok.is_connected());
    }

    #[test]
    fn cayley_graph_rejects_non_generating_sets() {
        // <A> is a proper subgroup of PSL_2(5); building the graph of the
        // whole group over {A} must fail with the reached count
        let f = FieldDesc::prime(5).unwrap();
        let a = proj(&f, &[1, 1, 0, 1]);
        let b = proj(&f, &[0, 1, -1, 0]);
        let group = Arc::new(GroupEnum::generate(&[a.clone(), b], 1000).unwrap());
        match cayley_graph(&group, std::slice::from_ref(&a)) {
            Err(Error::DoesNotGenerate { reached, total }) => {
                assert_eq!(total, 60);
                assert_eq!(reached, 5);
            }
            other => panic!("expected DoesNotGenerate, got {other:?}"),
        }
        // two listed generators mapping to the same class are flagged
        let dup = cayley_graph(&group, &[a.clone(), a.clone()]);
        assert!(matches!(dup, Err(Error::GraphInvariant(_))));
    }

    #[test]
    fn expansion_cap_is_enforced() {
        let g = psl2_graph(5); // 60 vertices > 24
        assert!(matches!(
            vertex_expansion_bruteforce(&g),
            Err(Error::ExpansionCapExceeded { .. })
        ));
        assert!(matches!(
            edge_expansion_bruteforce(&g),
            Err(Error::ExpansionCapExceeded { .. })
        ));
    }

    #[test]
    fn dense_iterative_agreement_psl2_7() {
        let g = psl2_graph(7); // n = 168
        let dense = full_spectrum_dense(&g, &SpectraOpts::default()).unwrap();
        let iter = lambda_extremes_iterative(&g, &SpectraOpts::default()).unwrap();
        assert!(
            (dense.checkable[0] - iter.lambda_second).abs() < 1e-8,
            "dense top nontrivial {} vs iterative {}",
            dense.checkable[0],
            iter.lambda_second
        );
        let dense_min = dense
            .checkable
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        assert!((dense_min - iter.lambda_min).abs() < 1e-8);
    }

    #[test]
    fn expansion_k4_and_cycles() {
        // K4: boundary of any pair is the other pair
        let k4_rows: Vec<u32> = (0..4u32)
            .flat_map(|i| (0..4u32).filter(move |&j| j != i))
            .collect();
        let k4 = from_rows(4, 3, k4_rows).unwrap();
        let (eps, _) = vertex_expansion_bruteforce(&k4).unwrap();
        assert_eq!(eps, 1.0);

        // 6-cycle: worst set is 3 consecutive vertices, epsilon = 2/3
        let mut rows = Vec::new();
        for i in 0..6u32 {
            let mut r = vec![(i + 1) % 6, (i + 5) % 6];
            r.sort_unstable();
            rows.extend(r);
        }
        let c6 = from_rows(6, 2, rows).unwrap();
        let (eps6, witness) = vertex_expansion_bruteforce(&c6).unwrap();
        assert!((eps6 - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(witness.len(), 3);

        // edge expansion of the 6-cycle is 1/3; Cheeger sandwich at
        // lambda_2 = 1/2 gives [0.25, 1.0]
        let (h, _) = edge_expansion_bruteforce(&c6).unwrap();
        assert!((h - 1.0 / 3.0).abs() < 1e-12);
        let (lo, hi) = cheeger_bounds(0.5);
        assert!((lo - 0.25).abs() < 1e-15 && (hi - 1.0).abs() < 1e-15);
        assert!(lo <= h && h <= hi);

        // disconnected graph has expansion 0
        let disc = from_rows(4, 1, vec![1, 0, 3, 2]).unwrap();
        let (eps0, _) = vertex_expansion_bruteforce(&disc).unwrap();
        assert_eq!(eps0, 0.0);
    }

    #[test]
    fn cheeger_edge_cases() {
        assert_eq!(cheeger_bounds(1.0), (0.0, 0.0));
        let (lo, hi) = cheeger_bounds(0.5);
        assert!((lo - 0.25).abs() < 1e-15);
        assert!((hi - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mixing_basics() {
        let g = five_cycle();
        // t = 0: TV = 1 - 1/n
        assert!((mixing_tv(&g, 0) - (1.0 - 0.2)).abs() < 1e-15);
        // lazy walk mixes monotonically toward 0
        let mut prev = f64::INFINITY;
        for t in [1, 2, 4, 8, 16, 32] {
            let tv = mixing_tv(&g, t);
            assert!(tv <= prev + 1e-15);
            prev = tv;
        }
        assert!(prev < 1e-3);
    }

    #[test]
    fn mixing_rate_bounded_by_lambda() {
        let g = psl2_graph(5);
        let report = full_spectrum_dense(&g, &SpectraOpts::default()).unwrap();
        let lam = report.lambda_x;
        let n = g.n() as f64;
        for t in [5usize, 10, 20] {
            let tv = mixing_tv(&g, t);
            let bound = n.sqrt() * ((1.0 + lam) / 2.0).powi(t as i32);
            assert!(tv <= bound + 1e-12, "t={t}: {tv} > {bound}");
        }
    }

    #[test]
    fn spectrum_trace_is_zero_without_identity_generator() {
        let g = psl2_graph(5);
        let report = full_spectrum_dense(&g, &SpectraOpts::default()).unwrap();
        let sum: f64 = report.spectrum.as_ref().unwrap().iter().sum();
        assert!(sum.abs() < 1e-6 * g.n() as f64);
    }

    #[test]
    fn bipartite_spectrum_symmetry() {
        // 8-cycle from rows: bipartite, spectrum closed under negation
        let mut rows = Vec::new();
        for i in 0..8u32 {
            let mut r = vec![(i + 1) % 8, (i + 7) % 8];
            r.sort_unstable();
            rows.extend(r);
        }
        let c8 = from_rows(8, 2, rows).unwrap();
        let report = full_spectrum_dense(&c8, &SpectraOpts::default()).unwrap();
        let spec = report.spectrum.as_ref().unwrap();
        for &v in spec.iter() {
            assert!(
                spec.iter().any(|&w| (w + v).abs() < 1e-9),
                "no mirror for {v}"
            );
        }
    }

    #[test]
    fn e_d_sets() {
        assert_eq!(trivial_eigs(2), vec![1.0, -1.0]);
        let e3 = trivial_eigs(3);
        assert_eq!(e3.len(), 2);
        assert!((e3[0] - 1.0).abs() < 1e-15 && (e3[1] + 0.5).abs() < 1e-12);
        let e4 = trivial_eigs(4);
        assert_eq!(e4.len(), 3);
        assert!((e4[1]).abs() < 1e-12);
    }

    #[test]
    fn bounds_formulas() {
        assert!((ramanujan_bound(5) - 0.7453559924999299).abs() < 1e-12);
        assert!((general_bound(2, 3) - 6.0 / 7.0).abs() < 1e-12);
        // d = 2 general bound reduces to the Ramanujan bound
        assert!((general_bound(5, 2) - ramanujan_bound(5)).abs() < 1e-12);
    }

    #[test]
    fn lambda_nontrivial_removal_and_missing_error() {
        let one = TrivialEig {
            value: 1.0,
            vector: vec![],
        };
        let minus_one = TrivialEig {
            value: -1.0,
            vector: vec![],
        };
        // K4 spectrum: only 1 is trivial, lambda(X) = 1/3
        let k4 = [1.0, -1.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0];
        let lam = lambda_nontrivial(&k4, std::slice::from_ref(&one), 1e-8).unwrap();
        assert!((lam - 1.0 / 3.0).abs() < 1e-15);
        // bipartite: both 1 and -1 removed once
        let c4 = [1.0, 0.0, 0.0, -1.0];
        let lam2 = lambda_nontrivial(&c4, &[one.clone(), minus_one.clone()], 1e-8).unwrap();
        assert_eq!(lam2, 0.0);
        // a predicted trivial eigenvalue that is absent is an error
        let err = lambda_nontrivial(&k4, &[one, minus_one], 1e-8);
        assert!(matches!(
            err,
            Err(crate::error::Error::MissingTrivialEigenvalue { .. })
        ));
    }
}
