//! Machine-readable outputs: canonical JSON (fixed key order from struct
//! declaration, floats printed with 17 significant digits so equal runs are
//! byte-identical), the plain-text edge-list format, and the run
//! configuration embedded in every artifact.

use std::io::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectra::{from_rows, CayleyGraph};

/// Everything a run needs to be reproduced, embedded in each output file.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    pub seed: u64,
    pub cap: usize,
    pub dense_cap: usize,
    pub tol: f64,
}

/// Wrapper giving every artifact the same self-describing envelope.
#[derive(Serialize, Deserialize)]
pub struct Artifact<T> {
    pub tool_version: String,
    pub config: RunConfig,
    pub payload: T,
}

impl<T> Artifact<T> {
    pub fn new(config: RunConfig, payload: T) -> Artifact<T> {
        Artifact {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            payload,
        }
    }
}

struct SigDigitFormatter;

impl serde_json::ser::Formatter for SigDigitFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        if !value.is_finite() {
            return Err(std::io::Error::new(
                std::io::ErrorKind::InvalidData,
                "non-finite float in JSON output",
            ));
        }
        // 17 significant digits round-trip every f64 exactly
        write!(writer, "{:.16e}", value)
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        self.write_f64(writer, value as f64)
    }
}

/// Serialize with fixed float formatting; equal inputs give equal bytes.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigitFormatter);
    value.serialize(&mut ser)?;
    String::from_utf8(out).map_err(|e| Error::Internal(format!("non-utf8 json: {e}")))
}

/// Edge-list text format: header line "# n k", then one "u v" line per
/// undirected edge (u < v), ascending, repeated per multiplicity.
pub fn write_edge_list(graph: &CayleyGraph) -> String {
    let mut out = String::new();
    out.push_str(&format!("# {} {}\n", graph.n(), graph.k()));
    for (u, v, mult) in graph.edge_list() {
        for _ in 0..mult {
            out.push_str(&format!("{u} {v}\n"));
        }
    }
    out
}

/// Parse the edge-list format back into a validated graph.
pub fn read_edge_list(text: &str) -> Result<CayleyGraph> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty edge list".into()))?;
    let mut parts = header
        .strip_prefix('#')
        .ok_or_else(|| Error::Parse("edge list must start with '# n k'".into()))?
        .split_whitespace();
    let n: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse("bad n in header".into()))?;
    let k: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse("bad k in header".into()))?;
    let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (lineno, line) in lines.enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let u: usize = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad edge at line {}", lineno + 2)))?;
        let v: usize = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad edge at line {}", lineno + 2)))?;
        if u >= n || v >= n {
            return Err(Error::Parse(format!(
                "vertex out of range at line {}",
                lineno + 2
            )));
        }
        if u == v {
            adjacency[u].push(u as u32);
            adjacency[u].push(u as u32);
        } else {
            adjacency[u].push(v as u32);
            adjacency[v].push(u as u32);
        }
    }
    let mut rows = Vec::with_capacity(n * k);
    for (v, mut row) in adjacency.into_iter().enumerate() {
        if row.len() != k {
            return Err(Error::GraphInvariant(format!(
                "regularity violated: vertex {v} has degree {} (expected {k})",
                row.len()
            )));
        }
        row.sort_unstable();
        rows.extend(row);
    }
    from_rows(n, k, rows)
}

/// Spectrum as CSV for plotting: "index,eigenvalue", descending. Only the
/// dense path carries a full spectrum.
pub fn spectrum_csv(report: &crate::spectra::SpectralReport) -> Option<String> {
    let spectrum = report.spectrum.as_ref()?;
    let mut out = String::from("index,eigenvalue\n");
    for (i, v) in spectrum.iter().enumerate() {
        out.push_str(&format!("{i},{v:.16e}\n"));
    }
    Some(out)
}

/// Write a string atomically enough for our purposes.
pub fn write_file(path: &std::path::Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let mut f = std::fs::File::create(path)?;
    f.write_all(contents.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::ff::FieldDesc;
    use crate::matgrp::{proj_canonical, GroupEnum, Mat};
    use crate::spectra::cayley_graph;

    #[test]
    fn canonical_json_float_digits() {
        #[derive(Serialize)]
        struct S {
            x: f64,
            n: u32,
        }
        let json = to_canonical_json(&S {
            x: 0.7453559924999299,
            n: 7,
        })
        .unwrap();
        assert_eq!(json, r#"{"x":7.4535599249992990e-1,"n":7}"#);
        // byte-identical across calls
        assert_eq!(
            json,
            to_canonical_json(&S {
                x: 0.7453559924999299,
                n: 7
            })
            .unwrap()
        );
    }

    #[test]
    fn edge_list_roundtrip() {
        let f = FieldDesc::prime(5).unwrap();
        let a = proj_canonical(&Mat::from_int_rows(&f, 2, &[1, 1, 0, 1]).unwrap()).unwrap();
        let b = proj_canonical(&Mat::from_int_rows(&f, 2, &[0, 1, -1, 0]).unwrap()).unwrap();
        let group = Arc::new(GroupEnum::generate(&[a.clone(), b.clone()], 1000).unwrap());
        let graph = cayley_graph(&group, &[a, b]).unwrap();
        let text = write_edge_list(&graph);
        // n*k/2 edge lines plus the header
        assert_eq!(text.lines().count(), 1 + graph.n() * graph.k() / 2);
        let back = read_edge_list(&text).unwrap();
        assert_eq!(back.n(), graph.n());
        assert_eq!(back.k(), graph.k());
        assert_eq!(back.rows(), graph.rows());
        assert!(back.is_connected());
    }

    #[test]
    fn edge_list_detects_broken_regularity() {
        let text = "# 4 1\n0 1\n2 3\n1 2\n";
        match read_edge_list(text) {
            Err(Error::GraphInvariant(msg)) => assert!(msg.contains("regularity")),
            other => panic!("expected regularity error, got {other:?}"),
        }
    }
}
