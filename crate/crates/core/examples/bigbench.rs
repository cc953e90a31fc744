//! Scratch timing harness for the large instances.

use std::sync::Arc;
use std::time::Instant;

use expander_core::lsv::{gens_s, AlgebraSpec};
use expander_core::matgrp::{classify_quotient, GroupEnum};
use expander_core::spectra::{analyze, ramanujan_bound, SpectraOpts};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let q: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    let d: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(2);
    let e: usize = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(3);
    let seed: u64 = args.get(4).and_then(|s| s.parse().ok()).unwrap_or(1);

    let t0 = Instant::now();
    let spec = AlgebraSpec::build(q, d, e, seed).unwrap();
    println!("spec built in {:?}", t0.elapsed());

    let t1 = Instant::now();
    let s = gens_s(&spec).unwrap();
    println!("S built in {:?} (|S| = {})", t1.elapsed(), s.elements.len());

    let t2 = Instant::now();
    let group = Arc::new(GroupEnum::generate(&s.elements, 3_000_000).unwrap());
    println!(
        "group enumerated in {:?} (n = {}, complete = {})",
        t2.elapsed(),
        group.len(),
        group.is_complete()
    );
    if d == 2 {
        println!(
            "classification: {:?}",
            classify_quotient(&group, spec.ell())
        );
    }

    let t3 = Instant::now();
    let graph = expander_core::spectra::cayley_graph(&group, &s.elements).unwrap();
    println!(
        "graph built in {:?} (n = {}, k = {})",
        t3.elapsed(),
        graph.n(),
        graph.k()
    );

    let t4 = Instant::now();
    let report = analyze(&graph, &SpectraOpts::default()).unwrap();
    println!(
        "spectra in {:?}: method {:?}, lambda2 = {:.12}, lambda_min = {:.12}, lambda_x = {:.12}, residual = {:?}",
        t4.elapsed(),
        report.method,
        report.lambda_second,
        report.lambda_min,
        report.lambda_x,
        report.residual
    );
    println!(
        "ramanujan bound 2*sqrt(q)/(q+1) = {:.12} -> within: {}",
        ramanujan_bound(q),
        report.lambda_x <= ramanujan_bound(q) + 1e-8
    );
    println!("total {:?}", t0.elapsed());
}
