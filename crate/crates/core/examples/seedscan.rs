//! Scan seeds for the quotient classification each ideal choice produces.

use expander_core::lsv::AlgebraSpec;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let q: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    let d: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(2);
    let e: usize = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(3);
    for seed in 0..16u64 {
        match AlgebraSpec::build(q, d, e, seed) {
            Ok(spec) => match spec.gen_b() {
                Ok(b) => {
                    // d = 2: all of S shares C's determinant class, so S lies
                    // in PSL iff det(C) is a square
                    println!(
                        "seed {seed}: det(C) square = {} -> expect {}",
                        b.det_square_class(),
                        if b.det_square_class() { "PSL" } else { "PGL" }
                    );
                }
                Err(e) => println!("seed {seed}: b degenerate: {e}"),
            },
            Err(e) => println!("seed {seed}: {e}"),
        }
    }
}
