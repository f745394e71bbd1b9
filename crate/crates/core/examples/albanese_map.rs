//! The level-2 Albanese map in both coordinate systems.

use alblab::albanese::{albanese_point, albanese_point_alt};
use alblab::malcev::GroupWord;
use alblab::paths::QuadratureConfig;
use num_complex::Complex64;

fn main() {
    let cfg = QuadratureConfig::default();
    for x in [Complex64::new(0.5, 0.0), Complex64::new(-0.7, 0.4), Complex64::new(2.0, -1.0)] {
        for w in ["", "0", "1 0^-1"] {
            let word: GroupWord = w.parse().unwrap();
            let p = albanese_point(x, &word, &cfg).unwrap();
            let alt = albanese_point_alt(x, &word, &cfg).unwrap();
            println!(
                "x = {x:.2}, loop {w:>7}: reduced α {:.6}, β {:.6}, λ {:.6} | alternative λ {:.6}",
                p.reduced.alpha, p.reduced.beta, p.reduced.lambda, alt.reduced.lambda
            );
        }
    }
}
