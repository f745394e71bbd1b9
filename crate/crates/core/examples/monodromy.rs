//! Integer monodromy of the period matrix along loops at the base point.

use alblab::albanese::{monodromy_action, monodromy_action_alt};
use alblab::malcev::GroupWord;
use alblab::paths::QuadratureConfig;

fn main() {
    let cfg = QuadratureConfig::default();
    for w in ["0", "1", "0 1", "0 1 0^-1 1^-1", "1^2 0^-1"] {
        let word: GroupWord = w.parse().unwrap();
        let m = monodromy_action(&word, &cfg).unwrap();
        let alt = monodromy_action_alt(&word, &cfg).unwrap();
        println!(
            "{w:>14}: (a, b, c) = ({}, {}, {}), off-integer {:.1e}; alternative ({}, {}, {})",
            m.g.a, m.g.b, m.g.c, m.max_deviation, alt.g.a, alt.g.b, alt.g.c
        );
    }
}
