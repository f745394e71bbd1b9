//! The nilpotent-orbit criterion on the rank-3 lattice, decided exactly.

use alblab::hodge::{gaussian, generates_nilpotent_orbit, griffiths_transversal, hodge_filtration_from, NilpotentEndo};
use num_rational::BigRational;

fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(p.into(), d.into())
}

fn main() {
    let real = |x: BigRational| gaussian(x, q(0, 1));
    let (alpha, beta) = (q(1, 3), q(-2, 5));
    let f = hodge_filtration_from(real(alpha.clone()), real(beta.clone()), real(q(7, 2)));
    for (a, b) in [(1, 1), (1, 0), (0, 2)] {
        let on = &q(a, 1) * &beta - &q(b, 1) * &alpha;
        for c in [on.clone(), &on + q(1, 1)] {
            let n = NilpotentEndo::new(q(a, 1), q(b, 1), c.clone());
            let v = generates_nilpotent_orbit(&n, &f).unwrap();
            println!(
                "N = ({a}, {b}, {c}): generates {}, transversal {}, {}",
                v.generates,
                griffiths_transversal(&n, &f),
                v.reason
            );
        }
    }
}
