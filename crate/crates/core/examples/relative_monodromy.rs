//! Relative monodromy filtrations, checked against exhaustive search.

use alblab::hodge::{relative_monodromy_filtration, rmf_oracle, verify_relative_monodromy, LambdaData, NilpotentEndo};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let n = NilpotentEndo::from_ints(1, 0, 0).matrix::<BigRational>();
    let w = LambdaData::weight_filtration();
    let m = relative_monodromy_filtration(&n, &w).unwrap().unwrap();
    println!("lattice example: M jumps at {:?} (W jumps at {:?})", m.jumps(), w.jumps());

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut exists, mut missing) = (0, 0);
    for _ in 0..50 {
        let dim = rng.gen_range(1..=4);
        let inst = rmf_oracle::random_instance(&mut rng, dim, 0.3);
        let found = rmf_oracle::brute_force(&inst);
        match relative_monodromy_filtration(&inst.n, &inst.w).unwrap() {
            Some(m) => {
                assert!(verify_relative_monodromy(&inst.n, &inst.w, &m).ok());
                assert_eq!(found, vec![m]);
                exists += 1;
            }
            None => {
                assert!(found.is_empty());
                missing += 1;
            }
        }
    }
    println!("50 random instances: {exists} with M, {missing} without; all match the search");
}
