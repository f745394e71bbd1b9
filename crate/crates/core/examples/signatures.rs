//! Truncated signatures: Chen's identity, shuffle relations and loops.

use alblab::paths::{compose_signatures, gamma0, gamma1, random_interior_path, signature, QuadratureConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let cfg = QuadratureConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let path = random_interior_path(&mut rng, 4, 0.1);
    let s = signature(&path, 4, &cfg).unwrap();
    println!("shuffle defect at level 4: {:.2e}", s.shuffle_defect(4));

    let (head, tail) = path.split_at(1, 0.4).unwrap();
    let joined = compose_signatures(&signature(&head, 4, &cfg).unwrap(), &signature(&tail, 4, &cfg).unwrap()).unwrap();
    println!("Chen identity defect: {:.2e}", s.max_diff(&joined));

    for (name, l) in [("gamma0", gamma0(1)), ("gamma1", gamma1(1))] {
        let s = signature(&l, 2, &cfg).unwrap();
        println!("{name}: {}", serde_json::to_string(&s).unwrap());
    }
}
